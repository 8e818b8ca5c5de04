"""Command line interface: subcommands, exit codes, output contracts."""

import pytest

from cutpoly.cli import main, EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_RESOURCE


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_enum_dd_summary(capsys):
    code, out, _ = run(capsys, "enum", "--graph", "K5", "--method", "dd")
    assert code == EXIT_OK
    assert "facets=56 orbits=2 group_order=1920 method=dd" in out


def test_enum_adm_summary(capsys):
    code, out, _ = run(capsys, "enum", "--graph", "K6", "--method", "adm")
    assert code == EXIT_OK
    assert "facets=368 orbits=3" in out


def test_enum_k5free(capsys):
    code, out, _ = run(capsys, "enum", "--graph", "K2,4",
                       "--method", "k5free")
    assert code == EXIT_OK
    assert "facets=64" in out and "method=k5free" in out


def test_enum_k5free_needs_override(capsys):
    code, _, err = run(capsys, "enum", "--graph", "K6", "--method", "k5free")
    assert code == EXIT_USAGE
    assert "K5 minor" in err


def test_enum_sample(capsys):
    code, out, _ = run(capsys, "enum", "--graph", "K4", "--method", "sample",
                       "--steps", "20", "--seed", "3")
    assert code == EXIT_OK
    assert "classes=1" in out and "incidence 6 visits 20" in out


def test_enum_out_and_checkpoint(tmp_path, capsys):
    rep = tmp_path / "orbits.txt"
    ck = tmp_path / "ck.txt"
    code, out, _ = run(capsys, "enum", "--graph", "K5", "--method", "adm",
                       "--out", str(rep), "--checkpoint", str(ck))
    assert code == EXIT_OK
    assert len(rep.read_text().splitlines()) == 2
    code, out, _ = run(capsys, "enum", "--graph", "K5", "--method", "adm",
                       "--resume", str(ck))
    assert code == EXIT_OK and "facets=56 orbits=2" in out


def test_check_cross(capsys):
    code, out, _ = run(capsys, "check", "--graph", "K4",
                       "--cross", "dd-vs-adm")
    assert code == EXIT_OK and "PASS" in out
    code, out, _ = run(capsys, "check", "--graph", "Cube",
                       "--cross", "k5free-vs-adm")
    assert code == EXIT_OK and "PASS (k5free 200 = adm 200)" in out


def test_check_conjecture(capsys):
    code, out, _ = run(capsys, "check", "--graph", "K5",
                       "--conjecture", "triangle-adjacency")
    assert code == EXIT_OK
    assert out.count("witness") == 2 and out.strip().endswith("PASS")


def test_check_without_task_is_usage_error(capsys):
    code, _, err = run(capsys, "check", "--graph", "K5")
    assert code == EXIT_USAGE


def test_info(capsys):
    code, out, _ = run(capsys, "info", "--graph", "K8")
    assert code == EXIT_OK
    assert "restricted_order 5160960" in out
    assert "aut_order 40320" in out
    code, out, _ = run(capsys, "info", "--graph", "Heawood")
    assert "aut_order 336" in out
    code, out, _ = run(capsys, "info", "--graph", "K1,4,4")
    assert "aut_order 1152" in out


def test_bad_graph_is_usage_error(capsys):
    code, _, err = run(capsys, "enum", "--graph", "Zork", "--method", "dd")
    assert code == EXIT_USAGE and "error" in err


def test_resource_guard_exit(capsys):
    code, _, err = run(capsys, "enum", "--graph", "K6", "--method", "adm",
                       "--caps-orbits", "1")
    assert code == EXIT_RESOURCE and "resource guard" in err


def test_graph_from_file(tmp_path, capsys):
    from cutpoly.graphs import catalog, write_graph
    path = tmp_path / "g.txt"
    write_graph(catalog("K4"), path)
    code, out, _ = run(capsys, "enum", "--graph", f"file:{path}",
                       "--method", "dd")
    assert code == EXIT_OK and "facets=16" in out
