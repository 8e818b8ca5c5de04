"""Command line interface: enumeration runs, cross-validation checks,
group/polytope info, and reference-table reproduction reports.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource
guard exceeded.
"""

import argparse
import sys

from .adm import (AdmConfig, adjacency_decomposition, orbit_records,
                  expand_orbits, sample_facets, check_triangle_adjacency,
                  orbit_report, CanonicalIndex, CheckpointError)
from .cutmodel import (CutPolytope, CutModelError, k5free_facets,
                       metric_generators, restricted_group_order, cut_matrix,
                       evaluate_on_cuts)
from .dualdesc import RowCone, dual_description, polar_extreme_rays, \
    ResourceGuard
from .graphs import catalog, read_graph, automorphism_order, GraphError
from .groups import OrbitCapExceeded

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


def load_graph(spec):
    if spec.startswith("file:"):
        return read_graph(spec[5:])
    return catalog(spec)


def build_config(args):
    return AdmConfig(
        termination=args.termination,
        recursion_threshold=args.recursion_threshold,
        max_depth=args.max_depth,
        seed=args.seed,
        workers=args.workers,
        max_orbits=args.caps_orbits,
        max_incidence=args.caps_incidence,
        checkpoint_path=args.checkpoint,
    )


def _facet_orbit_count(polytope, vec_masks):
    """Number of orbits of a complete list of (facet vec, incidence mask)."""
    index = CanonicalIndex(polytope.symmetry().cut_action)
    return len({index.canonicalize(m) for _, m in vec_masks})


def _incidence_mask(ineq, cmatrix):
    vals = evaluate_on_cuts(ineq, cmatrix)
    mask = 0
    for i in (vals == 0).nonzero()[0]:
        mask |= 1 << int(i)
    return mask


def _summary(n_facets, n_orbits, group_order, method):
    print(f"facets={n_facets} orbits={n_orbits} "
          f"group_order={group_order} method={method}")


def cmd_enum(args):
    g = load_graph(args.graph)
    p = CutPolytope(g, args.mode)
    group_order = p.symmetry().cut_action.order()
    cfg = build_config(args)
    if args.method == "adm":
        state = adjacency_decomposition(p, cfg, resume_from=args.resume)
        if args.out:
            orbit_report(state, args.out)
        if args.checkpoint:
            from .adm import checkpoint
            checkpoint(state, args.checkpoint)
        _summary(state.facet_total(), len(state.records), group_order, "adm")
        return EXIT_OK
    if args.method == "dd":
        cone = RowCone(p.rows)
        facets = dual_description(cone, max_rays=cfg.max_rays)
        norb = _facet_orbit_count(p, [(f.vec, f.incidence_mask)
                                      for f in facets])
        if args.out:
            with open(args.out, "w") as fh:
                for f in sorted(facets, key=lambda f: f.vec):
                    fh.write(" ".join(str(c) for c in f.vec) + "\n")
        _summary(len(facets), norb, group_order, "dd")
        return EXIT_OK
    if args.method == "k5free":
        facets = k5free_facets(g, override=args.override_k5)
        norb = "-"
        if g.n <= 13 and len(facets) <= 50000:
            cm = cut_matrix(g)
            norb = _facet_orbit_count(
                p, [(None, _incidence_mask(q, cm)) for q in facets])
        if args.out:
            with open(args.out, "w") as fh:
                for q in sorted(facets, key=lambda q: q.homogeneous()):
                    fh.write(" ".join(str(c) for c in q.homogeneous()) + "\n")
        _summary(len(facets), norb, group_order, "k5free")
        return EXIT_OK
    if args.method == "sample":
        cfg.sample_steps = args.steps
        hist, reps = sample_facets(p, cfg)
        for inc in sorted(hist):
            print(f"incidence {inc} visits {hist[inc]}")
        print(f"classes={len(hist)} steps={args.steps} seed={args.seed} "
              f"method=sample")
        return EXIT_OK
    raise AssertionError(args.method)


def cmd_check(args):
    g = load_graph(args.graph)
    p = CutPolytope(g, args.mode)
    cfg = build_config(args)
    if args.cross:
        state = adjacency_decomposition(p, cfg)
        adm_vecs = {f.vec for f in expand_orbits(state)}
        if args.cross == "dd-vs-adm":
            cone = RowCone(p.rows)
            other = {f.vec for f in dual_description(cone,
                                                     max_rays=cfg.max_rays)}
            label = "dd"
        else:
            other = {tuple(p.row_vector_from_inequality(q))
                     for q in k5free_facets(g, override=args.override_k5)}
            label = "k5free"
        if adm_vecs == other:
            print(f"PASS ({label} {len(other)} = adm {len(adm_vecs)})")
            return EXIT_OK
        print(f"FAIL ({label} {len(other)} vs adm {len(adm_vecs)})")
        for v in sorted(other - adm_vecs)[:5]:
            print(f"  only-{label}: {' '.join(map(str, v))}")
        for v in sorted(adm_vecs - other)[:5]:
            print(f"  only-adm: {' '.join(map(str, v))}")
        return EXIT_VERIFY
    if args.conjecture == "triangle-adjacency":
        state = adjacency_decomposition(p, cfg)
        ok, witnesses = check_triangle_adjacency(p, state, cfg)
        for key, hit in witnesses:
            verdict = "witness" if hit else "COUNTEREXAMPLE"
            print(f"orbit {','.join(map(str, key))}: {verdict}")
        print("PASS" if ok else "FAIL")
        return EXIT_OK if ok else EXIT_VERIFY
    print("check: nothing to do (use --cross or --conjecture)",
          file=sys.stderr)
    return EXIT_USAGE


def cmd_info(args):
    g = load_graph(args.graph)
    aut = automorphism_order(g)
    print(f"graph {g.name or args.graph}")
    print(f"vertices {g.n}")
    print(f"edges {g.m}")
    print(f"cuts {1 << (g.n - 1)}")
    print(f"aut_order {aut}")
    print(f"restricted_order {restricted_group_order(g)}")
    print(f"dimension {g.m}")
    return EXIT_OK


# reference values for the table command: facet counts (orbit counts) of the
# cut polytope / cut cone of K_n, facet and vertex counts of the metric cone
# and polytope, and facet counts over the graph catalog
TABLE1 = {
    "CUTP_f": {3: 4, 4: 16, 5: 56, 6: 368, 7: 116764, 8: 217093472},
    "CUT_f": {3: 3, 4: 12, 5: 40, 6: 210, 7: 38780, 8: 49604520},
    "MET_f": {3: 3, 4: 12, 5: 30, 6: 60, 7: 105, 8: 168},
    "METP_f": {3: 4, 4: 16, 5: 40, 6: 80, 7: 140, 8: 224},
    "MET_e": {3: 3, 4: 7, 5: 25, 6: 296, 7: 55226, 8: 119269588},
    "METP_e": {3: 4, 4: 8, 5: 32, 6: 554, 7: 275840, 8: 1550825600},
}

# (spec, expected facets, expected orbits or None, method, heavy)
TABLE2 = [
    ("K1,2,2", 24, 2, "adm", False),
    ("K1,2,3", 48, 2, "adm", False),
    ("K1,3,3", 684, 3, "adm", False),
    ("K2,3", 36, None, "k5free", False),
    ("K2,4", 64, None, "k5free", False),
    ("K2,5", 100, None, "k5free", False),
    ("K2,6", 144, None, "k5free", False),
    ("K3,3", 90, None, "k5free", False),
    ("K3,4", 168, None, "k5free", False),
    ("K3,5", 270, None, "k5free", False),
    ("K5-K3", 12, None, "k5free", False),
    ("K6-K4", 16, None, "k5free", False),
    ("K7-K5", 20, None, "k5free", False),
    ("K6-K3", 40, None, "k5free", False),
    ("K7-K4", 52, None, "k5free", False),
    ("Cube", 200, 3, "adm", False),
    ("TruncatedTetrahedron", 540, None, "k5free", False),
    ("APrism6", 2032, None, "k5free", False),
    ("Icosahedron", 1552, None, "k5free", False),
    ("Prism7", 7394, None, "k5free", False),
    ("Cuboctahedron", 1360, None, "k5free", False),
    ("Dodecahedron", 23804, None, "k5free", False),
    ("Petersen", 3614, 4, "adm", True),
    ("K4,4", 27968, 4, "adm", True),
    ("K7-K2", 31400, 17, "adm", True),
]


def _table_row(name, computed, expected, sep):
    if computed is None:
        print(sep.join([name, "-", str(expected), "SKIPPED"]))
        return
    verdict = "PASS" if computed == expected else "FAIL"
    print(sep.join([name, str(computed), str(expected), verdict]))


def cmd_table(args):
    sep = "," if args.format == "csv" else " | "
    print(sep.join(["row", "computed", "expected", "verdict"]))
    if args.which == 1:
        max_n = 7 if args.full else 6
        for n in range(3, 9):
            run = n <= max_n
            val = None
            if run:
                p = CutPolytope(catalog(f"K{n}"), "polytope")
                if n <= 6:
                    val = len(dual_description(RowCone(p.rows)))
                else:
                    val = adjacency_decomposition(p).facet_total()
            _table_row(f"CUTP_{n},f", val, TABLE1["CUTP_f"][n], sep)
        for n in range(3, 9):
            val = None
            if n <= 6:
                p = CutPolytope(catalog(f"K{n}"), "cone")
                val = len(dual_description(RowCone(p.rows)))
            _table_row(f"CUT_{n},f", val, TABLE1["CUT_f"][n], sep)
        for n in range(3, 9):
            _table_row(f"MET_{n},f", len(metric_generators(n, "cone")),
                       TABLE1["MET_f"][n], sep)
            _table_row(f"METP_{n},f", len(metric_generators(n, "polytope")),
                       TABLE1["METP_f"][n], sep)
        for n in range(3, 9):
            for mode, tag in (("cone", "MET"), ("polytope", "METP")):
                val = None
                if n <= 6:
                    ineqs = metric_generators(n, mode)
                    rows = [q.homogeneous() if mode == "polytope"
                            else tuple(q.a) for q in ineqs]
                    val = len(polar_extreme_rays(rows))
                _table_row(f"{tag}_{n},e", val, TABLE1[f"{tag}_e"][n], sep)
        return EXIT_OK
    for spec, exp_f, exp_o, method, heavy in TABLE2:
        if heavy and not args.full:
            _table_row(spec, None, exp_f, sep)
            continue
        g = catalog(spec)
        if method == "adm":
            state = adjacency_decomposition(CutPolytope(g, "polytope"))
            _table_row(spec, state.facet_total(), exp_f, sep)
            if exp_o is not None:
                _table_row(spec + ",orbits", len(state.records), exp_o, sep)
        else:
            _table_row(spec, len(k5free_facets(g, override=True)), exp_f, sep)
    return EXIT_OK


def make_parser():
    ap = argparse.ArgumentParser(
        prog="cutpoly",
        description="Exact facet enumeration for cut polytopes of graphs.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, graph=True):
        if graph:
            p.add_argument("--graph", required=True,
                           help="catalog spec (K6, K1,3,3, Petersen, ...) "
                                "or file:PATH")
        p.add_argument("--mode", choices=["polytope", "cone"],
                       default="polytope")
        p.add_argument("--termination",
                       choices=["exhaustive", "balinski"],
                       default="exhaustive")
        p.add_argument("--recursion-threshold", type=int, default=None)
        p.add_argument("--max-depth", type=int, default=2)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--checkpoint", default=None)
        p.add_argument("--resume", default=None)
        p.add_argument("--out", default=None)
        p.add_argument("--caps-orbits", type=int, default=None)
        p.add_argument("--caps-incidence", type=int, default=None)
        p.add_argument("--override-k5", action="store_true",
                       help="run the k5free generator even if the graph "
                            "has a K5 minor (output incomplete)")

    pe = sub.add_parser("enum", help="enumerate facets")
    common(pe)
    pe.add_argument("--method", choices=["dd", "adm", "k5free", "sample"],
                    default="adm")
    pe.add_argument("--steps", type=int, default=1000,
                    help="walk length for --method sample")
    pe.set_defaults(fn=cmd_enum)

    pc = sub.add_parser("check", help="cross-validation and conjectures")
    common(pc)
    pc.add_argument("--cross", choices=["dd-vs-adm", "k5free-vs-adm"])
    pc.add_argument("--conjecture", choices=["triangle-adjacency"])
    pc.set_defaults(fn=cmd_check)

    pi = sub.add_parser("info", help="graph and group metadata")
    pi.add_argument("--graph", required=True)
    pi.set_defaults(fn=cmd_info)

    pt = sub.add_parser("table", help="reproduce reference tables")
    pt.add_argument("--which", type=int, choices=[1, 2], default=1)
    pt.add_argument("--format", choices=["md", "csv"], default="md")
    pt.add_argument("--full", action="store_true",
                    help="include rows that take minutes or longer")
    pt.set_defaults(fn=cmd_table)
    return ap


def main(argv=None):
    ap = make_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (GraphError, CutModelError, CheckpointError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ResourceGuard, OrbitCapExceeded) as exc:
        print(f"resource guard: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
