"""Double description, facet certificates, ridges, rotation."""

import pytest

from cutpoly.graphs import catalog, complete_graph
from cutpoly.cutmodel import CutPolytope, metric_generators, k5free_facets
from cutpoly.dualdesc import (RowCone, polytope_cone, polar_extreme_rays,
                              dual_description, is_facet, NotAFacet,
                              ResourceGuard, facet_ridges, adjacent_facet,
                              rotate_to_adjacent, promote_to_facet,
                              first_facet, ridge_graph, graph_diameter)


def cutp(n):
    return RowCone(CutPolytope(complete_graph(n), "polytope").rows)


def cutc(n):
    return RowCone(CutPolytope(complete_graph(n), "cone").rows)


@pytest.mark.parametrize("n,expect", [(3, 4), (4, 16), (5, 56), (6, 368)])
def test_cut_polytope_facet_counts(n, expect):
    assert len(dual_description(cutp(n))) == expect


@pytest.mark.parametrize("n,expect", [(3, 3), (4, 12), (5, 40), (6, 210)])
def test_cut_cone_facet_counts(n, expect):
    assert len(dual_description(cutc(n))) == expect


def test_metric_vertex_counts():
    rows = [q.homogeneous() for q in metric_generators(5, "polytope")]
    assert len(polar_extreme_rays(rows)) == 32
    rows = [tuple(q.a) for q in metric_generators(6, "cone")]
    assert len(polar_extreme_rays(rows)) == 296


def test_polytope_cone_helper():
    cone = polytope_cone([(0, 0), (1, 0), (0, 1)])
    assert cone.d == 3
    assert len(dual_description(cone)) == 3


def test_is_facet_certificates():
    cone = cutp(4)
    facets = dual_description(cone)
    for f in facets:
        cert = is_facet(cone, f.vec)
        assert cert.incidence_mask == f.incidence_mask
        assert cert.incidence_count == 6


def test_is_facet_rejections():
    cone = cutp(5)
    facets = dual_description(cone)
    with pytest.raises(NotAFacet, match="not-valid"):
        is_facet(cone, tuple(-x for x in facets[0].vec))
    # strictly positive functional is valid but never tight
    with pytest.raises(NotAFacet, match="not-supporting"):
        is_facet(cone, (1,) + (0,) * (cone.ambient - 1))
    bad = tuple(a + b for a, b in zip(facets[0].vec, facets[1].vec))
    with pytest.raises(NotAFacet, match="low-rank"):
        is_facet(cone, bad)


def test_promote_to_facet():
    cone = cutp(5)
    facets = {f.vec for f in dual_description(cone)}
    fl = sorted(facets)
    bad = tuple(a + b for a, b in zip(fl[0], fl[1]))
    cert = promote_to_facet(cone, bad)
    assert cert.vec in facets


def test_first_facet():
    for builder in (cutp, cutc):
        cone = builder(5)
        strict = (1,) + (0,) * (cone.ambient - 1) if builder is cutp \
            else (1,) * cone.ambient
        cert = first_facet(cone, strict)
        assert is_facet(cone, cert.vec).incidence_mask == cert.incidence_mask


def test_ridges_and_rotation():
    cone = cutp(5)
    facets = dual_description(cone)
    by_vec = {f.vec: f for f in facets}
    f0 = facets[0]
    ridges = facet_ridges(cone, f0)
    seen = set()
    for rv, rmask in ridges:
        nb = adjacent_facet(cone, f0, rv)
        assert nb.vec in by_vec and nb.vec != f0.vec
        assert rmask == f0.incidence_mask & nb.incidence_mask
        seen.add(nb.vec)
        # rotating back across the shared ridge is an involution
        back_rv = next(rv2 for rv2, rm2 in facet_ridges(cone, nb)
                       if rm2 == rmask)
        assert adjacent_facet(cone, nb, back_rv).vec == f0.vec
    assert len(seen) == len(ridges)


def test_rotation_rejects_non_ridge():
    cone = cutp(4)
    facets = dual_description(cone)
    with pytest.raises(NotAFacet):
        adjacent_facet(cone, facets[0], facets[0].vec)


def test_ridge_graph_cutp4():
    cone = cutp(4)
    facets = dual_description(cone)
    adj, diam = ridge_graph(cone, facets)
    # 6-regular on 16 facets, diameter 2 (cross-checked against the
    # rank-(d-2) adjacency criterion pair by pair)
    assert all(len(a) == 6 for a in adj)
    assert diam == 2
    assert graph_diameter([[1], [0], []]) == -1
    assert graph_diameter([[]]) == 0


def test_generator_equals_dd_on_k5_free():
    for spec in ("Cube", "K2,3"):
        g = catalog(spec)
        p = CutPolytope(g, "polytope")
        dd = {f.vec for f in dual_description(RowCone(p.rows))}
        gen = {tuple(p.row_vector_from_inequality(q))
               for q in k5free_facets(g)}
        assert dd == gen


def test_resource_guards():
    cone = cutp(4)
    with pytest.raises(ResourceGuard):
        dual_description(cone, max_rays=2)
    with pytest.raises(ValueError):
        RowCone([])
