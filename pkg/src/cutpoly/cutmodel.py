"""Cut polytope model: cut semimetrics, switching, symmetry, inequality
families, the K5-minor-free facet generator, metric cone/polytope generators
and the covariance map to correlation polytopes.

Coordinates are indexed by the sorted edge list of the graph.  A cut vector
delta_S is the 0/1 edge vector of the cut (S, V-S); the canonical side of a
cut is the side NOT containing vertex 0, encoded as a bitmask over vertices
1..n-1, so cut index 0 is the empty cut.  Inequalities are primitive integer
vectors (a_0, a) meaning a_0 + a.x >= 0.
"""

from dataclasses import dataclass
from fractions import Fraction
import itertools

import numpy as np

from .exactlin import primitive, clear_denominators
from .graphs import Graph, chordless_cycles, edges_in_triangles, has_k5_minor, \
    automorphism_group, automorphism_order
from .groups import PermGroup


class CutModelError(ValueError):
    pass


MAX_CUT_VERTICES = 22


@dataclass(frozen=True)
class CutVector:
    subset_mask: int          # vertices 1..n-1 side (vertex 0 never included)
    coords: tuple             # 0/1 per edge


@dataclass(frozen=True)
class AffineInequality:
    """a0 + a.x >= 0, stored primitive (gcd of all entries is 1)."""
    a0: int
    a: tuple

    @staticmethod
    def make(a0, coeffs):
        vec = primitive((a0,) + tuple(coeffs))
        if all(x == 0 for x in vec):
            raise CutModelError("inequality is identically zero")
        return AffineInequality(vec[0], vec[1:])

    def value(self, x):
        return self.a0 + sum(c * v for c, v in zip(self.a, x, strict=True))

    def homogeneous(self):
        return (self.a0,) + self.a


def cut_coords(g, subset_mask):
    return tuple(((subset_mask >> u) ^ (subset_mask >> v)) & 1
                 for u, v in g.edges)


def enumerate_cuts(g):
    """All 2^(n-1) cut vectors, indexed by the canonical-side bitmask
    (over vertices 1..n-1) read as a binary number; index 0 is delta_empty."""
    if g.n > MAX_CUT_VERTICES:
        raise CutModelError(f"cut enumeration limited to {MAX_CUT_VERTICES} vertices")
    return [CutVector(s << 1, cut_coords(g, s << 1))
            for s in range(1 << (g.n - 1))]


def switch_inequality(ineq, cut):
    """Switch a0 + a.x >= 0 by the cut: flip signs on cut edges, shift a0."""
    coords = cut.coords if isinstance(cut, CutVector) else tuple(cut)
    a0 = ineq.a0 + sum(c for c, f in zip(ineq.a, coords) if f)
    a = tuple(-c if f else c for c, f in zip(ineq.a, coords))
    return AffineInequality.make(a0, a)


# ---------------------------------------------------------------------------
# symmetry
# ---------------------------------------------------------------------------

@dataclass
class SymmetryAction:
    """Compatible pair of actions of the restricted symmetry group:
    cut_action permutes cut indices, generator_specs describe the same
    symmetries on edge coordinates (('perm', edge_perm) for a graph
    automorphism, ('switch', cut_coords) for a switching)."""
    graph: Graph
    cut_action: PermGroup
    generator_specs: list

    def apply_to_inequality(self, spec, ineq):
        kind, data = spec
        if kind == "perm":
            a = [0] * len(ineq.a)
            for e, c in enumerate(ineq.a):
                a[data[e]] = c
            return AffineInequality.make(ineq.a0, a)
        a0 = ineq.a0 + sum(c for c, f in zip(ineq.a, data) if f)
        a = tuple(-c if f else c for c, f in zip(ineq.a, data))
        return AffineInequality.make(a0, a)


def edge_permutation(g, vertex_perm):
    """Index map e -> image edge index under a vertex permutation."""
    out = [0] * g.m
    for i, (u, v) in enumerate(g.edges):
        uu, vv = vertex_perm[u], vertex_perm[v]
        out[i] = g.edge_index[(min(uu, vv), max(uu, vv))]
    return tuple(out)


def _canonical_cut_mask(g, mask):
    if mask & 1:
        mask = ((1 << g.n) - 1) & ~mask
    return mask


def _aut_cut_perm(g, vertex_perm, n_cuts):
    perm = [0] * n_cuts
    for s in range(n_cuts):
        mask = s << 1
        img = 0
        for v in range(g.n):
            if (mask >> v) & 1:
                img |= 1 << vertex_perm[v]
        perm[s] = _canonical_cut_mask(g, img) >> 1
    return tuple(perm)


def restricted_group(g, include_switchings=True):
    """Restricted symmetry group of CUTP(g): graph automorphisms plus
    switchings; order 2^(n-1) * |Aut(g)|.  With include_switchings=False
    (cut cone mode) only the automorphism part is returned."""
    n_cuts = 1 << (g.n - 1)
    if g.n > MAX_CUT_VERTICES:
        raise CutModelError("cut action too large to materialize")
    specs = []
    gens = []
    for vp in automorphism_group(g):
        specs.append(("perm", edge_permutation(g, vp)))
        gens.append(_aut_cut_perm(g, vp, n_cuts))
    if include_switchings:
        for v in range(1, g.n):
            u_coords = cut_coords(g, 1 << v)
            specs.append(("switch", u_coords))
            bit = 1 << (v - 1)
            gens.append(tuple(s ^ bit for s in range(n_cuts)))
    return SymmetryAction(g, PermGroup(n_cuts, gens), specs)


def restricted_group_order(g):
    """2^(|V|-1) * |Aut(G)|, by the structure of the restricted group."""
    return (1 << (g.n - 1)) * automorphism_order(g)


# ---------------------------------------------------------------------------
# inequality families
# ---------------------------------------------------------------------------

def triangle_inequalities(g, include_perimeter=True):
    """For each triangle of g: the 3 homogeneous triangle inequalities
    x_ij <= x_ik + x_kj and (optionally) the perimeter form
    x_ij + x_ik + x_jk <= 2."""
    out = []
    for i, j, k in itertools.combinations(range(g.n), 3):
        if not (g.has_edge(i, j) and g.has_edge(i, k) and g.has_edge(j, k)):
            continue
        eij = g.edge_index[(i, j)]
        eik = g.edge_index[(i, k)]
        ejk = g.edge_index[(j, k)]
        for neg, p1, p2 in ((eij, eik, ejk), (eik, eij, ejk), (ejk, eij, eik)):
            a = [0] * g.m
            a[neg] = -1
            a[p1] = 1
            a[p2] = 1
            out.append(AffineInequality.make(0, a))
        if include_perimeter:
            a = [0] * g.m
            a[eij] = a[eik] = a[ejk] = -1
            out.append(AffineInequality.make(2, a))
    return out


def hypermetric_inequality(g, b):
    """sum_{i<j} b_i b_j x_ij <= 0 over the edges of g, with sum(b) = 1.

    b = (1,1,-1) is a triangle inequality, (1,1,1,-1,-1) pentagonal,
    (1,1,1,1,-1,-1,-1) 7-gonal.  Vertices past len(b) get weight 0.
    """
    b = tuple(b)
    if sum(b) != 1:
        raise CutModelError("hypermetric vector must sum to 1")
    if len(b) > g.n:
        raise CutModelError("hypermetric vector longer than vertex count")
    a = [0] * g.m
    for e, (u, v) in enumerate(g.edges):
        bu = b[u] if u < len(b) else 0
        bv = b[v] if v < len(b) else 0
        a[e] = -bu * bv
    return AffineInequality.make(0, a)


def cycle_inequality(g, cycle, negated=None):
    """Cycle inequality of a cycle (vertex sequence): all edges positive
    except those in `negated` (odd-size subset of the cycle's edge indices;
    default: the closing edge), plus the constant |negated| - 1."""
    edges = []
    for t in range(len(cycle)):
        u, v = cycle[t], cycle[(t + 1) % len(cycle)]
        edges.append(g.edge_index[(min(u, v), max(u, v))])
    if negated is None:
        negated = {edges[-1]}
    negated = set(negated)
    if len(negated) % 2 == 0 or not negated <= set(edges):
        raise CutModelError("negated set must be an odd subset of the cycle")
    a = [0] * g.m
    for e in edges:
        a[e] = -1 if e in negated else 1
    return AffineInequality.make(len(negated) - 1, a)


def cycle_switchings(g, cycle):
    """The 2^(s-1) switchings of an s-cycle inequality: one per odd subset
    of the cycle's edges taken negative."""
    edges = []
    for t in range(len(cycle)):
        u, v = cycle[t], cycle[(t + 1) % len(cycle)]
        edges.append(g.edge_index[(min(u, v), max(u, v))])
    out = []
    for r in range(1, len(edges) + 1, 2):
        for neg in itertools.combinations(edges, r):
            out.append(cycle_inequality(g, cycle, negated=neg))
    return out


def edge_inequalities(g, edge_idx):
    """x_e >= 0 and its switching 1 - x_e >= 0."""
    a = [0] * g.m
    a[edge_idx] = 1
    lo = AffineInequality.make(0, a)
    a = [0] * g.m
    a[edge_idx] = -1
    return [lo, AffineInequality.make(1, a)]


def k5free_facets(g, override=False, max_cycle_len=None):
    """All facets of CUTP(g) for a K5-minor-free graph: switchings of edge
    inequalities for edges in no triangle, and of cycle inequalities of
    chordless cycles.  Deduplicated by normalized form."""
    if not override and has_k5_minor(g):
        raise CutModelError(
            "graph has a K5 minor; generator is not complete (override=True "
            "to generate the valid switchings anyway)")
    out = []
    seen = set()
    tri = edges_in_triangles(g)
    for e in range(g.m):
        if e in tri:
            continue
        for q in edge_inequalities(g, e):
            key = q.homogeneous()
            if key not in seen:
                seen.add(key)
                out.append(q)
    for cyc in chordless_cycles(g, max_len=max_cycle_len):
        for q in cycle_switchings(g, cyc):
            key = q.homogeneous()
            if key not in seen:
                seen.add(key)
                out.append(q)
    return out


def metric_generators(n, mode="polytope"):
    """Facets of MET_n (cone: triangle inequalities) / METP_n (polytope:
    plus perimeter inequalities), over the edges of K_n."""
    from .graphs import complete_graph
    g = complete_graph(n)
    if mode == "cone":
        return triangle_inequalities(g, include_perimeter=False)
    if mode == "polytope":
        return triangle_inequalities(g, include_perimeter=True)
    raise CutModelError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# bulk evaluation (int64 numpy; exactness guarded by magnitude check)
# ---------------------------------------------------------------------------

def cut_matrix(g, cuts=None):
    if cuts is None:
        cuts = enumerate_cuts(g)
    return np.array([c.coords for c in cuts], dtype=np.int64)

def evaluate_on_cuts(ineq, cmatrix):
    """Vector of a0 + a.x over the rows of the 0/1 cut matrix, exactly."""
    bound = abs(ineq.a0) + sum(abs(c) for c in ineq.a)
    if bound >= 2 ** 62:
        raise CutModelError("coefficients too large for int64 bulk path")
    a = np.array(ineq.a, dtype=np.int64)
    return cmatrix @ a + ineq.a0


def is_valid_on_cuts(ineq, cmatrix):
    return bool((evaluate_on_cuts(ineq, cmatrix) >= 0).all())


def incidence_count(ineq, cmatrix):
    return int((evaluate_on_cuts(ineq, cmatrix) == 0).sum())


def facet_incidence_formulas_check(g, max_cycle_len=None):
    """Compare actual incidence of each edge/cycle facet with the closed
    forms 2^(|V|-2) and s*2^(|V|-s).  Returns a list of mismatch records
    (empty = all good)."""
    cm = cut_matrix(g)
    mismatches = []
    tri = edges_in_triangles(g)
    for e in range(g.m):
        if e in tri:
            continue
        for q in edge_inequalities(g, e):
            inc = incidence_count(q, cm)
            want = 1 << (g.n - 2)
            if inc != want:
                mismatches.append(("edge", e, q, inc, want))
    for cyc in chordless_cycles(g, max_len=max_cycle_len):
        s = len(cyc)
        want = s * (1 << (g.n - s))
        for q in cycle_switchings(g, cyc):
            inc = incidence_count(q, cm)
            if inc != want:
                mismatches.append(("cycle", cyc, q, inc, want))
    return mismatches


# ---------------------------------------------------------------------------
# the polytope object handed to dual description / ADM
# ---------------------------------------------------------------------------

class CutPolytope:
    """CUTP(G) (mode 'polytope') or CUT(G) (mode 'cone').

    Rows are the homogenized points (1, x) for the polytope, or the nonzero
    cut vectors themselves for the cone.  The symmetry used for orbit work is
    the restricted group on cut indices (automorphisms only, for the cone,
    since switchings are not linear)."""

    def __init__(self, graph, mode="polytope"):
        if mode not in ("polytope", "cone"):
            raise CutModelError(f"unknown mode {mode!r}")
        self.graph = graph
        self.mode = mode
        self.cuts = enumerate_cuts(graph)
        if mode == "polytope":
            self.rows = tuple((1,) + c.coords for c in self.cuts)
        else:
            self.cuts = self.cuts[1:]  # drop delta_empty
            self.rows = tuple(c.coords for c in self.cuts)
        self.dim = graph.m
        self._symmetry = None

    def symmetry(self):
        if self._symmetry is None:
            act = restricted_group(self.graph,
                                   include_switchings=(self.mode == "polytope"))
            if self.mode == "cone":
                # restrict the cut action to the nonzero cuts (index shift 1)
                gens = [tuple(p[i + 1] - 1 for i in range(len(p) - 1))
                        for p in act.cut_action.generators]
                act = SymmetryAction(self.graph,
                                     PermGroup(len(self.rows), gens),
                                     act.generator_specs)
            self._symmetry = act
        return self._symmetry

    def inequality_from_row_vector(self, vec):
        """Homogeneous facet vector back to an AffineInequality."""
        if self.mode == "polytope":
            return AffineInequality.make(vec[0], vec[1:])
        return AffineInequality.make(0, vec)

    def row_vector_from_inequality(self, ineq):
        if self.mode == "polytope":
            return ineq.homogeneous()
        if ineq.a0 != 0:
            raise CutModelError("cone inequalities must be homogeneous")
        return ineq.a


# ---------------------------------------------------------------------------
# covariance map: CUTP(K_{1,n,m}) <-> CORP(K_{n,m})
# ---------------------------------------------------------------------------

class CovarianceMap:
    """Linear isomorphism between the edge space of K_{1,a,b} (apex 0,
    Alice 1..a, Bob a+1..a+b) and correlation coordinates
    (p_1..p_{a+b}, p_ij for Alice-Bob pairs).

    Point map: p_i = x_0i, p_ij = (x_0i + x_0j - x_ij) / 2.
    Inverse:   x_0i = p_i, x_ij = p_i + p_j - 2 p_ij; Alice-Alice and
    Bob-Bob edges x_ij = ... exist only when the graph has them (K_{1,a,b}
    has none inside parts, so the map is a bijection of coordinates)."""

    def __init__(self, a, b):
        from .graphs import complete_multipartite
        self.a, self.b = a, b
        self.graph = complete_multipartite([1, a, b])
        g = self.graph
        self.apex_edges = [g.edge_index[(0, v)] for v in range(1, a + b + 1)]
        self.cross_edges = [(g.edge_index[(i, j)], i, j)
                            for i in range(1, a + 1)
                            for j in range(a + 1, a + b + 1)]
        self.corr_dim = a + b + a * b

    def point_to_corr(self, x):
        p = [Fraction(x[e]) for e in self.apex_edges]
        for e, i, j in self.cross_edges:
            p.append(Fraction(x[self.apex_edges[i - 1]]
                              + x[self.apex_edges[j - 1]] - x[e], 2))
        return tuple(p)

    def corr_to_point(self, p):
        n_single = self.a + self.b
        x = [None] * self.graph.m
        for k, e in enumerate(self.apex_edges):
            x[e] = p[k]
        for k, (e, i, j) in enumerate(self.cross_edges):
            x[e] = p[i - 1] + p[j - 1] - 2 * p[n_single + k]
        return tuple(x)

    def inequality_to_corr(self, ineq):
        """Transport a0 + a.x >= 0 by substituting x(p)."""
        n_single = self.a + self.b
        c = [Fraction(0)] * self.corr_dim
        for k in range(n_single):
            c[k] = Fraction(ineq.a[self.apex_edges[k]])
        for k, (e, i, j) in enumerate(self.cross_edges):
            ae = ineq.a[e]
            c[i - 1] += ae
            c[j - 1] += ae
            c[n_single + k] -= 2 * ae
        vec = clear_denominators([Fraction(ineq.a0)] + c)
        return AffineInequality.make(vec[0], vec[1:])

    def inequality_to_cut(self, ineq):
        """Transport a corr-space inequality back by substituting p(x)."""
        c = [Fraction(0)] * self.graph.m
        n_single = self.a + self.b
        for k, e in enumerate(self.apex_edges):
            c[e] += ineq.a[k]
        for k, (e, i, j) in enumerate(self.cross_edges):
            ap = Fraction(ineq.a[n_single + k])
            c[self.apex_edges[i - 1]] += ap / 2
            c[self.apex_edges[j - 1]] += ap / 2
            c[e] -= ap / 2
        vec = clear_denominators([Fraction(ineq.a0)] + c)
        return AffineInequality.make(vec[0], vec[1:])


# ---------------------------------------------------------------------------
# cdd-compatible H/V files
# ---------------------------------------------------------------------------

def write_h_file(path, ineqs, dim):
    with open(path, "w") as fh:
        fh.write("H-representation\nbegin\n")
        fh.write(f"{len(ineqs)} {dim + 1} rational\n")
        for q in ineqs:
            fh.write(" ".join(str(c) for c in q.homogeneous()) + "\n")
        fh.write("end\n")


def read_h_file(path):
    rows, _ = _read_repr(path, "H-representation")
    return [AffineInequality.make(r[0], r[1:]) for r in rows]


def write_v_file(path, points, dim):
    with open(path, "w") as fh:
        fh.write("V-representation\nbegin\n")
        fh.write(f"{len(points)} {dim + 1} rational\n")
        for p in points:
            fh.write("1 " + " ".join(str(c) for c in p) + "\n")
        fh.write("end\n")


def read_v_file(path):
    rows, _ = _read_repr(path, "V-representation")
    for r in rows:
        if r[0] != 1:
            raise CutModelError("V-file rows must start with 1 (points)")
    return [r[1:] for r in rows]


def _read_repr(path, header):
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines or lines[0] != header:
        raise CutModelError(f"{path}: expected {header}")
    if lines[1] != "begin":
        raise CutModelError(f"{path}: missing begin")
    nrows, ncols, _ = lines[2].split()
    nrows, ncols = int(nrows), int(ncols)
    rows = []
    for ln in lines[3:3 + nrows]:
        parts = ln.split()
        if len(parts) != ncols:
            raise CutModelError(f"{path}: bad row width")
        rows.append(tuple(int(p) if "/" not in p else Fraction(p)
                          for p in parts))
    if lines[3 + nrows] != "end":
        raise CutModelError(f"{path}: missing end")
    return rows, ncols
