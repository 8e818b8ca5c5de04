"""Exact dual description: facet enumeration, facet certificates, ridges,
rotation to the adjacent facet, and ridge graphs.

Everything here is conic.  A polytope enters as the homogenized rows (1, x)
of its points, a cone as its rays; a facet is an extreme ray of the polar
cone {a : row . a >= 0}, computed by the double description method in exact
integer arithmetic (rays kept primitive, incidence tracked as bitmasks over
the processed rows).  Affine-rank conditions on the polytope turn into plain
linear-rank conditions on the rows, so cones and polytopes share one code
path.
"""

from dataclasses import dataclass
from fractions import Fraction

from .exactlin import (dot, primitive, rank, clear_denominators, nullspace,
                       independent_rows, invert)


class ResourceGuard(RuntimeError):
    """A configured size cap was exceeded."""


class NotAFacet(ValueError):
    def __init__(self, reason):
        super().__init__(reason)
        self.reason = reason


@dataclass(frozen=True)
class FacetCertificate:
    """A facet of the row cone: primitive integer normal vector, valid
    (vec . row >= 0 for every row) and tight on rows spanning rank d-1."""
    vec: tuple
    incidence_mask: int

    @property
    def incidence_count(self):
        return self.incidence_mask.bit_count()

    def incidence(self):
        out = []
        m = self.incidence_mask
        while m:
            low = m & -m
            out.append(low.bit_length() - 1)
            m ^= low
        return tuple(out)


class RowCone:
    """Cone spanned by integer rows (homogenized points or rays)."""

    def __init__(self, rows):
        self.rows = [tuple(r) for r in rows]
        if not self.rows:
            raise ValueError("empty row set")
        self.ambient = len(self.rows[0])
        self.d = rank(self.rows)

    def values(self, vec):
        return [dot(r, vec) for r in self.rows]

    def mask_of_tight(self, vals):
        m = 0
        for i, v in enumerate(vals):
            if v == 0:
                m |= 1 << i
        return m


def polytope_cone(points):
    """RowCone of a V-polytope: rows are the homogenized points (1, x)."""
    return RowCone([(1,) + tuple(p) for p in points])


# ---------------------------------------------------------------------------
# double description core
# ---------------------------------------------------------------------------

def polar_extreme_rays(constraints, max_rays=None):
    """Extreme rays of {a : c . a >= 0 for all rows c}, with incidence masks
    over the constraint list.  The constraint rows must span the ambient
    space (pointed polar); rays are primitive integer vectors.

    Standard double description: seed with a simplicial subcone from a
    maximal independent subset, insert remaining constraints one by one,
    combining adjacent positive/negative ray pairs.  Adjacency of two
    extreme rays is the exact combinatorial criterion (no third ray's zero
    set contains their common zero set), with the rank-based popcount bound
    as a cheap prefilter.
    """
    m = len(constraints[0])
    seed_idx = independent_rows(constraints)
    if len(seed_idx) != m:
        raise ValueError("constraint rows do not span the ambient space")
    seed = [constraints[i] for i in seed_idx]
    inv = invert([[Fraction(x) for x in row] for row in seed])
    # columns of the inverse: seed_i . ray_j = delta_ij (scaled positive)
    rays = []
    for j in range(m):
        col = [inv[i][j] for i in range(m)]
        vec = primitive(clear_denominators(col))
        zmask = 0
        for i in range(m):
            if i != j:
                zmask |= 1 << i
        rays.append((vec, zmask))
    # order: seed constraints first, then the rest in input order
    order = seed_idx + [i for i in range(len(constraints)) if i not in set(seed_idx)]
    nproc = m
    for t in range(m, len(constraints)):
        c = constraints[order[t]]
        pos, zero, neg = [], [], []
        for vec, zm in rays:
            v = dot(c, vec)
            if v > 0:
                pos.append((vec, zm, v))
            elif v == 0:
                zero.append((vec, zm))
            else:
                neg.append((vec, zm, v))
        if not neg:
            bit = 1 << nproc
            rays = [(vec, zm | bit) for vec, zm in zero] + \
                   [(vec, zm) for vec, zm, _ in pos]
            nproc += 1
            continue
        zsets = [zm for _, zm, _ in pos] + [zm for _, zm in zero] + \
                [zm for _, zm, _ in neg]
        need = m - 2
        newbit = 1 << nproc
        new_rays = []
        for pvec, pzm, pv in pos:
            for nvec, nzm, nv in neg:
                z = pzm & nzm
                if z.bit_count() < need:
                    continue
                ok = True
                for other in zsets:
                    if other is pzm or other is nzm:
                        continue
                    if z & other == z:
                        ok = False
                        break
                if ok:
                    comb = primitive(tuple(pv * b - nv * a
                                           for a, b in zip(pvec, nvec)))
                    new_rays.append((comb, z | newbit))
        rays = [(vec, zm | newbit) for vec, zm in zero] + \
               [(vec, zm) for vec, zm, _ in pos] + new_rays
        nproc += 1
        if max_rays is not None and len(rays) > max_rays:
            raise ResourceGuard(
                f"double description exceeded {max_rays} intermediate rays")
    # remap incidence masks to original constraint indexing
    remap = []
    for vec, zm in rays:
        mask = 0
        z = zm
        while z:
            low = z & -z
            mask |= 1 << order[low.bit_length() - 1]
            z ^= low
        remap.append((vec, mask))
    return remap


# ---------------------------------------------------------------------------
# facet-level operations
# ---------------------------------------------------------------------------

MAX_POINTS = 20000
MAX_DIM = 31


def dual_description(cone, max_rays=None):
    """Complete irredundant facet list of the row cone."""
    if len(cone.rows) > MAX_POINTS or cone.ambient > MAX_DIM:
        raise ResourceGuard(
            f"dual_description guard: {len(cone.rows)} rows, "
            f"ambient {cone.ambient}")
    if cone.d < cone.ambient:
        raise ValueError("row cone is not full-dimensional in its ambient "
                         "space; enumerate in local coordinates")
    out = []
    for vec, mask in polar_extreme_rays(cone.rows, max_rays=max_rays):
        out.append(FacetCertificate(vec, mask))
    return out


def is_facet(cone, vec):
    """FacetCertificate if vec is a facet normal; NotAFacet otherwise
    (reasons: not-valid, not-supporting, low-rank)."""
    vals = cone.values(vec)
    if any(v < 0 for v in vals):
        raise NotAFacet("not-valid")
    mask = cone.mask_of_tight(vals)
    if mask == 0:
        raise NotAFacet("not-supporting")
    tight = [cone.rows[i] for i in FacetCertificate(vec, mask).incidence()]
    if rank(tight) != cone.d - 1:
        raise NotAFacet("low-rank")
    return FacetCertificate(primitive(vec), mask)


def _local_coordinates(cone, mask):
    """Local integer coordinates of the tight rows of a facet.

    Returns (tight_indices, local_rows, lift, basis) where basis is a
    maximal independent subset of the tight rows and lift is a rational
    matrix mapping a local inequality b to an ambient vector b . lift that
    agrees with it (up to a positive scalar per row) on span(tight rows).
    """
    idx = []
    m2 = mask
    while m2:
        low = m2 & -m2
        idx.append(low.bit_length() - 1)
        m2 ^= low
    tight = [cone.rows[i] for i in idx]
    bsel = independent_rows(tight)
    basis = [tight[i] for i in bsel]
    r = len(basis)
    # W = (B B^T)^{-1} B maps p in span(B) to its basis coordinates W.p.
    # Each row of W is cleared to integers; that rescales one local
    # coordinate by a positive factor, a diagonal change of local basis
    # that the lift absorbs because the lift rows ARE the rows of W.
    gram = [[Fraction(dot(basis[i], basis[j])) for j in range(r)]
            for i in range(r)]
    ginv = invert(gram)
    lift = []
    scales = []
    for i in range(r):
        row = [sum(ginv[i][k] * basis[k][j] for k in range(r))
               for j in range(cone.ambient)]
        cleared = clear_denominators(row)
        lift.append(cleared)
        for a, b in zip(cleared, row):
            if b != 0:
                scales.append(int(Fraction(a) / b))
                break
        else:
            scales.append(1)
    local = [tuple(dot(w, p) for w in lift) for p in tight]
    return idx, local, lift, basis, scales


def lift_local_vector(lift, b, ambient):
    """Ambient extension of a local inequality b (primitive integers)."""
    r = len(lift)
    amb = [sum(b[i] * lift[i][j] for i in range(r)) for j in range(ambient)]
    return primitive(clear_denominators(amb))


def facet_ridges(cone, cert, max_rays=None):
    """Ridges of a facet: for each, an ambient inequality vector valid on
    the facet's subcone and tight exactly on the ridge.  Returns a list of
    (ambient_vec, ridge_mask) with masks over the cone's rows."""
    idx, local, lift, _, _ = _local_coordinates(cone, cert.incidence_mask)
    sub = polar_extreme_rays(local, max_rays=max_rays)
    out = []
    for b, sub_mask in sub:
        amb = lift_local_vector(lift, b, cone.ambient)
        ridge_mask = 0
        z = sub_mask
        while z:
            low = z & -z
            ridge_mask |= 1 << idx[low.bit_length() - 1]
            z ^= low
        out.append((amb, ridge_mask))
    return out


def rotate_to_adjacent(cone, cert, g_vec, f_vals=None):
    """Gift-wrapping rotation: the unique other facet through the ridge on
    which g_vec is tight (g_vec valid on the facet's subcone).

    h = f(v*) g - g(v*) f where v* minimizes g(v)/f(v) over rows with
    f(v) > 0; exact rational minimum done fraction-free.
    """
    f = cert.vec
    if f_vals is None:
        f_vals = cone.values(f)
    best = None  # (g(v), f(v))
    for i, fv in enumerate(f_vals):
        if fv <= 0:
            continue
        gv = dot(cone.rows[i], g_vec)
        if best is None or gv * best[1] < best[0] * fv:
            best = (gv, fv)
    if best is None:
        raise NotAFacet("facet is tight on every row")
    gq, fq = best
    h = tuple(fq * g - gq * ff for g, ff in zip(g_vec, f))
    h = primitive(h)
    vals = cone.values(h)
    mask = cone.mask_of_tight(vals)
    return FacetCertificate(h, mask)


def adjacent_facet(cone, cert, ridge_vec, check=True):
    """Facet adjacent to cert across the ridge where ridge_vec is tight.

    ridge_vec must be valid on the facet's subcone and tight on a rank d-2
    subset of it; rotating by the exact rational minimum ratio yields the
    neighbour.  The rotation is an involution across the ridge.
    """
    if check:
        ridge_rows = [cone.rows[i] for i in cert.incidence()
                      if dot(cone.rows[i], ridge_vec) == 0]
        if rank(ridge_rows) != cone.d - 2:
            raise NotAFacet("not a ridge of this facet")
    return rotate_to_adjacent(cone, cert, ridge_vec)


def promote_to_facet(cone, vec):
    """Rotate a valid supporting inequality up to a facet.

    While the tight set is rank deficient, pick a nullspace direction of the
    tight rows (independent of the current vector) and rotate; the tight
    rank strictly increases, so this ends at a facet in at most d steps.
    """
    vec = primitive(tuple(vec))
    vals = cone.values(vec)
    if any(v < 0 for v in vals):
        raise NotAFacet("not-valid")
    if all(v != 0 for v in vals):
        raise NotAFacet("not-supporting")
    for _ in range(cone.ambient + 1):
        mask = cone.mask_of_tight(vals)
        tight = [cone.rows[i] for i in FacetCertificate(vec, mask).incidence()]
        if rank(tight) == cone.d - 1:
            return FacetCertificate(vec, mask)
        for g in nullspace(tight):
            if rank([g, vec]) == 2:
                break
        else:
            raise NotAFacet("tight rows already span a hyperplane of the cone")
        cert = rotate_to_adjacent(cone, FacetCertificate(vec, mask), g,
                                  f_vals=vals)
        vec = cert.vec
        vals = cone.values(vec)
    raise AssertionError("promotion failed to terminate")


def first_facet(cone, strict):
    """One facet of the row cone, from a functional strictly positive on
    every row.

    One fraction-free min-ratio step against any independent direction
    tilts the strict functional onto a supporting one; promote_to_facet
    then raises its tight rank to d-1.
    """
    strict = tuple(strict)
    if any(dot(r, strict) <= 0 for r in cone.rows):
        raise ValueError("functional is not strictly positive on the rows")
    fake = FacetCertificate(strict, 0)
    for j in range(cone.ambient):
        g = tuple(int(i == j) for i in range(cone.ambient))
        if rank([g, strict]) != 2:
            continue
        tilted = rotate_to_adjacent(cone, fake, g)
        try:
            return promote_to_facet(cone, tilted.vec)
        except NotAFacet:
            continue
    raise NotAFacet("no initial facet found from the strict functional")


def ridge_adjacency(certs, d):
    """Adjacency lists of the ridge graph from a complete facet list.

    Two facets are adjacent iff their shared incidence is contained in no
    third facet's incidence (exact for a complete list); the popcount bound
    d-2 prunes cheap non-ridges.
    """
    n = len(certs)
    masks = [c.incidence_mask for c in certs]
    need = d - 2
    adj = [[] for _ in range(n)]
    for i in range(n):
        mi = masks[i]
        for j in range(i + 1, n):
            z = mi & masks[j]
            if z.bit_count() < need:
                continue
            ok = True
            for k in range(n):
                if k != i and k != j and z & masks[k] == z:
                    ok = False
                    break
            if ok:
                adj[i].append(j)
                adj[j].append(i)
    return adj


def graph_diameter(adj):
    """Diameter by BFS from every node; -1 if disconnected or trivial."""
    n = len(adj)
    if n <= 1:
        return 0
    diam = 0
    for s in range(n):
        dist = [-1] * n
        dist[s] = 0
        frontier = [s]
        while frontier:
            nxt = []
            for v in frontier:
                for w in adj[v]:
                    if dist[w] < 0:
                        dist[w] = dist[v] + 1
                        nxt.append(w)
            frontier = nxt
        if min(dist) < 0:
            return -1
        diam = max(diam, max(dist))
    return diam


def ridge_graph(cone, certs):
    """(adjacency lists, diameter) of the ridge graph of a complete facet
    list of the cone."""
    adj = ridge_adjacency(certs, cone.d)
    return adj, graph_diameter(adj)
