"""Permutation groups on finite index sets.

The equivalence engine of the adjacency decomposition: orbit computation on
subsets, canonical (lexicographically minimal) images, and exact group
orders.  Orders come from a stabilizer chain (sympy's incremental
Schreier-Sims) behind our own surface; orbits and minimal images are explicit
breadth-first enumerations with a configurable size cap -- desk-scale orbits
fit in memory, and hashes never decide equivalence (masks are compared
exactly).
"""

from dataclasses import dataclass, field


class OrbitCapExceeded(RuntimeError):
    """Orbit enumeration hit the configured cap."""


def identity(degree):
    return tuple(range(degree))


def compose(p, q):
    """(p*q)(i) = p(q(i))."""
    return tuple(p[x] for x in q)


def inverse(p):
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


def mask_of(indices):
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def indices_of(mask):
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def apply_to_mask(perm, mask):
    out = 0
    while mask:
        low = mask & -mask
        out |= 1 << perm[low.bit_length() - 1]
        mask ^= low
    return out


@dataclass
class PermGroup:
    degree: int
    generators: list = field(default_factory=list)

    def __post_init__(self):
        ident = identity(self.degree)
        gens = []
        for g in self.generators:
            g = tuple(g)
            if len(g) != self.degree or sorted(g) != list(ident):
                raise ValueError("generator is not a permutation of the degree")
            if g != ident and g not in gens:
                gens.append(g)
        self.generators = gens
        self._order = None

    def order(self):
        """Exact group order via a stabilizer chain."""
        if self._order is None:
            if not self.generators:
                self._order = 1
            else:
                from sympy.combinatorics import Permutation, PermutationGroup
                perms = [Permutation(list(g)) for g in self.generators]
                self._order = int(PermutationGroup(perms).order())
        return self._order

    def orbit_of_point(self, x):
        seen = {x}
        frontier = [x]
        while frontier:
            nxt = []
            for p in frontier:
                for g in self.generators:
                    q = g[p]
                    if q not in seen:
                        seen.add(q)
                        nxt.append(q)
            frontier = nxt
        return seen


def set_orbit(group, mask, cap=None):
    """Full orbit of an index set (as bitmask) under the group.

    Returns a set of masks. Raises OrbitCapExceeded past the cap.
    """
    seen = {mask}
    frontier = [mask]
    while frontier:
        nxt = []
        for m in frontier:
            for g in group.generators:
                im = apply_to_mask(g, m)
                if im not in seen:
                    if cap is not None and len(seen) >= cap:
                        raise OrbitCapExceeded(f"orbit cap {cap} exceeded")
                    seen.add(im)
                    nxt.append(im)
        frontier = nxt
    return seen


def minimal_mask(masks):
    """Lexicographically least index set among masks (as a mask).

    Lexicographic order is on the sorted index sequences, which for
    same-weight masks equals mask order after reversing bit significance;
    comparing index tuples directly keeps it obvious.
    """
    return min(masks, key=indices_of)


def minimal_image(group, s, cap=None):
    """Lexicographically least set in the orbit of s (sorted index tuple)."""
    mask = mask_of(s)
    return indices_of(minimal_mask(set_orbit(group, mask, cap=cap)))


def orbit_of_set(group, s, cap=None):
    """(orbit size, canonical representative) for a nonempty index set."""
    if not s:
        raise ValueError("orbit_of_set needs a nonempty set")
    orb = set_orbit(group, mask_of(s), cap=cap)
    return len(orb), indices_of(minimal_mask(orb))


def orbit_with_transversal(group, mask, cap=None):
    """Orbit of a mask together with one group element mapping mask to each
    image. Used to derive (Schreier) generators of the set stabilizer."""
    ident = identity(group.degree)
    trans = {mask: ident}
    frontier = [mask]
    while frontier:
        nxt = []
        for m in frontier:
            for g in group.generators:
                im = apply_to_mask(g, m)
                if im not in trans:
                    if cap is not None and len(trans) >= cap:
                        raise OrbitCapExceeded(f"orbit cap {cap} exceeded")
                    trans[im] = compose(g, trans[m])
                    nxt.append(im)
        frontier = nxt
    return trans


def set_stabilizer_generators(group, mask, cap=None, max_gens=None):
    """Schreier generators of the stabilizer of the set `mask`.

    The full Schreier set is highly redundant; duplicates and identity are
    dropped, and the list is optionally truncated (callers that need the full
    stabilizer should leave max_gens unset).
    """
    trans = orbit_with_transversal(group, mask, cap=cap)
    inv = {m: inverse(t) for m, t in trans.items()}
    gens = []
    seen = {identity(group.degree)}
    for m, t in trans.items():
        for g in group.generators:
            im = apply_to_mask(g, m)
            s = compose(inv[im], compose(g, t))
            if s not in seen:
                seen.add(s)
                gens.append(s)
                if max_gens is not None and len(gens) >= max_gens:
                    return gens
    return gens
