"""Adjacency decomposition: facet orbits of a symmetric cone or polytope.

Algorithm: keep a database of facet orbits keyed by the canonical (minimal)
image of each facet's row-incidence set under the symmetry group.  Treat an
untreated orbit by computing the ridges of its representative (dual
description of the tight rows in local coordinates, or a recursive orbit
enumeration under the facet's stabilizer when the subproblem is large) and
rotating across each ridge; canonicalize every neighbour and insert the new
orbits.  Early termination is available through the Balinski connectivity
criteria.  The orbit database can be checkpointed to a canonical text format
and resumed.
"""

from collections import Counter
from dataclasses import dataclass, field, replace
import concurrent.futures
import hashlib
from math import lcm

import numpy as np

from .cutmodel import CutPolytope, triangle_inequalities
from .dualdesc import (RowCone, FacetCertificate, ResourceGuard, NotAFacet,
                       polar_extreme_rays, rotate_to_adjacent, first_facet,
                       facet_ridges, is_facet, _local_coordinates,
                       lift_local_vector)
from .exactlin import dot
from .graphs import Graph
from .groups import (PermGroup, apply_to_mask, indices_of, mask_of,
                     set_stabilizer_generators, OrbitCapExceeded)

CHECKPOINT_MAGIC = "cutpoly-checkpoint 1"


@dataclass
class AdmConfig:
    termination: str = "exhaustive"      # or "balinski"
    recursion_threshold: int = None      # default 4 * dim at run time
    max_depth: int = 2
    seed: int = 0
    workers: int = 1
    max_orbits: int = None
    max_incidence: int = None
    max_rays: int = 5_000_000
    stabilizer_max_gens: int = 64
    sample_steps: int = 1000
    checkpoint_path: str = None


@dataclass
class OrbitRecord:
    representative: FacetCertificate
    canonical_key: tuple
    orbit_size: int
    incidence_count: int
    status: str = "untreated"            # or "treated"
    neighbor_keys: tuple = ()
    orbit_common: int = 0                # AND of all incidence masks in orbit


class CanonicalIndex:
    """mask -> canonical_key for every facet incidence mask seen so far.

    The first query for a mask walks its whole orbit once and caches the key
    for every member, so later neighbours canonicalize in O(1).
    """

    def __init__(self, group):
        self.group = group
        self.key_of = {}
        self.orbit_size = {}
        self.orbit_common = {}

    def canonicalize(self, mask):
        key = self.key_of.get(mask)
        if key is not None:
            return key
        seen = {mask}
        frontier = [mask]
        common = mask
        while frontier:
            nxt = []
            for m in frontier:
                for g in self.group.generators:
                    im = apply_to_mask(g, m)
                    if im not in seen:
                        seen.add(im)
                        common &= im
                        nxt.append(im)
            frontier = nxt
        key = min(map(indices_of, seen))
        for m in seen:
            self.key_of[m] = key
        self.orbit_size[key] = len(seen)
        self.orbit_common[key] = common
        return key


@dataclass
class EnumerationState:
    polytope: CutPolytope
    cone: RowCone
    group: PermGroup
    index: CanonicalIndex
    records: dict = field(default_factory=dict)
    termination_mode: str = "exhaustive"
    seed: int = 0

    def insert(self, cert):
        """Insert a facet if its orbit is new; returns (record, is_new)."""
        key = self.index.canonicalize(cert.incidence_mask)
        rec = self.records.get(key)
        if rec is not None:
            return rec, False
        rec = OrbitRecord(cert, key, self.index.orbit_size[key],
                          cert.incidence_count,
                          orbit_common=self.index.orbit_common[key])
        self.records[key] = rec
        return rec, True

    def untreated(self):
        return [r for r in self.records.values() if r.status == "untreated"]

    def facet_total(self):
        return sum(r.orbit_size for r in self.records.values())


def strict_functional(polytope):
    """A functional strictly positive on every row: the homogenization
    coordinate for a polytope, the all-ones vector for a 0/1 ray cone."""
    m = len(polytope.rows[0])
    if polytope.mode == "polytope":
        return (1,) + (0,) * (m - 1)
    return (1,) * m


def balinski_complete(state):
    """(complete, criterion): completeness by connectivity of the skeleton.

    An m-dimensional polytope's ridge graph is m-connected, so enumeration
    is complete once the facets still untreated either number at most m-1
    or all contain a common row (vertex): removing them cannot disconnect
    the treated part from anything undiscovered.
    """
    untreated = state.untreated()
    if not untreated:
        return True, "exhausted"
    m = state.cone.d - 1
    if sum(r.orbit_size for r in untreated) <= m - 1:
        return True, "count"
    common = -1
    for r in untreated:
        common &= r.orbit_common
        if common == 0:
            return False, None
    return True, "common-vertex"


def recursive_policy(facet, depth, cfg, dim, stabilizer_nontrivial=True):
    """'recurse' or 'direct-dd' for the ridge subproblem of a facet."""
    threshold = cfg.recursion_threshold
    if threshold is None:
        threshold = 4 * dim
    if (depth < cfg.max_depth and facet.incidence_count > threshold
            and stabilizer_nontrivial):
        return "recurse"
    return "direct-dd"


def _stabilizer_position_group(group, idx, cfg):
    """Stabilizer of a facet's tight set, as permutations of the positions
    of its tight rows (the symmetry group of the local subproblem)."""
    pos = {row: p for p, row in enumerate(idx)}
    gens = set_stabilizer_generators(group, mask_of(idx),
                                     max_gens=cfg.stabilizer_max_gens)
    local = []
    for g in gens:
        local.append(tuple(pos[g[row]] for row in idx))
    return PermGroup(len(idx), local)


def _treat_facet(cone, group, cert, cfg, depth, strict, orbit_size=None,
                 group_order=None):
    """All neighbour facets of cert, one per ridge (or per stabilizer orbit
    of ridges when recursing; sound because stabilizer-equivalent ridges
    give group-equivalent neighbours)."""
    idx, local, lift, basis, scales = _local_coordinates(
        cone, cert.incidence_mask)
    stab_nontrivial = True
    if orbit_size is not None and group_order is not None:
        stab_nontrivial = orbit_size < group_order
    policy = recursive_policy(cert, depth, cfg, cone.d - 1, stab_nontrivial)
    ridge_vecs = []
    if policy == "recurse":
        try:
            sub_group = _stabilizer_position_group(group, idx, cfg)
            sub_cone = RowCone(local)
            # strict restricted to local coordinates; the per-coordinate
            # scales of the local basis must be divided back out
            big = lcm(*scales) if len(scales) > 1 else scales[0]
            sub_strict = tuple((big // s) * dot(strict, b)
                               for s, b in zip(scales, basis))
            sub_cfg = replace(cfg, termination="exhaustive", workers=1,
                              checkpoint_path=None)
            sub = _adm_core(sub_cone, sub_group, sub_strict, sub_cfg,
                            depth + 1)
            for rec in sub.records.values():
                ridge_vecs.append(lift_local_vector(
                    lift, rec.representative.vec, cone.ambient))
        except (OrbitCapExceeded, ResourceGuard):
            policy = "direct-dd"
            ridge_vecs = []
    if policy == "direct-dd":
        for b, _ in polar_extreme_rays(local, max_rays=cfg.max_rays):
            ridge_vecs.append(lift_local_vector(lift, b, cone.ambient))
    return [rotate_to_adjacent(cone, cert, rv) for rv in ridge_vecs]


def _adm_core(cone, group, strict, cfg, depth=0, state=None,
              checkpoint_cb=None):
    """The main loop: treat cheapest untreated orbits until complete."""
    if state is None:
        state = EnumerationState(None, cone, group, CanonicalIndex(group),
                                 termination_mode=cfg.termination,
                                 seed=cfg.seed)
    if not state.records:
        state.insert(first_facet(cone, strict))
    group_order = group.order() if group.generators else 1
    while True:
        if cfg.termination == "balinski":
            done, _ = balinski_complete(state)
            if done:
                break
        pending = sorted(state.untreated(),
                         key=lambda r: (r.incidence_count, r.canonical_key))
        if not pending:
            break
        if cfg.max_orbits is not None and len(state.records) > cfg.max_orbits:
            if checkpoint_cb:
                checkpoint_cb(state)
            raise ResourceGuard(f"orbit cap {cfg.max_orbits} exceeded")
        if cfg.max_incidence is not None and \
                pending[0].incidence_count > cfg.max_incidence:
            if checkpoint_cb:
                checkpoint_cb(state)
            raise ResourceGuard(
                f"incidence cap {cfg.max_incidence} exceeded")
        if cfg.workers > 1 and depth == 0 and len(pending) > 1:
            batch = pending[:cfg.workers]
            results = _treat_parallel(cone, group, batch, cfg, strict,
                                      group_order)
        else:
            rec = pending[0]
            nbs = _treat_facet(cone, group, rec.representative, cfg, depth,
                               strict, rec.orbit_size, group_order)
            results = [(rec, nbs)]
        for rec, neighbors in results:
            keys = set()
            for nb in neighbors:
                nrec, _ = state.insert(nb)
                keys.add(nrec.canonical_key)
            rec.neighbor_keys = tuple(sorted(keys))
            rec.status = "treated"
        if checkpoint_cb:
            checkpoint_cb(state)
    return state


_worker_env = {}


def _worker_init(rows, degree, generators, cfg, strict):
    _worker_env["cone"] = RowCone(rows)
    _worker_env["group"] = PermGroup(degree, generators)
    _worker_env["cfg"] = cfg
    _worker_env["strict"] = strict


def _worker_treat(task):
    vec, mask, orbit_size, group_order = task
    cert = FacetCertificate(tuple(vec), mask)
    nbs = _treat_facet(_worker_env["cone"], _worker_env["group"], cert,
                       _worker_env["cfg"], 0, _worker_env["strict"],
                       orbit_size, group_order)
    return [(nb.vec, nb.incidence_mask) for nb in nbs]


def _treat_parallel(cone, group, batch, cfg, strict, group_order):
    tasks = [(r.representative.vec, r.representative.incidence_mask,
              r.orbit_size, group_order) for r in batch]
    with concurrent.futures.ProcessPoolExecutor(
            max_workers=cfg.workers, initializer=_worker_init,
            initargs=(cone.rows, group.degree, group.generators, cfg,
                      strict)) as pool:
        outs = list(pool.map(_worker_treat, tasks))
    results = []
    for rec, out in zip(batch, outs):
        results.append((rec, [FacetCertificate(tuple(v), m)
                              for v, m in out]))
    return results


def adjacency_decomposition(polytope, cfg=None, resume_from=None):
    """Facet orbits of a CutPolytope by adjacency decomposition.

    Returns the final EnumerationState; the orbit list is
    sorted(state.records.values(), key=canonical_key).  Pass resume_from=
    a checkpoint path to continue an interrupted run.
    """
    if cfg is None:
        cfg = AdmConfig()
    cone = RowCone(polytope.rows)
    group = polytope.symmetry().cut_action
    strict = strict_functional(polytope)
    state = None
    if resume_from is not None:
        state = resume(resume_from, polytope=polytope)
        state.termination_mode = cfg.termination
    cb = None
    if cfg.checkpoint_path:
        cb = lambda st: checkpoint(st, cfg.checkpoint_path)
    if state is None:
        state = EnumerationState(polytope, cone, group,
                                 CanonicalIndex(group),
                                 termination_mode=cfg.termination,
                                 seed=cfg.seed)
    else:
        state.polytope = polytope
        state.cone = cone
        state.group = group
    return _adm_core(cone, group, strict, cfg, state=state,
                     checkpoint_cb=cb)


def orbit_records(state):
    return sorted(state.records.values(), key=lambda r: r.canonical_key)


def expand_orbits(state):
    """All facets, expanded from the orbit representatives.

    Walks each representative's incidence-mask orbit and reconstructs the
    unique facet normal of each mask from its tight rows, so the result is
    exact and duplicate-free by construction.
    """
    from .exactlin import nullspace
    cone = state.cone
    out = []
    for rec in orbit_records(state):
        seen = {rec.representative.incidence_mask}
        frontier = [rec.representative.incidence_mask]
        while frontier:
            nxt = []
            for m in frontier:
                for g in state.group.generators:
                    im = apply_to_mask(g, m)
                    if im not in seen:
                        seen.add(im)
                        nxt.append(im)
            frontier = nxt
        for m in sorted(seen):
            tight = [cone.rows[i] for i in indices_of(m)]
            ns = nullspace(tight)
            assert len(ns) == 1, "incidence set does not span a hyperplane"
            vec = ns[0]
            if any(dot(r, vec) < 0 for r in cone.rows):
                vec = tuple(-x for x in vec)
            out.append(FacetCertificate(vec, m))
    return out


# ---------------------------------------------------------------------------
# sampling and the triangle-adjacency conjecture
# ---------------------------------------------------------------------------

def sample_facets(polytope, cfg=None):
    """Random walk on the ridge graph, classifying facets by incidence.

    Returns (histogram: incidence -> visits, representatives: incidence ->
    FacetCertificate).  Ridge choice is uniform per step, driven by a
    counter-based Philox generator so runs are reproducible from the seed
    alone.  Ridge lists are cached per visited facet.
    """
    if cfg is None:
        cfg = AdmConfig()
    cone = RowCone(polytope.rows)
    rng = np.random.Generator(np.random.Philox(cfg.seed))
    cur = first_facet(cone, strict_functional(polytope))
    hist = Counter()
    reps = {}
    ridge_cache = {}
    for _ in range(cfg.sample_steps):
        hist[cur.incidence_count] += 1
        reps.setdefault(cur.incidence_count, cur)
        ridges = ridge_cache.get(cur.incidence_mask)
        if ridges is None:
            ridges = [rv for rv, _ in facet_ridges(cone, cur,
                                                   max_rays=cfg.max_rays)]
            ridge_cache[cur.incidence_mask] = ridges
        pick = int(rng.integers(len(ridges)))
        cur = rotate_to_adjacent(cone, cur, ridges[pick])
    return dict(hist), reps


def triangle_orbit_key(polytope, index):
    """Canonical key of the triangle-inequality facet orbit."""
    tris = triangle_inequalities(polytope.graph, include_perimeter=False)
    if not tris:
        raise ValueError("graph has no triangles")
    cone = RowCone(polytope.rows)
    vec = polytope.row_vector_from_inequality(tris[0])
    cert = is_facet(cone, vec)
    return index.canonicalize(cert.incidence_mask)


def check_triangle_adjacency(polytope, state, cfg=None):
    """Does every facet orbit touch the triangle orbit in the ridge graph?

    Returns (ok, witnesses): one (canonical_key, has_triangle_neighbor)
    pair per orbit.  Requires a complete orbit list; untreated records
    (from a Balinski-terminated run) are treated on the fly.
    """
    if cfg is None:
        cfg = AdmConfig()
    tri_key = triangle_orbit_key(polytope, state.index)
    group_order = state.group.order()
    strict = strict_functional(polytope)
    witnesses = []
    ok = True
    for rec in orbit_records(state):
        if rec.status != "treated":
            nbs = _treat_facet(state.cone, state.group, rec.representative,
                               cfg, 0, strict, rec.orbit_size, group_order)
            keys = {state.index.canonicalize(nb.incidence_mask)
                    for nb in nbs}
        else:
            keys = set(rec.neighbor_keys)
        hit = tri_key in keys
        witnesses.append((rec.canonical_key, hit))
        ok = ok and hit
    return ok, witnesses


# ---------------------------------------------------------------------------
# checkpoint / resume (versioned canonical text)
# ---------------------------------------------------------------------------

def _key_str(key):
    return ",".join(str(i) for i in key)


def _parse_key(s):
    return tuple(int(t) for t in s.split(",")) if s else ()


def checkpoint(state, path):
    """Serialize the orbit database to a canonical, diffable text file.

    Sorted record order and fixed integer rendering make the format
    idempotent: write, read, write reproduces the bytes exactly.
    """
    g = state.polytope.graph if state.polytope is not None else None
    lines = [CHECKPOINT_MAGIC]
    if g is None:
        raise ValueError("checkpointing requires a polytope-backed state")
    lines.append("graph %d %s" % (
        g.n, " ".join(f"{u}-{v}" for u, v in g.edges)))
    lines.append(f"mode {state.polytope.mode}")
    lines.append(f"termination {state.termination_mode}")
    lines.append(f"seed {state.seed}")
    lines.append(f"records {len(state.records)}")
    for rec in orbit_records(state):
        lines.append("record %s %s %d %d" % (
            _key_str(rec.canonical_key), rec.status, rec.orbit_size,
            rec.incidence_count))
        lines.append("vec " + " ".join(str(c) for c in rec.representative.vec))
        lines.append("incidence " + _key_str(
            indices_of(rec.representative.incidence_mask)))
        nb = ";".join(_key_str(k) for k in rec.neighbor_keys)
        lines.append("neighbors " + (nb if nb else "-"))
    lines.append("end")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


class CheckpointError(ValueError):
    pass


def resume(path, polytope=None):
    """Rebuild an EnumerationState from a checkpoint file.

    If a polytope is supplied it must match the checkpointed graph and
    mode; otherwise the polytope is reconstructed from the stored edges.
    """
    with open(path) as fh:
        lines = [ln.rstrip("\n") for ln in fh]
    lines = [ln for ln in lines if ln]
    if not lines or lines[0] != CHECKPOINT_MAGIC:
        raise CheckpointError(
            f"{path}: not a version-1 checkpoint (bad or missing header)")
    try:
        fields = {}
        pos = 1
        for name in ("graph", "mode", "termination", "seed", "records"):
            key, _, val = lines[pos].partition(" ")
            if key != name:
                raise CheckpointError(f"{path}: expected '{name}' line")
            fields[name] = val
            pos += 1
        parts = fields["graph"].split()
        n = int(parts[0])
        edges = [tuple(int(x) for x in p.split("-")) for p in parts[1:]]
        graph = Graph(n, edges)
        mode = fields["mode"]
        if polytope is not None:
            if polytope.graph.edges != graph.edges or polytope.mode != mode:
                raise CheckpointError(
                    f"{path}: checkpoint is for a different graph or mode")
        else:
            polytope = CutPolytope(graph, mode)
        cone = RowCone(polytope.rows)
        group = polytope.symmetry().cut_action
        state = EnumerationState(polytope, cone, group,
                                 CanonicalIndex(group),
                                 termination_mode=fields["termination"],
                                 seed=int(fields["seed"]))
        nrec = int(fields["records"])
        for _ in range(nrec):
            _, keystr, status, osize, icount = lines[pos].split()
            vec = tuple(int(x) for x in lines[pos + 1].split()[1:])
            inc = _parse_key(lines[pos + 2].split(" ", 1)[1])
            nbs = lines[pos + 3].split(" ", 1)[1]
            pos += 4
            mask = mask_of(inc)
            cert = FacetCertificate(vec, mask)
            key = state.index.canonicalize(mask)
            if key != _parse_key(keystr):
                raise CheckpointError(
                    f"{path}: stored canonical key does not match the group")
            rec = OrbitRecord(cert, key, state.index.orbit_size[key],
                              int(icount), status=status,
                              orbit_common=state.index.orbit_common[key])
            if int(osize) != rec.orbit_size:
                raise CheckpointError(f"{path}: orbit size mismatch")
            if nbs != "-":
                rec.neighbor_keys = tuple(sorted(
                    _parse_key(t) for t in nbs.split(";")))
            state.records[key] = rec
        if lines[pos] != "end":
            raise CheckpointError(f"{path}: missing end marker")
    except (IndexError, ValueError) as exc:
        if isinstance(exc, CheckpointError):
            raise
        raise CheckpointError(f"{path}: corrupt checkpoint ({exc})") from exc
    return state


def orbit_report(state, path):
    """One line per orbit: key hash, orbit size, incidence, normal vector."""
    with open(path, "w") as fh:
        for rec in orbit_records(state):
            h = hashlib.sha256(_key_str(rec.canonical_key).encode())
            fh.write("%s %d %d %s\n" % (
                h.hexdigest()[:16], rec.orbit_size, rec.incidence_count,
                " ".join(str(c) for c in rec.representative.vec)))
