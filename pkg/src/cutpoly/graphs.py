"""Graphs: the ground structures whose cut polytopes we enumerate.

A Graph stores a lexicographically sorted edge list; that ordering *is* the
coordinate order of the edge space, so vertex numberings of the named graphs
in the catalog are frozen (documented in the README and pinned by tests).

Also here: automorphism groups (partition-refinement-flavoured backtrack,
no external canonical labelling), chordless cycle enumeration, and a
desk-scale K5-minor test (branch on delete/contract, planarity pruning).
"""

from functools import lru_cache
import itertools

import networkx as nx


class GraphError(ValueError):
    pass


class Graph:
    """Simple connected undirected graph with a fixed edge ordering."""

    def __init__(self, n, edges, name=None):
        self.n = int(n)
        es = sorted(set((min(u, v), max(u, v)) for u, v in edges))
        for u, v in es:
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge ({u},{v}) out of range for n={self.n}")
        self.edges = tuple(es)
        self.m = len(self.edges)
        self.name = name
        self.edge_index = {e: i for i, e in enumerate(self.edges)}
        self.adj = [0] * self.n  # adjacency bitmasks
        for u, v in self.edges:
            self.adj[u] |= 1 << v
            self.adj[v] |= 1 << u
        if not self._connected():
            raise GraphError("graph must be connected")

    def _connected(self):
        if self.n == 0:
            return False
        seen = 1
        frontier = 1
        while frontier:
            nxt = 0
            v = frontier
            while v:
                low = (v & -v).bit_length() - 1
                v &= v - 1
                nxt |= self.adj[low]
            frontier = nxt & ~seen
            seen |= nxt
        return seen == (1 << self.n) - 1

    def neighbors(self, v):
        mask = self.adj[v]
        out = []
        while mask:
            w = (mask & -mask).bit_length() - 1
            mask &= mask - 1
            out.append(w)
        return out

    def has_edge(self, u, v):
        return (self.adj[u] >> v) & 1 == 1

    def degree(self, v):
        return self.adj[v].bit_count()

    def __eq__(self, other):
        return isinstance(other, Graph) and (self.n, self.edges) == (other.n, other.edges)

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        nm = self.name or "Graph"
        return f"<{nm} |V|={self.n} |E|={self.m}>"

    def relabel(self, perm):
        """New graph with vertex i renamed perm[i] (edge list re-sorted)."""
        return Graph(self.n, [(perm[u], perm[v]) for u, v in self.edges],
                     name=self.name)

    def to_networkx(self):
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------

def complete_graph(n):
    return Graph(n, itertools.combinations(range(n), 2), name=f"K{n}")


def complete_multipartite(parts):
    """Parts are consecutive vertex blocks, in the given order."""
    starts = [0]
    for p in parts:
        starts.append(starts[-1] + p)
    n = starts[-1]
    block = [None] * n
    for b, (s, p) in enumerate(zip(starts, parts)):
        for v in range(s, s + p):
            block[v] = b
    edges = [(u, v) for u in range(n) for v in range(u + 1, n)
             if block[u] != block[v]]
    name = "K" + ",".join(str(p) for p in parts)
    return Graph(n, edges, name=name)


def complete_minus_clique(n, m):
    """K_n minus the edges of a K_m on the last m vertices."""
    if not (0 <= m < n):
        raise GraphError("need 0 <= m < n")
    edges = [(u, v) for u, v in itertools.combinations(range(n), 2)
             if not (u >= n - m and v >= n - m)]
    return Graph(n, edges, name=f"K{n}-K{m}")


def prism(m):
    """C_m x K_2: vertices 0..m-1 outer cycle, m..2m-1 inner cycle."""
    if m < 3:
        raise GraphError("Prism_m needs m >= 3")
    edges = []
    for i in range(m):
        j = (i + 1) % m
        edges += [(i, j), (m + i, m + j), (i, m + i)]
    return Graph(2 * m, edges, name=f"Prism{m}")


def antiprism(m):
    """Antiprism on 2m vertices: 0..m-1 top cycle, m..2m-1 bottom cycle."""
    if m < 3:
        raise GraphError("APrism_m needs m >= 3")
    edges = []
    for i in range(m):
        j = (i + 1) % m
        edges += [(i, j), (m + i, m + j), (i, m + i), (j, m + i)]
    return Graph(2 * m, edges, name=f"APrism{m}")


def moebius_ladder(two_m):
    """Moebius ladder M_{2m}: cycle C_{2m} plus the m main diagonals."""
    if two_m % 2 or two_m < 6:
        raise GraphError("Moebius ladder needs an even vertex count >= 6")
    m = two_m // 2
    edges = [(i, (i + 1) % two_m) for i in range(two_m)]
    edges += [(i, i + m) for i in range(m)]
    return Graph(two_m, edges, name=f"Moebius{two_m}")


def pyramid(base):
    """Apex vertex 0 joined to every vertex of the base graph (shifted by 1)."""
    edges = [(0, v + 1) for v in range(base.n)]
    edges += [(u + 1, v + 1) for u, v in base.edges]
    return Graph(base.n + 1, edges, name=f"Pyr({base.name})")


def path_graph(m):
    return Graph(m, [(i, i + 1) for i in range(m - 1)], name=f"P{m}")


def cycle_graph(m):
    if m < 3:
        raise GraphError("C_m needs m >= 3")
    return Graph(m, [(i, (i + 1) % m) for i in range(m)], name=f"C{m}")


def _from_networkx(g, name):
    g = nx.convert_node_labels_to_integers(g, ordering="sorted")
    return Graph(g.number_of_nodes(), list(g.edges()), name=name)


def cuboctahedron():
    """Cuboctahedron skeleton: vertices are edge midpoints of the cube.

    Numbering: the 12 edges of the cube (networkx cubical graph) in sorted
    order; two midpoints are adjacent iff the cube edges share a vertex and
    bound a common face (equivalently: share a vertex, not 'opposite' at it).
    For the cube every two distinct edges at a vertex bound a common face.
    """
    cube = _from_networkx(nx.cubical_graph(), "Cube")
    ce = cube.edges
    edges = []
    for i, j in itertools.combinations(range(len(ce)), 2):
        if set(ce[i]) & set(ce[j]):
            edges.append((i, j))
    return Graph(12, edges, name="Cuboctahedron")


_NAMED = {
    "cube": lambda: _from_networkx(nx.cubical_graph(), "Cube"),
    "dodecahedron": lambda: _from_networkx(nx.dodecahedral_graph(), "Dodecahedron"),
    "icosahedron": lambda: _from_networkx(nx.icosahedral_graph(), "Icosahedron"),
    "petersen": lambda: _from_networkx(nx.petersen_graph(), "Petersen"),
    "heawood": lambda: _from_networkx(nx.heawood_graph(), "Heawood"),
    "truncatedtetrahedron": lambda: _from_networkx(
        nx.truncated_tetrahedron_graph(), "TruncatedTetrahedron"),
    "cuboctahedron": cuboctahedron,
}


def catalog(spec):
    """Build a named graph from the CLI mini-language.

    Accepted forms: ``K6``, ``K3,3``, ``K1,3,3`` (complete multipartite with
    the listed part sizes), ``K7-K2``, ``Prism7``, ``APrism6``, ``Moebius14``,
    ``P5``, ``C6``, ``Pyr(Prism5)``, and the named solids/graphs ``Cube``,
    ``Dodecahedron``, ``Icosahedron``, ``Cuboctahedron``,
    ``TruncatedTetrahedron``, ``Petersen``, ``Heawood``.
    """
    s = spec.strip()
    low = s.lower()
    if low in _NAMED:
        return _NAMED[low]()
    if low.startswith("pyr(") and s.endswith(")"):
        return pyramid(catalog(s[4:-1]))
    for prefix, fn in (("aprism", antiprism), ("prism", prism),
                      ("moebius", moebius_ladder)):
        if low.startswith(prefix):
            return fn(int(s[len(prefix):]))
    if low.startswith("k"):
        body = s[1:]
        if "-" in body:
            a, b = body.split("-")
            if not b.lower().startswith("k"):
                raise GraphError(f"cannot parse graph spec {spec!r}")
            return complete_minus_clique(int(a), int(b[1:]))
        parts = [int(p) for p in body.split(",")]
        if len(parts) == 1:
            return complete_graph(parts[0])
        return complete_multipartite(parts)
    if low.startswith("p") and s[1:].isdigit():
        return path_graph(int(s[1:]))
    if low.startswith("c") and s[1:].isdigit():
        return cycle_graph(int(s[1:]))
    raise GraphError(f"unknown graph spec {spec!r}")


# ---------------------------------------------------------------------------
# file format: line 1 "n m", then m lines "u v", 0-indexed and sorted
# ---------------------------------------------------------------------------

def write_graph(g, path):
    with open(path, "w") as fh:
        fh.write(f"{g.n} {g.m}\n")
        for u, v in g.edges:
            fh.write(f"{u} {v}\n")


def read_graph(path):
    with open(path) as fh:
        tokens = fh.read().split()
    if len(tokens) < 2:
        raise GraphError(f"{path}: truncated graph file")
    n, m = int(tokens[0]), int(tokens[1])
    if len(tokens) != 2 + 2 * m:
        raise GraphError(f"{path}: expected {m} edges")
    edges = [(int(tokens[2 + 2 * i]), int(tokens[3 + 2 * i])) for i in range(m)]
    return Graph(n, edges)  # Graph() rejects disconnected input


# ---------------------------------------------------------------------------
# automorphisms
# ---------------------------------------------------------------------------

def _refine_invariant(g):
    """Per-vertex invariant used to prune the backtrack: iterated degree
    refinement (colour = multiset of neighbour colours), a la equitable
    partition."""
    colour = [g.degree(v) for v in range(g.n)]
    for _ in range(g.n):
        sig = [tuple(sorted(colour[w] for w in g.neighbors(v)) + [colour[v]])
               for v in range(g.n)]
        ranks = {s: i for i, s in enumerate(sorted(set(sig)))}
        new = [ranks[s] for s in sig]
        if new == colour:
            break
        colour = new
    return colour


def automorphisms(g):
    """All automorphisms of g, as image tuples. Desk scale: |V| <= 24."""
    if g.n > 24:
        raise GraphError("automorphism search limited to |V| <= 24")
    colour = _refine_invariant(g)
    order = sorted(range(g.n), key=lambda v: (colour[v], v))
    out = []
    image = [-1] * g.n
    used = [False] * g.n

    def extend(k):
        if k == g.n:
            out.append(tuple(image))
            return
        v = order[k]
        av = g.adj[v]
        for w in range(g.n):
            if used[w] or colour[w] != colour[v]:
                continue
            ok = True
            for j in range(k):
                u = order[j]
                if ((av >> u) & 1) != ((g.adj[w] >> image[u]) & 1):
                    ok = False
                    break
            if ok:
                image[v] = w
                used[w] = True
                extend(k + 1)
                used[w] = False
                image[v] = -1

    extend(0)
    return out


def _closure(gens, n):
    ident = tuple(range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for q in gens:
                r = tuple(p[q[i]] for i in range(n))
                if r not in seen:
                    seen.add(r)
                    nxt.append(r)
        frontier = nxt
    return seen


@lru_cache(maxsize=64)
def _automorphism_data(g):
    auts = automorphisms(g)
    ident = tuple(range(g.n))
    gens = []
    known = {ident}
    for a in sorted(auts):
        if a not in known:
            gens.append(a)
            known = _closure(gens, g.n)
            if len(known) == len(auts):
                break
    return gens, len(auts)


def automorphism_group(g):
    """Small generating set of Aut(g) (identity excluded)."""
    return _automorphism_data(g)[0]


def automorphism_order(g):
    return _automorphism_data(g)[1]


# ---------------------------------------------------------------------------
# chordless cycles
# ---------------------------------------------------------------------------

def chordless_cycles(g, max_len=None):
    """All chordless (induced) cycles of length 3..max_len, each once.

    Canonical form: start at the smallest vertex of the cycle, second vertex
    smaller than the last (kills the reflection), so no duplicate filtering
    by hashing rotations is needed.
    """
    if max_len is None:
        max_len = g.n
    out = []
    for s in range(g.n):
        smaller = (1 << (s + 1)) - 1  # vertices <= s, excluded as interiors
        # path: s, v1, ..., vk with all vi > s, induced
        def grow(path, last, path_mask, blocked):
            # blocked: vertices adjacent to an interior path vertex (chord risk)
            if len(path) >= 3 and g.has_edge(last, s):
                if path[1] < last:
                    out.append(tuple(path))
                # any extension would give the closing edge a chord
                return
            if len(path) == max_len:
                return
            cand = g.adj[last] & ~path_mask & ~smaller & ~blocked
            while cand:
                w = (cand & -cand).bit_length() - 1
                cand &= cand - 1
                grow(path + [w], w, path_mask | (1 << w),
                     blocked | (g.adj[last] & ~(1 << w)))

        # blocked starts empty: a candidate adjacent to s is allowed, but
        # only as the closing vertex (grow returns there, chords forbidden)
        for v1 in g.neighbors(s):
            if v1 > s:
                grow([s, v1], v1, (1 << s) | (1 << v1), 0)
    return out


def edges_in_triangles(g):
    """Indices of edges lying in at least one 3-cycle."""
    out = set()
    for i, (u, v) in enumerate(g.edges):
        if g.adj[u] & g.adj[v]:
            out.add(i)
    return out


# ---------------------------------------------------------------------------
# K5 minor
# ---------------------------------------------------------------------------

def _adj_dict(g):
    return {v: set(g.neighbors(v)) for v in range(g.n)}


def _is_planar(adj):
    g = nx.Graph()
    g.add_nodes_from(adj)
    for v, nbrs in adj.items():
        for w in nbrs:
            g.add_edge(v, w)  # labels need not be orderable; nx dedups
    return nx.check_planarity(g, counterexample=False)[0]


def _has_k5_clique(adj):
    verts = [v for v, nb in adj.items() if len(nb) >= 4]
    for combo in itertools.combinations(verts, 5):
        if all(b in adj[a] for a, b in itertools.combinations(combo, 2)):
            return True
    return False


def _simplify(adj):
    """Delete degree-<=1 vertices, suppress degree-2 vertices. Minor-safe."""
    adj = {v: set(nb) for v, nb in adj.items()}
    changed = True
    while changed:
        changed = False
        for v in list(adj):
            nb = adj.get(v)
            if nb is None:
                continue
            if len(nb) <= 1:
                for w in nb:
                    adj[w].discard(v)
                del adj[v]
                changed = True
            elif len(nb) == 2:
                a, b = sorted(nb)
                adj[a].discard(v)
                adj[b].discard(v)
                del adj[v]
                if a != b:
                    adj[a].add(b)
                    adj[b].add(a)
                changed = True
    return adj


def _contract(adj, u, v):
    adj = {x: set(nb) for x, nb in adj.items()}
    nb = (adj[u] | adj[v]) - {u, v}
    for w in adj[v]:
        adj[w].discard(v)
    del adj[v]
    adj[u] = nb
    for w in nb:
        adj[w].add(u)
    return adj


def _delete(adj, u, v):
    adj = {x: set(nb) for x, nb in adj.items()}
    adj[u].discard(v)
    adj[v].discard(u)
    return adj


def _k5_search(adj, memo):
    adj = _simplify(adj)
    if len(adj) < 5:
        return False
    nedges = sum(len(nb) for nb in adj.values()) // 2
    if nedges < 10:
        return False
    key = frozenset(frozenset((u, v)) for u, nb in adj.items() for v in nb)
    hit = memo.get(key)
    if hit is not None:
        return hit
    if _has_k5_clique(adj):
        memo[key] = True
        return True
    if _is_planar(adj):
        memo[key] = False
        return False
    # Complete branch rule: a K5 model either misses some edge (delete), has
    # a 2-vertex bag through some edge (contract), or is K5 itself (clique
    # check above).  So an existential OR over all edges is exact; dense
    # high-degree edges first to reach a clique quickly when the answer is
    # True, memoisation collapses reorderings of the same operations.
    seen_edges = set()
    edges = []
    for u, nb in adj.items():
        for v in nb:
            e = frozenset((u, v))
            if e not in seen_edges:
                seen_edges.add(e)
                edges.append((u, v))
    edges.sort(key=lambda e: (-(len(adj[e[0]]) + len(adj[e[1]])),
                              sorted(map(sorted, e))))
    result = any(_k5_search(_contract_merge(adj, u, v), memo)
                 or _k5_search(_delete(adj, u, v), memo)
                 for u, v in edges)
    memo[key] = result
    return result


def _contract_merge(adj, u, v):
    """Contract edge (u,v); the merged vertex is labelled u | v so that
    different orders of the same contraction set memoise identically."""
    adj = {x: set(nb) for x, nb in adj.items()}
    w = u | v
    nb = (adj[u] | adj[v]) - {u, v}
    for x in adj[u]:
        adj[x].discard(u)
    for x in adj[v]:
        adj[x].discard(v)
    del adj[u]
    del adj[v]
    adj[w] = nb
    for x in nb:
        adj[x].add(w)
    return adj


def has_k5_minor(g):
    """True iff K5 is a minor of g (desk scale: |V| <= 20)."""
    if g.n > 20:
        raise GraphError("K5-minor test limited to |V| <= 20")
    # original-vertex frozensets as labels so that reorderings of the same
    # contraction set memoise to the same state
    adj = {frozenset([v]): {frozenset([w]) for w in g.neighbors(v)}
           for v in range(g.n)}
    return _k5_search(adj, {})
