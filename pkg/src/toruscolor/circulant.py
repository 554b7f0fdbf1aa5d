"""Circulant quotients of the triangular lattice, plus small exact solvers.

``build_cayley(n, s1, s2)`` produces the 6-regular Eulerian triangulation of
the torus on vertex set Z_n with connection set {s1, s2, s1+s2}; the dart
labels identify each step with the corresponding unit vector of the covering
triangular lattice.
"""

from __future__ import annotations

from .map import TorusMap, from_rotations


def build_cayley(n: int, s1: int, s2: int) -> TorusMap:
    """6-regular circulant triangulation on Z_n with steps s1, s2, s1+s2."""
    if n < 7:
        raise ValueError("need n >= 7")
    s3 = (s1 + s2) % n
    offsets = [s1 % n, s3, s2 % n, (-s1) % n, (-s3) % n, (-s2) % n]
    if len(set(offsets)) != 6 or 0 in offsets:
        raise ValueError(f"degenerate connection set for n={n}, s1={s1}, s2={s2}")
    labels = [(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)]
    rotations = []
    for v in range(n):
        rotations.append([((v + o) % n, lab) for o, lab in zip(offsets, labels)])
    G = from_rotations(rotations)
    if not (G.is_triangulation() and G.is_eulerian()):
        raise ValueError("parameters do not yield an Eulerian triangulation")
    return G


def _adjacency(G: TorusMap) -> list[set[int]]:
    adj = [set() for _ in range(G.n_vertices)]
    for d in range(G.n_darts):
        u, v = G.tail[d], G.head[d]
        if u != v:
            adj[u].add(v)
            adj[v].add(u)
    return adj


def independence_number(G: TorusMap, cutoff: int = 10_000_000):
    """Exact alpha(G) with a witness set, by branch and bound.

    Vertices are branched in a fixed order; the bound is current + remaining.
    Raises RuntimeError when the node budget is exhausted.
    """
    adj = _adjacency(G)
    n = G.n_vertices
    order = sorted(range(n), key=lambda v: (len(adj[v]), v))
    best = [0, []]
    nodes = [0]

    def grow(idx, chosen, blocked):
        nodes[0] += 1
        if nodes[0] > cutoff:
            raise RuntimeError("independence search budget exhausted")
        if len(chosen) + (n - idx) <= best[0]:
            return
        if idx == n:
            if len(chosen) > best[0]:
                best[0] = len(chosen)
                best[1] = list(chosen)
            return
        v = order[idx]
        if v not in blocked:
            chosen.append(v)
            newly = adj[v] - blocked
            blocked |= newly
            grow(idx + 1, chosen, blocked)
            blocked -= newly
            chosen.pop()
        # bound again before the skip branch
        if len(chosen) + (n - idx - 1) > best[0]:
            grow(idx + 1, chosen, blocked)

    grow(0, [], set())
    return best[0], sorted(best[1])


def _greedy_clique(adj) -> list[int]:
    n = len(adj)
    best: list[int] = []
    for start in range(n):
        clique = [start]
        for v in sorted(adj[start]):
            if all(v in adj[u] for u in clique):
                clique.append(v)
        if len(clique) > len(best):
            best = clique
    return best


def is_k_colorable(G: TorusMap, k: int):
    """Backtracking k-coloring with DSATUR ordering and clique precoloring.

    Returns a coloring dict or None.  The search is exhaustive; no coloring
    means a certified refutation at this k.
    """
    adj = _adjacency(G)
    n = G.n_vertices
    clique = _greedy_clique(adj)
    if len(clique) > k:
        return None
    colors = {v: i for i, v in enumerate(clique)}

    def choose():
        best_v, best_key = None, None
        for v in range(n):
            if v in colors:
                continue
            sat = {colors[u] for u in adj[v] if u in colors}
            key = (-len(sat), -len(adj[v]), v)
            if best_key is None or key < best_key:
                best_v, best_key = v, key
        return best_v

    def solve():
        v = choose()
        if v is None:
            return True
        used = {colors[u] for u in adj[v] if u in colors}
        # symmetry: never open color c+1 before color c has appeared
        opened = max(colors.values(), default=-1)
        for c in range(min(k, opened + 2)):
            if c in used:
                continue
            colors[v] = c
            if solve():
                return True
            del colors[v]
        return False

    if solve():
        return dict(colors)
    return None


def chromatic_number(G: TorusMap, kmax: int = 8):
    """Exact chromatic number (with witness) up to kmax, else report '> kmax'."""
    for k in range(1, kmax + 1):
        witness = is_k_colorable(G, k)
        if witness is not None:
            return k, witness
    return None, None


def is_shift_automorphism(G: TorusMap) -> bool:
    """Check that v -> v+1 (mod n) preserves adjacency; true for circulants."""
    adj = _adjacency(G)
    n = G.n_vertices
    return all({(w + 1) % n for w in adj[v]} == adj[(v + 1) % n] for v in range(n))
