"""Families of pairwise vertex-disjoint cycles in a prescribed homotopy class.

The finder cuts the torus along a transversal cycle (intersection number one
with the target class), so each wanted cycle becomes a path between the two
copies of its crossing vertex; paths are routed greedily in boundary order
with class-aware search, with a backtracking router as fallback.  A verifier
independent of the finder checks every family, and a brute-force oracle over
all simple cycles covers small maps.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from math import gcd

from .map import MapError, TorusMap, cut_along
from . import homotopy


class FamilyNotFound(MapError):
    def __init__(self, message, verdict=None, budget_exhausted=False):
        super().__init__(message)
        self.verdict = verdict
        self.budget_exhausted = budget_exhausted


def verify_family(G: TorusMap, family, h, k: int) -> None:
    """Independent check: k members, simple, pairwise disjoint, class h."""
    h = tuple(h)
    if len(family) != k:
        raise MapError(f"family has {len(family)} members, wanted {k}")
    seen: set[int] = set()
    for cyc in family:
        if not G.is_simple_cycle(cyc):
            raise MapError("family member is not a simple cycle")
        if homotopy.class_of(G, cyc) != h:
            raise MapError("family member has the wrong class")
        vs = set(G.walk_vertices(cyc))
        if vs & seen:
            raise MapError("family members share a vertex")
        seen |= vs


def _simple_cycle_in_class(G: TorusMap, h):
    walk = homotopy.shortest_cycle_in_class(G, h)
    return walk if G.is_simple_cycle(walk) else None


def _transversal_cut(G: TorusMap, h):
    """A simple cycle whose class has intersection number one with h,
    preferring cheap crossing numbers."""
    m, n = h
    g, p, q = _ext_gcd(m, n)
    assert g == 1
    base = (-q, p)  # det(h, base) = m*p - n*(-q) ... fixed below
    # want det(h, t) = m*t1 - n*t0 = 1
    # ext gcd: m*p + n*q = 1  ->  t = (-q, p)
    assert m * base[1] - n * base[0] == 1
    candidates = []
    for j in range(-2, 3):
        t = (base[0] + j * m, base[1] + j * n)
        candidates.append((homotopy.crossing_number(G, t), j, t))
    best_cycle = None
    for _, _, t in sorted(candidates):
        cyc = _simple_cycle_in_class(G, t)
        if cyc is not None:
            best_cycle = (t, cyc)
            break
    if best_cycle is None:
        raise FamilyNotFound("no simple transversal cycle found")
    return best_cycle


def _ext_gcd(a, b):
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    g, x, y = _ext_gcd(b, a % b)
    return (g, y, x - (a // b) * y)


def _twin_path(cyl, v, blocked, target, budget):
    """Class-aware shortest path from the right to the left copy of v.

    States carry the ambient label sum of the source darts, so the glued
    torus cycle has exactly the wanted class; visited original vertices are
    blocked so the glued cycle is simple.
    """
    G = cyl.graph
    src = cyl.source
    start = cyl.right_copy[v]
    goal = cyl.left_copy[v]
    orig = _orig_vertex_map(cyl)
    if orig[start] in blocked:
        return None
    maxlab = max(max(abs(x), abs(y)) for x, y in src.label) or 1
    limit = max(abs(target[0]), abs(target[1])) + maxlab * (src.n_vertices + 2)
    state0 = (start, 0, 0)
    dist = {state0: None}
    queue = deque([state0])
    ops = 0
    while queue:
        state = queue.popleft()
        u, sx, sy = state
        for d in G.rotation[u]:
            ops += 1
            if ops > budget:
                raise homotopy.BudgetError("twin path budget exhausted")
            w = G.head[d]
            if orig[w] in blocked and w != goal:
                continue
            od = cyl.dart_origin[d]
            nx, ny = sx + src.label[od][0], sy + src.label[od][1]
            if max(abs(nx), abs(ny)) > limit:
                continue
            nxt = (w, nx, ny)
            if nxt in dist:
                continue
            dist[nxt] = (state, d)
            if w == goal and (nx, ny) == target:
                path = []
                s = nxt
                while dist[s] is not None:
                    s, dd = dist[s]
                    path.append(dd)
                path.reverse()
                # the path may not reuse an original vertex twice
                origs = [orig[G.tail[dd]] for dd in path]
                if len(set(origs)) == len(origs):
                    return path
                dist[nxt] = (state, d)  # keep exploring other arrivals
                continue
            if w != goal:
                queue.append(nxt)
    return None


def _orig_vertex_map(cyl):
    if "orig_vertex" not in cyl.graph._cache:
        orig = list(range(cyl.graph.n_vertices))
        for v, rv in cyl.right_copy.items():
            orig[rv] = v
        cyl.graph._cache["orig_vertex"] = orig
    return cyl.graph._cache["orig_vertex"]


def _route_family(G, cyl, h, k, budget):
    """Greedy peeling with backtracking over the choice of crossing vertices."""
    target = homotopy.from_class(homotopy.period_basis(G), h)
    cyc_vertices = cyl.cycle_vertices()
    orig = _orig_vertex_map(cyl)

    def glue(path):
        darts = [cyl.dart_origin[d] for d in path]
        return darts

    results: list = []

    def search(found, blocked, start_idx):
        if len(found) == k:
            return True
        for i in range(start_idx, len(cyc_vertices)):
            v = cyc_vertices[i]
            if v in blocked:
                continue
            for tgt in (target, (-target[0], -target[1])):
                path = _twin_path(cyl, v, blocked, tgt, budget)
                if path is None:
                    continue
                cycle = glue(path)
                if tgt != target:
                    cycle = [G.partner[d] for d in reversed(cycle)]
                used = {orig[cyl.graph.tail[d]] for d in path}
                used.add(v)
                found.append(cycle)
                if search(found, blocked | used, i + 1):
                    return True
                found.pop()
        return False

    found: list = []
    if search(found, set(), 0):
        return found
    return None


def find_disjoint(G: TorusMap, h, k: int, budget: int | None = None):
    """k pairwise vertex-disjoint simple cycles, each of class h (verified)."""
    h = tuple(h)
    if gcd(abs(h[0]), abs(h[1])) != 1:
        raise MapError("class must be primitive")
    if k < 1:
        raise MapError("k must be positive")
    budget = budget or homotopy.search_budget()
    if k == 1:
        cyc = _simple_cycle_in_class(G, h)
        if cyc is not None:
            if homotopy.class_of(G, cyc) != h:
                cyc = [G.partner[d] for d in reversed(cyc)]
            verify_family(G, [cyc], h, 1)
            return [cyc]
    t_class, t_cycle = _transversal_cut(G, h)
    cyl = cut_along(G, t_cycle)
    try:
        family = _route_family(G, cyl, h, k, budget)
    except homotopy.BudgetError:
        raise FamilyNotFound(
            f"budget exhausted routing {k} disjoint cycles of class {h}",
            verdict=schrijver_check(G, h, k), budget_exhausted=True) from None
    if family is None and G.n_vertices <= 60:
        family = _exhaustive_family(G, h, k)
    if family is None:
        raise FamilyNotFound(
            f"no {k} disjoint cycles of class {h} found",
            verdict=schrijver_check(G, h, k))
    verify_family(G, family, h, k)
    return family


def schrijver_check(G: TorusMap, h, k: int) -> str:
    """Necessary condition for k disjoint class-(m, n) cycles: the point
    (k*n, -k*m) satisfies every computed crossing half-plane."""
    m, n = h
    try:
        poly = homotopy.truncated_polygon(G, 2)
    except homotopy.BudgetError:
        return "inconclusive"
    point = (k * n, -k * m)
    return "consistent" if poly.contains(point) else "inconsistent"


def _exhaustive_family(G: TorusMap, h, k: int):
    """Backstop for small maps: search all simple cycles of class +-h for k
    pairwise disjoint members."""
    h = tuple(h)
    members = []
    seen_sets = set()
    for cyc in all_simple_cycles(G):
        c = homotopy.class_of(G, cyc)
        if c == h or c == (-h[0], -h[1]):
            vs = frozenset(G.walk_vertices(cyc))
            if vs in seen_sets:
                continue
            seen_sets.add(vs)
            if c != h:
                cyc = [G.partner[d] for d in reversed(cyc)]
            members.append((vs, cyc))
    members.sort(key=lambda m: (len(m[0]), sorted(m[0])))

    def grow(idx, union, chosen):
        if len(chosen) == k:
            return list(chosen)
        for i in range(idx, len(members)):
            vs, cyc = members[i]
            if not (vs & union):
                chosen.append(cyc)
                got = grow(i + 1, union | vs, chosen)
                if got is not None:
                    return got
                chosen.pop()
        return None

    return grow(0, frozenset(), [])


# -- brute force on small maps -------------------------------------------------


def all_simple_cycles(G: TorusMap, max_cycles: int = 2_000_000):
    """Every directed simple cycle, as dart lists (both orientations)."""
    out = []
    n = G.n_vertices
    for base in range(n):
        stack = [(base, [], {base})]
        while stack:
            v, darts, used = stack.pop()
            for d in G.rotation[v]:
                w = G.head[d]
                if w == base and darts:
                    out.append(darts + [d])
                    if len(out) > max_cycles:
                        raise homotopy.BudgetError("too many cycles")
                elif w > base and w not in used:
                    stack.append((w, darts + [d], used | {w}))
    return out


def max_disjoint_bruteforce(G: TorusMap, h) -> int:
    """Largest family of pairwise disjoint simple cycles of class h, by
    exhaustive search over all simple cycles (small maps only)."""
    h = tuple(h)
    members = []
    seen_sets = set()
    for cyc in all_simple_cycles(G):
        c = homotopy.class_of(G, cyc)
        if c == h or c == (-h[0], -h[1]):
            vs = frozenset(G.walk_vertices(cyc))
            if vs not in seen_sets:
                seen_sets.add(vs)
                members.append(vs)
    members.sort(key=lambda s: (len(s), sorted(s)))
    best = 0

    def grow(idx, chosen_union, count):
        nonlocal best
        best = max(best, count)
        for i in range(idx, len(members)):
            if not (members[i] & chosen_union):
                grow(i + 1, chosen_union | members[i], count + 1)

    grow(0, frozenset(), 0)
    return best
