"""Completing cut-open cylinders to sphere Eulerian triangulations, and
3-coloring plane (sphere) Eulerian triangulations by dual propagation.

Filling a boundary disk walks the bounding cycle with the propagation values
phi: a vertex is bad exactly when its current degree is odd, a 2-color phi
pattern is closed with a hub vertex, and otherwise an ear with three distinct
values is cut off by a chord until a triangle remains.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .map import SPHERE, MapError, TorusMap, CylinderGraph
from . import walks


class PlanarError(MapError):
    pass


class _Builder:
    """Mutable copy of a map used while inserting chords and hubs."""

    def __init__(self, G: TorusMap):
        self.n_vertices = G.n_vertices
        self.tail = list(G.tail)
        self.head = list(G.head)
        self.partner = list(G.partner)
        self.rotation = [list(r) for r in G.rotation]

    def degree(self, v):
        return len(self.rotation[v])

    def new_vertex(self):
        self.rotation.append([])
        self.n_vertices += 1
        return self.n_vertices - 1

    def add_edge_darts(self, u, v):
        d = len(self.tail)
        self.tail += [u, v]
        self.head += [v, u]
        self.partner += [d + 1, d]
        return d, d + 1

    def insert_after(self, v, anchor, dart):
        i = self.rotation[v].index(anchor)
        self.rotation[v].insert(i + 1, dart)

    def finish(self) -> TorusMap:
        labels = [(0, 0)] * len(self.tail)
        return TorusMap(self.n_vertices, self.tail, self.head, labels,
                        self.partner, self.rotation, surface=SPHERE)


@dataclass
class DiskFill:
    boundary_vertices: list
    phi: list
    chords: list = field(default_factory=list)  # (u, skipped, w) triples
    hub: int | None = None


@dataclass
class Completion:
    graph: TorusMap
    left: DiskFill
    right: DiskFill
    cylinder: CylinderGraph


def _boundary_phi(bld: _Builder, verts) -> list[int]:
    """phi along a boundary cycle whose disk side is faceless: a vertex is bad
    iff its current degree is odd (the visible fan has deg - 1 faces)."""
    n = len(verts)
    bad = [bld.degree(v) % 2 == 1 for v in verts]
    phi = [0, 1]
    for k in range(2, n + 2):
        if bad[(k - 1) % n]:
            phi.append(phi[k - 2])
        else:
            phi.append(3 - phi[k - 1] - phi[k - 2])
    if phi[-2] != 0 or phi[-1] != 1:
        raise PlanarError("boundary cycle does not have identity type")
    return phi[:n]


def _fill_disk(bld: _Builder, face_darts) -> DiskFill:
    verts = [bld.tail[d] for d in face_darts]
    if len(set(verts)) != len(verts):
        raise PlanarError("boundary walk is not a simple cycle")
    out = list(face_darts)
    phi = _boundary_phi(bld, verts)
    fill = DiskFill(boundary_vertices=list(verts), phi=list(phi))
    colors = list(phi)
    while True:
        n = len(verts)
        if len(set(colors)) == 2:
            if n % 2:
                raise PlanarError("two-colored boundary of odd length")
            hub = bld.new_vertex()
            spokes = []
            for j in range(n):
                to_v, from_v = bld.add_edge_darts(hub, verts[j])
                bld.insert_after(verts[j], out[j], from_v)
                spokes.append(to_v)
            bld.rotation[hub] = spokes
            fill.hub = hub
            return fill
        if n == 3:
            if len(set(colors)) != 3:
                raise PlanarError("length-3 boundary without three colors")
            for v in verts:
                if bld.degree(v) % 2:
                    raise PlanarError("odd degree at a final triangle vertex")
            return fill
        # ear with three distinct values, scanned from the lowest vertex id
        start = verts.index(min(verts))
        j = None
        for s in range(n):
            i = (start + s) % n
            if len({colors[i], colors[(i + 1) % n], colors[(i + 2) % n]}) == 3:
                j = i
                break
        if j is None:
            raise PlanarError("no three-colored ear on a 3-colored boundary")
        u, skipped, w = verts[j], verts[(j + 1) % n], verts[(j + 2) % n]
        c, cbar = bld.add_edge_darts(u, w)
        bld.insert_after(u, out[j], c)
        bld.insert_after(w, out[(j + 2) % n], cbar)
        fill.chords.append((u, skipped, w))
        # drop the skipped vertex; the chord becomes the boundary dart of u
        k = (j + 1) % n
        out[j] = c
        del verts[k], out[k], colors[k]
        if k < j:
            j -= 1


def complete_cylinder(cyl: CylinderGraph) -> Completion:
    """Fill both boundary disks so that every face is a triangle and every
    vertex degree is even; requires the cut cycle to have identity type."""
    if walks.walk_type(cyl.source, list(cyl.cycle_darts)) != walks.IDENTITY:
        raise PlanarError("cut cycle does not have identity type")
    G = cyl.graph
    bld = _Builder(G)
    left_face = [G.partner[d] for d in reversed(cyl.left_boundary)]
    right_face = list(cyl.right_boundary)
    # identify the actual face walks containing these darts
    face_of = G.face_of_dart()
    faces = G.faces()
    lf = faces[face_of[left_face[0]]]
    rf = faces[face_of[right_face[0]]]
    if sorted(lf) != sorted(left_face) or sorted(rf) != sorted(right_face):
        raise PlanarError("boundary faces not found where expected")
    left = _fill_disk(bld, lf)
    right = _fill_disk(bld, rf)
    graph = bld.finish()
    if not graph.is_triangulation():
        raise PlanarError("completion left a non-triangular face")
    if not graph.is_eulerian():
        raise PlanarError("completion left an odd degree")
    return Completion(graph=graph, left=left, right=right, cylinder=cyl)


def three_color(T: TorusMap, seed_face: int = 0) -> dict:
    """Proper 3-coloring of a sphere Eulerian triangulation by propagating
    across dual edges; the result is normalized so the lowest vertex gets
    color 0 and its lowest neighbour color 1."""
    if T.surface != SPHERE:
        raise PlanarError("three_color expects a sphere map")
    if not T.is_triangulation():
        raise PlanarError("not a triangulation")
    if not T.is_eulerian():
        raise PlanarError("graph has an odd degree; not Eulerian")
    faces = T.faces()
    face_of = T.face_of_dart()
    colors: dict[int, int] = {}

    def assign(v, c, dart):
        if colors.get(v, c) != c:
            u, w = T.tail[dart], T.head[dart]
            raise PlanarError(f"propagation conflict across edge {u}-{w}")
        colors[v] = c

    f0 = faces[seed_face]
    a, b, c = (T.tail[d] for d in f0)
    if len({a, b, c}) != 3:
        raise PlanarError("degenerate seed face")
    colors[a], colors[b], colors[c] = 0, 1, 2
    stack = [seed_face]
    seen = {seed_face}
    while stack:
        fi = stack.pop()
        for d in faces[fi]:
            gi = face_of[T.partner[d]]
            u, v = T.tail[d], T.head[d]
            g = faces[gi]
            (w,) = [T.tail[e] for e in g if T.tail[e] not in (u, v)] or [None]
            if w is None:
                raise PlanarError("adjacent face without an opposite corner")
            if u in colors and v in colors:
                assign(w, 3 - colors[u] - colors[v], d)
            if gi not in seen:
                seen.add(gi)
                stack.append(gi)
    if len(seen) != len(faces) or len(colors) != T.n_vertices:
        raise PlanarError("propagation did not reach the whole sphere")
    for d in range(T.n_darts):
        if colors[T.tail[d]] == colors[T.head[d]]:
            raise PlanarError(
                f"propagation conflict across edge {T.tail[d]}-{T.head[d]}")
    v0 = 0
    n0 = min(T.head[d] for d in T.rotation[v0])
    perm = {colors[v0]: 0, colors[n0]: 1,
            3 - colors[v0] - colors[n0]: 2}
    return {v: perm[c] for v, c in colors.items()}
