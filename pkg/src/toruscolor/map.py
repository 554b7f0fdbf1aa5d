"""Rotation-system maps on the torus (and on the sphere, for cut-open pieces).

A map is stored as a set of darts (directed half-edges).  Every dart knows its
tail vertex, its partner (the reversed dart) and an integer translation label
(dx, dy); the counterclockwise order of the outgoing darts around each vertex
is the rotation system.  Faces are traced with the rule

    next_in_face(d) = previous-in-rotation(partner(d))

so the face containing dart d lies to the left of d.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class MapError(Exception):
    """Base error for map parsing and validation."""


class MapFormatError(MapError):
    """Raised on malformed map files; carries line information."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MapInvariantError(MapError):
    """Raised when a structurally well-formed map violates an invariant."""


TORUS = "torus"
SPHERE = "sphere"

_HEADERS = {"TORUSMAP 1": TORUS, "SPHERE 1": SPHERE}


class TorusMap:
    """Immutable rotation-system map with labelled darts.

    Darts are integers 0..2E-1.  ``rotation[v]`` lists the outgoing darts of
    ``v`` counterclockwise.  The map is validated on construction and must not
    be mutated afterwards; derived data (faces, period lattice, crossing
    geometry) is cached lazily by other modules in ``_cache``.
    """

    def __init__(self, n_vertices: int, tails, heads, labels, partner, rotation,
                 surface: str = TORUS, check: bool = True):
        self.n_vertices = n_vertices
        self.tail = list(tails)
        self.head = list(heads)
        self.label = [tuple(l) for l in labels]
        self.partner = list(partner)
        self.rotation = [list(r) for r in rotation]
        self.surface = surface
        self.rot_pos = [None] * len(self.tail)
        for v, rot in enumerate(self.rotation):
            for i, d in enumerate(rot):
                self.rot_pos[d] = (v, i)
        self._cache: dict = {}
        if check:
            self.validate()

    # -- basic queries ---------------------------------------------------

    @property
    def n_darts(self) -> int:
        return len(self.tail)

    @property
    def n_edges(self) -> int:
        return len(self.tail) // 2

    def degree(self, v: int) -> int:
        return len(self.rotation[v])

    def next_in_rotation(self, d: int) -> int:
        v, i = self.rot_pos[d]
        rot = self.rotation[v]
        return rot[(i + 1) % len(rot)]

    def prev_in_rotation(self, d: int) -> int:
        v, i = self.rot_pos[d]
        rot = self.rotation[v]
        return rot[(i - 1) % len(rot)]

    def next_in_face(self, d: int) -> int:
        return self.prev_in_rotation(self.partner[d])

    def darts_between(self, u: int, v: int) -> list[int]:
        """Outgoing darts of u with head v, in rotation order."""
        return [d for d in self.rotation[u] if self.head[d] == v]

    def dart_between(self, u: int, v: int) -> int:
        ds = self.darts_between(u, v)
        if not ds:
            raise MapError(f"no edge from {u} to {v}")
        return ds[0]

    # -- faces -----------------------------------------------------------

    def faces(self) -> list[list[int]]:
        """Face walks as dart lists; each dart appears in exactly one walk."""
        if "faces" in self._cache:
            return self._cache["faces"]
        seen = [False] * self.n_darts
        faces = []
        for d0 in range(self.n_darts):
            if seen[d0]:
                continue
            walk = []
            d = d0
            while not seen[d]:
                seen[d] = True
                walk.append(d)
                d = self.next_in_face(d)
            if d != d0:
                raise MapInvariantError("face tracing did not close up")
            faces.append(walk)
        self._cache["faces"] = faces
        return faces

    def face_of_dart(self) -> list[int]:
        if "face_of" not in self._cache:
            face_of = [None] * self.n_darts
            for i, f in enumerate(self.faces()):
                for d in f:
                    face_of[d] = i
            self._cache["face_of"] = face_of
        return self._cache["face_of"]

    def n_faces(self) -> int:
        return len(self.faces())

    def euler_characteristic(self) -> int:
        return self.n_vertices - self.n_edges + self.n_faces()

    def is_triangulation(self) -> bool:
        return all(len(f) == 3 for f in self.faces())

    def is_eulerian(self) -> bool:
        return all(self.degree(v) % 2 == 0 for v in range(self.n_vertices))

    # -- walks -----------------------------------------------------------

    def walk_label_sum(self, darts) -> tuple[int, int]:
        x = y = 0
        for d in darts:
            dx, dy = self.label[d]
            x += dx
            y += dy
        return (x, y)

    def walk_vertices(self, darts) -> list[int]:
        return [self.tail[d] for d in darts]

    def is_closed_walk(self, darts) -> bool:
        if not darts:
            return False
        for d, e in zip(darts, darts[1:]):
            if self.head[d] != self.tail[e]:
                return False
        return self.head[darts[-1]] == self.tail[darts[0]]

    def is_simple_cycle(self, darts) -> bool:
        if not self.is_closed_walk(darts):
            return False
        vs = self.walk_vertices(darts)
        return len(set(vs)) == len(vs)

    def darts_for_vertex_walk(self, vertices, closed=True) -> list[int]:
        """Resolve a vertex sequence to darts (first dart in rotation order)."""
        pairs = list(zip(vertices, vertices[1:]))
        if closed:
            pairs.append((vertices[-1], vertices[0]))
        return [self.dart_between(u, v) for u, v in pairs]

    def left_fan(self, d_in: int, d_out: int) -> int:
        """Number of faces strictly to the left when entering along d_in and
        leaving along d_out; a U-turn sees the full fan deg(v)."""
        v = self.head[d_in]
        if self.tail[d_out] != v:
            raise MapError("darts do not meet at a common vertex")
        _, i_in = self.rot_pos[self.partner[d_in]]
        _, i_out = self.rot_pos[d_out]
        fan = (i_in - i_out) % self.degree(v)
        return fan if fan else self.degree(v)

    # -- validation -------------------------------------------------------

    def validate(self) -> None:
        n = self.n_darts
        if n % 2:
            raise MapInvariantError("odd number of darts")
        seen = [False] * n
        for v, rot in enumerate(self.rotation):
            for d in rot:
                if self.tail[d] != v:
                    raise MapInvariantError(f"dart {d} in rotation of {v} but tail is {self.tail[d]}")
                if seen[d]:
                    raise MapInvariantError(f"dart {d} listed twice")
                seen[d] = True
        if not all(seen):
            raise MapInvariantError("dart missing from all rotations")
        for d in range(n):
            p = self.partner[d]
            if p == d or self.partner[p] != d:
                raise MapInvariantError(f"broken involution at dart {d}")
            if self.head[d] != self.tail[p] or self.head[p] != self.tail[d]:
                raise MapInvariantError(f"partner of dart {d} has inconsistent endpoints")
            lx, ly = self.label[d]
            px, py = self.label[p]
            if (px, py) != (-lx, -ly):
                raise MapInvariantError(f"label antisymmetry violated at dart {d}")
        if self.surface == SPHERE:
            if any(l != (0, 0) for l in self.label):
                raise MapInvariantError("sphere map must carry zero labels")
        for f in self.faces():
            if self.walk_label_sum(f) != (0, 0):
                raise MapInvariantError(f"non-contractible face {self.walk_vertices(f)}")
        chi = self.euler_characteristic()
        want = 0 if self.surface == TORUS else 2
        if chi != want:
            raise MapInvariantError(f"Euler characteristic {chi} != {want} for {self.surface}")
        if not self._connected():
            raise MapInvariantError("map is not connected")

    def _connected(self) -> bool:
        if self.n_vertices == 0:
            return False
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for d in self.rotation[v]:
                w = self.head[d]
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n_vertices

    # -- serialization ----------------------------------------------------

    def to_text(self) -> str:
        """Canonical text form: sorted vertex lines, bit-identical output."""
        # darts that need explicit edge ids: parallel edges with equal (u,v,label)
        groups: dict[tuple, list[int]] = {}
        for d in range(self.n_darts):
            groups.setdefault((self.tail[d], self.head[d], self.label[d]), []).append(d)
        need_eid = set()
        for key, ds in groups.items():
            if len(ds) > 1:
                need_eid.update(ds)
        eid = {}
        next_eid = 0
        for d in sorted(need_eid):
            if d not in eid:
                eid[d] = next_eid
                eid[self.partner[d]] = next_eid
                next_eid += 1
        header = "TORUSMAP 1" if self.surface == TORUS else "SPHERE 1"
        lines = [header, f"V {self.n_vertices}"]
        for v in range(self.n_vertices):
            parts = []
            for d in self.rotation[v]:
                dx, dy = self.label[d]
                if d in eid:
                    parts.append(f"{self.head[d]}@{eid[d]}/{dx}/{dy}")
                else:
                    parts.append(f"{self.head[d]}/{dx}/{dy}")
            lines.append(f"{v} : " + " ".join(parts))
        return "\n".join(lines) + "\n"


def from_rotations(rotations, surface: str = TORUS, check: bool = True) -> TorusMap:
    """Build a map from per-vertex rotations of (head, (dx, dy)[, edge_id]).

    Darts are numbered in listing order.  Darts pair up by matching
    (tail, head, label) against (head, tail, -label), in listing order;
    explicit shared edge ids override the matching for parallel edges.
    """
    tails, heads, labels, eids = [], [], [], []
    rotation = []
    for v, rot in enumerate(rotations):
        ds = []
        for item in rot:
            if len(item) == 3:
                w, lab, e = item
            else:
                w, lab = item
                e = None
            d = len(tails)
            tails.append(v)
            heads.append(w)
            labels.append((int(lab[0]), int(lab[1])))
            eids.append(e)
            ds.append(d)
        rotation.append(ds)
    n = len(tails)
    partner = [None] * n
    by_eid: dict = {}
    pool: dict[tuple, list[int]] = {}
    for d in range(n):
        if eids[d] is not None:
            by_eid.setdefault(eids[d], []).append(d)
        else:
            pool.setdefault((tails[d], heads[d], labels[d]), []).append(d)
    for e, ds in by_eid.items():
        if len(ds) != 2:
            raise MapFormatError(f"edge id {e} used {len(ds)} times (need exactly 2)")
        a, b = ds
        if (tails[a], heads[a]) != (heads[b], tails[b]) or \
           labels[a] != (-labels[b][0], -labels[b][1]):
            raise MapFormatError(f"edge id {e} does not pair reversed darts with negated labels")
        partner[a], partner[b] = b, a
    for key in sorted(pool):
        u, w, (dx, dy) = key
        ds = pool[key]
        if any(partner[d] is not None for d in ds):
            continue
        rkey = (w, u, (-dx, -dy))
        if key == rkey:
            # self-paired group (loop with label (0,0) is degenerate but caught later;
            # loops pair within their own group)
            if len(ds) % 2:
                raise MapFormatError(f"unmatched dart {u}->{w}/{dx}/{dy}")
            for a, b in zip(ds[0::2], ds[1::2]):
                partner[a], partner[b] = b, a
            continue
        rs = pool.get(rkey, [])
        if len(ds) != len(rs):
            raise MapFormatError(f"unmatched dart {u}->{w}/{dx}/{dy}")
        if len(ds) > 1:
            raise MapFormatError(
                f"ambiguous parallel edges {u}->{w}/{dx}/{dy}; tag them with @edgeid")
        for a, b in zip(ds, rs):
            partner[a], partner[b] = b, a
    return TorusMap(len(rotations), tails, heads, labels, partner, rotation,
                    surface=surface, check=check)


def loads(text: str) -> TorusMap:
    """Parse the TORUSMAP text format and return a validated map."""
    lines = text.splitlines()
    cleaned = []
    for i, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            cleaned.append((i, line))
    if not cleaned:
        raise MapFormatError("empty file")
    lineno, header = cleaned[0]
    if header not in _HEADERS:
        raise MapFormatError(f"unknown header {header!r}", lineno)
    surface = _HEADERS[header]
    if len(cleaned) < 2:
        raise MapFormatError("missing vertex count", lineno)
    lineno, vline = cleaned[1]
    parts = vline.split()
    if len(parts) != 2 or parts[0] != "V" or not parts[1].isdigit():
        raise MapFormatError(f"expected 'V <n>', got {vline!r}", lineno)
    nv = int(parts[1])
    rotations = [None] * nv
    for lineno, line in cleaned[2:]:
        if ":" not in line:
            raise MapFormatError("expected '<vid> : <darts>'", lineno)
        left, right = line.split(":", 1)
        try:
            v = int(left.strip())
        except ValueError:
            raise MapFormatError(f"bad vertex id {left.strip()!r}", lineno) from None
        if not 0 <= v < nv:
            raise MapFormatError(f"vertex id {v} out of range", lineno)
        if rotations[v] is not None:
            raise MapFormatError(f"duplicate line for vertex {v}", lineno)
        rot = []
        for tok in right.split():
            rot.append(_parse_dart(tok, lineno))
        rotations[v] = rot
    missing = [v for v in range(nv) if rotations[v] is None]
    if missing:
        raise MapFormatError(f"no rotation line for vertex {missing[0]}")
    for lineno, line in cleaned[2:]:
        v = int(line.split(":", 1)[0])
        for w, _, _ in rotations[v]:
            if not 0 <= w < nv:
                raise MapFormatError(f"neighbour {w} out of range", lineno)
    try:
        return from_rotations(rotations, surface=surface)
    except MapError:
        raise
    except Exception as exc:  # pragma: no cover - defensive
        raise MapFormatError(str(exc)) from exc


def _parse_dart(tok: str, lineno: int):
    pieces = tok.split("/")
    if len(pieces) != 3:
        raise MapFormatError(f"bad dart token {tok!r} (want nbr/dx/dy)", lineno)
    head_part, sx, sy = pieces
    eid = None
    if "@" in head_part:
        h, e = head_part.split("@", 1)
        try:
            eid = int(e)
        except ValueError:
            raise MapFormatError(f"bad edge id in {tok!r}", lineno) from None
    else:
        h = head_part
    try:
        return (int(h), (int(sx), int(sy)), eid)
    except ValueError:
        raise MapFormatError(f"bad integer in dart token {tok!r}", lineno) from None


def load(path) -> TorusMap:
    with open(path, "r", encoding="utf-8") as fh:
        return loads(fh.read())


def dump(G: TorusMap, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(G.to_text())


# -- cutting and gluing -----------------------------------------------------


@dataclass
class CylinderGraph:
    """A torus map cut open along a simple non-contractible cycle.

    ``graph`` is the cut-open map embedded in the sphere (two boundary faces).
    ``left_copy``/``right_copy`` map each cut-cycle vertex to its two copies;
    the left copy keeps the faces on the left of the (directed) cut cycle.
    """

    graph: TorusMap
    source: TorusMap
    cycle_darts: tuple
    left_copy: dict
    right_copy: dict
    left_boundary: list   # darts of the left boundary cycle, in cycle order
    right_boundary: list  # darts of the right boundary cycle, in cycle order
    dart_origin: dict = field(default_factory=dict)  # cylinder dart -> source dart

    def cycle_vertices(self) -> list[int]:
        return [self.source.tail[d] for d in self.cycle_darts]

    def twin_pairs(self) -> list[tuple[int, int, int]]:
        """(original, left copy, right copy) for each cut-cycle vertex."""
        return [(v, self.left_copy[v], self.right_copy[v]) for v in self.cycle_vertices()]


def cut_along(G: TorusMap, cycle_darts) -> CylinderGraph:
    """Cut a torus map along a simple non-contractible cycle.

    Cycle vertices and edges are duplicated; the resulting map is a sphere map
    (the two boundary disks count as faces) whose labels are all zero.
    """
    cycle_darts = list(cycle_darts)
    if not G.is_simple_cycle(cycle_darts):
        raise MapError("cut cycle must be a simple closed cycle")
    if G.walk_label_sum(cycle_darts) == (0, 0):
        raise MapError("cut cycle is contractible")
    L = len(cycle_darts)
    cyc_vertices = G.walk_vertices(cycle_darts)
    on_cycle = {v: i for i, v in enumerate(cyc_vertices)}
    cycle_dart_set = set(cycle_darts) | {G.partner[d] for d in cycle_darts}

    nv = G.n_vertices
    left_copy = {v: v for v in cyc_vertices}   # left copy keeps the original id
    right_copy = {v: nv + i for i, v in enumerate(cyc_vertices)}

    # split each cycle vertex's rotation: starting at the outgoing cycle dart
    # d_i, the darts up to (and including) the reversed incoming cycle dart
    # p_{i-1} go to the left copy, the rest to the right copy.
    rotations = []
    dart_map_left = {}
    dart_map_right = {}

    def classify(v):
        i = on_cycle[v]
        d_out = cycle_darts[i]
        p_in = G.partner[cycle_darts[i - 1]]
        rot = G.rotation[v]
        j = rot.index(d_out)
        order = rot[j:] + rot[:j]
        k = order.index(p_in)
        return order[:k + 1], order[k + 1:]  # left part (incl d_out..p_in), right part

    new_rot: list[list] = [[] for _ in range(nv + L)]
    # entries are (source_dart, side) placeholders; darts renumbered afterwards
    for v in range(nv):
        if v in on_cycle:
            left, right = classify(v)
            new_rot[left_copy[v]] = [(d, "L") for d in left]
            new_rot[right_copy[v]] = [(cycle_darts[on_cycle[v]], "R"),
                                      (G.partner[cycle_darts[on_cycle[v] - 1]], "R")] + \
                                     [(d, "N") for d in right]
        else:
            new_rot[v] = [(d, "N") for d in G.rotation[v]]

    # assign cylinder dart ids in rotation listing order
    tails, heads, labels = [], [], []
    ids: dict[tuple, int] = {}
    rotation_ids = []
    for v, rot in enumerate(new_rot):
        ds = []
        for key in rot:
            d = len(tails)
            ids[key if key[0] in cycle_dart_set else (key[0], "N")] = d
            tails.append(v)
            heads.append(None)
            labels.append((0, 0))
            ds.append(d)
        rotation_ids.append(ds)

    def cyl_id(src_dart, side):
        if src_dart in cycle_dart_set:
            return ids[(src_dart, side)]
        return ids[(src_dart, "N")]

    def copy_of_vertex(v, side):
        if v in on_cycle:
            return left_copy[v] if side == "L" else right_copy[v]
        return v

    partner = [None] * len(tails)
    origin = {}
    for (src, side), d in ids.items():
        origin[d] = src
        if src in cycle_dart_set:
            heads[d] = copy_of_vertex(G.head[src], side)
            partner[d] = ids[(G.partner[src], side)]
        else:
            # non-cycle dart: head copy determined by which side the reversed
            # dart was assigned to (if the head is a cycle vertex)
            hv = G.head[src]
            if hv in on_cycle:
                rev = G.partner[src]
                left, right = classify(hv)
                hside = "L" if rev in left else "R"
                heads[d] = copy_of_vertex(hv, hside)
            else:
                heads[d] = hv
            partner[d] = cyl_id(G.partner[src], None)

    graph = TorusMap(nv + L, tails, heads, labels, partner, rotation_ids,
                     surface=SPHERE)
    left_boundary = [cyl_id(d, "L") for d in cycle_darts]
    right_boundary = [cyl_id(d, "R") for d in cycle_darts]
    return CylinderGraph(graph=graph, source=G, cycle_darts=tuple(cycle_darts),
                         left_copy=left_copy, right_copy=right_copy,
                         left_boundary=left_boundary, right_boundary=right_boundary,
                         dart_origin=origin)


def glue_coloring(cyl: CylinderGraph, coloring: dict) -> dict:
    """Merge a coloring of the cylinder back onto the source torus map.

    Corresponding boundary copies must agree; the offending original vertex is
    reported otherwise.
    """
    out = {}
    for v, lv, rv in cyl.twin_pairs():
        if coloring[lv] != coloring[rv]:
            raise MapError(f"boundary color mismatch at cut-cycle vertex {v}")
        out[v] = coloring[lv]
    right_ids = set(cyl.right_copy.values())
    for v in range(cyl.graph.n_vertices):
        if v in right_ids or v in out:
            continue
        out[v] = coloring[v]
    if len(out) != cyl.source.n_vertices:
        raise MapError("glued coloring does not cover the source vertex set")
    return out


def reglue_map(cyl: CylinderGraph) -> TorusMap:
    """Re-identify the boundary copies; used by the cut/glue round-trip check."""
    G = cyl.source
    nv = G.n_vertices
    rotations = [None] * nv
    cyc_vertices = cyl.cycle_vertices()
    right_ids = {rv: v for v, rv in cyl.right_copy.items()}
    for v in range(cyl.graph.n_vertices):
        if v in right_ids:
            continue
        rot = [cyl.dart_origin[d] for d in cyl.graph.rotation[v]]
        if v in cyl.left_copy and cyl.left_copy[v] == v and v in set(cyc_vertices):
            rv = cyl.right_copy[v]
            # left rotation ends at p_{i-1}; append the right side's non-cycle darts
            right_rot = [cyl.dart_origin[d] for d in cyl.graph.rotation[rv]]
            rot = rot + right_rot[2:]
        # align the cyclic order with the source rotation's starting dart
        j = rot.index(G.rotation[v][0])
        rotations[v] = rot[j:] + rot[:j]
    tails = G.tail
    return TorusMap(nv, tails, G.head, G.label, G.partner, rotations,
                    surface=TORUS)
