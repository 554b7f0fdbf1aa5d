"""Color propagation along closed walks in Eulerian triangulations.

A visit of a walk at a vertex is *bad* when the fan of faces on the left
between the incoming and the outgoing dart has even size; fans on the two
sides have equal parity because degrees are even, so badness does not depend
on the left/right convention.  The propagation value phi repeats the value
from two steps back across a bad visit and moves to the third color
otherwise, which is exactly how a proper 3-coloring behaves along a walk in
an Eulerian triangulation of the plane.
"""

from __future__ import annotations

from .map import MapError, TorusMap
from . import homotopy

Perm = tuple  # images of (0, 1, 2)

IDENTITY: Perm = (0, 1, 2)


def compose(p: Perm, q: Perm) -> Perm:
    """p after q."""
    return (p[q[0]], p[q[1]], p[q[2]])


def inverse(p: Perm) -> Perm:
    out = [0, 0, 0]
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def perm_from_pair(a: int, b: int) -> Perm:
    """The unique permutation with 0 -> a, 1 -> b."""
    if a == b or not (0 <= a <= 2 and 0 <= b <= 2):
        raise ValueError(f"invalid image pair ({a}, {b})")
    return (a, b, 3 - a - b)


class WalkTypeError(MapError):
    pass


def _require_eulerian_triangulation(G: TorusMap):
    if not G.is_triangulation():
        raise WalkTypeError("walk types need a triangulation")
    if not G.is_eulerian():
        raise WalkTypeError("walk types need even degrees")


def bad_positions(G: TorusMap, darts) -> set[int]:
    """Positions i whose visit (arrive along dart i-1, leave along dart i)
    has an even left fan."""
    if not G.is_triangulation():
        raise WalkTypeError("bad vertices are defined on triangulations")
    if not G.is_closed_walk(darts):
        raise WalkTypeError("walk is not closed")
    n = len(darts)
    return {i for i in range(n) if G.left_fan(darts[i - 1], darts[i]) % 2 == 0}


def phi_sequence(G: TorusMap, darts) -> list[int]:
    """phi(0..len+1) along a closed walk; phi(k) is the value at vertex k mod len.

    The step to phi(k) is governed by the visit at the intermediate vertex
    k-1: a bad visit reflects (phi(k) = phi(k-2)), a good one takes the third
    color.
    """
    _require_eulerian_triangulation(G)
    bad = bad_positions(G, darts)
    n = len(darts)
    phi = [0, 1]
    for k in range(2, n + 2):
        if (k - 1) % n in bad:
            phi.append(phi[k - 2])
        else:
            phi.append(3 - phi[k - 1] - phi[k - 2])
    return phi


def walk_type(G: TorusMap, darts) -> Perm:
    """The permutation sending (0, 1) to (phi(len), phi(len+1)).

    The type is anchored at the walk's starting vertex: rotating the start
    conjugates it (a concrete 7-cycle in the 37-vertex circulant conjugates a
    3-cycle type to its inverse), so only identity-ness is start-free.  All
    class-level uses below therefore fix a common base vertex.
    """
    phi = phi_sequence(G, darts)
    return perm_from_pair(phi[-2], phi[-1])


def anchored_representative(G: TorusMap, h) -> list[int]:
    """A class-h loop anchored to a fixed base corner: it starts with the
    first dart of vertex 0 and returns along that dart's partner.

    Pinning the first and last darts pins the junction corners, which makes
    the type a well-defined, multiplicative function of the class; a free
    starting corner only determines the type up to conjugacy.
    """
    d_star = G.rotation[0][0]
    e_star = G.partner[d_star]
    w = G.head[d_star]
    if tuple(h) == (0, 0):
        inner: list[int] = []
    else:
        inner = homotopy.closed_walk_in_class(G, h, base=w)
    return [d_star] + inner + [e_star]


def tau(G: TorusMap, h) -> Perm:
    """Type of the class h, from its anchored representative (cached)."""
    h = tuple(h)
    cache = G._cache.setdefault("tau", {})
    if h in cache:
        return cache[h]
    _require_eulerian_triangulation(G)
    t = walk_type(G, anchored_representative(G, h))
    if h == (0, 0):
        assert t == IDENTITY
    cache[h] = t
    return t


def class_has_identity_type(G: TorusMap, h) -> bool:
    """Whether walks of class h have identity type.

    Identity-ness is a genuine free-homotopy invariant (conjugation fixes the
    identity), unlike the full anchored type.
    """
    return tau(G, h) == IDENTITY


def tau_image(G: TorusMap) -> set[Perm]:
    """Image of tau, generated from a short unimodular class pair; must be an
    abelian subgroup (of size 1, 2 or 3)."""
    basis = homotopy.period_basis(G)
    r1, r2 = homotopy.reduced_lattice_basis(basis)
    u1 = homotopy.to_class(basis, r1)
    u2 = homotopy.to_class(basis, r2)
    assert abs(u1[0] * u2[1] - u1[1] * u2[0]) == 1
    t1, t2 = tau(G, u1), tau(G, u2)
    if compose(t1, t2) != compose(t2, t1):
        raise WalkTypeError("walk types of the generators do not commute")
    image = {IDENTITY}
    frontier = [t1, t2]
    while frontier:
        t = frontier.pop()
        if t in image:
            continue
        image.add(t)
        frontier.extend(compose(t, g) for g in (t1, t2))
    if len(image) > 3:
        raise WalkTypeError("type image is not abelian-sized")
    return image


# -- homotopy moves -----------------------------------------------------------


def spike_insert(G: TorusMap, darts, i: int, out_dart: int) -> list[int]:
    """Insert the detour (out_dart, partner) at the visit of position i."""
    darts = list(darts)
    v = G.tail[darts[i]]
    if G.tail[out_dart] != v:
        raise WalkTypeError("spike dart does not start at the walk vertex")
    return darts[:i] + [out_dart, G.partner[out_dart]] + darts[i:]


def spike_remove(G: TorusMap, darts, i: int) -> list[int]:
    """Remove the immediate backtrack at positions i, i+1."""
    darts = list(darts)
    n = len(darts)
    if n < 3:
        raise WalkTypeError("walk too short to remove a spike")
    j = (i + 1) % n
    if darts[j] != G.partner[darts[i]]:
        raise WalkTypeError("positions do not form a spike")
    if j > i:
        return darts[:i] + darts[j + 1:]
    return darts[j + 1:i]


def face_slide(G: TorusMap, darts, i: int, side: str = "left") -> list[int]:
    """Replace dart i by the two-edge detour around its left or right face."""
    darts = list(darts)
    d = darts[i]
    if side == "left":
        e = G.next_in_face(d)
        f = G.next_in_face(e)
        if G.next_in_face(f) != d:
            raise WalkTypeError("left face is not a triangle")
        detour = [G.partner[f], G.partner[e]]
    elif side == "right":
        p = G.partner[d]
        e = G.next_in_face(p)
        f = G.next_in_face(e)
        if G.next_in_face(f) != p:
            raise WalkTypeError("right face is not a triangle")
        detour = [e, f]
    else:
        raise ValueError("side must be 'left' or 'right'")
    return darts[:i] + detour + darts[i + 1:]


def applicable_moves(G: TorusMap, darts):
    """Moves applicable to the walk's interior (the subwalk away from the
    starting vertex, whose corner anchors the type)."""
    moves = []
    n = len(darts)
    for i in range(1, n):
        v = G.tail[darts[i]]
        for out in G.rotation[v]:
            moves.append(("spike_insert", i, out))
        if i <= n - 2:
            moves.append(("face_slide_left", i))
            moves.append(("face_slide_right", i))
        if i <= n - 2 and darts[i + 1] == G.partner[darts[i]]:
            moves.append(("spike_remove", i))
    return moves


def apply_move(G: TorusMap, darts, move):
    name = move[0]
    if name == "spike_insert":
        return spike_insert(G, darts, move[1], move[2])
    if name == "spike_remove":
        return spike_remove(G, darts, move[1])
    if name == "face_slide_left":
        return face_slide(G, darts, move[1], "left")
    if name == "face_slide_right":
        return face_slide(G, darts, move[1], "right")
    raise ValueError(f"unknown move {name}")
