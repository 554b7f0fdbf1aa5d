"""Selecting a unimodular pair of homotopy classes with four disjoint cycles
in each of h1, h2, h1+h2, h1-h2.

The primary strategy mirrors the convexity argument: reparameterize so the
crossing polygon contains (0, 15/2), extract witness points on the slices
x = 10, y = -10 and x + y = 10, certify one of the two 4-point sets inside
their hull, and translate its points back into classes via Schrijver's
point-class pairing (k*n, -k*m) <-> k cycles of class (m, n).  Enumeration of
unimodular pairs ordered by crossing number is the fallback; either way the
cycle families are found and verified explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .map import MapError, TorusMap
from . import cycles, homotopy
from .geometry import QuadrupleChoice, RationalPolygon, select_quadruple


class SelectionError(MapError):
    pass


@dataclass
class FourClassSelection:
    h1: tuple
    h2: tuple
    families: dict            # class -> list of 4 disjoint cycles (dart lists)
    mode: str                 # "polygon" or "enumeration"
    quadruple: QuadrupleChoice | None = None
    point_transform: tuple | None = None

    def class_list(self):
        h1, h2 = self.h1, self.h2
        return [h1, h2, (h1[0] + h2[0], h1[1] + h2[1]),
                (h1[0] - h2[0], h1[1] - h2[1])]


def _mat_mul(A, B):
    return ((A[0][0] * B[0][0] + A[0][1] * B[1][0],
             A[0][0] * B[0][1] + A[0][1] * B[1][1]),
            (A[1][0] * B[0][0] + A[1][1] * B[1][0],
             A[1][0] * B[0][1] + A[1][1] * B[1][1]))


def _mat_vec(A, v):
    return (A[0][0] * v[0] + A[0][1] * v[1], A[1][0] * v[0] + A[1][1] * v[1])


def _transpose(A):
    return ((A[0][0], A[1][0]), (A[0][1], A[1][1]))


def _point_to_frame_class(p):
    """Schrijver pairing: the point 4*(n, -m) certifies 4 cycles of class (m, n)."""
    px, py = p
    assert px % 4 == 0 and py % 4 == 0
    return (-py // 4, px // 4)


def _seven_half_witness(P: RationalPolygon):
    """A nonzero integer point (a, b) with (15/2 a, 15/2 b) in P, or None."""
    r_inf = max(max(abs(x), abs(y)) for x, y in P.vertices)
    cap = int(Fraction(2, 15) * r_inf) + 1
    best = None
    for a in range(-cap, cap + 1):
        for b in range(-cap, cap + 1):
            if (a, b) == (0, 0):
                continue
            if P.gauge((a, b)) <= Fraction(2, 15):
                key = (abs(a) + abs(b), (-a, -b))
                if best is None or key < best[1]:
                    best = ((a, b), key)
    return best[0] if best else None


def _extend_to_point_transform(a, b):
    """Unimodular V with V*(a, b) = (0, g), g = gcd > 0."""
    g, p, q = cycles._ext_gcd(a, b)
    a1, b1 = a // g, b // g
    # rows: (b1, -a1) kills (a, b) onto 0; (p, q) maps it to g
    V = ((b1, -a1), (p, q))
    assert _mat_vec(V, (a, b)) == (0, g)
    det = V[0][0] * V[1][1] - V[0][1] * V[1][0]
    assert abs(det) == 1
    return V


def _pick_in_interval(lo: Fraction, hi: Fraction) -> Fraction:
    return (lo + hi) / 2


def four_class_select(G: TorusMap, mode: str = "auto") -> FourClassSelection:
    """Classes h1, h2 (det +-1) with verified 4-cycle families in all of
    h1, h2, h1+h2, h1-h2; guaranteed to exist at representativity >= 10."""
    if mode in ("auto", "polygon"):
        try:
            return _select_by_polygon(G)
        except (SelectionError, cycles.FamilyNotFound, homotopy.BudgetError):
            if mode == "polygon":
                raise
    return _select_by_enumeration(G)


def _select_by_polygon(G: TorusMap) -> FourClassSelection:
    P = homotopy.crossing_polygon(G)
    ab = _seven_half_witness(P)
    if ab is None:
        raise SelectionError(
            "no integer point with 15/2-dilate inside the crossing polygon "
            "(representativity below 10?)")
    V = _extend_to_point_transform(*ab)
    P1 = P.transform(V)
    # slide the x = 10 slice into [-5, 0] by shears fixing the y-axis
    sl = P1.intersection_with_line_x(10)
    if sl is None:
        raise SelectionError("crossing polygon misses the slice x = 10")
    z = _pick_in_interval(*sl)
    alpha = (z + 5) // 10
    if alpha:
        shear = ((1, 0), (-alpha, 1))
        V = _mat_mul(shear, V)
        P1 = P1.transform(shear)
        z = z - 10 * alpha
    if z > 0:
        flip = ((1, 0), (0, -1))
        V = _mat_mul(flip, V)
        P1 = P1.transform(flip)
        z = -z
    y0 = -z
    sx = P1.intersection_with_line_y(-10)
    st = P1.intersection_with_sum(10)
    if sx is None or st is None:
        raise SelectionError("crossing polygon misses a witness slice")
    x0 = _pick_in_interval(*sx)
    t0 = _pick_in_interval(*st)
    for pt in ((0, Fraction(15, 2)), (10, -y0), (x0, -10), (t0, 10 - t0)):
        if not P1.contains(pt):
            raise SelectionError(f"witness point {pt} escaped the polygon")
    quad = select_quadruple(y0, x0, t0)
    if quad.tag == "FIRST":
        f1, f2 = (1, 0), (0, 1)
    else:
        f1, f2 = (1, 1), (1, 0)
    Vt = _transpose(V)
    h1 = _mat_vec(Vt, f1)
    h2 = _mat_vec(Vt, f2)
    families = _find_all_families(G, h1, h2)
    return FourClassSelection(h1=h1, h2=h2, families=families,
                              mode="polygon", quadruple=quad,
                              point_transform=V)


def _canonical_class(h):
    """Fix the sign so families are searched for one orientation only."""
    if h < (0, 0) or (h[0] == 0 and h[1] < 0):
        return (-h[0], -h[1])
    return h


def _find_all_families(G, h1, h2):
    families = {}
    for h in (h1, h2, (h1[0] + h2[0], h1[1] + h2[1]),
              (h1[0] - h2[0], h1[1] - h2[1])):
        hc = _canonical_class(h)
        families[hc] = cycles.find_disjoint(G, hc, 4)
    return families


def _select_by_enumeration(G: TorusMap, budget_pairs: int = 64) -> FourClassSelection:
    """Unimodular pairs in increasing crossing-number order, first verified
    pair wins; honest failure with the attempted budget otherwise."""
    cands = []
    for m in range(-4, 5):
        for n in range(-4, 5):
            if (m, n) <= (0, 0) and not (m == 0 and n > 0):
                continue
            if gcd(abs(m), abs(n)) != 1:
                continue
            cands.append(((homotopy.crossing_number(G, (m, n))), (m, n)))
    cands.sort()
    tried = 0
    for _, h1 in cands:
        for _, h2 in cands:
            if abs(h1[0] * h2[1] - h1[1] * h2[0]) != 1:
                continue
            if tried >= budget_pairs:
                raise SelectionError(
                    f"no unimodular pair with four families within "
                    f"{budget_pairs} attempts")
            tried += 1
            point_ok = all(
                homotopy.crossing_polygon(G).contains((4 * h[1], -4 * h[0]))
                for h in (h1, h2, (h1[0] + h2[0], h1[1] + h2[1]),
                          (h1[0] - h2[0], h1[1] - h2[1])))
            if not point_ok:
                continue
            try:
                families = _find_all_families(G, h1, h2)
            except cycles.FamilyNotFound:
                continue
            return FourClassSelection(h1=h1, h2=h2, families=families,
                                      mode="enumeration")
    raise SelectionError(
        f"no unimodular pair with four families within {budget_pairs} attempts")
