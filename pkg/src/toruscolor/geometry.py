"""Exact rational 2D convex geometry.

Polygons are kept both as integer half-planes a*x + b*y <= c and as exact
rational vertex lists.  Everything here is tolerance-free: the quadruple
selection below has rational case boundaries, so a single floating-point
comparison would be a bug.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

Point = tuple[Fraction, Fraction]


class GeometryError(Exception):
    pass


class CertificationError(GeometryError):
    """A containment that should be guaranteed failed to certify."""


def _frac_point(p) -> Point:
    return (Fraction(p[0]), Fraction(p[1]))


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points):
    """Monotone-chain hull, counterclockwise, no duplicate endpoints."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


@dataclass(frozen=True)
class HalfPlane:
    """a*x + b*y <= c with integer coefficients, gcd(a, b, c) reduced."""

    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.a == 0 and self.b == 0:
            raise GeometryError("degenerate half-plane")

    @staticmethod
    def make(a, b, c) -> "HalfPlane":
        fa, fb, fc = Fraction(a), Fraction(b), Fraction(c)
        m = fa.denominator * fb.denominator * fc.denominator
        ia, ib, ic = int(fa * m), int(fb * m), int(fc * m)
        g = gcd(gcd(abs(ia), abs(ib)), abs(ic)) or 1
        return HalfPlane(ia // g, ib // g, ic // g)

    def value(self, p) -> Fraction:
        return self.a * p[0] + self.b * p[1]

    def contains(self, p) -> bool:
        return self.value(p) <= self.c


def _intersect(h1: HalfPlane, h2: HalfPlane):
    det = h1.a * h2.b - h2.a * h1.b
    if det == 0:
        return None
    x = Fraction(h1.c * h2.b - h2.c * h1.b, det)
    y = Fraction(h1.a * h2.c - h2.a * h1.c, det)
    return (x, y)


class RationalPolygon:
    """Bounded convex polygon with exact rational vertices.

    ``vertices`` are in counterclockwise order; ``halfplanes`` are the facet
    inequalities (integer coefficients).   Construct via ``from_halfplanes``
    or ``from_points``.
    """

    def __init__(self, vertices, halfplanes):
        self.vertices: list[Point] = [_frac_point(p) for p in vertices]
        self.halfplanes: list[HalfPlane] = list(halfplanes)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_points(points) -> "RationalPolygon":
        hull = convex_hull([_frac_point(p) for p in points])
        if len(hull) < 3:
            raise GeometryError("degenerate polygon (fewer than 3 hull vertices)")
        hps = []
        for p, q in zip(hull, hull[1:] + hull[:1]):
            dx, dy = q[0] - p[0], q[1] - p[1]
            hps.append(HalfPlane.make(dy, -dx, dy * p[0] - dx * p[1]))
        return RationalPolygon(hull, hps)

    @staticmethod
    def from_halfplanes(halfplanes) -> "RationalPolygon":
        hps = [h if isinstance(h, HalfPlane) else HalfPlane.make(*h) for h in halfplanes]
        candidates = []
        for i in range(len(hps)):
            for j in range(i + 1, len(hps)):
                p = _intersect(hps[i], hps[j])
                if p is not None and all(h.contains(p) for h in hps):
                    candidates.append(p)
        if not candidates:
            raise GeometryError("empty or unbounded half-plane intersection")
        hull = convex_hull(candidates)
        if len(hull) < 3:
            raise GeometryError("degenerate polygon (fewer than 3 hull vertices)")
        # rebuild facet list from the hull so redundant half-planes drop out
        return RationalPolygon.from_points(hull)

    # -- queries -----------------------------------------------------------

    def contains(self, p) -> bool:
        p = _frac_point(p)
        return all(h.contains(p) for h in self.halfplanes)

    def support(self, direction) -> Fraction:
        """max of m*x + n*y over the polygon."""
        m, n = Fraction(direction[0]), Fraction(direction[1])
        return max(m * x + n * y for x, y in self.vertices)

    def support_argmax(self, direction) -> Point:
        m, n = Fraction(direction[0]), Fraction(direction[1])
        return max(self.vertices, key=lambda v: (m * v[0] + n * v[1], v))

    def is_symmetric(self) -> bool:
        vs = set(self.vertices)
        return all((-x, -y) in vs for x, y in vs)

    def contains_origin_interior(self) -> bool:
        return all(h.c > 0 for h in self.halfplanes)

    def gauge(self, p) -> Fraction:
        """Minkowski gauge: least s >= 0 with p in s * polygon (0 interior)."""
        if not self.contains_origin_interior():
            raise GeometryError("origin not interior")
        p = _frac_point(p)
        return max(Fraction(h.value(p), h.c) for h in self.halfplanes)

    def polar(self) -> "RationalPolygon":
        """{z : <v, z> <= 1 for all v in polygon}; needs 0 in the interior."""
        if not self.contains_origin_interior():
            raise GeometryError("origin not interior")
        pts = [(Fraction(h.a, h.c), Fraction(h.b, h.c)) for h in self.halfplanes]
        return RationalPolygon.from_points(pts)

    def transform(self, M) -> "RationalPolygon":
        """Image under the linear map with rows M[0], M[1]."""
        (a, b), (c, d) = M
        pts = [(a * x + b * y, c * x + d * y) for x, y in self.vertices]
        return RationalPolygon.from_points(pts)

    def intersection_with_line_x(self, x0):
        """y-interval of the slice {x = x0}, or None."""
        return self._slice(Fraction(x0), axis=0)

    def intersection_with_line_y(self, y0):
        return self._slice(Fraction(y0), axis=1)

    def intersection_with_sum(self, s):
        """Interval of x over the slice {x + y = s}, or None."""
        s = Fraction(s)
        lo, hi = None, None
        verts = self.vertices
        for p, q in zip(verts, verts[1:] + verts[:1]):
            vp, vq = p[0] + p[1] - s, q[0] + q[1] - s
            for point, val in ((p, vp),):
                if val == 0:
                    lo = point[0] if lo is None else min(lo, point[0])
                    hi = point[0] if hi is None else max(hi, point[0])
            if (vp < 0 < vq) or (vq < 0 < vp):
                t = vp / (vp - vq)
                x = p[0] + t * (q[0] - p[0])
                lo = x if lo is None else min(lo, x)
                hi = x if hi is None else max(hi, x)
        return None if lo is None else (lo, hi)

    def _slice(self, v0, axis):
        other = 1 - axis
        lo, hi = None, None
        verts = self.vertices
        for p, q in zip(verts, verts[1:] + verts[:1]):
            vp, vq = p[axis] - v0, q[axis] - v0
            if vp == 0:
                w = p[other]
                lo = w if lo is None else min(lo, w)
                hi = w if hi is None else max(hi, w)
            if (vp < 0 < vq) or (vq < 0 < vp):
                t = vp / (vp - vq)
                w = p[other] + t * (q[other] - p[other])
                lo = w if lo is None else min(lo, w)
                hi = w if hi is None else max(hi, w)
        return None if lo is None else (lo, hi)

    def __repr__(self):
        return f"RationalPolygon({len(self.vertices)} vertices)"


def lattice_lambda(P: RationalPolygon):
    """Least t >= 0 with a nonzero integer point in t * P, plus a witness.

    P must be bounded and symmetric with nonempty interior; the search box is
    certified by the gauge lower bound |p|_inf / R_inf.
    """
    if not P.is_symmetric():
        raise GeometryError("lattice_lambda needs a symmetric polygon")
    r_inf = max(max(abs(x), abs(y)) for x, y in P.vertices)
    if r_inf == 0:
        raise GeometryError("degenerate polygon")

    def key(p):
        # prefer short witnesses, then lexicographically largest ((1,0) over (0,1))
        return (abs(p[0]) + abs(p[1]), (-p[0], -p[1]))

    best = min(((P.gauge(p), p) for p in ((1, 0), (0, 1))),
               key=lambda gp: (gp[0], key(gp[1])))
    bound = best[0] * r_inf
    m = int(bound) if bound == int(bound) else int(bound) + 1
    for px in range(-m, m + 1):
        for py in range(-m, m + 1):
            if (px, py) == (0, 0):
                continue
            g = P.gauge((px, py))
            if (g, key((px, py))) < (best[0], key(best[1])):
                best = (g, (px, py))
    return best


def support_min(P: RationalPolygon, bound: int):
    """Minimum support over nonzero integer directions, certified.

    Enumerates |m|, |n| <= max(bound, B*) where B* comes from the largest box
    [-rho, rho]^2 inside P: support(d) >= rho * max(|m|, |n|), so directions
    beyond B* cannot beat the incumbent.
    """
    if not P.contains_origin_interior():
        raise GeometryError("support_min needs the origin in the interior")
    rho = min(Fraction(h.c, abs(h.a) + abs(h.b)) for h in P.halfplanes)
    incumbent = min(P.support((1, 0)), P.support((0, 1)))
    b_star = incumbent / rho
    use = max(bound, int(b_star) + 1)

    def key(d):
        return (abs(d[0]) + abs(d[1]), (-d[0], -d[1]))

    best = None
    for m in range(-use, use + 1):
        for n in range(-use, use + 1):
            if (m, n) == (0, 0):
                continue
            s = P.support((m, n))
            if best is None or (s, key((m, n))) < (best[0], key(best[1])):
                best = (s, (m, n))
    value, direction = best
    return value, direction, {"box": use, "inner_box_radius": rho}


def support_nine_quadrilateral() -> RationalPolygon:
    """The narrow symmetric quadrilateral whose integer-direction supports are
    all >= 9 yet which packs no useful 4-point set (regression fixture)."""
    return RationalPolygon.from_halfplanes([
        (4, 3, 27), (-2, 3, 27), (-4, -3, 27), (2, -3, 27)])


# -- the two 4-point sets and their selection --------------------------------

FIRST_QUAD: tuple = ((0, 4), (4, -4), (4, 0), (4, 4))
SECOND_QUAD: tuple = ((0, -4), (4, -8), (4, -4), (4, 0))
BASE_POINTS: tuple = ((0, 4), (0, -4), (4, 0), (4, -4))


@dataclass
class Certificate:
    """point = sum coeff_i * corner_i, coeffs nonnegative rationals, sum 1."""

    point: Point
    corners: list[Point]
    coeffs: list[Fraction]

    def check(self) -> bool:
        if sum(self.coeffs) != 1 or any(c < 0 for c in self.coeffs):
            return False
        x = sum(c * p[0] for c, p in zip(self.coeffs, self.corners))
        y = sum(c * p[1] for c, p in zip(self.coeffs, self.corners))
        return (x, y) == self.point


@dataclass
class QuadrupleChoice:
    tag: str                       # "FIRST" or "SECOND"
    points: tuple
    certificates: list[Certificate]
    base_certificates: list[Certificate]
    witness_points: list[Point]


def _certify_in_hull(target: Point, hull: list[Point]) -> Certificate:
    """Convex-combination certificate by exhaustive triangle search."""
    n = len(hull)
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                a, b, c = hull[i], hull[j], hull[k]
                d = _cross(a, b, c)
                if d == 0:
                    continue
                wa = _cross(target, b, c)
                wb = _cross(a, target, c)
                wc = _cross(a, b, target)
                if d < 0:
                    d, wa, wb, wc = -d, -wa, -wb, -wc
                if wa >= 0 and wb >= 0 and wc >= 0:
                    return Certificate(point=target, corners=[a, b, c],
                                       coeffs=[Fraction(wa, d), Fraction(wb, d),
                                               Fraction(wc, d)])
    # segment / vertex degenerate cases
    for i in range(n):
        for j in range(i + 1, n):
            a, b = hull[i], hull[j]
            if _cross(a, b, target) != 0:
                continue
            dx, dy = b[0] - a[0], b[1] - a[1]
            if dx != 0:
                t = Fraction(target[0] - a[0], dx)
            elif dy != 0:
                t = Fraction(target[1] - a[1], dy)
            else:
                continue
            if 0 <= t <= 1:
                return Certificate(point=target, corners=[a, b],
                                   coeffs=[1 - t, t])
    raise CertificationError(f"point {target} not certified inside the hull")


def select_quadruple(y, x, t) -> QuadrupleChoice:
    """Pick the 4-point set guaranteed inside the symmetric hull of the eight
    witness points (0, +-15/2), +-(x, -10), +-(10, -y), +-(t, 10 - t).

    The branch structure follows the exhaustive case analysis on (x, t, y);
    a certification failure afterwards is a genuine fatal error.
    """
    y, x, t = Fraction(y), Fraction(x), Fraction(t)
    if not 0 <= y <= 5:
        raise GeometryError("y must lie in [0, 5]")
    tag = _select_branch(y, x, t)
    pts = [(Fraction(0), Fraction(15, 2)), (x, Fraction(-10)),
           (Fraction(10), -y), (t, 10 - t)]
    witness = []
    for px, py in pts:
        witness.append((px, py))
        witness.append((-px, -py))
    hull = convex_hull(witness)
    quad = FIRST_QUAD if tag == "FIRST" else SECOND_QUAD
    certs = [_certify_in_hull(_frac_point(p), hull) for p in quad]
    base = [_certify_in_hull(_frac_point(p), hull) for p in BASE_POINTS]
    for cert in certs + base:
        if not cert.check():
            raise CertificationError("internal: certificate arithmetic broken")
    return QuadrupleChoice(tag=tag, points=quad, certificates=certs,
                           base_certificates=base, witness_points=witness)


def _select_branch(y: Fraction, x: Fraction, t: Fraction) -> str:
    if x <= 0 or x >= 20:
        return "FIRST"
    if x >= Fraction(20 - 4 * y, 8 - y):
        return "SECOND"
    if t >= Fraction(40, 3):
        return "SECOND"
    if 5 <= t <= 30:
        return "FIRST"
    if 0 <= t <= 5:
        return "FIRST"
    # now t <= 0
    if y <= 2:
        return "FIRST"
    if t <= -1:
        return "SECOND"
    # t in [-1, 0], y in [2, 5]
    if y >= 5 + 3 * t:
        return "SECOND"
    return "FIRST"
