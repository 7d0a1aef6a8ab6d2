"""Exact rational plane geometry primitives.

Every coordinate is a fractions.Fraction and every predicate reduces to
integer sign computations, so there is no floating point anywhere in the
decision paths.  All-integer inputs take a fast path that skips the
cross-multiplication.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Sequence, Union

Scalar = Fraction

CCW = 1
CW = -1
COLLINEAR = 0


def scalar(v: Union[int, str, Fraction]) -> Fraction:
    """Coerce to Fraction.  Floats are rejected: they have no place here."""
    if isinstance(v, float):
        raise TypeError("float coordinates are not allowed, use Fraction or int")
    return Fraction(v)


class Point2:
    __slots__ = ("x", "y")

    def __init__(self, x, y):
        object.__setattr__(self, "x", scalar(x))
        object.__setattr__(self, "y", scalar(y))

    def __setattr__(self, name, value):
        raise AttributeError("Point2 is immutable")

    def __eq__(self, other):
        return isinstance(other, Point2) and self.x == other.x and self.y == other.y

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash((self.x, self.y))

    def __repr__(self):
        return f"Point2({self.x!r}, {self.y!r})"

    def __iter__(self):
        yield self.x
        yield self.y

    def as_float(self) -> tuple[float, float]:
        return (float(self.x), float(self.y))


class Segment(NamedTuple):
    a: Point2
    b: Point2

    def reversed(self) -> "Segment":
        return Segment(self.b, self.a)


def orient(a: Point2, b: Point2, c: Point2) -> int:
    """Sign of the cross product (b-a) x (c-a): +1 left turn, -1 right, 0 collinear."""
    ax, ay, bx, by, cx, cy = a.x, a.y, b.x, b.y, c.x, c.y
    if (
        ax.denominator == 1
        and ay.denominator == 1
        and bx.denominator == 1
        and by.denominator == 1
        and cx.denominator == 1
        and cy.denominator == 1
    ):
        v = (bx.numerator - ax.numerator) * (cy.numerator - ay.numerator) - (
            by.numerator - ay.numerator
        ) * (cx.numerator - ax.numerator)
    else:
        uxn = bx.numerator * ax.denominator - ax.numerator * bx.denominator
        uxd = bx.denominator * ax.denominator
        uyn = by.numerator * ay.denominator - ay.numerator * by.denominator
        uyd = by.denominator * ay.denominator
        vxn = cx.numerator * ax.denominator - ax.numerator * cx.denominator
        vxd = cx.denominator * ax.denominator
        vyn = cy.numerator * ay.denominator - ay.numerator * cy.denominator
        vyd = cy.denominator * ay.denominator
        v = uxn * vyn * uyd * vxd - uyn * vxn * uxd * vyd
    if v > 0:
        return CCW
    if v < 0:
        return CW
    return COLLINEAR


def orient_raw(ax: int, ay: int, bx: int, by: int, cx: int, cy: int) -> int:
    """orient() over plain integer coordinates, for precomputed hot loops."""
    v = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    if v > 0:
        return 1
    if v < 0:
        return -1
    return 0


def cross(ox: Fraction, oy: Fraction, bx: Fraction, by: Fraction) -> Fraction:
    return ox * by - oy * bx


def sub(a: Point2, b: Point2) -> tuple[Fraction, Fraction]:
    return (a.x - b.x, a.y - b.y)


def dot2(ax, ay, bx, by) -> Fraction:
    return ax * bx + ay * by


def dist2(a: Point2, b: Point2) -> Fraction:
    dx = a.x - b.x
    dy = a.y - b.y
    return dx * dx + dy * dy


def lerp(a: Point2, b: Point2, t: Fraction) -> Point2:
    return Point2(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))


def midpoint(a: Point2, b: Point2) -> Point2:
    return Point2((a.x + b.x) / 2, (a.y + b.y) / 2)


def on_segment(p: Point2, a: Point2, b: Point2) -> bool:
    """True if p lies on the closed segment ab."""
    if orient(a, b, p) != COLLINEAR:
        return False
    return (
        min(a.x, b.x) <= p.x <= max(a.x, b.x)
        and min(a.y, b.y) <= p.y <= max(a.y, b.y)
    )


def collinear_param(a: Point2, b: Point2, p: Point2) -> Fraction:
    """Parameter t with p = a + t*(b-a), for p collinear with the distinct points a, b."""
    if a.x != b.x:
        return (p.x - a.x) / (b.x - a.x)
    if a.y != b.y:
        return (p.y - a.y) / (b.y - a.y)
    raise ValueError("degenerate segment")


def segment_intersection(
    s: Segment, t: Segment
) -> Union[None, Point2, Segment]:
    """Exact intersection of two closed segments.

    Returns None when disjoint, a Point2 when they meet in a single point,
    and a Segment when they share a positive-length collinear overlap.
    """
    a, b = s.a, s.b
    c, d = t.a, t.b
    if a == b:
        if c == d:
            return a if a == c else None
        return a if on_segment(a, c, d) else None
    if c == d:
        return c if on_segment(c, a, b) else None
    o1 = orient(c, d, a)
    o2 = orient(c, d, b)
    o3 = orient(a, b, c)
    o4 = orient(a, b, d)

    if o1 == 0 and o2 == 0 and o3 == 0 and o4 == 0:
        # all four points on one line: interval overlap along the dominant axis
        if a.x != b.x:
            key = lambda p: p.x
        else:
            key = lambda p: p.y
        s_lo, s_hi = sorted((a, b), key=key)
        t_lo, t_hi = sorted((c, d), key=key)
        lo = s_lo if key(s_lo) >= key(t_lo) else t_lo
        hi = s_hi if key(s_hi) <= key(t_hi) else t_hi
        if key(lo) > key(hi):
            return None
        if lo == hi:
            return lo
        return Segment(lo, hi)

    if (o1 > 0 and o2 > 0) or (o1 < 0 and o2 < 0):
        return None
    if (o3 > 0 and o4 > 0) or (o3 < 0 and o4 < 0):
        return None

    # straddling and not all collinear: a unique intersection point exists
    rx, ry = b.x - a.x, b.y - a.y
    sx, sy = d.x - c.x, d.y - c.y
    denom = cross(rx, ry, sx, sy)
    if denom == 0:
        # parallel but touching was excluded by the sign tests above
        return None
    tt = cross(c.x - a.x, c.y - a.y, sx, sy) / denom
    return Point2(a.x + tt * rx, a.y + tt * ry)


def segments_cross_properly(s: Segment, t: Segment) -> bool:
    """True iff the open interiors of the two segments cross in a single point."""
    a, b = s.a, s.b
    c, d = t.a, t.b
    o1 = orient(c, d, a)
    o2 = orient(c, d, b)
    o3 = orient(a, b, c)
    o4 = orient(a, b, d)
    return o1 * o2 < 0 and o3 * o4 < 0


def ray_segment_hit(
    origin: Point2, direction: tuple[Fraction, Fraction], seg: Segment
) -> Optional[Point2]:
    """Nearest intersection of the open ray origin + t*direction (t > 0) with a closed segment.

    Returns None when the ray misses the segment entirely or only touches it
    at the ray origin.
    """
    dx, dy = direction
    if dx == 0 and dy == 0:
        raise ValueError("zero ray direction")
    c, d = seg.a, seg.b
    if c == d:
        # point target: hit iff it sits strictly ahead on the ray
        wx, wy = c.x - origin.x, c.y - origin.y
        if cross(dx, dy, wx, wy) == 0 and dot2(wx, wy, dx, dy) > 0:
            return c
        return None
    ex, ey = d.x - c.x, d.y - c.y
    denom = cross(dx, dy, ex, ey)
    if denom == 0:
        # parallel; collinear only if origin lies on the carrier line
        if orient(c, d, Point2(origin.x + dx, origin.y + dy)) != 0 or orient(
            c, d, origin
        ) != 0:
            return None
        # collinear: project endpoints onto the ray parameter
        if dx != 0:
            tc = (c.x - origin.x) / dx
            td = (d.x - origin.x) / dx
        else:
            tc = (c.y - origin.y) / dy
            td = (d.y - origin.y) / dy
        lo, hi = min(tc, td), max(tc, td)
        # collinear: the hit is endpoint-based; take the nearest endpoint
        # strictly ahead of the (open) ray origin
        if lo > 0:
            t = lo
        elif hi > 0:
            t = hi
        else:
            return None
        return Point2(origin.x + t * dx, origin.y + t * dy)
    t = cross(c.x - origin.x, c.y - origin.y, ex, ey) / denom
    u = cross(c.x - origin.x, c.y - origin.y, dx, dy) / denom
    if t <= 0 or u < 0 or u > 1:
        return None
    return Point2(origin.x + t * dx, origin.y + t * dy)


def line_segment_intersection(
    a: Point2, b: Point2, seg: Segment
) -> Union[None, Point2, Segment]:
    """Intersection of the infinite line through a, b with a closed segment."""
    c, d = seg.a, seg.b
    oc = orient(a, b, c)
    od = orient(a, b, d)
    if oc == 0 and od == 0:
        return Segment(c, d) if c != d else c
    if oc == 0:
        return c
    if od == 0:
        return d
    if oc == od:
        return None
    rx, ry = b.x - a.x, b.y - a.y
    sx, sy = d.x - c.x, d.y - c.y
    denom = cross(rx, ry, sx, sy)
    tt = cross(c.x - a.x, c.y - a.y, sx, sy) / denom
    return Point2(a.x + tt * rx, a.y + tt * ry)


def _half(dx: Fraction, dy: Fraction) -> int:
    """0 for the upper half plane (including +x axis), 1 for the lower (including -x)."""
    if dy > 0 or (dy == 0 and dx > 0):
        return 0
    return 1


def angular_compare(pivot: Point2, a: Point2, b: Point2) -> int:
    """Compare directions pivot->a and pivot->b in CCW order starting from +x.

    Returns -1 when a comes strictly first, +1 when b does, 0 when the two
    directions coincide (distance is ignored).
    """
    ax, ay = a.x - pivot.x, a.y - pivot.y
    bx, by = b.x - pivot.x, b.y - pivot.y
    if (ax == 0 and ay == 0) or (bx == 0 and by == 0):
        raise ValueError("angular_compare with a point equal to the pivot")
    ha, hb = _half(ax, ay), _half(bx, by)
    if ha != hb:
        return -1 if ha < hb else 1
    c = cross(ax, ay, bx, by)
    if c > 0:
        return -1
    if c < 0:
        return 1
    return 0


# -- exact comparison of sums of square roots -------------------------------
#
# Used by the shortest-path test oracle to compare geodesic lengths, which are
# sums of square roots of rationals.  Signs are decided by escalating integer
# interval arithmetic; exact zero is certified by grouping square-free parts
# (square roots of distinct square-free integers are linearly independent
# over the rationals).

_squarefree_cache: dict[int, tuple[int, int]] = {}


def _squarefree_split(m: int) -> tuple[int, int]:
    """m = f*f*s with s square-free; returns (f, s).  m must be positive."""
    try:
        return _squarefree_cache[m]
    except KeyError:
        pass
    from sympy import factorint

    f = 1
    s = 1
    for p, e in factorint(m).items():
        f *= p ** (e // 2)
        if e % 2:
            s *= p
    _squarefree_cache[m] = (f, s)
    return (f, s)


def _is_zero_radical_sum(terms: Sequence[tuple[Fraction, Fraction]]) -> bool:
    groups: dict[int, Fraction] = {}
    for coeff, rad in terms:
        if coeff == 0 or rad == 0:
            continue
        m = rad.numerator * rad.denominator
        f, s = _squarefree_split(m)
        groups[s] = groups.get(s, Fraction(0)) + coeff * Fraction(f, rad.denominator)
    return all(v == 0 for v in groups.values())


def sqrt_sum_sign(terms: Iterable[tuple[Fraction, Fraction]]) -> int:
    """Exact sign of sum(coeff * sqrt(radicand)); radicands must be >= 0."""
    ts = []
    for coeff, rad in terms:
        coeff = Fraction(coeff)
        rad = Fraction(rad)
        if rad < 0:
            raise ValueError("negative radicand")
        if coeff != 0 and rad != 0:
            ts.append((coeff, rad))
    if not ts:
        return 0
    if all(c > 0 for c, _ in ts):
        return 1
    if all(c < 0 for c, _ in ts):
        return -1

    def bounds(bits: int) -> tuple[Fraction, Fraction]:
        lo = Fraction(0)
        hi = Fraction(0)
        shift = 1 << (2 * bits)
        denom = 1 << bits
        for coeff, rad in ts:
            m = rad.numerator * rad.denominator
            r = math.isqrt(m * shift)
            slo = Fraction(r, denom * rad.denominator)
            shi = Fraction(r + 1, denom * rad.denominator)
            if coeff > 0:
                lo += coeff * slo
                hi += coeff * shi
            else:
                lo += coeff * shi
                hi += coeff * slo
        return lo, hi

    for bits in (32, 96):
        lo, hi = bounds(bits)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
    if _is_zero_radical_sum(ts):
        return 0
    bits = 256
    while True:
        lo, hi = bounds(bits)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        bits *= 2


def compare_path_lengths(
    path_a: Sequence[Point2], path_b: Sequence[Point2]
) -> int:
    """Exact comparison of two polyline lengths: -1, 0, +1."""
    terms: list[tuple[Fraction, Fraction]] = []
    for pth, sign in ((path_a, 1), (path_b, -1)):
        for u, v in zip(pth, pth[1:]):
            terms.append((Fraction(sign), dist2(u, v)))
    return sqrt_sum_sign(terms)
