"""Brute-force visibility oracle, independent of every preprocessing structure.

Visibility is decided from first principles: a segment is free when it stays
inside the closed region (even-odd rule over the boundary rings), and weak
visibility from a query segment is decided by enumerating the finitely many
sightline events (sightlines through vertices) and testing one witness per
atomic interval.  Everything is exact; nothing here is shared with the
algorithmic modules it is used to check.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional, Sequence

from .geometry import (
    Point2,
    Segment,
    cross,
    lerp,
    midpoint,
    on_segment,
    orient,
    segment_intersection,
)
from .polygon import BOUNDARY, INSIDE, OUTSIDE, point_in_rings


def sightline_free(rings: Sequence[Sequence[Point2]], a: Point2, b: Point2) -> bool:
    """True iff the closed segment ab lies inside the closed region.

    The region is the even-odd interior of `rings` plus its boundary.  A
    proper crossing with any boundary edge blocks immediately; otherwise the
    segment is cut at every boundary touch and each piece is tested by its
    midpoint.
    """
    if a == b:
        return point_in_rings(rings, a) != OUTSIDE
    params = {Fraction(0), Fraction(1)}
    ab = Segment(a, b)
    for ring in rings:
        n = len(ring)
        for i in range(n):
            c = ring[i]
            d = ring[(i + 1) % n]
            o1 = orient(c, d, a)
            o2 = orient(c, d, b)
            if o1 == o2 and o1 != 0:
                continue  # both endpoints strictly on one side: no contact
            o3 = orient(a, b, c)
            o4 = orient(a, b, d)
            if o1 * o2 < 0 and o3 * o4 < 0:
                return False  # proper crossing
            got = segment_intersection(ab, Segment(c, d))
            if got is None:
                continue
            if isinstance(got, Point2):
                params.add(_param_on(a, b, got))
            else:
                params.add(_param_on(a, b, got.a))
                params.add(_param_on(a, b, got.b))
    ts = sorted(params)
    for t0, t1 in zip(ts, ts[1:]):
        m = lerp(a, b, (t0 + t1) / 2)
        if point_in_rings(rings, m) == OUTSIDE:
            return False
    return True


def _param_on(a: Point2, b: Point2, p: Point2) -> Fraction:
    if a.x != b.x:
        return (p.x - a.x) / (b.x - a.x)
    return (p.y - a.y) / (b.y - a.y)


def _in_closed_triangle(a: Point2, b: Point2, c: Point2, p: Point2) -> bool:
    o1 = orient(a, b, p)
    o2 = orient(b, c, p)
    o3 = orient(c, a, p)
    return (o1 >= 0 and o2 >= 0 and o3 >= 0) or (o1 <= 0 and o2 <= 0 and o3 <= 0)


def _sightline_events(
    rings: Sequence[Sequence[Point2]],
    p: Point2,
    q: Point2,
    x: Point2,
    extra_points: Sequence[Point2] = (),
) -> list:
    """Params t in [0, 1] where the sightline from lerp(p,q,t) to x may change state.

    Only sightlines through a vertex can change visibility, and such a vertex
    must lie in the closed triangle p, q, x; vertices elsewhere are ignored.
    """
    events = {Fraction(0), Fraction(1)}
    dx, dy = q.x - p.x, q.y - p.y
    candidates = [v for ring in rings for v in ring]
    candidates.extend(extra_points)
    for v in candidates:
        if v == x:
            continue
        if not _in_closed_triangle(p, q, x, v):
            continue
        denom = cross(v.x - x.x, v.y - x.y, dx, dy)
        if denom == 0:
            continue  # sightline direction parallel to pq: never aligned inside
        t = -cross(v.x - x.x, v.y - x.y, p.x - x.x, p.y - x.y) / denom
        if 0 < t < 1:
            events.add(t)
    return sorted(events)


def _crosses(seg_a: Point2, seg_b: Point2, c: Point2, d: Point2) -> bool:
    return segment_intersection(Segment(seg_a, seg_b), Segment(c, d)) is not None


def visible_parts(
    rings: Sequence[Sequence[Point2]],
    p: Point2,
    q: Point2,
    x: Point2,
    through: Optional[Segment] = None,
) -> list:
    """Maximal closed parameter intervals of pq whose points see x.

    With `through` set, a sightline only counts when it also meets that
    segment.  Returned intervals may be degenerate (single tangent sightline).
    The visible set is closed, so interval endpoints are always event params.
    """
    extra = list(through) if through is not None else ()
    events = _sightline_events(rings, p, q, x, extra_points=extra)

    def sees(t: Fraction) -> bool:
        w = lerp(p, q, t)
        if through is not None and not _crosses(w, x, through.a, through.b):
            return False
        return sightline_free(rings, w, x)

    event_vis = [sees(t) for t in events]
    open_vis = [
        sees((events[i] + events[i + 1]) / 2) for i in range(len(events) - 1)
    ]
    pieces = []
    for i, vis in enumerate(open_vis):
        if vis:
            pieces.append([events[i], events[i + 1]])
    for i, vis in enumerate(event_vis):
        if vis:
            pieces.append([events[i], events[i]])
    if not pieces:
        return []
    pieces.sort()
    merged = [pieces[0]]
    for lo, hi in pieces[1:]:
        if lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return [(lo, hi) for lo, hi in merged]


def weakly_visible(
    rings: Sequence[Sequence[Point2]],
    p: Point2,
    q: Point2,
    x: Point2,
    through: Optional[Segment] = None,
) -> bool:
    """True iff some point of pq sees x (early-exit variant of visible_parts)."""
    extra = list(through) if through is not None else ()
    events = _sightline_events(rings, p, q, x, extra_points=extra)

    def sees(t: Fraction) -> bool:
        w = lerp(p, q, t)
        if through is not None and not _crosses(w, x, through.a, through.b):
            return False
        return sightline_free(rings, w, x)

    for i in range(len(events) - 1):
        if sees((events[i] + events[i + 1]) / 2):
            return True
    return any(sees(t) for t in events)


# -- sample generation for randomized region checks --------------------------

SAMPLE_DENOM = 1 << 12


def _rand_frac(rng: random.Random, lo: Fraction, hi: Fraction) -> Fraction:
    num = rng.randrange(SAMPLE_DENOM + 1)
    return lo + (hi - lo) * Fraction(num, SAMPLE_DENOM)


def sample_interior_points(P, count: int, rng: random.Random) -> list:
    """Uniform-ish interior points by rejection over the bounding box."""
    if hasattr(P, "outer"):
        x0, y0, x1, y1 = P.outer.bbox()
    else:
        x0, y0, x1, y1 = P.bbox()
    rings = P.rings()
    out = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 400 * count:
            raise RuntimeError("interior sampling is not converging")
        pt = Point2(_rand_frac(rng, x0, x1), _rand_frac(rng, y0, y1))
        if point_in_rings(rings, pt) == INSIDE:
            out.append(pt)
    return out


def sample_boundary_band_points(P, count: int, rng: random.Random) -> list:
    """Interior points just inside a random boundary edge."""
    rings = P.rings()
    edges = []
    for ring in rings:
        n = len(ring)
        for i in range(n):
            edges.append((ring[i], ring[(i + 1) % n]))
    out = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 400 * count:
            raise RuntimeError("boundary band sampling is not converging")
        a, b = edges[rng.randrange(len(edges))]
        t = _rand_frac(rng, Fraction(1, 100), Fraction(99, 100))
        base = lerp(a, b, t)
        # inward normal of a CCW edge is the left normal; hole rings are CW so
        # their left normal also points into the free region
        nx, ny = -(b.y - a.y), b.x - a.x
        for k in (8, 16, 32, 64, 128):
            pt = Point2(base.x + nx / k, base.y + ny / k)
            if point_in_rings(rings, pt) == INSIDE:
                out.append(pt)
                break
    return out


def sample_near_reflex_points(P, count: int, rng: random.Random) -> list:
    """Interior points clustered near reflex vertices (where windows live)."""
    rings = P.rings()
    reflex = []
    for ring in rings:
        n = len(ring)
        ccw = None
        for i in range(n):
            o = orient(ring[i - 1], ring[i], ring[(i + 1) % n])
            if o < 0:
                reflex.append(ring[i])
    if not reflex:
        return sample_interior_points(P, count, rng)
    out = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 800 * count:
            raise RuntimeError("near-reflex sampling is not converging")
        v = reflex[rng.randrange(len(reflex))]
        r = Fraction(1, rng.choice((2, 4, 8, 16)))
        pt = Point2(
            v.x + _rand_frac(rng, -r, r), v.y + _rand_frac(rng, -r, r)
        )
        if point_in_rings(rings, pt) == INSIDE:
            out.append(pt)
    return out


def stratified_samples(P, count: int, rng: random.Random) -> list:
    """Mixed sample: half uniform interior, quarter boundary band, quarter near reflex."""
    n_int = count // 2
    n_band = count // 4
    n_reflex = count - n_int - n_band
    return (
        sample_interior_points(P, n_int, rng)
        + sample_boundary_band_points(P, n_band, rng)
        + sample_near_reflex_points(P, n_reflex, rng)
    )
