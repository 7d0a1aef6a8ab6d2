"""Deterministic polygon generators for tests, benchmarks and demos.

All generators emit integer coordinates (fast predicate paths), draw from a
seeded random.Random, and rediscover until the validator accepts, so every
returned instance satisfies the general position rules.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Optional

from .errors import ValidationError
from .geometry import Point2, orient
from .polygon import (
    INSIDE,
    OUTSIDE,
    PolygonWithHoles,
    SimplePolygon,
    point_in_rings,
    signed_area2,
)

_MAX_TRIES = 400


def _attempts(builder, seed: int, what: str):
    for k in range(_MAX_TRIES):
        rng = random.Random(seed * 1000003 + k)
        try:
            return builder(rng)
        except (ValidationError, ValueError):
            continue
    raise RuntimeError(f"could not generate a valid {what} for seed {seed}")


def gen_convex(n: int, seed: int = 0) -> SimplePolygon:
    """Convex polygon with exactly n vertices on a jittered circle."""
    if n < 3:
        raise ValueError("need n >= 3")

    def build(rng: random.Random) -> SimplePolygon:
        angles = sorted(rng.uniform(0, 2 * math.pi) for _ in range(n))
        pts = []
        for t in angles:
            r = rng.uniform(800, 1000)
            pts.append(Point2(round(r * math.cos(t)), round(r * math.sin(t))))
        P = SimplePolygon(pts)
        if not P.is_convex():
            raise ValueError("not convex after rounding")
        return P

    return _attempts(build, seed, f"convex polygon n={n}")


def gen_star(n: int, seed: int = 0) -> SimplePolygon:
    """Star-shaped polygon: random radii at sorted random angles."""
    if n < 3:
        raise ValueError("need n >= 3")

    def build(rng: random.Random) -> SimplePolygon:
        angles = sorted(rng.uniform(0, 2 * math.pi) for _ in range(n))
        pts = []
        for t in angles:
            r = rng.uniform(150, 1000)
            pts.append(Point2(round(r * math.cos(t)), round(r * math.sin(t))))
        return SimplePolygon(pts)

    return _attempts(build, seed, f"star polygon n={n}")


def gen_comb(teeth: int, seed: int = 0) -> SimplePolygon:
    """Comb with downward teeth cut into the top edge; 4*teeth + 4 vertices."""
    if teeth < 1:
        raise ValueError("need teeth >= 1")

    def build(rng: random.Random) -> SimplePolygon:
        j = lambda a: rng.randint(-a, a)
        W = 60 * (teeth + 1)
        pts = [(0 + j(3), 0 + j(3)), (W + j(3), 0 + j(3)), (W + j(3), 100 + j(3))]
        for i in range(teeth, 0, -1):
            cx = 60 * i
            pts.append((cx + 18 + j(3), 100 + j(3)))   # notch right top
            pts.append((cx + 14 + j(3), 25 + j(8)))    # notch right bottom
            pts.append((cx - 14 + j(3), 25 + j(8)))    # notch left bottom
            pts.append((cx - 18 + j(3), 100 + j(3)))   # notch left top
        pts.append((j(3), 100 + j(3)))
        return SimplePolygon([Point2(x, y) for x, y in pts])

    return _attempts(build, seed, f"comb teeth={teeth}")


def cells_boundary(cells: set) -> list:
    """CCW boundary cycle of a union of unit grid cells (must be one simple cycle)."""
    edges = {}
    for (i, j) in cells:
        if (i, j - 1) not in cells:
            edges[(i, j)] = (i + 1, j)
        if (i + 1, j) not in cells:
            edges[(i + 1, j)] = (i + 1, j + 1)
        if (i, j + 1) not in cells:
            edges[(i + 1, j + 1)] = (i, j + 1)
        if (i - 1, j) not in cells:
            edges[(i, j + 1)] = (i, j)
    start = next(iter(edges))
    cycle = [start]
    cur = edges[start]
    while cur != start:
        cycle.append(cur)
        cur = edges[cur]
    if len(cycle) != len(edges):
        raise ValueError("cell union boundary is not a single simple cycle")
    # merge collinear runs
    out = []
    m = len(cycle)
    for k in range(m):
        a, b, c = cycle[k - 1], cycle[k], cycle[(k + 1) % m]
        if (b[0] - a[0], b[1] - a[1]) != (c[0] - b[0], c[1] - b[1]):
            out.append(b)
    return out


def spiral_cells(coils: int) -> set:
    """Unit cells of a square spiral corridor with the given number of coils."""
    cells = {(0, 0)}
    x, y = 0, 0
    dirs = [(1, 0), (0, 1), (-1, 0), (0, -1)]
    length = 2  # lengths 2,2,4,4,6,6,... keep one empty cell between coils
    for arm in range(4 * coils + 1):
        dx, dy = dirs[arm % 4]
        for _ in range(length):
            x += dx
            y += dy
            cells.add((x, y))
        if arm % 2 == 1:
            length += 2
    return cells


def gen_spiral(coils: int, seed: int = 0) -> SimplePolygon:
    """Square spiral corridor polygon with the given number of coils."""
    if coils < 1:
        raise ValueError("need coils >= 1")
    corners = cells_boundary(spiral_cells(coils))
    scale = 40

    def build(rng: random.Random) -> SimplePolygon:
        j = lambda: rng.randint(-3, 3)
        pts = [Point2(scale * x + j(), scale * y + j()) for x, y in corners]
        return SimplePolygon(pts)

    return _attempts(build, seed, f"spiral coils={coils}")


def gen_bent_pocket(pads: int, seed: int = 0) -> SimplePolygon:
    """Rectangle with a bent dead-end corridor off its right wall.

    Any sight line from the main room must thread the corridor mouth and
    therefore stays below y=10480 inside the branch, while the `pads` wiggle
    vertices lining the branch wall all sit at y>=12400: the wiggles are
    hidden from every query segment in the main room, so hidden detail
    scales without changing what such queries see or touch.  The wiggle
    amplitude grows toward the branch mouth so the lowest wiggles occlude
    the ones above them.
    """
    if not 1 <= pads <= 400:
        raise ValueError("need 1 <= pads <= 400")

    def build(rng: random.Random) -> SimplePolygon:
        pts = [
            (0, 0),
            (40000, 0),
            (40000, 7600),
            (52000, 8000),
            (52000, 16000),
            (50000, 16000),
        ]
        amps = sorted(rng.sample(range(300, 1701), pads))
        for i in range(pads):
            y = 15500 - 3000 * (i + 1) // (pads + 1) + rng.randint(-3, 3)
            x = 50000 + amps[i] if i % 2 == 0 else 50000 - amps[i]
            pts.append((x, y))
        pts += [(50000, 10000), (41000, 10000), (41000, 20000), (0, 20000)]
        return SimplePolygon([Point2(x, y) for x, y in pts])

    return _attempts(build, seed, f"bent pocket polygon pads={pads}")


def gen_with_holes(n_outer: int, holes: int, seed: int = 0) -> PolygonWithHoles:
    """Star-shaped outer boundary with small convex holes scattered inside."""
    if holes < 0:
        raise ValueError("holes must be nonnegative")

    def build(rng: random.Random) -> PolygonWithHoles:
        outer = gen_star(n_outer, rng.randrange(1 << 30)).vertices
        hole_rings = []
        guard = 0
        while len(hole_rings) < holes:
            guard += 1
            if guard > 200:
                raise ValueError("hole placement failed")
            cx = rng.randint(-600, 600)
            cy = rng.randint(-600, 600)
            r = rng.randint(40, 110)
            k = rng.choice((3, 3, 4, 5))
            base = rng.uniform(0, 2 * math.pi)
            ring = []
            for t in range(k):
                ang = base + 2 * math.pi * t / k + rng.uniform(-0.2, 0.2)
                rr = r * rng.uniform(0.7, 1.0)
                ring.append(
                    Point2(cx + round(rr * math.cos(ang)), cy + round(rr * math.sin(ang)))
                )
            ring.reverse()  # CW
            if signed_area2(ring) >= 0:
                continue
            try:
                PolygonWithHoles(outer, hole_rings + [tuple(ring)])
            except (ValidationError, ValueError):
                continue
            hole_rings.append(tuple(ring))
        return PolygonWithHoles(outer, hole_rings)

    return _attempts(build, seed, f"polygon n={n_outer} holes={holes}")


def perturb_polygon(P, seed: int = 0, magnitude: Fraction = Fraction(1, 64)):
    """Deterministic rational jitter that repairs degenerate inputs.

    Every vertex is moved by independent rational offsets up to `magnitude`
    (in units of the bounding box diagonal scale) until the result validates.
    This is a corpus-preparation helper: validation itself never perturbs.
    """
    if isinstance(P, PolygonWithHoles):
        rings = [list(P.outer.vertices)] + [list(h) for h in P.holes]
    elif isinstance(P, SimplePolygon):
        rings = [list(P.vertices)]
    else:
        rings = [list(r) for r in P]
    xs = [p.x for r in rings for p in r]
    ys = [p.y for r in rings for p in r]
    scale = max(max(xs) - min(xs), max(ys) - min(ys), 1)
    denom = 1 << 16

    for k in range(_MAX_TRIES):
        rng = random.Random(seed * 1000003 + k)
        eps = magnitude * scale
        new_rings = []
        for ring in rings:
            new_ring = []
            for p in ring:
                ddx = eps * Fraction(rng.randint(-denom, denom), denom)
                ddy = eps * Fraction(rng.randint(-denom, denom), denom)
                new_ring.append(Point2(p.x + ddx, p.y + ddy))
            new_rings.append(new_ring)
        try:
            if len(new_rings) == 1:
                return SimplePolygon(new_rings[0])
            return PolygonWithHoles(new_rings[0], new_rings[1:])
        except (ValidationError, ValueError):
            continue
    raise RuntimeError("perturbation failed to produce a valid polygon")


def random_query_segment(P, seed: int = 0, max_tries: int = 2000):
    """A uniformly drawn valid query segment strictly inside P."""
    from .oracle import SAMPLE_DENOM
    from .polygon import validate_query_segment

    if isinstance(P, PolygonWithHoles):
        x0, y0, x1, y1 = P.outer.bbox()
    else:
        x0, y0, x1, y1 = P.bbox()
    rings = P.rings()
    rng = random.Random(seed)

    def rand_pt():
        fx = Fraction(rng.randrange(SAMPLE_DENOM + 1), SAMPLE_DENOM)
        fy = Fraction(rng.randrange(SAMPLE_DENOM + 1), SAMPLE_DENOM)
        return Point2(x0 + (x1 - x0) * fx, y0 + (y1 - y0) * fy)

    for _ in range(max_tries):
        p, q = rand_pt(), rand_pt()
        if p == q:
            continue
        if point_in_rings(rings, p) != INSIDE or point_in_rings(rings, q) != INSIDE:
            continue
        try:
            validate_query_segment(P, p, q)
        except ValueError:
            continue
        return (p, q)
    raise RuntimeError("query segment sampling failed")
