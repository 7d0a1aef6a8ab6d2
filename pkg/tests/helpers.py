"""Shared fixtures and independent reference implementations for the tests."""

from fractions import Fraction

from weakvis.geometry import Point2, dist2, orient, sqrt_sum_sign
from weakvis.polygon import SimplePolygon


def P(x, y):
    return Point2(Fraction(x), Fraction(y))


def poly(*coords):
    return SimplePolygon([P(x, y) for x, y in coords])


def ring(*coords):
    return tuple(P(x, y) for x, y in coords)


# a convex quadrilateral, the base sanity case
SQUARE = [(0, 0), (10, 0), (10, 10), (0, 10)]

# one reflex vertex
LSHAPE = [(0, 0), (8, 0), (8, 3), (5, 4), (5, 9), (0, 8)]

# square with two notches of staggered depths cut into the top side
TWO_NOTCH = [
    (0, 0),
    (10, 0),
    (10, 10),
    (8, Fraction(97, 10)),
    (8, 7),
    (6, Fraction(71, 10)),
    (6, Fraction(99, 10)),
    (4, Fraction(49, 5)),
    (4, Fraction(59, 10)),
    (2, Fraction(61, 10)),
    (2, Fraction(96, 10)),
    (0, 10),
]

# two deep slits making three chambers along the bottom
POCKETS = [
    (0, 0),
    (14, 0),
    (14, 9),
    (12, 10),
    (12, 3),
    (9, 2),
    (9, 8),
    (5, 8),
    (5, 2),
    (2, 3),
    (2, 11),
    (0, 9),
]

# a square with one small convex hole
HOLED_OUTER = [(0, 0), (12, 0), (12, 10), (0, 10)]
HOLED_HOLE = [(9, 4), (8, 6), (10, 7), (11, 5)]


def winding_number(rings, x: Point2) -> int:
    """Independent point-in-polygon route: signed crossing number."""
    w = 0
    for ring_pts in rings:
        n = len(ring_pts)
        for i in range(n):
            a = ring_pts[i]
            b = ring_pts[(i + 1) % n]
            if a.y <= x.y < b.y and orient(a, b, x) > 0:
                w += 1
            elif b.y <= x.y < a.y and orient(a, b, x) < 0:
                w -= 1
    return w


def geodesic_paths_dijkstra(cycle_points, root, sightline_free):
    """Exact single-source geodesic paths over the visibility graph.

    Deliberately different route from the tree builder under test: builds the
    full visibility graph with the parity-based oracle primitive, then relaxes
    with exact sum-of-radicals length comparisons until stable.  Returns the
    list of paths (vertex point sequences including the root) indexed by
    cycle position.
    """
    n = len(cycle_points)
    nodes = list(range(n))
    vis = {}

    def free(a, b):
        key = (a, b)
        if key not in vis:
            vis[key] = sightline_free([cycle_points], a, b)
        return vis[key]

    paths = [None] * n
    for j in nodes:
        if free(root, cycle_points[j]):
            paths[j] = [root, cycle_points[j]]
    edges = []
    for i in nodes:
        for j in nodes:
            if i != j and free(cycle_points[i], cycle_points[j]):
                edges.append((i, j))
    changed = True
    rounds = 0
    while changed:
        changed = False
        rounds += 1
        if rounds > n + 2:
            raise RuntimeError("negative-cycle impossibility: relaxation diverged")
        for i, j in edges:
            if paths[i] is None:
                continue
            cand = paths[i] + [cycle_points[j]]
            if paths[j] is None or _path_cmp(cand, paths[j]) < 0:
                paths[j] = cand
                changed = True
    return paths


def _path_cmp(pa, pb) -> int:
    terms = []
    for u, v in zip(pa, pa[1:]):
        terms.append((Fraction(1), dist2(u, v)))
    for u, v in zip(pb, pb[1:]):
        terms.append((Fraction(-1), dist2(u, v)))
    return sqrt_sum_sign(terms)
