"""Polygon model: validated simple polygons, polygons with holes, chord splits.

Validation enforces general position (no three collinear vertices anywhere,
over all rings together).  Degenerate inputs are rejected, never repaired;
see generate.perturb_polygon for a deterministic repair helper.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .errors import InternalInconsistency, InvalidQuery, UnsupportedDegeneracy, ValidationError
from .geometry import (
    CCW,
    COLLINEAR,
    CW,
    Point2,
    Segment,
    collinear_param,
    cross,
    dot2,
    midpoint,
    on_segment,
    orient,
    segment_intersection,
    segments_cross_properly,
)

INSIDE = "inside"
BOUNDARY = "boundary"
OUTSIDE = "outside"

Ring = tuple  # tuple[Point2, ...]


def signed_area2(ring: Sequence[Point2]) -> Fraction:
    """Twice the signed area (positive for CCW rings)."""
    total = Fraction(0)
    for i, a in enumerate(ring):
        b = ring[(i + 1) % len(ring)]
        total += a.x * b.y - b.x * a.y
    return total


def ring_edges(ring: Sequence[Point2]) -> Iterable[Segment]:
    n = len(ring)
    for i in range(n):
        yield Segment(ring[i], ring[(i + 1) % n])


def _check_ring_simple(ring: Sequence[Point2], label: str) -> None:
    n = len(ring)
    if n < 3:
        raise ValidationError("DegenerateVertex", f"{label} has fewer than 3 vertices")
    for i in range(n):
        if ring[i] == ring[(i + 1) % n]:
            raise ValidationError("DegenerateVertex", f"{label} repeats vertex {i}")
    if len(set(ring)) != n:
        raise ValidationError("SelfIntersection", f"{label} has duplicate vertices")
    for i in range(n):
        if orient(ring[i - 1], ring[i], ring[(i + 1) % n]) == COLLINEAR:
            raise ValidationError(
                "DegenerateVertex", f"{label} vertex {i} is collinear with its neighbours"
            )
    edges = list(ring_edges(ring))
    for i in range(n):
        for j in range(i + 1, n):
            if j == i + 1 or (i == 0 and j == n - 1):
                continue  # adjacent edges share exactly their common endpoint
            if segment_intersection(edges[i], edges[j]) is not None:
                raise ValidationError(
                    "SelfIntersection", f"{label} edges {i} and {j} intersect"
                )


def _check_general_position(points: Sequence[Point2], label: str) -> None:
    """No three distinct vertices anywhere may be collinear."""
    pts = points
    m = len(pts)
    use_ints = all(
        p.x.denominator == 1 and p.y.denominator == 1 for p in pts
    )
    if use_ints:
        coords = [(p.x.numerator, p.y.numerator) for p in pts]
        for i in range(m):
            ax, ay = coords[i]
            for j in range(i + 1, m):
                bx, by = coords[j]
                ux, uy = bx - ax, by - ay
                for k in range(j + 1, m):
                    cx, cy = coords[k]
                    if ux * (cy - ay) == uy * (cx - ax):
                        raise ValidationError(
                            "DegenerateVertex",
                            f"{label}: vertices {i}, {j}, {k} are collinear",
                        )
    else:
        for i in range(m):
            for j in range(i + 1, m):
                for k in range(j + 1, m):
                    if orient(pts[i], pts[j], pts[k]) == COLLINEAR:
                        raise ValidationError(
                            "DegenerateVertex",
                            f"{label}: vertices {i}, {j}, {k} are collinear",
                        )


def point_in_rings(rings: Sequence[Sequence[Point2]], x: Point2) -> str:
    """Exact even-odd point location against a collection of closed rings."""
    inside = False
    for ring in rings:
        n = len(ring)
        for i in range(n):
            a = ring[i]
            b = ring[(i + 1) % n]
            if on_segment(x, a, b):
                return BOUNDARY
            if (a.y > x.y) != (b.y > x.y):
                o = orient(a, b, x)
                if b.y > a.y:
                    if o > 0:
                        inside = not inside
                else:
                    if o < 0:
                        inside = not inside
    return INSIDE if inside else OUTSIDE


class SimplePolygon:
    """Simple polygon, vertices in CCW order, general position enforced."""

    __slots__ = ("vertices", "n", "_reflex", "_int_coords")

    def __init__(self, vertices: Sequence[Point2], validate: bool = True):
        self.vertices = tuple(vertices)
        self.n = len(self.vertices)
        if validate:
            _check_ring_simple(self.vertices, "polygon")
            if signed_area2(self.vertices) <= 0:
                raise ValidationError("WrongOrientation", "outer ring must be CCW")
            _check_general_position(self.vertices, "polygon")
        self._reflex: Optional[tuple] = None
        self._int_coords = None

    def edge(self, i: int) -> Segment:
        return Segment(self.vertices[i], self.vertices[(i + 1) % self.n])

    def edges(self) -> Iterable[Segment]:
        return ring_edges(self.vertices)

    def prev(self, i: int) -> int:
        return (i - 1) % self.n

    def next(self, i: int) -> int:
        return (i + 1) % self.n

    @property
    def reflex_flags(self) -> tuple:
        if self._reflex is None:
            v = self.vertices
            self._reflex = tuple(
                orient(v[i - 1], v[i], v[(i + 1) % self.n]) == CW
                for i in range(self.n)
            )
        return self._reflex

    def is_reflex(self, i: int) -> bool:
        return self.reflex_flags[i]

    def is_convex(self) -> bool:
        return not any(self.reflex_flags)

    def area2(self) -> Fraction:
        return signed_area2(self.vertices)

    def rings(self) -> list:
        return [self.vertices]

    def point_in(self, x: Point2) -> str:
        return point_in_rings([self.vertices], x)

    def bbox(self) -> tuple:
        xs = [p.x for p in self.vertices]
        ys = [p.y for p in self.vertices]
        return (min(xs), min(ys), max(xs), max(ys))

    def __repr__(self):
        return f"SimplePolygon(n={self.n})"


class PolygonWithHoles:
    """CCW outer ring plus CW hole rings, pairwise disjoint, holes strictly inside."""

    __slots__ = ("outer", "holes")

    def __init__(self, outer, holes: Sequence[Sequence[Point2]] = (), validate: bool = True):
        if isinstance(outer, SimplePolygon):
            self.outer = outer if not validate else SimplePolygon(outer.vertices)
        else:
            self.outer = SimplePolygon(tuple(outer), validate=validate)
        self.holes = tuple(tuple(h) for h in holes)
        if validate:
            self._validate_holes()

    def _validate_holes(self) -> None:
        for hi, hole in enumerate(self.holes):
            _check_ring_simple(hole, f"hole {hi}")
            if signed_area2(hole) >= 0:
                raise ValidationError("WrongOrientation", f"hole {hi} must be CW")
            for v in hole:
                if point_in_rings([self.outer.vertices], v) != INSIDE:
                    raise ValidationError(
                        "HoleOutsideOuter", f"hole {hi} vertex {v!r} not strictly inside"
                    )
            for e1 in ring_edges(hole):
                for e2 in self.outer.edges():
                    if segment_intersection(e1, e2) is not None:
                        raise ValidationError(
                            "HoleOutsideOuter", f"hole {hi} touches the outer ring"
                        )
        for hi in range(len(self.holes)):
            for hj in range(hi + 1, len(self.holes)):
                a, b = self.holes[hi], self.holes[hj]
                for e1 in ring_edges(a):
                    for e2 in ring_edges(b):
                        if segment_intersection(e1, e2) is not None:
                            raise ValidationError(
                                "HolesTouch", f"holes {hi} and {hj} intersect"
                            )
                if point_in_rings([a], b[0]) != OUTSIDE or point_in_rings([b], a[0]) != OUTSIDE:
                    raise ValidationError("HolesTouch", f"holes {hi} and {hj} are nested")
        all_pts = list(self.outer.vertices)
        for hole in self.holes:
            all_pts.extend(hole)
        _check_general_position(all_pts, "polygon with holes")

    @property
    def h(self) -> int:
        return len(self.holes)

    def rings(self) -> list:
        return [self.outer.vertices, *self.holes]

    def point_in(self, x: Point2) -> str:
        return point_in_rings(self.rings(), x)

    def boundary_edges(self) -> Iterable[tuple]:
        """Yields (ring_index, edge_index, Segment); ring 0 is the outer ring."""
        for ri, ring in enumerate(self.rings()):
            n = len(ring)
            for i in range(n):
                yield (ri, i, Segment(ring[i], ring[(i + 1) % n]))

    def __repr__(self):
        return f"PolygonWithHoles(n={self.outer.n}, h={self.h})"


AnyPolygon = Union[SimplePolygon, PolygonWithHoles]


def as_rings(P: AnyPolygon) -> list:
    return P.rings()


def ray_shoot(P: AnyPolygon, origin: Point2, direction: tuple) -> tuple:
    """First boundary point hit by the open ray; returns (point, ring_i, edge_i).

    Ties (a vertex hit) resolve to the lowest (ring, edge) pair.  Returns
    (None, None, None) when nothing is hit.
    """
    from .geometry import ray_segment_hit

    dx, dy = direction
    best = None
    rings = as_rings(P)
    for ri, ring in enumerate(rings):
        n = len(ring)
        for i in range(n):
            hit = ray_segment_hit(origin, direction, Segment(ring[i], ring[(i + 1) % n]))
            if hit is None:
                continue
            if dx != 0:
                t = (hit.x - origin.x) / dx
            else:
                t = (hit.y - origin.y) / dy
            if best is None or t < best[0]:
                best = (t, hit, ri, i)
    if best is None:
        return (None, None, None)
    return (best[1], best[2], best[3])


# -- provenance-tagged cycles ------------------------------------------------

ORIG = "orig"
CUT = "cut"


class TaggedCycle:
    """Closed CCW vertex cycle with per-vertex provenance.

    Tags are ("orig", source_vertex_index) for inherited vertices and
    ("cut", source_edge_index_or_None) for constructed boundary points.  The
    cycle may be weakly simple (boundary touches itself without crossing).
    """

    __slots__ = ("points", "tags")

    def __init__(self, points: Sequence[Point2], tags: Sequence[tuple]):
        self.points = list(points)
        self.tags = list(tags)
        if len(self.points) != len(self.tags):
            raise InternalInconsistency("cycle points/tags length mismatch")

    def __len__(self):
        return len(self.points)

    def edge(self, i: int) -> Segment:
        return Segment(self.points[i], self.points[(i + 1) % len(self.points)])

    def area2(self) -> Fraction:
        return signed_area2(self.points)

    def __repr__(self):
        return f"TaggedCycle(n={len(self.points)})"


class SplitResult:
    """Outcome of cutting a simple polygon along the chord of a query line."""

    __slots__ = ("left", "right", "a", "b", "edge_a", "edge_b")

    def __init__(self, left, right, a, b, edge_a, edge_b):
        self.left = left    # TaggedCycle left of the directed line p->q
        self.right = right  # TaggedCycle right of it
        self.a = a          # chord endpoint hit first along p->q
        self.b = b          # chord endpoint hit last
        self.edge_a = edge_a
        self.edge_b = edge_b


def line_param(p: Point2, q: Point2, x: Point2) -> Fraction:
    """Parameter of the projection of x on the directed line p->q (p=0, q=1)."""
    dx, dy = q.x - p.x, q.y - p.y
    return dot2(x.x - p.x, x.y - p.y, dx, dy) / dot2(dx, dy, dx, dy)


def split_along_line(P: SimplePolygon, p: Point2, q: Point2) -> SplitResult:
    """Cut P along the chord of line(p, q) that contains the segment pq.

    The line must avoid every vertex of P (otherwise UnsupportedDegeneracy)
    and the open segment pq must lie strictly inside P (otherwise
    InvalidQuery).  When the line crosses P several times only the component
    containing pq is cut; the two returned pieces are CCW TaggedCycles.
    """
    if p == q:
        raise InvalidQuery("query endpoints coincide")
    v = P.vertices
    for i, vert in enumerate(v):
        if orient(p, q, vert) == COLLINEAR:
            raise UnsupportedDegeneracy(f"query line passes through vertex {i}")
    crossings = []  # (param, edge_index, point)
    for i in range(P.n):
        a, b = v[i], v[(i + 1) % P.n]
        oa, ob = orient(p, q, a), orient(p, q, b)
        if oa == ob:
            continue
        # strict crossing (no vertex on the line, so signs are nonzero)
        seg = Segment(a, b)
        dx, dy = q.x - p.x, q.y - p.y
        ex, ey = b.x - a.x, b.y - a.y
        denom = cross(dx, dy, ex, ey)
        t = cross(a.x - p.x, a.y - p.y, ex, ey) / denom
        pt = Point2(p.x + t * dx, p.y + t * dy)
        crossings.append((line_param(p, q, pt), i, pt))
    crossings.sort(key=lambda c: c[0])
    if len(crossings) % 2 != 0 or not crossings:
        raise InternalInconsistency("odd number of line crossings")
    tp, tq = Fraction(0), Fraction(1)
    chord = None
    for k in range(0, len(crossings), 2):
        lo, hi = crossings[k][0], crossings[k + 1][0]
        if lo < tp and tq < hi:
            chord = (crossings[k], crossings[k + 1])
            break
    if chord is None:
        raise InvalidQuery("segment pq does not lie strictly inside the polygon")
    (ta, ea, A), (tb, eb, B) = chord
    if ea == eb:
        raise InternalInconsistency("chord endpoints on one edge")

    def walk(start_pt, start_edge, end_pt, end_edge):
        pts = [start_pt]
        tags = [(CUT, start_edge)]
        i = (start_edge + 1) % P.n
        stop = (end_edge + 1) % P.n
        while i != stop:
            pts.append(v[i])
            tags.append((ORIG, i))
            i = (i + 1) % P.n
        pts.append(end_pt)
        tags.append((CUT, end_edge))
        return TaggedCycle(pts, tags)

    right = walk(A, ea, B, eb)
    left = walk(B, eb, A, ea)
    if right.area2() <= 0 or left.area2() <= 0:
        raise InternalInconsistency("split produced a non-CCW piece")
    return SplitResult(left, right, A, B, ea, eb)


def validate_query_segment(P: AnyPolygon, p: Point2, q: Point2) -> None:
    """Check the standing preconditions for a query segment pq.

    Both endpoints strictly inside, supporting line through no vertex, and the
    open segment itself entirely in the interior (it may not cross or touch
    the boundary, including hole boundaries).
    """
    if p == q:
        raise InvalidQuery("query endpoints coincide")
    if P.point_in(p) != INSIDE or P.point_in(q) != INSIDE:
        raise InvalidQuery("query endpoints must be strictly inside the polygon")
    rings = as_rings(P)
    for ring in rings:
        for vert in ring:
            if orient(p, q, vert) == COLLINEAR:
                raise UnsupportedDegeneracy("query line passes through a vertex")
    pq = Segment(p, q)
    for ring in rings:
        for e in ring_edges(ring):
            if segment_intersection(pq, e) is not None:
                raise InvalidQuery("query segment touches the boundary")
