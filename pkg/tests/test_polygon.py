import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from helpers import HOLED_HOLE, HOLED_OUTER, LSHAPE, POCKETS, SQUARE, P, poly, winding_number
from weakvis.errors import (
    InvalidQuery,
    ParseError,
    UnsupportedDegeneracy,
    ValidationError,
)
from weakvis.geometry import Point2, Segment, lerp, on_segment, orient
from weakvis.io import dumps_polygon, loads_polygon, parse_segment
from weakvis.polygon import (
    BOUNDARY,
    INSIDE,
    OUTSIDE,
    PolygonWithHoles,
    SimplePolygon,
    point_in_rings,
    ray_shoot,
    signed_area2,
    split_along_line,
    validate_query_segment,
)


class TestValidation:
    def test_square_ok(self):
        sq = poly(*SQUARE)
        assert sq.n == 4
        assert sq.is_convex()
        assert sq.area2() == 200

    def test_lshape_reflex(self):
        L = poly(*LSHAPE)
        assert [i for i in range(L.n) if L.is_reflex(i)] == [3]

    def test_wrong_orientation(self):
        with pytest.raises(ValidationError) as e:
            poly(*reversed(SQUARE))
        assert e.value.kind == "WrongOrientation"

    def test_self_intersection(self):
        with pytest.raises(ValidationError) as e:
            poly((0, 0), (10, 10), (10, 0), (0, 10))
        assert e.value.kind == "SelfIntersection"

    def test_duplicate_vertex(self):
        with pytest.raises(ValidationError) as e:
            poly((0, 0), (10, 0), (10, 10), (0, 10), (0, 0))
        assert e.value.kind in ("SelfIntersection", "DegenerateVertex")

    def test_consecutive_collinear(self):
        with pytest.raises(ValidationError) as e:
            poly((0, 0), (5, 0), (10, 0), (10, 10), (0, 10))
        assert e.value.kind == "DegenerateVertex"

    def test_nonconsecutive_collinear_rejected(self):
        # (0,0), (4,4), (10,10) all on the diagonal
        with pytest.raises(ValidationError) as e:
            poly((0, 0), (10, 0), (10, 10), (4, 4), (0, 10))
        assert e.value.kind in ("DegenerateVertex", "SelfIntersection")

    def test_too_few(self):
        with pytest.raises(ValidationError):
            poly((0, 0), (1, 0))

    def test_hole_validation(self):
        Ph = PolygonWithHoles([P(*c) for c in HOLED_OUTER], [[P(*c) for c in HOLED_HOLE]])
        assert Ph.h == 1
        assert Ph.point_in(P(10, 6)) == OUTSIDE  # inside the hole = not in region
        assert Ph.point_in(P(1, 1)) == INSIDE

    def test_hole_must_be_cw(self):
        outer = [P(*c) for c in HOLED_OUTER]
        hole_ccw = [P(*c) for c in reversed(HOLED_HOLE)]
        with pytest.raises(ValidationError) as e:
            PolygonWithHoles(outer, [hole_ccw])
        assert e.value.kind == "WrongOrientation"

    def test_hole_outside(self):
        outer = [P(0, 0), P(12, 0), P(12, 10), P(0, 10)]
        hole = [P(15, 4), P(14, 6), P(16, 7), P(17, 5)]
        with pytest.raises(ValidationError) as e:
            PolygonWithHoles(outer, [hole])
        assert e.value.kind == "HoleOutsideOuter"

    def test_holes_touching(self):
        outer = [P(0, 0), P(20, 0), P(20, 10), P(0, 10)]
        h1 = [P(5, 4), P(4, 6), P(6, 7), P(7, 5)]
        h2 = [P(7, 5), P(6, 7), P(9, 8), P(10, 6)]
        with pytest.raises(ValidationError) as e:
            PolygonWithHoles(outer, [h1, h2])
        assert e.value.kind in ("HolesTouch", "DegenerateVertex")


class TestPointIn:
    def test_basics(self):
        sq = poly(*SQUARE)
        assert sq.point_in(P(5, 5)) == INSIDE
        assert sq.point_in(P(10, 5)) == BOUNDARY
        assert sq.point_in(P(10, 10)) == BOUNDARY
        assert sq.point_in(P(11, 5)) == OUTSIDE
        assert sq.point_in(P(5, Fraction(1, 3))) == INSIDE

    def test_pocket_polygon(self):
        pk = poly(*POCKETS)
        assert pk.point_in(P(7, 5)) == INSIDE
        assert pk.point_in(P(7, 9)) == OUTSIDE  # between the teeth, above the mouth

    def test_agrees_with_winding_on_random_points(self):
        rng = random.Random(7)
        shapes = [poly(*SQUARE), poly(*LSHAPE), poly(*POCKETS)]
        holed = PolygonWithHoles(
            [P(*c) for c in HOLED_OUTER], [[P(*c) for c in HOLED_HOLE]]
        )
        cases = [(s, s.rings()) for s in shapes] + [(holed, holed.rings())]
        checked = 0
        for _ in range(1000):
            Pp, rings = cases[rng.randrange(len(cases))]
            x = Point2(
                Fraction(rng.randint(-30, 300), 20), Fraction(rng.randint(-30, 300), 20)
            )
            got = point_in_rings(rings, x)
            if got == BOUNDARY:
                continue
            w = winding_number(rings, x)
            assert (got == INSIDE) == (w != 0), (Pp, x)
            checked += 1
        assert checked > 900


class TestRayShoot:
    def test_axis_hit(self):
        sq = poly(*SQUARE)
        pt, ri, ei = ray_shoot(sq, P(5, 5), (Fraction(1), Fraction(0)))
        assert pt == P(10, 5) and ri == 0 and ei == 1

    def test_nearest_of_many(self):
        pk = poly(*POCKETS)
        pt, ri, ei = ray_shoot(pk, P(7, 1), (Fraction(0), Fraction(1)))
        assert pt.y < 9  # stops at the tooth mouth, not the far top
        assert ri == 0

    def test_miss_from_outside(self):
        sq = poly(*SQUARE)
        pt, ri, ei = ray_shoot(sq, P(20, 20), (Fraction(1), Fraction(0)))
        assert pt is None


class TestSplit:
    def test_square_split_areas(self):
        sq = poly(*SQUARE)
        res = split_along_line(sq, P(2, 5), P(3, 5))
        assert res.a == P(0, 5) and res.b == P(10, 5)
        assert res.left.area2() == 100 and res.right.area2() == 100
        assert [t for t, _ in res.left.tags].count("cut") == 2

    def test_split_line_through_vertex_rejected(self):
        sq = poly(*SQUARE)
        with pytest.raises(UnsupportedDegeneracy):
            split_along_line(sq, P(1, 1), P(2, 2))

    def test_split_outside_rejected(self):
        sq = poly(*SQUARE)
        with pytest.raises(InvalidQuery):
            split_along_line(sq, P(11, 5), P(12, 5))

    def test_multi_component_restricts_to_pq(self):
        pk = poly(*POCKETS)
        # the horizontal line y=5 crosses both teeth; take the middle chamber
        res = split_along_line(pk, P(6, 5), P(8, 5))
        # the cut chord spans the middle chamber, not the whole line extent
        assert res.a == P(5, 5) and res.b == P(9, 5)
        assert res.left.area2() > 0 and res.right.area2() > 0
        assert res.left.area2() + res.right.area2() == signed_area2(pk.vertices)

    @given(st.integers(0, 10**6))
    @settings(max_examples=60, deadline=None)
    def test_split_properties_random_lines(self, seed):
        rng = random.Random(seed)
        shape = rng.choice([poly(*SQUARE), poly(*LSHAPE), poly(*POCKETS)])
        p = Point2(Fraction(rng.randint(1, 279), 20), Fraction(rng.randint(1, 179), 20))
        q = Point2(Fraction(rng.randint(1, 279), 20), Fraction(rng.randint(1, 179), 20))
        try:
            validate_query_segment(shape, p, q)
        except (InvalidQuery, UnsupportedDegeneracy):
            assume(False)
        res = split_along_line(shape, p, q)
        assert res.left.area2() > 0 and res.right.area2() > 0
        # cut points lie on their source edges
        for piece in (res.left, res.right):
            for pt, (kind, ref) in zip(piece.points, piece.tags):
                if kind == "cut":
                    e = shape.edge(ref)
                    assert on_segment(pt, e.a, e.b)
                else:
                    assert shape.vertices[ref] == pt
        # the two pieces partition the polygon exactly
        assert res.left.area2() + res.right.area2() == shape.area2()
        # p and q sit on the chord
        assert orient(res.a, res.b, p) == 0 and orient(res.a, res.b, q) == 0


class TestJson:
    def test_round_trip_simple(self):
        sq = poly(*SQUARE)
        again = loads_polygon(dumps_polygon(sq))
        assert isinstance(again, SimplePolygon)
        assert again.vertices == sq.vertices

    def test_round_trip_rational_and_holes(self):
        outer = [P(0, 0), P(12, 0), P(12, 10), P(0, 10)]
        hole = [
            Point2(Fraction(9, 2), Fraction(4)),
            Point2(Fraction(4), Fraction(11, 2)),
            Point2(Fraction(11, 2), Fraction(13, 2)),
            Point2(Fraction(13, 2), Fraction(5)),
        ]
        Ph = PolygonWithHoles(outer, [hole])
        again = loads_polygon(dumps_polygon(Ph))
        assert isinstance(again, PolygonWithHoles)
        assert again.outer.vertices == Ph.outer.vertices
        assert again.holes == Ph.holes

    def test_bad_json_has_position(self):
        with pytest.raises(ParseError) as e:
            loads_polygon('{"outer": [[0, 0], [1 1]]}')
        assert e.value.line == 1 and e.value.col is not None

    def test_bad_schema(self):
        with pytest.raises(ParseError):
            loads_polygon('{"inner": []}')
        with pytest.raises(ParseError):
            loads_polygon('{"outer": [[0, 0, 0], [1, 1], [0, 1]]}')
        with pytest.raises(ParseError):
            loads_polygon('{"outer": [[0.5, 0], [1, 1], [0, 1]]}')
        with pytest.raises(ParseError):
            loads_polygon('{"outer": [[1, 0, 1, 0], [1, 1], [0, 1]]}')

    def test_parse_segment(self):
        p, q = parse_segment("1/2,3,4,-5/6")
        assert p == Point2(Fraction(1, 2), Fraction(3))
        assert q == Point2(Fraction(4), Fraction(-5, 6))


class TestQueryValidation:
    def test_good(self):
        sq = poly(*SQUARE)
        validate_query_segment(sq, P(2, 5), P(3, 5))

    def test_endpoint_outside(self):
        sq = poly(*SQUARE)
        with pytest.raises(InvalidQuery):
            validate_query_segment(sq, P(2, 5), P(30, 5))

    def test_through_vertex(self):
        sq = poly(*SQUARE)
        with pytest.raises(UnsupportedDegeneracy):
            validate_query_segment(sq, P(1, 1), P(3, 3))

    def test_crossing_boundary(self):
        L = poly(*LSHAPE)
        with pytest.raises(InvalidQuery):
            validate_query_segment(L, P(1, 1), P(7, Fraction(75, 10)))

    def test_segment_through_hole(self):
        Ph = PolygonWithHoles([P(*c) for c in HOLED_OUTER], [[P(*c) for c in HOLED_HOLE]])
        y = Fraction(11, 2)
        with pytest.raises(InvalidQuery):
            validate_query_segment(Ph, Point2(1, y), Point2(Fraction(23, 2), y))
        validate_query_segment(Ph, P(1, 1), P(11, 1))
