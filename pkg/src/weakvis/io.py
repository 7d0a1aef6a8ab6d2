"""JSON serialization for polygons and query segments.

Schema: {"outer": [vertex, ...], "holes": [[vertex, ...], ...]} where each
vertex is either [x, y] with integer entries or [xnum, xden, ynum, yden].
The "holes" key is optional.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Union

from .errors import ParseError
from .geometry import Point2
from .polygon import PolygonWithHoles, SimplePolygon


def _vertex_from_json(entry, where: str) -> Point2:
    if not isinstance(entry, list) or len(entry) not in (2, 4):
        raise ParseError(f"{where}: vertex must be [x, y] or [xnum, xden, ynum, yden]")
    if not all(isinstance(c, int) for c in entry):
        raise ParseError(f"{where}: vertex coordinates must be integers")
    if len(entry) == 2:
        return Point2(entry[0], entry[1])
    xn, xd, yn, yd = entry
    if xd == 0 or yd == 0:
        raise ParseError(f"{where}: zero denominator")
    return Point2(Fraction(xn, xd), Fraction(yn, yd))


def _ring_from_json(entries, where: str) -> list:
    if not isinstance(entries, list):
        raise ParseError(f"{where}: expected a list of vertices")
    return [_vertex_from_json(e, f"{where}[{i}]") for i, e in enumerate(entries)]


def loads_polygon(text: str, validate: bool = True) -> Union[SimplePolygon, PolygonWithHoles]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, line=e.lineno, col=e.colno) from None
    if not isinstance(data, dict) or "outer" not in data:
        raise ParseError('top level must be an object with an "outer" key')
    outer = _ring_from_json(data["outer"], "outer")
    holes = [
        _ring_from_json(h, f"holes[{i}]") for i, h in enumerate(data.get("holes", []))
    ]
    if holes:
        return PolygonWithHoles(outer, holes, validate=validate)
    return SimplePolygon(outer, validate=validate)


def load_polygon(path: str, validate: bool = True):
    with open(path, "r", encoding="utf-8") as f:
        return loads_polygon(f.read(), validate=validate)


def _vertex_to_json(p: Point2) -> list:
    if p.x.denominator == 1 and p.y.denominator == 1:
        return [p.x.numerator, p.y.numerator]
    return [p.x.numerator, p.x.denominator, p.y.numerator, p.y.denominator]


def dumps_polygon(P) -> str:
    if isinstance(P, SimplePolygon):
        data = {"outer": [_vertex_to_json(p) for p in P.vertices]}
    elif isinstance(P, PolygonWithHoles):
        data = {
            "outer": [_vertex_to_json(p) for p in P.outer.vertices],
            "holes": [[_vertex_to_json(p) for p in h] for h in P.holes],
        }
    else:
        # bare ring (list of points)
        data = {"outer": [_vertex_to_json(p) for p in P]}
    return json.dumps(data)


def dump_polygon(P, path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps_polygon(P) + "\n")


def parse_coord(text: str) -> Fraction:
    """Parse one rational coordinate: '7', '-3/4'."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad coordinate {text!r}") from None


def parse_segment(text: str) -> tuple:
    """Parse 'x1,y1,x2,y2' (rational components) into two points."""
    parts = text.split(",")
    if len(parts) != 4:
        raise ParseError("segment must be x1,y1,x2,y2")
    c = [parse_coord(t) for t in parts]
    return (Point2(c[0], c[1]), Point2(c[2], c[3]))
