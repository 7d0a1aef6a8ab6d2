"""Shortest path trees in simple (or weakly simple) polygon cycles.

Geodesics inside a simply connected polygon are exactly the locally taut
vertex paths, so the tree of all geodesics from a root can be grown by a
depth-first search using orientation predicates only: no distances, no
radicals.  Each tree edge is certified by a local tautness test at the bend
vertex; reaching every vertex exactly once is asserted.

Visibility between cycle vertices is decided structurally (admissible
direction cones at both endpoints, no proper edge crossing, and legal grazing
at any vertex met along the way), which is a different route from the
midpoint-parity test used by the brute-force oracle that checks this module.

All predicates run on integer coordinates: each cycle is rescaled once by the
common denominator of its points.  Sign tests may mix scales freely between
independent direction vectors, so external points only need a compatible
rescale of the cycle (cached per scale factor).
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import lcm
from typing import Optional, Sequence, Union

from .errors import InternalInconsistency
from .geometry import CCW, COLLINEAR, CW, Point2, cross, dot2, orient
from .polygon import TaggedCycle

Root = Union[int, Point2]

# classification of the tree edge arriving at a vertex
PRIMARY = "primary"        # parent is the root itself
SECONDARY1 = "secondary1"  # parent is a child of the root
SECONDARY2 = "secondary2"  # everything deeper


def _sign(v: int) -> int:
    return (v > 0) - (v < 0)


class CycleGeometry:
    """A closed CCW vertex cycle with cached structural visibility queries.

    `base_cache` is an optional dict shared by cycles derived from one source
    polygon: visibility between two inherited vertices does not change when
    the polygon is cut along a chord (a straight sightline cannot cross a
    chord twice), so those answers are keyed by source vertex index pairs and
    reused across pieces.
    """

    __slots__ = (
        "points",
        "n",
        "tags",
        "_vis",
        "base_cache",
        "_orig",
        "_den",
        "_ip",
        "_scaled",
    )

    def __init__(self, points: Sequence[Point2], tags=None, base_cache=None):
        self.points = list(points)
        self.n = len(self.points)
        self.tags = list(tags) if tags is not None else [("orig", i) for i in range(self.n)]
        self._vis: dict = {}
        self.base_cache = base_cache
        self._orig = [
            t[1] if t is not None and t[0] == "orig" else None for t in self.tags
        ]
        den = 1
        for pt in self.points:
            den = lcm(den, pt.x.denominator, pt.y.denominator)
        self._den = den
        self._ip = [(int(pt.x * den), int(pt.y * den)) for pt in self.points]
        self._scaled = {1: self._ip}

    @classmethod
    def of_cycle(cls, cycle: TaggedCycle, base_cache=None) -> "CycleGeometry":
        return cls(cycle.points, cycle.tags, base_cache)

    def _frame(self, pt: Point2):
        """Integer coordinates of an external point and the matching cycle."""
        den2 = lcm(self._den, pt.x.denominator, pt.y.denominator)
        f = den2 // self._den
        ip = self._scaled.get(f)
        if ip is None:
            ip = [(x * f, y * f) for x, y in self._ip]
            self._scaled[f] = ip
        return (int(pt.x * den2), int(pt.y * den2)), ip

    def _iadm(self, i: int, dx: int, dy: int) -> bool:
        """admissible() on integer direction components (any positive scale)."""
        ip = self._ip
        wx, wy = ip[i]
        ax, ay = ip[i - 1]
        bx, by = ip[(i + 1) % self.n]
        ux, uy = bx - wx, by - wy   # outgoing boundary edge
        vx, vy = ax - wx, ay - wy   # back along the incoming edge
        s = ux * vy - uy * vx
        if s > 0:
            # convex corner: interior sector from u CCW to v
            return ux * dy - uy * dx >= 0 and dx * vy - dy * vx >= 0
        if s < 0:
            # reflex corner: complement of the strict sector from v CCW to u
            return not (vx * dy - vy * dx > 0 and dx * uy - dy * ux > 0)
        if ux * vx + uy * vy < 0:
            # straight corner: left closed half plane of the outgoing edge
            return ux * dy - uy * dx >= 0
        # zero-angle spike (weakly simple cycles only): along the spike
        return ux * dy - uy * dx == 0 and ux * dx + uy * dy > 0

    def admissible(self, i: int, dx, dy) -> bool:
        """True iff direction (dx, dy) at vertex i points into the closed region."""
        if not isinstance(dx, int) or not isinstance(dy, int):
            d = lcm(Fraction(dx).denominator, Fraction(dy).denominator)
            dx, dy = int(dx * d), int(dy * d)
        return self._iadm(i, dx, dy)

    def passable(self, i: int, dx, dy) -> bool:
        """A sightline of direction (dx, dy) may graze vertex i and continue."""
        return self.admissible(i, dx, dy) and self.admissible(i, -dx, -dy)

    def _clear(self, a, b, ip, skip) -> bool:
        """No proper edge crossing and every vertex met en route is passable.

        a, b and the cycle list ip share one integer frame.
        """
        n = self.n
        ax, ay = a
        bx, by = b
        abx, aby = bx - ax, by - ay
        for k in range(n):
            cx, cy = ip[k]
            dx, dy = ip[(k + 1) % n]
            ex, ey = dx - cx, dy - cy
            o1 = _sign(ex * (ay - cy) - ey * (ax - cx))
            o2 = _sign(ex * (by - cy) - ey * (bx - cx))
            if (o1 > 0 and o2 > 0) or (o1 < 0 and o2 < 0):
                continue
            if o1 != o2 and o1 != 0 and o2 != 0:
                o3 = _sign(abx * (cy - ay) - aby * (cx - ax))
                o4 = _sign(abx * (dy - ay) - aby * (dx - ax))
                if o3 * o4 < 0:
                    return False
        # vertices met strictly inside the segment must let it graze past.
        # Positions sharing one coordinate (pinch points of weakly simple
        # cycles) each carry their own interior sector; the sectors meet at
        # the point but do not connect through it (the doubled walls always
        # end on an obstacle), so one single position must admit both the
        # arrival and the departure direction
        groups: dict = {}
        lox, hix = min(ax, bx), max(ax, bx)
        loy, hiy = min(ay, by), max(ay, by)
        for k in range(n):
            if k in skip:
                continue
            wx, wy = ip[k]
            if (wx == ax and wy == ay) or (wx == bx and wy == by):
                continue
            if abx * (wy - ay) - aby * (wx - ax) != 0:
                continue
            if lox <= wx <= hix and loy <= wy <= hiy:
                groups.setdefault((wx, wy), []).append(k)
        for ks in groups.values():
            if not any(
                self._iadm(k, -abx, -aby) and self._iadm(k, abx, aby)
                for k in ks
            ):
                return False
        return True

    def visible(self, i: int, j: int) -> bool:
        """Structural vertex-to-vertex visibility on this cycle."""
        if i == j:
            return True
        if j < i:
            i, j = j, i
        key = (i, j)
        got = self._vis.get(key)
        if got is not None:
            return got
        oi, oj = self._orig[i], self._orig[j]
        use_base = (
            self.base_cache is not None and oi is not None and oj is not None
        )
        if use_base:
            bkey = (oi, oj) if oi <= oj else (oj, oi)
            got = self.base_cache.get(bkey)
            if got is not None:
                self._vis[key] = got
                return got
        got = self._visible_compute(i, j)
        self._vis[key] = got
        if use_base:
            self.base_cache[bkey] = got
        return got

    def _visible_compute(self, i: int, j: int) -> bool:
        if (i + 1) % self.n == j or (j + 1) % self.n == i:
            return True
        a, b = self._ip[i], self._ip[j]
        if a == b:
            return True
        dx, dy = b[0] - a[0], b[1] - a[1]
        if not self._iadm(i, dx, dy):
            return False
        if not self._iadm(j, -dx, -dy):
            return False
        return self._clear(a, b, self._ip, (i, j))

    def visible_from_point(self, pt: Point2, j: int) -> bool:
        """Visibility from a free interior or boundary point to vertex j.

        The point is not a cycle vertex, so only the vertex-side cone and the
        crossing scan apply; the caller guarantees pt is in the closed region.
        """
        if pt == self.points[j]:
            return True
        a, ip = self._frame(pt)
        b = ip[j]
        dx, dy = b[0] - a[0], b[1] - a[1]
        if not self._iadm(j, -dx, -dy):
            return False
        skip = tuple(k for k in range(self.n) if ip[k] == b)
        return self._clear(a, b, ip, skip)


class ShortestPathTree:
    """Geodesic tree from one root to every cycle vertex.

    bend[v] is the turn direction at parent(v) when the path from the root
    reaches v (0 for children of the root).  cn_left[v] counts the left
    (CCW) interior bends along the whole root-to-v path, cn_right[v] the
    right ones; a vertex is invisible from the root exactly when
    cn_left + cn_right > 0.
    """

    __slots__ = (
        "geom",
        "root",
        "root_index",
        "parent",
        "children",
        "preorder",
        "bend",
        "cn_left",
        "cn_right",
        "debit",
        "subtree_min",
        "subtree_max",
    )

    def __init__(self, geom: CycleGeometry, root: Root):
        self.geom = geom
        if isinstance(root, int):
            self.root_index = root
            self.root = geom.points[root]
        else:
            self.root_index = None
            self.root = root
        n = geom.n
        self.parent = [None] * n  # None = unreached, -1 = child of root
        self.children = [[] for _ in range(n)]
        self.preorder: list = []
        self.bend = [0] * n
        self.cn_left = [0] * n
        self.cn_right = [0] * n
        # pending lazy shift of the critical numbers below a vertex; always
        # zero on a freshly built tree, nonzero only in overlays maintained
        # by the query structures
        self.debit = [0] * n
        self.subtree_min = [0] * n
        self.subtree_max = [0] * n
        self._build()

    def _build(self) -> None:
        geom = self.geom
        n = geom.n
        ri = self.root_index
        if ri is not None:
            self.parent[ri] = -2  # the root itself
            root_i, ip = geom._ip[ri], geom._ip
        else:
            root_i, ip = geom._frame(self.root)
        unreached = set(range(n)) - ({ri} if ri is not None else set())

        def visible_from(u: Optional[int], j: int) -> bool:
            if u is None:
                return geom.visible_from_point(self.root, j)
            return geom.visible(u, j)

        def iorient(a, b, c) -> int:
            return _sign(
                (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
            )

        root_children = sorted(j for j in list(unreached) if visible_from(ri, j))

        def taut_at(u: int, prev_i, j: int) -> bool:
            # extending the path ...prev -> u by u -> j must wrap material at
            # u: every local variation of the bend point is pinned by the
            # solid cone.  A variation moves the bend into the open elbow
            # (between the departure direction and the reversed arrival
            # direction), so the bend is taut exactly when the solid cone
            # meets that open elbow
            ui = ip[u]
            ji = ip[j]
            s = iorient(prev_i, ui, ji)
            if s == 0:
                return False  # straight continuation never creates a tree bend
            d1x, d1y = ui[0] - prev_i[0], ui[1] - prev_i[1]
            d2x, d2y = ji[0] - ui[0], ji[1] - ui[1]
            if s == CCW:
                e1x, e1y, e2x, e2y = d2x, d2y, -d1x, -d1y
            else:
                e1x, e1y, e2x, e2y = -d1x, -d1y, d2x, d2y

            def in_elbow(x, y):
                return e1x * y - e1y * x > 0 and x * e2y - y * e2x > 0

            va = ip[u - 1]
            vb = ip[(u + 1) % n]
            if in_elbow(va[0] - ui[0], va[1] - ui[1]):
                return True
            if in_elbow(vb[0] - ui[0], vb[1] - ui[1]):
                return True
            # no cone boundary ray inside the elbow: the solid cone either
            # misses the elbow or swallows it whole; probe the elbow middle
            return not geom._iadm(u, e1x + e2x, e1y + e2y)

        for j in root_children:
            self.parent[j] = -1
            unreached.discard(j)
        # depth-first growth: a vertex joins the tree under the first node
        # whose geodesic extension to it is taut; in a simply connected
        # region that parent is unique
        order = []
        stack = list(reversed(root_children))
        while stack:
            u = stack.pop()
            order.append(u)
            prev_i = root_i if self.parent[u] == -1 else ip[self.parent[u]]
            kids = []
            for j in sorted(unreached):
                if not visible_from(u, j):
                    continue
                if taut_at(u, prev_i, j):
                    kids.append(j)
            for j in kids:
                self.parent[j] = u
                unreached.discard(j)
            self.children[u] = kids
            stack.extend(reversed(kids))
        if unreached:
            raise InternalInconsistency(
                f"shortest path tree did not reach vertices {sorted(unreached)}"
            )
        self.preorder = order
        # bends and cumulative bend counts in preorder
        for u in order:
            p = self.parent[u]
            if p == -1:
                self.bend[u] = 0
                self.cn_left[u] = 0
                self.cn_right[u] = 0
            else:
                gp = self.parent[p]
                gp_i = root_i if gp == -1 else ip[gp]
                b = iorient(gp_i, ip[p], ip[u])
                self.bend[u] = b
                self.cn_left[u] = self.cn_left[p] + (1 if b == CCW else 0)
                self.cn_right[u] = self.cn_right[p] + (1 if b == CW else 0)
        for u in range(n):
            self.subtree_min[u] = u
            self.subtree_max[u] = u
        for u in reversed(order):
            p = self.parent[u]
            if isinstance(p, int) and p >= 0:
                self.subtree_min[p] = min(self.subtree_min[p], self.subtree_min[u])
                self.subtree_max[p] = max(self.subtree_max[p], self.subtree_max[u])

    def roots(self) -> list:
        return [j for j in self.preorder if self.parent[j] == -1]

    def path(self, v: int) -> list:
        """Point sequence from the root to vertex v."""
        seq = []
        u = v
        while u != -1 and u != -2:
            seq.append(self.geom.points[u])
            u = self.parent[u]
        seq.append(self.root)
        seq.reverse()
        return seq

    def subtree(self, v: int) -> list:
        out = []
        stack = [v]
        while stack:
            u = stack.pop()
            out.append(u)
            stack.extend(self.children[u])
        return out

    def edge_class(self, v: int) -> Optional[str]:
        """Class of the tree edge arriving at v (None for a vertex root)."""
        p = self.parent[v]
        if p == -2:
            return None
        if p == -1:
            return PRIMARY
        if self.parent[p] == -1:
            return SECONDARY1
        return SECONDARY2

    def turn(self, v: int) -> Optional[str]:
        b = self.bend[v]
        if b == CCW:
            return "left"
        if b == CW:
            return "right"
        return None

    def to_debug_json(self) -> str:
        """Tree structure as JSON: parents, classes, turns, critical numbers."""
        n = self.geom.n
        return json.dumps(
            {
                "root": [str(self.root.x), str(self.root.y)],
                "root_index": self.root_index,
                "parent": list(self.parent),
                "edge_class": [self.edge_class(v) for v in range(n)],
                "turn": [self.turn(v) for v in range(n)],
                "critical_number": list(self.cn_left),
                "debit_number": list(self.debit),
            }
        )


class CriticalInfo:
    """Per-vertex turn bookkeeping of one geodesic tree.

    A vertex is left-critical when the geodesic from the root turns
    counterclockwise on arrival there; critical numbers count those left
    turns along each root path, so a vertex is left-critical exactly when
    its critical number exceeds its parent's by one.  Debits are the lazy
    shift applied below a vertex by the region-walk maintenance; a scratch
    classification always carries zeros.
    """

    __slots__ = ("root", "other_end", "is_lc", "critical_number", "debit_number")

    def __init__(self, root, other_end, is_lc, critical_number, debit_number):
        self.root = root
        self.other_end = other_end
        self.is_lc = is_lc
        self.critical_number = critical_number
        self.debit_number = debit_number

    def __eq__(self, other):
        return (
            isinstance(other, CriticalInfo)
            and self.is_lc == other.is_lc
            and self.critical_number == other.critical_number
            and self.debit_number == other.debit_number
        )


def classify_turns_and_lc(tree: ShortestPathTree, other_end: Point2) -> CriticalInfo:
    """Left-critical flags and critical numbers of every vertex of the tree.

    The turns are intrinsic to the tree; `other_end` records the segment
    endpoint the classification will be played against, so consistency
    checks can tie an info object back to its query.
    """
    n = tree.geom.n
    is_lc = [tree.bend[v] == CCW for v in range(n)]
    return CriticalInfo(
        tree.root,
        other_end,
        is_lc,
        list(tree.cn_left),
        [0] * n,
    )


def visible_vertices(points: Sequence[Point2], r: Point2) -> list:
    """Indices of the vertices visible from r, in boundary order.

    r may be any point of the closed region, a vertex included.
    """
    geom = points if isinstance(points, CycleGeometry) else CycleGeometry(points)
    try:
        ri = geom.points.index(r)
    except ValueError:
        ri = None
    if ri is not None:
        return [j for j in range(geom.n) if geom.visible(ri, j)]
    return [j for j in range(geom.n) if geom.visible_from_point(r, j)]
