"""Output-sensitive weak visibility queries over a preprocessed polygon.

A query viewpoint is resolved by locating its cell, following the stored
loss pointers down to a sink, and replaying that path backward.  Each arc
replayed toggles exactly one vertex of the sink's shortest path tree from
child-of-its-blocker to child-of-the-root; everything else, including the
turn directions at the toggled vertex's own children, is unchanged because
the viewpoint and the old parent are collinear at the crossing.  Critical
numbers ride along lazily: a per-vertex debit shifts a whole subtree in one
write, and true values are restored by prefix sums during traversal.

The visibility polygon of a segment pq is then assembled from the two
walked trees alone: a vertex is hidden from pq exactly when both trees give
it the same vertex parent, hidden subtrees hang off their gate as boundary
pockets, and a pruned depth-first sweep in boundary order emits the visible
vertices and cuts each pocket with a window ray without ever entering it.
"""

from __future__ import annotations

from bisect import insort
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .errors import InternalInconsistency, UnsupportedDegeneracy
from .geometry import CCW, COLLINEAR, CW, Point2, Segment, ray_segment_hit
from .polygon import CUT, SimplePolygon, TaggedCycle, split_along_line, validate_query_segment
from .spt import CriticalInfo, CycleGeometry, ShortestPathTree, classify_turns_and_lc
from .vis_decomp import SinkData, VisibilityDecomposition, build_decomposition, precompute_sinks
from .wvp_simple import _edge_source, glue_pieces, _assert_simple_ring


class LiveTree:
    """Copy-on-write overlay of one sink tree, re-rooted at a viewpoint.

    Only vertices gained on the walk differ from the base arrays; reads fall
    through.  `touched` counts vertex-data accesses made on behalf of the
    current query.
    """

    __slots__ = (
        "base",
        "root",
        "walk_len",
        "touched",
        "gained",
        "_parent",
        "_stored",
        "_debit",
        "_children",
        "_roots",
    )

    def __init__(self, sink: SinkData, root: Point2):
        self.base = sink
        self.root = root
        self.walk_len = 0
        self.touched = 0
        self.gained: set = set()
        self._parent: Dict[int, int] = {}
        self._stored: Dict[int, int] = {}
        self._debit: Dict[int, int] = {}
        self._children: Dict[int, list] = {}
        self._roots: Optional[list] = None

    def parent(self, v: int) -> int:
        got = self._parent.get(v)
        return self.base.tree.parent[v] if got is None else got

    def bend(self, v: int) -> int:
        return 0 if v in self.gained else self.base.tree.bend[v]

    def children(self, v: int) -> list:
        got = self._children.get(v)
        return self.base.tree.children[v] if got is None else got

    def roots(self) -> list:
        return self.base.visible if self._roots is None else self._roots

    def stored(self, v: int) -> int:
        got = self._stored.get(v)
        return self.base.info.critical_number[v] if got is None else got

    def debit(self, v: int) -> int:
        return self._debit.get(v, 0)

    def gain(self, v: int, anchor: int) -> None:
        """Crossing into the region where v turns visible around `anchor`."""
        if self.parent(v) != anchor:
            raise InternalInconsistency(
                f"walk gained vertex {v} but its stored parent is not {anchor}"
            )
        if self.parent(anchor) != -1:
            raise InternalInconsistency("gain anchor is not visible itself")
        self.touched += 1
        self.walk_len += 1
        self._debit[v] = self.debit(v) - self.stored(v)
        self._stored[v] = 0
        self._parent[v] = -1
        kids = list(self.children(anchor))
        kids.remove(v)
        self._children[anchor] = kids
        if self._roots is None:
            self._roots = list(self.base.visible)
        insort(self._roots, v)
        self.gained.add(v)

    def parent_point(self, v: int) -> Point2:
        p = self.parent(v)
        return self.root if p == -1 else self.base.tree.geom.points[p]

    def propagate(self) -> List[int]:
        """Critical numbers of every vertex after settling all debits."""
        n = self.base.tree.geom.n
        cn = [0] * n
        stack = [(v, 0) for v in reversed(self.roots())]
        seen = 0
        while stack:
            v, acc = stack.pop()
            cn[v] = self.stored(v) + acc
            seen += 1
            acc += self.debit(v)
            for c in reversed(self.children(v)):
                stack.append((c, acc))
        if seen != n:
            raise InternalInconsistency("walked tree does not span all vertices")
        return cn

    def info(self) -> CriticalInfo:
        n = self.base.tree.geom.n
        return CriticalInfo(
            self.root,
            None,
            [self.bend(v) == CCW for v in range(n)],
            self.propagate(),
            [0] * n,
        )


class QueryStats:
    __slots__ = ("walk_p", "walk_q", "touched", "output_len")

    def __init__(self, walk_p=0, walk_q=0, touched=0, output_len=0):
        self.walk_p = walk_p
        self.walk_q = walk_q
        self.touched = touched
        self.output_len = output_len

    def __repr__(self):
        return (
            f"QueryStats(walk_p={self.walk_p}, walk_q={self.walk_q}, "
            f"touched={self.touched}, output_len={self.output_len})"
        )


class QueryStructure:
    """Preprocessed polygon: decomposition, sink trees, parent tables."""

    __slots__ = ("P", "decomp", "sinks", "possible_parents", "last_stats")

    def __init__(self, P: SimplePolygon, decomp: Optional[VisibilityDecomposition] = None):
        self.P = P
        self.decomp = decomp if decomp is not None else build_decomposition(P)
        self.sinks = precompute_sinks(self.decomp)
        # every parent a vertex can ever take across all viewpoints: the
        # anchors of the constraints that toggle it
        tables: List[set] = [set() for _ in range(P.n)]
        for c in self.decomp.constraints:
            tables[c.v].add(c.u)
        self.possible_parents = [tuple(sorted(t)) for t in tables]
        self.last_stats: Optional[QueryStats] = None

    def walk_to_viewpoint(self, r: Point2) -> Tuple[LiveTree, CriticalInfo]:
        live = self._walk(r)
        return live, live.info()

    def _walk(self, r: Point2) -> LiveTree:
        region = self.decomp.locate_region(r)
        sink, path = self.decomp.loss_arcs(region)
        live = LiveTree(self.sinks[sink], r)
        for aid in reversed(path):
            arc = self.decomp.arcs[aid]
            if arc.constraint.u not in self.possible_parents[arc.gain]:
                raise InternalInconsistency("arc anchor missing from parent table")
            live.gain(arc.gain, arc.constraint.u)
        return live

    def query_wvp(self, p: Point2, q: Point2, *, validate: bool = True) -> TaggedCycle:
        if validate:
            validate_query_segment(self.P, p, q)
        res = split_along_line(self.P, p, q)
        tp = self._walk(p)
        tq = self._walk(q)
        wl = _piece_sweep(self, res.left, tp, tq)
        wr = _piece_sweep(self, res.right, tp, tq)
        out = glue_pieces(wl, wr)
        if out.area2() <= 0:
            raise InternalInconsistency("visibility polygon is not a CCW cycle")
        if validate:
            _assert_simple_ring(out)
        self.last_stats = QueryStats(
            walk_p=tp.walk_len,
            walk_q=tq.walk_len,
            touched=tp.touched + tq.touched,
            output_len=len(out.points),
        )
        return out


def _piece_sweep(S: QueryStructure, cycle: TaggedCycle, tp: LiveTree, tq: LiveTree) -> TaggedCycle:
    """Visible part of one chord piece, driven by the two walked trees.

    The piece cycle runs cut, original chain, cut, with the chord as the
    implicit closing edge.  Hidden subtrees are pruned at their gates: the
    window ray from the gate is shot against the piece boundary and the
    landing edge index alone tells how far the pocket reaches.
    """
    n = S.P.n
    pts, tags = cycle.points, cycle.tags
    n_c = len(pts)
    start_edge = tags[0][1]
    m_orig = n_c - 2

    def pos_of(j: int) -> Optional[int]:
        d = (j - start_edge - 1) % n
        return 1 + d if d < m_orig else None

    out_p: list = [pts[0]]
    out_t: list = [tags[0]]

    def window(gate: int, side: int) -> Tuple[Point2, tuple, int]:
        gp = S.P.vertices[gate]
        tpp = tp.parent_point(gate)
        tqp = tq.parent_point(gate)
        d_p = (gp.x - tpp.x, gp.y - tpp.y)
        d_q = (gp.x - tqp.x, gp.y - tqp.y)
        cr = d_p[0] * d_q[1] - d_p[1] * d_q[0]
        if side == CW:
            d = d_q if cr < 0 else d_p
        else:
            d = d_q if cr > 0 else d_p
        best: Optional[Tuple[Fraction, Point2, int]] = None
        for i in range(n_c):
            hit = ray_segment_hit(gp, d, Segment(pts[i], pts[(i + 1) % n_c]))
            if hit is None:
                continue
            t = (hit.x - gp.x) / d[0] if d[0] != 0 else (hit.y - gp.y) / d[1]
            if best is None or t < best[0]:
                best = (t, hit, i)
        if best is None:
            raise InternalInconsistency("pocket window misses the boundary")
        _, z, ei = best
        if ei == n_c - 1:
            raise InternalInconsistency("pocket window lands on the chord")
        if z == pts[ei] or z == pts[ei + 1]:
            raise UnsupportedDegeneracy("visibility window lands on a vertex")
        return z, (CUT, _edge_source(tags[ei], tags[ei + 1], n)), ei

    def visit(v: int, vpos: int) -> None:
        tp.touched += 1
        early: list = []
        late: list = []
        doomed_sides = {CW: False, CCW: False}
        for c in tp.children(v):
            tq.touched += 1
            cpos = pos_of(c)
            if cpos is None:
                raise InternalInconsistency("walked tree left its chord piece")
            if tq.parent(c) == v:
                bp, bq = tp.bend(c), tq.bend(c)
                if bp == COLLINEAR or bq == COLLINEAR:
                    raise InternalInconsistency("hidden vertex reached without a bend")
                if bp != bq:
                    raise UnsupportedDegeneracy(
                        "weak visibility pinches to a grazing ray at a reflex vertex"
                    )
                if (cpos > vpos) != (bp == CW):
                    raise InternalInconsistency("pocket on the wrong side of its gate")
                doomed_sides[bp] = True
            elif cpos < vpos:
                early.append((cpos, c))
            else:
                late.append((cpos, c))
        for cpos, c in sorted(early):
            visit(c, cpos)
        if doomed_sides[CCW]:
            z, ztag, ei = window(v, CCW)
            if ei >= vpos - 1:
                raise InternalInconsistency("backward window landed inside the pocket mouth")
            out_p.append(z)
            out_t.append(ztag)
        out_p.append(pts[vpos])
        out_t.append(tags[vpos])
        if doomed_sides[CW]:
            z, ztag, ei = window(v, CW)
            if ei <= vpos:
                raise InternalInconsistency("forward window landed inside the pocket mouth")
            out_p.append(z)
            out_t.append(ztag)
        for cpos, c in sorted(late):
            visit(c, cpos)

    tops = []
    for v in tp.roots():
        vpos = pos_of(v)
        if vpos is not None:
            tops.append((vpos, v))
    for vpos, v in sorted(tops):
        visit(v, vpos)
    out_p.append(pts[n_c - 1])
    out_t.append(tags[n_c - 1])
    return TaggedCycle(out_p, out_t)


def build_query_structure(P: SimplePolygon) -> QueryStructure:
    return QueryStructure(P)


def walk_to_viewpoint(S: QueryStructure, r: Point2) -> Tuple[LiveTree, CriticalInfo]:
    return S.walk_to_viewpoint(r)


def query_wvp(S: QueryStructure, p: Point2, q: Point2, *, validate: bool = True) -> TaggedCycle:
    return S.query_wvp(p, q, validate=validate)
