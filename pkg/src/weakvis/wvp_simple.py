"""Weak visibility polygons of interior segments in simple polygons.

The polygon is split along the line through the query segment pq.  In each
piece the chord is a boundary edge containing pq, and the hidden part is
found by comparing the geodesic trees rooted at p and at q: a vertex sees
some point of pq exactly when its two geodesics arrive along different
final edges, so the hidden vertices are those whose paths from p and from
q merge before reaching them.

Hidden vertices cluster into boundary pockets, each hanging off a visible
gate vertex where both geodesics bend the same way around the blocking
corner.  A pocket is cut off along a window: whichever incoming geodesic
edge at the gate is rotated further toward the pocket, extended until it
lands on the boundary.  Gluing the two piece results back along the chord
yields the weak visibility polygon of pq.
"""

from __future__ import annotations

from typing import Optional

from .errors import InternalInconsistency, UnsupportedDegeneracy
from .geometry import (
    CCW,
    COLLINEAR,
    CW,
    Point2,
    Segment,
    orient,
    ray_segment_hit,
    segment_intersection,
)
from .polygon import (
    CUT,
    ORIG,
    SimplePolygon,
    TaggedCycle,
    split_along_line,
    validate_query_segment,
)
from .spt import CycleGeometry, ShortestPathTree


def _edge_source(tag_a, tag_b, n_src: Optional[int]) -> Optional[int]:
    """Source polygon edge that the cycle edge (a -> b) lies on, if any."""
    if n_src is None or tag_a is None or tag_b is None:
        return None
    ka, ia = tag_a
    kb, ib = tag_b
    if ia is None:
        return None
    nxt = (ia + 1) % n_src
    if ka == ORIG:
        if (kb == ORIG and ib == nxt) or (kb == CUT and ib == ia):
            return ia
    elif ka == CUT:
        if (kb == ORIG and ib == nxt) or (kb == CUT and ib == ia):
            return ia
    return None


def cut_hidden_pockets(
    cycle: TaggedCycle,
    geom: CycleGeometry,
    tp: ShortestPathTree,
    tq: ShortestPathTree,
    n_src: Optional[int] = None,
) -> TaggedCycle:
    """Cut off every boundary pocket hidden from the chord segment.

    tp and tq are the geodesic trees of the two segment endpoints on the
    same cycle.  A vertex is hidden exactly when both trees give it the
    same vertex parent.  The cycle must start at one chord cut and end at
    the other, with the chord as the implicit closing edge.
    """
    n = geom.n
    par_p, par_q = tp.parent, tq.parent
    doomed = {
        v for v in range(n) if par_p[v] is not None and par_p[v] >= 0 and par_p[v] == par_q[v]
    }
    if not doomed:
        return cycle
    if 0 in doomed or (n - 1) in doomed:
        raise InternalInconsistency("chord cut vertex fell inside a pocket")
    pts, tags = cycle.points, cycle.tags
    skip: set = set()
    insert_after: dict = {}
    insert_before: dict = {}
    for u in range(n):
        if u in doomed:
            continue
        pockets = {CW: [], CCW: []}
        for c in tp.children[u]:
            if c not in doomed:
                continue
            bp, bq = tp.bend[c], tq.bend[c]
            if bp == COLLINEAR or bq == COLLINEAR:
                raise InternalInconsistency("hidden vertex reached without a bend")
            if bp != bq:
                # The geodesics approach the gate from opposite sides, so
                # the only candidate sight line grazes the gate corner.
                raise UnsupportedDegeneracy(
                    "weak visibility pinches to a grazing ray at a reflex vertex"
                )
            sub = tp.subtree(c)
            if any(w not in doomed for w in sub):
                raise InternalInconsistency("hidden pocket contains a visible vertex")
            pockets[bp].extend(sub)
        for side, pocket in pockets.items():
            if not pocket:
                continue
            pk = set(pocket)
            if side == CW:
                j = max(pk)
                arc = set(range(u + 1, j + 1))
                ea, eb = j, j + 1
            else:
                j = min(pk)
                arc = set(range(j, u))
                ea, eb = j - 1, j
            if pk != arc:
                raise InternalInconsistency("pocket is not a contiguous boundary arc")
            u_pt = geom.points[u]
            tpp = tp.root if par_p[u] == -1 else geom.points[par_p[u]]
            tqp = tq.root if par_q[u] == -1 else geom.points[par_q[u]]
            d_p = (u_pt.x - tpp.x, u_pt.y - tpp.y)
            d_q = (u_pt.x - tqp.x, u_pt.y - tqp.y)
            cr = d_p[0] * d_q[1] - d_p[1] * d_q[0]
            if side == CW:
                d = d_q if cr < 0 else d_p
            else:
                d = d_q if cr > 0 else d_p
            z = ray_segment_hit(u_pt, d, Segment(pts[ea], pts[eb]))
            if z is None:
                raise InternalInconsistency("pocket window misses its landing edge")
            if z == pts[ea] or z == pts[eb]:
                raise UnsupportedDegeneracy("visibility window lands on a vertex")
            ztag = (CUT, _edge_source(tags[ea], tags[eb], n_src))
            if skip & arc:
                raise InternalInconsistency("overlapping pockets")
            skip |= arc
            if side == CW:
                insert_after[u] = (z, ztag)
            else:
                insert_before[u] = (z, ztag)
    if skip != doomed:
        raise InternalInconsistency("pockets do not cover all hidden vertices")
    out_p: list = []
    out_t: list = []
    for i in range(n):
        if i in skip:
            continue
        got = insert_before.get(i)
        if got is not None:
            out_p.append(got[0])
            out_t.append(got[1])
        out_p.append(pts[i])
        out_t.append(tags[i])
        got = insert_after.get(i)
        if got is not None:
            out_p.append(got[0])
            out_t.append(got[1])
    return TaggedCycle(out_p, out_t)


def piece_visible_part(
    cycle: TaggedCycle,
    p: Point2,
    q: Point2,
    base_cache: Optional[dict] = None,
    n_src: Optional[int] = None,
) -> TaggedCycle:
    """Part of a chord piece weakly visible from the segment pq."""
    geom = CycleGeometry.of_cycle(cycle, base_cache)
    tp = ShortestPathTree(geom, p)
    tq = ShortestPathTree(geom, q)
    return cut_hidden_pockets(cycle, geom, tp, tq, n_src)


def glue_pieces(wl: TaggedCycle, wr: TaggedCycle) -> TaggedCycle:
    """Join the two piece results back along the query chord.

    Each piece result starts at one chord cut and ends at the other; the
    shared cut points are kept once and dropped entirely when the joined
    boundary passes straight through them.
    """
    if wl.points[0] != wr.points[-1] or wl.points[-1] != wr.points[0]:
        raise InternalInconsistency("piece results do not share the chord cuts")
    pts = wl.points + wr.points[1:-1]
    tags = wl.tags + wr.tags[1:-1]
    m = len(pts)
    seam = (0, len(wl.points) - 1)
    out_p: list = []
    out_t: list = []
    for i in range(m):
        if i in seam and orient(pts[i - 1], pts[i], pts[(i + 1) % m]) == COLLINEAR:
            continue
        out_p.append(pts[i])
        out_t.append(tags[i])
    return TaggedCycle(out_p, out_t)


def _assert_simple_ring(cycle: TaggedCycle) -> None:
    """Check that no two non-adjacent boundary edges touch."""
    pts = cycle.points
    m = len(pts)
    edges = [Segment(pts[i], pts[(i + 1) % m]) for i in range(m)]
    for i in range(m):
        for j in range(i + 2, m):
            if i == 0 and j == m - 1:
                continue
            if segment_intersection(edges[i], edges[j]) is not None:
                raise InternalInconsistency("visibility boundary crosses itself")


def wvp_of_segment(
    P: SimplePolygon, p: Point2, q: Point2, *, validate: bool = True
) -> TaggedCycle:
    """Weak visibility polygon of the segment pq inside P.

    The result boundary is a CCW cycle; every vertex carries a tag: original
    vertices keep their index, window and chord landings on a source edge
    carry that edge index, and window landings on an earlier cut carry None.
    """
    if validate:
        validate_query_segment(P, p, q)
    res = split_along_line(P, p, q)
    cache: dict = {}
    n_src = len(P.vertices)
    wl = piece_visible_part(res.left, p, q, cache, n_src)
    wr = piece_visible_part(res.right, p, q, cache, n_src)
    out = glue_pieces(wl, wr)
    if out.area2() <= 0:
        raise InternalInconsistency("visibility polygon is not a CCW cycle")
    if validate:
        _assert_simple_ring(out)
    return out


def canonical_ring(points, tags=None):
    """Canonical form of a closed vertex cycle for exact comparisons.

    Straight-through vertices and consecutive duplicates are removed (antenna
    tips, where the neighbors coincide, are kept), then the cycle is rotated
    to start at its lexicographically smallest vertex.  Returns the point
    list, or (points, tags) when tags are given.
    """
    pts = list(points)
    tgs = list(tags) if tags is not None else None
    changed = True
    while changed and len(pts) > 2:
        changed = False
        m = len(pts)
        for i in range(m):
            a, v, b = pts[i - 1], pts[i], pts[(i + 1) % m]
            if v == b or (a != b and orient(a, v, b) == COLLINEAR):
                del pts[i]
                if tgs is not None:
                    del tgs[i]
                changed = True
                break
    if pts:

        def key(pt):
            return (pt.x, pt.y)

        lowest = min(pts, key=key)
        cand = [i for i in range(len(pts)) if pts[i] == lowest]
        best = cand[0]
        if len(cand) > 1:
            m = len(pts)
            best = min(cand, key=lambda i: [key(pts[(i + k) % m]) for k in range(m)])
        pts = pts[best:] + pts[:best]
        if tgs is not None:
            tgs = tgs[best:] + tgs[:best]
    if tags is not None:
        return pts, tgs
    return pts
