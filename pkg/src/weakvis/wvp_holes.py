"""Weak visibility of a segment in a polygon with holes.

The query segment's supporting line cuts every hole open: from each hole's
nearest vertex a chord parallel to the line is shot "leftward" (toward the
p side, direction p - q), and that chord becomes a zero-width slit wall.
With every hole slit open the free space is simply connected, so segment
visibility behaves as in a simple polygon.

Two computation paths share the cut structure.  The basic path peels
visibility outward: whatever portion of a slit wall the query sees becomes a
gate, and the region beyond it is collected by re-running the walled
computation with that slit opened and its line walled elsewhere.  The
improved path builds, per diagonal, an arrangement of critical constraint
segments whose cells have uniform through-the-diagonal visibility, labels
each cell with a single membership test, and merges the visible cells with
the directly visible region into one boundary.

Everything is exact: Fraction coordinates in, Fraction coordinates out.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set

from .arrangement import Subdivision, union_faces
from .errors import InternalInconsistency, InvalidQuery, UnsupportedDegeneracy
from .geometry import (
    CW,
    Point2,
    Segment,
    angular_compare,
    cross,
    lerp,
    line_segment_intersection,
    orient,
    segment_intersection,
    segments_cross_properly,
)
from .oracle import weakly_visible
from .polygon import (
    INSIDE,
    OUTSIDE,
    AnyPolygon,
    PolygonWithHoles,
    as_rings,
    line_param,
    point_in_rings,
    ray_shoot,
    validate_query_segment,
)
from .wvp_simple import wvp_of_segment

# generous fitted constants for the asserted counting bounds
CONSTRAINT_FIT = 64
BORDER_FIT = 64


def _lcross(p: Point2, q: Point2, x: Point2) -> Fraction:
    """Signed cross of q-p with x-p: the side (and scaled distance) of x
    relative to the query's supporting line."""
    return cross(q.x - p.x, q.y - p.y, x.x - p.x, x.y - p.y)


def _beyond(p: Point2, q: Point2, cval: Fraction, x: Point2) -> bool:
    """True when x lies strictly farther from the supporting line than the
    chord at signed offset cval, on the same side."""
    c = _lcross(p, q, x)
    return c > cval if cval > 0 else c < cval


def _total_n(P: PolygonWithHoles) -> int:
    return sum(len(r) for r in as_rings(P))


def _wrap(P: AnyPolygon) -> PolygonWithHoles:
    if isinstance(P, PolygonWithHoles):
        return P
    return PolygonWithHoles(P, (), validate=False)


def _border_segments(rings: Sequence[Sequence[Point2]]) -> List[Segment]:
    out = []
    for ring in rings:
        n = len(ring)
        for i in range(n):
            out.append(Segment(ring[i], ring[(i + 1) % n]))
    return out


def _merge_collinear(segments: Sequence[Segment]) -> List[Segment]:
    """Replace collinear overlapping segments by their interval union.

    Needed before feeding derived segment soups to Subdivision, which rejects
    positive collinear overlap between distinct inputs.
    """
    groups: Dict[tuple, List[Segment]] = {}
    for s in segments:
        if s.a == s.b:
            continue
        A = s.b.y - s.a.y
        B = s.a.x - s.b.x
        C = A * s.a.x + B * s.a.y
        key = (1, B / A, C / A) if A != 0 else (0, 1, C / B)
        groups.setdefault(key, []).append(s)
    out: List[Segment] = []
    for segs in groups.values():
        if len(segs) == 1:
            out.append(segs[0])
            continue
        ref = segs[0].a
        rdx, rdy = segs[0].b.x - ref.x, segs[0].b.y - ref.y

        def par(pt: Point2) -> Fraction:
            return (pt.x - ref.x) * rdx + (pt.y - ref.y) * rdy

        ivals = []
        for s in segs:
            ta, tb = par(s.a), par(s.b)
            if ta <= tb:
                ivals.append((ta, tb, s.a, s.b))
            else:
                ivals.append((tb, ta, s.b, s.a))
        ivals.sort(key=lambda r: (r[0], r[1]))
        cl, ch, pl, ph = ivals[0]
        for lo, hi, plo, phi in ivals[1:]:
            if lo <= ch:
                if hi > ch:
                    ch, ph = hi, phi
            else:
                out.append(Segment(pl, ph))
                cl, ch, pl, ph = lo, hi, plo, phi
        out.append(Segment(pl, ph))
    return out


# -- exact point-sees-segment test --------------------------------------------


def _blocked_param_intervals(x: Point2, p: Point2, q: Point2, edges) -> List[tuple]:
    """Merged t-intervals of pq whose open sightline to x is obstructed.

    Per edge the candidate breakpoints are where the moving endpoint crosses
    the edge's carrier line and where the sightline sweeps past an edge
    endpoint; between breakpoints the proper-crossing status is constant and
    one exact midpoint probe decides it.
    """
    dpx, dpy = q.x - p.x, q.y - p.y
    raw: List[tuple] = []
    for c, d in edges:
        if orient(c, d, x) == 0:
            continue  # collinear with x: grazes, never strictly blocks
        cands = {Fraction(0), Fraction(1)}
        f0 = cross(d.x - c.x, d.y - c.y, p.x - c.x, p.y - c.y)
        fd = cross(d.x - c.x, d.y - c.y, dpx, dpy)
        if fd != 0:
            t = -f0 / fd
            if 0 < t < 1:
                cands.add(t)
        for v in (c, d):
            g0 = cross(p.x - x.x, p.y - x.y, v.x - x.x, v.y - x.y)
            gd = cross(dpx, dpy, v.x - x.x, v.y - x.y)
            if gd != 0:
                t = -g0 / gd
                if 0 < t < 1:
                    cands.add(t)
        ts = sorted(cands)
        for i in range(len(ts) - 1):
            w = lerp(p, q, (ts[i] + ts[i + 1]) / 2)
            if w != x and segments_cross_properly(Segment(x, w), Segment(c, d)):
                raw.append((ts[i], ts[i + 1]))
    if not raw:
        return []
    raw.sort()
    merged = [list(raw[0])]
    for lo, hi in raw[1:]:
        if lo <= merged[-1][1]:
            if hi > merged[-1][1]:
                merged[-1][1] = hi
        else:
            merged.append([lo, hi])
    return [(lo, hi) for lo, hi in merged]


def _sees_segment(x: Point2, p: Point2, q: Point2, edges) -> bool:
    """True iff a positive-length part of pq sees x past all edges."""
    if orient(p, q, x) == 0:
        t = line_param(p, q, x)
        if 0 <= t <= 1:
            return True
    reach = Fraction(0)
    for lo, hi in _blocked_param_intervals(x, p, q, edges):
        if lo > reach:
            return True
        if hi > reach:
            reach = hi
    return reach < 1


# -- maximal free segments along a line ---------------------------------------


def _max_free_segment(a: Point2, b: Point2, blockers, rings) -> Optional[Segment]:
    """Maximal unobstructed closed segment along line(a, b) containing [a, b].

    A blocker strictly crossing the line stops extension there; an endpoint
    touch lets the line graze past if the next stretch stays strictly inside.
    Returns None when the open seed [a, b] is itself obstructed.
    """
    stops: Set[Fraction] = set()
    touches: Set[Fraction] = set()
    overlaps: List[tuple] = []
    for c, d in blockers:
        oc, od = orient(a, b, c), orient(a, b, d)
        if oc == 0 and od == 0:
            t0, t1 = line_param(a, b, c), line_param(a, b, d)
            overlaps.append((min(t0, t1), max(t0, t1)))
            touches.update((t0, t1))
        elif oc == 0:
            touches.add(line_param(a, b, c))
        elif od == 0:
            touches.add(line_param(a, b, d))
        elif oc != od:
            z = line_segment_intersection(a, b, Segment(c, d))
            stops.add(line_param(a, b, z))

    def gap_ok(lo: Fraction, hi: Fraction) -> bool:
        for o0, o1 in overlaps:
            if max(o0, lo) < min(o1, hi):
                return False
        mid = lerp(a, b, (lo + hi) / 2)
        return point_in_rings(rings, mid) == INSIDE

    if any(0 < t < 1 for t in stops):
        return None
    seed_events = sorted({Fraction(0), Fraction(1), *(t for t in touches if 0 < t < 1)})
    for i in range(len(seed_events) - 1):
        if not gap_ok(seed_events[i], seed_events[i + 1]):
            return None

    events = sorted(stops | touches)
    hi = Fraction(1)
    for t in (t for t in events if t > 1):
        if not gap_ok(hi, t):
            break
        hi = t
        if t in stops:
            break
    lo = Fraction(0)
    for t in (t for t in reversed(events) if t < 0):
        if not gap_ok(t, lo):
            break
        lo = t
        if t in stops:
            break
    return Segment(lerp(a, b, lo), lerp(a, b, hi))


def _line_chords(rings, a: Point2, b: Point2) -> List[Segment]:
    """Maximal pieces of the line through a, b lying inside the region."""
    params: Set[Fraction] = set()
    for ring in rings:
        n = len(ring)
        for i in range(n):
            z = line_segment_intersection(a, b, Segment(ring[i], ring[(i + 1) % n]))
            if z is None:
                continue
            if isinstance(z, Segment):
                raise UnsupportedDegeneracy("boundary edge lies on a cut line")
            params.add(line_param(a, b, z))
    ts = sorted(params)
    chords = []
    for i in range(len(ts) - 1):
        mid = lerp(a, b, (ts[i] + ts[i + 1]) / 2)
        if point_in_rings(rings, mid) == INSIDE:
            chords.append(Segment(lerp(a, b, ts[i]), lerp(a, b, ts[i + 1])))
    return chords


def _grazes(ring: Sequence[Point2], i: int, w: Point2) -> bool:
    """Both boundary edges at ring[i] stay on one closed side of line(v, w)."""
    v = ring[i]
    o1 = orient(v, w, ring[i - 1])
    o2 = orient(v, w, ring[(i + 1) % len(ring)])
    return o1 == 0 or o2 == 0 or o1 == o2


def _pin_vertices(rings) -> List[tuple]:
    """(ring, index, point) of every vertex a free line can graze: reflex
    corners of the outer ring and convex corners of hole rings."""
    out = []
    for ri, ring in enumerate(rings):
        n = len(ring)
        for i in range(n):
            if orient(ring[i - 1], ring[i], ring[(i + 1) % n]) == CW:
                out.append((ri, i, ring[i]))
    return out


# -- cut diagonals -------------------------------------------------------------


class CutDiagonal:
    """One hole's slit: the chord parallel to the query line through the
    hole's nearest vertex, shot leftward to its first boundary hit."""

    __slots__ = ("hole", "side", "cval", "m", "z", "r", "zedge")

    def __init__(self, hole: int, side: int, cval: Fraction, m: Point2, z: Point2,
                 r: Point2, zedge: tuple):
        self.hole = hole
        self.side = side
        self.cval = cval
        self.m = m
        self.z = z
        self.r = r
        self.zedge = zedge  # (ring, edge) carrying the leftward hit

    @property
    def gate(self) -> Segment:
        return Segment(self.z, self.m)

    @property
    def companion(self) -> Segment:
        return Segment(self.m, self.r)

    def __repr__(self):
        return f"CutDiagonal(hole={self.hole}, side={self.side}, m={self.m!r})"


class SubProblem:
    """One side of the polygon split along the query line (reporting only)."""

    __slots__ = ("side", "outer", "holes", "chord")

    def __init__(self, side: int, outer, holes, chord: Segment):
        self.side = side
        self.outer = tuple(outer)
        self.holes = tuple(tuple(h) for h in holes)
        self.chord = chord


class CutDiagonalSet:
    """All cut diagonals of a query plus the derived slit structure."""

    __slots__ = ("P", "p", "q", "diagonals", "by_side", "l_walls", "chord",
                 "straddlers", "sub_problems", "ps_walk", "ps_vertex_count")

    def __init__(self, P: PolygonWithHoles, p: Point2, q: Point2):
        self.P = P
        self.p = p
        self.q = q
        self.diagonals: List[CutDiagonal] = []
        self.by_side: Dict[int, List[int]] = {1: [], -1: []}
        self.l_walls: List[Segment] = []
        self.chord: Optional[Segment] = None
        self.straddlers: tuple = ()
        self.sub_problems: List[SubProblem] = []
        self.ps_walk = None
        self.ps_vertex_count: Optional[int] = None


def build_cuts(P: AnyPolygon, p: Point2, q: Point2) -> CutDiagonalSet:
    """Cut every hole open with a slit parallel to the query line.

    Holes are processed per side of the line, nearest first, so a slit shot
    from a farther hole may land on an already-cut nearer one.  When holes
    occupy both sides the two split sub-polygons are reported alongside.
    """
    Pw = _wrap(P)
    validate_query_segment(Pw, p, q)
    cuts = CutDiagonalSet(Pw, p, q)
    rings = as_rings(Pw)
    d = (q.x - p.x, q.y - p.y)

    sides: Dict[int, List[int]] = {1: [], -1: []}
    straddle: List[int] = []
    for hi, hole in enumerate(Pw.holes):
        signs = {1 if _lcross(p, q, v) > 0 else -1 for v in hole}
        if len(signs) == 2:
            straddle.append(hi)
        else:
            sides[signs.pop()].append(hi)
    cuts.straddlers = tuple(straddle)

    for side in (1, -1):
        entries = []
        for hi in sides[side]:
            hole = Pw.holes[hi]
            keyed = sorted((abs(_lcross(p, q, v)), vi) for vi, v in enumerate(hole))
            if keyed[0][0] == keyed[1][0]:
                raise UnsupportedDegeneracy("coincident nearest points on a hole")
            entries.append((keyed[0][0], hi, hole[keyed[0][1]]))
        entries.sort(key=lambda e: e[0])
        for k in range(1, len(entries)):
            if entries[k][0] == entries[k - 1][0]:
                raise UnsupportedDegeneracy("coincident nearest points across holes")
        for _, hi, m in entries:
            z, zri, zei = ray_shoot(Pw, m, (-d[0], -d[1]))
            r, _, _ = ray_shoot(Pw, m, d)
            if z is None or r is None:
                raise InternalInconsistency("cut ray escaped the polygon")
            dg = CutDiagonal(hi, side, _lcross(p, q, m), m, z, r, (zri, zei))
            cuts.by_side[side].append(len(cuts.diagonals))
            cuts.diagonals.append(dg)

    chords = _line_chords(rings, p, q)
    for c in chords:
        lo, hi = sorted((line_param(p, q, c.a), line_param(p, q, c.b)))
        if lo <= 0 and hi >= 1:
            cuts.chord = c
        else:
            cuts.l_walls.append(c)
    if cuts.chord is None:
        raise InternalInconsistency("query segment escaped its own chord")

    occupied_up = bool(sides[1] or straddle)
    occupied_dn = bool(sides[-1] or straddle)
    if occupied_up and occupied_dn:
        cuts.sub_problems = _split_report(rings, p, q, chords, cuts.chord)

    if not straddle:
        cuts.ps_walk = _slit_walk(rings, cuts.diagonals)
        cuts.ps_vertex_count = len(cuts.ps_walk) - len(cuts.diagonals)
    return cuts


def _split_report(rings, p: Point2, q: Point2, chords, chord: Segment) -> List[SubProblem]:
    """The two polygon-with-holes pieces flanking the query's chord."""
    segs = _border_segments(rings) + list(chords)
    sb = Subdivision(segs)
    mid = lerp(p, q, Fraction(1, 2))
    loc = sb.locate(mid)
    if loc[0] != "edge":
        raise InternalInconsistency("query midpoint is not on its own chord")
    out = []
    for fid in sb.edge_faces[loc[1]]:
        if fid < 0:
            continue
        f = sb.faces[fid]
        side = 1 if _lcross(p, q, f.rep) > 0 else -1
        out.append(SubProblem(side, _drop_straight(f.outer), [
            _drop_straight(h) for h in f.holes], chord))
    out.sort(key=lambda s: -s.side)
    return out


def _drop_straight(ring: Sequence[Point2]) -> List[Point2]:
    n = len(ring)
    return [
        ring[i]
        for i in range(n)
        if ring[(i - 1) % n] == ring[(i + 1) % n]
        or orient(ring[(i - 1) % n], ring[i], ring[(i + 1) % n]) != 0
    ]


def _slit_walk(rings, diagonals: Sequence[CutDiagonal]) -> List[tuple]:
    """Boundary walk of the slit polygon: the outer ring with every hole
    spliced in through its doubled slit edges.  Entries are (point, tag) with
    tags ('orig', ring, index) or ('cut', diagonal)."""
    attach: Dict[int, Dict[int, List[tuple]]] = {}
    for di, dg in enumerate(diagonals):
        ri, ei = dg.zedge
        ring = rings[ri]
        t = line_param(ring[ei], ring[(ei + 1) % len(ring)], dg.z)
        attach.setdefault(ri, {}).setdefault(ei, []).append((t, di))
    for per_ring in attach.values():
        for lst in per_ring.values():
            lst.sort()

    hole_start = {dg.hole + 1: rings[dg.hole + 1].index(dg.m) for dg in diagonals}
    walk: List[tuple] = []

    def emit(ri: int, start: int) -> None:
        ring = rings[ri]
        n = len(ring)
        for k in range(n):
            vi = (start + k) % n
            walk.append((ring[vi], ("orig", ri, vi)))
            for _, di in attach.get(ri, {}).get(vi, ()):
                dg = diagonals[di]
                walk.append((dg.z, ("cut", di)))
                emit(dg.hole + 1, hole_start[dg.hole + 1])
                walk.append((dg.m, ("cut", di)))
                walk.append((dg.z, ("cut", di)))

    emit(0, 0)
    return walk


# -- walled visibility engine --------------------------------------------------


class WalledRegion:
    """Subdivision of the polygon with slit walls, faces classified by
    whether a positive-length part of pq sees them."""

    __slots__ = ("sub", "visible", "inside", "wall_base", "walls", "blockers", "rings")

    def __init__(self, sub, visible, inside, wall_base, walls, blockers, rings):
        self.sub = sub
        self.visible = visible
        self.inside = inside
        self.wall_base = wall_base  # input index of walls[0] inside sub
        self.walls = walls
        self.blockers = blockers
        self.rings = rings

    def wall_edges(self, j: int) -> List[int]:
        """Sub-edge ids of the j-th wall."""
        idx = self.wall_base + j
        return [e for e in range(len(self.sub.edges)) if idx in self.sub.edge_carriers[e]]


def _walled_wvp(Pw: PolygonWithHoles, p: Point2, q: Point2, walls: Sequence[Segment],
                extra: Sequence[Segment] = ()) -> WalledRegion:
    """Exact weak visibility of pq in the polygon minus the given slit walls.

    The subdivision is refined by every critical carrier: a maximal free
    segment through two pins (grazeable vertices, wall tips, or a query
    endpoint) whose free part still meets pq.  Within a face the visibility
    status is then uniform, so one probe per face classifies it.
    """
    rings = as_rings(Pw)
    borders = _border_segments(rings)
    blockers = [(s.a, s.b) for s in borders] + [(s.a, s.b) for s in walls]

    items = list(_pin_vertices(rings))
    tips: Set[Point2] = set()
    for s in list(walls) + list(extra):
        tips.add(s.a)
        tips.add(s.b)
    items += [(None, None, t) for t in sorted(tips, key=lambda t: (t.x, t.y))]
    items += [(None, None, p), (None, None, q)]

    carriers: List[Segment] = []
    pq = Segment(p, q)
    for ii in range(len(items)):
        ra, ia, a = items[ii]
        for jj in range(ii + 1, len(items)):
            rb, ib, b = items[jj]
            if a == b:
                continue
            oa, ob = orient(a, b, p), orient(a, b, q)
            if oa == ob and oa != 0:
                continue  # carrier line misses the closed query segment
            if oa == 0 and ob == 0:
                continue  # the query line itself
            if ra is not None and not _grazes(rings[ra], ia, b):
                continue
            if rb is not None and not _grazes(rings[rb], ib, a):
                continue
            seg = _max_free_segment(a, b, blockers, rings)
            if seg is None:
                continue
            if segment_intersection(seg, pq) is None:
                continue
            carriers.append(seg)

    segs = list(borders) + list(walls) + list(extra) + _merge_collinear(carriers)
    sub = Subdivision(segs)
    inside: Set[int] = set()
    vis: Set[int] = set()
    for f in sub.faces:
        if point_in_rings(rings, f.rep) != INSIDE:
            continue
        inside.add(f.id)
        if _sees_segment(f.rep, p, q, blockers):
            vis.add(f.id)
    return WalledRegion(sub, vis, inside, len(borders), list(walls), blockers, rings)


def _face_components(sub: Subdivision, kept: Set[int]) -> List[Set[int]]:
    parent = {f: f for f in kept}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for fl, fr in sub.edge_faces:
        if fl in kept and fr in kept:
            ra, rb = find(fl), find(fr)
            if ra != rb:
                parent[ra] = rb
    comps: Dict[int, Set[int]] = {}
    for f in kept:
        comps.setdefault(find(f), set()).add(f)
    return list(comps.values())


def _region_pieces(wr: WalledRegion, kept: Set[int]) -> List[tuple]:
    """Connected kept faces as weakly simple rings, slits walked along both
    banks so each piece stays simply connected."""
    cut_ids = {
        e
        for e in range(len(wr.sub.edges))
        if any(ci >= wr.wall_base and ci < wr.wall_base + len(wr.walls)
               for ci in wr.sub.edge_carriers[e])
    }
    pieces = []
    for comp in _face_components(wr.sub, kept):
        groups = union_faces(wr.sub, comp, cut_edges=cut_ids, allow_weak=True)
        if len(groups) != 1 or groups[0][1]:
            raise InternalInconsistency("a visibility piece is not simply connected")
        pieces.append(tuple(groups[0][0]))
    return pieces


# -- the see-through recursion (basic algorithm) -------------------------------


class SeeThroughWindow:
    """A maximal visible run on a slit wall, discovered while the diagonals
    in `via` were open (None means directly visible)."""

    __slots__ = ("via", "target", "seg")

    def __init__(self, via: Optional[int], target: int, seg: Segment):
        self.via = via
        self.target = target
        self.seg = seg

    def __repr__(self):
        return f"SeeThroughWindow(via={self.via}, target={self.target})"


class WvpUnionResult:
    """Weak visibility of pq with holes, as union pieces or a classified
    arrangement plus extracted boundary."""

    __slots__ = ("kind", "pieces", "region", "area2", "k", "h", "hbar", "hprime",
                 "see_through", "constraint_total", "cell_counts", "arrangements",
                 "meta")

    def __init__(self, kind: str, h: int):
        self.kind = kind
        self.h = h
        self.pieces: Optional[List[tuple]] = None
        self.region = None
        self.area2: Optional[Fraction] = None
        self.k: Optional[int] = None
        self.hbar = 0
        self.hprime: Optional[int] = None
        self.see_through: List[SeeThroughWindow] = []
        self.constraint_total = 0
        self.cell_counts: Dict[int, int] = {}
        self.arrangements = None
        self.meta: Dict[str, object] = {}

    def groups(self) -> List[tuple]:
        if self.region is not None:
            return self.region
        return [(list(r), []) for r in self.pieces]

    def contains(self, x: Point2) -> str:
        on_boundary = False
        for outer, holes in self.groups():
            s = point_in_rings([outer, *holes], x)
            if s == INSIDE:
                return INSIDE
            if s != OUTSIDE:
                on_boundary = True
        return "boundary" if on_boundary else OUTSIDE


def _walled_task(cuts: CutDiagonalSet, chain: tuple,
                 gate_override: Optional[Segment] = None):
    """One step of the see-through recursion.

    `chain` lists the opened diagonals in ascending distance order; all other
    slits stay walled, opened slits get their companion (the rest of their
    chord) walled instead so sightlines are forced through the gates.  The
    last chain element is the active gate; faces are clipped strictly beyond
    its supporting line.
    """
    Pw, p, q = cuts.P, cuts.p, cuts.q
    rings = as_rings(Pw)
    dlist = cuts.diagonals
    chain_set = set(chain)
    target = chain[-1] if chain else None

    walls: List[Segment] = list(cuts.l_walls)
    slot_of: Dict[int, int] = {}
    for di, dg in enumerate(dlist):
        if di in chain_set:
            walls.append(dg.companion)
        else:
            slot_of[di] = len(walls)
            walls.append(dg.gate)

    extra: List[Segment] = []
    if target is not None:
        tg = dlist[target]
        gate = tg.gate if gate_override is None else gate_override
        if gate_override is not None:
            lo = line_param(tg.z, tg.m, gate.a)
            hi = line_param(tg.z, tg.m, gate.b)
            if lo > hi:
                lo, hi = hi, lo
                gate = Segment(gate.b, gate.a)
            for wseg in (Segment(tg.z, lerp(tg.z, tg.m, lo)),
                         Segment(lerp(tg.z, tg.m, hi), tg.m)):
                if wseg.a != wseg.b:
                    walls.append(wseg)
        extra.append(gate)
        # wall the other chords of the active carrier line: crossing them is
        # not crossing the gate
        for c in _line_chords(rings, tg.z, tg.m):
            p0, p1 = line_param(tg.z, tg.m, c.a), line_param(tg.z, tg.m, c.b)
            if min(p0, p1) <= 1 <= max(p0, p1):
                continue  # the chord carrying the slit: gate + companion cover it
            walls.append(c)

    wr = _walled_wvp(Pw, p, q, walls, extra=extra)
    if target is None:
        kept = set(wr.visible)
    else:
        tg = dlist[target]
        kept = {f for f in wr.visible if _beyond(p, q, tg.cval, wr.sub.faces[f].rep)}
    return wr, kept, slot_of


def _wall_runs(wr: WalledRegion, slot: int, dg: CutDiagonal, p: Point2, q: Point2,
               kept: Set[int]) -> List[Segment]:
    """Maximal runs of the slit's sub-edges whose near-side face sees pq."""
    sp = orient(dg.z, dg.m, p)
    items = []
    for e in wr.wall_edges(slot):
        u, v = wr.sub.edges[e]
        pu = line_param(dg.z, dg.m, wr.sub.nodes[u])
        pv = line_param(dg.z, dg.m, wr.sub.nodes[v])
        lo, hi = (pu, pv) if pu <= pv else (pv, pu)
        near = None
        for fid in wr.sub.edge_faces[e]:
            if fid >= 0 and orient(dg.z, dg.m, wr.sub.faces[fid].rep) == sp:
                near = fid
        items.append((lo, hi, near is not None and near in kept))
    items.sort()
    runs = []
    cur = None
    for lo, hi, vis in items:
        if not vis:
            if cur is not None:
                runs.append(cur)
                cur = None
            continue
        if cur is not None and cur[1] == lo:
            cur = (cur[0], hi)
        else:
            if cur is not None:
                runs.append(cur)
            cur = (lo, hi)
    if cur is not None:
        runs.append(cur)
    return [Segment(lerp(dg.z, dg.m, lo), lerp(dg.z, dg.m, hi)) for lo, hi in runs]


def wvp_holes_basic(P: AnyPolygon, p: Point2, q: Point2, *,
                    cuts: Optional[CutDiagonalSet] = None) -> WvpUnionResult:
    """Weak visibility polygon of pq as a union of simple pieces.

    Piece zero is the directly visible region with all slits walled; every
    further piece is the part visible strictly through one chain of gates,
    discovered by scanning slit walls for visible runs and re-running the
    walled computation with those slits opened.
    """
    if cuts is None:
        cuts = build_cuts(P, p, q)
    Pw = cuts.P
    h = Pw.h
    res = WvpUnionResult("basic", h)
    if h == 0:
        cyc = wvp_of_segment(Pw.outer, p, q, validate=False)
        res.pieces = [tuple(cyc.points)]
        res.hprime = 0
        return res

    dlist = cuts.diagonals
    pieces: List[tuple] = []
    windows: List[SeeThroughWindow] = []
    seen = {()}
    queue = deque([()])
    activations = 0
    while queue:
        chain = queue.popleft()
        if chain:
            activations += 1
            if activations > h * h:
                raise InternalInconsistency(
                    "see-through recursion exceeded its quadratic activation budget")
        wr, kept, slot_of = _walled_task(cuts, chain)
        task_pieces = _region_pieces(wr, kept)
        if not chain and len(task_pieces) != 1:
            raise InternalInconsistency("directly visible region is not connected")
        pieces.extend(task_pieces)

        target = chain[-1] if chain else None
        chain_set = set(chain)
        for di, dg in enumerate(dlist):
            if di in chain_set:
                continue
            if target is not None:
                tg = dlist[target]
                if dg.side != tg.side or abs(dg.cval) <= abs(tg.cval):
                    continue  # discovered (or rediscovered) by shorter chains
            for run in _wall_runs(wr, slot_of[di], dg, cuts.p, cuts.q, kept):
                windows.append(SeeThroughWindow(target, di, run))
                nxt = chain + (di,)
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)

    for w in windows:
        if w.via is not None:
            a, b = dlist[w.via], dlist[w.target]
            if a.side != b.side or abs(a.cval) >= abs(b.cval):
                raise InternalInconsistency("see-through dependency is not ascending")

    res.pieces = pieces
    res.hprime = len(pieces) - 1
    if res.hprime > h * h:
        raise InternalInconsistency("piece count exceeds the quadratic bound")
    res.see_through = windows
    res.hbar = len({w.target for w in windows})
    res.meta["hbar_cap"] = min(h, res.hbar)
    res.meta["activations"] = activations
    return res


def partial_wvp(P: AnyPolygon, p: Point2, q: Point2, e: Segment, *,
                cuts: Optional[CutDiagonalSet] = None) -> List[tuple]:
    """The part of the polygon weakly visible from pq strictly through e.

    e must be parallel to the query's supporting line and off it; every other
    piece of e's carrier line inside the polygon is walled, so a sightline
    counts only when it crosses e itself.  The result is clipped to the far
    side of e and returned as weakly simple rings.
    """
    if cuts is None:
        cuts = build_cuts(P, p, q)
    Pw = cuts.P
    rings = as_rings(Pw)
    ca, cb = _lcross(p, q, e.a), _lcross(p, q, e.b)
    if ca != cb or ca == 0:
        raise InvalidQuery("gate must be parallel to the query line and off it")

    walls: List[Segment] = list(cuts.l_walls)
    for dg in cuts.diagonals:
        if dg.cval != ca:
            walls.append(dg.gate)
    for c in _line_chords(rings, e.a, e.b):
        l0, l1 = sorted((line_param(e.a, e.b, c.a), line_param(e.a, e.b, c.b)))
        for w0, w1 in ((l0, min(l1, Fraction(0))), (max(l0, Fraction(1)), l1)):
            if w0 < w1:
                walls.append(Segment(lerp(e.a, e.b, w0), lerp(e.a, e.b, w1)))
    wr = _walled_wvp(Pw, p, q, walls, extra=[e])
    kept = {f for f in wr.visible if _beyond(p, q, ca, wr.sub.faces[f].rep)}
    return _region_pieces(wr, kept)


# -- boundary extraction and exact union ---------------------------------------


def _overlay_union(parts: List[tuple]):
    """Exact union of ring groups: overlay subdivision, keep faces inside any
    part, walk the merged boundary.  Returns (groups, k, doubled area)."""
    segs: List[Segment] = []
    ring_sets = []
    for outer, holes in parts:
        rs = [list(outer)] + [list(h) for h in holes]
        ring_sets.append(rs)
        for ring in rs:
            n = len(ring)
            for i in range(n):
                if ring[i] != ring[(i + 1) % n]:
                    segs.append(Segment(ring[i], ring[(i + 1) % n]))
    sub = Subdivision(_merge_collinear(segs))

    def inside_any(x: Point2) -> bool:
        return any(point_in_rings(rs, x) != OUTSIDE for rs in ring_sets)

    kept = {f.id for f in sub.faces if inside_any(f.rep)}
    groups = union_faces(sub, kept, allow_weak=True)
    area2 = sum((sub.faces[f].area2 for f in kept), Fraction(0))
    k = sum(len(outer) + sum(len(h) for h in holes) for outer, holes in groups)
    return groups, k, area2


def extract_boundary(result: WvpUnionResult) -> list:
    """Merge a result's pieces or visible cells into closed boundary cycles
    with containment nesting; fills region, k, and the exact doubled area."""
    if result.region is not None:
        return result.region
    parts = [(list(r), []) for r in result.pieces]
    groups, k, area2 = _overlay_union(parts)
    result.region = groups
    result.k = k
    result.area2 = area2
    return groups


# -- critical constraints and the improved pipeline ----------------------------


class HoleConstraint:
    """Maximal free segment through two mutually visible vertices, grazing
    the boundary at one of them at least."""

    __slots__ = ("va", "vb", "carrier", "anchors")

    def __init__(self, va: Point2, vb: Point2, carrier: Segment, anchors: tuple):
        self.va = va
        self.vb = vb
        self.carrier = carrier
        self.anchors = anchors

    def __repr__(self):
        return f"HoleConstraint({self.va!r}, {self.vb!r})"


class ConstraintIndex:
    """Every critical constraint of a polygon, fanned per endpoint vertex in
    angular order for binary-searched queries."""

    __slots__ = ("P", "vertices", "constraints", "fans")

    def __init__(self, P: PolygonWithHoles):
        self.P = P
        self.vertices: List[tuple] = []
        self.constraints: List[HoleConstraint] = []
        self.fans: List[list] = []


_ORIGIN = Point2(Fraction(0), Fraction(0))


def _dir_lt(d1: tuple, d2: tuple) -> int:
    return angular_compare(_ORIGIN, Point2(d1[0], d1[1]), Point2(d2[0], d2[1]))


def _fan_bisect(fan: list, d: tuple, right: bool) -> int:
    lo, hi = 0, len(fan)
    while lo < hi:
        mid = (lo + hi) // 2
        c = _dir_lt(fan[mid][0], d)
        if c < 0 or (right and c == 0):
            lo = mid + 1
        else:
            hi = mid
    return lo


def preprocess_constraints(P: AnyPolygon) -> ConstraintIndex:
    """Enumerate all critical constraints and group them per vertex.

    A pair of vertices yields a constraint when the open segment between them
    is free and the carrier line grazes the boundary at one of them; the
    carrier is extended maximally past both ends.
    """
    Pw = _wrap(P)
    rings = as_rings(Pw)
    blockers = [(s.a, s.b) for s in _border_segments(rings)]
    idx = ConstraintIndex(Pw)
    for ri, ring in enumerate(rings):
        for vi in range(len(ring)):
            idx.vertices.append((ri, vi, ring[vi]))
    nv = len(idx.vertices)
    for i in range(nv):
        ra, ia, a = idx.vertices[i]
        for j in range(i + 1, nv):
            rb, ib, b = idx.vertices[j]
            ga = _grazes(rings[ra], ia, b)
            gb = _grazes(rings[rb], ib, a)
            if not (ga or gb):
                continue
            seg = _max_free_segment(a, b, blockers, rings)
            if seg is None:
                continue
            anchors = tuple(x for x, g in ((a, ga), (b, gb)) if g)
            idx.constraints.append(HoleConstraint(a, b, seg, anchors))
    fans: List[list] = [[] for _ in range(nv)]
    at: Dict[Point2, int] = {v: k for k, (_, _, v) in enumerate(idx.vertices)}
    for ci, c in enumerate(idx.constraints):
        for v in (c.va, c.vb):
            k = at[v]
            for end in (c.carrier.a, c.carrier.b):
                if end != v:
                    fans[k].append(((end.x - v.x, end.y - v.y), ci))
    from functools import cmp_to_key

    for fan in fans:
        fan.sort(key=cmp_to_key(lambda e1, e2: _dir_lt(e1[0], e2[0])))
    idx.fans = fans
    return idx


def query_constraints(index: ConstraintIndex, p: Point2, q: Point2) -> Dict[tuple, list]:
    """Constraints cutting the closed query segment, grouped per vertex.

    Per vertex the fan is angular-binary-searched for the direction cone
    subtending pq, then candidates are kept by an exact intersection test.
    """
    pq = Segment(p, q)
    out: Dict[tuple, list] = {}
    for k, (ri, vi, v) in enumerate(index.vertices):
        fan = index.fans[k]
        if not fan:
            continue
        vp = (p.x - v.x, p.y - v.y)
        vq = (q.x - v.x, q.y - v.y)
        if cross(vp[0], vp[1], vq[0], vq[1]) < 0:
            vp, vq = vq, vp
        i0 = _fan_bisect(fan, vp, right=False)
        i1 = _fan_bisect(fan, vq, right=True)
        if _dir_lt(vp, vq) <= 0:
            cand = fan[i0:i1]
        else:
            cand = fan[i0:] + fan[:i1]
        hits = sorted({
            ci for _, ci in cand
            if segment_intersection(index.constraints[ci].carrier, pq) is not None
        })
        if hits:
            out[(ri, vi)] = hits
    return out


def sweep_visible_parts(P: AnyPolygon, v: Point2, p: Point2, q: Point2,
                        cuts: CutDiagonalSet) -> List[tuple]:
    """Closed visible intervals of pq from v, labeled by crossed diagonals.

    Returns (t0, t1, crossed) with crossed a tuple of diagonal indices in
    near-to-far order from v; () labels directly visible intervals.
    """
    rings = as_rings(_wrap(P))
    blockers = [(s.a, s.b) for s in _border_segments(rings)]
    blocked = _blocked_param_intervals(v, p, q, blockers)
    free: List[tuple] = []
    reach = Fraction(0)
    for lo, hi in blocked:
        if lo > reach:
            free.append((reach, lo))
        reach = max(reach, hi)
    if reach < 1:
        free.append((reach, Fraction(1)))

    dpx, dpy = q.x - p.x, q.y - p.y
    cutpts: Set[Fraction] = set()
    for dg in cuts.diagonals:
        for end in (dg.z, dg.m):
            g0 = cross(p.x - v.x, p.y - v.y, end.x - v.x, end.y - v.y)
            gd = cross(dpx, dpy, end.x - v.x, end.y - v.y)
            if gd != 0:
                t = -g0 / gd
                if 0 < t < 1:
                    cutpts.add(t)

    out: List[tuple] = []
    for lo, hi in free:
        ts = sorted({lo, hi, *(t for t in cutpts if lo < t < hi)})
        for i in range(len(ts) - 1):
            wmid = lerp(p, q, (ts[i] + ts[i + 1]) / 2)
            crossed = []
            for di, dg in enumerate(cuts.diagonals):
                x = segment_intersection(Segment(v, wmid), dg.gate)
                if x is None:
                    continue
                pt = x.a if isinstance(x, Segment) else x
                key = (pt.x - v.x) * (wmid.x - v.x) + (pt.y - v.y) * (wmid.y - v.y)
                crossed.append((key, di))
            crossed.sort()
            out.append((ts[i], ts[i + 1], tuple(di for _, di in crossed)))
    merged: List[tuple] = []
    for lo, hi, lab in out:
        if merged and merged[-1][1] == lo and merged[-1][2] == lab:
            merged[-1] = (merged[-1][0], hi, lab)
        else:
            merged.append((lo, hi, lab))
    return merged


class ConstraintArrangement:
    """Cells around one cut diagonal, labeled by visibility through it."""

    __slots__ = ("diagonal", "sub", "labels", "visible", "d_count", "s_count",
                 "cell_count")

    def __init__(self, diagonal: int, sub: Subdivision, labels: Dict[int, bool],
                 d_count: int, s_count: int):
        self.diagonal = diagonal
        self.sub = sub
        self.labels = labels
        self.visible = {f for f, lab in labels.items() if lab}
        self.d_count = d_count
        self.s_count = s_count
        self.cell_count = len(labels)


def build_arrangement(P: AnyPolygon, p: Point2, q: Point2, cuts: CutDiagonalSet, *,
                      index: Optional[ConstraintIndex] = None
                      ) -> List[ConstraintArrangement]:
    """Per-diagonal classified cell complexes.

    One subdivision per side carries the boundary, every diagonal's carrier
    chords, the cutting constraints, and free carriers pinned at slit ends or
    query endpoints.  Faces beyond each diagonal are labeled with a single
    membership test restricted through that diagonal; the rest are invisible
    by construction (nothing below the chord can see through it).
    """
    Pw = _wrap(P)
    rings = as_rings(Pw)
    if index is None:
        index = preprocess_constraints(Pw)
    per_vertex = query_constraints(index, p, q)
    cutting = sorted({ci for lst in per_vertex.values() for ci in lst})
    borders = _border_segments(rings)
    blockers = [(s.a, s.b) for s in borders]
    pins = _pin_vertices(rings)
    pq = Segment(p, q)

    arrs: List[ConstraintArrangement] = []
    for side in (1, -1):
        diags = cuts.by_side[side]
        if not diags:
            continue
        carriers: List[Segment] = []
        for ci in cutting:
            carriers.append(index.constraints[ci].carrier)
        # query-anchored carriers: shadow boundaries pivot at p or q too
        for ra, ia, pin in pins:
            for anchor in (p, q):
                if not _grazes(rings[ra], ia, anchor):
                    continue
                seg = _max_free_segment(pin, anchor, blockers, rings)
                if seg is not None:
                    carriers.append(seg)
        derived: List[Segment] = []
        for di in diags:
            dg = cuts.diagonals[di]
            for c in _line_chords(rings, dg.z, dg.m):
                p0, p1 = line_param(dg.z, dg.m, c.a), line_param(dg.z, dg.m, c.b)
                if min(p0, p1) <= 1 <= max(p0, p1):
                    derived.append(dg.gate)
                    derived.append(dg.companion)
                else:
                    derived.append(c)
            # carriers pinned at this slit's ends see past its lips
            for end in (dg.z, dg.m):
                for ra, ia, pin in pins + [(None, None, p), (None, None, q)]:
                    if pin == end:
                        continue
                    oa, ob = orient(end, pin, p), orient(end, pin, q)
                    if oa == ob and oa != 0:
                        continue
                    if ra is not None and not _grazes(rings[ra], ia, end):
                        continue
                    seg = _max_free_segment(end, pin, blockers, rings)
                    if seg is None:
                        continue
                    if segment_intersection(seg, pq) is None:
                        continue
                    carriers.append(seg)
        d_counts: Dict[int, int] = {}
        for di in diags:
            dg = cuts.diagonals[di]
            d_counts[di] = sum(
                1 for car in carriers
                if segment_intersection(car, dg.gate) is not None)
        sub = Subdivision(list(borders) + _merge_collinear(derived + carriers))
        s_count = sum(
            1 for e in range(len(sub.edges))
            if any(ci < len(borders) for ci in sub.edge_carriers[e])
        )
        if s_count > BORDER_FIT * (_total_n(Pw) + 2 * Pw.h):
            raise InternalInconsistency("boundary fragment count exceeds its linear fit")
        interior = [f for f in sub.faces if point_in_rings(rings, f.rep) == INSIDE]
        for di in diags:
            dg = cuts.diagonals[di]
            labels: Dict[int, bool] = {}
            for f in interior:
                if not _beyond(p, q, dg.cval, f.rep):
                    labels[f.id] = False
                    continue
                labels[f.id] = weakly_visible(rings, p, q, f.rep, through=dg.gate)
            arrs.append(ConstraintArrangement(di, sub, labels, d_counts[di], s_count))
    return arrs


def wvp_holes_improved(P: AnyPolygon, p: Point2, q: Point2, *,
                       cuts: Optional[CutDiagonalSet] = None,
                       index: Optional[ConstraintIndex] = None) -> WvpUnionResult:
    """Weak visibility polygon via classified constraint arrangements.

    The directly visible region is computed with all slits walled; per
    diagonal, the visible cells of its arrangement are merged in.  Reports
    ħ (diagonals with any visible cell), the boundary complexity k, and the
    per-vertex constraint totals.
    """
    if cuts is None:
        cuts = build_cuts(P, p, q)
    Pw = cuts.P
    res = WvpUnionResult("improved", Pw.h)
    if Pw.h == 0:
        cyc = wvp_of_segment(Pw.outer, p, q, validate=False)
        ring = list(cyc.points)
        groups, k, area2 = _overlay_union([(ring, [])])
        res.region, res.k, res.area2 = groups, k, area2
        res.meta["direct"] = tuple(ring)
        return res

    if index is None:
        index = preprocess_constraints(Pw)
    per_vertex = query_constraints(index, p, q)
    res.constraint_total = sum(len(v) for v in per_vertex.values())
    res.meta["per_vertex"] = per_vertex

    wr, kept, _ = _walled_task(cuts, ())
    direct = _region_pieces(wr, kept)
    if len(direct) != 1:
        raise InternalInconsistency("directly visible region is not connected")
    res.meta["direct"] = direct[0]

    arrs = build_arrangement(Pw, p, q, cuts, index=index)
    res.arrangements = arrs
    parts = [(list(direct[0]), [])]
    for arr in arrs:
        res.cell_counts[arr.diagonal] = arr.cell_count
        if not arr.visible:
            continue
        for g in union_faces(arr.sub, arr.visible, allow_weak=True):
            parts.append(g)
    res.hbar = sum(1 for arr in arrs if arr.visible)
    res.meta["hbar_cap"] = min(Pw.h, res.hbar)
    if res.constraint_total > CONSTRAINT_FIT * _total_n(Pw) * max(res.hbar, 1):
        raise InternalInconsistency("constraint total exceeds its fitted bound")

    groups, k, area2 = _overlay_union(parts)
    res.region, res.k, res.area2 = groups, k, area2
    return res
