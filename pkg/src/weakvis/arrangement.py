"""Exact planar subdivisions of rational line segments.

Input segments are split at every mutual intersection point; the sub-edges
form a planar graph whose faces are recovered by half-edge orbit walking
under an exact angular order.  Orbits with positive signed area bound faces;
negative and zero-area orbits are nested into their enclosing face as inner
boundaries, so free-floating segment clusters and dangling edges are legal
input.  Collinear overlap between two distinct input segments is rejected
(exact duplicates are merged instead), which keeps every sub-edge on exactly
one carrier line and every edge crossing a genuine transversal event.

Everything runs on Fraction coordinates; there is no rounding anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cmp_to_key
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .errors import InternalInconsistency, UnsupportedDegeneracy
from .geometry import CCW, CW, Point2, Segment, orient, segment_intersection

OUTSIDE = -1  # face id of the unbounded face


def _dir_cmp(a: Tuple[Fraction, Fraction], b: Tuple[Fraction, Fraction]) -> int:
    """Counterclockwise order of direction vectors starting just above +x."""
    ha = 0 if (a[1] > 0 or (a[1] == 0 and a[0] > 0)) else 1
    hb = 0 if (b[1] > 0 or (b[1] == 0 and b[0] > 0)) else 1
    if ha != hb:
        return -1 if ha < hb else 1
    cr = a[0] * b[1] - a[1] * b[0]
    if cr > 0:
        return -1
    if cr < 0:
        return 1
    return 0


def _point_on_edge(pt: Point2, a: Point2, b: Point2) -> bool:
    if orient(a, b, pt) != 0:
        return False
    lox, hix = (a.x, b.x) if a.x <= b.x else (b.x, a.x)
    loy, hiy = (a.y, b.y) if a.y <= b.y else (b.y, a.y)
    return lox <= pt.x <= hix and loy <= pt.y <= hiy


def point_in_ring(pt: Point2, ring: Sequence[Point2]) -> str:
    """'in', 'out', or 'on' for a closed (not necessarily convex) cycle."""
    n = len(ring)
    crossings = 0
    for i in range(n):
        a, b = ring[i], ring[(i + 1) % n]
        if _point_on_edge(pt, a, b):
            return "on"
        if (a.y > pt.y) != (b.y > pt.y):
            # x coordinate of the edge at height pt.y, compared exactly
            t = (pt.y - a.y) / (b.y - a.y)
            x = a.x + (b.x - a.x) * t
            if x > pt.x:
                crossings += 1
    return "in" if crossings % 2 == 1 else "out"


class Face:
    """One bounded face: outer cycle, inner boundaries, interior witness."""

    __slots__ = ("id", "outer", "holes", "area2", "rep", "edge_ids")

    def __init__(self, fid: int, outer: List[Point2]):
        self.id = fid
        self.outer = outer
        self.holes: List[List[Point2]] = []
        self.area2: Fraction = Fraction(0)
        self.rep: Optional[Point2] = None
        self.edge_ids: Set[int] = set()

    def contains(self, pt: Point2) -> str:
        side = point_in_ring(pt, self.outer)
        if side != "in":
            return side
        for h in self.holes:
            s = point_in_ring(pt, h)
            if s == "on":
                return "on"
            if s == "in":
                return "out"
        return "in"


def _ring_area2(ring: Sequence[Point2]) -> Fraction:
    s = Fraction(0)
    for i in range(len(ring)):
        a, b = ring[i], ring[(i + 1) % len(ring)]
        s += a.x * b.y - a.y * b.x
    return s


class Subdivision:
    """Planar subdivision induced by a set of segments.

    `segments` may repeat geometry exactly (merged, carriers unioned).  Each
    resulting sub-edge knows its carrier input indices and its two incident
    faces (OUTSIDE for the unbounded side).
    """

    def __init__(self, segments: Sequence[Segment]):
        self.input: List[Segment] = []
        seen: Dict[Tuple, int] = {}
        self.carrier_groups: List[Set[int]] = []
        for idx, seg in enumerate(segments):
            a, b = seg.a, seg.b
            if a == b:
                raise UnsupportedDegeneracy("zero-length segment in arrangement")
            key = ((a.x, a.y), (b.x, b.y))
            rkey = (key[1], key[0])
            if key in seen or rkey in seen:
                self.carrier_groups[seen.get(key, seen.get(rkey))].add(idx)
                continue
            seen[key] = len(self.input)
            self.carrier_groups.append({idx})
            self.input.append(seg)
        self._build()

    # -- construction ---------------------------------------------------

    def _build(self) -> None:
        m = len(self.input)
        cuts: List[Set[Point2]] = [set((s.a, s.b)) for s in self.input]
        for i in range(m):
            si = self.input[i]
            for j in range(i + 1, m):
                got = segment_intersection(si, self.input[j])
                if got is None:
                    continue
                if isinstance(got, Segment):
                    raise UnsupportedDegeneracy(
                        "collinear overlapping segments in arrangement"
                    )
                cuts[i].add(got)
                cuts[j].add(got)

        self.nodes: List[Point2] = []
        self.node_of: Dict[Tuple, int] = {}

        def node(pt: Point2) -> int:
            k = (pt.x, pt.y)
            got = self.node_of.get(k)
            if got is None:
                got = len(self.nodes)
                self.node_of[k] = got
                self.nodes.append(pt)
            return got

        # edges: unordered node pairs with their carrier group
        self.edges: List[Tuple[int, int]] = []
        self.edge_carriers: List[Set[int]] = []
        edge_of: Dict[Tuple[int, int], int] = {}
        for i in range(m):
            s = self.input[i]
            dx, dy = s.b.x - s.a.x, s.b.y - s.a.y
            pts = sorted(cuts[i], key=lambda p: (p.x * dx + p.y * dy))
            for a, b in zip(pts, pts[1:]):
                u, v = node(a), node(b)
                if u == v:
                    raise InternalInconsistency("duplicate cut point on a segment")
                k = (u, v) if u < v else (v, u)
                e = edge_of.get(k)
                if e is None:
                    edge_of[k] = len(self.edges)
                    self.edges.append(k)
                    self.edge_carriers.append(set(self.carrier_groups[i]))
                else:
                    self.edge_carriers[e].update(self.carrier_groups[i])

        # rotation tables: outgoing directed edges sorted counterclockwise
        out: List[List[int]] = [[] for _ in self.nodes]
        for e, (u, v) in enumerate(self.edges):
            out[u].append(e)
            out[v].append(e)

        def other(e: int, u: int) -> int:
            a, b = self.edges[e]
            return b if a == u else a

        self._rot: List[List[int]] = []
        self._rot_pos: List[Dict[int, int]] = []
        for u, lst in enumerate(out):
            pu = self.nodes[u]

            def dir_of(e: int):
                q = self.nodes[other(e, u)]
                return (q.x - pu.x, q.y - pu.y)

            lst = sorted(lst, key=cmp_to_key(lambda e1, e2: _dir_cmp(dir_of(e1), dir_of(e2))))
            self._rot.append(lst)
            self._rot_pos.append({e: k for k, e in enumerate(lst)})

        # orbit extraction: next of (u -> v) is the edge clockwise from the
        # reversal at v, which traces each face with its interior on the left
        orbit_of: Dict[Tuple[int, int], int] = {}
        orbits: List[List[Tuple[int, int]]] = []
        for e, (a, b) in enumerate(self.edges):
            for (u, v) in ((a, b), (b, a)):
                if (u, v) in orbit_of:
                    continue
                oid = len(orbits)
                cyc = []
                cu, cv, ce = u, v, e
                while True:
                    orbit_of[(cu, cv)] = oid
                    cyc.append((cu, cv))
                    lst = self._rot[cv]
                    k = self._rot_pos[cv][ce]
                    ne = lst[(k - 1) % len(lst)]
                    cu, cv, ce = cv, other(ne, cv), ne
                    if (cu, cv) == (u, v):
                        break
                orbits.append(cyc)

        # classify orbits by signed area and nest them into faces
        areas = []
        for cyc in orbits:
            ring = [self.nodes[u] for (u, v) in cyc]
            areas.append(_ring_area2(ring))

        self.faces: List[Face] = []
        pos = [(oid, areas[oid]) for oid in range(len(orbits)) if areas[oid] > 0]
        face_of_orbit: Dict[int, int] = {}
        for oid, a2 in pos:
            f = Face(len(self.faces), [self.nodes[u] for (u, v) in orbits[oid]])
            f.area2 = a2
            self.faces.append(f)
            face_of_orbit[oid] = f.id

        # a non-positive orbit hangs inside the smallest positive orbit that
        # strictly contains one of its non-shared points
        for oid in range(len(orbits)):
            if areas[oid] > 0:
                continue
            ring = [self.nodes[u] for (u, v) in orbits[oid]]
            host, host_area = None, None
            for pid, a2 in pos:
                houter = self.faces[face_of_orbit[pid]].outer
                if all(point_in_ring(p, houter) != "out" for p in ring) and any(
                    point_in_ring(p, houter) == "in" for p in ring
                ):
                    if host is None or a2 < host_area:
                        host, host_area = pid, a2
            if host is not None:
                f = self.faces[face_of_orbit[host]]
                f.holes.append(ring)
                f.area2 += areas[oid]
                face_of_orbit[oid] = f.id
            else:
                face_of_orbit[oid] = OUTSIDE

        # incident faces per undirected edge
        self.edge_faces: List[Tuple[int, int]] = []
        for e, (u, v) in enumerate(self.edges):
            fl = face_of_orbit[orbit_of[(u, v)]]
            fr = face_of_orbit[orbit_of[(v, u)]]
            self.edge_faces.append((fl, fr))
            if fl != OUTSIDE:
                self.faces[fl].edge_ids.add(e)
            if fr != OUTSIDE:
                self.faces[fr].edge_ids.add(e)

        for f in self.faces:
            f.rep = self._interior_point(f)

        self._buckets = self._build_buckets()

    def _interior_point(self, f: Face) -> Point2:
        ring = f.outer
        n = len(ring)
        # walk candidate corners until a wedge probe lands strictly inside
        order = sorted(range(n), key=lambda i: (ring[i].x, ring[i].y))
        for i in order:
            a = ring[i]
            prv = ring[(i - 1) % n]
            nxt = ring[(i + 1) % n]
            if orient(prv, a, nxt) != CCW:
                continue  # reflex or straight corner of the outer cycle
            mid = Point2(
                prv.x + nxt.x - 2 * a.x,
                prv.y + nxt.y - 2 * a.y,
            )
            t = Fraction(1, 4)
            for _ in range(80):
                cand = Point2(a.x + mid.x * t, a.y + mid.y * t)
                if f.contains(cand) == "in" and not self._on_any_edge(cand, f):
                    return cand
                t /= 4
        raise InternalInconsistency("no interior witness point found for a face")

    def _on_any_edge(self, pt: Point2, f: Face) -> bool:
        for e in f.edge_ids:
            u, v = self.edges[e]
            if _point_on_edge(pt, self.nodes[u], self.nodes[v]):
                return True
        return False

    def _build_buckets(self, grid: int = 16):
        xs = [p.x for p in self.nodes]
        ys = [p.y for p in self.nodes]
        if not xs:
            return None
        x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
        if x0 == x1 or y0 == y1:
            return None
        buckets: Dict[Tuple[int, int], List[int]] = {}
        for f in self.faces:
            bx0 = min(p.x for p in f.outer)
            bx1 = max(p.x for p in f.outer)
            by0 = min(p.y for p in f.outer)
            by1 = max(p.y for p in f.outer)
            i0 = int((bx0 - x0) * grid / (x1 - x0))
            i1 = int((bx1 - x0) * grid / (x1 - x0))
            j0 = int((by0 - y0) * grid / (y1 - y0))
            j1 = int((by1 - y0) * grid / (y1 - y0))
            for i in range(max(0, i0), min(grid, i1 + 1)):
                for j in range(max(0, j0), min(grid, j1 + 1)):
                    buckets.setdefault((i, j), []).append(f.id)
        return (x0, x1, y0, y1, grid, buckets)

    # -- queries ----------------------------------------------------------

    def locate(self, pt: Point2):
        """('face', id) | ('edge', edge id) | ('node', node id) | ('out', -1)."""
        nid = self.node_of.get((pt.x, pt.y))
        if nid is not None:
            return ("node", nid)
        cand: Sequence[int]
        if self._buckets is not None:
            x0, x1, y0, y1, grid, buckets = self._buckets
            if x0 <= pt.x <= x1 and y0 <= pt.y <= y1:
                i = min(grid - 1, int((pt.x - x0) * grid / (x1 - x0)))
                j = min(grid - 1, int((pt.y - y0) * grid / (y1 - y0)))
                cand = buckets.get((i, j), [])
            else:
                cand = []
        else:
            cand = range(len(self.faces))
        for fid in cand:
            f = self.faces[fid]
            side = f.contains(pt)
            if side == "on":
                for e in f.edge_ids:
                    u, v = self.edges[e]
                    if _point_on_edge(pt, self.nodes[u], self.nodes[v]):
                        return ("edge", e)
                raise InternalInconsistency("point on a face boundary but no edge")
            if side == "in":
                return ("face", fid)
        # not inside any candidate face: either outside everything or on an
        # edge of a face whose bbox bucket missed it (impossible: buckets
        # cover face bboxes); fall back to an exhaustive edge scan
        for e, (u, v) in enumerate(self.edges):
            if _point_on_edge(pt, self.nodes[u], self.nodes[v]):
                return ("edge", e)
        return ("out", OUTSIDE)


# -- face unions --------------------------------------------------------------


def union_faces(sub: Subdivision, keep, cut_edges=(), allow_weak: bool = False):
    """Boundary of the union of the faces in `keep`, interiors on the left.

    Returns (outer_ring, hole_rings) groups with straight-through nodes
    dropped.  Edge ids in `cut_edges` stay on the boundary even between two
    kept faces, so zero-width slits are walked along both banks; that makes
    the output weakly simple, which the caller must opt into via
    `allow_weak`.  A repeated boundary vertex without that opt-in raises.
    """
    keep = set(keep)
    cut_edges = set(cut_edges)
    directed: Set[Tuple[int, int]] = set()
    for e, (u, v) in enumerate(sub.edges):
        fl, fr = sub.edge_faces[e]
        inl, inr = fl in keep, fr in keep
        if inl and inr:
            if e in cut_edges:
                directed.add((u, v))
                directed.add((v, u))
        elif inl:
            directed.add((u, v))
        elif inr:
            directed.add((v, u))

    edge_at: Dict[Tuple[int, int], int] = {}
    for e, (u, v) in enumerate(sub.edges):
        edge_at[(u, v)] = e
        edge_at[(v, u)] = e

    def other(e: int, u: int) -> int:
        a, b = sub.edges[e]
        return b if a == u else a

    cycles: List[List[int]] = []
    used: Set[Tuple[int, int]] = set()
    for start in sorted(directed):
        if start in used:
            continue
        cyc: List[int] = []
        cu, cv = start
        while True:
            used.add((cu, cv))
            cyc.append(cu)
            ce = edge_at[(cu, cv)]
            lst = sub._rot[cv]
            k = sub._rot_pos[cv][ce]
            nxt = None
            for step in range(1, len(lst) + 1):
                ne = lst[(k - step) % len(lst)]
                nv = other(ne, cv)
                if (cv, nv) in directed:
                    nxt = nv
                    break
            if nxt is None:
                raise InternalInconsistency("union boundary walk hit a dead end")
            cu, cv = cv, nxt
            if (cu, cv) == start:
                break
            if (cu, cv) in used:
                raise InternalInconsistency("union boundary walk revisited an edge")
        cycles.append(cyc)

    outers: List[List[Point2]] = []
    inners: List[List[Point2]] = []
    for cyc in cycles:
        pts = [sub.nodes[u] for u in cyc]
        m = len(pts)
        cleaned = [
            pts[i]
            for i in range(m)
            if pts[(i - 1) % m] == pts[(i + 1) % m]
            or orient(pts[(i - 1) % m], pts[i], pts[(i + 1) % m]) != 0
        ]
        if len(cleaned) != len(set(cleaned)) and not allow_weak:
            raise UnsupportedDegeneracy("region boundary pinches at a vertex")
        a2 = _ring_area2(cleaned)
        if a2 > 0:
            outers.append(cleaned)
        elif a2 < 0:
            inners.append(cleaned)
        else:
            raise InternalInconsistency("zero-area cycle on a union boundary")

    groups: List[Tuple[List[Point2], List[List[Point2]]]] = [(o, []) for o in outers]
    for ring in inners:
        best, best_area = None, None
        for gi, (outer, _) in enumerate(groups):
            if all(point_in_ring(v, outer) != "out" for v in ring) and any(
                point_in_ring(v, outer) == "in" for v in ring
            ):
                a = _ring_area2(outer)
                if best is None or a < best_area:
                    best, best_area = gi, a
        if best is None:
            raise InternalInconsistency("union hole cycle lies in no outer cycle")
        groups[best][1].append(ring)
    return groups


def sample_in_face(sub: Subdivision, fid: int, rng, count: int) -> List[Point2]:
    """Random interior points of a face, biased toward its witness point.

    Each draw walks from the representative along a random rational offset,
    shrinking until the point lands strictly inside and off every edge; the
    representative itself is the (always valid) fallback.
    """
    f = sub.faces[fid]
    xs = [p.x for p in f.outer]
    ys = [p.y for p in f.outer]
    w = max(xs) - min(xs)
    hgt = max(ys) - min(ys)
    out: List[Point2] = []
    for _ in range(count):
        dx = Fraction(rng.randint(-64, 64), 64) * w
        dy = Fraction(rng.randint(-64, 64), 64) * hgt
        if dx == 0 and dy == 0:
            dx = w / 64
        t = Fraction(1, 2)
        pick = f.rep
        for _ in range(60):
            cand = Point2(f.rep.x + dx * t, f.rep.y + dy * t)
            if f.contains(cand) == "in" and not sub._on_any_edge(cand, f):
                pick = cand
                break
            t /= 3
        out.append(pick)
    return out
