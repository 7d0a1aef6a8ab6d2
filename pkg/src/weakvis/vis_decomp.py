"""Visibility decomposition of a simple polygon.

Crossing the extension of a sightline u-v beyond a reflex vertex u is the
only way the set of visible vertices can change inside the polygon, and it
toggles exactly v.  Arranging all such extension chords therefore cuts the
polygon into cells of constant vertex visibility.  The directed dual graph
(arcs point toward the side that gains the toggled vertex) has its local
minima, the sinks, as the natural anchors for stored shortest path trees:
every cell reaches one by losing vertices one at a time.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

from .arrangement import OUTSIDE, Subdivision
from .errors import InternalInconsistency, InvalidQuery, OnCarrier
from .geometry import Point2, Segment, cross, orient
from .polygon import SimplePolygon, ray_shoot
from .spt import CycleGeometry, ShortestPathTree, classify_turns_and_lc, SECONDARY1


class CriticalConstraint:
    """Maximal chord beyond a reflex vertex u, collinear with a vertex v.

    Crossing the carrier toggles visibility of v and of nothing else.  Points
    x with orient(carrier.a, carrier.b, x) == gain_side see v.
    """

    __slots__ = ("u", "v", "carrier", "gain_side")

    def __init__(self, u: int, v: int, carrier: Segment, gain_side: int):
        self.u = u
        self.v = v
        self.carrier = carrier
        self.gain_side = gain_side

    def __repr__(self):
        return f"CriticalConstraint(u={self.u}, v={self.v}, gain_side={self.gain_side})"


def _strictly_interior(P: SimplePolygon, geom: CycleGeometry, i: int, d) -> bool:
    """Direction d points into the open interior at vertex i, no grazing."""
    dx, dy = d
    if not geom.admissible(i, dx, dy):
        return False
    for nb in (P.prev(i), P.next(i)):
        ex = P.vertices[nb].x - P.vertices[i].x
        ey = P.vertices[nb].y - P.vertices[i].y
        if cross(dx, dy, ex, ey) == 0 and dx * ex + dy * ey > 0:
            return False
    return True


def enumerate_constraints(
    P: SimplePolygon, geom: Optional[CycleGeometry] = None
) -> List[CriticalConstraint]:
    """All visibility-toggling chords, each anchored at a reflex vertex."""
    if geom is None:
        geom = CycleGeometry(P.vertices)
    out: List[CriticalConstraint] = []
    for u in range(P.n):
        if not P.is_reflex(u):
            continue
        pu = P.vertices[u]
        for v in range(P.n):
            if v == u or not geom.visible(u, v):
                continue
            d = (pu.x - P.vertices[v].x, pu.y - P.vertices[v].y)
            if not _strictly_interior(P, geom, u, d):
                continue
            z, _, _ = ray_shoot(P, pu, d)
            if z is None:
                raise InternalInconsistency("interior ray escaped the polygon")
            carrier = Segment(pu, z)
            # v stays visible on the side away from u's off-line neighbors
            loss = 0
            for nb in (P.prev(u), P.next(u)):
                s = orient(pu, z, P.vertices[nb])
                if s == 0:
                    continue  # neighbor collinear with the chord (v is it)
                if loss and s != loss:
                    raise InternalInconsistency("carrier neighbors straddle it")
                loss = s
            if loss == 0:
                raise InternalInconsistency("carrier grazes both edges at its anchor")
            out.append(CriticalConstraint(u, v, carrier, -loss))
    return out


class Arc:
    """Directed dual arc: head gains vertex `gain` when crossed from tail."""

    __slots__ = ("tail", "head", "gain", "edge", "constraint")

    def __init__(self, tail: int, head: int, gain: int, edge: int, constraint: CriticalConstraint):
        self.tail = tail
        self.head = head
        self.gain = gain
        self.edge = edge
        self.constraint = constraint


class VisibilityDecomposition:
    """Cells of constant vertex visibility with their gain-directed dual."""

    __slots__ = (
        "P",
        "geom",
        "constraints",
        "sub",
        "arcs",
        "arcs_in",
        "arcs_out",
        "loss_next",
        "sinks",
        "_sink_data",
    )

    def __init__(self, P: SimplePolygon, constraints: Optional[List[CriticalConstraint]] = None):
        self.P = P
        self.geom = CycleGeometry(P.vertices)
        if constraints is None:
            constraints = enumerate_constraints(P, self.geom)
        self.constraints = constraints
        n = P.n
        segments = [P.edge(i) for i in range(n)]
        segments += [c.carrier for c in constraints]
        self.sub = Subdivision(segments)

        self.arcs: List[Arc] = []
        self.arcs_in: List[List[int]] = [[] for _ in self.sub.faces]
        self.arcs_out: List[List[int]] = [[] for _ in self.sub.faces]
        for e, carriers in enumerate(self.sub.edge_carriers):
            idx = [k for k in carriers if k >= n]
            if not idx:
                continue  # pure polygon boundary fragment
            if len(idx) > 1 or len(carriers) > len(idx):
                raise InternalInconsistency("one sub-edge on two distinct carriers")
            c = constraints[idx[0] - n]
            fa, fb = self.sub.edge_faces[e]
            if fa == OUTSIDE or fb == OUTSIDE:
                raise InternalInconsistency("constraint chord on the outer boundary")
            sa = orient(c.carrier.a, c.carrier.b, self.sub.faces[fa].rep)
            sb = orient(c.carrier.a, c.carrier.b, self.sub.faces[fb].rep)
            if sa == sb or sa == 0 or sb == 0:
                raise InternalInconsistency("cells do not flank their carrier")
            tail, head = (fa, fb) if sb == c.gain_side else (fb, fa)
            aid = len(self.arcs)
            self.arcs.append(Arc(tail, head, c.v, e, c))
            self.arcs_out[tail].append(aid)
            self.arcs_in[head].append(aid)

        # deterministic descent: always lose the smallest-index vertex first
        self.loss_next: List[Optional[int]] = []
        self.sinks: List[int] = []
        for r in range(len(self.sub.faces)):
            inc = self.arcs_in[r]
            if not inc:
                self.loss_next.append(None)
                self.sinks.append(r)
            else:
                self.loss_next.append(
                    min(inc, key=lambda i: (self.arcs[i].gain, self.arcs[i].tail))
                )
        self._sink_data: Optional[Dict[int, "SinkData"]] = None

    # -- queries --------------------------------------------------------

    @property
    def regions(self):
        return self.sub.faces

    def region_count(self) -> int:
        return len(self.sub.faces)

    def locate_region(self, pt: Point2) -> int:
        kind, idx = self.sub.locate(pt)
        if kind == "face":
            return idx
        if kind == "out":
            raise InvalidQuery("point outside the polygon")
        raise OnCarrier(f"point lies on subdivision {kind} {idx}")

    def loss_arcs(self, r: int) -> Tuple[int, List[int]]:
        """Sink reached from region r and the arc ids crossed on the way."""
        path: List[int] = []
        while self.loss_next[r] is not None:
            a = self.loss_next[r]
            path.append(a)
            r = self.arcs[a].tail
            if len(path) > len(self.arcs) + 1:
                raise InternalInconsistency("loss walk does not terminate")
        return r, path

    def loss_path(self, r: int) -> Tuple[int, List[int]]:
        """Sink reached from region r and the vertices lost on the way."""
        sink, path = self.loss_arcs(r)
        return sink, [self.arcs[a].gain for a in path]

    def sink_data(self) -> Dict[int, "SinkData"]:
        if self._sink_data is None:
            self._sink_data = {s: SinkData(self, s) for s in self.sinks}
        return self._sink_data


class SinkData:
    """Stored shortest path tree and turn structure of one sink region."""

    __slots__ = ("region", "rep", "tree", "info", "visible", "secondary1")

    def __init__(self, decomp: VisibilityDecomposition, region: int):
        self.region = region
        self.rep = decomp.sub.faces[region].rep
        self.tree = ShortestPathTree(decomp.geom, self.rep)
        self.info = classify_turns_and_lc(self.tree, self.rep)
        self.visible = self.tree.roots()
        self.secondary1 = [
            v for v in range(decomp.P.n) if self.tree.edge_class(v) == SECONDARY1
        ]


def build_decomposition(
    P: SimplePolygon, constraints: Optional[List[CriticalConstraint]] = None
) -> VisibilityDecomposition:
    return VisibilityDecomposition(P, constraints)


def locate_region(decomp: VisibilityDecomposition, pt: Point2) -> int:
    return decomp.locate_region(pt)


def precompute_sinks(decomp: VisibilityDecomposition) -> Dict[int, SinkData]:
    return decomp.sink_data()
