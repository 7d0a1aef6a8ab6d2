import random
import time
from fractions import Fraction

from weakvis.geometry import Point2, Segment
from weakvis.polygon import PolygonWithHoles, SimplePolygon, as_rings, point_in_rings, INSIDE, OUTSIDE
from weakvis.oracle import weakly_visible, stratified_samples
from weakvis.wvp_holes import (
    build_cuts, wvp_holes_basic, wvp_holes_improved, extract_boundary, partial_wvp,
    preprocess_constraints, query_constraints, sweep_visible_parts, build_arrangement,
)


def P(x, y):
    return Point2(Fraction(x), Fraction(y))


outer = [P(0, 0), P(400, 7), P(393, 400), P(-5, 391)]
hole = [P(160, 247), P(197, 290), P(240, 253), P(200, 210)]  # CW diamond
poly = PolygonWithHoles(SimplePolygon(outer), (hole,))
p, q = P(100, 100), P(300, 103)

t0 = time.time()
cuts = build_cuts(poly, p, q)
print("cuts:", len(cuts.diagonals), "diag; ps count:", cuts.ps_vertex_count,
      "l_walls:", len(cuts.l_walls), "straddlers:", cuts.straddlers)
for dg in cuts.diagonals:
    print("  diag hole", dg.hole, "side", dg.side, "m", dg.m, "z", dg.z, "r", dg.r)

t0 = time.time()
basic = wvp_holes_basic(poly, p, q, cuts=cuts)
print(f"basic: {time.time()-t0:.2f}s pieces={len(basic.pieces)} hprime={basic.hprime} "
      f"hbar={basic.hbar} windows={len(basic.see_through)}")
extract_boundary(basic)
print("basic area2:", basic.area2, "k:", basic.k, "groups:", len(basic.region),
      "holes:", sum(len(h) for _, h in basic.region))

t0 = time.time()
imp = wvp_holes_improved(poly, p, q, cuts=cuts)
print(f"improved: {time.time()-t0:.2f}s hbar={imp.hbar} ct={imp.constraint_total} "
      f"cells={imp.cell_counts}")
print("improved area2:", imp.area2, "k:", imp.k, "groups:", len(imp.region))
print("AREAS EQUAL:", basic.area2 == imp.area2)

rings = as_rings(poly)
rng = random.Random(7)
t0 = time.time()
bad = 0
n = 0
for x in stratified_samples(poly, 400, rng):
    want = weakly_visible(rings, p, q, x)
    gb = basic.contains(x)
    gi = imp.contains(x)
    if gb == "boundary" or gi == "boundary":
        continue
    n += 1
    okb = (gb == INSIDE) == want
    oki = (gi == INSIDE) == want
    if not (okb and oki):
        bad += 1
        if bad < 8:
            print("MISMATCH", x, "oracle", want, "basic", gb, "improved", gi)
print(f"sampling: {n} pts, {bad} mismatches, {time.time()-t0:.2f}s")
