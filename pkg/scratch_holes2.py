import random
import sys
import time
from fractions import Fraction

from weakvis.generate import gen_with_holes, random_query_segment
from weakvis.oracle import weakly_visible, stratified_samples
from weakvis.polygon import as_rings, INSIDE
from weakvis.wvp_holes import build_cuts, wvp_holes_basic, wvp_holes_improved, extract_boundary
from weakvis.errors import UnsupportedDegeneracy

sizes = [(10, 1), (12, 1), (14, 2), (12, 2), (14, 3), (12, 4)]
total_bad = 0
for si, (n_outer, holes) in enumerate(sizes):
    P = gen_with_holes(n_outer, holes, seed=1000 + si)
    n = sum(len(r) for r in as_rings(P))
    rng = random.Random(77 + si)
    for qi in range(3):
        p, q = random_query_segment(P, seed=5000 + 10 * si + qi)
        t0 = time.time()
        try:
            cuts = build_cuts(P, p, q)
        except UnsupportedDegeneracy as e:
            print(f"[{si}.{qi}] degenerate: {e}")
            continue
        basic = wvp_holes_basic(P, p, q, cuts=cuts)
        tb = time.time() - t0
        extract_boundary(basic)
        t0 = time.time()
        imp = wvp_holes_improved(P, p, q, cuts=cuts)
        ti = time.time() - t0
        eq = basic.area2 == imp.area2
        bad = 0
        npts = 0
        t0 = time.time()
        for x in stratified_samples(P, 300, rng):
            want = weakly_visible(as_rings(P), p, q, x)
            gb, gi = basic.contains(x), imp.contains(x)
            if gb == "boundary" or gi == "boundary":
                continue
            npts += 1
            if (gb == INSIDE) != want or (gi == INSIDE) != want:
                bad += 1
                if bad <= 3:
                    print("   MISMATCH", x, want, gb, gi)
        ts = time.time() - t0
        total_bad += bad + (0 if eq else 1)
        print(f"[{si}.{qi}] n={n} h={P.h} basic {tb:.2f}s (h'={basic.hprime}, "
              f"act={basic.meta['activations']}) improved {ti:.2f}s "
              f"(hbar={imp.hbar}, ct={imp.constraint_total}) areaEq={eq} "
              f"mism={bad}/{npts} sample {ts:.2f}s")
sys.exit(1 if total_bad else 0)
