"""Tests for the preprocessed query engine.

Walked trees are checked field by field against shortest path trees rebuilt
from scratch at the same viewpoint, and query outputs are compared exactly,
as canonical tagged rings, against the direct segment construction.  The
touched counter assertions pin down the output-sensitive behaviour: convex
queries touch each vertex once, and padding a hidden pocket must not grow
the counter.
"""

import pytest

from weakvis.errors import InvalidQuery, OnCarrier, UnsupportedDegeneracy
from weakvis.generate import gen_bent_pocket, gen_convex, gen_star, random_query_segment
from weakvis.geometry import CCW, Point2
from weakvis.spt import CycleGeometry, ShortestPathTree, classify_turns_and_lc
from weakvis.wvp_query import QueryStructure, build_query_structure, query_wvp, walk_to_viewpoint
from weakvis.wvp_simple import canonical_ring, wvp_of_segment

from helpers import LSHAPE, POCKETS, SQUARE, TWO_NOTCH, P, poly

NOTCH = [(0, 0), (4, 0), (4, 4), (2, 3), (0, 4)]

_structures: dict = {}


def structure(coords) -> QueryStructure:
    key = tuple(coords)
    if key not in _structures:
        _structures[key] = build_query_structure(poly(*coords))
    return _structures[key]


def scratch_tree(S, r):
    tree = ShortestPathTree(S.decomp.geom, r)
    return tree, classify_turns_and_lc(tree, r)


def assert_tree_matches(S, live, info, r):
    tree, want = scratch_tree(S, r)
    n = S.P.n
    for v in range(n):
        assert live.parent(v) == tree.parent[v], f"parent mismatch at {v}"
        assert live.bend(v) == tree.bend[v], f"bend mismatch at {v}"
    assert live.roots() == tree.roots()
    assert info == want


class TestWalk:
    def test_sink_region_walk_is_trivial(self):
        S = structure(TWO_NOTCH)
        for sink, sd in S.sinks.items():
            live, info = walk_to_viewpoint(S, sd.rep)
            assert live.walk_len == 0
            assert live.roots() is sd.visible
            assert info == sd.info
            assert_tree_matches(S, live, info, sd.rep)

    def test_one_arc_region_delta(self):
        S = structure(POCKETS)
        d = S.decomp
        exercised = 0
        for r in range(d.region_count()):
            sink, arcs = d.loss_arcs(r)
            if len(arcs) != 1:
                continue
            arc = d.arcs[arcs[0]]
            v = arc.gain
            rep = d.regions[r].rep
            live, info = walk_to_viewpoint(S, rep)
            assert live.gained == {v}
            sd = S.sinks[sink]
            # the tree skeleton changes at v alone
            for w in range(S.P.n):
                if w == v:
                    assert live.parent(w) == -1
                    assert live.bend(w) == 0
                else:
                    assert live.parent(w) == sd.tree.parent[w]
                    assert live.bend(w) == sd.tree.bend[w]
            # critical numbers shift exactly on v's old subtree
            shift = sd.info.critical_number[v]
            sub = set(sd.tree.subtree(v))
            for w in range(S.P.n):
                want = sd.info.critical_number[w] - (shift if w in sub else 0)
                assert info.critical_number[w] == want
            assert_tree_matches(S, live, info, rep)
            exercised += 1
        assert exercised >= 1

    def test_every_region_matches_scratch_corpus(self):
        for coords in (NOTCH, TWO_NOTCH, LSHAPE, POCKETS):
            S = structure(coords)
            d = S.decomp
            for r in range(d.region_count()):
                rep = d.regions[r].rep
                live, info = walk_to_viewpoint(S, rep)
                assert_tree_matches(S, live, info, rep)

    def test_every_region_matches_scratch_generated(self):
        pol = gen_star(15, seed=7)
        S = build_query_structure(pol)
        d = S.decomp
        for r in range(d.region_count()):
            rep = d.regions[r].rep
            live, info = walk_to_viewpoint(S, rep)
            assert_tree_matches(S, live, info, rep)

    def test_walk_length_counts_gains(self):
        S = structure(POCKETS)
        d = S.decomp
        for r in range(d.region_count()):
            rep = d.regions[r].rep
            live, _ = walk_to_viewpoint(S, rep)
            assert live.walk_len == len(d.loss_arcs(r)[1])
            assert live.walk_len == len(live.gained)

    def test_critical_number_recurrence(self):
        # cn(v) counts the left-critical vertices on the root path up to and
        # including v, so it grows by one exactly at LC vertices
        S = structure(TWO_NOTCH)
        d = S.decomp
        for r in range(d.region_count()):
            rep = d.regions[r].rep
            live, info = walk_to_viewpoint(S, rep)
            for v in range(S.P.n):
                cn = info.critical_number[v]
                assert cn >= 0
                par = live.parent(v)
                base = 0 if par == -1 else info.critical_number[par]
                assert cn == base + (1 if info.is_lc[v] else 0)
                assert info.is_lc[v] == (live.bend(v) == CCW)

    def test_on_carrier_raises(self):
        S = structure(NOTCH)
        with pytest.raises(OnCarrier):
            walk_to_viewpoint(S, P(1, "5/2"))

    def test_outside_raises(self):
        S = structure(NOTCH)
        with pytest.raises(InvalidQuery):
            walk_to_viewpoint(S, P(9, 9))


class TestQueryWvp:
    def test_convex_sees_everything_touching_each_vertex_once(self):
        S = structure(SQUARE)
        out = query_wvp(S, P(2, 2), P(7, 6))
        assert canonical_ring(out.points) == [P(0, 0), P(10, 0), P(10, 10), P(0, 10)]
        st = S.last_stats
        assert (st.walk_p, st.walk_q) == (0, 0)
        assert st.touched == 4

    def test_convex_generated_touch_counter(self):
        pol = gen_convex(9, seed=5)
        S = build_query_structure(pol)
        p, q = random_query_segment(pol, seed=11)
        out = query_wvp(S, p, q)
        assert canonical_ring(out.points) == canonical_ring(pol.vertices)
        assert S.last_stats.touched == 9

    def test_matches_direct_construction_on_corpus(self):
        for coords in (NOTCH, TWO_NOTCH, LSHAPE, POCKETS):
            pol = poly(*coords)
            S = structure(coords)
            checked = 0
            seed = 0
            while checked < 25:
                seed += 1
                p, q = random_query_segment(pol, seed=seed)
                try:
                    want = wvp_of_segment(pol, p, q)
                except UnsupportedDegeneracy:
                    continue
                got = query_wvp(S, p, q)
                assert canonical_ring(got.points, got.tags) == canonical_ring(
                    want.points, want.tags
                ), f"{coords[:2]}... seed {seed}"
                checked += 1

    def test_matches_direct_construction_generated(self):
        pol = gen_star(13, seed=4)
        S = build_query_structure(pol)
        checked = 0
        seed = 100
        while checked < 15:
            seed += 1
            p, q = random_query_segment(pol, seed=seed)
            try:
                want = wvp_of_segment(pol, p, q)
            except UnsupportedDegeneracy:
                continue
            got = query_wvp(S, p, q)
            assert canonical_ring(got.points, got.tags) == canonical_ring(
                want.points, want.tags
            )
            checked += 1

    def test_counter_bounded_by_output_and_walk(self):
        for coords in (TWO_NOTCH, POCKETS, LSHAPE):
            pol = poly(*coords)
            S = structure(coords)
            for seed in range(1, 9):
                p, q = random_query_segment(pol, seed=seed)
                try:
                    query_wvp(S, p, q)
                except UnsupportedDegeneracy:
                    continue
                st = S.last_stats
                assert st.touched <= 3 * (st.output_len + st.walk_p + st.walk_q)

    def test_padding_hidden_pocket_leaves_counter_alone(self):
        # the bent corridor hides its branch wiggles from the whole main
        # room; quadrupling the wiggle count must not grow what the query
        # touches beyond the few extra gate probes
        p, q = P(10000, 5000), P(30000, 5000)
        small = gen_bent_pocket(12, seed=1)
        big = gen_bent_pocket(48, seed=1)
        S_small = build_query_structure(small)
        S_big = build_query_structure(big)
        out_small = query_wvp(S_small, p, q)
        st_small = S_small.last_stats
        out_big = query_wvp(S_big, p, q)
        st_big = S_big.last_stats
        assert canonical_ring(out_small.points) == canonical_ring(
            wvp_of_segment(small, p, q).points
        )
        assert canonical_ring(out_big.points) == canonical_ring(
            wvp_of_segment(big, p, q).points
        )
        assert st_big.touched <= st_small.touched + 4
        assert st_big.touched < big.n

    def test_endpoint_on_carrier_raises(self):
        S = structure(NOTCH)
        with pytest.raises(OnCarrier):
            query_wvp(S, P(1, "5/2"), P(3, "5/2"))

    def test_invalid_segment_rejected_before_walking(self):
        S = structure(NOTCH)
        with pytest.raises(InvalidQuery):
            query_wvp(S, P(1, 1), P(9, 9))
        with pytest.raises(UnsupportedDegeneracy):
            query_wvp(S, P(1, 3), P(3, 1))  # supporting line hits vertex (4,0)

    def test_possible_parent_tables(self):
        S = structure(NOTCH)
        assert S.possible_parents[2] == (3,)
        assert S.possible_parents[4] == (3,)
        for v in (0, 1, 3):
            assert S.possible_parents[v] == ()
