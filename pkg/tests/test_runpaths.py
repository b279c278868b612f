"""Run-compressed paths: exact distances and quasi-geodesic certification."""

import random

import pytest

from cubemorse.raag import GroupElement, WordError, distance, parse_word
from cubemorse.runpaths import (
    RunPath,
    certify_quasigeodesic_runs,
    min_pair_distance,
    path_pair_distance,
    walk_wall_count,
)


def random_runpath(graph, rng, max_runs=14, max_exp=3):
    n = rng.randint(1, max_runs)
    runs = tuple(
        (rng.randrange(len(graph.generators)), rng.choice([1, -1]) * rng.randint(1, max_exp))
        for _ in range(n)
    )
    return RunPath(GroupElement.identity(graph), runs)


class TestRunPathBasics:
    def test_rejects_zero_run(self, ck):
        with pytest.raises(WordError):
            RunPath(GroupElement.identity(ck), ((0, 0),))

    def test_rejects_bad_generator(self, ck):
        with pytest.raises(WordError):
            RunPath(GroupElement.identity(ck), ((7, 1),))

    def test_length_and_endpoint(self, ck):
        p = RunPath.from_word(parse_word("a^3 b^-2 a", ck))
        assert p.length == 6
        assert p.endpoint() == GroupElement.from_text(ck, "a^3 b^-2 a")

    def test_vertex_at_walks_the_word(self, ck):
        w = parse_word("a^2 c^-1 b d^2", ck)
        p = RunPath.from_word(w)
        acc = GroupElement.identity(ck)
        assert p.vertex_at(0) == acc
        for i, letter in enumerate(w):
            acc = acc.append_letter(letter.gen, letter.sign)
            assert p.vertex_at(i + 1) == acc

    def test_vertex_outside_range(self, ck):
        p = RunPath.from_word(parse_word("a", ck))
        with pytest.raises(WordError):
            p.vertex_at(2)
        with pytest.raises(WordError):
            p.vertex_at(-1)

    def test_segments_roundtrip_reversal(self, ck):
        p = RunPath.from_word(parse_word("a^3 d^-2 b", ck))
        fwd = p.segments_between(1, 5)
        rev = p.segments_between(5, 1)
        assert sum(abs(e) for _, _, e in fwd) == 4
        assert [(g, -e) for _, g, e in rev][::-1] == [(g, e) for _, g, e in fwd]

    def test_huge_run_positions(self, ck):
        p = RunPath.from_word(parse_word("a^1000000000000 d a^-1000000000000", ck))
        assert p.length == 2 * 10**12 + 1
        mid = p.vertex_at(10**12)
        assert mid.length == 10**12
        assert mid.gen_exponent_sum(0) == 10**12


class TestWallParityDistance:
    def test_matches_engine_on_random_walks(self, ck, z3z):
        rng = random.Random(7)
        for graph in (ck, z3z):
            for _ in range(60):
                p = random_runpath(graph, rng)
                for _ in range(6):
                    s = rng.randint(0, p.length)
                    t = rng.randint(0, p.length)
                    assert p.distance(s, t) == distance(p.vertex_at(s), p.vertex_at(t))

    def test_closed_loop_has_zero_endpoint_distance(self, ck):
        loop = RunPath.from_word(parse_word("a b a^-1 b^-1", ck))
        assert loop.distance(0, loop.length) == 0

    def test_commuting_conjugate_collapses(self, ck):
        p = RunPath.from_word(parse_word("a^1000000000000 b a^-1000000000000", ck))
        assert p.distance(0, p.length) == 1

    def test_blocking_letter_preserves_all_walls(self, ck):
        p = RunPath.from_word(parse_word("a^1000000000000 d a^-1000000000000", ck))
        assert p.distance(0, p.length) == 2 * 10**12 + 1

    def test_empty_walk(self, ck):
        assert walk_wall_count(ck, []) == 0

    def test_cross_path_distance_matches_engine(self, ck):
        q = RunPath(GroupElement.from_text(ck, "c d^2"), ((0, 3), (3, -2)))
        p = RunPath.from_word(parse_word("b^2 a", ck))
        for s in range(p.length + 1):
            for t in range(q.length + 1):
                want = distance(p.vertex_at(s), q.vertex_at(t))
                assert path_pair_distance(p, s, q, t) == want


class TestMinPairDistance:
    def test_matches_brute_force(self, ck, z3z):
        rng = random.Random(3)
        for graph in (ck, z3z):
            for _ in range(10):
                p = random_runpath(graph, rng, max_runs=6, max_exp=2)
                q = random_runpath(graph, rng, max_runs=6, max_exp=2)
                best = min(
                    distance(p.vertex_at(s), q.vertex_at(t))
                    for s in range(p.length + 1)
                    for t in range(q.length + 1)
                )
                got, s, t = min_pair_distance(p, q)
                assert got == best
                assert path_pair_distance(p, s, q, t) == best

    def test_shared_vertex_gives_zero(self, ck):
        p = RunPath.from_word(parse_word("a^4", ck))
        q = RunPath(GroupElement.from_text(ck, "a^2"), ((3, 5),))
        got, s, t = min_pair_distance(p, q)
        assert got == 0 and s == 2 and t == 0


class TestQuasiGeodesicCertification:
    def test_geodesic_is_1_0(self, ck):
        p = RunPath.from_word(parse_word("a^5 d^3 a^-2", ck))
        rep = certify_quasigeodesic_runs(p, 1, 0)
        assert rep.certified and rep.min_margin >= 0

    def test_backtrack_needs_additive_slack(self, ck):
        p = RunPath.from_word(parse_word("a d d^-1 a", ck))
        assert not certify_quasigeodesic_runs(p, 1, 0).certified
        assert not certify_quasigeodesic_runs(p, 1, 1).certified
        assert certify_quasigeodesic_runs(p, 1, 2).certified

    def test_failure_witness_is_a_violation(self, ck):
        p = RunPath.from_word(parse_word("a b a^-1 b^-1 a b a^-1 b^-1", ck))
        rep = certify_quasigeodesic_runs(p, 2, 1)
        assert not rep.certified
        s, t = rep.witness
        assert (t - s) > 2 * p.distance(s, t) + 1

    def test_exact_minimum_matches_brute_force(self, ck, z3z):
        rng = random.Random(11)
        for graph in (ck, z3z):
            for _ in range(25):
                p = random_runpath(graph, rng, max_runs=8, max_exp=4)
                verts = [p.vertex_at(k) for k in range(p.length + 1)]
                for K, C in ((1, 0), (2, 1), (3, 4), (8, 8)):
                    want = min(
                        K * distance(verts[s], verts[t]) + C - (t - s)
                        for s in range(p.length + 1)
                        for t in range(s + 1, p.length + 1)
                    )
                    rep = certify_quasigeodesic_runs(p, K, C)
                    assert rep.min_margin == want
                    assert rep.certified == (want >= 0)
                    s, t = rep.witness
                    assert s < t
                    assert K * p.distance(s, t) + C - (t - s) == want

    def test_degenerate_run_boundary_pair_is_excluded(self, ck):
        # two consecutive same-generator runs share a vertex at the boundary;
        # the s == t pair there must not be reported as the minimum
        p = RunPath(GroupElement.identity(ck), ((3, -1), (1, 6), (1, 6), (2, -6), (0, -3), (3, -3)))
        rep = certify_quasigeodesic_runs(p, 2, 3)
        assert rep.min_margin == 4
        s, t = rep.witness
        assert s < t

    def test_coupled_cluster_revisits(self, ck, z3z):
        cases = [
            (ck, ((0, 6), (1, 3), (0, -4), (1, -3), (0, 5))),
            (z3z, ((3, 7), (0, 1), (3, -5), (0, -1), (3, 6))),
            (ck, ((1, 6), (1, 6), (2, -6))),
        ]
        for graph, runs in cases:
            p = RunPath(GroupElement.identity(graph), runs)
            verts = [p.vertex_at(k) for k in range(p.length + 1)]
            for K, C in ((1, 0), (3, 2), (8, 8)):
                want = min(
                    K * distance(verts[s], verts[t]) + C - (t - s)
                    for s in range(p.length + 1)
                    for t in range(s + 1, p.length + 1)
                )
                assert certify_quasigeodesic_runs(p, K, C).min_margin == want

    def test_long_geodesic_certifies_fast(self, ck):
        p = RunPath.from_word(parse_word("a^1000000000 d^1000000000", ck))
        rep = certify_quasigeodesic_runs(p, 1, 0)
        assert rep.certified and rep.min_margin == 0
        assert rep.evaluations < 100

    def test_huge_runs_certify_instantly(self, ck):
        p = RunPath(
            GroupElement.identity(ck),
            ((0, 10**12), (3, 5), (0, -(10**12) + 7), (3, -5), (0, 10**11)),
        )
        rep = certify_quasigeodesic_runs(p, 8, 8)
        assert rep.certified and rep.min_margin == 15

    def test_rejects_bad_constants(self, ck):
        p = RunPath.from_word(parse_word("a", ck))
        with pytest.raises(ValueError):
            certify_quasigeodesic_runs(p, 0, 1)
        with pytest.raises(ValueError):
            certify_quasigeodesic_runs(p, 1, -1)

    def test_empty_path(self, ck):
        p = RunPath(GroupElement.identity(ck), ())
        assert certify_quasigeodesic_runs(p, 1, 0).certified
