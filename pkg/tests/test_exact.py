import itertools
from fractions import Fraction

import numpy as np
import pytest

from conftest import (all_step_sequences, brute_force_cover_count,
                      random_walk_path, walk_points)
from walkcover.comb import cover_count
from walkcover.exact import (BudgetExceededError, SideViolationError,
                             count_reflected_pair, enumerate_connecting_paths,
                             exact_cover_probability,
                             reflection_monotonicity_sweep, sign_cover_instance,
                             class_members, verify_staircase_max)
from walkcover.lattice import CoverTarget, staircase_path, validate_path
from walkcover.reflect import Hyperplane, canonical_representative, reflect_point

H21 = Hyperplane(0, 1, 1)


class TestExactCoverProbability:
    def test_single_neighbor_one_step(self):
        r = exact_cover_probability(CoverTarget.from_points([(1, 0)]), 2, 1)
        assert r.probability == Fraction(1, 4)

    def test_origin_zero_steps(self):
        for d in (1, 2, 3):
            t = CoverTarget.from_points([tuple([0] * d)])
            assert exact_cover_probability(t, d, 0).probability == 1

    def test_impossible_pair_d1(self):
        r = exact_cover_probability(CoverTarget.from_points([(1,), (-1,)]), 1, 2)
        assert r.favorable == 0 and r.total == 4

    def test_budget_guard(self):
        with pytest.raises(BudgetExceededError):
            exact_cover_probability(CoverTarget.from_points([(1, 0, 0)]), 3, 40)

    @pytest.mark.parametrize("d,L", [(1, 5), (2, 4), (2, 5)])
    def test_trace_mode_matches_brute_force(self, d, L):
        rng = np.random.default_rng(100 + d + L)
        for _ in range(12):
            size = int(rng.integers(1, 4))
            pts = {tuple(int(v) for v in rng.integers(-2, 3, size=d))
                   for _ in range(size)}
            t = CoverTarget.from_points(pts)
            expect = brute_force_cover_count(d, L, {p: 1 for p in pts})
            assert exact_cover_probability(t, d, L).favorable == expect

    @pytest.mark.parametrize("d,L", [(1, 6), (2, 5)])
    def test_repetitions_mode_matches_brute_force(self, d, L):
        rng = np.random.default_rng(200 + d + L)
        for _ in range(10):
            p = random_walk_path(rng, d, int(rng.integers(1, 4)))
            t = CoverTarget.of_path(p, "repetitions")
            needed = {q: t.required(q) for q in t.trace}
            expect = brute_force_cover_count(d, L, needed)
            assert exact_cover_probability(t, d, L).favorable == expect

    def test_monotone_in_horizon(self):
        t = CoverTarget.from_points([(1, 1), (2, 0)])
        probs = [exact_cover_probability(t, 2, L).probability for L in range(9)]
        assert all(a <= b for a, b in zip(probs, probs[1:]))

    def test_repetitions_at_most_trace(self):
        rng = np.random.default_rng(300)
        for _ in range(10):
            p = random_walk_path(rng, 2, int(rng.integers(2, 5)))
            L = 6
            tr = exact_cover_probability(CoverTarget.of_path(p, "trace"), 2, L)
            rep = exact_cover_probability(CoverTarget.of_path(p, "repetitions"), 2, L)
            assert rep.favorable <= tr.favorable


class TestCountReflectedPair:
    def test_empty_mirror_set_ties(self):
        c1, c2 = count_reflected_pair([(0, 0), (0, 1)], [], H21, 2, 4)
        assert c1 == c2

    def test_small_case_matches_brute_force(self):
        A0, B0 = [], [(0, 1)]
        c1, c2 = count_reflected_pair(A0, B0, H21, 2, 2)
        assert c1 == brute_force_cover_count(2, 2, {(0, 1): 1})
        assert c2 == brute_force_cover_count(2, 2, {reflect_point((0, 1), H21): 1})
        assert c1 >= c2

    def test_two_point_case(self):
        c1, c2 = count_reflected_pair([(1, 1)], [(0, 1)], H21, 2, 4)
        assert c1 == brute_force_cover_count(2, 4, {(1, 1): 1, (0, 1): 1})
        mirrored = reflect_point((0, 1), H21)
        assert c2 == brute_force_cover_count(2, 4, {(1, 1): 1, mirrored: 1})
        assert c1 >= c2

    def test_side_violation(self):
        with pytest.raises(SideViolationError):
            count_reflected_pair([(3, 0)], [], H21, 2, 3)


class TestReflectionSweep:
    def test_tiny_sweep_no_violations(self):
        report = reflection_monotonicity_sweep(radius=1, max_set_size=1,
                                               lengths=(1, 2, 3))
        assert report.passed and report.cases > 0

    def test_bitmask_counts_match_dfs(self):
        """The sweep's bit-parallel counts agree with the general counter."""
        report = reflection_monotonicity_sweep(radius=1, max_set_size=2,
                                               lengths=(3,))
        assert report.passed
        for A0, B0 in [((), ((0, 1),)), (((1, 1),), ((0, 1),)),
                       (((0, 0),), ((1, 0), (0, 1)))]:
            c1, c2 = count_reflected_pair(A0, B0, H21, 2, 3)
            brute1 = brute_force_cover_count(2, 3, {p: 1 for p in set(A0) | set(B0)} or {(0, 0): 1})
            assert c1 == brute1


class TestStaircaseRanking:
    def test_single_step_ties(self):
        report = verify_staircase_max(1, 2, 4, 1)
        assert report.staircase_is_max
        assert len({r.probability for r in report.rows}) == 1

    def test_n2_d2(self):
        report = verify_staircase_max(2, 2, 6, 3)
        assert report.staircase_is_max
        assert any(r.is_staircase for r in report.rows)
        # straight two-step paths rank strictly below the corner paths
        straight = next(r for r in report.rows if r.points == ((0, 0), (1, 0), (2, 0)))
        assert straight.probability < report.staircase_probability

    def test_monotone_d3_classes(self, monotone_paths_d3):
        report = verify_staircase_max(3, 3, 6, 3)
        probs = {}
        for p in monotone_paths_d3:
            row = next(r for r in report.rows if r.points == p.points)
            probs[p.points] = row.probability
        # the diagonal-hugging class is maximal, the straight one minimal
        values = list(probs.values())
        assert probs[monotone_paths_d3[4].points] == max(values)
        assert probs[monotone_paths_d3[0].points] == min(values)
        assert report.staircase_is_max

    def test_enumeration_counts_against_direct_filter(self):
        """Path enumeration agrees with filtering all step sequences."""
        N, d, cap = 2, 2, 4
        expect = set()
        for L in range(1, cap + 1):
            for seq in all_step_sequences(d, L):
                pts = walk_points(seq, d)
                norms = [sum(map(abs, q)) for q in pts]
                if norms[-1] == N and all(v != N for v in norms[:-1]):
                    expect.add(tuple(pts))
        got = set(enumerate_connecting_paths(N, d, cap))
        assert got == expect


class TestSignCoverBridge:
    """Within one reflection class, covering counts are sign-cover counts."""

    def _direct_class_counts(self, rep, h, A0, B0):
        want1 = set(A0) | set(B0)
        want2 = set(A0) | {reflect_point(p, h) for p in B0}
        n1 = n2 = 0
        for member in class_members(rep, h):
            n1 += want1 <= member.trace
            n2 += want2 <= member.trace
        return n1, n2

    def test_class_counts_match_cover_counts(self):
        rng = np.random.default_rng(77)
        h = H21
        checked = 0
        for _ in range(200):
            p = random_walk_path(rng, 2, int(rng.integers(3, 8)))
            rep, _ = canonical_representative(p, h)
            pool = [q for q in itertools.product(range(-2, 3), repeat=2)
                    if h.on_origin_side(q)]
            idx = rng.choice(len(pool), size=3, replace=False)
            A0 = {pool[idx[0]]}
            B0 = {pool[idx[1]], pool[idx[2]]}
            inst = sign_cover_instance(rep, h, A0, B0)
            if inst is None:
                continue
            n1, n2 = self._direct_class_counts(rep, h, A0, B0)
            if not inst.guard_ok:
                assert n1 == 0 and n2 == 0
                continue
            checked += 1
            omega_all = set(range(1, len(inst.omega) + 1))
            a_set = {i + 1 for i in inst.a_indices}
            assert n1 == cover_count(inst.collection, omega_all)
            assert n2 <= cover_count(inst.collection, a_set)
            assert cover_count(inst.collection, a_set) <= cover_count(inst.collection, omega_all)
        assert checked > 30
