import numpy as np
import pytest

from walkcover.exact import exact_cover_probability
from walkcover.lattice import CoverTarget, validate_path
from walkcover.montecarlo import (Estimate, SimConfig, _per_walk_success,
                                  mc_compare, mc_cover_probability)

NEIGHBOR = CoverTarget.from_points([(1, 0)])


class TestEstimate:
    def test_interval_contains_p_hat(self):
        for k, n in [(0, 10), (5, 10), (10, 10), (250, 1000)]:
            e = Estimate(k, n)
            lo, hi = e.ci95
            assert 0 <= lo <= e.p_hat <= hi <= 1


class TestAnalyticCase:
    def test_quarter_within_3_sigma(self):
        cfg = SimConfig(d=2, L=1, n_walks=10**6, seed=424242)
        est = mc_cover_probability(NEIGHBOR, cfg)
        assert abs(est.p_hat - 0.25) < 0.0013

    def test_wilson_calibration_over_seeds(self):
        """~95 of 100 seed replications should cover the true value."""
        hits = 0
        for seed in range(100):
            cfg = SimConfig(d=2, L=1, n_walks=4096, seed=seed)
            lo, hi = mc_cover_probability(NEIGHBOR, cfg).ci95
            hits += lo <= 0.25 <= hi
        assert 88 <= hits <= 99


class TestDeterminism:
    def test_threads_and_batching_invariant(self):
        tgt = CoverTarget.from_points([(1, 0, 0), (1, 1, 0)])
        runs = []
        for threads, batch, chunk in [(1, 8192, 256), (8, 512, 64), (3, 1000, 17)]:
            cfg = SimConfig(d=3, L=150, n_walks=30_000, seed=90210,
                            threads=threads, batch_walks=batch, chunk_steps=chunk)
            runs.append(mc_cover_probability(tgt, cfg).successes)
        assert runs[0] == runs[1] == runs[2]

    def test_early_stop_does_not_change_counts(self):
        tgt = CoverTarget.from_points([(1, 0)])
        a = mc_cover_probability(tgt, SimConfig(2, 50, 20000, 5, early_stop=True))
        b = mc_cover_probability(tgt, SimConfig(2, 50, 20000, 5, early_stop=False))
        assert a.successes == b.successes


class TestModeAndHorizonMonotonicity:
    def test_trace_dominates_repetitions_per_walk(self):
        p = validate_path([(0, 0, 0), (1, 0, 0), (1, 1, 0), (1, 0, 0)])
        cfg = SimConfig(d=3, L=300, n_walks=20_000, seed=8, mode="repetitions")
        rep = _per_walk_success(cfg, [CoverTarget.of_path(p, "repetitions")])
        tr = _per_walk_success(cfg, [CoverTarget.of_path(p, "trace")])
        assert (tr[:, 0] >= rep[:, 0]).all()
        assert tr.sum() >= rep.sum()

    def test_longer_horizon_dominates_per_walk(self):
        tgt = CoverTarget.from_points([(1, 1), (0, 2)])
        short = _per_walk_success(SimConfig(2, 40, 15_000, 13), [tgt])
        long = _per_walk_success(SimConfig(2, 90, 15_000, 13), [tgt])
        assert (long[:, 0] >= short[:, 0]).all()


class TestAgreementWithExact:
    def test_twenty_random_targets_within_4_sigma(self):
        rng = np.random.default_rng(515151)
        d, L, n = 2, 8, 10**6
        for case in range(20):
            size = int(rng.integers(1, 4))
            pts = {tuple(int(v) for v in rng.integers(-2, 3, size=d))
                   for _ in range(size)}
            tgt = CoverTarget.from_points(pts)
            truth = float(exact_cover_probability(tgt, d, L).probability)
            est = mc_cover_probability(tgt, SimConfig(d, L, n, seed=1000 + case))
            sigma = max(est.stderr, 1e-9)
            assert abs(est.p_hat - truth) < 4 * sigma + 1e-9, (pts, truth, est.p_hat)


class TestCompare:
    def test_duplicate_targets_identical_under_common_rng(self):
        tgt = CoverTarget.from_points([(1, 0), (1, 1)])
        cfg = SimConfig(d=2, L=60, n_walks=20_000, seed=3)
        res = mc_compare([tgt, tgt], cfg, common_rng=True)
        assert res.estimates[0].successes == res.estimates[1].successes
        diff, se = res.paired_diff(0, 1)
        assert diff == 0 and se == 0

    def test_staircase_beats_straight_d2(self):
        from walkcover.lattice import staircase_path, straight_path
        stair = CoverTarget.of_path(staircase_path(4, 2))
        straight = CoverTarget.of_path(straight_path(4, 2))
        cfg = SimConfig(d=2, L=100, n_walks=10**6, seed=99)
        res = mc_compare([stair, straight], cfg)
        diff, se = res.paired_diff(0, 1)
        assert diff > 4 * se

    def test_common_vs_independent_rng_consistent(self):
        tgt1 = CoverTarget.from_points([(1, 0, 0)])
        tgt2 = CoverTarget.from_points([(0, 1, 0)])
        cfg = SimConfig(d=3, L=30, n_walks=40_000, seed=17)
        res_c = mc_compare([tgt1, tgt2], cfg, common_rng=True)
        res_i = mc_compare([tgt1, tgt2], cfg, common_rng=False)
        for rc, ri in zip(res_c.estimates, res_i.estimates):
            assert abs(rc.p_hat - ri.p_hat) < 5 * (rc.stderr + ri.stderr)


class TestValidation:
    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            mc_cover_probability(NEIGHBOR, SimConfig(d=3, L=5, n_walks=10, seed=1))

    def test_bad_mode(self):
        with pytest.raises(ValueError):
            SimConfig(d=2, L=1, n_walks=1, seed=0, mode="sometimes")
