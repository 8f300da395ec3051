import numpy as np
import pytest

from walkcover.green import green_value, simple_walk
from walkcover.hitting import (HittingQuery, counterexample_probabilities,
                               first_entry_distribution, hit_probability,
                               truncation_bias_estimate)
from walkcover.lattice import CoverTarget
from walkcover.montecarlo import SimConfig, mc_cover_probability
from walkcover.rng import walk_directions

O, Y, Z, W, Y2 = (0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0), (2, 0, 0)

# frozen from the high-resolution stepsum oracle; the source table's
# rounded figures sit within 5e-3 of each
ORACLE = {
    "y_of_yz": 0.279500,
    "w_of_yzw": 0.034608,
    "y_of_yzw": 0.269827,
    "y_of_yw": 0.301087,
    "w_of_yw": 0.115849,
    "o_of_oy": 0.254031,
    "y_of_oy": 0.254031,
}
PUBLISHED = {
    "y_of_yz": 0.2792,
    "w_of_yzw": 0.0344,
    "y_of_yzw": 0.2696,
    "y_of_yw": 0.3008,
    "w_of_yw": 0.1155,
    "o_of_oy": 0.2538,
    "y_of_oy": 0.2538,
}


@pytest.fixture(scope="module")
def entry():
    fe = lambda pts: first_entry_distribution(HittingQuery(O, pts, 3), tol=1e-5)
    return {
        "y_of_yz": fe((Y, Z))[Y],
        "w_of_yzw": fe((Y, Z, W))[W],
        "y_of_yzw": fe((Y, Z, W))[Y],
        "y_of_yw": fe((Y, W))[Y],
        "w_of_yw": fe((Y, W))[W],
        "o_of_oy": fe((O, Y))[O],
        "y_of_oy": fe((O, Y))[Y],
    }


class TestFirstEntryValues:
    @pytest.mark.parametrize("key", sorted(ORACLE))
    def test_against_oracle_and_published(self, entry, key):
        assert abs(entry[key] - ORACLE[key]) < 5e-4
        assert abs(entry[key] - PUBLISHED[key]) < 5e-3

    def test_start_on_set_symmetry(self, entry):
        # returning to the start before y and reaching y before returning
        # are equal for a unit separation
        assert abs(entry["o_of_oy"] - entry["y_of_oy"]) < 1e-6


class TestFirstEntryStructure:
    def test_single_point_reduces_to_green_ratio(self):
        g = lambda x: green_value(simple_walk(3), x, tol=1e-5).value
        for p in (Y, W, Y2):
            h = first_entry_distribution(HittingQuery(O, (p,), 3), tol=1e-5)
            assert abs(h[p] - g(p) / g(O)) < 1e-4

    def test_distribution_sums_to_hit_probability(self):
        q = HittingQuery(O, (Y, Z, W), 3)
        dist = first_entry_distribution(q, tol=1e-5)
        assert all(0 <= v <= 1 for v in dist.values())
        total = sum(dist.values())
        assert 0 < total < 1
        assert abs(total - hit_probability(q, tol=1e-5)) < 1e-12

    def test_symmetric_pair_splits_evenly(self):
        dist = first_entry_distribution(HittingQuery(O, (Y, Z), 3), tol=1e-5)
        assert abs(dist[Y] - dist[Z]) < 1e-9

    def test_validation(self):
        with pytest.raises(ValueError):
            HittingQuery(O, (), 3)
        with pytest.raises(ValueError):
            HittingQuery(O, (Y, Y), 3)
        with pytest.raises(ValueError):
            HittingQuery((0, 0), ((1, 0),), 2)


class TestCounterexample:
    def test_values_and_ordering(self):
        ce = counterexample_probabilities(tol=1e-5)
        assert abs(ce.p_original - 0.080846) < 5e-4
        assert abs(ce.p_reflected - 0.065527) < 5e-4
        assert abs(ce.p_original - 0.0805) < 5e-3
        assert abs(ce.p_reflected - 0.0653) < 5e-3
        assert ce.p_original > ce.p_reflected

    def test_variant_factor_surfaced(self):
        ce = counterexample_probabilities(tol=1e-5)
        variant = ce.components["p_original_variant_last_factor_unit"]
        assert abs(variant - 0.0832) < 5e-3
        assert variant > ce.p_original
        assert any("diagonal-neighbor factor" in n for n in ce.notes)

    def test_recombination_of_published_constants(self):
        """Plugging the source table's own rounded constants into the
        assembly reproduces its headline values."""
        p1 = 2 * 0.2696 * (0.3008 + 0.1155) * 0.3401 + 2 * 0.0344 * 0.2792 * 0.2178
        p2 = 0.3008 * (2 * 0.2538) * 0.3401 + 0.1155 * 0.3401 * 0.3401
        assert abs(p1 - 0.0805) < 1e-4
        assert abs(p2 - 0.0653) < 1e-4

    def test_truncation_bias_small_at_desk_scale(self):
        ce = counterexample_probabilities(tol=1e-5)
        bias = truncation_bias_estimate(10_000, ce.p_original)
        assert 0 < bias < 2e-3


def _mc_first_entry(seed, n_walks, L, targets):
    """Minimal vectorized first-entry frequencies (test-side oracle)."""
    wins = np.zeros(len(targets), dtype=np.int64)
    t_arr = np.array(targets, dtype=np.int64)
    for lo in range(0, n_walks, 4096):
        ids = np.arange(lo, min(lo + 4096, n_walks), dtype=np.uint64)
        pos = np.zeros((len(ids), 3), dtype=np.int64)
        first = np.full(len(ids), -1, dtype=np.int64)
        t0 = 0
        alive = np.ones(len(ids), dtype=bool)
        while t0 < L and alive.any():
            C = min(512, L - t0)
            dirs = walk_directions(7_777_777 + seed, ids, t0, C, 6)
            steps = np.zeros((len(ids), C, 3), dtype=np.int64)
            ax, sg = dirs >> 1, 1 - 2 * (dirs & 1)
            for a in range(3):
                steps[:, :, a] = np.where(ax == a, sg, 0)
            traj = pos[:, None, :] + np.cumsum(steps, axis=1)
            hit_time = np.full((len(ids), len(targets)), C + 1, dtype=np.int64)
            for k in range(len(targets)):
                m = (traj == t_arr[k]).all(axis=2)
                any_hit = m.any(axis=1)
                hit_time[any_hit, k] = m[any_hit].argmax(axis=1)
            best = hit_time.min(axis=1)
            newly = alive & (best <= C)
            if newly.any():
                first[newly] = hit_time[newly].argmin(axis=1)
                alive &= ~newly
            pos = traj[:, -1, :]
            t0 += C
        for k in range(len(targets)):
            wins[k] += int((first == k).sum())
    return wins / n_walks


@pytest.mark.slow
def test_first_entry_matches_monte_carlo():
    """Truncated MC first-entry frequencies agree with the linear-system
    distribution within 4 sigma plus the truncation allowance."""
    targets = (Y, Z, W)
    n, L = 100_000, 4000
    freq = _mc_first_entry(3, n, L, targets)
    dist = first_entry_distribution(HittingQuery(O, targets, 3), tol=1e-5)
    # chance the first entry happens only after L steps, per target bound
    trunc = truncation_bias_estimate(L, 1.0) / 3
    for k, p in enumerate(targets):
        sigma = max((dist[p] * (1 - dist[p]) / n) ** 0.5, 1e-9)
        assert abs(freq[k] - dist[p]) < 4 * sigma + trunc, (p, freq[k], dist[p])
