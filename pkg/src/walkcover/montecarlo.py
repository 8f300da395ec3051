"""Monte Carlo estimation of covering probabilities.

Walks are simulated in vectorized batches; each walk's step sequence
comes from its own counter-based stream (see :mod:`walkcover.rng`), so a
run is reproducible bit-for-bit from ``(config, seed)`` alone, regardless
of batch size or worker count.  Positions are packed into single int64
keys (coordinate-wise base-2^b encoding) so trajectory bookkeeping and
target matching are scalar array operations.

Success accounting is per walk: every target point carries a
remaining-visits counter, decremented on each visit (the time-0 position
counts), and a walk succeeds when all counters reach zero.  Success is
absorbing, so stopping a successful walk early changes nothing; walks
that still owe visits run to the step budget.  Estimates carry the
binomial standard error and a Wilson 95% interval.

Truncating at L estimates a lower bound on the L = infinity covering
probability; the infinite-horizon quantities themselves are computed
exactly by the Green's-function modules, not here.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .lattice import CoverTarget, Point, REPETITIONS, TRACE
from .rng import walk_directions

DEFAULT_BATCH = 8192
DEFAULT_CHUNK = 256


def default_threads() -> int:
    env = os.environ.get("WALKCOVER_THREADS")
    if env:
        return max(1, int(env))
    return 1


@dataclass(frozen=True)
class SimConfig:
    """Simulation parameters; identical configs (seed included) give
    identical successes."""

    d: int
    L: int
    n_walks: int
    seed: int
    mode: str = TRACE
    early_stop: bool = True
    threads: int = 1
    batch_walks: int = DEFAULT_BATCH
    chunk_steps: int = DEFAULT_CHUNK

    def __post_init__(self):
        if self.d < 1 or self.n_walks < 1 or self.L < 0:
            raise ValueError("need d >= 1, n_walks >= 1, L >= 0")
        if self.mode not in (TRACE, REPETITIONS):
            raise ValueError("mode must be trace or repetitions")


@dataclass(frozen=True)
class Estimate:
    """Bernoulli estimate with Wilson 95% interval."""

    successes: int
    n: int
    p_hat: float = field(init=False)
    stderr: float = field(init=False)
    ci95: tuple[float, float] = field(init=False)

    def __post_init__(self):
        p = self.successes / self.n
        object.__setattr__(self, "p_hat", p)
        object.__setattr__(self, "stderr", math.sqrt(p * (1 - p) / self.n))
        object.__setattr__(self, "ci95", _wilson(self.successes, self.n))


def _wilson(k: int, n: int, z: float = 1.959963984540054) -> tuple[float, float]:
    p = k / n
    denom = 1 + z * z / n
    center = (p + z * z / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom
    # the interval provably contains p; min/max repair float rounding at 0, 1
    return (max(0.0, min(center - half, p)), min(1.0, max(center + half, p)))


def _pack_bits(d: int, L: int) -> int:
    """Bits per coordinate so any position reachable in L steps packs
    into a signed 64-bit key; 0 when packing is impossible."""
    need = max(2, (2 * L + 3).bit_length())
    return need if need * d <= 62 else 0


class _PackedTargets:
    """Targets and step increments in packed-key space."""

    def __init__(self, d: int, L: int, points: Sequence[Point]):
        bits = _pack_bits(d, L)
        if not bits:
            raise ValueError(f"d={d}, L={L} exceeds the packed-coordinate range")
        base = 1 << bits
        offset = base >> 1
        weights = [base**i for i in range(d)]
        self.origin_key = sum(offset * w for w in weights)
        self.point_keys = np.array(
            [sum((c + offset) * w for c, w in zip(p, weights)) for p in points],
            dtype=np.int64)
        incr = []
        for axis in range(d):
            for sign in (1, -1):
                incr.append(sign * weights[axis])
        self.step_keys = np.array(incr, dtype=np.int64)


def _run_range(cfg: SimConfig, pts: _PackedTargets, needed0: np.ndarray,
               w_lo: int, w_hi: int) -> np.ndarray:
    """Per-target success counts for walks [w_lo, w_hi); column t counts
    walks whose t-th requirement column completed within L steps."""
    n_targets = needed0.shape[0]
    per_target = np.zeros(n_targets, dtype=np.int64)
    sides = 2 * cfg.d
    for b0 in range(w_lo, w_hi, cfg.batch_walks):
        ids = np.arange(b0, min(b0 + cfg.batch_walks, w_hi), dtype=np.uint64)
        W = len(ids)
        pos = np.full(W, pts.origin_key, dtype=np.int64)
        rem = np.repeat(needed0[None, :, :], W, axis=0)  # (W, targets, points)
        open_t = rem.sum(axis=2) > 0                     # (W, targets)
        per_target += W - open_t.sum(axis=0)
        alive = open_t.any(axis=1)
        ids, pos, rem, open_t = ids[alive], pos[alive], rem[alive], open_t[alive]
        step0 = 0
        while step0 < cfg.L and len(ids):
            C = min(cfg.chunk_steps, cfg.L - step0)
            dirs = walk_directions(cfg.seed, ids, step0, C, sides)
            traj = pos[:, None] + np.cumsum(pts.step_keys[dirs], axis=1)
            for pi, pk in enumerate(pts.point_keys):
                hits = (traj == pk).sum(axis=1)
                col = rem[:, :, pi]
                np.maximum(col - hits[:, None], 0, out=col)
            pos = traj[:, -1]
            step0 += C
            now_done = open_t & (rem.sum(axis=2) == 0)
            if now_done.any():
                per_target += now_done.sum(axis=0)
                open_t &= ~now_done
            if cfg.early_stop:
                alive = open_t.any(axis=1)
                if not alive.all():
                    ids, pos, rem, open_t = (ids[alive], pos[alive],
                                             rem[alive], open_t[alive])
    return per_target


def _build_requirements(cfg: SimConfig, targets: Sequence[CoverTarget]
                        ) -> tuple[_PackedTargets, np.ndarray]:
    """Union the target points and tabulate outstanding visit counts per
    (target, point), already crediting the walk's time-0 position."""
    for t in targets:
        if t.dim != cfg.d:
            raise ValueError(f"target dimension {t.dim} != configured d={cfg.d}")
    union: list[Point] = sorted({p for t in targets for p in t.trace})
    pts = _PackedTargets(cfg.d, cfg.L, union)
    origin = tuple([0] * cfg.d)
    needed0 = np.zeros((len(targets), len(union)), dtype=np.int64)
    for ti, t in enumerate(targets):
        for pi, p in enumerate(union):
            if p in t.trace:
                needed0[ti, pi] = t.required(p) - (p == origin)
    return pts, np.maximum(needed0, 0)


def _walk_spans(cfg: SimConfig, threads: int) -> list[tuple[int, int]]:
    """Walk-index ranges per worker, aligned to whole batches (counts are
    per-walk, so any split yields identical totals)."""
    width = max(cfg.batch_walks, -(-cfg.n_walks // threads))
    width = -(-width // cfg.batch_walks) * cfg.batch_walks
    return [(lo, min(lo + width, cfg.n_walks))
            for lo in range(0, cfg.n_walks, width)]


def _simulate(cfg: SimConfig, targets: Sequence[CoverTarget]) -> np.ndarray:
    """Success counts per target over all walks (one pass, shared
    randomness across targets)."""
    pts, needed0 = _build_requirements(cfg, targets)
    threads = max(1, cfg.threads)
    if threads == 1:
        return _run_range(cfg, pts, needed0, 0, cfg.n_walks)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = pool.map(lambda s: _run_range(cfg, pts, needed0, *s),
                         _walk_spans(cfg, threads))
        return sum(parts)


def mc_cover_probability(target: CoverTarget, cfg: SimConfig) -> Estimate:
    """Unbiased estimate of the probability that the first L steps cover
    the target."""
    counts = _simulate(cfg, [target])
    return Estimate(int(counts[0]), cfg.n_walks)


@dataclass(frozen=True)
class CompareResult:
    """Per-target estimates from a common-random-numbers run, with the
    joint success counts needed for paired errors."""

    estimates: tuple[Estimate, ...]
    joint: np.ndarray  # joint[i, j] = walks succeeding on both i and j
    n: int

    def paired_diff(self, i: int, j: int) -> tuple[float, float]:
        """(p_i - p_j, standard error of the paired difference)."""
        pi, pj = self.estimates[i].p_hat, self.estimates[j].p_hat
        pij = self.joint[i, j] / self.n
        var = pi * (1 - pi) + pj * (1 - pj) - 2 * (pij - pi * pj)
        return pi - pj, math.sqrt(max(var, 0.0) / self.n)


def mc_compare(targets: Sequence[CoverTarget], cfg: SimConfig,
               common_rng: bool = True) -> CompareResult:
    """Estimate several targets; with common random numbers every target
    is evaluated on the same walks, so differences are paired."""
    if not targets:
        raise ValueError("no targets")
    if common_rng:
        per_walk = _per_walk_success(cfg, targets)
    else:
        cols = []
        for k, t in enumerate(targets):
            shifted = SimConfig(cfg.d, cfg.L, cfg.n_walks, cfg.seed + k + 1,
                                cfg.mode, cfg.early_stop, cfg.threads,
                                cfg.batch_walks, cfg.chunk_steps)
            cols.append(_per_walk_success(shifted, [t])[:, 0])
        per_walk = np.stack(cols, axis=1)
    joint = (per_walk.T.astype(np.int64) @ per_walk.astype(np.int64))
    estimates = tuple(Estimate(int(per_walk[:, k].sum()), cfg.n_walks)
                      for k in range(len(targets)))
    return CompareResult(estimates, joint, cfg.n_walks)


def _per_walk_success(cfg: SimConfig, targets: Sequence[CoverTarget]) -> np.ndarray:
    """(n_walks, n_targets) success indicators; used where joint counts
    are needed."""
    union: list[Point] = sorted({p for t in targets for p in t.trace})
    pts = _PackedTargets(cfg.d, cfg.L, union)
    origin = tuple([0] * cfg.d)
    needed0 = np.zeros((len(targets), len(union)), dtype=np.int64)
    for ti, t in enumerate(targets):
        for pi, p in enumerate(union):
            if p in t.trace:
                needed0[ti, pi] = t.required(p) - (p == origin)
    needed0 = np.maximum(needed0, 0)
    out = np.zeros((cfg.n_walks, len(targets)), dtype=bool)

    def fill(w_lo: int, w_hi: int) -> None:
        sides = 2 * cfg.d
        for b0 in range(w_lo, w_hi, cfg.batch_walks):
            hi = min(b0 + cfg.batch_walks, w_hi)
            ids = np.arange(b0, hi, dtype=np.uint64)
            W = len(ids)
            pos = np.full(W, pts.origin_key, dtype=np.int64)
            rem = np.repeat(needed0[None, :, :], W, axis=0)
            step0 = 0
            while step0 < cfg.L:
                open_any = rem.sum(axis=(1, 2)) > 0
                if cfg.early_stop and not open_any.any():
                    break
                C = min(cfg.chunk_steps, cfg.L - step0)
                dirs = walk_directions(cfg.seed, ids, step0, C, sides)
                traj = pos[:, None] + np.cumsum(pts.step_keys[dirs], axis=1)
                for pi, pk in enumerate(pts.point_keys):
                    hits = (traj == pk).sum(axis=1)
                    col = rem[:, :, pi]
                    np.maximum(col - hits[:, None], 0, out=col)
                pos = traj[:, -1]
                step0 += C
            out[b0:hi] = rem.sum(axis=2) == 0

    threads = max(1, cfg.threads)
    if threads == 1:
        fill(0, cfg.n_walks)
    else:
        width = -(-max(cfg.batch_walks, -(-cfg.n_walks // threads)) // cfg.batch_walks)
        width *= cfg.batch_walks
        spans = [(lo, min(lo + width, cfg.n_walks))
                 for lo in range(0, cfg.n_walks, width)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(lambda s: fill(*s), spans))
    return out
