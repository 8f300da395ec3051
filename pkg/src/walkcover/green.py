"""Lattice Green's functions for the simple walk and the
coordinate-difference walk, with return-probability asymptotics.

Two independent evaluation routes are implemented and cross-checked:

* **stepsum** - the method of record.  G(x) = sum_n P(X_n = x) is summed
  exactly to a step horizon and closed with an analytic local-CLT tail.
  For the simple walk the n-step probabilities come from splitting the n
  steps multinomially over the d coordinate axes (each axis then performs
  an independent +/-1 walk): a cascade of binomial-mixture convolutions.
  For the coordinate-difference walk (the d-1 dimensional walk of
  consecutive coordinate gaps, whose returns to 0 are the ambient walk's
  returns to the diagonal) the probabilities additionally decompose over
  an integer winding: the d "bond" processes must each land on a common
  level k, shifted along the segment between the probed bonds for
  off-diagonal values.  Each winding term is the same multinomial
  cascade.

* **fourier** - tensor Gauss-Legendre quadrature of the defining torus
  integral ``(2pi)^-dim * Int cos(x.theta) / (1 - phi(theta))`` with
  dyadic refinement toward the integrable singularity at 0.  Feasible
  for dim <= 4 and used to validate the stepsum route.

Return probabilities follow as ``1 - 1/G(0)`` for each walk; the sweep
tabulates how ``2d x (return probability)`` descends toward its
high-dimension limit of 1.  Error bounds are heuristic-rigorous: stated
tail bounds plus observed refinement convergence, not interval
arithmetic.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import gammainc, gammaln

from .lattice import Point

SIMPLE = "simple"
DIAGONAL_DIFFERENCE = "diagonal_difference"


class RecurrentWalkError(ValueError):
    """A divergent Green's function was requested."""


class ToleranceUnreachableError(RuntimeError):
    """The evaluation budget cannot certify the requested tolerance, or
    the two routes disagree beyond their combined bounds."""


@dataclass(frozen=True)
class WalkSpectrum:
    """A walk identified by its character function on [-pi, pi]^dim."""

    kind: str
    d: int

    def __post_init__(self):
        if self.kind not in (SIMPLE, DIAGONAL_DIFFERENCE):
            raise ValueError(f"unknown walk kind {self.kind!r}")
        if self.d < 1 or (self.kind == DIAGONAL_DIFFERENCE and self.d < 2):
            raise ValueError("dimension too small")

    @property
    def dim(self) -> int:
        return self.d if self.kind == SIMPLE else self.d - 1

    @property
    def transient(self) -> bool:
        return self.dim >= 3

    def character(self, theta: np.ndarray) -> np.ndarray:
        """phi(theta) = E[exp(i theta . X_1)]; |phi| <= 1, phi(0) = 1."""
        theta = np.asarray(theta, dtype=float)
        if self.kind == SIMPLE:
            return np.cos(theta).sum(axis=-1) / self.d
        total = np.cos(theta[..., 0]) + np.cos(theta[..., -1])
        if self.dim > 1:
            total = total + np.cos(np.diff(theta, axis=-1)).sum(axis=-1)
        return total / self.d


def simple_walk(d: int) -> WalkSpectrum:
    return WalkSpectrum(SIMPLE, d)


def diagonal_difference_walk(d: int) -> WalkSpectrum:
    return WalkSpectrum(DIAGONAL_DIFFERENCE, d)


@dataclass(frozen=True)
class GreenValue:
    value: float
    abs_error_bound: float
    method: str

    def __post_init__(self):
        if self.abs_error_bound < 0:
            raise ValueError("error bound must be nonnegative")


# ---------------------------------------------------------------------------
# stepsum route
# ---------------------------------------------------------------------------

def _one_dim_landing(target: int, n_max: int) -> np.ndarray:
    """q[k] = P(k-step +/-1 walk sits at `target`)."""
    t = abs(int(target))
    k = np.arange(n_max + 1)
    q = np.zeros(n_max + 1)
    ok = (k >= t) & ((k - t) % 2 == 0)
    kk = k[ok]
    q[ok] = np.exp(gammaln(kk + 1) - gammaln((kk + t) / 2 + 1)
                   - gammaln((kk - t) / 2 + 1) - kk * math.log(2.0))
    return q


def _alloc_merge(a: np.ndarray, b: np.ndarray, p: float) -> np.ndarray:
    """c[m] = sum_k Binom(m, p)(k) a[k] b[m-k]: prepend one slot that
    binomially claims its share of the m steps."""
    n = len(a) - 1
    c = np.empty(n + 1)
    c[0] = a[0] * b[0]
    row = np.array([1.0])
    q = 1.0 - p
    for m in range(1, n + 1):
        nxt = np.empty(m + 1)
        nxt[0] = row[0] * q
        nxt[m] = row[m - 1] * p
        if m > 1:
            nxt[1:m] = row[1:] * q + row[:-1] * p
        row = nxt
        c[m] = np.dot(row, a[:m + 1] * b[m::-1])
    return c


def _alloc_cascade(targets: Sequence[int], n_max: int) -> np.ndarray:
    """f[n] = P(n steps split multinomially over len(targets) slots leave
    every slot's +/-1 walk at its target)."""
    h = _one_dim_landing(targets[-1], n_max)
    for j in range(len(targets) - 2, -1, -1):
        h = _alloc_merge(_one_dim_landing(targets[j], n_max), h, 1.0 / (len(targets) - j))
    return h


def _simple_step_terms(x: Sequence[int], n_max: int) -> np.ndarray:
    return _alloc_cascade(list(x), n_max)


def _diff_step_terms(d: int, y: Sequence[int], n_max: int) -> np.ndarray:
    """n-step probabilities of the coordinate-difference walk at y, by
    summing over the common winding level of the d bond walks."""
    partial = np.concatenate([[0], np.cumsum(np.asarray(y, dtype=int))])
    if partial.shape[0] != d:
        raise ValueError("y must have dimension d-1")
    f = np.zeros(n_max + 1)
    k = 0
    while True:
        term = _alloc_cascade([k - partial[h] for h in range(d)], n_max)
        if k > 0:
            term = term + _alloc_cascade([-k - partial[h] for h in range(d)], n_max)
        f += term
        if k > 1 and term.sum() < 1e-16 * max(f.sum(), 1e-300):
            break
        k += 1
        if k > n_max:
            break
    return f


def _smooth_tail(terms: np.ndarray, s: float) -> tuple[float, float]:
    """Tail sum_{n>N} of a sequence decaying like A n^-s (with parity
    oscillation), from an empirical fit of A on the last window."""
    N = len(terms) - 1
    w = max(32, N // 10)
    ns = np.arange(N - w + 1, N + 1)
    paired = (terms[N - w + 1:N + 1] + terms[N - w:N]) / 2.0
    a_fit = float(np.mean(paired * ns**s))
    tail = a_fit * (N + 0.5) ** (1 - s) / (s - 1)
    bound = abs(tail) * (10.0 / N) + 4.0 * abs(a_fit) * (N + 1.0) ** (-s)
    return tail, bound


def _simple_tail(d: int, x: Sequence[int], n_max: int) -> tuple[float, float]:
    """Analytic local-CLT closure for the simple walk: integral of the
    Gaussian envelope plus the alternating half-term."""
    s = d / 2.0
    a = d * float(sum(c * c for c in x)) / 2.0
    N = n_max + 0.5
    amp = (d / (2 * math.pi)) ** s
    if a == 0:
        integral = amp * N ** (1 - s) / (s - 1)
    else:
        integral = amp * a ** (1 - s) * gammainc(s - 1, a / N) * math.gamma(s - 1)
    g_next = amp * (n_max + 1.0) ** (-s) * math.exp(-a / (n_max + 1))
    parity = -1 if (n_max + 1 + sum(abs(c) for c in x)) % 2 else 1
    tail = integral + parity * g_next / 2.0
    bound = 2.0 * amp * n_max ** (-s)
    return tail, bound


def _stepsum_n_max(spec: WalkSpectrum, tol: float) -> int:
    s = spec.dim / 2.0
    if spec.kind == SIMPLE:
        amp = (spec.d / (2 * math.pi)) ** s
    else:
        amp = spec.d ** ((spec.d - 2) / 2.0) / (2 * math.pi) ** s
    n = (4.0 * amp / tol) ** (1.0 / s)
    return int(min(max(n, 400), 25000))


def stepsum_green(spec: WalkSpectrum, x: Sequence[int], tol: float = 1e-4,
                  n_max: int | None = None) -> GreenValue:
    """Partial sum of n-step probabilities plus an analytic tail."""
    if not spec.transient:
        raise RecurrentWalkError(f"G diverges for {spec.kind} with dim {spec.dim}")
    if n_max is None:
        n_max = _stepsum_n_max(spec, tol)
    if spec.kind == SIMPLE:
        terms = _simple_step_terms(x, n_max)
        tail, bound = _simple_tail(spec.d, x, n_max)
    else:
        terms = _diff_step_terms(spec.d, x, n_max)
        tail, bound = _smooth_tail(terms, spec.dim / 2.0)
    return GreenValue(float(terms.sum() + tail), bound, "stepsum")


# ---------------------------------------------------------------------------
# fourier route
# ---------------------------------------------------------------------------

def _dyadic_boxes(dim: int, levels: int):
    """Boxes tiling [-pi,pi]^dim minus the final center cube, refined
    dyadically toward the origin."""
    h = math.pi
    for _ in range(levels):
        edges = (-h, -h / 2, 0.0, h / 2, h)
        for combo in itertools.product(range(4), repeat=dim):
            lo = [edges[c] for c in combo]
            hi = [edges[c + 1] for c in combo]
            if all(abs(v) <= h / 2 for v in lo) and all(abs(v) <= h / 2 for v in hi):
                continue
            yield lo, hi
        h /= 2


def _tensor_quad(fn: Callable[[np.ndarray], np.ndarray], dim: int,
                 levels: int, order: int) -> float:
    nodes, wts = leggauss(order)
    total = 0.0
    for lo, hi in _dyadic_boxes(dim, levels):
        axes = [lo[a] + (hi[a] - lo[a]) * (nodes + 1) / 2 for a in range(dim)]
        weights = [wts * (hi[a] - lo[a]) / 2 for a in range(dim)]
        theta = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
        w = weights[0]
        for a in range(1, dim):
            w = np.multiply.outer(w, weights[a])
        total += float((fn(theta) * w).sum())
    return total


def _center_bound(spec: WalkSpectrum, levels: int) -> float:
    """|integral| over the untiled center cube, from 1 - phi >=
    (2 lambda_min / (d pi^2)) |theta|^2 near 0."""
    dim = spec.dim
    if spec.kind == SIMPLE:
        lam = 1.0
    else:
        lam = 2.0 - 2.0 * math.cos(math.pi / spec.d)
    h = math.pi * 2.0 ** (-levels)
    radius = h * math.sqrt(dim)
    sphere = 2 * math.pi ** (dim / 2) / math.gamma(dim / 2)
    shell = sphere * radius ** (dim - 2) / (dim - 2)
    return spec.d * math.pi ** 2 / (2 * lam) * shell


def fourier_green(spec: WalkSpectrum, x: Sequence[int], tol: float = 1e-4,
                  levels: int | None = None, order: int | None = None) -> GreenValue:
    """Quadrature of the defining integral; dim <= 4 only."""
    if not spec.transient:
        raise RecurrentWalkError(f"G diverges for {spec.kind} with dim {spec.dim}")
    dim = spec.dim
    if dim > 4:
        raise ToleranceUnreachableError(f"fourier route limited to dim <= 4, got {dim}")
    if levels is None:
        levels = 20 if dim <= 3 else 16
    if order is None:
        order = 8 if dim <= 3 else 6
    xv = np.asarray(list(x), dtype=float)
    if xv.shape[0] != dim:
        raise ValueError(f"x must have dimension {dim}")

    def integrand(theta: np.ndarray) -> np.ndarray:
        return np.cos(theta @ xv) / (1.0 - spec.character(theta))

    norm = (2 * math.pi) ** (-dim)
    coarse = _tensor_quad(integrand, dim, levels, order) * norm
    fine = _tensor_quad(integrand, dim, levels, order + 2) * norm
    cbound = _center_bound(spec, levels) * norm
    bound = 2.0 * abs(fine - coarse) + cbound + 1e-12
    if bound > tol:
        raise ToleranceUnreachableError(
            f"fourier bound {bound:.2e} exceeds tol {tol:.2e}")
    return GreenValue(fine, bound, "fourier")


# ---------------------------------------------------------------------------
# combined entry points
# ---------------------------------------------------------------------------

def _canonical_x(spec: WalkSpectrum, x: tuple[int, ...]) -> tuple[int, ...]:
    if spec.kind == SIMPLE:
        return tuple(sorted((abs(c) for c in x), reverse=True))
    neg = tuple(-c for c in x)
    return min(x, x[::-1], neg, neg[::-1])


@lru_cache(maxsize=4096)
def _green_cached(kind: str, d: int, x: tuple[int, ...], tol: float, method: str) -> GreenValue:
    spec = WalkSpectrum(kind, d)
    if method == "auto":
        method = "both" if spec.dim <= 3 else "stepsum"
    if method == "stepsum":
        return stepsum_green(spec, x, tol)
    if method == "fourier":
        return fourier_green(spec, x, tol)
    step = stepsum_green(spec, x, tol)
    four = fourier_green(spec, x, tol)
    gap = abs(step.value - four.value)
    if gap > step.abs_error_bound + four.abs_error_bound:
        raise ToleranceUnreachableError(
            f"methods disagree: stepsum {step.value} +/- {step.abs_error_bound}, "
            f"fourier {four.value} +/- {four.abs_error_bound}")
    return step if step.abs_error_bound <= four.abs_error_bound else four


def green_value(spec: WalkSpectrum, x: Sequence[int], tol: float = 1e-4,
                method: str = "auto") -> GreenValue:
    """G(x) for the requested walk.

    method "both" runs the two routes and enforces agreement within the
    sum of their error bounds; "auto" does so whenever the fourier route
    is cheap (dim <= 3) and otherwise trusts the stepsum record.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    xt = tuple(int(c) for c in x)
    if len(xt) != spec.dim:
        raise ValueError(f"x must have dimension {spec.dim}")
    return _green_cached(spec.kind, spec.d, _canonical_x(spec, xt), tol, method)


def return_probability(d: int, tol: float = 1e-5, method: str = "auto") -> float:
    """Probability the d-dimensional simple walk ever returns to 0:
    1 - 1/G(0).  Always strictly between 1/(2d) and 1."""
    if d < 3:
        raise RecurrentWalkError("the simple walk is recurrent for d < 3")
    g = green_value(simple_walk(d), (0,) * d, tol, method)
    return 1.0 - 1.0 / g.value


def diagonal_return_probability(d: int, tol: float = 1e-4, method: str = "auto") -> float:
    """Probability the d-dimensional simple walk ever returns to the full
    diagonal line: the coordinate-difference walk's return probability."""
    if d < 4:
        raise RecurrentWalkError("the coordinate-difference walk is recurrent for d < 4")
    g = green_value(diagonal_difference_walk(d), (0,) * (d - 1), tol, method)
    return 1.0 - 1.0 / g.value


def _difference_vector(d: int, i: int, j: int) -> tuple[int, ...]:
    """e_j - e_i in the difference lattice, with index 0 denoting the
    zero vector (the walk's basis is indexed 0..d-1)."""
    if not (0 <= i <= d - 1 and 0 <= j <= d - 1):
        raise ValueError("indices must lie in 0..d-1")
    y = [0] * (d - 1)
    if j >= 1:
        y[j - 1] += 1
    if i >= 1:
        y[i - 1] -= 1
    return tuple(y)


def offdiag_green(d: int, i: int, j: int, tol: float = 1e-4,
                  method: str = "auto") -> float:
    """Green's function of the coordinate-difference walk at e_j - e_i;
    symmetric in (i, j) and a function of the cyclic index distance."""
    if d < 4:
        raise RecurrentWalkError("need d >= 4")
    return green_value(diagonal_difference_walk(d), _difference_vector(d, i, j),
                       tol, method).value


def offdiagonal_sum(d: int, tol: float = 1e-4) -> float:
    """sum_j Ghat(e_j - e_i) - 1 (independent of i); the high-dimension
    bound for this quantity is 28/d."""
    total = 0.0
    for j in range(d):
        total += offdiag_green(d, 0, j, tol) if j else green_value(
            diagonal_difference_walk(d), (0,) * (d - 1), tol).value
    return total - 1.0


def character_power_moment(d: int, i: int, j: int, k: int,
                           grid: int | None = None) -> float:
    """Raw integral of cos(theta_j - theta_i) * phihat^k over
    [-pi, pi]^(d-1), by a trig-exact uniform grid.

    A k-step difference walk cannot bridge a cyclic index gap larger than
    k, so the integral vanishes exactly whenever d(i,j) > k; with the gap
    reachable it is positive (e.g. (2pi)^(d-1) / (2d) at gap 1, k = 1).
    """
    dim = d - 1
    if dim > 6:
        raise ValueError("uniform-grid evaluation kept to d <= 7")
    if grid is None:
        grid = 2 * (k + 2)
    if grid ** dim > 8_000_000:
        raise ValueError(f"grid {grid}^{dim} too large; lower k or d")
    theta1 = 2 * math.pi * np.arange(grid) / grid - math.pi
    spec = diagonal_difference_walk(d)
    axes = np.meshgrid(*([theta1] * dim), indexing="ij")
    theta = np.stack(axes, axis=-1)
    ti = axes[i - 1] if i >= 1 else 0.0
    tj = axes[j - 1] if j >= 1 else 0.0
    vals = np.cos(tj - ti) * spec.character(theta) ** k
    return float(vals.mean() * (2 * math.pi) ** dim)


# ---------------------------------------------------------------------------
# asymptotic sweep
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepRow:
    d: int
    p_return: float
    scaled_return: float          # 2d * p_d
    p_diagonal: float | None      # d >= 4 only
    scaled_diagonal: float | None
    excess: float                 # E_d = G_d(0) - 1 - 1/(2d)
    scaled_excess: float          # d * E_d


@dataclass(frozen=True)
class SweepTable:
    rows: tuple[SweepRow, ...]
    note: str
    trend_failures: tuple[str, ...]

    @property
    def trends_ok(self) -> bool:
        return not self.trend_failures


def asymptotic_sweep(d_min: int = 3, d_max: int = 10, tol: float = 1e-3) -> SweepTable:
    """Tabulate return probabilities against their high-dimension
    scalings and check the desk-scale trends: ``2d p_d`` and ``2d P_d``
    strictly decreasing and > 1, ``d E_d`` decreasing.  The limits
    themselves (both scalings -> 1) are out of reach at finite d; only
    monotone descent is asserted.
    """
    if not 3 <= d_min <= d_max:
        raise ValueError("need 3 <= d_min <= d_max")
    rows = []
    for d in range(d_min, d_max + 1):
        g0 = green_value(simple_walk(d), (0,) * d, tol, method="stepsum").value
        p = 1.0 - 1.0 / g0
        excess = g0 - 1.0 - 1.0 / (2 * d)
        if d >= 4:
            pd = diagonal_return_probability(d, tol, method="stepsum")
            rows.append(SweepRow(d, p, 2 * d * p, pd, 2 * d * pd, excess, d * excess))
        else:
            rows.append(SweepRow(d, p, 2 * d * p, None, None, excess, d * excess))
    failures = []
    for a, b in zip(rows, rows[1:]):
        if not b.scaled_return < a.scaled_return:
            failures.append(f"2d*p_d not decreasing at d={b.d}")
        if a.scaled_diagonal is not None and b.scaled_diagonal is not None:
            if not b.scaled_diagonal < a.scaled_diagonal:
                failures.append(f"2d*P_d not decreasing at d={b.d}")
            if not b.p_diagonal <= a.p_diagonal:
                failures.append(f"P_d not monotone at d={b.d}")
        if not b.scaled_excess < a.scaled_excess:
            failures.append(f"d*E_d not decreasing at d={b.d}")
    for r in rows:
        if not r.scaled_return > 1.0:
            failures.append(f"2d*p_d <= 1 at d={r.d}")
        if r.scaled_diagonal is not None and not r.scaled_diagonal > 1.0:
            failures.append(f"2d*P_d <= 1 at d={r.d}")
        if not 1.0 / (2 * r.d) < r.p_return < 1.0:
            failures.append(f"p_d outside (1/2d, 1) at d={r.d}")
        if not r.excess > 0.0:
            failures.append(f"E_d <= 0 at d={r.d}")
    note = ("trend check at desk scale: monotone descent of the scaled return "
            "probabilities toward their high-dimension limit 1; the limit itself "
            "is not attainable at finite d")
    return SweepTable(tuple(rows), note, tuple(failures))
