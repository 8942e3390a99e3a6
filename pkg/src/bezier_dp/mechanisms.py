"""Differentially private estimators for moments, variance, covariance, correlation.

All mechanisms target epsilon-DP in the add-remove neighboring model (one
record inserted or deleted), except the swap-model baseline which assumes a
fixed, public record count.  Budgets:

  * ``swap_*``             statistic + (1/n) Lap(1/eps), swap model only;
  * ``naive_*``            each raw aggregate gets Lap(m/eps) for m aggregates;
  * ``improved_*``         (count, unnormalized statistic), each Lap(2/eps);
  * ``bezier_*``           Bernstein-basis aggregate + Lap(1/eps) per cell --
                           the whole vector has L1 sensitivity 1, so a single
                           unit budget covers every cell simultaneously;
  * ``transformed_*``      two-cell variant releasing (n - u, u), u = n * var;
  * ``correlation_*``      pipelines post-processing the above.

Construction is split into a prepare step (aggregates of the dataset, done
once) and a run step (noise draw + post-processing, done per release), so
Monte Carlo experiments pay the O(n) cost once.  Running any mechanism with
a zero noise source reproduces the exact statistic bit for bit, because the
noisy path adds explicit zero noise to the same float aggregates and then
executes the same ratio/clip kernels as the exact path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .bernstein import (
    bernstein_aggregate,
    multi_indices,
    tensor_apply_inverse,
    _check_dims,
    _inverse_float,
)
from .errors import DomainError, UndefinedStatisticError
from .noise import NoiseSource
from .stats import (
    CENTERED_FOURTH_RANGE,
    CENTERED_THIRD_RANGE,
    CORRELATION_RANGE,
    COVARIANCE_RANGE,
    VARIANCE_RANGE,
    ClipRange,
    Dataset,
    centered_moment_exact,
    clip,
    correlation_exact,
    covariance_exact,
    moments_unnormalized,
    ratio_covariance,
    ratio_variance,
    standardized_moment,
    variance_exact,
)

# Noisy counts closer to zero than this are treated as degenerate: the
# mechanism returns the midpoint of its clip range instead of dividing.
_TINY_COUNT = 1e-9
# Product of noisy variances below this makes a correlation ratio meaningless.
_TINY_VARPROD = 1e-12


@dataclass(frozen=True)
class Estimate:
    """One private release: the value plus its audit trail."""

    value: float
    mechanism_id: str
    epsilon: float
    clip_applied: ClipRange | None
    noisy_aggregates: dict[str, float] = field(default_factory=dict)


class PreparedMechanism:
    """A mechanism bound to one dataset; `run` draws fresh noise each call."""

    __slots__ = ("mechanism_id", "clip_range", "exact_value", "_fn")

    def __init__(self, mechanism_id, clip_range, exact_value, fn):
        self.mechanism_id = mechanism_id
        self.clip_range = clip_range
        self.exact_value = exact_value
        self._fn = fn

    def run_value(self, eps: float, source: NoiseSource) -> float:
        """Fast path: just the released value (Monte Carlo hot loop)."""
        eps = float(eps)
        if not eps > 0.0:
            raise DomainError(f"epsilon must be > 0, got {eps}")
        return float(self._fn(eps, source, False)[0])

    def run(self, eps: float, source: NoiseSource) -> Estimate:
        eps = float(eps)
        if not eps > 0.0:
            raise DomainError(f"epsilon must be > 0, got {eps}")
        val, aggs = self._fn(eps, source, True)
        return Estimate(
            value=float(val),
            mechanism_id=self.mechanism_id,
            epsilon=eps,
            clip_applied=self.clip_range,
            noisy_aggregates={k: float(v) for k, v in aggs.items()},
        )


def _try_exact(fn, data):
    try:
        return fn(data)
    except UndefinedStatisticError:
        return None


def _check_stat(stat: str) -> str:
    if stat not in ("variance", "covariance"):
        raise DomainError(f"stat must be 'variance' or 'covariance', got {stat!r}")
    return stat


# ---------------------------------------------------------------------------
# swap-model baseline
# ---------------------------------------------------------------------------

def _prepare_swap(data: Dataset, stat: str, clip_output: bool) -> PreparedMechanism:
    stat = _check_stat(stat)
    if stat == "variance":
        exact = variance_exact(data)  # raises for empty data: swap needs n >= 1
        rng = VARIANCE_RANGE
    else:
        exact = covariance_exact(data)
        rng = COVARIANCE_RANGE
    n = float(data.n)

    def _run(eps, src, want):
        z = src.laplace(1.0 / eps)
        val = exact + z / n
        if clip_output:
            val = clip(val, rng)
        aggs = {"stat~": exact + z / n} if want else None
        return val, aggs

    return PreparedMechanism(
        f"swap_{stat}", rng if clip_output else None, exact, _run
    )


def swap_laplace(
    data: Dataset,
    stat: str,
    eps: float,
    source: NoiseSource,
    clip_output: bool = False,
) -> Estimate:
    """Swap-model Laplace baseline: exact statistic + (1/n) Lap(1/eps)."""
    return _prepare_swap(data, stat, clip_output).run(eps, source)


# ---------------------------------------------------------------------------
# naive add-remove baselines: independent noise on every raw aggregate
# ---------------------------------------------------------------------------

def _prepare_naive_variance(data: Dataset) -> PreparedMechanism:
    s = moments_unnormalized(data, 2)
    n, s1, s2 = float(s[0]), float(s[1]), float(s[2])
    exact = _try_exact(variance_exact, data)

    def _run(eps, src, want):
        z = src.laplace_vector(3.0 / eps, 3)  # order: count, sum x, sum x^2
        nn = n + z[0]
        sx = s1 + z[1]
        sq = s2 + z[2]
        if abs(nn) < _TINY_COUNT:
            val = 0.5 * (VARIANCE_RANGE.lo + VARIANCE_RANGE.hi)
        else:
            val = clip(ratio_variance(nn, sx, sq), VARIANCE_RANGE)
        aggs = {"n~": nn, "s_x~": sx, "s_x2~": sq} if want else None
        return val, aggs

    return PreparedMechanism("naive_variance", VARIANCE_RANGE, exact, _run)


def _prepare_naive_covariance(data: Dataset) -> PreparedMechanism:
    if data.d != 2:
        raise DomainError(f"covariance needs d=2 data, got d={data.d}")
    x, y = data.column(0), data.column(1)
    n = float(data.n)
    sx, sy, sxy = float(np.sum(x)), float(np.sum(y)), float(np.sum(x * y))
    exact = _try_exact(covariance_exact, data)

    def _run(eps, src, want):
        z = src.laplace_vector(4.0 / eps, 4)  # order: count, sum x, sum y, sum xy
        nn = n + z[0]
        ax = sx + z[1]
        ay = sy + z[2]
        axy = sxy + z[3]
        if abs(nn) < _TINY_COUNT:
            val = 0.0
        else:
            val = clip(ratio_covariance(nn, ax, ay, axy), COVARIANCE_RANGE)
        aggs = {"n~": nn, "s_x~": ax, "s_y~": ay, "s_xy~": axy} if want else None
        return val, aggs

    return PreparedMechanism("naive_covariance", COVARIANCE_RANGE, exact, _run)


def naive_add_remove(
    data: Dataset, stat: str, eps: float, source: NoiseSource
) -> Estimate:
    """Add-remove baseline: Lap(m/eps) on each of the m raw aggregates."""
    stat = _check_stat(stat)
    if stat == "variance":
        return _prepare_naive_variance(data).run(eps, source)
    return _prepare_naive_covariance(data).run(eps, source)


# ---------------------------------------------------------------------------
# improved add-remove baseline: count + unnormalized statistic
# ---------------------------------------------------------------------------

def _prepare_improved(data: Dataset, stat: str) -> PreparedMechanism:
    stat = _check_stat(stat)
    if stat == "variance":
        rng = VARIANCE_RANGE
        exact = _try_exact(variance_exact, data)
    else:
        if data.d != 2:
            raise DomainError(f"covariance needs d=2 data, got d={data.d}")
        rng = COVARIANCE_RANGE
        exact = _try_exact(covariance_exact, data)
    n = float(data.n)
    v = exact if exact is not None else 0.0
    u = n * v
    mid = 0.5 * (rng.lo + rng.hi)

    def _run(eps, src, want):
        z = src.laplace_vector(2.0 / eps, 2)  # order: count, unnormalized stat
        nn = n + z[0]
        if abs(nn) < _TINY_COUNT:
            val = mid
        else:
            # (u + z_u) / (n + z_n) rewritten so zero noise returns v exactly
            val = clip(v + (z[1] - v * z[0]) / nn, rng)
        aggs = {"n~": nn, "u~": u + z[1]} if want else None
        return val, aggs

    return PreparedMechanism(f"improved_{stat}", rng, exact, _run)


def improved_add_remove(
    data: Dataset, stat: str, eps: float, source: NoiseSource
) -> Estimate:
    """Add-remove baseline with only two aggregates: count and n * statistic."""
    return _prepare_improved(data, stat).run(eps, source)


# ---------------------------------------------------------------------------
# Bernstein-basis mechanisms
# ---------------------------------------------------------------------------

def _prepare_bezier_variance(data: Dataset) -> PreparedMechanism:
    s = moments_unnormalized(data, 2)
    n, s1, s2 = float(s[0]), float(s[1]), float(s[2])
    exact = _try_exact(variance_exact, data)
    # degree-2 basis aggregate, kept for the audit trail
    b0, b1, b2 = n - 2.0 * s1 + s2, 2.0 * (s1 - s2), s2

    def _run(eps, src, want):
        z = src.laplace_vector(1.0 / eps, 3)  # order: basis cells 0, 1, 2
        zn = z[0] + z[1] + z[2]
        zx = 0.5 * z[1] + z[2]
        zq = z[2]
        nn = n + zn
        if abs(nn) < _TINY_COUNT:
            val = 0.5 * (VARIANCE_RANGE.lo + VARIANCE_RANGE.hi)
        else:
            val = clip(ratio_variance(nn, s1 + zx, s2 + zq), VARIANCE_RANGE)
        aggs = (
            {
                "b_0~": b0 + z[0],
                "b_1~": b1 + z[1],
                "b_2~": b2 + z[2],
                "n~": nn,
                "s_x~": s1 + zx,
                "s_x2~": s2 + zq,
            }
            if want
            else None
        )
        return val, aggs

    return PreparedMechanism("bezier_variance", VARIANCE_RANGE, exact, _run)


def bezier_variance(data: Dataset, eps: float, source: NoiseSource) -> Estimate:
    """Variance from a degree-2 Bernstein aggregate with unit L1 sensitivity."""
    return _prepare_bezier_variance(data).run(eps, source)


def _cov_runner(n, sx, sy, sxy, out_range, mechanism_id, exact):
    """Shared core of the basis covariance mechanism, parametrized by sums."""
    b00 = n - sx - sy + sxy
    b01 = sy - sxy
    b10 = sx - sxy
    b11 = sxy

    def _run(eps, src, want):
        z = src.laplace_vector(1.0 / eps, 4)  # cells (0,0), (0,1), (1,0), (1,1)
        nn = n + (z[0] + z[1] + z[2] + z[3])
        ax = sx + (z[2] + z[3])
        ay = sy + (z[1] + z[3])
        axy = sxy + z[3]
        if abs(nn) < _TINY_COUNT:
            val = 0.0
        else:
            val = clip(ratio_covariance(nn, ax, ay, axy), COVARIANCE_RANGE)
        if out_range is not COVARIANCE_RANGE:
            val = clip(val, out_range)
        aggs = (
            {
                "b_{0,0}~": b00 + z[0],
                "b_{0,1}~": b01 + z[1],
                "b_{1,0}~": b10 + z[2],
                "b_{1,1}~": b11 + z[3],
                "n~": nn,
                "s_x~": ax,
                "s_y~": ay,
                "s_xy~": axy,
            }
            if want
            else None
        )
        return val, aggs

    return PreparedMechanism(mechanism_id, out_range, exact, _run)


def _prepare_bezier_covariance(data: Dataset) -> PreparedMechanism:
    if data.d != 2:
        raise DomainError(f"covariance needs d=2 data, got d={data.d}")
    x, y = data.column(0), data.column(1)
    n = float(data.n)
    sx, sy, sxy = float(np.sum(x)), float(np.sum(y)), float(np.sum(x * y))
    exact = _try_exact(covariance_exact, data)
    return _cov_runner(n, sx, sy, sxy, COVARIANCE_RANGE, "bezier_covariance", exact)


def bezier_covariance(data: Dataset, eps: float, source: NoiseSource) -> Estimate:
    """Covariance from a 2x2 tensor Bernstein aggregate, unit L1 sensitivity."""
    return _prepare_bezier_covariance(data).run(eps, source)


def _prepare_variance_via_covariance(data: Dataset) -> PreparedMechanism:
    s = moments_unnormalized(data, 2)
    n, s1, s2 = float(s[0]), float(s[1]), float(s[2])
    exact = _try_exact(variance_exact, data)
    # duplicate the column: cov(x, x) = var(x), then clamp to the variance range
    return _cov_runner(
        n, s1, s1, s2, VARIANCE_RANGE, "variance_via_covariance", exact
    )


def variance_via_covariance(data: Dataset, eps: float, source: NoiseSource) -> Estimate:
    """Variance read off the covariance mechanism with a duplicated column."""
    return _prepare_variance_via_covariance(data).run(eps, source)


def _prepare_transformed_variance(data: Dataset) -> PreparedMechanism:
    if data.d != 1:
        raise DomainError(f"variance needs d=1 data, got d={data.d}")
    n = float(data.n)
    exact = _try_exact(variance_exact, data)
    v = exact if exact is not None else 0.0
    u = n * v

    def _run(eps, src, want):
        z = src.laplace_vector(1.0 / eps, 2)  # cells: n - u, u
        zt = z[0] + z[1]
        nn = n + zt
        if abs(nn) < _TINY_COUNT:
            val = 0.5 * (VARIANCE_RANGE.lo + VARIANCE_RANGE.hi)
        else:
            val = clip(v + (z[1] - v * zt) / nn, VARIANCE_RANGE)
        aggs = (
            {"b_0~": (n - u) + z[0], "b_1~": u + z[1], "n~": nn, "u~": u + z[1]}
            if want
            else None
        )
        return val, aggs

    return PreparedMechanism("transformed_variance", VARIANCE_RANGE, exact, _run)


def transformed_variance(data: Dataset, eps: float, source: NoiseSource) -> Estimate:
    """Two-cell release of (n - u, u), u = n * variance; unit L1 sensitivity."""
    return _prepare_transformed_variance(data).run(eps, source)


# ---------------------------------------------------------------------------
# full basis release and general post-processed statistics
# ---------------------------------------------------------------------------

class PreparedMomentRelease:
    """Degree-k, dimension-d Bernstein release bound to one dataset."""

    __slots__ = ("k", "d", "aggregate", "_inv1")

    def __init__(self, data: Dataset, k: int, d: int):
        k, d = _check_dims(k, d)
        if data.d != d:
            raise DomainError(f"release with d={d} needs d={d} data, got d={data.d}")
        self.k = k
        self.d = d
        self.aggregate = bernstein_aggregate(data.values, k)
        self._inv1 = _inverse_float(k) if d == 1 else None

    def release_full(self, eps, source):
        """(recovered power-sum vector, noisy basis aggregate)."""
        eps = float(eps)
        if not eps > 0.0:
            raise DomainError(f"epsilon must be > 0, got {eps}")
        z = source.laplace_vector(1.0 / eps, self.aggregate.shape[0])
        noisy = self.aggregate + z
        if self._inv1 is not None:
            return self._inv1 @ noisy, noisy
        return tensor_apply_inverse(self.k, self.d, noisy), noisy

    def release(self, eps, source) -> np.ndarray:
        return self.release_full(eps, source)[0]


def prepare_moment_release(data: Dataset, k: int, d: int = 1) -> PreparedMomentRelease:
    return PreparedMomentRelease(data, k, d)


def bezier_release(
    data: Dataset, k: int, d: int, eps: float, source: NoiseSource
) -> np.ndarray:
    """All mixed power sums up to degree k under a single unit budget.

    Adds Lap(1/eps) to every cell of the (k+1)^d Bernstein aggregate and maps
    back to power sums.  Entry order matches `multi_indices(k, d)`.
    """
    return prepare_moment_release(data, k, d).release(eps, source)


def _agg_key(prefix: str, alpha: tuple[int, ...]) -> str:
    if len(alpha) == 1:
        return f"{prefix}_{alpha[0]}~"
    return f"{prefix}_{{{','.join(str(a) for a in alpha)}}}~"


def _prepare_moment_statistic(data: Dataset, k, j) -> PreparedMechanism:
    if k is None or j is None:
        raise DomainError("moment_release needs moment_k and moment_j")
    rel = prepare_moment_release(data, int(k), 1)
    j = int(j)
    if not 0 <= j <= rel.k:
        raise DomainError(f"moment order must lie in [0, {rel.k}], got {j}")
    exact = float(moments_unnormalized(data, rel.k)[j])

    def _run(eps, src, want):
        mu, noisy = rel.release_full(eps, src)
        val = mu[j]
        if not want:
            return val, None
        aggs = {}
        for i in range(rel.k + 1):
            aggs[_agg_key("b", (i,))] = noisy[i]
        for i in range(rel.k + 1):
            aggs[_agg_key("mu", (i,))] = mu[i]
        return val, aggs

    return PreparedMechanism("moment_release", None, exact, _run)


@dataclass(frozen=True)
class GeneralStatistic:
    """A statistic computed by post-processing a full basis release.

    `post_process` receives the recovered power-sum vector (flat, in
    `multi_indices(k, d)` order) and returns the statistic.  `exact_fn`, when
    given, computes the non-private truth for benchmarking.
    """

    name: str
    k: int
    d: int
    post_process: Callable[[np.ndarray], float]
    clip: ClipRange | None = None
    exact_fn: Callable[[Dataset], float] | None = None


def _prepare_general(data: Dataset, stat: GeneralStatistic) -> PreparedMechanism:
    rel = prepare_moment_release(data, stat.k, stat.d)
    exact = _try_exact(stat.exact_fn, data) if stat.exact_fn is not None else None
    idx = multi_indices(stat.k, stat.d)

    def _run(eps, src, want):
        mu, noisy = rel.release_full(eps, src)
        val = float(stat.post_process(mu))
        if stat.clip is not None:
            val = clip(val, stat.clip)
        if not want:
            return val, None
        aggs = {}
        for alpha, b in zip(idx, noisy):
            aggs[_agg_key("b", alpha)] = b
        for alpha, m in zip(idx, mu):
            aggs[_agg_key("mu", alpha)] = m
        return val, aggs

    return PreparedMechanism(stat.name, stat.clip, exact, _run)


def general_statistic(
    data: Dataset, stat: GeneralStatistic, eps: float, source: NoiseSource
) -> Estimate:
    """Release any statistic expressible from the power sums of one basis call."""
    return _prepare_general(data, stat).run(eps, source)


# -- built-in general statistics -------------------------------------------

def _corr_post(mu: np.ndarray) -> float:
    # layout for k=2, d=2: flat index = 3 * a_x + a_y
    nn = mu[0]
    if abs(nn) < _TINY_COUNT:
        return 0.0
    vx = ratio_variance(nn, mu[3], mu[6])
    vy = ratio_variance(nn, mu[1], mu[2])
    c = ratio_covariance(nn, mu[3], mu[1], mu[4])
    if vx <= 0.0 or vy <= 0.0:
        return 0.0
    prod = vx * vy
    if prod <= _TINY_VARPROD:
        return 0.0
    return c / math.sqrt(prod)


def correlation_statistic() -> GeneralStatistic:
    """Pearson correlation from one degree-2, dimension-2 basis release."""
    return GeneralStatistic(
        name="correlation_bezier",
        k=2,
        d=2,
        post_process=_corr_post,
        clip=CORRELATION_RANGE,
        exact_fn=correlation_exact,
    )


def _central_moments(mu: np.ndarray, upto: int):
    nn = mu[0]
    m = mu[1] / nn
    out = {1: m}
    if upto >= 2:
        out[2] = mu[2] / nn - m * m
    if upto >= 3:
        out[3] = mu[3] / nn - 3.0 * m * (mu[2] / nn) + 2.0 * m**3
    if upto >= 4:
        out[4] = (
            mu[4] / nn
            - 4.0 * m * (mu[3] / nn)
            + 6.0 * m * m * (mu[2] / nn)
            - 3.0 * m**4
        )
    return out


def _skew_post(mu: np.ndarray) -> float:
    if abs(mu[0]) < _TINY_COUNT:
        return 0.0
    cm = _central_moments(mu, 3)
    if cm[2] <= _TINY_VARPROD:
        return 0.0
    return cm[3] / cm[2] ** 1.5


def _kurt_post(mu: np.ndarray) -> float:
    if abs(mu[0]) < _TINY_COUNT:
        return 0.0
    cm = _central_moments(mu, 4)
    if cm[2] <= _TINY_VARPROD:
        return 0.0
    return cm[4] / cm[2] ** 2


def skewness_statistic() -> GeneralStatistic:
    return GeneralStatistic(
        name="skewness",
        k=3,
        d=1,
        post_process=_skew_post,
        clip=None,
        exact_fn=lambda data: standardized_moment(data, 3),
    )


def kurtosis_statistic() -> GeneralStatistic:
    return GeneralStatistic(
        name="kurtosis",
        k=4,
        d=1,
        post_process=_kurt_post,
        clip=None,
        exact_fn=lambda data: standardized_moment(data, 4),
    )


def centered_moment_statistic(order: int) -> GeneralStatistic:
    """Central moment E[(x - mean)^order] for order 3 or 4, range-clipped."""
    if order == 3:
        rng = CENTERED_THIRD_RANGE

        def post(mu):
            if abs(mu[0]) < _TINY_COUNT:
                return 0.5 * (rng.lo + rng.hi)
            return _central_moments(mu, 3)[3]

    elif order == 4:
        rng = CENTERED_FOURTH_RANGE

        def post(mu):
            if abs(mu[0]) < _TINY_COUNT:
                return 0.5 * (rng.lo + rng.hi)
            return _central_moments(mu, 4)[4]

    else:
        raise DomainError(f"centered moment supports order 3 or 4, got {order}")
    return GeneralStatistic(
        name=f"centered_moment_{order}",
        k=order,
        d=1,
        post_process=post,
        clip=rng,
        exact_fn=lambda data: centered_moment_exact(data, order),
    )


# ---------------------------------------------------------------------------
# correlation pipelines
# ---------------------------------------------------------------------------

def _prepare_correlation_bezier(data: Dataset) -> PreparedMechanism:
    return _prepare_general(data, correlation_statistic())


def _prepare_correlation_composed(data: Dataset) -> PreparedMechanism:
    if data.d != 2:
        raise DomainError(f"correlation needs d=2 data, got d={data.d}")
    pc = _prepare_bezier_covariance(data)
    px = _prepare_bezier_variance(data.univariate(0))
    py = _prepare_bezier_variance(data.univariate(1))
    exact = _try_exact(correlation_exact, data)

    def _run(eps, src, want):
        sub = eps / 3.0  # budget split across the three releases
        c, _ = pc._fn(sub, src, False)
        vx, _ = px._fn(sub, src, False)
        vy, _ = py._fn(sub, src, False)
        prod = vx * vy
        if prod <= _TINY_VARPROD:
            val = 0.0
        else:
            val = clip(c / math.sqrt(prod), CORRELATION_RANGE)
        aggs = {"c~": c, "v_x~": vx, "v_y~": vy} if want else None
        return val, aggs

    return PreparedMechanism("correlation_composed", CORRELATION_RANGE, exact, _run)


def correlation_composed(data: Dataset, eps: float, source: NoiseSource) -> Estimate:
    """Correlation from three separate basis releases, each on budget eps/3."""
    return _prepare_correlation_composed(data).run(eps, source)


def _prepare_correlation_naive(data: Dataset) -> PreparedMechanism:
    if data.d != 2:
        raise DomainError(f"correlation needs d=2 data, got d={data.d}")
    x, y = data.column(0), data.column(1)
    n = float(data.n)
    sx, sy = float(np.sum(x)), float(np.sum(y))
    sxx, syy = float(np.sum(x * x)), float(np.sum(y * y))
    sxy = float(np.sum(x * y))
    exact = _try_exact(correlation_exact, data)

    def _run(eps, src, want):
        # order: count, sum x, sum y, sum x^2, sum y^2, sum xy
        z = src.laplace_vector(6.0 / eps, 6)
        nn = n + z[0]
        if abs(nn) < _TINY_COUNT:
            return 0.0, ({"n~": nn} if want else None)
        ax, ay = sx + z[1], sy + z[2]
        vx = ratio_variance(nn, ax, sxx + z[3])
        vy = ratio_variance(nn, ay, syy + z[4])
        c = ratio_covariance(nn, ax, ay, sxy + z[5])
        if vx <= 0.0 or vy <= 0.0 or vx * vy <= _TINY_VARPROD:
            val = 0.0
        else:
            val = clip(c / math.sqrt(vx * vy), CORRELATION_RANGE)
        aggs = (
            {
                "n~": nn,
                "s_x~": ax,
                "s_y~": ay,
                "s_x2~": sxx + z[3],
                "s_y2~": syy + z[4],
                "s_xy~": sxy + z[5],
            }
            if want
            else None
        )
        return val, aggs

    return PreparedMechanism("correlation_naive", CORRELATION_RANGE, exact, _run)


def correlation_naive(data: Dataset, eps: float, source: NoiseSource) -> Estimate:
    """Correlation from six independently noised raw sums (budget eps/6 each)."""
    return _prepare_correlation_naive(data).run(eps, source)


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

_FACTORIES: dict[str, Callable[[Dataset], PreparedMechanism]] = {
    "swap_variance": lambda d: _prepare_swap(d, "variance", False),
    "swap_covariance": lambda d: _prepare_swap(d, "covariance", False),
    "naive_variance": _prepare_naive_variance,
    "naive_covariance": _prepare_naive_covariance,
    "improved_variance": lambda d: _prepare_improved(d, "variance"),
    "improved_covariance": lambda d: _prepare_improved(d, "covariance"),
    "bezier_variance": _prepare_bezier_variance,
    "bezier_covariance": _prepare_bezier_covariance,
    "variance_via_covariance": _prepare_variance_via_covariance,
    "transformed_variance": _prepare_transformed_variance,
    "correlation_bezier": _prepare_correlation_bezier,
    "correlation_composed": _prepare_correlation_composed,
    "correlation_naive": _prepare_correlation_naive,
}

MECHANISM_IDS = tuple(sorted(_FACTORIES)) + ("moment_release",)


def prepare(
    mechanism_id: str,
    data: Dataset,
    moment_k: int | None = None,
    moment_j: int | None = None,
) -> PreparedMechanism:
    """Bind a mechanism to a dataset for repeated releases."""
    if mechanism_id == "moment_release":
        return _prepare_moment_statistic(data, moment_k, moment_j)
    try:
        factory = _FACTORIES[mechanism_id]
    except KeyError:
        raise DomainError(f"unknown mechanism id {mechanism_id!r}") from None
    return factory(data)
