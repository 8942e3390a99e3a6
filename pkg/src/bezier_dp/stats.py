"""Datasets on the unit cube and their exact summary statistics.

Every record is a d-vector with coordinates in [0, 1].  Exact statistics are
clamped to their attainable ranges (variance in [0, 1/4], covariance in
[-1/4, 1/4], correlation in [-1, 1]) so that downstream comparisons never
see a value that float rounding pushed out of range.

The ratio kernels `ratio_variance` / `ratio_covariance` are shared verbatim
with the private mechanisms: running a mechanism with a zero noise source
reproduces the exact statistic bit for bit because both sides execute the
same float operations on the same aggregates.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import DomainError, UndefinedStatisticError


class ClipRange(NamedTuple):
    lo: float
    hi: float


VARIANCE_RANGE = ClipRange(0.0, 0.25)
COVARIANCE_RANGE = ClipRange(-0.25, 0.25)
CORRELATION_RANGE = ClipRange(-1.0, 1.0)
CENTERED_THIRD_RANGE = ClipRange(-0.25, 0.25)
CENTERED_FOURTH_RANGE = ClipRange(0.0, 0.25)


def clip(x: float, rng: ClipRange) -> float:
    """Clamp a scalar into a closed range (DomainError if lo > hi)."""
    lo, hi = float(rng[0]), float(rng[1])
    if lo > hi:
        raise DomainError(f"empty clip range [{lo}, {hi}]")
    x = float(x)
    if x < lo:
        return lo
    if x > hi:
        return hi
    return x


class Dataset:
    """Immutable (n, d) array of records with coordinates in [0, 1]."""

    __slots__ = ("values", "n", "d")

    def __init__(self, records, d: int | None = None):
        arr = np.asarray(records, dtype=np.float64)
        if arr.ndim == 1:
            arr = arr.reshape(-1, 1)
        if arr.ndim != 2:
            raise DomainError(f"records must form a 1-d or 2-d array, got shape {arr.shape}")
        if arr.shape[0] == 0:
            width = int(d) if d is not None else (arr.shape[1] or 1)
            arr = arr.reshape(0, width)
        if d is not None and arr.shape[1] != int(d):
            raise DomainError(f"expected {d} coordinate(s) per record, got {arr.shape[1]}")
        if arr.size and (not np.all(np.isfinite(arr)) or arr.min() < 0.0 or arr.max() > 1.0):
            raise DomainError("record coordinates must be finite and lie in [0, 1]")
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        self.values = arr
        self.n = arr.shape[0]
        self.d = arr.shape[1]

    @classmethod
    def empty(cls, d: int = 1) -> "Dataset":
        return cls(np.empty((0, int(d))), d=int(d))

    def column(self, i: int) -> np.ndarray:
        if not 0 <= i < self.d:
            raise DomainError(f"column index {i} out of range for d={self.d}")
        return self.values[:, i]

    def univariate(self, i: int = 0) -> "Dataset":
        """Single-column view of this dataset as a d=1 dataset."""
        return Dataset(self.values[:, i : i + 1], d=1)

    def __repr__(self) -> str:
        return f"Dataset(n={self.n}, d={self.d})"


def _require_dim(data: Dataset, d: int, what: str) -> None:
    if data.d != d:
        raise DomainError(f"{what} needs d={d} data, got d={data.d}")


def power_sums(xs: np.ndarray, k: int) -> np.ndarray:
    """[n, sum x, sum x^2, ..., sum x^k] as float64 (entry 0 is the count)."""
    if k < 0:
        raise DomainError(f"order must be >= 0, got {k}")
    xs = np.asarray(xs, dtype=np.float64)
    out = np.empty(k + 1, dtype=np.float64)
    out[0] = float(xs.shape[0])
    p = np.ones_like(xs)
    for j in range(1, k + 1):
        p = p * xs
        out[j] = np.sum(p)
    return out


def moments_unnormalized(data: Dataset, k: int) -> np.ndarray:
    """Unnormalized power sums (count, sum x, ..., sum x^k) of a d=1 dataset."""
    _require_dim(data, 1, "moments_unnormalized")
    return power_sums(data.column(0), k)


def ratio_variance(count: float, sum_x: float, sum_sq: float) -> float:
    """sum_sq/count - (sum_x/count)^2, shared by exact and noisy paths."""
    m = sum_x / count
    return sum_sq / count - m * m


def ratio_covariance(count: float, sum_x: float, sum_y: float, sum_xy: float) -> float:
    """sum_xy/count - (sum_x/count)(sum_y/count), shared by exact and noisy paths."""
    mx = sum_x / count
    my = sum_y / count
    return sum_xy / count - mx * my


def variance_exact(data: Dataset) -> float:
    """Population variance of a d=1 dataset, clamped to [0, 1/4]."""
    _require_dim(data, 1, "variance")
    if data.n < 1:
        raise UndefinedStatisticError("variance is undefined for an empty dataset")
    s = power_sums(data.column(0), 2)
    return clip(ratio_variance(s[0], s[1], s[2]), VARIANCE_RANGE)


def covariance_exact(data: Dataset) -> float:
    """Population covariance of a d=2 dataset, clamped to [-1/4, 1/4]."""
    _require_dim(data, 2, "covariance")
    if data.n < 1:
        raise UndefinedStatisticError("covariance is undefined for an empty dataset")
    x, y = data.column(0), data.column(1)
    n = float(data.n)
    return clip(
        ratio_covariance(n, np.sum(x), np.sum(y), np.sum(x * y)), COVARIANCE_RANGE
    )


def unnormalized_variance(data: Dataset) -> float:
    """n times the population variance; 0 for an empty dataset."""
    _require_dim(data, 1, "unnormalized variance")
    if data.n == 0:
        return 0.0
    return data.n * variance_exact(data)


def unnormalized_covariance(data: Dataset) -> float:
    """n times the population covariance; 0 for an empty dataset."""
    _require_dim(data, 2, "unnormalized covariance")
    if data.n == 0:
        return 0.0
    return data.n * covariance_exact(data)


def correlation_exact(data: Dataset) -> float:
    """Pearson correlation of a d=2 dataset, clamped to [-1, 1]."""
    _require_dim(data, 2, "correlation")
    if data.n < 1:
        raise UndefinedStatisticError("correlation is undefined for an empty dataset")
    vx = variance_exact(data.univariate(0))
    vy = variance_exact(data.univariate(1))
    if vx <= 0.0 or vy <= 0.0:
        raise UndefinedStatisticError(
            "correlation is undefined when a marginal variance is zero"
        )
    c = covariance_exact(data)
    return clip(c / np.sqrt(vx * vy), CORRELATION_RANGE)


def standardized_moment(data: Dataset, order: int) -> float:
    """Skewness (order=3) or excess-free kurtosis (order=4) of a d=1 dataset."""
    if order not in (3, 4):
        raise DomainError(f"standardized moment supports order 3 or 4, got {order}")
    _require_dim(data, 1, "standardized moment")
    if data.n < 1:
        raise UndefinedStatisticError("standardized moment needs a nonempty dataset")
    x = data.column(0)
    m = float(np.mean(x))
    c = x - m
    v = float(np.mean(c * c))
    if v <= 0.0:
        raise UndefinedStatisticError(
            "standardized moment is undefined when the variance is zero"
        )
    if order == 3:
        return float(np.mean(c**3)) / v**1.5
    return float(np.mean(c**4)) / v**2


def centered_moment_exact(data: Dataset, order: int) -> float:
    """Central moment E[(x - mean)^order] for order 3 or 4, clamped."""
    if order not in (3, 4):
        raise DomainError(f"centered moment supports order 3 or 4, got {order}")
    _require_dim(data, 1, "centered moment")
    if data.n < 1:
        raise UndefinedStatisticError("centered moment needs a nonempty dataset")
    x = data.column(0)
    c = x - float(np.mean(x))
    rng = CENTERED_THIRD_RANGE if order == 3 else CENTERED_FOURTH_RANGE
    return clip(float(np.mean(c**order)), rng)


def feasible_rxy_bounds(r_x: float, r_y: float) -> tuple[float, float]:
    """Attainable range of E[xy] for marginals with means r_x, r_y on [0, 1].

    Frechet bounds: max(0, r_x + r_y - 1) <= E[xy] <= min(r_x, r_y).
    """
    r_x, r_y = float(r_x), float(r_y)
    for name, r in (("r_x", r_x), ("r_y", r_y)):
        if not 0.0 <= r <= 1.0:
            raise DomainError(f"{name} must lie in [0, 1], got {r}")
    return (max(0.0, r_x + r_y - 1.0), min(r_x, r_y))
