"""Monte Carlo benchmark harness: configs, data generation, reports.

Reproducibility contract: every noise draw in trial t of mechanism channel
ch comes from the substream (base_seed, t, ch), and synthetic data for trial
t from (base_seed, t, DATA_CHANNEL).  Per-trial squared errors are written
into preallocated slots indexed by trial and reduced in a fixed order, so a
report depends only on the config -- not on thread count or scheduling.

Report CSVs carry both the raw MSE and the normalized MSE n^2 * MSE; the
attached analytic predictions always live on the normalized scale.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DataFormatError
from .mechanisms import prepare
from .noise import NoiseSource, derive_seed, derive_substream
from .stats import Dataset
from .theory import predicted_normalized_mse
from .version import __version__

# Channel index reserved for data generation; mechanism channels are the
# (much smaller) positions of the mechanism in the config list.
DATA_CHANNEL = 1_000_003

_STAT_DIM = {"variance": 1, "moment": 1, "covariance": 2, "correlation": 2}

_COMPAT = {
    "variance": (
        "swap_variance",
        "naive_variance",
        "improved_variance",
        "bezier_variance",
        "variance_via_covariance",
        "transformed_variance",
    ),
    "covariance": (
        "swap_covariance",
        "naive_covariance",
        "improved_covariance",
        "bezier_covariance",
    ),
    "correlation": ("correlation_bezier", "correlation_composed", "correlation_naive"),
    "moment": ("moment_release",),
}

# Short names accepted anywhere a mechanism id is; the stat-dependent ones
# resolve against the configured statistic.
_PLAIN_ALIASES = {
    "naive_var": "naive_variance",
    "naive_cov": "naive_covariance",
    "improved_var": "improved_variance",
    "improved_cov": "improved_covariance",
    "bezier_var": "bezier_variance",
    "bezier_cov": "bezier_covariance",
    "via_cov": "variance_via_covariance",
    "transformed": "transformed_variance",
    "transformed_var": "transformed_variance",
    "swap_var": "swap_variance",
    "swap_cov": "swap_covariance",
    "composed": "correlation_composed",
    "moment": "moment_release",
}
_STAT_ALIASES = {
    "swap": {"variance": "swap_variance", "covariance": "swap_covariance"},
    "naive": {
        "variance": "naive_variance",
        "covariance": "naive_covariance",
        "correlation": "correlation_naive",
    },
    "improved": {"variance": "improved_variance", "covariance": "improved_covariance"},
    "bezier": {
        "variance": "bezier_variance",
        "covariance": "bezier_covariance",
        "correlation": "correlation_bezier",
    },
}


def resolve_mechanism(name: str, statistic: str) -> str:
    """Map a mechanism name or alias to its canonical id for a statistic."""
    if statistic not in _COMPAT:
        raise ConfigError(f"unknown statistic {statistic!r}")
    if name in _STAT_ALIASES:
        table = _STAT_ALIASES[name]
        if statistic not in table:
            raise ConfigError(
                f"alias {name!r} has no {statistic} form; use one of "
                f"{', '.join(_COMPAT[statistic])}"
            )
        return table[statistic]
    canonical = _PLAIN_ALIASES.get(name, name)
    if canonical not in _COMPAT[statistic]:
        raise ConfigError(
            f"mechanism {name!r} does not estimate {statistic}; choose from "
            f"{', '.join(_COMPAT[statistic])}"
        )
    return canonical


@dataclass
class ExperimentConfig:
    """Everything needed to reproduce one benchmark run."""

    mechanisms: list
    epsilons: list
    n: int = 100
    trials: int = 1000
    statistic: str = "variance"
    distribution: str = "uniform"
    dist_param: float | None = None
    csv_path: str | None = None
    moment_k: int | None = None
    moment_j: int | None = None
    base_seed: int = 0
    fixed_data: bool = True
    noise: str = "seeded"
    clip_input: bool = False
    threads: int | None = None
    output_path: str | None = None

    def normalized(self) -> "ExperimentConfig":
        """Validated copy with canonical mechanism ids (raises ConfigError)."""
        cfg = dataclasses.replace(self)
        if cfg.statistic not in _STAT_DIM:
            raise ConfigError(
                f"statistic must be one of {sorted(_STAT_DIM)}, got {cfg.statistic!r}"
            )
        if not cfg.mechanisms:
            raise ConfigError("at least one mechanism is required")
        cfg.mechanisms = [resolve_mechanism(m, cfg.statistic) for m in cfg.mechanisms]
        if not cfg.epsilons:
            raise ConfigError("at least one epsilon is required")
        cfg.epsilons = [float(e) for e in cfg.epsilons]
        for e in cfg.epsilons:
            if not (math.isfinite(e) and e > 0.0):
                raise ConfigError(f"epsilon must be finite and > 0, got {e}")
        if int(cfg.trials) < 1:
            raise ConfigError(f"trials must be >= 1, got {cfg.trials}")
        cfg.trials = int(cfg.trials)
        if cfg.statistic == "moment":
            if cfg.moment_k is None or cfg.moment_j is None:
                raise ConfigError("statistic 'moment' needs moment_k and moment_j")
            cfg.moment_k, cfg.moment_j = int(cfg.moment_k), int(cfg.moment_j)
            if cfg.moment_k < 1:
                raise ConfigError(f"moment_k must be >= 1, got {cfg.moment_k}")
            if not 0 <= cfg.moment_j <= cfg.moment_k:
                raise ConfigError(
                    f"moment_j must lie in [0, {cfg.moment_k}], got {cfg.moment_j}"
                )
        if cfg.distribution not in ("uniform", "beta", "correlated", "csv"):
            raise ConfigError(
                f"distribution must be uniform, beta, correlated or csv, "
                f"got {cfg.distribution!r}"
            )
        if cfg.distribution == "csv":
            if not cfg.csv_path:
                raise ConfigError("distribution 'csv' needs csv_path")
        else:
            if int(cfg.n) < 1:
                raise ConfigError(f"n must be >= 1 for synthetic data, got {cfg.n}")
            cfg.n = int(cfg.n)
        if cfg.distribution == "beta":
            if cfg.dist_param is None or not 0.0 < float(cfg.dist_param) < 1.0:
                raise ConfigError(
                    f"beta data needs a mean parameter in (0, 1), got {cfg.dist_param}"
                )
            cfg.dist_param = float(cfg.dist_param)
        if cfg.distribution == "correlated":
            if _STAT_DIM[cfg.statistic] != 2:
                raise ConfigError("correlated data needs a two-column statistic")
            if cfg.dist_param is None or not 0.0 <= float(cfg.dist_param) <= 1.0:
                raise ConfigError(
                    f"correlated data needs rho in [0, 1], got {cfg.dist_param}"
                )
            cfg.dist_param = float(cfg.dist_param)
        if cfg.noise not in ("seeded", "zero"):
            raise ConfigError(f"noise must be 'seeded' or 'zero', got {cfg.noise!r}")
        if cfg.threads is not None and int(cfg.threads) < 0:
            raise ConfigError(f"threads must be >= 0, got {cfg.threads}")
        cfg.base_seed = int(cfg.base_seed)
        return cfg

    def to_json_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_json_dict(cls, payload: dict) -> "ExperimentConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        extra = set(payload) - known
        if extra:
            raise ConfigError(f"unknown config key(s): {', '.join(sorted(extra))}")
        if "mechanisms" not in payload or "epsilons" not in payload:
            raise ConfigError("config needs 'mechanisms' and 'epsilons'")
        return cls(**payload)

    @classmethod
    def from_json_file(cls, path: str) -> "ExperimentConfig":
        try:
            with open(path) as fh:
                payload = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
        if not isinstance(payload, dict):
            raise ConfigError(f"config {path} must hold a JSON object")
        return cls.from_json_dict(payload)


def parse_distribution(text: str) -> tuple[str, float | None, str | None]:
    """Parse 'uniform' | 'beta:R' | 'correlated:RHO' | 'csv:PATH'."""
    if text == "uniform":
        return "uniform", None, None
    kind, sep, arg = text.partition(":")
    if not sep or not arg:
        raise ConfigError(
            f"distribution {text!r} not recognized; expected uniform, "
            "beta:R, correlated:RHO or csv:PATH"
        )
    if kind == "csv":
        return "csv", None, arg
    if kind in ("beta", "correlated"):
        try:
            return kind, float(arg), None
        except ValueError:
            raise ConfigError(f"bad numeric parameter in {text!r}") from None
    raise ConfigError(f"unknown distribution kind {kind!r}")


def statistic_dimension(statistic: str) -> int:
    try:
        return _STAT_DIM[statistic]
    except KeyError:
        raise ConfigError(f"unknown statistic {statistic!r}") from None


# ---------------------------------------------------------------------------
# synthetic data
# ---------------------------------------------------------------------------

def _normals(src: NoiseSource, count: int) -> np.ndarray:
    """Standard normals via Box-Muller from the source's open-(0,1) uniforms."""
    m = (count + 1) // 2
    u1 = src.uniforms01(m)
    u2 = src.uniforms01(m)
    r = np.sqrt(-2.0 * np.log(u1))
    ang = (2.0 * np.pi) * u2
    return np.concatenate([r * np.cos(ang), r * np.sin(ang)])[:count]


def _gamma_mt(src: NoiseSource, shape: float, count: int) -> np.ndarray:
    """Gamma(shape >= 1) via the Marsaglia-Tsang squeeze-free rejection."""
    dpar = shape - 1.0 / 3.0
    cpar = 1.0 / math.sqrt(9.0 * dpar)
    out = np.empty(count)
    filled = 0
    while filled < count:
        need = count - filled
        x = _normals(src, need)
        v = (1.0 + cpar * x) ** 3
        u = src.uniforms01(need)
        pos = v > 0.0
        safe_v = np.where(pos, v, 1.0)
        ok = pos & (np.log(u) < 0.5 * x * x + dpar * (1.0 - v + np.log(safe_v)))
        acc = dpar * v[ok]
        out[filled : filled + acc.shape[0]] = acc
        filled += acc.shape[0]
    return out


def _gamma(src: NoiseSource, shape: float, count: int) -> np.ndarray:
    if shape >= 1.0:
        return _gamma_mt(src, shape, count)
    # boost: Gamma(a) = Gamma(a + 1) * U^(1/a) for a < 1
    g = _gamma_mt(src, shape + 1.0, count)
    u = src.uniforms01(count)
    return g * u ** (1.0 / shape)


def _beta_column(src: NoiseSource, r: float, count: int) -> np.ndarray:
    """Beta(r/2, (1-r)/2) draws: mean r, variance (2/3) r (1-r)."""
    ga = _gamma(src, 0.5 * r, count)
    gb = _gamma(src, 0.5 * (1.0 - r), count)
    tot = ga + gb
    good = tot > 0.0
    return np.where(good, ga / np.where(good, tot, 1.0), r)


_RHO_TABLE: tuple[np.ndarray, np.ndarray] | None = None
_RHO_TABLE_SEED = 0x5EEDBA5E
_RHO_TABLE_SAMPLES = 40_000


def _rho_table() -> tuple[np.ndarray, np.ndarray]:
    """Monotone map width -> correlation for the additive-jitter pair model."""
    global _RHO_TABLE
    if _RHO_TABLE is None:
        widths = np.linspace(0.0, 8.0, 81)
        src = NoiseSource.seeded(_RHO_TABLE_SEED)
        corrs = np.empty_like(widths)
        corrs[0] = 1.0
        for i, w in enumerate(widths[1:], start=1):
            x = src.uniforms01(_RHO_TABLE_SAMPLES)
            u = src.uniforms01(_RHO_TABLE_SAMPLES)
            y = np.clip(x + (2.0 * u - 1.0) * w, 0.0, 1.0)
            cx = x - x.mean()
            cy = y - y.mean()
            corrs[i] = float(
                np.sum(cx * cy)
                / math.sqrt(float(np.sum(cx * cx)) * float(np.sum(cy * cy)))
            )
        corrs = np.minimum.accumulate(np.clip(corrs, 0.0, 1.0))
        _RHO_TABLE = (widths, corrs)
    return _RHO_TABLE


def _width_for_rho(rho: float) -> float:
    widths, corrs = _rho_table()
    lo = float(corrs[-1])
    if rho < lo:
        raise ConfigError(
            f"rho={rho} below the attainable range [{lo:.4f}, 1] of the "
            "jitter model; use rho=0 for independent columns"
        )
    return float(np.interp(rho, corrs[::-1], widths[::-1]))


def _correlated_pair(src: NoiseSource, rho: float, count: int) -> np.ndarray:
    x = src.uniforms01(count)
    if rho >= 1.0:
        y = x.copy()
    elif rho == 0.0:
        y = src.uniforms01(count)
    else:
        w = _width_for_rho(rho)
        u = src.uniforms01(count)
        y = np.clip(x + (2.0 * u - 1.0) * w, 0.0, 1.0)
    return np.column_stack([x, y])


def generate_dataset(cfg: ExperimentConfig, trial_seed: int) -> Dataset:
    """Synthetic dataset for one trial (csv configs load the file instead)."""
    d = statistic_dimension(cfg.statistic)
    if cfg.distribution == "csv":
        return load_csv_dataset(cfg.csv_path, clip_input=cfg.clip_input)
    src = NoiseSource.seeded(trial_seed)
    n = int(cfg.n)
    if cfg.distribution == "uniform":
        return Dataset(src.uniforms01(n * d).reshape(n, d), d=d)
    if cfg.distribution == "beta":
        cols = [_beta_column(src, float(cfg.dist_param), n) for _ in range(d)]
        return Dataset(np.column_stack(cols), d=d)
    if cfg.distribution == "correlated":
        return Dataset(_correlated_pair(src, float(cfg.dist_param), n), d=2)
    raise ConfigError(f"unknown distribution {cfg.distribution!r}")


def load_csv_dataset(path: str, clip_input: bool = False) -> Dataset:
    """Read a numeric CSV (optional header) into a Dataset.

    Cells must parse as floats in [0, 1] unless `clip_input` clamps them.
    Raises DataFormatError with the offending row on any problem.
    """
    try:
        with open(path, newline="") as fh:
            raw = [row for row in csv.reader(fh) if any(c.strip() for c in row)]
    except OSError as exc:
        raise DataFormatError(f"cannot read {path}: {exc}") from exc
    if not raw:
        raise DataFormatError(f"{path}: no data rows")

    def parse_row(row):
        try:
            return [float(c) for c in row]
        except ValueError:
            return None

    start = 0
    first = parse_row(raw[0])
    if first is None:
        if all(parse_row([c]) is None for c in raw[0]):
            start = 1  # header line
        else:
            raise DataFormatError(f"{path}: row 1 mixes numbers and labels")
    rows = []
    width = None
    for i, row in enumerate(raw[start:], start=start + 1):
        vals = parse_row(row)
        if vals is None:
            raise DataFormatError(f"{path}: row {i}: non-numeric cell in {row!r}")
        if width is None:
            width = len(vals)
        elif len(vals) != width:
            raise DataFormatError(
                f"{path}: row {i}: expected {width} column(s), got {len(vals)}"
            )
        rows.append(vals)
    if not rows:
        raise DataFormatError(f"{path}: no data rows after the header")
    arr = np.array(rows, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise DataFormatError(f"{path}: non-finite value in data")
    if clip_input:
        arr = np.clip(arr, 0.0, 1.0)
    elif arr.min() < 0.0 or arr.max() > 1.0:
        bad = np.argwhere((arr < 0.0) | (arr > 1.0))[0]
        raise DataFormatError(
            f"{path}: row {int(bad[0]) + start + 1}: value {arr[tuple(bad)]} outside "
            "[0, 1] (pass clip_input to clamp)"
        )
    return Dataset(arr)


# ---------------------------------------------------------------------------
# benchmark engine
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BenchmarkRow:
    mechanism: str
    epsilon: float
    n: int
    trials: int
    mse: float
    normalized_mse: float
    std_error: float
    analytic_prediction: float | None


@dataclass
class BenchmarkReport:
    config: ExperimentConfig
    rows: list
    trial_errors: dict | None = None

    def row_for(self, mechanism: str, eps: float) -> BenchmarkRow:
        for row in self.rows:
            if row.mechanism == mechanism and row.epsilon == float(eps):
                return row
        raise KeyError(f"no row for ({mechanism}, {eps})")

    def write_csv(self, path: str) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                [
                    "mechanism",
                    "epsilon",
                    "n",
                    "trials",
                    "mse",
                    "normalized_mse",
                    "std_error",
                    "analytic_prediction",
                ]
            )
            for row in self.rows:
                writer.writerow(
                    [
                        row.mechanism,
                        repr(row.epsilon),
                        row.n,
                        row.trials,
                        repr(row.mse),
                        repr(row.normalized_mse),
                        repr(row.std_error),
                        "" if row.analytic_prediction is None else repr(row.analytic_prediction),
                    ]
                )

    def write_config_sidecar(self, path: str) -> None:
        payload = {"config": self.config.to_json_dict(), "version": __version__}
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _resolve_threads(cfg: ExperimentConfig) -> int:
    if cfg.threads is not None:
        t = int(cfg.threads)
    else:
        envval = os.environ.get("BEZIER_DP_THREADS", "").strip()
        if not envval:
            return 1
        try:
            t = int(envval)
        except ValueError:
            raise ConfigError(
                f"BEZIER_DP_THREADS must be an integer, got {envval!r}"
            ) from None
        if t < 0:
            raise ConfigError(f"BEZIER_DP_THREADS must be >= 0, got {t}")
    return t if t > 0 else (os.cpu_count() or 1)


def _trial_blocks(trials: int, threads: int) -> list[tuple[int, int]]:
    per = max(1, -(-trials // max(1, threads * 8)))
    return [(t0, min(trials, t0 + per)) for t0 in range(0, trials, per)]


def run_benchmark(cfg: ExperimentConfig, keep_trial_errors: bool = False) -> BenchmarkReport:
    """Run the full mechanism x epsilon grid and aggregate squared errors."""
    cfg = cfg.normalized()
    threads = _resolve_threads(cfg)
    mechs, epss, trials = cfg.mechanisms, cfg.epsilons, cfg.trials
    zero_noise = cfg.noise == "zero"
    kw = {"moment_k": cfg.moment_k, "moment_j": cfg.moment_j}

    want_fixed = cfg.fixed_data or cfg.distribution == "csv"
    data0 = generate_dataset(cfg, derive_seed(cfg.base_seed, 0, DATA_CHANNEL))
    if data0.d != statistic_dimension(cfg.statistic):
        raise ConfigError(
            f"statistic {cfg.statistic!r} needs d={statistic_dimension(cfg.statistic)} "
            f"data, got d={data0.d}"
        )
    errors = {
        (m, e): np.zeros(trials, dtype=np.float64) for m in mechs for e in epss
    }

    def noise_source(t: int, channel: int) -> NoiseSource:
        if zero_noise:
            return NoiseSource.zero()
        return derive_substream(cfg.base_seed, t, channel)

    if want_fixed:
        prepared = {}
        for m in mechs:
            p = prepare(m, data0, **kw)
            if p.exact_value is None:
                raise ConfigError(
                    f"{cfg.statistic} is undefined on the benchmark dataset; "
                    f"cannot score {m}"
                )
            prepared[m] = p

        def work(block):
            t0, t1 = block
            for ch, m in enumerate(mechs):
                p = prepared[m]
                exact = p.exact_value
                for e in epss:
                    errs = errors[(m, e)]
                    for t in range(t0, t1):
                        diff = p.run_value(e, noise_source(t, ch)) - exact
                        errs[t] = diff * diff

    else:

        def work(block):
            t0, t1 = block
            for t in range(t0, t1):
                data_t = generate_dataset(cfg, derive_seed(cfg.base_seed, t, DATA_CHANNEL))
                for ch, m in enumerate(mechs):
                    p = prepare(m, data_t, **kw)
                    exact = p.exact_value
                    if exact is None:
                        raise ConfigError(
                            f"{cfg.statistic} undefined on the trial-{t} dataset"
                        )
                    for e in epss:
                        diff = p.run_value(e, noise_source(t, ch)) - exact
                        errors[(m, e)][t] = diff * diff

    blocks = _trial_blocks(trials, threads)
    if threads <= 1 or len(blocks) <= 1:
        for block in blocks:
            work(block)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(work, blocks))

    n_report = data0.n
    rows = []
    for m in mechs:
        for e in epss:
            errs = errors[(m, e)]
            mse = float(np.mean(errs))
            if trials >= 2:
                std_error = float(np.std(errs, ddof=1) / math.sqrt(trials))
            else:
                std_error = 0.0
            pred = predicted_normalized_mse(
                m, data0, e, moment_k=cfg.moment_k, moment_j=cfg.moment_j
            )
            rows.append(
                BenchmarkRow(
                    mechanism=m,
                    epsilon=float(e),
                    n=n_report,
                    trials=trials,
                    mse=mse,
                    normalized_mse=float(n_report**2) * mse,
                    std_error=std_error,
                    analytic_prediction=None if pred is None else float(pred),
                )
            )
    report = BenchmarkReport(
        config=cfg,
        rows=rows,
        trial_errors=errors if keep_trial_errors else None,
    )
    if cfg.output_path:
        report.write_csv(cfg.output_path)
        report.write_config_sidecar(cfg.output_path + ".config.json")
    return report


def run_estimate(
    data_path: str,
    mechanism: str,
    eps: float,
    seed: int = 0,
    noise: str = "seeded",
    clip_input: bool = False,
):
    """One private release from a CSV dataset (the CLI `estimate` path)."""
    if noise not in ("seeded", "zero"):
        raise ConfigError(f"noise must be 'seeded' or 'zero', got {noise!r}")
    data = load_csv_dataset(data_path, clip_input=clip_input)
    moment_k = moment_j = None
    name = mechanism
    if mechanism.startswith("moment:"):
        parts = mechanism.split(":")
        if len(parts) != 3:
            raise ConfigError("moment mechanism syntax is moment:K:J")
        try:
            moment_k, moment_j = int(parts[1]), int(parts[2])
        except ValueError:
            raise ConfigError("moment mechanism syntax is moment:K:J") from None
        name = "moment_release"
    elif mechanism in _STAT_ALIASES or mechanism in _PLAIN_ALIASES:
        stat = "variance" if data.d == 1 else "covariance"
        name = resolve_mechanism(mechanism, stat)
    src = NoiseSource.zero() if noise == "zero" else derive_substream(int(seed), 0, 0)
    prepared = prepare(name, data, moment_k=moment_k, moment_j=moment_j)
    return prepared.run(float(eps), src)
