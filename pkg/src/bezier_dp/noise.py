"""Deterministic, counter-based noise sources.

All randomness in the package flows through `NoiseSource`.  The seeded kind
is a counter-based SplitMix64 generator: output i is a pure function of
(seed, i), so a stream can be consumed one draw at a time or in vectorized
batches and the two paths produce bit-identical values.  That property is
what makes experiment results independent of batching and thread count.

Substreams for (trial, channel) pairs are derived by avalanche-mixing the
indices into the base seed, giving statistically independent streams without
any shared mutable state.

Uniform deviates are built from the top 53 bits as (bits + 0.5) * 2**-53 - 0.5,
which lies strictly inside (-1/2, 1/2); Laplace deviates use the inverse-CDF
map  x = -b * sign(u) * log1p(-2|u|),  which never evaluates log at 0.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError, ReplayExhaustedError

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX_A = 0xBF58476D1CE4E5B9
_MIX_B = 0x94D049BB133111EB
# Distinct odd multiplier for the channel coordinate of substream derivation.
_CHANNEL_MULT = 0xC2B2AE3D27D4EB4F

_U64_GAMMA = np.uint64(_GAMMA)
_U64_MIX_A = np.uint64(_MIX_A)
_U64_MIX_B = np.uint64(_MIX_B)

# Below this many draws a pure-Python loop beats numpy's per-call overhead.
_SCALAR_CUTOFF = 8

_SCALE = 2.0**-53


def _mix64(z: int) -> int:
    """SplitMix64 finalizer on a 64-bit integer."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * _MIX_A) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX_B) & _MASK64
    return z ^ (z >> 31)


def derive_seed(base_seed: int, trial_index: int, channel: int) -> int:
    """Collision-resistant 64-bit seed for one (trial, channel) substream."""
    if not isinstance(trial_index, (int, np.integer)) or trial_index < 0:
        raise DomainError(f"trial_index must be an integer >= 0, got {trial_index!r}")
    if not isinstance(channel, (int, np.integer)) or channel < 0:
        raise DomainError(f"channel must be an integer >= 0, got {channel!r}")
    h = _mix64((int(base_seed) + _GAMMA) & _MASK64)
    h = _mix64(h ^ (((int(trial_index) + 1) * _GAMMA) & _MASK64))
    h = _mix64(h ^ (((int(channel) + 1) * _CHANNEL_MULT) & _MASK64))
    return h


class NoiseSource:
    """Single-consumer stream of noise draws.

    Kinds:
      * ``seeded`` -- deterministic SplitMix64-based stream;
      * ``zero``   -- every draw is exactly 0.0 (debugging / exactness tests);
      * ``replay`` -- plays back a fixed list of values, then raises.

    Not thread-safe: each source is meant to be consumed by one owner.
    """

    __slots__ = ("kind", "_seed", "_counter", "_values", "_pos")

    def __init__(self, kind: str, seed: int = 0, values=None):
        if kind not in ("seeded", "zero", "replay"):
            raise DomainError(f"unknown noise source kind {kind!r}")
        self.kind = kind
        self._seed = int(seed) & _MASK64
        self._counter = 0
        self._values = None if values is None else [float(v) for v in values]
        self._pos = 0

    @classmethod
    def seeded(cls, seed: int) -> "NoiseSource":
        return cls("seeded", seed=seed)

    @classmethod
    def zero(cls) -> "NoiseSource":
        return cls("zero")

    @classmethod
    def replay(cls, values) -> "NoiseSource":
        return cls("replay", values=values)

    @property
    def draws(self) -> int:
        """Number of draws consumed so far."""
        if self.kind == "replay":
            return self._pos
        return self._counter

    # -- raw 64-bit outputs -------------------------------------------------

    def _bits_scalar(self, count: int) -> list[int]:
        s, c = self._seed, self._counter
        out = [_mix64(s + (c + i) * _GAMMA) for i in range(1, count + 1)]
        self._counter += count
        return out

    def _bits_vector(self, count: int) -> np.ndarray:
        idx = np.arange(self._counter + 1, self._counter + count + 1, dtype=np.uint64)
        self._counter += count
        with np.errstate(over="ignore"):
            z = np.uint64(self._seed) + idx * _U64_GAMMA
            z = (z ^ (z >> np.uint64(30))) * _U64_MIX_A
            z = (z ^ (z >> np.uint64(27))) * _U64_MIX_B
            return z ^ (z >> np.uint64(31))

    # -- uniforms -----------------------------------------------------------

    def uniforms(self, count: int) -> np.ndarray:
        """`count` uniforms strictly inside (-1/2, 1/2)."""
        if self.kind != "seeded":
            raise DomainError(f"uniforms are only defined for seeded sources, not {self.kind!r}")
        if count < 0:
            raise DomainError(f"count must be >= 0, got {count}")
        if count <= _SCALAR_CUTOFF:
            bits = self._bits_scalar(count)
            return np.array(
                [((b >> 11) + 0.5) * _SCALE - 0.5 for b in bits], dtype=np.float64
            )
        bits = self._bits_vector(count)
        return ((bits >> np.uint64(11)).astype(np.float64) + 0.5) * _SCALE - 0.5

    def uniforms01(self, count: int) -> np.ndarray:
        """`count` uniforms strictly inside (0, 1) (data-generation helper)."""
        return self.uniforms(count) + 0.5

    # -- Laplace draws ------------------------------------------------------

    def laplace(self, scale: float) -> float:
        """One centered Laplace draw with the given scale parameter b."""
        scale = float(scale)
        if not scale > 0.0:
            raise DomainError(f"Laplace scale must be > 0, got {scale}")
        if self.kind == "zero":
            self._counter += 1
            return 0.0
        if self.kind == "replay":
            return float(self._replay_take(1)[0])
        b = self._bits_scalar(1)[0]
        u = ((b >> 11) + 0.5) * _SCALE - 0.5
        # np.log1p (not math.log1p): keeps single draws bit-identical to
        # batched draws -- the two libm implementations differ by 1 ulp.
        mag = float(np.log1p(-2.0 * abs(u)))
        sign = 1.0 if u > 0.0 else -1.0
        return mag * sign * -scale

    def laplace_vector(self, scale: float, count: int) -> np.ndarray:
        """`count` i.i.d. centered Laplace draws with scale parameter b."""
        scale = float(scale)
        if not scale > 0.0:
            raise DomainError(f"Laplace scale must be > 0, got {scale}")
        if count < 0:
            raise DomainError(f"count must be >= 0, got {count}")
        if self.kind == "zero":
            self._counter += count
            return np.zeros(count, dtype=np.float64)
        if self.kind == "replay":
            return self._replay_take(count)
        if count <= _SCALAR_CUTOFF:
            bits = self._bits_scalar(count)
            u = np.array(
                [((b >> 11) + 0.5) * _SCALE - 0.5 for b in bits], dtype=np.float64
            )
        else:
            u = self.uniforms(count)
        out = np.log1p(-2.0 * np.abs(u))
        out *= np.sign(u)
        out *= -scale
        return out

    def _replay_take(self, count: int) -> np.ndarray:
        have = len(self._values) - self._pos
        if count > have:
            raise ReplayExhaustedError(
                f"replay source has {have} value(s) left but {count} were requested"
            )
        vals = self._values[self._pos : self._pos + count]
        self._pos += count
        return np.array(vals, dtype=np.float64)


def derive_substream(base_seed: int, trial_index: int, channel: int) -> NoiseSource:
    """Seeded source for one (trial, channel) cell of an experiment grid."""
    return NoiseSource.seeded(derive_seed(base_seed, trial_index, channel))


def laplace_sample(source: NoiseSource, scale: float) -> float:
    """Module-level convenience wrapper: one Laplace draw from `source`."""
    return source.laplace(scale)
