"""Sampling families for every distribution the generators draw from.

Each family is a small frozen parameter object; sampling functions take it,
the support size ``n`` where relevant, and an :class:`~satforge.rng.RngState`.
Index families yield 1-based indices.

Heavy-tailed families (Pareto, LogNormal) are discretized by drawing the
continuous value, flooring, and rejecting out-of-range results; after
``_MAX_RETRIES`` misses the draw falls back to uniform over the valid range.
The power law over a finite range is exact (normalized mass ``r**-beta``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .rng import RngState

_MAX_RETRIES = 64


@dataclass(frozen=True, slots=True)
class UniformIndex:
    """Uniform integers on [low, high]; high=None means the runtime support n."""

    low: int = 1
    high: int | None = None


@dataclass(frozen=True, slots=True)
class Pareto:
    shape: float
    scale: float

    def __post_init__(self) -> None:
        if self.shape <= 0 or self.scale <= 0:
            raise ValueError("Pareto shape and scale must be positive")


@dataclass(frozen=True, slots=True)
class PowerLaw:
    """Exact mass p(r) proportional to r**-beta on 1..n."""

    beta: float


@dataclass(frozen=True, slots=True)
class LogNormal:
    """exp(Normal(mu, sigma)) of the underlying normal, floored to an index."""

    mu: float
    sigma: float

    def __post_init__(self) -> None:
        if self.sigma < 0:
            raise ValueError("LogNormal sigma must be >= 0")


@dataclass(frozen=True, slots=True)
class NormalClipped:
    """Normal(mean, std) clipped into [lo, hi]; None bounds mean [1, n]."""

    mean: float
    std: float
    lo: float | None = None
    hi: float | None = None

    def __post_init__(self) -> None:
        if self.std < 0:
            raise ValueError("std must be >= 0")
        if self.lo is not None and self.hi is not None and not self.lo < self.hi:
            raise ValueError("NormalClipped requires lo < hi")


@dataclass(frozen=True, slots=True)
class Bernoulli:
    """P(+1) = p, P(-1) = 1-p, for polarity draws."""

    p: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"Bernoulli p must be in [0, 1], got {self.p}")


@dataclass(frozen=True, slots=True)
class WeightedCategorical:
    weights: tuple[float, ...]

    def __post_init__(self) -> None:
        if any(w < 0 for w in self.weights):
            raise ValueError("weights must be nonnegative")
        if not self.weights or sum(self.weights) <= 0:
            raise ValueError("at least one weight must be positive")


@dataclass(frozen=True, slots=True)
class UniformNonZeroBias:
    """Uniform over the 2**l - 1 length-l binary sequences with >= 1 one."""


@dataclass(frozen=True, slots=True)
class KMinusOneBias:
    """Uniform over length-l sequences with exactly l-1 ones ([1] when l=1)."""


@dataclass(frozen=True, slots=True)
class BloomWeights:
    """Weights over the carry choices {0, 1, 2}; normalized by their sum."""

    w0: float
    w1: float
    w2: float

    def __post_init__(self) -> None:
        if min(self.w0, self.w1, self.w2) < 0 or self.w0 + self.w1 + self.w2 <= 0:
            raise ValueError("bloom weights must be nonnegative with positive sum")


DistributionSpec = Union[
    UniformIndex,
    Pareto,
    PowerLaw,
    LogNormal,
    NormalClipped,
    Bernoulli,
    WeightedCategorical,
    UniformNonZeroBias,
    KMinusOneBias,
    BloomWeights,
]

_INDEX_KINDS = (UniformIndex, Pareto, PowerLaw, LogNormal, NormalClipped)


@dataclass(frozen=True, slots=True)
class ClauseRatioSpec:
    """Clause-to-variable ratio: Normal(mean, std) clipped into [lo, hi]."""

    mean: float
    std: float
    lo: float
    hi: float

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError("clip interval is empty")


_powerlaw_cdf_cache: dict[tuple[float, int], np.ndarray] = {}


def _powerlaw_cdf(beta: float, n: int) -> np.ndarray:
    key = (beta, n)
    table = _powerlaw_cdf_cache.get(key)
    if table is None:
        mass = np.arange(1, n + 1, dtype=np.float64) ** -beta
        table = np.cumsum(mass)
        table /= table[-1]
        if len(_powerlaw_cdf_cache) > 256:
            _powerlaw_cdf_cache.clear()
        _powerlaw_cdf_cache[key] = table
    return table


def _uniform_bounds(spec: UniformIndex, n: int) -> tuple[int, int]:
    lo = max(1, spec.low)
    hi = n if spec.high is None else min(spec.high, n)
    if lo > hi:
        raise ValueError(f"empty uniform range [{spec.low}, {spec.high}] within 1..{n}")
    return lo, hi


def _heavy_tail_draw(spec: DistributionSpec, rng: RngState) -> int:
    gen = rng.gen
    if isinstance(spec, Pareto):
        u = gen.random()
        while u <= 0.0:
            u = gen.random()
        return math.floor(spec.scale / u ** (1.0 / spec.shape))
    if isinstance(spec, LogNormal):
        return math.floor(math.exp(gen.normal(spec.mu, spec.sigma)))
    if isinstance(spec, NormalClipped):
        return round(gen.normal(spec.mean, spec.std))
    raise TypeError(spec)


def sample_var_index(spec: DistributionSpec, n: int, rng: RngState) -> int:
    """Draw one index in 1..n from an index family."""
    if n < 1:
        raise ValueError(f"support size must be >= 1, got {n}")
    if isinstance(spec, UniformIndex):
        lo, hi = _uniform_bounds(spec, n)
        return int(rng.gen.integers(lo, hi + 1))
    if isinstance(spec, PowerLaw):
        cdf = _powerlaw_cdf(spec.beta, n)
        return int(np.searchsorted(cdf, rng.gen.random(), side="right")) + 1
    if isinstance(spec, NormalClipped):
        lo = 1.0 if spec.lo is None else max(spec.lo, 1.0)
        hi = float(n) if spec.hi is None else min(spec.hi, float(n))
        value = min(max(rng.gen.normal(spec.mean, spec.std), lo), hi)
        return min(max(round(value), 1), n)
    if isinstance(spec, (Pareto, LogNormal)):
        for _ in range(_MAX_RETRIES):
            idx = _heavy_tail_draw(spec, rng)
            if 1 <= idx <= n:
                return idx
        return int(rng.gen.integers(1, n + 1))
    raise ValueError(f"{type(spec).__name__} is not an index family")


def sample_index_among(spec: DistributionSpec, candidates: np.ndarray, rng: RngState) -> int:
    """Draw one index from ``candidates`` (1-based ids), with the family's
    mass restricted and renormalized to that set."""
    count = len(candidates)
    if count == 0:
        raise ValueError("no candidates to sample from")
    if count == 1:
        return int(candidates[0])
    if isinstance(spec, UniformIndex):
        return int(candidates[rng.gen.integers(count)])
    if isinstance(spec, PowerLaw):
        mass = candidates.astype(np.float64) ** -spec.beta
        cdf = np.cumsum(mass)
        u = rng.gen.random() * cdf[-1]
        return int(candidates[np.searchsorted(cdf, u, side="right")])
    if isinstance(spec, (Pareto, LogNormal, NormalClipped)):
        allowed = set(int(c) for c in candidates)
        for _ in range(_MAX_RETRIES):
            idx = _heavy_tail_draw(spec, rng)
            if idx in allowed:
                return idx
        return int(candidates[rng.gen.integers(count)])
    raise ValueError(f"{type(spec).__name__} is not an index family")


def sample_unique_indices(spec: DistributionSpec, n: int, k: int, rng: RngState) -> list[int]:
    """Draw k pairwise-distinct indices in 1..n, one at a time, removing each
    drawn index and renormalizing before the next draw."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    if isinstance(spec, UniformIndex):
        lo, hi = _uniform_bounds(spec, n)
        span = hi - lo + 1
        if k > span:
            raise ValueError(f"cannot draw {k} unique indices from [{lo}, {hi}]")
        return [int(x) + lo for x in rng.gen.choice(span, size=k, replace=False)]
    if not isinstance(spec, _INDEX_KINDS):
        raise ValueError(f"{type(spec).__name__} is not an index family")
    remaining = np.arange(1, n + 1, dtype=np.int64)
    out: list[int] = []
    for _ in range(k):
        idx = sample_index_among(spec, remaining, rng)
        out.append(idx)
        remaining = remaining[remaining != idx]
    return out


def sample_bias_seq(spec: DistributionSpec, length: int, rng: RngState) -> np.ndarray:
    """Draw a 0/1 sequence of the given length containing at least one 1."""
    if length < 1:
        raise ValueError(f"bias sequence length must be >= 1, got {length}")
    if isinstance(spec, UniformNonZeroBias):
        while True:
            bits = rng.gen.integers(0, 2, size=length, dtype=np.int8)
            if bits.any():
                return bits
    if isinstance(spec, KMinusOneBias):
        bits = np.ones(length, dtype=np.int8)
        if length > 1:
            bits[rng.gen.integers(length)] = 0
        return bits
    raise ValueError(f"{type(spec).__name__} is not a bias-sequence family")


def sample_clause_width(spec: DistributionSpec, n: int, rng: RngState) -> int:
    """Literals-per-clause draw; whatever the family yields is clamped into
    [1, n] so clause construction stays total."""
    if n < 1:
        raise ValueError(f"variable count must be >= 1, got {n}")
    if isinstance(spec, UniformIndex):
        lo = max(1, spec.low)
        hi = spec.high if spec.high is not None else n
        hi = max(hi, lo)
        draw = int(rng.gen.integers(lo, hi + 1))
    elif isinstance(spec, NormalClipped):
        lo = 1.0 if spec.lo is None else spec.lo
        hi = float(n) if spec.hi is None else spec.hi
        draw = round(min(max(rng.gen.normal(spec.mean, spec.std), lo), hi))
    elif isinstance(spec, _INDEX_KINDS):
        draw = sample_var_index(spec, n, rng)
    else:
        raise ValueError(f"{type(spec).__name__} is not an index family")
    return min(max(draw, 1), n)


def sample_clause_count(ratio: ClauseRatioSpec, n: int, rng: RngState) -> int:
    """m = round(r * n) for r ~ Normal(mean, std) clipped into [lo, hi]."""
    if n < 1:
        raise ValueError(f"variable count must be >= 1, got {n}")
    r = rng.gen.normal(ratio.mean, ratio.std) if ratio.std > 0 else ratio.mean
    r = min(max(r, ratio.lo), ratio.hi)
    return max(1, round(r * n))


def sample_weighted(choices: WeightedCategorical, rng: RngState) -> int:
    """Pick index i with probability w_i / sum(w)."""
    cdf = np.cumsum(np.asarray(choices.weights, dtype=np.float64))
    u = rng.gen.random() * cdf[-1]
    return int(np.searchsorted(cdf, u, side="right"))


def sample_polarities(spec: Bernoulli, count: int, rng: RngState) -> np.ndarray:
    """Vector of +1/-1 polarities, +1 with probability p."""
    return np.where(rng.gen.random(count) < spec.p, 1, -1).astype(np.int8)


def sample_bloom_choices(spec: DistributionSpec, count: int, rng: RngState) -> np.ndarray:
    """Vector of carry choices in {0, 1, 2}."""
    if isinstance(spec, BloomWeights):
        weights = (spec.w0, spec.w1, spec.w2)
    elif isinstance(spec, WeightedCategorical) and len(spec.weights) == 3:
        weights = spec.weights
    else:
        raise ValueError(f"{type(spec).__name__} is not a bloom-choice family")
    cdf = np.cumsum(np.asarray(weights, dtype=np.float64))
    u = rng.gen.random(count) * cdf[-1]
    return np.searchsorted(cdf, u, side="right").astype(np.int8)


# -- config (de)serialization ------------------------------------------------

_KIND_BY_CLASS = {
    UniformIndex: "uniform",
    Pareto: "pareto",
    PowerLaw: "power_law",
    LogNormal: "log_normal",
    NormalClipped: "normal",
    Bernoulli: "bernoulli",
    WeightedCategorical: "categorical",
    UniformNonZeroBias: "uniform_nonzero_bias",
    KMinusOneBias: "k_minus_one_bias",
    BloomWeights: "bloom_weights",
}
_CLASS_BY_KIND = {v: k for k, v in _KIND_BY_CLASS.items()}


def spec_to_dict(spec: DistributionSpec) -> dict:
    kind = _KIND_BY_CLASS[type(spec)]
    out: dict = {"kind": kind}
    for slot in type(spec).__dataclass_fields__:
        value = getattr(spec, slot)
        if isinstance(value, tuple):
            value = list(value)
        out[slot] = value
    return out


def spec_from_dict(data: dict) -> DistributionSpec:
    data = dict(data)
    kind = data.pop("kind", None)
    cls = _CLASS_BY_KIND.get(kind)
    if cls is None:
        raise ValueError(f"unknown distribution kind {kind!r}")
    if "weights" in data:
        data["weights"] = tuple(data["weights"])
    return cls(**data)
