"""Simulation harness: size/power estimation and null-law verification.

Every random draw comes from a counter-based scheme built on the SplitMix64
finalizer, so a draw is a pure function of (seed, domain, cell, counter):

    domain_key = mix64(seed + domain * DOMAIN_SALT)
    cell_key   = mix64(domain_key + (cell + 1) * STREAM_SALT)
    raw(k)     = mix64(cell_key + (k + 1) * GOLDEN)

Uniforms map the top 53 bits of raw into the open interval (0, 1).  Gaussian
variates use the Marsaglia polar method with per-cell rejection: attempt k of
a cell consumes raw values 2k and 2k+1, so a rejected pair never shifts the
stream of any other cell.  Results are therefore bit-identical no matter how
replicates are partitioned across workers, and two scenarios never share
draws (they live in different domains).

Scenario domains: 1 = response noise, 2 = design entries, 3 = Bernoulli
trials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

from .errors import DomainError, NumericError
from .specfun import beta_params, cdf, fisher_f, normal_critical, quantile, student_t

__all__ = [
    "Scenario",
    "SimConfig",
    "SizePowerResult",
    "simulate_size_power",
    "null_law_check",
]

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_DOMAIN_SALT = 0xD1B54A32D192ED03
_STREAM_SALT = 0x8CB92BA72F3D8DD7

_DOMAIN_NOISE = 1
_DOMAIN_DESIGN = 2
_DOMAIN_TRIALS = 3

# polar rejection accepts ~78.5% per attempt; 64 straight misses has
# probability ~1e-42 per cell and indicates a broken generator
_MAX_POLAR_ATTEMPTS = 64


def _mix64_int(x: int) -> int:
    x &= _MASK
    x ^= x >> 30
    x = (x * _MIX1) & _MASK
    x ^= x >> 27
    x = (x * _MIX2) & _MASK
    return x ^ (x >> 31)


def _mix64_arr(x: np.ndarray) -> np.ndarray:
    x = x.copy()
    x ^= x >> np.uint64(30)
    x *= np.uint64(_MIX1)
    x ^= x >> np.uint64(27)
    x *= np.uint64(_MIX2)
    x ^= x >> np.uint64(31)
    return x


def _cell_keys(seed: int, domain: int, start: int, count: int) -> np.ndarray:
    domain_key = _mix64_int(seed + domain * _DOMAIN_SALT)
    idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return _mix64_arr(np.uint64(domain_key) + idx * np.uint64(_STREAM_SALT))


def _raw(keys: np.ndarray, k: int) -> np.ndarray:
    offset = np.uint64((_GOLDEN * (k + 1)) & _MASK)
    with np.errstate(over="ignore"):
        return _mix64_arr(keys + offset)


def _to_unit(raw: np.ndarray) -> np.ndarray:
    # top 53 bits, offset by half a step: strictly inside (0, 1)
    return ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53


def uniform_cells(seed: int, domain: int, start: int, count: int) -> np.ndarray:
    """count uniforms on (0,1), one per cell, for cells [start, start+count)."""
    return _to_unit(_raw(_cell_keys(seed, domain, start, count), 0))


def normal_cells(seed: int, domain: int, start: int, count: int) -> np.ndarray:
    """count standard normals, one per cell, for cells [start, start+count)."""
    keys = _cell_keys(seed, domain, start, count)
    out = np.empty(count)
    pending = np.arange(count)
    k = 0
    while pending.size:
        if k >= _MAX_POLAR_ATTEMPTS:
            raise NumericError("polar rejection failed to terminate")
        v1 = 2.0 * _to_unit(_raw(keys[pending], 2 * k)) - 1.0
        v2 = 2.0 * _to_unit(_raw(keys[pending], 2 * k + 1)) - 1.0
        s = v1 * v1 + v2 * v2
        ok = (s > 0.0) & (s < 1.0)
        accepted = s[ok]
        out[pending[ok]] = v1[ok] * np.sqrt(-2.0 * np.log(accepted) / accepted)
        pending = pending[~ok]
        k += 1
    return out


class Scenario(Enum):
    ONE_SAMPLE_T = "one_sample_t"
    NESTED_F = "nested_f"
    PROPORTION = "proportion"


@dataclass(frozen=True)
class SimConfig:
    """Fully deterministic simulation settings.

    effect is the shift in sigma units for the t scenario, the coefficient
    scale on the tested block for the F scenario, and the offset added to p0
    for the proportion scenario.  p1/p2 only apply to NESTED_F, p0 only to
    PROPORTION.
    """

    replicates: int
    seed: int
    n: int
    scenario: Scenario
    effect: float = 0.0
    alpha: float = 0.05
    p1: int = 1
    p2: int = 1
    p0: float = 0.5

    def __post_init__(self) -> None:
        if not isinstance(self.replicates, int) or self.replicates < 1:
            raise DomainError(f"replicates must be a positive integer, got {self.replicates!r}")
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        if not 0.0 < self.alpha < 1.0:
            raise DomainError(f"alpha must lie in (0, 1), got {self.alpha!r}")
        if not math.isfinite(self.effect):
            raise DomainError(f"effect must be finite, got {self.effect!r}")
        if self.scenario is Scenario.ONE_SAMPLE_T:
            if self.n < 2:
                raise DomainError(f"one-sample scenario needs n >= 2, got {self.n}")
        elif self.scenario is Scenario.NESTED_F:
            if self.p1 < 0 or self.p2 < 1:
                raise DomainError(f"need p1 >= 0 and p2 >= 1, got p1={self.p1}, p2={self.p2}")
            if self.n <= self.p1 + self.p2:
                raise DomainError(
                    f"need n > p1 + p2, got n={self.n}, p1={self.p1}, p2={self.p2}"
                )
        elif self.scenario is Scenario.PROPORTION:
            if self.n < 1:
                raise DomainError(f"proportion scenario needs n >= 1, got {self.n}")
            if not 0.0 < self.p0 < 1.0:
                raise DomainError(f"p0 must lie in (0, 1), got {self.p0!r}")
            if not 0.0 < self.p0 + self.effect < 1.0:
                raise DomainError(
                    f"true proportion p0 + effect must lie in (0, 1), "
                    f"got {self.p0 + self.effect!r}"
                )


class SizePowerResult(NamedTuple):
    reject_rate_trad: float
    reject_rate_null: float
    disagreements: int


def _t_squared_statistics(cfg: SimConfig) -> tuple[np.ndarray, np.ndarray]:
    """(T^2, T0^2) per replicate for the one-sample scenario, mu0 = 0."""
    n, reps = cfg.n, cfg.replicates
    draws = normal_cells(cfg.seed, _DOMAIN_NOISE, 0, reps * n)
    y = draws.reshape(reps, n) + cfg.effect
    ybar = y.mean(axis=1)
    dev = y - ybar[:, None]
    sse = np.einsum("ij,ij->i", dev, dev)
    ssto = np.einsum("ij,ij->i", y, y)
    sst = n * ybar * ybar
    with np.errstate(divide="ignore"):
        t_sq = (n - 1) * sst / sse
        t0_sq = n * sst / ssto
    return t_sq, t0_sq


def _nested_design(cfg: SimConfig) -> np.ndarray:
    """One fixed design per configuration: intercept column when p1 >= 1,
    remaining entries standard normal from the design domain."""
    n, p = cfg.n, cfg.p1 + cfg.p2
    x = normal_cells(cfg.seed, _DOMAIN_DESIGN, 0, n * p).reshape(n, p)
    if cfg.p1 >= 1:
        x[:, 0] = 1.0
    return x


def _f_statistics(cfg: SimConfig) -> tuple[np.ndarray, np.ndarray]:
    """(F_trad, F_null) per replicate for the nested scenario.

    The response is X2 w * effect + noise with w the unit-norm equal-weight
    direction, so effect = 0 is the exact null.
    """
    n, p1, p2, reps = cfg.n, cfg.p1, cfg.p2, cfg.replicates
    p = p1 + p2
    x = _nested_design(cfg)
    q_full, _ = np.linalg.qr(x)
    noise = normal_cells(cfg.seed, _DOMAIN_NOISE, 0, reps * n).reshape(reps, n)
    if cfg.effect != 0.0:
        w = np.full(p2, 1.0 / math.sqrt(p2))
        signal = x[:, p1:] @ (cfg.effect * w)
        y = noise + signal
    else:
        y = noise
    resid_full = y - (y @ q_full) @ q_full.T
    sse12 = np.einsum("ij,ij->i", resid_full, resid_full)
    if p1 == 0:
        sse1 = np.einsum("ij,ij->i", y, y)
    else:
        q1, _ = np.linalg.qr(x[:, :p1])
        resid_red = y - (y @ q1) @ q1.T
        sse1 = np.einsum("ij,ij->i", resid_red, resid_red)
    ss2given1 = np.maximum(sse1 - sse12, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        f_trad = (ss2given1 / p2) / (sse12 / (n - p))
        f_null = (ss2given1 / p2) / (sse1 / (n - p1))
    return f_trad, f_null


def _proportion_z(cfg: SimConfig) -> tuple[np.ndarray, np.ndarray]:
    """(z_null, z_wald) per replicate for the proportion scenario."""
    n, reps, p0 = cfg.n, cfg.replicates, cfg.p0
    p_true = p0 + cfg.effect
    u = uniform_cells(cfg.seed, _DOMAIN_TRIALS, 0, reps * n).reshape(reps, n)
    p_hat = (u < p_true).sum(axis=1) / n
    z_null = (p_hat - p0) / math.sqrt(p0 * (1.0 - p0) / n)
    wald_var = p_hat * (1.0 - p_hat) / n
    with np.errstate(divide="ignore", invalid="ignore"):
        z_wald = (p_hat - p0) / np.sqrt(wald_var)
    # degenerate p_hat: signed infinity, mirroring the scalar test
    boundary = wald_var == 0.0
    z_wald[boundary] = np.copysign(np.inf, p_hat - p0)[boundary]
    return z_null, z_wald


def simulate_size_power(cfg: SimConfig) -> SizePowerResult:
    """Empirical rejection rates of both test forms plus the number of
    replicates on which their decisions differ.

    For the t and F scenarios the two forms are equivalent tests, so the
    disagreement count is structurally zero; for the proportion scenario the
    two z statistics are genuinely different tests and the count reports how
    often that difference changes the decision.
    """
    alpha = cfg.alpha
    if cfg.scenario is Scenario.ONE_SAMPLE_T:
        t_sq, t0_sq = _t_squared_statistics(cfg)
        n = cfg.n
        t_crit = quantile(student_t(float(n - 1)), 1.0 - alpha / 2.0)
        c0_sq = n * quantile(beta_params(0.5, 0.5 * (n - 1)), 1.0 - alpha)
        reject_trad = t_sq >= t_crit * t_crit
        reject_null = t0_sq >= c0_sq
    elif cfg.scenario is Scenario.NESTED_F:
        f_trad, f_null = _f_statistics(cfg)
        n, p1, p2 = cfg.n, cfg.p1, cfg.p2
        f_crit = quantile(fisher_f(float(p2), float(n - p1 - p2)), 1.0 - alpha)
        beta_crit = quantile(beta_params(0.5 * p2, 0.5 * (n - p1 - p2)), 1.0 - alpha)
        null_crit = beta_crit * (n - p1) / p2
        reject_trad = f_trad >= f_crit
        reject_null = f_null >= null_crit
    else:
        z_null, z_wald = _proportion_z(cfg)
        z_crit = normal_critical(alpha)
        reject_trad = np.abs(z_wald) >= z_crit
        reject_null = np.abs(z_null) >= z_crit

    return SizePowerResult(
        reject_rate_trad=float(reject_trad.mean()),
        reject_rate_null=float(reject_null.mean()),
        disagreements=int(np.count_nonzero(reject_trad != reject_null)),
    )


def null_law_check(cfg: SimConfig) -> float:
    """Kolmogorov-Smirnov distance of the scaled null statistic from its Beta law.

    ONE_SAMPLE_T compares T0^2/n against Beta(1/2, (n-1)/2); NESTED_F
    compares p2 F_null / (n - p1) against Beta(p2/2, (n-p)/2).  Requires
    effect = 0.
    """
    if cfg.effect != 0.0:
        raise DomainError("null_law_check requires effect = 0")
    if cfg.scenario is Scenario.ONE_SAMPLE_T:
        _, t0_sq = _t_squared_statistics(cfg)
        scaled = t0_sq / cfg.n
        ref = beta_params(0.5, 0.5 * (cfg.n - 1))
    elif cfg.scenario is Scenario.NESTED_F:
        _, f_null = _f_statistics(cfg)
        scaled = cfg.p2 * f_null / (cfg.n - cfg.p1)
        ref = beta_params(0.5 * cfg.p2, 0.5 * (cfg.n - cfg.p1 - cfg.p2))
    else:
        raise DomainError("the proportion scenario has no continuous null law to check")

    ordered = np.sort(scaled)
    m = ordered.size
    gaps = 0.0
    for i, x in enumerate(ordered):
        f = cdf(ref, float(x))
        gaps = max(gaps, (i + 1) / m - f, f - i / m)
    return gaps
