"""Residual diagnostics: leverage, standardized and studentized residuals,
and the per-observation outlier test.

The outlier test for observation i augments the design with an indicator
column (1 at row i, 0 elsewhere) and runs the nested F-test of that single
coefficient.  The standardized residual is the signed square root of F_null
from that test, the studentized residual the signed square root of F_trad.
Because the two F forms are linked by an exact monotone map, flagging
observations by either residual type (or either F form) yields identical
decisions; what changes is only the numerical scale, and the gap |t_i - r_i|
widens monotonically as observations become more extreme.

The augmented-model route is the normative implementation here.  The
textbook leave-one-out formula t_i = e_i / sqrt(s_(i)^2 (1 - h_i)) serves as
the independent oracle in the test suite, not as the production path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .linmodel import DesignMatrix, NestedSpec, _qr_with_rank_check, fit, nested_f_test
from .sample import Sample
from .specfun import cdf, student_t

__all__ = [
    "DiagnosticsRow",
    "DiagnosticsTable",
    "leverage",
    "residual_diagnostics",
    "map_standardized_to_studentized",
    "residual_gaps",
]

# a hat diagonal this close to 1 means the observation determines its own
# fit; the augmented design would be numerically rank deficient
_LEVERAGE_TOL = 1e-8

# squared relative residual scale below which a fit counts as exact,
# mirroring the saturation threshold of the nested F-test
_SSE_NEGLIGIBLE_RTOL = 1e-24


@dataclass(frozen=True)
class DiagnosticsRow:
    index: int
    leverage: float
    raw_residual: float
    standardized: float
    studentized: float
    outlier_p_value: float
    # n outlier tests run at once; this column is the Bonferroni-adjusted
    # p-value min(1, n * p), an extension over the unadjusted report
    bonferroni_p_value: float
    gap: float
    # leverage within 1e-8 of 1: residual quantities are undefined (NaN)
    flagged: bool = False


@dataclass(frozen=True)
class DiagnosticsTable:
    rows: tuple[DiagnosticsRow, ...]
    n: int
    p: int

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)


def leverage(x: DesignMatrix) -> tuple[float, ...]:
    """Hat-matrix diagonal h_i, computed as squared row norms of the Q factor."""
    q, _ = _qr_with_rank_check(x)
    return tuple(float(v) for v in np.einsum("ij,ij->i", q, q))


def residual_diagnostics(x: DesignMatrix, y: Sample) -> DiagnosticsTable:
    """Per-observation outlier diagnostics for the fit of y on x.

    Needs n > p + 1 so the indicator-augmented model keeps positive residual
    degrees of freedom.  Observations whose leverage is (numerically) 1 are
    flagged rather than tested.  Outlier p-values are two-sided Student t
    tails with the full augmented-model residual df, n - p - 1.
    """
    n, p = x.n_rows, x.n_cols
    if n <= p + 1:
        raise DomainError(
            f"diagnostics need n > p + 1, got n={n} with p={p}"
        )
    base = fit(x, y)
    h = leverage(x)
    yvec = np.asarray(y.values, dtype=np.float64)
    ssy = float(yvec @ yvec)
    base_exact = base.sse <= _SSE_NEGLIGIBLE_RTOL * ssy
    df = n - p - 1
    dist = student_t(float(df))

    rows = []
    for i in range(n):
        e_i = base.residuals[i]
        if h[i] >= 1.0 - _LEVERAGE_TOL:
            rows.append(
                DiagnosticsRow(
                    index=i, leverage=h[i], raw_residual=e_i,
                    standardized=math.nan, studentized=math.nan,
                    outlier_p_value=math.nan, bonferroni_p_value=math.nan,
                    gap=math.nan, flagged=True,
                )
            )
            continue
        if e_i == 0.0 or base_exact:
            rows.append(
                DiagnosticsRow(
                    index=i, leverage=h[i], raw_residual=e_i,
                    standardized=0.0, studentized=0.0,
                    outlier_p_value=1.0, bonferroni_p_value=1.0, gap=0.0,
                )
            )
            continue
        indicator = np.zeros(n)
        indicator[i] = 1.0
        augmented = DesignMatrix(
            np.column_stack([x.data, indicator]),
            x.labels + (f"is_obs_{i}",),
        )
        res = nested_f_test(NestedSpec(augmented, p1=p), y)
        sign = math.copysign(1.0, e_i)
        r_i = sign * math.sqrt(res.f_null)
        t_i = sign * math.sqrt(res.f_trad) if not res.saturated else sign * math.inf
        p_out = 2.0 * cdf(dist, -abs(t_i))
        rows.append(
            DiagnosticsRow(
                index=i, leverage=h[i], raw_residual=e_i,
                standardized=r_i, studentized=t_i,
                outlier_p_value=p_out,
                bonferroni_p_value=min(1.0, n * p_out),
                gap=abs(t_i - r_i),
            )
        )
    return DiagnosticsTable(rows=tuple(rows), n=n, p=p)


def map_standardized_to_studentized(r: float, n: int, p1: int) -> float:
    """Exact map from a standardized to a studentized residual.

    t = sign(r) sqrt((n - p1 - 1) r^2 / (n - p1 - r^2)), the square-root form
    of the F_null -> F_trad map with a single tested coefficient; defined for
    |r| < sqrt(n - p1).
    """
    r = float(r)
    if n - p1 < 2:
        raise DomainError(f"need n - p1 >= 2, got n={n}, p1={p1}")
    if not r * r < n - p1:
        raise DomainError(
            f"standardized residual must satisfy |r| < sqrt(n - p1); "
            f"got r={r!r} with n={n}, p1={p1}"
        )
    return math.copysign(
        math.sqrt((n - p1 - 1) * r * r / (n - p1 - r * r)), r
    )


def residual_gaps(table: DiagnosticsTable) -> list[tuple[int, float]]:
    """(observation, |t_i - r_i|) pairs, largest gap first.

    Flagged rows carry undefined residuals and are omitted.
    """
    pairs = [(row.index, row.gap) for row in table.rows if not row.flagged]
    return sorted(pairs, key=lambda item: (-item[1], item[0]))
