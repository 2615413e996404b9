"""Gaussian linear model fitting and the nested-model F-test in both forms.

Fits go through a QR factorization of the design; projections onto the
column space are applied as Q (Q^T y) and never materialized as n-by-n
matrices.  The nested test compares a full design X = [X1 | X2] against its
column-prefix reduction X1 and reports

    F_trad = (SS_{2|1} / p2) / (SSE_12 / (n - p)),
    F_null = (SS_{2|1} / p2) / (SSE_1  / (n - p1)),

where SS_{2|1} = SSE_1 - SSE_12 is the reduction in error sum of squares.
F_trad follows the usual F law; under H0 the scaled null form
p2 F_null / (n - p1) follows Beta(p2/2, (n-p)/2).  Both p-value routes are
computed and reported; the two must agree to rounding.

The p1 = 0 case (no reduced predictors at all) defines the reduced fit as
the zero function, SSE_1 = ||y||^2, which makes the one-sample t-test an
exact special case of this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DomainError, RankDeficiencyError
from .sample import Sample
from .specfun import beta_params, cdf, fisher_f

__all__ = [
    "DesignMatrix",
    "NestedSpec",
    "FitResult",
    "NestedFTestResult",
    "fit",
    "nested_f_test",
    "map_fnull_to_ftrad",
    "FGeometry",
    "f_geometry",
]

# smallest |R_jj| relative to the largest before a column is declared
# linearly dependent on its predecessors
_RANK_RTOL = 1e-10


@dataclass(frozen=True, eq=False)
class DesignMatrix:
    """An n-by-p design with finite entries and one label per column.

    The wrapped array is a read-only float64 copy of whatever was passed in.
    """

    data: np.ndarray
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        arr = np.array(self.data, dtype=np.float64, copy=True, order="C")
        if arr.ndim != 2:
            raise DomainError(f"design matrix must be 2-dimensional, got shape {arr.shape}")
        n, p = arr.shape
        if n < 1 or p < 1:
            raise DomainError(f"design matrix must be non-empty, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise DomainError("design matrix entries must all be finite")
        arr.setflags(write=False)
        labels = tuple(str(s) for s in self.labels)
        if not labels:
            labels = tuple(f"x{j}" for j in range(p))
        if len(labels) != p:
            raise DomainError(
                f"expected {p} column labels, got {len(labels)}"
            )
        object.__setattr__(self, "data", arr)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_rows(
        cls, rows: Sequence[Sequence[float]], labels: Sequence[str] = ()
    ) -> "DesignMatrix":
        return cls(np.array(rows, dtype=np.float64), tuple(labels))

    @classmethod
    def from_columns(
        cls, columns: Sequence[Sequence[float]], labels: Sequence[str] = ()
    ) -> "DesignMatrix":
        return cls(np.column_stack([np.asarray(c, dtype=np.float64) for c in columns]),
                   tuple(labels))

    @property
    def n_rows(self) -> int:
        return self.data.shape[0]

    @property
    def n_cols(self) -> int:
        return self.data.shape[1]

    def prefix(self, p1: int) -> "DesignMatrix":
        """The sub-design made of the first p1 columns."""
        if not 1 <= p1 <= self.n_cols:
            raise DomainError(f"prefix width must be in [1, {self.n_cols}], got {p1}")
        return DesignMatrix(self.data[:, :p1], self.labels[:p1])


@dataclass(frozen=True, eq=False)
class NestedSpec:
    """A full design together with the width p1 of its reduced prefix.

    The reduced model is always the first p1 columns of the full design;
    p1 = 0 means the reduced model is the zero function.
    """

    full: DesignMatrix
    p1: int

    def __post_init__(self) -> None:
        if not isinstance(self.p1, int) or isinstance(self.p1, bool):
            raise DomainError(f"p1 must be an integer, got {self.p1!r}")
        if not 0 <= self.p1 < self.full.n_cols:
            raise DomainError(
                f"p1 must satisfy 0 <= p1 < p={self.full.n_cols}, got {self.p1}"
            )
        if self.full.n_cols >= self.full.n_rows:
            raise DomainError(
                f"need p < n, got p={self.full.n_cols} with n={self.full.n_rows}"
            )

    @property
    def p(self) -> int:
        return self.full.n_cols

    @property
    def p2(self) -> int:
        return self.p - self.p1


@dataclass(frozen=True)
class FitResult:
    coefficients: tuple[float, ...]
    fitted: tuple[float, ...]
    residuals: tuple[float, ...]
    sse: float
    df_resid: int


@dataclass(frozen=True)
class NestedFTestResult:
    sse1: float
    sse12: float
    ss2given1: float
    f_trad: float
    f_null: float
    p_value_f: float
    p_value_beta: float
    cos2_theta: float
    dims: tuple[int, int, int]
    # full model interpolates y exactly (SSE_12 = 0): F_trad is infinite and
    # F_null sits at its supremum (n - p1)/p2
    saturated: bool = False


class FGeometry(NamedTuple):
    theta: float
    a: float
    b: float
    c: float


def _qr_with_rank_check(x: DesignMatrix) -> tuple[np.ndarray, np.ndarray]:
    q, r = np.linalg.qr(x.data, mode="reduced")
    diag = np.abs(np.diag(r))
    threshold = _RANK_RTOL * diag.max()
    deficient = np.nonzero(diag < threshold)[0]
    if deficient.size:
        raise RankDeficiencyError(x.labels[int(deficient[0])])
    return q, r


def fit(x: DesignMatrix, y: Sample) -> FitResult:
    """Least-squares fit of y on the design columns via Householder QR.

    Raises a rank-deficiency error naming the first column whose R diagonal
    falls below 1e-10 of the largest.
    """
    n, p = x.n_rows, x.n_cols
    if y.n != n:
        raise DomainError(f"design has {n} rows but the response has {y.n}")
    if p >= n:
        raise DomainError(f"need p < n, got p={p} with n={n}")
    q, r = _qr_with_rank_check(x)
    yvec = np.asarray(y.values, dtype=np.float64)
    qty = q.T @ yvec
    fitted = q @ qty
    residuals = yvec - fitted
    # back-substitution on the p-by-p triangular factor
    beta = np.zeros(p)
    for j in range(p - 1, -1, -1):
        beta[j] = (qty[j] - r[j, j + 1 :] @ beta[j + 1 :]) / r[j, j]
    return FitResult(
        coefficients=tuple(float(v) for v in beta),
        fitted=tuple(float(v) for v in fitted),
        residuals=tuple(float(v) for v in residuals),
        sse=float(residuals @ residuals),
        df_resid=n - p,
    )


def nested_f_test(spec: NestedSpec, y: Sample) -> NestedFTestResult:
    """Test H0: (coefficients beyond the first p1 columns) = 0, both forms.

    The two p-values take genuinely different routes: p_value_f is the upper
    F(p2, n-p) tail at F_trad, p_value_beta the upper Beta(p2/2, (n-p)/2)
    tail at p2 F_null / (n - p1).
    """
    n = spec.full.n_rows
    p1, p2, p = spec.p1, spec.p2, spec.p
    if y.n != n:
        raise DomainError(f"design has {n} rows but the response has {y.n}")

    full_fit = fit(spec.full, y)
    sse12 = full_fit.sse
    yvec = np.asarray(y.values, dtype=np.float64)
    ssy = float(yvec @ yvec)
    if p1 == 0:
        sse1 = ssy
    else:
        sse1 = fit(spec.full.prefix(p1), y).sse

    # an SSE below the square of 1e-12 * ||y|| cannot be told apart from an
    # exact interpolation; QR rounding alone produces dust of this size
    tiny_sse = 1e-24 * ssy
    if sse1 <= tiny_sse:
        raise DomainError("reduced model already fits exactly; the F-test is undefined")
    # guard the subtraction against cancellation leaking a tiny negative
    ss2given1 = max(sse1 - sse12, 0.0)
    cos2_theta = ss2given1 / sse1

    if sse12 <= tiny_sse:
        return NestedFTestResult(
            sse1=sse1, sse12=sse12, ss2given1=ss2given1,
            f_trad=math.inf, f_null=(n - p1) / p2,
            p_value_f=0.0, p_value_beta=0.0,
            cos2_theta=cos2_theta, dims=(n, p1, p2), saturated=True,
        )

    f_trad = (ss2given1 / p2) / (sse12 / (n - p))
    f_null = (ss2given1 / p2) / (sse1 / (n - p1))
    p_value_f = 1.0 - cdf(fisher_f(float(p2), float(n - p)), f_trad)
    p_value_beta = 1.0 - cdf(
        beta_params(0.5 * p2, 0.5 * (n - p)), p2 * f_null / (n - p1)
    )
    return NestedFTestResult(
        sse1=sse1, sse12=sse12, ss2given1=ss2given1,
        f_trad=f_trad, f_null=f_null,
        p_value_f=p_value_f, p_value_beta=p_value_beta,
        cos2_theta=cos2_theta, dims=(n, p1, p2),
    )


def map_fnull_to_ftrad(f_null: float, n: int, p1: int, p2: int) -> float:
    """The exact increasing map between the two F forms.

    F_trad = (n - p) F_null / (n - p1 - p2 F_null), valid for
    0 <= F_null < (n - p1)/p2.
    """
    f_null = float(f_null)
    if p1 < 0 or p2 < 1 or n <= p1 + p2:
        raise DomainError(
            f"need p1 >= 0, p2 >= 1 and n > p1 + p2, got n={n}, p1={p1}, p2={p2}"
        )
    sup = (n - p1) / p2
    if not 0.0 <= f_null < sup:
        raise DomainError(
            f"f_null must lie in [0, {sup}), got {f_null!r}"
        )
    return (n - p1 - p2) * f_null / (n - p1 - p2 * f_null)


def f_geometry(spec: NestedSpec, y: Sample) -> FGeometry:
    """Side lengths and angle of the nested sum-of-squares triangle.

    a = sqrt(SSE_1) is the hypotenuse, b = sqrt(SS_{2|1}) and c = sqrt(SSE_12)
    the legs; theta = arccos(b/a), so cos^2(theta) carries F_null and
    cot^2(theta) carries F_trad.
    """
    res = nested_f_test(spec, y)
    a = math.sqrt(res.sse1)
    b = math.sqrt(res.ss2given1)
    c = math.sqrt(res.sse12)
    return FGeometry(math.acos(min(1.0, b / a)), a, b, c)
