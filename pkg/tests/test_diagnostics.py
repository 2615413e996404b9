"""Diagnostics: the 3-point hand example, the leave-one-out closed form as
an independent oracle, decision equivalence across all four statistics, and
the gap ranking."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nullform.diagnostics import (
    leverage,
    map_standardized_to_studentized,
    residual_diagnostics,
    residual_gaps,
)
from nullform.errors import DomainError
from nullform.linmodel import DesignMatrix, fit
from nullform.sample import Sample
from nullform.specfun import cdf, fisher_f, quantile, student_t


def loo_studentized(xarr, yarr):
    """Textbook leave-one-out studentized residuals, used only as an oracle."""
    n, p = xarr.shape
    beta, *_ = np.linalg.lstsq(xarr, yarr, rcond=None)
    resid = yarr - xarr @ beta
    q, _ = np.linalg.qr(xarr)
    h = np.einsum("ij,ij->i", q, q)
    out = np.empty(n)
    for i in range(n):
        keep = np.arange(n) != i
        beta_i, *_ = np.linalg.lstsq(xarr[keep], yarr[keep], rcond=None)
        sse_i = float(np.sum((yarr[keep] - xarr[keep] @ beta_i) ** 2))
        s2_i = sse_i / (n - 1 - p)
        out[i] = resid[i] / math.sqrt(s2_i * (1.0 - h[i]))
    return out


class TestWorkedExample:
    def setup_method(self):
        self.x = DesignMatrix([[1.0], [1.0], [1.0]])
        self.y = Sample.from_iterable([1.0, 2.0, 6.0])
        self.table = residual_diagnostics(self.x, self.y)

    def test_leverage_third(self):
        for row in self.table:
            assert row.leverage == pytest.approx(1.0 / 3.0, rel=1e-12)

    def test_raw_residuals(self):
        raw = tuple(row.raw_residual for row in self.table)
        assert raw == pytest.approx((-2.0, -1.0, 3.0), rel=1e-12)

    def test_third_observation_to_seven_digits(self):
        row = self.table.rows[2]
        assert row.standardized == pytest.approx(1.3887301, abs=5e-8)
        assert row.studentized == pytest.approx(5.1961524, abs=5e-8)

    def test_signs_follow_residuals(self):
        for row in self.table:
            if row.raw_residual != 0.0:
                assert math.copysign(1.0, row.standardized) == math.copysign(
                    1.0, row.raw_residual
                )
                assert math.copysign(1.0, row.studentized) == math.copysign(
                    1.0, row.raw_residual
                )

    def test_outlier_p_value_from_t1(self):
        # df = n - p - 1 = 1: two-sided Cauchy tail at |t_3|
        row = self.table.rows[2]
        expect = 2.0 * (0.5 - math.atan(abs(row.studentized)) / math.pi)
        assert row.outlier_p_value == pytest.approx(expect, abs=1e-12)

    def test_bonferroni_column(self):
        for row in self.table:
            assert row.bonferroni_p_value == pytest.approx(
                min(1.0, 3 * row.outlier_p_value), abs=1e-13
            )


class TestOracles:
    def test_loo_oracle_on_random_regressions(self):
        rng = np.random.default_rng(2024)
        for _ in range(100):
            n = int(rng.integers(6, 30))
            p = int(rng.integers(1, min(5, n - 2)))
            xarr = rng.standard_normal((n, p))
            xarr[:, 0] = 1.0
            yarr = xarr @ rng.standard_normal(p) + rng.standard_normal(n)
            table = residual_diagnostics(
                DesignMatrix(xarr), Sample.from_iterable(yarr)
            )
            want = loo_studentized(xarr, yarr)
            got = np.array([row.studentized for row in table])
            assert got == pytest.approx(want, rel=1e-9, abs=1e-9)

    def test_standardized_closed_form(self):
        # r_i = e_i / sqrt(sse/(n-p) * (1 - h_i))
        rng = np.random.default_rng(5)
        xarr = rng.standard_normal((15, 3))
        yarr = rng.standard_normal(15)
        x = DesignMatrix(xarr)
        y = Sample.from_iterable(yarr)
        table = residual_diagnostics(x, y)
        base = fit(x, y)
        s2 = base.sse / (15 - 3)
        for row in table:
            want = row.raw_residual / math.sqrt(s2 * (1.0 - row.leverage))
            assert row.standardized == pytest.approx(want, rel=1e-9)

    def test_leverage_sums_to_p(self):
        rng = np.random.default_rng(17)
        for p in (1, 2, 4):
            xarr = rng.standard_normal((20, p))
            h = leverage(DesignMatrix(xarr))
            assert math.fsum(h) == pytest.approx(p, abs=1e-10)
            assert all(0.0 <= v <= 1.0 + 1e-12 for v in h)


class TestEdgeCases:
    def test_zero_residual_row(self):
        table = residual_diagnostics(
            DesignMatrix([[1.0]] * 3), Sample.from_iterable([1.0, 2.0, 3.0])
        )
        middle = table.rows[1]
        # QR projection dust can leave ~1e-16 in an exactly-zero residual
        assert middle.raw_residual == pytest.approx(0.0, abs=1e-14)
        assert middle.standardized == 0.0
        assert middle.studentized == 0.0
        assert middle.outlier_p_value == 1.0
        assert middle.gap == 0.0

    def test_all_residuals_zero(self):
        x = DesignMatrix([[1.0, 1.0], [1.0, 2.0], [1.0, 3.0], [1.0, 4.0]])
        y = Sample.from_iterable([2.0, 4.0, 6.0, 8.0])
        table = residual_diagnostics(x, y)
        assert all(row.standardized == 0.0 for row in table)
        assert all(row.gap == 0.0 for row in table)
        assert residual_gaps(table) == [(0, 0.0), (1, 0.0), (2, 0.0), (3, 0.0)]

    def test_unit_leverage_row_is_flagged(self):
        x = DesignMatrix([[1.0, 0.0], [1.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        y = Sample.from_iterable([1.0, 2.0, 3.0, 9.0])
        table = residual_diagnostics(x, y)
        last = table.rows[3]
        assert last.flagged
        assert last.leverage == pytest.approx(1.0, abs=1e-12)
        assert math.isnan(last.studentized)
        others = [row for row in table.rows[:3]]
        assert all(not row.flagged for row in others)
        # flagged rows stay out of the gap ranking
        assert all(idx != 3 for idx, _ in residual_gaps(table))

    def test_needs_spare_degrees_of_freedom(self):
        with pytest.raises(DomainError):
            residual_diagnostics(
                DesignMatrix([[1.0], [1.0]]), Sample.from_iterable([1.0, 2.0])
            )
        with pytest.raises(DomainError):
            residual_diagnostics(
                DesignMatrix([[1.0, 0.0], [1.0, 1.0], [1.0, 2.0]]),
                Sample.from_iterable([1.0, 2.0, 3.0]),
            )


class TestMap:
    def test_zero_and_unit_fixed_points(self):
        assert map_standardized_to_studentized(0.0, 10, 2) == 0.0
        for n, p1 in [(5, 1), (30, 4), (3, 1)]:
            assert map_standardized_to_studentized(1.0, n, p1) == pytest.approx(
                1.0, rel=1e-14
            )
            assert map_standardized_to_studentized(-1.0, n, p1) == pytest.approx(
                -1.0, rel=1e-14
            )

    def test_worked_value(self):
        # slope of the map at this point is ~105, so the 7-digit rounded
        # input only pins the output to ~5e-6
        assert map_standardized_to_studentized(1.3887301, 3, 1) == pytest.approx(
            5.1961524, abs=1e-5
        )
        assert map_standardized_to_studentized(math.sqrt(27.0 / 14.0), 3, 1) == (
            pytest.approx(math.sqrt(27.0), rel=1e-12)
        )

    def test_agrees_with_table(self):
        rng = np.random.default_rng(33)
        xarr = rng.standard_normal((12, 2))
        table = residual_diagnostics(
            DesignMatrix(xarr), Sample.from_iterable(rng.standard_normal(12))
        )
        for row in table:
            mapped = map_standardized_to_studentized(row.standardized, 12, 2)
            assert mapped == pytest.approx(row.studentized, rel=1e-9, abs=1e-12)

    def test_domain_error(self):
        with pytest.raises(DomainError):
            map_standardized_to_studentized(3.0, 10, 1)  # sqrt(9) boundary
        with pytest.raises(DomainError):
            map_standardized_to_studentized(0.5, 3, 2)

    def test_gap_monotone_in_magnitude(self):
        # |t| - |r| grows strictly with |r| above 1
        n, p1 = 12, 3
        grid = np.linspace(1.0 + 1e-6, math.sqrt(n - p1) - 1e-6, 200)
        gaps = [map_standardized_to_studentized(r, n, p1) - r for r in grid]
        assert all(b > a for a, b in zip(gaps, gaps[1:]))


class TestDecisionEquivalence:
    @settings(max_examples=100, deadline=None)
    @given(
        seed=st.integers(min_value=0, max_value=2**62),
        alpha=st.sampled_from([0.01, 0.05, 0.1]),
    )
    def test_four_statistics_agree(self, seed, alpha):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(6, 25))
        p = int(rng.integers(1, 4))
        xarr = rng.standard_normal((n, p))
        xarr[:, 0] = 1.0
        yarr = xarr @ rng.standard_normal(p) + rng.standard_normal(n)
        table = residual_diagnostics(DesignMatrix(xarr), Sample.from_iterable(yarr))
        df = n - p - 1
        t_crit = quantile(student_t(float(df)), 1.0 - alpha / 2.0)
        f_crit = quantile(fisher_f(1.0, float(df)), 1.0 - alpha)
        r_crit = map_critical_r(alpha, n, p)
        for row in table:
            if row.flagged:
                continue
            by_t = abs(row.studentized) >= t_crit
            by_r = abs(row.standardized) >= r_crit
            by_f_trad = row.studentized**2 >= f_crit
            by_p = row.outlier_p_value <= alpha
            assert by_t == by_r == by_f_trad == by_p


def map_critical_r(alpha, n, p):
    """Standardized-scale critical value: invert the Beta law of r^2/(n-p)."""
    from nullform.specfun import beta_params

    b = quantile(beta_params(0.5, 0.5 * (n - p - 1)), 1.0 - alpha)
    return math.sqrt((n - p) * b)


class TestGapRanking:
    def test_synthetic_outlier_ranks_first(self):
        rng = np.random.default_rng(8)
        n = 20
        xarr = np.column_stack([np.ones(n), np.arange(n, dtype=float)])
        yarr = xarr @ np.array([1.0, 2.0]) + rng.standard_normal(n) * 0.5
        yarr[7] += 10.0 * 0.5
        table = residual_diagnostics(DesignMatrix(xarr), Sample.from_iterable(yarr))
        ranked = residual_gaps(table)
        assert ranked[0][0] == 7
        assert ranked[0][1] > ranked[1][1]

    def test_descending_order(self):
        rng = np.random.default_rng(12)
        xarr = rng.standard_normal((15, 2))
        table = residual_diagnostics(
            DesignMatrix(xarr), Sample.from_iterable(rng.standard_normal(15))
        )
        gaps = [g for _, g in residual_gaps(table)]
        assert gaps == sorted(gaps, reverse=True)
