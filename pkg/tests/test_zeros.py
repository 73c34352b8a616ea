import math
import statistics

import numpy as np
import pytest

import bornosc as bo
from bornosc.semiclassical import ZETA_EPS2


class TestLoadZeros:
    def test_two_value_file(self, tmp_path):
        f = tmp_path / "z.txt"
        f.write_text("14.134725\n21.022040\n")
        table = bo.load_zeros(f)
        assert len(table) == 2
        assert table.y(1) == 14.134725

    def test_header_and_blank_lines_skipped(self, tmp_path):
        f = tmp_path / "z.txt"
        f.write_text("# header\n\n  14.1\n # more\n21.0\n")
        assert len(bo.load_zeros(f)) == 2

    def test_non_monotone_names_line(self, tmp_path):
        f = tmp_path / "z.txt"
        f.write_text("14.1\n13.9\n")
        with pytest.raises(bo.ZerosFormatError, match="line 2"):
            bo.load_zeros(f)

    def test_parse_error_names_line(self, tmp_path):
        f = tmp_path / "z.txt"
        f.write_text("14.1\nnot-a-number\n")
        with pytest.raises(bo.ZerosFormatError, match="line 2"):
            bo.load_zeros(f)

    def test_negative_value_rejected(self, tmp_path):
        f = tmp_path / "z.txt"
        f.write_text("-3.0\n")
        with pytest.raises(bo.ZerosFormatError):
            bo.load_zeros(f)

    def test_empty_file_rejected(self, tmp_path):
        f = tmp_path / "z.txt"
        f.write_text("# only comments\n")
        with pytest.raises(bo.ZerosFormatError):
            bo.load_zeros(f)


class TestBundledTable:
    def test_loads_100_zeros(self):
        table = bo.load_bundled_zeros()
        assert len(table) == 100
        assert table.y(1) == pytest.approx(14.134725, abs=1e-6)
        assert table.y(10) == pytest.approx(49.7738, abs=1e-4)
        assert np.all(np.diff(table.values) > 0.0)


class TestZetaEstimate:
    def test_scale_identification(self):
        # eps^2 = 1/(8 pi) turns 2 pi eps^2 (n + 1/2) into n/4 + 1/8
        n = 11
        assert 2.0 * math.pi * ZETA_EPS2 * (n + 0.5) == pytest.approx(
            n / 4.0 + 1.0 / 8.0, rel=1e-15)

    def test_n10_value(self):
        # frozen oracle: 2 pi x with x(log x - 1) = 10 - 11/8
        assert bo.zeta_zero_estimate(10) == pytest.approx(50.2336533913627162, rel=1e-11)

    def test_requires_n_at_least_3(self):
        with pytest.raises(bo.DomainError):
            bo.zeta_zero_estimate(2)
        assert bo.zeta_zero_estimate(3) > 0.0

    def test_strictly_increasing(self):
        ys = [bo.zeta_zero_estimate(N) for N in range(3, 120)]
        assert all(b > a for a, b in zip(ys, ys[1:]))

    def test_matches_asymptotic_born_identification(self):
        # the zeta estimate is 8 pi qn of the born asymptotic solve with
        # eps^2 = 1/(8 pi) and n = 4N - 6
        params = bo.OscParams(math.sqrt(ZETA_EPS2))
        for N in (5, 40, 90):
            est = bo.asymptotic_born(4 * N - 6, params)
            qn = est.energy_estimate * params.eps2
            assert 8.0 * math.pi * qn == pytest.approx(bo.zeta_zero_estimate(N), rel=1e-11)


class TestCompareZeros:
    def test_single_row_n10(self):
        table = bo.load_bundled_zeros()
        rows = bo.compare_zeros(table, 10, 10)
        assert len(rows) == 1
        assert rows[0].rel_err == pytest.approx(0.0092382059, abs=1e-7)

    def test_rows_finite_and_positive_denominator(self):
        table = bo.load_bundled_zeros()
        for r in bo.compare_zeros(table, 3, 100):
            assert math.isfinite(r.rel_err) and r.y_true > 0.0

    def test_error_decreases_with_n(self):
        table = bo.load_bundled_zeros()
        rows = bo.compare_zeros(table, 10, 100)
        med_lo = statistics.median(r.rel_err for r in rows if r.N <= 20)
        med_hi = statistics.median(r.rel_err for r in rows if r.N >= 50)
        assert med_hi < med_lo

    def test_estimates_interleave_with_table(self):
        # consecutive estimates never cross: est(N+1) > est(N), and each is
        # within its own error envelope of the true value
        table = bo.load_bundled_zeros()
        rows = bo.compare_zeros(table, 10, 100)
        for r1, r2 in zip(rows, rows[1:]):
            assert r2.y_est > r1.y_est
        assert max(r.rel_err for r in rows) < 0.02

    def test_smooth_counting_check(self):
        # (y/2pi)(log(y/2pi)-1) tracks N - 11/8 within the fluctuating term
        table = bo.load_bundled_zeros()
        rows = bo.compare_zeros(table, 10, 100)
        for r in rows:
            assert abs(r.smooth_lhs - r.smooth_rhs) < 1.0

    def test_range_validation(self):
        table = bo.load_bundled_zeros()
        with pytest.raises(bo.DomainError):
            bo.compare_zeros(table, 2, 10)
        with pytest.raises(IndexError):
            bo.compare_zeros(table, 3, 101)
        with pytest.raises(ValueError):
            bo.compare_zeros(table, 10, 5)


class TestZerosTableType:
    def test_requires_increasing(self):
        with pytest.raises(ValueError):
            bo.ZerosTable(values=np.array([2.0, 1.0]))

    def test_index_bounds(self):
        t = bo.ZerosTable(values=np.array([1.0, 2.0]))
        with pytest.raises(IndexError):
            t.y(0)
        with pytest.raises(IndexError):
            t.y(3)
