"""ECDF dumps, KS distances against exact laws, and replica stability."""

import numpy as np
import pytest

from metacrit.diagnostics import (
    EcdfDump,
    ecdf,
    ecdf_spread,
    ks_critical_value,
    ks_distance,
    replica_stability,
    write_ecdf_csv,
)
from metacrit.methods import Method, MethodSpec
from metacrit.special import DomainError


class TestEcdf:
    def test_heights_are_i_over_n(self):
        dump = ecdf(MethodSpec(Method.TIPPETT), 3, 0, 100, seed=1)
        assert np.array_equal(dump.heights, np.arange(1, 101) / 100)
        assert np.all(np.diff(dump.values) >= 0)

    def test_single_draw(self):
        dump = ecdf(MethodSpec(Method.TIPPETT), 3, 0, 1, seed=2)
        assert dump.values.shape == (1,)
        assert dump.heights[0] == 1.0


class TestKsDistance:
    def test_plug_in_grid_is_tight(self):
        # evaluating the exact quantile grid against its own CDF leaves at
        # most one ECDF step of discrepancy
        from metacrit.exact import tippett_quantile

        N = 500
        qs = (np.arange(1, N + 1) - 0.5) / N
        vals = np.array([tippett_quantile(5, 3, q) for q in qs])
        dump = EcdfDump(values=vals, heights=np.arange(1, N + 1) / N,
                        spec=MethodSpec(Method.TIPPETT), n=5, n_f=3, N=N,
                        seed=0, replica=0)
        assert ks_distance(dump) <= 1.0 / N

    def test_simulated_tippett_fits_beta(self):
        dump = ecdf(MethodSpec(Method.TIPPETT), 5, 3, 4999, seed=42)
        assert ks_distance(dump) <= ks_critical_value(4999, 0.01)

    def test_degenerate_median_point(self):
        # single point at the null median (z = 0): ECDF jumps 0 -> 1 across
        # CDF = 0.5
        dump = EcdfDump(values=np.array([0.0]), heights=np.array([1.0]),
                        spec=MethodSpec(Method.STOUFFER), n=3, n_f=0, N=1,
                        seed=0, replica=0)
        assert ks_distance(dump) == pytest.approx(0.5, abs=1e-12)

    def test_unsupported_law(self):
        dump = ecdf(MethodSpec(Method.MUDHOLKAR_GEORGE), 3, 0, 10, seed=3)
        with pytest.raises(DomainError):
            ks_distance(dump)

    def test_explicit_cdf_argument(self):
        dump = ecdf(MethodSpec(Method.TIPPETT), 2, 0, 1000, seed=4)
        d = ks_distance(dump, cdf=lambda x: 1 - (1 - np.clip(x, 0, 1)) ** 2)
        assert d <= ks_critical_value(1000, 0.01)

    def test_critical_levels(self):
        assert ks_critical_value(4999, 0.01) == pytest.approx(1.629 / np.sqrt(4999), abs=1e-12)
        with pytest.raises(DomainError):
            ks_critical_value(4999, 0.2)


class TestStability:
    def test_identical_dumps_have_zero_spread(self):
        dump = ecdf(MethodSpec(Method.TIPPETT), 5, 3, 200, seed=5)
        assert ecdf_spread([dump] * 8) == 0.0

    def test_standard_size_is_stable(self):
        spread = replica_stability(MethodSpec(Method.TIPPETT), 5, 3, 4999, R=50, seed=6)
        assert spread <= 0.06

    def test_small_samples_spread_more(self):
        spec = MethodSpec(Method.TIPPETT)
        wide = replica_stability(spec, 5, 3, 10, R=50, seed=7)
        tight = replica_stability(spec, 5, 3, 4999, R=50, seed=7)
        assert wide > tight

    def test_needs_two_replicas(self):
        with pytest.raises(DomainError):
            replica_stability(MethodSpec(Method.TIPPETT), 5, 3, 100, R=1, seed=8)


class TestCsvDump:
    def test_row_count_and_columns(self, tmp_path):
        dump = ecdf(MethodSpec(Method.CHEN), 10, 0, 250, seed=9)
        path = tmp_path / "ecdf.csv"
        write_ecdf_csv(dump, path, include_exact=True)
        lines = path.read_text().splitlines()
        assert lines[0] == "x,ecdf,exact_cdf"
        assert len(lines) == 251
        x, h, c = map(float, lines[1].split(","))
        assert h == pytest.approx(1 / 250)
        assert 0.0 <= c <= 1.0

    def test_without_exact_column(self, tmp_path):
        dump = ecdf(MethodSpec(Method.MUDHOLKAR_GEORGE), 4, 1, 50, seed=10)
        path = tmp_path / "plain.csv"
        write_ecdf_csv(dump, path)
        assert path.read_text().splitlines()[0] == "x,ecdf"
