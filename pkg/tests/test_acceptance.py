"""Acceptance suite: one test per criterion, each printing a PASS line with
the measured margins (run with `pytest -s tests/test_acceptance.py` to see
them).

Comparisons are against the published reference tables frozen under
tests/data/reference_tables/.  Two documented source anomalies are handled
explicitly:

* the simulated tables print the (n=3, n_f=3) row as a byte-for-byte copy of
  (n=4, n_f=3) -- impossible for distinct distributions -- so that row is
  excluded from statistical comparisons and recomputed correctly instead;
* 172 of the 2610 exact-law cells are printed with a last-digit rounding
  slip (the printed value differs from the true quantile by just over half
  an ulp of the printed precision, e.g. 2.3264 for the 0.99 normal quantile
  2.326348).  Where an independent oracle shows the print itself is off,
  the check pins our value to the oracle at 1e-9 instead of to the print.
"""

import math
import time

import numpy as np
import pytest
from scipy import stats

from metacrit.diagnostics import ecdf, ks_distance
from metacrit.estimation import aggregate, confidence_interval, quantile_index, simulate_quantiles
from metacrit.exact import (
    edgington_quantile_genuine,
    exact_quantile,
    wilkinson_max_quantile,
)
from metacrit.methods import Method, MethodSpec, evaluate_statistic, parse_method
from metacrit.sampling import DEFAULT_Q_LEVELS, SimConfig
from metacrit.tables import default_grid, generate_table, write_csv

from conftest import load_reference

# independent seed for the statistical reproduction runs (any fixed value;
# agreement with the source is statistical, not bit-wise)
ACCEPT_SEED = 271828
KS_BASE_SEED = 5000
EXCLUDED_ROW = (3, 3)  # duplicated (4, 3) row in the simulated source tables


def _combined_tol(se_ours, se_ref):
    se_ours = se_ours or 0.0
    se_ref = se_ref or 0.0
    return 3.0 * math.sqrt(se_ours**2 + se_ref**2)


# ---------------------------------------------------------------------------
# criterion 1: exact-cell reproduction
# ---------------------------------------------------------------------------

def test_criterion_1_exact_cell_reproduction():
    # (token, n_f=0 only?, print tolerance, independent oracle for the truth)
    plans = [
        ("fisher", True, 5e-5, lambda n, nf, q: stats.chi2.ppf(q, 2 * n)),
        ("stouffer", True, 5e-5, lambda n, nf, q: stats.norm.ppf(q)),
        ("chen", True, 5e-5, lambda n, nf, q: stats.chi2.ppf(q, n)),
        ("gm", True, 5e-5, lambda n, nf, q: math.exp(-stats.gamma.ppf(1 - q, n) / n)),
        ("wilkinson", True, 5e-5, lambda n, nf, q: q ** (1.0 / n)),
        ("tippett", False, 5e-6, lambda n, nf, q: stats.beta.ppf(q, 1, n + nf)),
    ]
    checked = print_slips = 0
    elapsed = 0.0
    for token, genuine_only, tol, oracle in plans:
        spec = MethodSpec(parse_method(token))
        for (n, n_f, q), (printed, se) in load_reference(token).items():
            if genuine_only and n_f != 0:
                continue
            assert se is None, f"{token} ({n},{n_f},{q}) should be an exact cell"
            t0 = time.perf_counter()
            ours = exact_quantile(spec, n, n_f, q)
            elapsed += time.perf_counter() - t0
            checked += 1
            truth = oracle(n, n_f, q)
            if abs(truth - printed) <= tol:
                assert abs(ours - printed) <= tol, (token, n, n_f, q, ours, printed)
            else:
                # the print itself is mis-rounded; require agreement with the
                # independent oracle instead, and stay within one extra ulp
                # of the print
                print_slips += 1
                assert abs(ours - truth) <= 1e-9, (token, n, n_f, q, ours, truth)
                assert abs(ours - printed) <= 2 * tol, (token, n, n_f, q, ours, printed)
    assert checked == 2610
    assert elapsed < 1.0, f"exact-cell evaluation took {elapsed:.2f}s"
    print(f"\nCRITERION 1: PASS - {checked} exact cells reproduced "
          f"({print_slips} source print slips pinned to the oracle), "
          f"exact evaluation {elapsed * 1000:.0f} ms")


# ---------------------------------------------------------------------------
# criterion 2: simulated-cell statistical reproduction
# ---------------------------------------------------------------------------

CRITERION_2_ROWS = {
    "fisher": [(3, 1), (12, 4), (24, 8)],
    "stouffer": [(3, 1), (12, 4), (24, 8)],
    "chen": [(3, 1), (12, 4), (24, 8)],
    "mg": [(3, 0), (12, 4), (24, 8)],
    "gm": [(3, 1), (12, 4), (24, 8)],
    "min-gm": [(3, 0), (12, 4), (24, 8)],
    "harmonic": [(3, 0), (12, 4), (24, 8)],
    "edgington": [(3, 0), (12, 4), (24, 8)],
    "tippett": [(3, 1), (12, 4), (24, 8)],
    "wilkinson": [(3, 1), (12, 4), (24, 8)],
}


def test_criterion_2_simulated_cell_reproduction():
    summary = []
    for token, rows in CRITERION_2_ROWS.items():
        assert all(row != EXCLUDED_ROW for row in rows)
        ref = load_reference(token)
        spec = MethodSpec(parse_method(token))
        passed = total = 0
        worst = 0.0
        for n, n_f in rows:
            cfg = SimConfig(n=n, n_f=n_f, N=4999, R=50, seed=ACCEPT_SEED)
            for est in simulate_quantiles(spec, cfg):
                printed, se_ref = ref[(n, n_f, est.q)]
                tol = _combined_tol(est.stderr, se_ref)
                dev = abs(est.estimate - printed)
                total += 1
                passed += dev <= tol
                worst = max(worst, 3.0 * dev / tol)
        assert total >= 20, token
        assert passed >= 0.95 * total, f"{token}: {passed}/{total} within tolerance"
        summary.append(f"{token} {passed}/{total} (worst {worst:.2f} sd)")
    print("\nCRITERION 2: PASS - " + "; ".join(summary))


# ---------------------------------------------------------------------------
# criterion 3: Wilkinson cross-oracle
# ---------------------------------------------------------------------------

def test_criterion_3_wilkinson_cross_oracle():
    spec = MethodSpec(Method.WILKINSON)

    # closed-form root vs a fresh simulation at 30 random grid points
    rng = np.random.default_rng(20240104)
    grid = [pair for pair in default_grid() if pair != EXCLUDED_ROW]
    worst_sim = 0.0
    for _ in range(30):
        n, n_f = grid[rng.integers(len(grid))]
        q = DEFAULT_Q_LEVELS[rng.integers(len(DEFAULT_Q_LEVELS))]
        cfg = SimConfig(n=n, n_f=n_f, q_list=(q,), seed=int(rng.integers(2**31)))
        est = simulate_quantiles(spec, cfg)[0]
        dev = abs(est.estimate - wilkinson_max_quantile(n, n_f, q))
        assert dev <= 3.0 * est.stderr, (n, n_f, q)
        worst_sim = max(worst_sim, dev / est.stderr)

    # closed form vs every simulated cell of the published table
    ref = load_reference("wilkinson")
    checked = 0
    worst_tab = 0.0
    for (n, n_f, q), (printed, se) in ref.items():
        if se is None or (n, n_f) == EXCLUDED_ROW:
            continue
        dev = abs(wilkinson_max_quantile(n, n_f, q) - printed)
        assert dev <= _combined_tol(None, se), (n, n_f, q)
        worst_tab = max(worst_tab, dev / se)
        checked += 1
    print(f"\nCRITERION 3: PASS - 30 fresh-simulation points (worst {worst_sim:.2f} sd) "
          f"and {checked} published cells (worst {worst_tab:.2f} sd) all within 3 sd")


# ---------------------------------------------------------------------------
# criterion 4: Edgington Irwin-Hall oracle
# ---------------------------------------------------------------------------

def test_criterion_4_edgington_oracle():
    ref = load_reference("edgington")
    checked = 0
    worst = 0.0
    for n in (3, 4, 5):
        for q in DEFAULT_Q_LEVELS:
            printed, se = ref[(n, 0, q)]
            exact = edgington_quantile_genuine(n, q)
            dev = abs(exact - printed)
            assert dev <= _combined_tol(None, se), (n, q, exact, printed)
            worst = max(worst, dev / se)
            checked += 1
    assert checked == 30
    print(f"\nCRITERION 4: PASS - 30 Irwin-Hall quantiles within 3 sd of the "
          f"published cells (worst {worst:.2f} sd)")


# ---------------------------------------------------------------------------
# criterion 5: KS goodness of fit over 100 seeded runs
# ---------------------------------------------------------------------------

def test_criterion_5_ks_goodness_of_fit():
    threshold = 1.63 / math.sqrt(4999)
    report = []
    for spec, n, n_f in [
        (MethodSpec(Method.TIPPETT), 5, 3),   # Beta(1, 8)
        (MethodSpec(Method.CHEN), 10, 0),     # chi-square(10)
    ]:
        failures = sum(
            ks_distance(ecdf(spec, n, n_f, 4999, seed=KS_BASE_SEED + i)) > threshold
            for i in range(100)
        )
        assert failures <= 1, f"{spec.method.token}: {failures} failures of 100"
        report.append(f"{spec.method.token} {100 - failures}/100")
    print(f"\nCRITERION 5: PASS - KS <= {threshold:.4f} in {' and '.join(report)} runs")


# ---------------------------------------------------------------------------
# criterion 6: estimator mechanics
# ---------------------------------------------------------------------------

def test_criterion_6_estimator_mechanics():
    indices = [quantile_index(4999, q) for q in DEFAULT_Q_LEVELS]
    assert indices == [25, 50, 125, 250, 500, 4500, 4750, 4875, 4950, 4975]

    est = aggregate([1.0, 1.2, 1.4], 0.5)
    assert abs(est.estimate - 1.2) <= 1e-10
    assert abs(est.stderr - 0.1154700538) <= 1e-10

    unit = aggregate([0.0, 2.0], 0.5)  # estimate 1, stderr 1
    lo, hi = confidence_interval(unit, 0.05)
    z = (hi - unit.estimate) / unit.stderr
    assert abs(z - 1.95996) <= 1e-5
    print(f"\nCRITERION 6: PASS - indices {indices}, aggregate (1.2, {est.stderr:.6f}), "
          f"z = {z:.6f}")


# ---------------------------------------------------------------------------
# criterion 7: property suites
# ---------------------------------------------------------------------------

def test_criterion_7_permutation_invariance():
    rng = np.random.default_rng(314159)
    specs = [MethodSpec(m) for m in Method]
    for _ in range(1000):
        n = int(rng.integers(1, 27))
        p = rng.uniform(1e-9, 1 - 1e-9, size=n)
        perm = rng.permutation(p)
        for spec in specs:
            a = evaluate_statistic(spec, p)
            b = evaluate_statistic(spec, perm)
            assert a == pytest.approx(b, rel=1e-10, abs=1e-12), spec.method
    print("\nCRITERION 7a: PASS - ten statistics permutation-invariant on 1000 vectors")


def test_criterion_7_mean_chain_and_symmetries():
    rng = np.random.default_rng(161803)
    for _ in range(1000):
        n = int(rng.integers(1, 27))
        p = rng.uniform(1e-9, 1 - 1e-9, size=n)
        h = evaluate_statistic(MethodSpec(Method.WILSON_HARMONIC), p)
        g = evaluate_statistic(MethodSpec(Method.GEOMETRIC_MEAN), p)
        a = evaluate_statistic(MethodSpec(Method.EDGINGTON), p)
        assert h <= g + 1e-12 and g <= a + 1e-12

        mg = evaluate_statistic(MethodSpec(Method.MUDHOLKAR_GEORGE), p)
        mg_flip = evaluate_statistic(MethodSpec(Method.MUDHOLKAR_GEORGE), 1.0 - p)
        assert abs(mg + mg_flip) <= 1e-12 * max(1.0, abs(mg))

        mgm = evaluate_statistic(MethodSpec(Method.MIN_GEOMETRIC_MEANS), p)
        mgm_flip = evaluate_statistic(MethodSpec(Method.MIN_GEOMETRIC_MEANS), 1.0 - p)
        assert abs(mgm - mgm_flip) <= 1e-12
    print("\nCRITERION 7b: PASS - mean chain, MG antisymmetry, min-GM symmetry on 1000 vectors")


def test_criterion_7_monotone_rows_full_grid():
    for spec, kwargs in [
        (MethodSpec(Method.TIPPETT), dict(use_exact=True)),
        (MethodSpec(Method.FISHER), dict(use_exact=False, N=499, R=3, seed=97)),
    ]:
        table = generate_table(spec, **kwargs)
        assert len(table.cells) == 1410
        rows = {}
        for c in table.cells.values():
            rows.setdefault((c.n, c.n_f), []).append((c.q, c.estimate))
        for key, cells in rows.items():
            ests = [e for _, e in sorted(cells)]
            assert all(b >= a for a, b in zip(ests, ests[1:])), (spec.method, key)
    print("\nCRITERION 7c: PASS - estimates nondecreasing in q across both full grids")


def test_criterion_7_byte_identical_csv_across_workers(tmp_path):
    spec = MethodSpec(Method.GEOMETRIC_MEAN)
    blobs = {}
    for workers in (1, 8):
        for run in ("a", "b"):
            table = generate_table(spec, n_min=3, n_max=6, N=199, R=3, seed=41,
                                   workers=workers)
            path = tmp_path / f"w{workers}{run}.csv"
            write_csv(table, path)
            blobs[(workers, run)] = path.read_bytes()
    assert blobs[(1, "a")] == blobs[(1, "b")] == blobs[(8, "a")] == blobs[(8, "b")]
    print("\nCRITERION 7d: PASS - byte-identical CSV for repeated runs with 1 and 8 workers")
