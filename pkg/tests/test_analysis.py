"""Analysis tests: common-engine selection, per-atom comparison identities,
ergotropy curves and the exponential fit (generator round-trip oracle)."""

import math

import numpy as np
import pytest
from scipy.constants import hbar

from eitqhe import analysis
from eitqhe.analysis import (
    PredictedEngine,
    compare_atoms,
    ergotropy_curve,
    fit_exponential,
    prediction_error_report,
    select_common_engines,
    write_curve_csv,
    read_curve_csv,
)
from eitqhe.atomdata import (
    LevelQN,
    TransitionRecord,
    builtin_provider,
    load_atomic_table,
    write_atomic_table,
)
from eitqhe.constants import TWO_PI
from eitqhe.datagen import Regime
from eitqhe.errors import ShapeMismatch


def make_engine(z, a, triple, t_ratio=1.5, omega_c=1e8, t0=1000.0):
    lv1, lv2, lv3 = (LevelQN.from_j(*t) for t in triple)
    return PredictedEngine(z, a, lv1, lv2, lv3, omega_c, t0, t_ratio)


TRIPLE_A = ((5, 1, 1.5), (7, 2, 2.5), (10, 3, 3.5))
TRIPLE_B = ((6, 1, 0.5), (8, 2, 1.5), (11, 3, 2.5))


# -- selection ----------------------------------------------------------------

def test_select_common_engines_shared_triples():
    engines = [
        make_engine(1, 1, TRIPLE_A),
        make_engine(37, 85, TRIPLE_A),
        make_engine(55, 133, TRIPLE_B),  # unique triple: dropped
    ]
    out = select_common_engines(engines, Regime.LOW)
    assert len(out) == 2
    assert [(e.z, e.a) for e in out] == [(1, 1), (37, 85)]


def test_select_common_engines_single_atom_empty():
    engines = [make_engine(1, 1, TRIPLE_A)]
    assert select_common_engines(engines, Regime.LOW) == []


def test_select_common_engines_regime_filter():
    engines = [
        make_engine(1, 1, TRIPLE_A, t_ratio=1.5),
        make_engine(37, 85, TRIPLE_A, t_ratio=3.5),  # HIGH: out of regime
    ]
    assert select_common_engines(engines, Regime.LOW) == []
    engines.append(make_engine(3, 6, TRIPLE_A, t_ratio=2.0))
    out = select_common_engines(engines, Regime.LOW)
    assert [(e.z, e.a) for e in out] == [(1, 1), (3, 6)]


def test_select_common_engines_dedup():
    engines = [
        make_engine(1, 1, TRIPLE_A),
        make_engine(1, 1, TRIPLE_A),
        make_engine(3, 7, TRIPLE_A),
    ]
    out = select_common_engines(engines, Regime.LOW)
    assert len(out) == 2


def test_select_low_regime_reference_states():
    # the low-regime study's shared states: 10P3/2 ground with 11P3/2 and
    # 14D5/2 excited; the triple must surface whenever >= 2 atoms carry it
    triple = ((10, 1, 1.5), (11, 1, 1.5), (14, 2, 2.5))
    engines = [
        make_engine(19, 39, triple, t_ratio=2.0),
        make_engine(55, 133, triple, t_ratio=1.8),
        make_engine(37, 85, TRIPLE_B, t_ratio=2.0),
    ]
    out = select_common_engines(engines, Regime.LOW)
    assert [(e.z, e.a) for e in out] == [(19, 39), (55, 133)]
    want = tuple(LevelQN.from_j(*t) for t in triple)
    for eng in out:
        assert eng.triple == want


# -- comparison ---------------------------------------------------------------

def test_compare_atoms_off_coupling_thermal():
    eng = make_engine(1, 1, ((3, 1, 0.5), (4, 1, 0.5), (6, 2, 1.5)),
                      omega_c=0.0, t0=3000.0)
    providers = {(1, 1): builtin_provider(1, 1)}
    (row,) = compare_atoms([eng], providers)
    assert row.t_ratio == pytest.approx(1.0, rel=1e-9)
    assert row.ergotropy_j == 0.0
    assert row.status == "ok"


def _write_synthetic_table(path, z, a):
    lv1, lv2, lv3 = LevelQN(3, 1, 1), LevelQN(4, 1, 1), LevelQN(6, 2, 3)
    levels = {lv1: -2.0e-19, lv2: -1.5e-19, lv3: -1.0e-19}
    recs = [
        TransitionRecord(lv1, lv3, omega=1.0e15, gamma=1e6, dipole=1e-29),
        TransitionRecord(lv2, lv3, omega=0.5e15, gamma=1e6, dipole=1e-29),
    ]
    write_atomic_table(str(path), z, a, levels, recs)


def test_compare_atoms_identical_data_identical_rows(tmp_path):
    # two isotopes backed by byte-identical tables differ only in (Z, A)
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    _write_synthetic_table(p1, 3, 6)
    _write_synthetic_table(p2, 3, 7)
    triple = ((3, 1, 0.5), (4, 1, 0.5), (6, 2, 1.5))
    engines = [make_engine(3, 6, triple, t0=2000.0), make_engine(3, 7, triple, t0=2000.0)]
    providers = {
        (3, 6): load_atomic_table(str(p1), atom=(3, 6)),
        (3, 7): load_atomic_table(str(p2), atom=(3, 7)),
    }
    r1, r2 = compare_atoms(engines, providers)
    assert (r1.z, r1.a) == (3, 6) and (r2.z, r2.a) == (3, 7)
    for field in ("t_ratio", "work", "ergotropy_j", "hbar_omega13",
                  "t_delta_s", "pop_diff", "hbar_omega23"):
        assert getattr(r1, field) == getattr(r2, field)


def test_compare_atoms_row_identities():
    eng = make_engine(37, 85, ((5, 1, 1.5), (7, 2, 2.5), (10, 3, 3.5)),
                      omega_c=2e8, t0=4000.0)
    providers = {(37, 85): builtin_provider(37, 85)}
    (row,) = compare_atoms([eng], providers)
    assert row.work == pytest.approx(row.hbar_omega13 - row.t_delta_s, rel=1e-9)
    assert row.ergotropy_j == pytest.approx(
        row.hbar_omega23 * row.pop_diff, rel=1e-12
    )


def test_compare_atoms_missing_transition_tagged(tmp_path):
    path = tmp_path / "sparse.csv"
    lv1, lv3 = LevelQN(3, 1, 1), LevelQN(6, 2, 3)
    write_atomic_table(
        str(path), 1, 1, {lv1: -2.0e-19, lv3: -1.0e-19},
        [TransitionRecord(lv1, lv3, omega=1e15, gamma=1e6, dipole=1e-29)],
    )
    eng = make_engine(1, 1, ((3, 1, 0.5), (4, 1, 0.5), (6, 2, 1.5)))
    providers = {(1, 1): load_atomic_table(str(path))}
    (row,) = compare_atoms([eng], providers)
    assert row.status == "missing_transition"
    assert math.isnan(row.work)


# -- ergotropy curve ----------------------------------------------------------

def test_ergotropy_curve_zero_grid(rubidium85):
    eng = make_engine(37, 85, ((5, 1, 1.5), (7, 2, 2.5), (10, 3, 3.5)))
    curve = ergotropy_curve(eng, rubidium85, [0.0])
    assert curve.shape == (1, 2)
    assert curve[0, 1] == 0.0


def test_ergotropy_curve_matches_closed_form(rubidium85):
    eng = make_engine(37, 85, ((5, 1, 1.5), (7, 2, 2.5), (10, 3, 3.5)),
                      t0=4000.0)
    rec23 = rubidium85.transition(eng.level2, eng.level3)
    rec13 = rubidium85.transition(eng.level1, eng.level3)
    from eitqhe.physics import derive_rates

    rates = derive_rates(rec13, rec23, eng.t0, eng.t0)
    grid = np.geomspace(1e7, 1e9, 25) * TWO_PI
    curve = ergotropy_curve(eng, rubidium85, grid)
    for oc, eps in curve:
        want = hbar * rec23.omega * oc / (3.0 * rates.r23 + 2.0 * oc)
        assert eps == pytest.approx(want, rel=1e-12)
    assert np.all(np.diff(curve[:, 1]) >= 0)
    assert curve[-1, 1] <= hbar * rec23.omega / 2.0


def test_curve_csv_round_trip(tmp_path, rubidium85):
    eng = make_engine(37, 85, ((5, 1, 1.5), (7, 2, 2.5), (10, 3, 3.5)))
    grid = np.geomspace(1e7, 1e8, 6) * TWO_PI
    curve = ergotropy_curve(eng, rubidium85, grid)
    path = tmp_path / "curve.csv"
    write_curve_csv(curve, str(path))
    omega_hz, eps_j, eps_hz = read_curve_csv(str(path))
    assert omega_hz == pytest.approx(grid / TWO_PI, rel=1e-15)
    assert eps_j == pytest.approx(curve[:, 1], rel=1e-15)
    assert eps_hz * 6.62607015e-34 == pytest.approx(curve[:, 1], rel=1e-9)


# -- exponential fit ----------------------------------------------------------

def test_fit_round_trip_single():
    omega = np.linspace(0.1, 10.0, 50)
    a, b, c = 2.0, 1.0, 0.5
    y = a * (1.0 - np.exp(-b * omega)) + c
    fit = fit_exponential(omega, y)
    assert fit.converged
    assert fit.a == pytest.approx(a, abs=1e-6)
    assert fit.b == pytest.approx(b, abs=1e-6)
    assert fit.c == pytest.approx(c, abs=1e-6)


def test_fit_round_trip_random_draws():
    rng = np.random.default_rng(77)
    omega = np.linspace(0.1, 10.0, 50)
    for _ in range(100):
        a = rng.uniform(0.1, 10.0)
        b = rng.uniform(0.1, 5.0)
        c = rng.uniform(0.1, 10.0)
        y = a * (1.0 - np.exp(-b * omega)) + c
        fit = fit_exponential(omega, y)
        assert abs(fit.a - a) < 1e-6
        assert abs(fit.b - b) < 1e-6
        assert abs(fit.c - c) < 1e-6


def test_fit_constant_data_ill_conditioned():
    omega = np.linspace(1.0, 5.0, 10)
    y = np.full(10, 3.25)
    fit = fit_exponential(omega, y)
    assert fit.ill_conditioned and not fit.converged
    assert fit.c == pytest.approx(3.25)


def test_fit_r_squared_identity():
    rng = np.random.default_rng(3)
    omega = np.linspace(0.1, 10.0, 50)
    y = 2.0 * (1.0 - np.exp(-0.8 * omega)) + 0.3 + 0.05 * rng.normal(size=50)
    fit = fit_exponential(omega, y)
    resid = fit.model(omega) - y
    rss = float(np.sum(resid**2))
    tss = float(np.sum((y - y.mean()) ** 2))
    assert fit.rss == pytest.approx(rss, rel=1e-9)
    assert fit.r_squared == pytest.approx(1.0 - rss / tss, abs=1e-12)
    assert fit.r_squared <= 1.0


def test_fit_requires_enough_distinct_samples():
    with pytest.raises(ShapeMismatch):
        fit_exponential([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        fit_exponential([1.0, 1.0, 2.0, 3.0], [1.0, 1.0, 2.0, 3.0])


def test_fit_result_file(tmp_path):
    omega = np.linspace(0.1, 10.0, 50)
    y = 2.0 * (1.0 - np.exp(-1.0 * omega)) + 0.5
    fit = fit_exponential(omega, y)
    path = tmp_path / "fit.txt"
    fit.write(str(path))
    text = path.read_text()
    assert text.startswith("a=")
    assert "converged=True" in text


# -- error report -------------------------------------------------------------

def test_error_report_perfect_predictions():
    actual = np.tile([5.0, 2.0, 2.5, 8.0, 3.0, 3.5], (40, 1))
    report = prediction_error_report(actual, actual.copy())
    for comp in report.values():
        assert comp.mode_bin == 0.0
        assert comp.counts.sum() == 40


def test_error_report_shift_by_one():
    rng = np.random.default_rng(8)
    actual = rng.integers(3, 10, size=(60, 6)).astype(float)
    report = prediction_error_report(actual, actual + 1.0)
    for comp in report.values():
        assert comp.mode_bin == 1.0


def test_error_report_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        prediction_error_report(np.zeros((4, 6)), np.zeros((5, 6)))
    with pytest.raises(ShapeMismatch):
        prediction_error_report(np.zeros((4, 5)), np.zeros((4, 5)))


def test_error_report_csv_outputs(tmp_path):
    rng = np.random.default_rng(9)
    actual = rng.integers(3, 10, size=(30, 6)).astype(float)
    predicted = actual + rng.normal(scale=0.4, size=actual.shape)
    report = prediction_error_report(actual, predicted)
    analysis.write_scatter_csv(report, str(tmp_path / "scatter.csv"))
    for name, comp in report.items():
        comp.write_csv(str(tmp_path / f"errors_{name}.csv"))
    header = (tmp_path / "scatter.csv").read_text().splitlines()[0]
    assert header.startswith("n2_actual,n2_predicted")
    lines = (tmp_path / "errors_j3.csv").read_text().splitlines()
    assert lines[0] == "error_bin_center,count"
    assert sum(int(ln.split(",")[1]) for ln in lines[1:]) == 30
