"""Post-prediction analytics for predicted engines.

Filters predicted engines sharing identical level triples across atoms within
an output-temperature regime, rebuilds their thermodynamic observables per
atom, traces ergotropy against the coupling Rabi frequency and fits the
saturating exponential model, and summarizes prediction errors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .atomdata import AtomicDataProvider, LevelQN
from .constants import TWO_PI, h, hbar
from .datagen import Regime, regime_label
from .errors import MissingLevel, MissingTransition, ShapeMismatch, ToolkitError
from .physics import (
    EngineConfig,
    derive_rates,
    evaluate_engine,
    rate_model_population_difference,
)


@dataclass(frozen=True)
class PredictedEngine:
    """One predicted engine instance (atom identity, levels, drive, bath)."""

    z: int
    a: int
    level1: LevelQN
    level2: LevelQN
    level3: LevelQN
    omega_c: float  # rad/s
    t0: float       # K
    t_ratio: float

    @property
    def triple(self) -> tuple[LevelQN, LevelQN, LevelQN]:
        return (self.level1, self.level2, self.level3)


def select_common_engines(
    engines: Sequence[PredictedEngine], regime: Regime
) -> list[PredictedEngine]:
    """Engines whose exact level triple appears for >= 2 atoms in the regime.

    De-duplicated by (atom, triple); deterministic (Z, A) ordering.
    """
    in_regime = [e for e in engines if regime_label(e.t_ratio) is regime]
    seen: dict[tuple, PredictedEngine] = {}
    for eng in in_regime:
        seen.setdefault(((eng.z, eng.a), eng.triple), eng)
    atoms_per_triple: dict[tuple, set] = {}
    for (atom, triple), _ in seen.items():
        atoms_per_triple.setdefault(triple, set()).add(atom)
    selected = [
        eng
        for (atom, triple), eng in seen.items()
        if len(atoms_per_triple[triple]) >= 2
    ]
    return sorted(selected, key=lambda e: (e.z, e.a, e.triple))


@dataclass(frozen=True)
class EngineComparisonRow:
    """Per-atom thermodynamic comparison (one figure-panel set per row)."""

    z: int
    a: int
    t_ratio: float
    t0: float
    omega_c_hz: float
    work: float
    ergotropy_j: float
    ergotropy_hz: float
    hbar_omega13: float
    t_delta_s: float
    pop_diff: float
    hbar_omega23: float
    status: str = "ok"

    CSV_HEADER = (
        "z,a,t_ratio,t0,omega_c_hz,work_j,ergotropy_j,ergotropy_hz,"
        "hbar_omega13_j,t_delta_s_j,pop_diff,hbar_omega23_j,status"
    )

    def to_csv_row(self) -> str:
        return ",".join(
            [
                str(self.z), str(self.a), repr(self.t_ratio), repr(self.t0),
                repr(self.omega_c_hz), repr(self.work), repr(self.ergotropy_j),
                repr(self.ergotropy_hz), repr(self.hbar_omega13),
                repr(self.t_delta_s), repr(self.pop_diff),
                repr(self.hbar_omega23), self.status,
            ]
        )


def compare_atoms(
    engines: Sequence[PredictedEngine],
    providers: Mapping[tuple[int, int], AtomicDataProvider],
) -> list[EngineComparisonRow]:
    """One comparison row per engine; missing transitions are tagged, not dropped."""
    rows = []
    for eng in engines:
        provider = providers[(eng.z, eng.a)]
        nan = float("nan")
        try:
            config = EngineConfig.create(
                provider, eng.level1, eng.level2, eng.level3, eng.omega_c, eng.t0
            )
            obs = evaluate_engine(config, provider)
        except (MissingTransition, MissingLevel, ToolkitError, ValueError) as exc:
            # predicted engines may be unphysical (degenerate or misordered
            # levels) or outside table coverage; tag the row instead of
            # dropping it
            if isinstance(exc, (MissingTransition, MissingLevel)):
                status = "missing_transition"
            else:
                status = "invalid_levels"
            rows.append(
                EngineComparisonRow(
                    eng.z, eng.a, nan, eng.t0, eng.omega_c / TWO_PI,
                    nan, nan, nan, nan, nan, nan, nan,
                    status=status,
                )
            )
            continue
        rec23 = provider.transition(eng.level2, eng.level3)
        rows.append(
            EngineComparisonRow(
                z=eng.z,
                a=eng.a,
                t_ratio=obs.t_ratio,
                t0=eng.t0,
                omega_c_hz=eng.omega_c / TWO_PI,
                work=obs.work,
                ergotropy_j=obs.ergotropy,
                ergotropy_hz=obs.ergotropy / h,
                hbar_omega13=obs.delta_e,
                t_delta_s=obs.t_delta_s,
                pop_diff=obs.pop_diff,
                hbar_omega23=hbar * rec23.omega,
                status="gain" if obs.gain else "ok",
            )
        )
    return rows


def write_comparison_csv(rows: Sequence[EngineComparisonRow], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(EngineComparisonRow.CSV_HEADER + "\n")
        for row in rows:
            fh.write(row.to_csv_row() + "\n")


def ergotropy_curve(
    engine: PredictedEngine,
    provider: AtomicDataProvider,
    omega_c_grid: Sequence[float],
) -> np.ndarray:
    """Ergotropy samples over an ascending Rabi-frequency grid (rad/s).

    Returns an (N, 2) array of (omega_c, ergotropy_J); nondecreasing in the
    rate model.
    """
    grid = np.asarray(omega_c_grid, dtype=float)
    if len(grid) == 0 or np.any(grid < 0) or np.any(np.diff(grid) < 0):
        raise ValueError("omega_c grid must be non-negative and ascending")
    rec13 = provider.transition(engine.level1, engine.level3)
    rec23 = provider.transition(engine.level2, engine.level3)
    rates = derive_rates(rec13, rec23, engine.t0, engine.t0)
    out = np.empty((len(grid), 2))
    for i, oc in enumerate(grid):
        if rates.r13 == 0 and rates.r23 == 0 and oc == 0:
            eps = 0.0
        else:
            diff = rate_model_population_difference(rates.r13, rates.r23, oc)
            eps = hbar * rec23.omega * diff
        out[i] = (oc, eps)
    return out


def write_curve_csv(curve: np.ndarray, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("omega_c_hz,ergotropy_j,ergotropy_hz\n")
        for oc, eps in curve:
            fh.write(f"{float(oc) / TWO_PI!r},{float(eps)!r},{float(eps) / h!r}\n")


def read_curve_csv(path: str) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(omega_c_hz, ergotropy_j, ergotropy_hz) columns of a curve file."""
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.shape[1] != 3:
        raise ShapeMismatch(f"{path}: expected 3 columns, got {data.shape[1]}")
    return data[:, 0], data[:, 1], data[:, 2]


@dataclass(frozen=True)
class FitResult:
    """Parameters of eps(Oc) = a (1 - exp(-b Oc)) + c plus fit diagnostics."""

    a: float
    b: float
    c: float
    rss: float
    r_squared: float
    iterations: int
    converged: bool
    ill_conditioned: bool = False

    def model(self, omega: np.ndarray) -> np.ndarray:
        return _exp_model(np.array([self.a, self.b, self.c]), np.asarray(omega))

    def write(self, path: str) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(f"a={self.a!r}\n")
            fh.write(f"b={self.b!r}\n")
            fh.write(f"c={self.c!r}\n")
            fh.write(f"rss={self.rss!r}\n")
            fh.write(f"r2={self.r_squared!r}\n")
            fh.write(f"iterations={self.iterations}\n")
            fh.write(f"converged={self.converged}\n")
            fh.write(f"ill_conditioned={self.ill_conditioned}\n")


def _exp_model(params: np.ndarray, omega: np.ndarray) -> np.ndarray:
    a, b, c = params
    return a * -np.expm1(np.clip(-b * omega, -700.0, 700.0)) + c


def _jacobian(params: np.ndarray, omega: np.ndarray) -> np.ndarray:
    a, b, _ = params
    expo = np.exp(np.clip(-b * omega, -700.0, 700.0))
    return np.column_stack([1.0 - expo, a * omega * expo, np.ones_like(omega)])


def fit_exponential(
    omega: Sequence[float],
    eps: Sequence[float],
    max_iter: int = 500,
    rel_tol: float = 1e-10,
) -> FitResult:
    """Damped Gauss-Newton least squares fit of the saturating exponential.

    Initialized at a = range of the data, c = its minimum and
    b = 1 / median(omega).  Constant data is flagged ill-conditioned and
    returns c = mean with zero amplitude.
    """
    w = np.asarray(omega, dtype=float)
    y = np.asarray(eps, dtype=float)
    if w.shape != y.shape or w.ndim != 1:
        raise ShapeMismatch("omega and eps must be equal-length 1-D arrays")
    if len(w) < 4:
        raise ShapeMismatch("need at least 4 samples to fit 3 parameters")
    if len(np.unique(w)) != len(w):
        raise ValueError("omega values must be distinct")
    tss = float(np.sum((y - y.mean()) ** 2))
    if np.ptp(y) == 0.0:
        return FitResult(
            a=0.0, b=0.0, c=float(y.mean()), rss=0.0, r_squared=0.0,
            iterations=0, converged=False, ill_conditioned=True,
        )
    params = np.array([float(np.ptp(y)), 1.0 / float(np.median(w)), float(y.min())])
    lam = 1e-3
    rss = float(np.sum((_exp_model(params, w) - y) ** 2))
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        resid = _exp_model(params, w) - y
        jac = _jacobian(params, w)
        jtj = jac.T @ jac
        jtr = jac.T @ resid
        step_taken = False
        for _ in range(25):
            damped = jtj + lam * np.diag(np.diag(jtj).clip(min=1e-300))
            try:
                delta = np.linalg.solve(damped, -jtr)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            trial = params + delta
            with np.errstate(over="ignore"):
                trial_rss = float(np.sum((_exp_model(trial, w) - y) ** 2))
            if trial_rss <= rss:
                rel_change = float(
                    np.max(np.abs(delta) / np.maximum(np.abs(params), 1e-300))
                )
                params, rss = trial, trial_rss
                lam = max(lam * 0.3, 1e-14)
                step_taken = True
                if rel_change < rel_tol:
                    converged = True
                break
            lam *= 10.0
        if converged or not step_taken:
            converged = converged or not step_taken
            break
    r_squared = 1.0 - rss / tss if tss > 0 else 0.0
    return FitResult(
        a=float(params[0]), b=float(params[1]), c=float(params[2]),
        rss=rss, r_squared=r_squared, iterations=iterations,
        converged=converged,
    )


ERROR_COMPONENTS = ("n2", "l2", "j2", "n3", "l3", "j3")


@dataclass(frozen=True)
class ComponentErrors:
    component: str
    actual: np.ndarray
    predicted: np.ndarray
    bin_centers: np.ndarray
    counts: np.ndarray

    @property
    def mode_bin(self) -> float:
        return float(self.bin_centers[int(np.argmax(self.counts))])

    def write_csv(self, path: str) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("error_bin_center,count\n")
            for center, count in zip(self.bin_centers, self.counts):
                fh.write(f"{float(center)!r},{int(count)}\n")


def prediction_error_report(
    actual: np.ndarray, predicted: np.ndarray
) -> dict[str, ComponentErrors]:
    """Scatter data and unit-bin error histograms for the six components.

    Bins are centered on integers for n and l and on half-integers for j,
    matching the lattice of the targets.  Errors are raw (pre-rounding)
    prediction minus truth.
    """
    act = np.asarray(actual, dtype=float)
    pred = np.asarray(predicted, dtype=float)
    if act.shape != pred.shape or act.ndim != 2 or act.shape[1] != 6:
        raise ShapeMismatch(
            f"need matching (N, 6) arrays, got {act.shape} and {pred.shape}"
        )
    report = {}
    for k, name in enumerate(ERROR_COMPONENTS):
        errors = pred[:, k] - act[:, k]
        lo = math.floor(errors.min())
        hi = math.ceil(errors.max())
        centers = np.arange(lo, hi + 1, dtype=float)
        edges = np.concatenate([centers - 0.5, [centers[-1] + 0.5]])
        counts, _ = np.histogram(errors, bins=edges)
        report[name] = ComponentErrors(
            component=name,
            actual=act[:, k].copy(),
            predicted=pred[:, k].copy(),
            bin_centers=centers,
            counts=counts,
        )
    return report


def write_scatter_csv(report: dict[str, ComponentErrors], path: str) -> None:
    comps = [report[name] for name in ERROR_COMPONENTS]
    n = len(comps[0].actual)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(
            ",".join(f"{c.component}_actual,{c.component}_predicted" for c in comps)
            + "\n"
        )
        for i in range(n):
            fh.write(
                ",".join(
                    f"{float(c.actual[i])!r},{float(c.predicted[i])!r}"
                    for c in comps
                )
                + "\n"
            )
