"""Labeled dataset generation over the engine parameter grid.

Each record maps nine scaled inputs (ground-state quantum numbers, coupling
Rabi frequency, laser power, reservoir temperature, output temperature ratio
and isotope identity) to the six excited-state quantum numbers.  Candidates
whose physics evaluation fails (gain threshold, frozen baths, level-ordering
violations) are rejected and tallied, never clamped.

Generation is deterministic: worker ``i`` owns the RNG stream seeded by
``(seed, i)`` and records are concatenated in worker order, so (seed, spec,
worker count) fully determine the output bytes.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Iterable, Sequence

import numpy as np

from .atomdata import AtomicDataProvider, LevelQN, builtin_provider
from .constants import OMEGA_C_REF_HZ, POWER_REF_W, T0_REF_K, TWO_PI
from .errors import (
    EmptyDataset,
    ExhaustedAttempts,
    ToolkitError,
    UnknownColumn,
)
from .physics import EngineConfig, evaluate_engine

TABLE_I_ATOMS = (
    (1, 1),
    (3, 6),
    (3, 7),
    (11, 23),
    (19, 39),
    (19, 40),
    (19, 41),
    (37, 85),
    (37, 87),
    (55, 133),
    (55, 137),
)

CSV_HEADER = "n1,l1,j1,omega_c_s,power_s,t0_s,t_ratio,z,a,n2,l2,j2,n3,l3,j3"
COLUMNS = tuple(CSV_HEADER.split(","))
INPUT_COLUMNS = COLUMNS[:9]
TARGET_COLUMNS = COLUMNS[9:]

_MAX_LEVEL_ATTEMPTS = 10_000
_REJECTION_WINDOW = 100_000


@dataclass(frozen=True)
class LevelRanges:
    """Inclusive n and l sampling bounds for one engine level."""

    n_min: int
    n_max: int
    l_min: int = 1
    l_max: int = 10

    def __post_init__(self):
        if not 1 <= self.n_min <= self.n_max:
            raise ValueError("need 1 <= n_min <= n_max")
        if not 1 <= self.l_min <= self.l_max:
            raise ValueError("need 1 <= l_min <= l_max")


TABLE_I_LEVEL1 = LevelRanges(3, 12, 1, 10)
TABLE_I_LEVEL2 = LevelRanges(4, 13, 1, 10)
TABLE_I_LEVEL3 = LevelRanges(6, 14, 1, 11)


def default_power_grid() -> tuple[float, ...]:
    """Seven laser powers, log-uniform over 1-130 W."""
    return tuple(float(p) for p in np.geomspace(1.0, 130.0, 7))


def default_t0_grid() -> tuple[float, ...]:
    """Fifty-nine reservoir temperatures, uniform over 100-6000 K."""
    return tuple(float(t) for t in np.linspace(100.0, 6000.0, 59))


@dataclass(frozen=True)
class GenerationSpec:
    """Everything that determines a generated dataset (except worker count)."""

    count: int
    seed: int
    atoms: tuple[tuple[int, int], ...] = TABLE_I_ATOMS
    level1: LevelRanges = TABLE_I_LEVEL1
    level2: LevelRanges = TABLE_I_LEVEL2
    level3: LevelRanges = TABLE_I_LEVEL3
    power_grid: tuple[float, ...] = field(default_factory=default_power_grid)
    t0_grid: tuple[float, ...] = field(default_factory=default_t0_grid)
    waist: float = 50e-6
    q: int = +1
    policy: str = "permissive"
    omega_c_override: float | None = None  # rad/s; debug hook

    def __post_init__(self):
        if self.count < 0:
            raise ValueError("count must be >= 0")
        if not self.atoms:
            raise ValueError("need at least one atom")
        if len(self.power_grid) != 7:
            raise ValueError("power grid must have exactly 7 values")
        if len(self.t0_grid) != 59:
            raise ValueError("t0 grid must have exactly 59 values")
        if not all(1.0 <= p <= 130.0 for p in self.power_grid):
            raise ValueError("power grid must lie within 1-130 W")
        if not all(100.0 <= t <= 6000.0 for t in self.t0_grid):
            raise ValueError("t0 grid must lie within 100-6000 K")
        for ranges, outer in (
            (self.level1, TABLE_I_LEVEL1),
            (self.level2, TABLE_I_LEVEL2),
            (self.level3, TABLE_I_LEVEL3),
        ):
            if ranges.n_min < outer.n_min or ranges.n_max > outer.n_max:
                raise ValueError(f"n range {ranges} outside {outer}")
            if ranges.l_min < outer.l_min or ranges.l_max > outer.l_max:
                raise ValueError(f"l range {ranges} outside {outer}")
        if self.waist <= 0:
            raise ValueError("waist must be > 0")


@dataclass(frozen=True)
class SampleRecord:
    """One dataset row: nine scaled inputs, six target quantum numbers."""

    n1: int
    l1: int
    j1: float
    omega_c_s: float
    power_s: float
    t0_s: float
    t_ratio: float
    z: int
    a: int
    n2: int
    l2: int
    j2: float
    n3: int
    l3: int
    j3: float

    def inputs(self) -> tuple[float, ...]:
        return (
            float(self.n1), float(self.l1), self.j1,
            self.omega_c_s, self.power_s, self.t0_s,
            self.t_ratio, float(self.z), float(self.a),
        )

    def targets(self) -> tuple[float, ...]:
        return (
            float(self.n2), float(self.l2), self.j2,
            float(self.n3), float(self.l3), self.j3,
        )

    def validate(self) -> None:
        if not self.n1 < self.n2 < self.n3:
            raise ValueError(f"need n1 < n2 < n3, got {self.n1}, {self.n2}, {self.n3}")
        for n, l, j in ((self.n1, self.l1, self.j1),
                        (self.n2, self.l2, self.j2),
                        (self.n3, self.l3, self.j3)):
            LevelQN.from_j(n, l, j)
        if not (math.isfinite(self.t_ratio) and self.t_ratio > 0):
            raise ValueError(f"t_ratio must be finite and > 0, got {self.t_ratio}")

    def to_csv_row(self) -> str:
        vals = (
            self.n1, self.l1, repr(self.j1),
            repr(self.omega_c_s), repr(self.power_s), repr(self.t0_s),
            repr(self.t_ratio), self.z, self.a,
            self.n2, self.l2, repr(self.j2),
            self.n3, self.l3, repr(self.j3),
        )
        return ",".join(str(v) for v in vals)


def normalize_inputs(
    omega_c_hz: float, power_w: float, t0_k: float
) -> tuple[float, float, float]:
    """Scale the three dimensionful inputs by their reference values."""
    return (omega_c_hz / OMEGA_C_REF_HZ, power_w / POWER_REF_W, t0_k / T0_REF_K)


def denormalize_inputs(
    omega_c_s: float, power_s: float, t0_s: float
) -> tuple[float, float, float]:
    return (omega_c_s * OMEGA_C_REF_HZ, power_s * POWER_REF_W, t0_s * T0_REF_K)


def sample_levels(
    rng: np.random.Generator, spec: GenerationSpec, _atom: tuple[int, int] | None = None
) -> tuple[LevelQN, LevelQN, LevelQN]:
    """Rejection-sample a level triple with n1 < n2 < n3 inside Table-I ranges."""
    for _ in range(_MAX_LEVEL_ATTEMPTS):
        levels = []
        for ranges in (spec.level1, spec.level2, spec.level3):
            n = int(rng.integers(ranges.n_min, ranges.n_max + 1))
            l_hi = min(ranges.l_max, n - 1)
            if ranges.l_min > l_hi:
                levels = None
                break
            l = int(rng.integers(ranges.l_min, l_hi + 1))
            j2 = 2 * l + (1 if rng.integers(2) else -1)
            levels.append(LevelQN(n, l, j2))
        if levels is None:
            continue
        if levels[0].n < levels[1].n < levels[2].n:
            return tuple(levels)
    raise ExhaustedAttempts(
        f"no valid level triple after {_MAX_LEVEL_ATTEMPTS} attempts; "
        "check the configured ranges"
    )


@dataclass
class GenerationReport:
    """Tallies and provenance for one generation run."""

    spec: GenerationSpec
    workers: int
    candidates: int = 0
    emitted: int = 0
    rejections: dict[str, int] = field(default_factory=dict)
    omega_c_hz_min: float = math.inf
    omega_c_hz_max: float = -math.inf
    provider_sources: dict[str, str] = field(default_factory=dict)

    def reject(self, reason: str) -> None:
        self.rejections[reason] = self.rejections.get(reason, 0) + 1

    def merge(self, other: "GenerationReport") -> None:
        self.candidates += other.candidates
        self.emitted += other.emitted
        for reason, count in other.rejections.items():
            self.rejections[reason] = self.rejections.get(reason, 0) + count
        self.omega_c_hz_min = min(self.omega_c_hz_min, other.omega_c_hz_min)
        self.omega_c_hz_max = max(self.omega_c_hz_max, other.omega_c_hz_max)
        self.provider_sources.update(other.provider_sources)

    def lines(self) -> list[str]:
        spec = self.spec
        out = [
            f"count={spec.count}",
            f"seed={spec.seed}",
            f"workers={self.workers}",
            f"candidates={self.candidates}",
            f"emitted={self.emitted}",
            f"atoms={';'.join(f'{z}:{a}' for z, a in spec.atoms)}",
            f"power_grid_w={';'.join(repr(p) for p in spec.power_grid)}",
            f"t0_grid_k={';'.join(repr(t) for t in spec.t0_grid)}",
            f"waist_m={spec.waist!r}",
            f"q={spec.q}",
            f"policy={spec.policy}",
            f"omega_c_override={spec.omega_c_override!r}",
            f"omega_c_hz_min={self.omega_c_hz_min!r}",
            f"omega_c_hz_max={self.omega_c_hz_max!r}",
        ]
        for reason in sorted(self.rejections):
            out.append(f"rejected_{reason}={self.rejections[reason]}")
        for atom in sorted(self.provider_sources):
            out.append(f"provider_{atom}={self.provider_sources[atom]}")
        return out

    def write(self, path: str) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(self.lines()) + "\n")


ProviderFactory = Callable[[int, int], AtomicDataProvider]


def _builtin_factory(z: int, a: int, policy: str) -> AtomicDataProvider:
    return builtin_provider(z, a, policy=policy)


def _default_factory(spec: GenerationSpec) -> ProviderFactory:
    # functools.partial of a module-level function so worker processes can
    # unpickle it
    return functools.partial(_builtin_factory, policy=spec.policy)


def _generate_stream(
    spec: GenerationSpec,
    provider_factory: ProviderFactory,
    worker_index: int,
    quota: int,
) -> tuple[list[SampleRecord], GenerationReport]:
    rng = np.random.default_rng((spec.seed, worker_index))
    report = GenerationReport(spec=spec, workers=0)
    providers = {za: provider_factory(*za) for za in spec.atoms}
    for za, prov in providers.items():
        report.provider_sources[f"{za[0]}:{za[1]}"] = prov.source
    records: list[SampleRecord] = []
    window_rejects = 0
    while len(records) < quota:
        report.candidates += 1
        if report.candidates % _REJECTION_WINDOW == 0:
            if window_rejects / _REJECTION_WINDOW > 0.999:
                raise ExhaustedAttempts(
                    f"rejection rate above 99.9% over the last {_REJECTION_WINDOW} "
                    "candidates"
                )
            window_rejects = 0
        atom = spec.atoms[rng.integers(len(spec.atoms))]
        provider = providers[atom]
        try:
            lv1, lv2, lv3 = sample_levels(rng, spec, atom)
        except ExhaustedAttempts:
            raise
        power = spec.power_grid[rng.integers(len(spec.power_grid))]
        t0 = spec.t0_grid[rng.integers(len(spec.t0_grid))]
        try:
            e1 = provider.level_energy(lv1)
            e2 = provider.level_energy(lv2)
            e3 = provider.level_energy(lv3)
            if not e1 < e2 < e3:
                report.reject("level_order")
                window_rejects += 1
                continue
            if spec.omega_c_override is not None:
                omega_c = spec.omega_c_override
            else:
                omega_c = provider.rabi_frequency(lv2, lv3, power, spec.waist, spec.q)
            config = EngineConfig.create(
                provider, lv1, lv2, lv3, omega_c, t0, power, spec.waist, spec.q
            )
            obs = evaluate_engine(config, provider)
        except ToolkitError as exc:
            report.reject(type(exc).__name__)
            window_rejects += 1
            continue
        if obs.gain or not (math.isfinite(obs.t_ratio) and obs.t_ratio > 0):
            report.reject("GainThreshold")
            window_rejects += 1
            continue
        omega_c_hz = omega_c / TWO_PI
        scaled = normalize_inputs(omega_c_hz, power, t0)
        records.append(
            SampleRecord(
                n1=lv1.n, l1=lv1.l, j1=lv1.j,
                omega_c_s=scaled[0], power_s=scaled[1], t0_s=scaled[2],
                t_ratio=obs.t_ratio, z=atom[0], a=atom[1],
                n2=lv2.n, l2=lv2.l, j2=lv2.j,
                n3=lv3.n, l3=lv3.l, j3=lv3.j,
            )
        )
        report.emitted += 1
        report.omega_c_hz_min = min(report.omega_c_hz_min, omega_c_hz)
        report.omega_c_hz_max = max(report.omega_c_hz_max, omega_c_hz)
    return records, report


def _worker_quotas(count: int, workers: int) -> list[int]:
    base, extra = divmod(count, workers)
    return [base + (1 if i < extra else 0) for i in range(workers)]


def generate_dataset(
    spec: GenerationSpec,
    provider_factory: ProviderFactory | None = None,
    workers: int = 1,
) -> tuple[list[SampleRecord], GenerationReport]:
    """Generate exactly ``spec.count`` valid records plus a tally report."""
    if workers < 1:
        raise ValueError("workers must be >= 1")
    factory = provider_factory or _default_factory(spec)
    total = GenerationReport(spec=spec, workers=workers)
    records: list[SampleRecord] = []
    quotas = _worker_quotas(spec.count, workers)
    if workers == 1:
        shards = [_generate_stream(spec, factory, 0, quotas[0])]
    else:
        import multiprocessing as mp

        with mp.get_context("spawn").Pool(workers) as pool:
            shards = pool.starmap(
                _generate_stream,
                [(spec, factory, i, quotas[i]) for i in range(workers)],
            )
    for shard_records, shard_report in shards:
        records.extend(shard_records)
        total.merge(shard_report)
    return records, total


def write_dataset(records: Iterable[SampleRecord], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(CSV_HEADER + "\n")
        for rec in records:
            fh.write(rec.to_csv_row() + "\n")


def read_dataset(path: str) -> list[SampleRecord]:
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if header != CSV_HEADER:
            raise EmptyDataset(f"{path} is not a dataset file (bad header)")
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            f = line.split(",")
            records.append(
                SampleRecord(
                    n1=int(f[0]), l1=int(f[1]), j1=float(f[2]),
                    omega_c_s=float(f[3]), power_s=float(f[4]), t0_s=float(f[5]),
                    t_ratio=float(f[6]), z=int(f[7]), a=int(f[8]),
                    n2=int(f[9]), l2=int(f[10]), j2=float(f[11]),
                    n3=int(f[12]), l3=int(f[13]), j3=float(f[14]),
                )
            )
    return records


def validate_dataset(path: str) -> int:
    """Validator pass over a dataset file; returns the record count."""
    records = read_dataset(path)
    for rec in records:
        rec.validate()
    return len(records)


def to_arrays(records: Sequence[SampleRecord]) -> tuple[np.ndarray, np.ndarray]:
    """Dataset as (inputs, targets) float arrays of shapes (N, 9) and (N, 6)."""
    x = np.array([rec.inputs() for rec in records], dtype=float)
    y = np.array([rec.targets() for rec in records], dtype=float)
    return x.reshape(-1, 9), y.reshape(-1, 6)


def split_dataset(
    records: Sequence[SampleRecord], train_fraction: float = 0.8, seed: int = 0
) -> tuple[list[SampleRecord], list[SampleRecord]]:
    """Shuffled disjoint-and-exhaustive split; |train| = round(f * N)."""
    if not 0.0 < train_fraction < 1.0:
        raise ValueError("train_fraction must be in (0, 1)")
    if len(records) == 0:
        raise EmptyDataset("cannot split an empty dataset")
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(records))
    n_train = round(train_fraction * len(records))
    train = [records[i] for i in order[:n_train]]
    val = [records[i] for i in order[n_train:]]
    return train, val


class Regime(Enum):
    LOW = "low"
    MID = "mid"
    HIGH = "high"


REGIME_THRESHOLDS = (2.24, 3.0)


def regime_label(t_ratio: float) -> Regime:
    """Output-temperature regime; both thresholds belong to MID."""
    if not (math.isfinite(t_ratio) and t_ratio > 0):
        raise ValueError(f"t_ratio must be finite and positive, got {t_ratio}")
    low, high = REGIME_THRESHOLDS
    if t_ratio < low:
        return Regime.LOW
    if t_ratio <= high:
        return Regime.MID
    return Regime.HIGH


def column_values(records: Sequence[SampleRecord], column: str) -> np.ndarray:
    if column not in COLUMNS:
        raise UnknownColumn(f"unknown column {column!r}; expected one of {COLUMNS}")
    return np.array([getattr(rec, column) for rec in records], dtype=float)


@dataclass(frozen=True)
class HistogramTable:
    column: str
    edges: tuple[float, ...]
    counts: tuple[int, ...]

    def total(self) -> int:
        return sum(self.counts)

    def write_csv(self, path: str) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("bin_lo,bin_hi,count\n")
            for lo, hi, cnt in zip(self.edges, self.edges[1:], self.counts):
                fh.write(f"{lo!r},{hi!r},{cnt}\n")


def histogram(
    records: Sequence[SampleRecord],
    column: str,
    bins: int | Sequence[float] = 10,
) -> HistogramTable:
    """Histogram of one dataset column; counts always sum to the record count."""
    values = column_values(records, column)
    if isinstance(bins, int):
        if bins < 1:
            raise ValueError("need at least one bin")
        lo = float(values.min()) if len(values) else 0.0
        hi = float(values.max()) if len(values) else 1.0
        if lo == hi:
            hi = lo + 1.0
        edges = np.linspace(lo, hi, bins + 1)
    else:
        edges = np.asarray(bins, dtype=float)
        if len(edges) < 2 or np.any(np.diff(edges) <= 0):
            raise ValueError("explicit bin edges must be increasing")
        if len(values) and (values.min() < edges[0] or values.max() > edges[-1]):
            raise ValueError("explicit bin edges must cover the data range")
    counts, _ = np.histogram(values, bins=edges)
    return HistogramTable(
        column=column,
        edges=tuple(float(x) for x in edges),
        counts=tuple(int(c) for c in counts),
    )


def with_count(spec: GenerationSpec, count: int) -> GenerationSpec:
    return replace(spec, count=count)
