"""Atomic level energies, transition rates, dipole moments and Rabi frequencies.

Two interchangeable providers expose the same query surface:

* :func:`builtin_provider` computes everything from a mass-corrected
  Rydberg-Ritz quantum-defect model with Coulomb-approximation dipoles.
* :func:`load_atomic_table` serves rows ingested from an ``atomdata v1`` CSV
  file (the exchange format written by the external exporter).

All frequencies are stored as angular frequencies (rad/s); the file format
uses Hz.  Providers are immutable after construction and cache every query,
so repeated lookups are bit-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .constants import (
    ATOMIC_MASS,
    BOHR_RADIUS,
    RYDBERG_J,
    TWO_PI,
    c,
    e,
    epsilon_0,
    h,
    hbar,
    m_e,
)
from .defects import ELEMENT_NAMES, ISOTOPE_MASSES_U, RYDBERG_RITZ
from .errors import (
    MissingLevel,
    MissingTransition,
    NotUpward,
    ParseError,
    UnknownIsotope,
)
from .radial import radial_integral

TABLE_HEADER = "# atomdata v1"

# factor applied to dipole-forbidden pairs under the permissive policy
FORBIDDEN_SCALE = 1e-3


@dataclass(frozen=True, order=True)
class LevelQN:
    """One atomic level (n, l, j), with j stored as the doubled integer 2j."""

    n: int
    l: int
    j2: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if not 0 <= self.l < self.n:
            raise ValueError(f"l must satisfy 0 <= l < n, got l={self.l}, n={self.n}")
        if self.j2 not in (2 * self.l - 1, 2 * self.l + 1) or self.j2 <= 0:
            raise ValueError(
                f"j must be l +/- 1/2 and positive, got 2j={self.j2} for l={self.l}"
            )

    @property
    def j(self) -> float:
        return self.j2 / 2.0

    @classmethod
    def from_j(cls, n: int, l: int, j: float) -> "LevelQN":
        j2 = round(2 * j)
        if abs(2 * j - j2) > 1e-9:
            raise ValueError(f"j={j} is not a half-odd-integer")
        return cls(n, l, j2)

    def label(self) -> str:
        spect = "SPDFGHIKLMNOQ"
        lchar = spect[self.l] if self.l < len(spect) else f"(l={self.l})"
        return f"{self.n}{lchar}{self.j2}/2"


@dataclass(frozen=True)
class AtomSpec:
    """Isotope identity plus the quantum-defect series it carries."""

    z: int
    a: int
    mass: float  # kg, nucleus + electrons
    defect_series: Mapping[tuple[int, int], tuple[float, float]]

    @property
    def name(self) -> str:
        return f"{ELEMENT_NAMES.get(self.z, f'Z{self.z}')}-{self.a}"

    @property
    def rydberg_j(self) -> float:
        """Mass-corrected Rydberg energy (reduced-mass scaling)."""
        return RYDBERG_J * (self.mass - m_e) / self.mass


@dataclass(frozen=True)
class TransitionRecord:
    lower: LevelQN
    upper: LevelQN
    omega: float   # rad/s
    gamma: float   # s^-1, upper -> lower lifetime decay rate
    dipole: float  # C*m, scalar reduced dipole
    forbidden: bool = False

    def __post_init__(self):
        if self.omega <= 0:
            raise ValueError("transition frequency must be positive")
        if self.gamma < 0 or self.dipole < 0:
            raise ValueError("gamma and dipole must be non-negative")


def gaussian_peak_field(power: float, waist: float) -> float:
    """Peak electric field of a Gaussian beam, V/m."""
    if power < 0:
        raise ValueError("power must be >= 0")
    if waist <= 0:
        raise ValueError("waist must be > 0")
    return math.sqrt(4.0 * power / (math.pi * epsilon_0 * c * waist * waist))


class AtomicDataProvider:
    """Query surface shared by the builtin model and file-backed tables."""

    source: str
    z: int
    a: int

    def level_energy(self, qn: LevelQN) -> float:
        raise NotImplementedError

    def transition(self, lower: LevelQN, upper: LevelQN) -> TransitionRecord:
        raise NotImplementedError

    def rabi_frequency(
        self, lower: LevelQN, upper: LevelQN, power: float, waist: float, q: int = +1
    ) -> float:
        """Coupling Rabi frequency Omega = |mu| E_peak / hbar in rad/s."""
        record = self.transition(lower, upper)
        return record.dipole * gaussian_peak_field(power, waist) / hbar


class BuiltinProvider(AtomicDataProvider):
    """Quantum-defect model provider (see module docstring)."""

    source = "builtin"

    def __init__(self, spec: AtomSpec, policy: str = "permissive"):
        if policy not in ("permissive", "strict"):
            raise ValueError(f"unknown selection policy {policy!r}")
        self.spec = spec
        self.z = spec.z
        self.a = spec.a
        self.policy = policy
        self._energy_cache: dict[LevelQN, float] = {}
        self._transition_cache: dict[tuple[LevelQN, LevelQN], TransitionRecord] = {}

    def quantum_defect(self, qn: LevelQN) -> float:
        series = self.spec.defect_series.get((qn.l, qn.j2))
        if series is None:
            return 0.0
        d0, d2 = series
        return d0 + d2 / (qn.n - d0) ** 2

    def effective_n(self, qn: LevelQN) -> float:
        return qn.n - self.quantum_defect(qn)

    def level_energy(self, qn: LevelQN) -> float:
        cached = self._energy_cache.get(qn)
        if cached is None:
            nstar = self.effective_n(qn)
            cached = -self.spec.rydberg_j / (nstar * nstar)
            self._energy_cache[qn] = cached
        return cached

    def transition(self, lower: LevelQN, upper: LevelQN) -> TransitionRecord:
        key = (lower, upper)
        cached = self._transition_cache.get(key)
        if cached is None:
            cached = self._compute_transition(lower, upper)
            self._transition_cache[key] = cached
        return cached

    def _compute_transition(self, lower: LevelQN, upper: LevelQN) -> TransitionRecord:
        e_lo = self.level_energy(lower)
        e_up = self.level_energy(upper)
        if e_up <= e_lo:
            raise NotUpward(
                f"{upper.label()} is not above {lower.label()} for {self.spec.name}"
            )
        omega = (e_up - e_lo) / hbar
        dipole, forbidden = self._dipole(lower, upper)
        gamma = decay_rate(omega, dipole)
        return TransitionRecord(lower, upper, omega, gamma, dipole, forbidden)

    def _dipole(self, lower: LevelQN, upper: LevelQN) -> tuple[float, bool]:
        dl = upper.l - lower.l
        if abs(dl) == 1:
            mu = self._allowed_dipole(lower, upper.l, self.effective_n(upper))
            return mu, False
        if self.policy == "strict":
            return 0.0, True
        # permissive: nearest dipole-allowed effective overlap, heavily scaled
        candidates = [l for l in (lower.l - 1, lower.l + 1) if l >= 0]
        l_eff = min(candidates, key=lambda l: abs(l - upper.l))
        mu = self._allowed_dipole(lower, l_eff, self.effective_n(upper))
        return FORBIDDEN_SCALE * mu, True

    def _allowed_dipole(self, lower: LevelQN, l_up: int, nstar_up: float) -> float:
        radial = radial_integral(self.effective_n(lower), lower.l, nstar_up, l_up)
        angular = math.sqrt(max(lower.l, l_up) / (2.0 * l_up + 1.0))
        return e * BOHR_RADIUS * radial * angular


def decay_rate(omega: float, dipole: float) -> float:
    """Spontaneous decay rate Gamma = omega^3 |mu|^2 / (3 pi eps0 hbar c^3)."""
    return omega**3 * dipole**2 / (3.0 * math.pi * epsilon_0 * hbar * c**3)


def builtin_provider(z: int, a: int, policy: str = "permissive") -> BuiltinProvider:
    """Provider for one of the Table-I isotopes; raises UnknownIsotope otherwise."""
    mass_u = ISOTOPE_MASSES_U.get((z, a))
    if mass_u is None:
        raise UnknownIsotope(f"(Z={z}, A={a}) is not a supported isotope")
    spec = AtomSpec(z=z, a=a, mass=mass_u * ATOMIC_MASS, defect_series=RYDBERG_RITZ[z])
    return BuiltinProvider(spec, policy=policy)


class FileProvider(AtomicDataProvider):
    """Serves exactly the rows loaded from an ``atomdata v1`` file."""

    source = "file"

    def __init__(
        self,
        z: int,
        a: int,
        levels: Mapping[LevelQN, float],
        transitions: Mapping[tuple[LevelQN, LevelQN], TransitionRecord],
        path: str = "<memory>",
    ):
        self.z = z
        self.a = a
        self.path = path
        self._levels = dict(levels)
        self._transitions = dict(transitions)

    def level_energy(self, qn: LevelQN) -> float:
        try:
            return self._levels[qn]
        except KeyError:
            raise MissingLevel(
                f"level {qn.label()} not in table {self.path} for Z={self.z}, A={self.a}"
            ) from None

    def transition(self, lower: LevelQN, upper: LevelQN) -> TransitionRecord:
        try:
            return self._transitions[(lower, upper)]
        except KeyError:
            raise MissingTransition(
                f"transition {lower.label()} -> {upper.label()} not in table {self.path}"
            ) from None


@dataclass
class AtomicTable:
    """Parsed contents of an ``atomdata v1`` file (possibly several isotopes)."""

    levels: dict[tuple[int, int], dict[LevelQN, float]] = field(default_factory=dict)
    transitions: dict[
        tuple[int, int], dict[tuple[LevelQN, LevelQN], TransitionRecord]
    ] = field(default_factory=dict)

    def atoms(self) -> list[tuple[int, int]]:
        return sorted(set(self.levels) | set(self.transitions))


def _parse_qn(fields: list[str], lineno: int) -> LevelQN:
    n, l, j2 = (int(x) for x in fields)
    if j2 % 2 == 0:
        raise ParseError(f"line {lineno}: j2 must be odd, got {j2}")
    try:
        return LevelQN(n, l, j2)
    except ValueError as exc:
        raise ParseError(f"line {lineno}: {exc}") from None


def parse_atomic_table(path: str) -> AtomicTable:
    """Parse an ``atomdata v1`` file; raises ParseError with line numbers."""
    table = AtomicTable()
    with open(path, "r", encoding="utf-8", newline="") as fh:
        first = fh.readline()
        if first.rstrip("\n") != TABLE_HEADER:
            raise ParseError(
                f"line 1: expected header {TABLE_HEADER!r}, got {first.rstrip()!r}"
            )
        for lineno, raw in enumerate(fh, start=2):
            line = raw.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            fields = line.split(",")
            try:
                tag = fields[0]
                if tag == "L":
                    if len(fields) != 7:
                        raise ParseError(
                            f"line {lineno}: L row needs 7 fields, got {len(fields)}"
                        )
                    z, a = int(fields[1]), int(fields[2])
                    qn = _parse_qn(fields[3:6], lineno)
                    energy_hz = float(fields[6])
                    table.levels.setdefault((z, a), {})[qn] = energy_hz * h
                elif tag == "T":
                    if len(fields) not in (12, 13):
                        raise ParseError(
                            f"line {lineno}: T row needs 12 or 13 fields, got {len(fields)}"
                        )
                    z, a = int(fields[1]), int(fields[2])
                    lower = _parse_qn(fields[3:6], lineno)
                    upper = _parse_qn(fields[6:9], lineno)
                    freq_hz = float(fields[9])
                    gamma = float(fields[10])
                    dipole = float(fields[11])
                    forbidden = len(fields) == 13 and fields[12].strip() == "forbidden"
                    if freq_hz <= 0:
                        raise ParseError(f"line {lineno}: freq_hz must be > 0")
                    if gamma < 0 or dipole < 0:
                        raise ParseError(
                            f"line {lineno}: gamma and dipole must be >= 0"
                        )
                    record = TransitionRecord(
                        lower, upper, freq_hz * TWO_PI, gamma, dipole, forbidden
                    )
                    table.transitions.setdefault((z, a), {})[(lower, upper)] = record
                else:
                    raise ParseError(f"line {lineno}: unknown row tag {tag!r}")
            except ParseError:
                raise
            except (ValueError, IndexError) as exc:
                raise ParseError(f"line {lineno}: {exc}") from None
    return table


def load_atomic_table(path: str, atom: tuple[int, int] | None = None) -> FileProvider:
    """Provider backed by one isotope of an ``atomdata v1`` file.

    With ``atom=None`` the file must contain a single isotope.
    """
    table = parse_atomic_table(path)
    atoms = table.atoms()
    if atom is None:
        if len(atoms) == 1:
            atom = atoms[0]
        elif not atoms:
            atom = (0, 0)  # empty table: every query misses
        else:
            raise UnknownIsotope(
                f"{path} holds {len(atoms)} isotopes {atoms}; pass atom=(Z, A)"
            )
    elif atoms and atom not in atoms:
        raise UnknownIsotope(f"{path} has no rows for Z={atom[0]}, A={atom[1]}")
    z, a = atom
    return FileProvider(
        z,
        a,
        table.levels.get(atom, {}),
        table.transitions.get(atom, {}),
        path=path,
    )


def write_atomic_table(
    path: str,
    z: int,
    a: int,
    levels: Mapping[LevelQN, float] | Iterable[tuple[LevelQN, float]],
    transitions: Iterable[TransitionRecord],
) -> None:
    """Write an ``atomdata v1`` file (levels in J, converted to Hz on disk)."""
    if isinstance(levels, Mapping):
        level_items = sorted(levels.items())
    else:
        level_items = sorted(levels)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(TABLE_HEADER + "\n")
        for qn, energy_j in level_items:
            fh.write(f"L,{z},{a},{qn.n},{qn.l},{qn.j2},{energy_j / h!r}\n")
        for rec in transitions:
            row = (
                f"T,{z},{a},{rec.lower.n},{rec.lower.l},{rec.lower.j2},"
                f"{rec.upper.n},{rec.upper.l},{rec.upper.j2},"
                f"{rec.omega / TWO_PI!r},{rec.gamma!r},{rec.dipole!r}"
            )
            if rec.forbidden:
                row += ",forbidden"
            fh.write(row + "\n")


def table_from_provider(
    provider: AtomicDataProvider,
    levels: Iterable[LevelQN],
    pairs: Iterable[tuple[LevelQN, LevelQN]] | None = None,
) -> tuple[dict[LevelQN, float], list[TransitionRecord]]:
    """Collect level energies and (by default all upward) transition records."""
    level_list = list(levels)
    energies = {qn: provider.level_energy(qn) for qn in level_list}
    if pairs is None:
        ordered = sorted(level_list, key=lambda qn: energies[qn])
        pairs = [
            (lo, up)
            for i, lo in enumerate(ordered)
            for up in ordered[i + 1 :]
            if energies[up] > energies[lo]
        ]
    records = [provider.transition(lo, up) for lo, up in pairs]
    return energies, records


def check_table(path: str) -> dict:
    """Validate an ``atomdata v1`` file beyond raw parsing.

    Checks monotone energies in n within each (l, j) series and returns a
    summary dict; raises ParseError on any violation.
    """
    table = parse_atomic_table(path)
    for (z, a), levels in table.levels.items():
        by_series: dict[tuple[int, int], list[tuple[int, float]]] = {}
        for qn, energy in levels.items():
            by_series.setdefault((qn.l, qn.j2), []).append((qn.n, energy))
        for (l, j2), entries in by_series.items():
            entries.sort()
            for (n1, e1), (n2, e2) in zip(entries, entries[1:]):
                if e2 <= e1:
                    raise ParseError(
                        f"energies not monotone in n for Z={z} A={a} "
                        f"series (l={l}, j2={j2}): n={n1} vs n={n2}"
                    )
    return {
        "atoms": table.atoms(),
        "levels": sum(len(v) for v in table.levels.values()),
        "transitions": sum(len(v) for v in table.transitions.values()),
    }
