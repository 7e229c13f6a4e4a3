"""Export alkali atomic data into ``atomdata v1`` CSV tables.

Thin adapter around the Alkali Rydberg Calculator (ARC): level energies,
transition frequencies, spontaneous decay rates and stretched-geometry
dipole matrix elements are pulled from ARC and written in the exchange
format consumed by downstream tools (``# atomdata v1`` header, ``L`` level
rows, ``T`` transition rows).  Electric-dipole-forbidden pairs are emitted
with zero rate and dipole plus a ``forbidden`` marker column.

The ARC dependency is imported lazily; any other object exposing the same
small calculator protocol can be injected (used by the test suite).  This
package performs no physics of its own and does not depend on the consumer
package.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field

__version__ = "0.1.0"

TABLE_HEADER = "# atomdata v1"

PLANCK_H = 6.62607015e-34      # J s (exact, SI)
EV_J = 1.602176634e-19         # J per eV (exact, SI)
E_A0_CM = 8.4783536255e-30     # C m per atomic unit of electric dipole

ARC_CLASS_NAMES = {
    (1, 1): "Hydrogen",
    (3, 6): "Lithium6",
    (3, 7): "Lithium7",
    (11, 23): "Sodium",
    (19, 39): "Potassium39",
    (19, 40): "Potassium40",
    (19, 41): "Potassium41",
    (37, 85): "Rubidium85",
    (37, 87): "Rubidium87",
    (55, 133): "Caesium",
}


class UnsupportedIsotope(Exception):
    """The requested (Z, A) has no calculator backend."""


class ParseError(Exception):
    """An atomdata v1 file violates the format (message carries the line)."""


@dataclass(frozen=True)
class ExportRequest:
    """One atom's export: quantum-number ranges and the output path."""

    z: int
    a: int
    n_range: tuple[int, int] = (3, 14)
    l_range: tuple[int, int] = (0, 11)
    out_path: str = "atomdata.csv"
    # optional Rabi-frequency side table (written when powers is non-empty)
    powers: tuple[float, ...] = field(default_factory=tuple)
    waist: float = 50e-6
    q: int = +1

    def __post_init__(self):
        if self.n_range[0] < 1 or self.n_range[0] > self.n_range[1]:
            raise ValueError(f"bad n range {self.n_range}")
        if self.l_range[0] < 0 or self.l_range[0] > self.l_range[1]:
            raise ValueError(f"bad l range {self.l_range}")
        if self.q not in (-1, 0, 1):
            raise ValueError("q must be -1, 0 or +1")


class ArcCalculator:
    """Adapter over one ARC atom instance."""

    def __init__(self, z: int, a: int):
        name = ARC_CLASS_NAMES.get((z, a))
        if name is None:
            raise UnsupportedIsotope(
                f"(Z={z}, A={a}) has no ARC atom class "
                f"(supported: {sorted(ARC_CLASS_NAMES)})"
            )
        try:
            import arc
        except ImportError as exc:
            raise UnsupportedIsotope(
                "the 'arc' package (ARC-Alkali-Rydberg-Calculator) is not "
                "installed; install it or inject a calculator"
            ) from exc
        self._atom = getattr(arc, name)()
        self.z, self.a = z, a

    def energy_j(self, n: int, l: int, j: float) -> float:
        try:
            return float(self._atom.getEnergy(n, l, j)) * EV_J
        except Exception as exc:
            raise RuntimeError(
                f"ARC getEnergy failed for n={n} l={l} j={j}: {exc}"
            ) from exc

    def decay_rate(self, n_up, l_up, j_up, n_lo, l_lo, j_lo) -> float:
        try:
            return abs(
                float(
                    self._atom.getTransitionRate(
                        n_up, l_up, j_up, n_lo, l_lo, j_lo, temperature=0.0
                    )
                )
            )
        except Exception as exc:
            raise RuntimeError(
                f"ARC getTransitionRate failed for "
                f"({n_up},{l_up},{j_up})->({n_lo},{l_lo},{j_lo}): {exc}"
            ) from exc

    def dipole_cm(self, n_lo, l_lo, j_lo, n_up, l_up, j_up, q: int) -> float:
        # stretched geometry: the largest m_j pair the polarization allows
        mj_up = min(j_lo + q, j_up)
        mj_lo = mj_up - q
        if abs(mj_lo) > j_lo:
            return 0.0
        try:
            val = self._atom.getDipoleMatrixElement(
                n_lo, l_lo, j_lo, mj_lo, n_up, l_up, j_up, mj_up, q
            )
        except Exception as exc:
            raise RuntimeError(
                f"ARC getDipoleMatrixElement failed for "
                f"({n_lo},{l_lo},{j_lo})->({n_up},{l_up},{j_up}): {exc}"
            ) from exc
        return abs(float(val)) * E_A0_CM

    def rabi_hz(self, n_lo, l_lo, j_lo, n_up, l_up, j_up, q, power, waist):
        try:
            mj_lo = min(j_lo, j_up - q)
            omega = self._atom.getRabiFrequency(
                n_lo, l_lo, j_lo, mj_lo, n_up, l_up, j_up, q, power, waist
            )
        except Exception as exc:
            raise RuntimeError(
                f"ARC getRabiFrequency failed for "
                f"({n_lo},{l_lo},{j_lo})->({n_up},{l_up},{j_up}): {exc}"
            ) from exc
        return abs(float(omega)) / (2.0 * math.pi)


def _levels(request: ExportRequest):
    n_lo, n_hi = request.n_range
    l_lo, l_hi = request.l_range
    for n in range(n_lo, n_hi + 1):
        for l in range(l_lo, min(l_hi, n - 1) + 1):
            for j2 in (2 * l - 1, 2 * l + 1):
                if j2 > 0:
                    yield (n, l, j2)


def export_atom(request: ExportRequest, calculator=None) -> str:
    """Write one atom's ``atomdata v1`` file; returns the output path.

    Every level inside the ranges gets an ``L`` row; every pair with
    E_upper > E_lower gets a ``T`` row.  Pairs with delta-l outside {-1, +1}
    are dipole-forbidden: rate and dipole are written as zero with a
    ``forbidden`` marker.
    """
    calc = calculator if calculator is not None else ArcCalculator(request.z, request.a)
    levels = list(_levels(request))
    energies = {
        qn: calc.energy_j(qn[0], qn[1], qn[2] / 2.0) for qn in levels
    }
    ordered = sorted(levels, key=lambda qn: energies[qn])
    z, a = request.z, request.a
    rabi_rows = []
    with open(request.out_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(TABLE_HEADER + "\n")
        for n, l, j2 in sorted(levels):
            fh.write(f"L,{z},{a},{n},{l},{j2},{energies[(n, l, j2)] / PLANCK_H!r}\n")
        for i, lo in enumerate(ordered):
            for up in ordered[i + 1 :]:
                e_lo, e_up = energies[lo], energies[up]
                if e_up <= e_lo:
                    continue
                freq_hz = (e_up - e_lo) / PLANCK_H
                n1, l1, j21 = lo
                n2, l2, j22 = up
                allowed = abs(l2 - l1) == 1
                if allowed:
                    gamma = calc.decay_rate(n2, l2, j22 / 2.0, n1, l1, j21 / 2.0)
                    dipole = calc.dipole_cm(
                        n1, l1, j21 / 2.0, n2, l2, j22 / 2.0, request.q
                    )
                else:
                    gamma, dipole = 0.0, 0.0
                row = (
                    f"T,{z},{a},{n1},{l1},{j21},{n2},{l2},{j22},"
                    f"{freq_hz!r},{gamma!r},{dipole!r}"
                )
                if not allowed:
                    row += ",forbidden"
                fh.write(row + "\n")
                if request.powers and allowed:
                    for power in request.powers:
                        rabi_rows.append(
                            (n1, l1, j21, n2, l2, j22, power,
                             calc.rabi_hz(n1, l1, j21 / 2.0, n2, l2, j22 / 2.0,
                                          request.q, power, request.waist))
                        )
    if rabi_rows:
        with open(request.out_path + ".rabi.csv", "w", encoding="utf-8",
                  newline="\n") as fh:
            fh.write(
                "z,a,n_lo,l_lo,j2_lo,n_up,l_up,j2_up,power_w,omega_rabi_hz\n"
            )
            for row in rabi_rows:
                fh.write(f"{z},{a}," + ",".join(repr(v) if isinstance(v, float)
                                                else str(v) for v in row) + "\n")
    return request.out_path


def export_check(path: str) -> dict:
    """Validate format and invariants of an exported table.

    Checks the header, field counts, j2 oddness, l < n, positive transition
    frequencies, non-negative rates/dipoles and monotone level energies in n
    within each (l, j) series.  Raises ParseError with a line number on the
    first violation; returns a summary dict when the file is clean.
    """
    levels: dict[tuple[int, int, int, int, int], float] = {}
    n_transitions = 0
    with open(path, "r", encoding="utf-8") as fh:
        first = fh.readline().rstrip("\n")
        if first != TABLE_HEADER:
            raise ParseError(f"line 1: expected {TABLE_HEADER!r}, got {first!r}")
        for lineno, raw in enumerate(fh, start=2):
            line = raw.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            fields = line.split(",")
            tag = fields[0]
            try:
                if tag == "L":
                    if len(fields) != 7:
                        raise ParseError(f"line {lineno}: L row needs 7 fields")
                    z, a, n, l, j2 = (int(x) for x in fields[1:6])
                    energy_hz = float(fields[6])
                    _check_qn(n, l, j2, lineno)
                    levels[(z, a, l, j2, n)] = energy_hz
                elif tag == "T":
                    if len(fields) not in (12, 13):
                        raise ParseError(
                            f"line {lineno}: T row needs 12 or 13 fields"
                        )
                    z, a = int(fields[1]), int(fields[2])
                    n1, l1, j21 = (int(x) for x in fields[3:6])
                    n2, l2, j22 = (int(x) for x in fields[6:9])
                    _check_qn(n1, l1, j21, lineno)
                    _check_qn(n2, l2, j22, lineno)
                    freq, gamma, dipole = (float(x) for x in fields[9:12])
                    if freq <= 0:
                        raise ParseError(f"line {lineno}: freq_hz must be > 0")
                    if gamma < 0 or dipole < 0:
                        raise ParseError(
                            f"line {lineno}: gamma and dipole must be >= 0"
                        )
                    if len(fields) == 13 and fields[12] not in ("forbidden", ""):
                        raise ParseError(
                            f"line {lineno}: unknown marker {fields[12]!r}"
                        )
                    n_transitions += 1
                else:
                    raise ParseError(f"line {lineno}: unknown row tag {tag!r}")
            except ParseError:
                raise
            except ValueError as exc:
                raise ParseError(f"line {lineno}: {exc}") from None
    series: dict[tuple[int, int, int, int], list[tuple[int, float]]] = {}
    for (z, a, l, j2, n), energy in levels.items():
        series.setdefault((z, a, l, j2), []).append((n, energy))
    for key, entries in series.items():
        entries.sort()
        for (na, ea), (nb, eb) in zip(entries, entries[1:]):
            if eb <= ea:
                raise ParseError(
                    f"energies not monotone in n for series {key}: "
                    f"n={na} vs n={nb}"
                )
    return {"levels": len(levels), "transitions": n_transitions}


def _check_qn(n: int, l: int, j2: int, lineno: int) -> None:
    if n < 1 or not 0 <= l < n:
        raise ParseError(f"line {lineno}: need 1 <= l+1 <= n, got n={n} l={l}")
    if j2 % 2 == 0 or j2 <= 0 or j2 not in (2 * l - 1, 2 * l + 1):
        raise ParseError(f"line {lineno}: bad j2={j2} for l={l}")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="arc-export",
        description="Export ARC atomic data to atomdata v1 CSV",
    )
    subs = parser.add_subparsers(dest="command", required=True)
    p = subs.add_parser("export", help="export one isotope")
    p.add_argument("--z", type=int, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--n-min", type=int, default=3)
    p.add_argument("--n-max", type=int, default=14)
    p.add_argument("--l-min", type=int, default=0)
    p.add_argument("--l-max", type=int, default=11)
    p.add_argument("--out", required=True)
    p.add_argument("--powers", default="",
                   help="comma list of laser powers (W) for a Rabi side table")
    p.add_argument("--waist", type=float, default=50e-6)
    p.add_argument("--q", type=int, default=1, choices=(-1, 0, 1))
    p.add_argument("--check", action="store_true",
                   help="validate the file after writing")
    c = subs.add_parser("check", help="validate an existing table")
    c.add_argument("--table", required=True)

    args = parser.parse_args(argv)
    try:
        if args.command == "export":
            request = ExportRequest(
                z=args.z, a=args.a,
                n_range=(args.n_min, args.n_max),
                l_range=(args.l_min, args.l_max),
                out_path=args.out,
                powers=tuple(float(x) for x in args.powers.split(",") if x),
                waist=args.waist, q=args.q,
            )
            export_atom(request)
            if args.check:
                summary = export_check(args.out)
                print(f"{args.out}: OK {summary}")
            else:
                print(f"wrote {args.out}")
        else:
            summary = export_check(args.table)
            print(f"{args.table}: OK {summary}")
        return 0
    except (UnsupportedIsotope, ParseError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
