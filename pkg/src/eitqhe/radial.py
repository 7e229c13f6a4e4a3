"""Coulomb-approximation radial dipole integrals.

Bound wavefunctions outside the ionic core are Whittaker functions of the
effective principal quantum number n* = n - delta,

    u(r) = W_{n*, l+1/2}(2 r / n*),   r in Bohr radii,

normalized numerically on a shared logarithmic grid.  For non-integer n* the
solution diverges at the origin; it is zeroed below the inner classical
turning point before normalization (the standard Coulomb-approximation
cutoff).  For integer n* the regular hydrogen solution is recovered exactly,
so no cutoff is applied.

Radial integrals are returned in units of the Bohr radius.
"""

import functools
import math

import numpy as np
from scipy.special import hyperu

R_GRID = np.geomspace(1e-4, 1500.0, 6000)

# effective states with no classically allowed region get a size-scaling
# estimate instead of a wavefunction integral
FALLBACK_PREFACTOR = 1.5


@functools.lru_cache(maxsize=None)
def _wavefunction(nstar: float, l: int) -> np.ndarray | None:
    """Normalized u(r) on R_GRID, or None when no bound orbit exists."""
    if nstar <= 0.05:
        return None
    lam = l * (l + 1)
    if not _is_integerish(nstar) and nstar * nstar <= lam:
        return None
    z = 2.0 * R_GRID / nstar
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        u = np.exp(-z / 2.0) * z ** (l + 1) * hyperu(l + 1 - nstar, 2 * l + 2, z)
    u = np.nan_to_num(u, nan=0.0, posinf=0.0, neginf=0.0)
    if not _is_integerish(nstar) and lam > 0:
        r_inner = nstar * nstar * (1.0 - math.sqrt(1.0 - lam / (nstar * nstar)))
        u[R_GRID < r_inner] = 0.0
    norm_sq = np.trapezoid(u * u, R_GRID)
    if not math.isfinite(norm_sq) or norm_sq <= 0.0:
        return None
    return u / math.sqrt(norm_sq)


def _is_integerish(nstar: float) -> bool:
    return abs(nstar - round(nstar)) < 1e-9


def radial_integral(nstar1: float, l1: int, nstar2: float, l2: int) -> float:
    """|<n1* l1| r |n2* l2>| in Bohr radii.

    Falls back to a classical orbit-size estimate when either effective state
    has no classically allowed region (core-penetrating effective n*), which
    only happens for unphysical principal quantum numbers below an alkali
    ground state.
    """
    u1 = _wavefunction(nstar1, l1)
    u2 = _wavefunction(nstar2, l2)
    if u1 is None or u2 is None:
        return FALLBACK_PREFACTOR * abs(nstar1) * abs(nstar2)
    return abs(float(np.trapezoid(u1 * R_GRID * u2, R_GRID)))
