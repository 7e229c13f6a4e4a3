"""Steady-state evaluation of the three-level lambda EIT engine.

The chain is: thermal pump rates and dephasings from the two reservoir
couplings, rate-equation steady-state populations (used for ergotropy), the
upper-manifold ratio and line-center brightness closed forms (used for the
output radiation temperature), and finally work/entropy bookkeeping for the
output transition.

Two population models intentionally coexist.  The rate-equation populations
feed the ergotropy; the closed-form upper-manifold ratio feeds the brightness.
They disagree in general and are each wired exactly where this engine model
uses them.

All functions are pure; frequencies are angular (rad/s), temperatures K,
energies J.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .atomdata import AtomicDataProvider, AtomSpec, LevelQN, TransitionRecord
from .constants import hbar, k_B
from .errors import (
    DegenerateSystem,
    GainRegime,
    GainThreshold,
    InvalidFrequencies,
    NonPositiveBrightness,
    NonPositiveInput,
    SingularDenominator,
)

# exp argument above which the Bose factor is a hard zero
_FROZEN_EXPONENT = 709.0


def thermal_occupation(omega: float, temperature: float) -> float:
    """Bose occupation nbar = 1 / (exp(hbar w / kB T) - 1)."""
    if omega <= 0:
        raise NonPositiveInput(f"omega must be > 0, got {omega}")
    if temperature <= 0:
        raise NonPositiveInput(f"temperature must be > 0, got {temperature}")
    x = hbar * omega / (k_B * temperature)
    if x > _FROZEN_EXPONENT:
        return 0.0
    return 1.0 / math.expm1(x)


@dataclass(frozen=True)
class RateSet:
    """Pump rates, dephasings and their ingredients for one engine instance.

    The dephasing identities are enforced at construction:
    gamma21 = r23 + r13, gamma31 = G31 + G32 + r23 + 2 r13,
    gamma32 = G31 + G32 + r13 + 2 r23.
    """

    big_gamma31: float
    big_gamma32: float
    nbar13: float
    nbar23: float
    r13: float
    r23: float
    gamma21: float
    gamma31: float
    gamma32: float

    @classmethod
    def build(
        cls, big_gamma31: float, big_gamma32: float, nbar13: float, nbar23: float
    ) -> "RateSet":
        if min(big_gamma31, big_gamma32, nbar13, nbar23) < 0:
            raise NonPositiveInput("rates and occupations must be >= 0")
        r13 = big_gamma31 * nbar13
        r23 = big_gamma32 * nbar23
        return cls(
            big_gamma31=big_gamma31,
            big_gamma32=big_gamma32,
            nbar13=nbar13,
            nbar23=nbar23,
            r13=r13,
            r23=r23,
            gamma21=r23 + r13,
            gamma31=big_gamma31 + big_gamma32 + r23 + 2.0 * r13,
            gamma32=big_gamma31 + big_gamma32 + r13 + 2.0 * r23,
        )


def derive_rates(
    rec13: TransitionRecord, rec23: TransitionRecord, t13: float, t23: float
) -> RateSet:
    """Pump rates R_ij = Gamma_ij nbar_ij for the two reservoir couplings."""
    if t13 <= 0 or t23 <= 0:
        raise NonPositiveInput("reservoir temperatures must be > 0")
    nbar13 = thermal_occupation(rec13.omega, t13)
    nbar23 = thermal_occupation(rec23.omega, t23)
    return RateSet.build(rec13.gamma, rec23.gamma, nbar13, nbar23)


def steady_state_populations(
    r13: float, r23: float, omega_c: float
) -> tuple[float, float, float]:
    """Rate-equation steady state (rho11, rho22, rho33).

    Closed form: rho33 = (R23 + Oc) / (3 R23 + 2 Oc), rho11 = rho33,
    rho22 = R23 rho33 / (R23 + Oc).  The coupling enters additively with the
    pump rate, exactly as in the engine's rate equations.
    """
    if min(r13, r23, omega_c) < 0:
        raise NonPositiveInput("rates and omega_c must be >= 0")
    if r13 == 0 and r23 == 0 and omega_c == 0:
        raise DegenerateSystem("all of r13, r23, omega_c are zero")
    drive = r23 + omega_c
    if drive == 0:
        # level 2 is fully decoupled (r23 = omega_c = 0, r13 > 0); take the
        # thermalized limit r23 -> 0+ of the closed form
        return (1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0)
    rho33 = drive / (3.0 * r23 + 2.0 * omega_c)
    rho22 = r23 * rho33 / drive
    rho11 = rho33
    return (rho11, rho22, rho33)


def rate_model_population_difference(r13: float, r23: float, omega_c: float) -> float:
    """rho33 - rho22 of the rate model, evaluated without cancellation.

    Algebraically Oc / (3 R23 + 2 Oc); subtracting the two returned
    populations loses precision once Oc << R23, so ergotropy consumers use
    this closed form.
    """
    if min(r13, r23, omega_c) < 0:
        raise NonPositiveInput("rates and omega_c must be >= 0")
    if r13 == 0 and r23 == 0 and omega_c == 0:
        raise DegenerateSystem("all of r13, r23, omega_c are zero")
    if r23 + omega_c == 0:
        return 0.0  # thermalized corner, matching steady_state_populations
    return omega_c / (3.0 * r23 + 2.0 * omega_c)


def theta_closed_form(rates: RateSet, omega_c: float) -> float:
    """Upper-manifold-to-ground ratio Theta from the coherence solution."""
    oc2 = omega_c * omega_c
    denom = (rates.big_gamma31 + rates.r13) * (oc2 + rates.gamma32 * rates.r23)
    if denom <= 0:
        raise SingularDenominator("theta denominator must be positive")
    num = rates.r13 * (
        2.0 * oc2 + rates.gamma32 * (rates.big_gamma32 + 2.0 * rates.r23)
    )
    return num / denom


def cross_sections(
    delta_omega: float, rates: RateSet, omega_c: float
) -> tuple[float, float]:
    """(sigma_abs, sigma_em) on the output transition, in units of sigma0.

    Both are even in the detuning; the absorption dip at line center for
    Oc^2 >> gamma21*gamma31 is the EIT transparency window.
    """
    g21, g31, g32 = rates.gamma21, rates.gamma31, rates.gamma32
    oc2 = omega_c * omega_c
    d2 = delta_omega * delta_omega
    common = (
        4.0 * d2 * (-2.0 * oc2 + g21 * g21 + g31 * g31)
        + (oc2 + g21 * g31) ** 2
        + 16.0 * d2 * d2
    )
    if common == 0:
        raise SingularDenominator("cross-section denominator vanished")
    s_abs = g31 * (g21 * oc2 + g31 * (g21 * g21 + 4.0 * d2)) / common
    em_denom = common * (g32 * rates.big_gamma32 + 2.0 * oc2 + 2.0 * g32 * rates.r23)
    if em_denom == 0:
        raise SingularDenominator("emission denominator vanished")
    em_num = g31 * rates.big_gamma32 * oc2 * (oc2 + g21 * g31 - 4.0 * d2) + g31 * (
        g21 * (oc2 + g21 * g31) + 4.0 * g31 * d2
    ) * (oc2 + g32 * rates.r23)
    s_em = em_num / em_denom
    return s_abs, s_em


def sigma0(omega13: float, dipole13: float, gamma31: float) -> float:
    """Normalization cross section 2 w13 |mu13|^2 / (eps0 c hbar gamma31), m^2."""
    from .constants import c, epsilon_0

    if gamma31 <= 0:
        raise NonPositiveInput("gamma31 must be > 0")
    return 2.0 * omega13 * dipole13 * dipole13 / (epsilon_0 * c * hbar * gamma31)


def brightness_line_center(rates: RateSet, omega_c: float) -> float:
    """Line-center black-body-saturated brightness B(0), photons per mode.

    Reduces to nbar13 at omega_c = 0.  Raises GainThreshold when the medium
    stops absorbing at line center (denominator crosses zero or B <= 0),
    which also covers the frozen-bath case nbar13 = 0.
    """
    oc2 = omega_c * omega_c
    g21, g32 = rates.gamma21, rates.gamma32
    big_g32 = rates.big_gamma32
    denom = big_g32 * rates.nbar13 * oc2 - g21 * (
        g32 * big_g32 * rates.nbar23 + oc2
    )
    if denom >= 0:
        raise GainThreshold("line-center brightness denominator crossed zero")
    num = -rates.nbar13 * (
        g21 * g32 * big_g32 * rates.nbar23 + (g21 + big_g32) * oc2
    )
    b0 = num / denom
    if b0 <= 0:
        raise GainThreshold(f"non-positive line-center brightness {b0}")
    return b0


def brightness_spectrum(delta_omega: float, rates: RateSet, omega_c: float) -> float:
    """Saturated spectral brightness Theta sigma_em / (sigma_abs - Theta sigma_em)."""
    theta = theta_closed_form(rates, omega_c)
    s_abs, s_em = cross_sections(delta_omega, rates, omega_c)
    gain = theta * s_em
    if s_abs <= gain:
        raise GainRegime(
            f"sigma_abs={s_abs} <= Theta*sigma_em={gain} at detuning {delta_omega}"
        )
    return gain / (s_abs - gain)


@dataclass(frozen=True)
class PropagationSpec:
    """Medium description for brightness growth along z."""

    number_density: float  # atoms / m^3
    length: float          # m
    detuning: float        # rad/s

    def __post_init__(self):
        if self.number_density < 0 or self.length < 0:
            raise ValueError("number density and length must be >= 0")


def brightness_vs_z(
    spec: PropagationSpec,
    populations: tuple[float, float, float],
    sigma_abs: float,
    sigma_em: float,
) -> float:
    """Brightness after propagating a length z through the medium.

    Solves dB/dz + alpha B = N sigma_em (rho22 + rho33) with B(0) = 0 and
    alpha = N (sigma_abs rho11 - sigma_em (rho22 + rho33)), so the z -> inf
    limit equals the saturated spectral brightness for any density.
    """
    rho11, rho22, rho33 = populations
    upper = rho22 + rho33
    alpha = spec.number_density * (sigma_abs * rho11 - sigma_em * upper)
    if alpha <= 0:
        raise GainRegime(f"absorption coefficient alpha={alpha} is not positive")
    saturated = spec.number_density * sigma_em * upper / alpha
    return saturated * -math.expm1(-alpha * spec.length)


def populations_from_theta(theta: float) -> tuple[float, float, float]:
    """Normalized (rho11, rho22+rho33 split evenly) consistent with Theta."""
    rho11 = 1.0 / (1.0 + theta)
    upper = theta * rho11
    return (rho11, upper / 2.0, upper / 2.0)


def output_temperature(b0: float, omega13: float, t0: float) -> tuple[float, float]:
    """Effective output radiation temperature and its ratio to the reservoir.

    T = hbar w13 / (kB ln(1/B + 1)); inverting the Bose factor, so
    thermal_occupation(w13, T) == b0.
    """
    if b0 <= 0:
        raise NonPositiveBrightness(f"brightness must be > 0, got {b0}")
    if omega13 <= 0 or t0 <= 0:
        raise NonPositiveInput("omega13 and t0 must be > 0")
    t_out = hbar * omega13 / (k_B * math.log1p(1.0 / b0))
    return t_out, t_out / t0


def ergotropy(omega23: float, rho33: float, rho22: float) -> float:
    """Maximum cyclic-unitary work hbar w23 (rho33 - rho22), J.

    Negative results are permitted for caller-supplied passive-dominant
    populations; the rate model never produces them.
    """
    return hbar * omega23 * (rho33 - rho22)


def work_and_entropy(
    omega13: float,
    omega23: float,
    t0: float,
    t_out: float,
    convention: str = "main",
) -> tuple[float, float, float, float]:
    """(W, dE, T dS, T_bound) for the output transition.

    dE = hbar w13 and W = dE - T dS with
    dS = -hbar w13 / T0 - hbar w23 / T0 - hbar w13 / T   (convention "main").
    Convention "supplementary" flips the sign of the second and third terms.
    The entropy-increase bound is T_bound = T0 w13 / (w13 - w23).
    """
    if t0 <= 0 or t_out <= 0:
        raise NonPositiveInput("temperatures must be > 0")
    if omega13 <= omega23:
        raise InvalidFrequencies(
            f"omega13={omega13} must exceed omega23={omega23} (omega12 > 0)"
        )
    delta_e = hbar * omega13
    e23 = hbar * omega23
    if convention == "main":
        delta_s = -delta_e / t0 - e23 / t0 - delta_e / t_out
    elif convention == "supplementary":
        delta_s = -delta_e / t0 + e23 / t0 + delta_e / t_out
    else:
        raise ValueError(f"unknown entropy convention {convention!r}")
    t_delta_s = t_out * delta_s
    work = delta_e - t_delta_s
    t_bound = t0 * omega13 / (omega13 - omega23)
    return work, delta_e, t_delta_s, t_bound


@dataclass(frozen=True)
class EngineConfig:
    """A fully specified lambda-engine instance.

    Build through :meth:`create` so the level energy ordering
    E1 < E2 < E3 is validated against the provider.
    """

    atom: AtomSpec
    level1: LevelQN
    level2: LevelQN
    level3: LevelQN
    omega_c: float  # rad/s
    t0: float       # K
    power: float    # W
    waist: float    # m
    q: int = +1

    def __post_init__(self):
        if self.t0 <= 0:
            raise ValueError("t0 must be > 0")
        if self.omega_c < 0:
            raise ValueError("omega_c must be >= 0")
        if self.q not in (-1, 0, +1):
            raise ValueError("polarization index q must be -1, 0 or +1")

    @classmethod
    def create(
        cls,
        provider: AtomicDataProvider,
        level1: LevelQN,
        level2: LevelQN,
        level3: LevelQN,
        omega_c: float,
        t0: float,
        power: float = 0.0,
        waist: float = 50e-6,
        q: int = +1,
    ) -> "EngineConfig":
        e1 = provider.level_energy(level1)
        e2 = provider.level_energy(level2)
        e3 = provider.level_energy(level3)
        if not e1 < e2 < e3:
            raise ValueError(
                "levels must be ordered E1 < E2 < E3, got "
                f"{e1:.4e}, {e2:.4e}, {e3:.4e} for "
                f"{level1.label()}, {level2.label()}, {level3.label()}"
            )
        atom = getattr(provider, "spec", None) or AtomSpec(
            provider.z, provider.a, mass=float("nan"), defect_series={}
        )
        return cls(atom, level1, level2, level3, omega_c, t0, power, waist, q)


@dataclass(frozen=True)
class EngineObservables:
    """Evaluated physics outputs of one engine instance.

    ``pop_diff`` is the cancellation-free rho33 - rho22 of the rate model
    (what the ergotropy is built from).  When ``gain`` is set the output
    temperature is unavailable and every temperature-derived field (t_out,
    t_ratio, work, t_delta_s) is NaN.
    """

    rho11: float
    rho22: float
    rho33: float
    theta: float
    b0: float
    t_out: float
    t_ratio: float
    work: float
    t_delta_s: float
    delta_e: float
    ergotropy: float
    tb_bound: float
    pop_diff: float = 0.0
    gain: bool = False

    @property
    def ergotropy_hz(self) -> float:
        from .constants import h

        return self.ergotropy / h

    @property
    def ergotropy_rad_s(self) -> float:
        return self.ergotropy / hbar


def evaluate_engine(
    config: EngineConfig,
    provider: AtomicDataProvider,
    entropy_convention: str = "main",
) -> EngineObservables:
    """Full observable chain for one engine instance.

    GainThreshold from the brightness stage is recorded on the observables
    rather than raised; MissingTransition and level-ordering errors propagate.
    """
    e1 = provider.level_energy(config.level1)
    e2 = provider.level_energy(config.level2)
    if e2 <= e1:
        raise InvalidFrequencies("E(level2) must exceed E(level1)")
    rec13 = provider.transition(config.level1, config.level3)
    rec23 = provider.transition(config.level2, config.level3)
    rates = derive_rates(rec13, rec23, config.t0, config.t0)
    rho11, rho22, rho33 = steady_state_populations(
        rates.r13, rates.r23, config.omega_c
    )
    pop_diff = rate_model_population_difference(
        rates.r13, rates.r23, config.omega_c
    )
    eps = hbar * rec23.omega * pop_diff
    try:
        theta = theta_closed_form(rates, config.omega_c)
    except SingularDenominator:
        theta = float("nan")
    nan = float("nan")
    _, _, _, tb_bound = _bound_only(rec13.omega, rec23.omega, config.t0)
    try:
        b0 = brightness_line_center(rates, config.omega_c)
    except GainThreshold:
        return EngineObservables(
            rho11, rho22, rho33, theta, nan, nan, nan, nan, nan,
            hbar * rec13.omega, eps, tb_bound, pop_diff, gain=True,
        )
    t_out, t_ratio = output_temperature(b0, rec13.omega, config.t0)
    work, delta_e, t_delta_s, tb_bound = work_and_entropy(
        rec13.omega, rec23.omega, config.t0, t_out, convention=entropy_convention
    )
    return EngineObservables(
        rho11, rho22, rho33, theta, b0, t_out, t_ratio,
        work, t_delta_s, delta_e, eps, tb_bound, pop_diff, gain=False,
    )


def _bound_only(omega13: float, omega23: float, t0: float):
    if omega13 <= omega23:
        raise InvalidFrequencies("omega13 must exceed omega23")
    return None, None, None, t0 * omega13 / (omega13 - omega23)
