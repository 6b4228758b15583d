"""Decoherence-rate estimate from environmental scattering.

Two regimes contribute for the temperatures of interest.  Residual gas
molecules have thermal wavelengths far below the superposition width, so
each collision fully resolves the arms (short-wavelength limit) and the
off-diagonal decay rate is the total scattering rate

    Gamma_air = lambda_air^2 * Lambda_air,
    Lambda_air = (8 / 3 hbar^2) (N/V) a^2 sqrt(2 pi m_gas) (k_B T_e)^(3/2),

with lambda_air = h / sqrt(2 pi m_gas k_B T_e) the thermal de Broglie
wavelength.  Blackbody photons have wavelengths far above the width, so
their effect enters through a scattering constant (long-wavelength limit)

    gamma = Gamma_air + Lambda_bb * delta_x^2,
    Lambda_bb = Lambda_scatter + Lambda_emit + Lambda_absorb,

where the sphere of radius a and dielectric constant eps gives

    Lambda_scatter = 8! * (8 / 9 pi) a^6 c Re((eps-1)/(eps+2))^2 (k_B T_e / hbar c)^9 zeta(9),
    Lambda_emit/absorb = (16 pi^5 / 189) a^3 c Im((eps-1)/(eps+2)) (k_B T / hbar c)^6,

with T the internal temperature for emission and the environment
temperature for absorption.  Leaving either wavelength regime raises a
`RegimeWarning` rather than silently clamping.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

BOLTZMANN = 1.380649e-23          # J/K
PLANCK = 6.62607015e-34           # J s
HBAR = 1.054571817e-34            # J s
SPEED_OF_LIGHT = 2.99792458e8     # m/s
ATOMIC_MASS = 1.66053906660e-27   # kg
ZETA_9 = 1.002008392826082        # Riemann zeta(9)


class RegimeWarning(UserWarning):
    """A wavelength-limit approximation is used outside its regime."""


@dataclass(frozen=True)
class EnvironmentParams:
    """Environment and test-mass properties for the rate estimate (SI units)."""

    T_e: float                          # K, environment temperature
    T_i: float = 0.15                   # K, internal temperature of the mass
    number_density: float = 1e8         # m^-3 residual gas
    sphere_radius: float = 1e-6         # m
    gas_particle_mass: float = 28.97 * ATOMIC_MASS  # kg, typical air molecule
    dielectric: complex = 5.68 + 1.1e-4j            # diamond-like
    delta_x: float = 250e-6             # m, superposition width

    def __post_init__(self):
        for name in ("T_e", "T_i", "number_density", "sphere_radius",
                     "gas_particle_mass", "delta_x"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be strictly positive")
        if self.dielectric.imag < 0:
            raise ValueError("Im(dielectric) must be non-negative")


@dataclass(frozen=True)
class BlackbodyRates:
    """Long-wavelength scattering constants (s^-1 m^-2), by mechanism."""

    scattering: float
    emission: float
    absorption: float

    @property
    def total(self) -> float:
        return self.scattering + self.emission + self.absorption


@dataclass(frozen=True)
class RateBreakdown:
    gamma_air: float       # Hz
    gamma_blackbody: float  # Hz
    blackbody: BlackbodyRates

    @property
    def total(self) -> float:
        return self.gamma_air + self.gamma_blackbody


def thermal_wavelength(env: EnvironmentParams) -> float:
    """Thermal de Broglie wavelength of the gas at the environment temperature."""
    return PLANCK / math.sqrt(2 * math.pi * env.gas_particle_mass * BOLTZMANN * env.T_e)


def lambda_air(env: EnvironmentParams) -> float:
    """Short-wavelength scattering constant of the residual gas (s^-1 m^-2)."""
    return (8 / (3 * HBAR**2) * env.number_density * env.sphere_radius**2
            * math.sqrt(2 * math.pi * env.gas_particle_mass)
            * (BOLTZMANN * env.T_e) ** 1.5)


def gamma_air(env: EnvironmentParams) -> float:
    """Gas-collision decoherence rate (Hz), short-wavelength limit."""
    wl = thermal_wavelength(env)
    if wl > env.delta_x / 10:
        warnings.warn(
            f"gas thermal wavelength {wl:.3g} m is not small against the "
            f"superposition width {env.delta_x:.3g} m; the short-wavelength "
            "limit is unreliable here", RegimeWarning, stacklevel=2)
    return wl**2 * lambda_air(env)


def _susceptibility(env: EnvironmentParams) -> complex:
    eps = env.dielectric
    return (eps - 1) / (eps + 2)


def lambda_blackbody(env: EnvironmentParams) -> BlackbodyRates:
    """Blackbody scattering constants, long-wavelength limit.

    Emission depends on the internal temperature, absorption on the
    environment temperature.
    """
    thermal_photon_wl = PLANCK * SPEED_OF_LIGHT / (BOLTZMANN * env.T_e)
    if thermal_photon_wl < 10 * env.delta_x:
        warnings.warn(
            f"blackbody wavelength {thermal_photon_wl:.3g} m is not large against the "
            f"superposition width {env.delta_x:.3g} m; the long-wavelength "
            "limit is unreliable here", RegimeWarning, stacklevel=2)
    a = env.sphere_radius
    c = SPEED_OF_LIGHT
    chi = _susceptibility(env)

    scattering = (math.factorial(8) * 8 / (9 * math.pi) * a**6 * c
                  * chi.real**2 * (BOLTZMANN * env.T_e / (HBAR * c)) ** 9 * ZETA_9)

    def emit_absorb(temperature: float) -> float:
        return (16 * math.pi**5 / 189 * a**3 * c * chi.imag
                * (BOLTZMANN * temperature / (HBAR * c)) ** 6)

    return BlackbodyRates(scattering=scattering,
                          emission=emit_absorb(env.T_i),
                          absorption=emit_absorb(env.T_e))


def gamma_total(env: EnvironmentParams) -> RateBreakdown:
    """Total decoherence rate gamma = Gamma_air + Lambda_bb * delta_x^2."""
    bb = lambda_blackbody(env)
    return RateBreakdown(gamma_air=gamma_air(env),
                         gamma_blackbody=bb.total * env.delta_x**2,
                         blackbody=bb)


def sweep_rows(temperatures, base: EnvironmentParams | None = None) -> list:
    """Rate table over an environment-temperature grid, one dict per row."""
    rows = []
    for T_e in temperatures:
        env = EnvironmentParams(
            T_e=float(T_e),
            T_i=base.T_i if base else 0.15,
            number_density=base.number_density if base else 1e8,
            sphere_radius=base.sphere_radius if base else 1e-6,
            gas_particle_mass=base.gas_particle_mass if base else 28.97 * ATOMIC_MASS,
            dielectric=base.dielectric if base else 5.68 + 1.1e-4j,
            delta_x=base.delta_x if base else 250e-6,
        )
        breakdown = gamma_total(env)
        bb = breakdown.blackbody
        rows.append({
            "T_e_K": env.T_e,
            "lambda_air": lambda_air(env),
            "gamma_air_hz": breakdown.gamma_air,
            "lambda_s": bb.scattering,
            "lambda_e": bb.emission,
            "lambda_a": bb.absorption,
            "gamma_bb_hz": breakdown.gamma_blackbody,
            "gamma_total_hz": breakdown.total,
        })
    return rows
