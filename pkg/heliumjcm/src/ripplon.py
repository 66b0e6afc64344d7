"""Decay of the dressed states into surface ripplons and the strong-coupling figure of merit."""

#! /usr/bin/env python3

#                                                                                      #
# ripplon: two-ripplon inelastic rates, elastic one-ripplon broadening and the         #
#          strong-coupling report                                                      #
#                                                                                      #
from __future__ import annotations

import math
from dataclasses import dataclass

from heliumjcm.src.config import ONE_RIPPLON_RATE
from heliumjcm.src.error import DegenerateField, NotDownward
from heliumjcm.src.jcm import coupling_constant
from heliumjcm.src.materials import FieldConfiguration, MaterialProperties, derived_frequencies
from heliumjcm.src.sysconst import BOLTZMANN, ELECTRON_MASS, ELECTRON_VOLT, GIGAHERTZ, HBAR, PER_CM, logger
from heliumjcm.src.vertical import VerticalSpectrum


@dataclass(frozen=True)
class RipplonBath:
    """Capillary waves of the helium surface: omega(q) = sqrt(alpha*q^3/rho)."""

    surface_tension: float  # N/m
    mass_density: float  # kg/m^3
    temperature: float  # K

    @classmethod
    def for_material(cls, material: MaterialProperties, cfg: FieldConfiguration) -> RipplonBath:
        """Bath of a material at the configuration's temperature."""
        return cls(material.surface_tension, material.mass_density, cfg.temperature)

    def frequency(self, q: float) -> float:
        """omega(q) in rad/s for q in 1/m."""
        return math.sqrt(self.surface_tension * q**3 / self.mass_density)

    def group_velocity(self, q: float) -> float:
        """d(omega)/dq = 3*omega/(2q)."""
        return 1.5 * self.frequency(q) / q

    def occupation(self, q: float) -> float:
        """Bose occupation of a ripplon of wavenumber q."""
        return 1.0 / math.expm1(HBAR * self.frequency(q) / (BOLTZMANN * self.temperature))


def resonant_wavenumber(bath: RipplonBath, energy_gap: float) -> float:
    """
    Wavenumber (1/m) of each of two ripplons that carry away energy_gap (J): 2*hbar*omega(q) = dE.

    Raises:
        NotDownward: energy_gap <= 0.
    """
    if not energy_gap > 0.0:
        msg = f"Two-ripplon emission needs a positive energy release, got {energy_gap:.3e} J."
        raise NotDownward(msg)
    return (bath.mass_density / bath.surface_tension) ** (1.0 / 3.0) * (energy_gap / (2.0 * HBAR)) ** (2.0 / 3.0)


def level_energy(vs: VerticalSpectrum, cfg: FieldConfiguration, state: tuple[int, int]) -> float:
    """Uncoupled E_n + hbar*omega_c*l in J."""
    n, l = state  # noqa: E741
    omega_c, _, _ = derived_frequencies(cfg, require_length=False)
    return vs.material.to_joule(float(vs.energies[n - 1])) + HBAR * omega_c * l


def two_ripplon_rate(
    vs: VerticalSpectrum,
    bath: RipplonBath,
    cfg: FieldConfiguration,
    initial: tuple[int, int],
    final: tuple[int, int],
    finite_temperature: bool = False,
) -> float:
    """
    Rate (1/s) of |n,l> -> |n',l'> by emission of two ripplons.

    Gamma = m*V0/(4*pi*l_B^2*rho^2*hbar^2) * (dV/dz)_nn*(dV/dz)_n'n' * q^3/(omega^2*|d(omega)/dq|)
    at the resonant wavenumber q.  With finite_temperature the rate carries (1 + N_q)^2.

    Raises:
        NotDownward: the final level is not below the initial one.
        DegenerateField: B_z = 0.
    """
    _, _, l_b = derived_frequencies(cfg)
    gap = level_energy(vs, cfg, initial) - level_energy(vs, cfg, final)
    q = resonant_wavenumber(bath, gap)
    omega = bath.frequency(q)
    prefactor = ELECTRON_MASS * vs.material.barrier_height / (4.0 * math.pi * l_b**2 * bath.mass_density**2 * HBAR**2)
    wall = vs.dvdz_si(initial[0]) * vs.dvdz_si(final[0])
    rate = prefactor * wall * q**3 / (omega**2 * bath.group_velocity(q))
    if finite_temperature:
        rate *= (1.0 + bath.occupation(q)) ** 2
    logger.debug(f"two-ripplon {initial}->{final}: q={q / PER_CM:.3e} 1/cm, rate={rate:.3e} 1/s")
    return rate


def scba_elastic_rate(nu_0: float, cfg: FieldConfiguration) -> float:
    """Elastic one-ripplon level broadening sqrt(2*omega_c*nu_0/pi) in 1/s."""
    if cfg.b_z == 0.0:
        msg = "Landau-level broadening needs B_z > 0."
        raise DegenerateField(msg)
    if nu_0 <= 0.0:
        return 0.0
    omega_c, _, _ = derived_frequencies(cfg)
    return math.sqrt(2.0 * omega_c * nu_0 / math.pi)


def strong_coupling_report(
    vs: VerticalSpectrum,
    cfg: FieldConfiguration,
    pair: tuple[int, int] = (1, 2),
    l: int = 0,  # noqa: E741
    nu_0: float = ONE_RIPPLON_RATE,
    finite_temperature: bool = False,
) -> dict:
    """
    Compare the coupling of the |n,l+1>/|n',l> pair with its decay.

    Args:
        vs (VerticalSpectrum): vertical levels.
        cfg (FieldConfiguration): fields, normally at the pair's crossing.
        pair (tuple[int, int]): (n, n') with n < n'.
        l (int): Landau index of |n', l>.
        nu_0 (float): zero-field one-ripplon elastic rate, 1/s.
        finite_temperature (bool): include ripplon occupation.

    Returns:
        dict: coupling, rates, elastic broadening and the ratios.

    Processing Logic:
        - |n',l> decays vertically into |n,l>; |n,l+1> decays down the Landau ladder into |n,l>.
        - The ratio uses the faster of the two decays.
    """
    n, n_prime = pair
    bath = RipplonBath.for_material(vs.material, cfg)
    g_ghz = abs(coupling_constant(vs, cfg, n, n_prime))
    g_rate = 2.0 * math.pi * g_ghz * GIGAHERTZ  # g/hbar
    vertical = two_ripplon_rate(vs, bath, cfg, (n_prime, l), (n, l), finite_temperature)
    landau = two_ripplon_rate(vs, bath, cfg, (n, l + 1), (n, l), finite_temperature)
    fastest = max(vertical, landau)
    elastic = scba_elastic_rate(nu_0, cfg)
    return {
        "pair": [[n, l + 1], [n_prime, l]],
        "coupling_ghz": g_ghz,
        "vacuum_rabi_ghz": 2.0 * g_ghz * math.sqrt(l + 1),
        "gamma_vertical": vertical,
        "gamma_landau": landau,
        "gamma_max": fastest,
        "lifetime_s": 1.0 / fastest,
        "nu_b": elastic,
        "ratio": g_rate / fastest,
        "dephasing_ratio": g_rate / elastic if elastic > 0.0 else math.inf,
        "dgamma_dv0_per_ev": fastest / (vs.material.barrier_height / ELECTRON_VOLT),
        "resonant_wavenumber_per_cm": resonant_wavenumber(
            bath,
            level_energy(vs, cfg, (n_prime, l)) - level_energy(vs, cfg, (n, l)),
        )
        / PER_CM,
    }
