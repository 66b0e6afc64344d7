"""Helium isotope constants, field configurations and the scaled unit system."""

#! /usr/bin/env python3

#                                                                                      #
# materials: helium isotope properties, field knobs and unit conversions               #
#                                                                                      #
# Internal unit system: energies in units of the effective Rydberg energy R_e, lengths #
# in units of the effective Bohr radius r_B.  Everything crossing a public boundary    #
# is in SI or in the quoted lab units (GHz, V/cm, T, K).                               #
#                                                                                      #
from __future__ import annotations

import math
from dataclasses import dataclass

from heliumjcm.src.config import (
    BARRIER_HEIGHT_EV,
    LAMBDA_ROUND_TRIP_TOLERANCE,
    LITERATURE_EPSILON,
    MASS_DENSITY,
    QUOTED_RYDBERG_MEV,
    SURFACE_TENSION,
)
from heliumjcm.src.error import ConfigError, DegenerateField
from heliumjcm.src.sysconst import (
    BOLTZMANN,
    ELECTRON_MASS,
    ELECTRON_VOLT,
    ELEMENTARY_CHARGE,
    EPSILON_0,
    GIGAHERTZ,
    HBAR,
    MILLI_EV,
    PLANCK,
    V_PER_CM,
    Isotope,
    logger,
)

# e^2/(16 pi eps0): the image-charge prefactor of Lambda.
IMAGE_PREFACTOR = ELEMENTARY_CHARGE**2 / (16.0 * math.pi * EPSILON_0)


def lambda_from_epsilon(epsilon: float) -> float:
    """Image-charge strength Lambda (J*m) for a dielectric constant epsilon."""
    return IMAGE_PREFACTOR * (epsilon - 1.0) / (epsilon + 1.0)


def epsilon_from_lambda(lambda_coupling: float) -> float:
    """Invert lambda_from_epsilon."""
    ratio = lambda_coupling / IMAGE_PREFACTOR
    return (1.0 + ratio) / (1.0 - ratio)


def rydberg_from_lambda(lambda_coupling: float) -> float:
    """R_e = m_e*Lambda^2/(2*hbar^2), in J."""
    return ELECTRON_MASS * lambda_coupling**2 / (2.0 * HBAR**2)


def bohr_radius_from_lambda(lambda_coupling: float) -> float:
    """r_B = hbar^2/(Lambda*m_e), in m."""
    return HBAR**2 / (lambda_coupling * ELECTRON_MASS)


@dataclass(frozen=True)
class MaterialProperties:
    """Isotope-specific constants of the electron-on-helium problem (SI units)."""

    isotope: Isotope
    epsilon: float
    lambda_coupling: float  # J*m
    rydberg_energy: float  # J
    bohr_radius: float  # m
    barrier_height: float  # J
    surface_tension: float  # N/m
    mass_density: float  # kg/m^3

    def __post_init__(self) -> None:
        """Reject non-physical constants and R_e/r_B that were not derived from Lambda."""
        for name in (
            "lambda_coupling",
            "rydberg_energy",
            "bohr_radius",
            "barrier_height",
            "surface_tension",
            "mass_density",
        ):
            if not getattr(self, name) > 0.0:
                msg = f"Material constant {name} must be strictly positive, got {getattr(self, name)}."
                raise ConfigError(msg)
        if not self.epsilon > 1.0:
            msg = f"Dielectric constant must exceed 1, got {self.epsilon}."
            raise ConfigError(msg)
        if not math.isclose(self.rydberg_energy, rydberg_from_lambda(self.lambda_coupling), rel_tol=1e-12):
            msg = "Rydberg energy is not consistent with Lambda."
            raise ConfigError(msg)
        if not math.isclose(self.bohr_radius, bohr_radius_from_lambda(self.lambda_coupling), rel_tol=1e-12):
            msg = "Bohr radius is not consistent with Lambda."
            raise ConfigError(msg)

    # Conversions between the scaled unit system and lab units.
    @property
    def rydberg_ghz(self) -> float:
        """R_e/h in GHz."""
        return self.rydberg_energy / PLANCK / GIGAHERTZ

    def to_ghz(self, energy: float) -> float:
        """Scaled energy (units of R_e) to frequency E/h in GHz."""
        return energy * self.rydberg_ghz

    def from_ghz(self, frequency: float) -> float:
        """Frequency E/h in GHz to scaled energy."""
        return frequency / self.rydberg_ghz

    def to_joule(self, energy: float) -> float:
        """Scaled energy to J."""
        return energy * self.rydberg_energy

    def to_meter(self, length: float) -> float:
        """Scaled length (units of r_B) to m."""
        return length * self.bohr_radius

    def scaled_field(self, e_perp: float) -> float:
        """Perpendicular field in V/m to the scaled Stark strength F = e*E*r_B/R_e."""
        return ELEMENTARY_CHARGE * e_perp * self.bohr_radius / self.rydberg_energy

    @property
    def force_unit(self) -> float:
        """R_e/r_B in N: the unit of the scaled potential gradient."""
        return self.rydberg_energy / self.bohr_radius


def lambda_round_trip(material: MaterialProperties, epsilon: float | None = None) -> float:
    """
    Relative disagreement between the calibrated Lambda and the one built from a dielectric constant.

        :param material: calibrated material
        :param epsilon: dielectric constant to compare against, literature value by default
        :return: |Lambda(epsilon) - Lambda| / Lambda
    """
    if epsilon is None:
        epsilon = LITERATURE_EPSILON[material.isotope.value]
    return abs(lambda_from_epsilon(epsilon) - material.lambda_coupling) / material.lambda_coupling


def material_for(
    isotope: Isotope | str,
    barrier_height_ev: float = BARRIER_HEIGHT_EV,
    surface_tension: float = SURFACE_TENSION,
    mass_density: float = MASS_DENSITY,
    rydberg_mev: float | None = None,
) -> MaterialProperties:
    """
    Build the material table for a helium isotope.

    Lambda is calibrated so that m_e*Lambda^2/(2*hbar^2) equals the quoted effective Rydberg
    energy; the Bohr radius and the dielectric constant follow from Lambda.

    Args:
        isotope (Isotope | str): He3 or He4.
        barrier_height_ev (float): surface barrier V0 in eV.
        surface_tension (float): alpha in N/m.
        mass_density (float): rho in kg/m^3.
        rydberg_mev (float | None): override of the quoted R_e in meV.

    Returns:
        MaterialProperties: the calibrated constants.
    """
    try:
        isotope = Isotope(isotope) if isinstance(isotope, str) else isotope
    except ValueError as e:
        msg = f"Unknown isotope '{isotope}'.  Use one of {[i.value for i in Isotope]}."
        raise ConfigError(msg) from e

    rydberg = (rydberg_mev if rydberg_mev is not None else QUOTED_RYDBERG_MEV[isotope.value]) * MILLI_EV
    if not rydberg > 0.0:
        msg = f"Rydberg energy override must be positive, got {rydberg_mev} meV."
        raise ConfigError(msg)
    lambda_coupling = HBAR * math.sqrt(2.0 * rydberg / ELECTRON_MASS)

    material = MaterialProperties(
        isotope=isotope,
        epsilon=epsilon_from_lambda(lambda_coupling),
        lambda_coupling=lambda_coupling,
        rydberg_energy=rydberg_from_lambda(lambda_coupling),
        bohr_radius=bohr_radius_from_lambda(lambda_coupling),
        barrier_height=barrier_height_ev * ELECTRON_VOLT,
        surface_tension=surface_tension,
        mass_density=mass_density,
    )

    discrepancy = lambda_round_trip(material)
    if discrepancy > LAMBDA_ROUND_TRIP_TOLERANCE:
        logger.warning(
            f"{isotope.value}: Lambda from the literature dielectric constant differs from the calibrated"
            f" value by {discrepancy:.2%}",
        )
    logger.debug(
        f"material {isotope.value}: R_e={material.rydberg_energy / MILLI_EV:.4f} meV,"
        f" r_B={material.bohr_radius * 1e9:.3f} nm, eps={material.epsilon:.5f}",
    )
    return material


@dataclass(frozen=True)
class FieldConfiguration:
    """The experiment knobs: E_perp (V/m), B_z (T), B_y (T) and temperature (K)."""

    e_perp: float
    b_z: float
    b_y: float = 0.0
    temperature: float = 0.33

    def __post_init__(self) -> None:
        """Validate the ranges."""
        if self.e_perp < 0.0 or self.b_z < 0.0 or self.b_y < 0.0:
            msg = f"Fields must be non-negative: E_perp={self.e_perp}, B_z={self.b_z}, B_y={self.b_y}."
            raise ConfigError(msg)
        if not self.temperature > 0.0:
            msg = f"Temperature must be positive, got {self.temperature}."
            raise ConfigError(msg)

    @classmethod
    def lab(
        cls,
        e_perp_v_cm: float,
        b_z: float,
        b_y: float = 0.0,
        temperature: float = 0.33,
    ) -> FieldConfiguration:
        """Build a configuration from E_perp in V/cm."""
        return cls(e_perp=e_perp_v_cm * V_PER_CM, b_z=b_z, b_y=b_y, temperature=temperature)

    @property
    def e_perp_v_cm(self) -> float:
        """E_perp in V/cm."""
        return self.e_perp / V_PER_CM


def derived_frequencies(cfg: FieldConfiguration, require_length: bool = True) -> tuple[float, float, float]:
    """
    Cyclotron frequency, coupling frequency and magnetic length of a field configuration.

        :param cfg: field configuration
        :param require_length: raise DegenerateField at B_z = 0 instead of returning l_B = inf
        :return: (omega_c in rad/s, omega_y in rad/s, l_B in m)
    """
    omega_c = ELEMENTARY_CHARGE * cfg.b_z / ELECTRON_MASS
    omega_y = ELEMENTARY_CHARGE * cfg.b_y / ELECTRON_MASS
    if cfg.b_z == 0.0:
        if require_length:
            msg = "The magnetic length is undefined at B_z = 0."
            raise DegenerateField(msg)
        return omega_c, omega_y, math.inf
    return omega_c, omega_y, math.sqrt(HBAR / (ELEMENTARY_CHARGE * cfg.b_z))


def cyclotron_kelvin(cfg: FieldConfiguration) -> float:
    """hbar*omega_c/k_B in K."""
    omega_c, _, _ = derived_frequencies(cfg, require_length=False)
    return HBAR * omega_c / BOLTZMANN


@dataclass(frozen=True)
class ScaledFields:
    """Field-dependent Hamiltonian prefactors in the scaled unit system."""

    stark: float  # e*E_perp*r_B/R_e
    cyclotron: float  # hbar*omega_c/R_e
    diamagnetic: float  # m_e*omega_y^2*r_B^2/(2*R_e)
    coupling: float  # hbar*omega_y*r_B/(sqrt(2)*l_B*R_e)
    magnetic_length: float  # l_B/r_B


def scaled_fields(material: MaterialProperties, cfg: FieldConfiguration) -> ScaledFields:
    """
    Express the field configuration as dimensionless Hamiltonian prefactors.

    The coupling g_nn' of the tilted-field term is `coupling * z_nn'` with z in r_B.
    A coupling field without a quantizing field has no Landau levels to couple to, so
    B_y > 0 at B_z = 0 raises DegenerateField.
    """
    omega_c, omega_y, l_b = derived_frequencies(cfg, require_length=cfg.b_y > 0.0)
    r_b = material.bohr_radius
    r_e = material.rydberg_energy
    coupling = 0.0 if cfg.b_y == 0.0 else HBAR * omega_y * r_b / (math.sqrt(2.0) * l_b * r_e)
    return ScaledFields(
        stark=material.scaled_field(cfg.e_perp),
        cyclotron=HBAR * omega_c / r_e,
        diamagnetic=ELECTRON_MASS * omega_y**2 * r_b**2 / (2.0 * r_e),
        coupling=coupling,
        magnetic_length=l_b / r_b,
    )
