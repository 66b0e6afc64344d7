#! /usr/bin/env python3

#                                                                                      #
# test_materials: isotope constants, field configurations and unit conversions         #
#                                                                                      #
import logging
import math

import pytest

from heliumjcm.src.config import QUOTED_BOHR_RADIUS_NM
from heliumjcm.src.error import ConfigError, DegenerateField
from heliumjcm.src.materials import (
    FieldConfiguration,
    cyclotron_kelvin,
    derived_frequencies,
    epsilon_from_lambda,
    lambda_from_epsilon,
    lambda_round_trip,
    material_for,
    scaled_fields,
)
from heliumjcm.src.sysconst import GIGAHERTZ, MILLI_EV, NANOMETER, Isotope


@pytest.mark.parametrize(("isotope", "rydberg"), [("He3", 0.36), ("He4", 0.63)])
def test_rydberg_is_calibrated(isotope, rydberg):
    material = material_for(isotope)
    assert material.rydberg_energy / MILLI_EV == pytest.approx(rydberg, rel=1e-12)


@pytest.mark.parametrize("isotope", ["He3", "He4"])
def test_bohr_radius_matches_quoted(isotope):
    material = material_for(isotope)
    assert material.bohr_radius / NANOMETER == pytest.approx(QUOTED_BOHR_RADIUS_NM[isotope], rel=0.01)


def test_epsilon_round_trip(he3):
    assert he3.epsilon > 1.0
    assert lambda_from_epsilon(epsilon_from_lambda(he3.lambda_coupling)) == pytest.approx(he3.lambda_coupling)
    assert lambda_round_trip(he3, he3.epsilon) == pytest.approx(0.0, abs=1e-12)


def test_literature_epsilon_mismatch_is_logged(caplog):
    with caplog.at_level(logging.WARNING, logger="HeliumJCM"):
        material = material_for(Isotope.HE3)
    assert lambda_round_trip(material) > 0.01
    assert any("Lambda" in record.message for record in caplog.records)


def test_unknown_isotope():
    with pytest.raises(ConfigError):
        material_for("He5")


def test_field_configuration_validation():
    with pytest.raises(ConfigError):
        FieldConfiguration(e_perp=-1.0, b_z=1.0)
    with pytest.raises(ConfigError):
        FieldConfiguration(e_perp=0.0, b_z=1.0, temperature=0.0)
    cfg = FieldConfiguration.lab(15.0, 1.0, 0.2)
    assert cfg.e_perp == pytest.approx(1500.0)
    assert cfg.e_perp_v_cm == pytest.approx(15.0)


def test_derived_frequencies():
    omega_c, omega_y, l_b = derived_frequencies(FieldConfiguration.lab(0.0, 1.0, 0.5))
    assert omega_c / (2.0 * math.pi) / GIGAHERTZ == pytest.approx(27.99, rel=1e-3)
    assert omega_y == pytest.approx(0.5 * omega_c)
    assert l_b / NANOMETER == pytest.approx(25.66, rel=1e-3)


def test_cyclotron_temperature():
    assert cyclotron_kelvin(FieldConfiguration.lab(0.0, 0.584)) == pytest.approx(0.7846, rel=1e-3)


def test_magnetic_length_needs_b_z():
    with pytest.raises(DegenerateField):
        derived_frequencies(FieldConfiguration.lab(0.0, 0.0))
    _, _, l_b = derived_frequencies(FieldConfiguration.lab(0.0, 0.0), require_length=False)
    assert math.isinf(l_b)


def test_scaled_fields(he3):
    scaled = scaled_fields(he3, FieldConfiguration.lab(15.0, 1.2, 0.3))
    # (hbar*omega_y/(sqrt(2) l_B))^2 = (m*omega_y^2/2) * hbar*omega_c
    assert scaled.coupling**2 == pytest.approx(scaled.diamagnetic * scaled.cyclotron, rel=1e-12)
    assert he3.to_ghz(scaled.cyclotron) == pytest.approx(1.2 * 27.99, rel=1e-3)
    untilted = scaled_fields(he3, FieldConfiguration.lab(15.0, 0.0))
    assert untilted.coupling == 0.0
    with pytest.raises(DegenerateField):
        scaled_fields(he3, FieldConfiguration.lab(15.0, 0.0, 0.1))


def test_ghz_conversion_round_trip(he3):
    assert he3.from_ghz(he3.to_ghz(0.75)) == pytest.approx(0.75)
    assert he3.rydberg_ghz == pytest.approx(87.05, rel=1e-3)
