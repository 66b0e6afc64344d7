#! /usr/bin/env python3

#                                                                                      #
# conftest: shared materials and vertical spectra for the HeliumJCM tests              #
#                                                                                      #
import pytest

from heliumjcm.src.materials import FieldConfiguration, material_for
from heliumjcm.src.primitem import PrimeItemsReset
from heliumjcm.src.sysconst import V_PER_CM
from heliumjcm.src.vertical import resonance_field, solve_vertical


@pytest.fixture(scope="session")
def he3():
    return material_for("He3")


@pytest.fixture(scope="session")
def he4():
    return material_for("He4")


@pytest.fixture(scope="session")
def vs0(he3):
    """Zero-field hydrogenic levels."""
    return solve_vertical(he3, 0.0, 6)


@pytest.fixture(scope="session")
def vs15(he3):
    """E_perp = 15 V/cm, six levels."""
    return solve_vertical(he3, 15.0 * V_PER_CM, 6)


@pytest.fixture(scope="session")
def vs15_wide(he3):
    """E_perp = 15 V/cm, ten levels."""
    return solve_vertical(he3, 15.0 * V_PER_CM, 10)


@pytest.fixture(scope="session")
def e_doublet(he3):
    """E_perp (V/m) at which |1> -> |3> is resonant with 120.5 GHz."""
    return resonance_field(he3, 120.5, 1, 3)


@pytest.fixture(scope="session")
def vs_doublet(he3, e_doublet):
    return solve_vertical(he3, e_doublet, 6)


@pytest.fixture(scope="session")
def shift_field():
    """He3 shift configuration: 15 V/cm, B_z = 0.65 T, untilted."""
    return FieldConfiguration.lab(15.0, 0.65)


@pytest.fixture(autouse=True)
def reset_prime_items():
    PrimeItemsReset()
    yield
    PrimeItemsReset()
