#! /usr/bin/env python3

#                                                                                      #
# test_jcm: dressed pairs, Lamb and light shifts, admixed states and interference      #
#                                                                                      #
import math
from dataclasses import replace

import numpy as np
import pytest
from scipy.optimize import brentq

from heliumjcm.src.coupled import ProductBasis, compute_spectrum, find_crossing
from heliumjcm.src.error import BasisMismatch, NearResonance
from heliumjcm.src.jcm import (
    admixed_state,
    admixed_vector,
    bethe_cancellation_check,
    cancellation_field,
    coupling_constant,
    doublet_moments,
    dressed_pair,
    interference_moments,
    interference_scan,
    lamb_light_shifts,
    lamb_shift_closed_form,
    perturbative_shift,
    shift_from_spectrum,
)
from heliumjcm.src.materials import FieldConfiguration, derived_frequencies, scaled_fields
from heliumjcm.src.sysconst import NANOMETER, DiamagneticMode
from heliumjcm.src.vertical import solve_vertical


@pytest.fixture(scope="module")
def doublet_field(vs_doublet, e_doublet):
    """Fields at the uncoupled |2,1>/|3,0> crossing on the 120.5 GHz resonance."""
    cfg = FieldConfiguration(e_perp=e_doublet, b_z=1.0)
    return replace(cfg, b_z=find_crossing(vs_doublet, cfg, ((2, 1), (3, 0)), (0.3, 3.0)))


def test_coupling_constant_sign_and_scaling(vs15):
    weak = coupling_constant(vs15, FieldConfiguration.lab(15.0, 1.0, 0.1), 2, 3)
    strong = coupling_constant(vs15, FieldConfiguration.lab(15.0, 1.0, 0.2), 2, 3)
    assert strong == pytest.approx(2.0 * weak, rel=1e-12)
    assert math.copysign(1.0, weak) == math.copysign(1.0, vs15.z_element(2, 3))
    assert coupling_constant(vs15, FieldConfiguration.lab(15.0, 1.0), 2, 3) == 0.0
    with pytest.raises(BasisMismatch):
        coupling_constant(vs15, FieldConfiguration.lab(15.0, 1.0, 0.1), 2, 9)


def test_dressed_pair_is_the_two_level_block(vs_doublet, doublet_field):
    cfg = replace(doublet_field, b_y=0.1)
    dressed = dressed_pair(vs_doublet, cfg, (2, 3), 1)
    rabi = math.sqrt(2.0) * dressed.coupling
    block = np.array(
        [
            [dressed.e_sigma + dressed.e_delta, rabi],
            [rabi, dressed.e_sigma - dressed.e_delta],
        ],
    )
    lower, upper = np.linalg.eigvalsh(block)
    assert dressed.energies == pytest.approx((upper, lower), rel=1e-12)
    plus = dressed.amplitudes()["plus"]
    vector = np.array([plus[(2, 2)], plus[(3, 1)]])
    assert block @ vector == pytest.approx(upper * vector, rel=1e-9, abs=1e-9)
    assert dressed.splitting >= 2.0 * abs(rabi) * (1.0 - 1e-12)


def test_mixing_angle_is_right_on_resonance(vs_doublet, doublet_field):
    def detuning(b_z):
        return dressed_pair(vs_doublet, replace(doublet_field, b_z=b_z, b_y=0.1), (2, 3), 0).e_delta

    b_z = brentq(detuning, doublet_field.b_z - 0.2, doublet_field.b_z + 0.2, xtol=1e-10)
    dressed = dressed_pair(vs_doublet, replace(doublet_field, b_z=b_z, b_y=0.1), (2, 3), 0)
    assert abs(dressed.mixing_angle) == pytest.approx(math.pi / 2.0, abs=1e-3)
    assert dressed.splitting == pytest.approx(2.0 * abs(dressed.coupling), rel=1e-6)


@pytest.mark.parametrize("b_y", [0.05, 0.1])
def test_dressed_splitting_tracks_full_diagonalization(vs_doublet, doublet_field, b_y):
    cfg = replace(doublet_field, b_y=b_y)
    dressed = dressed_pair(vs_doublet, cfg, (2, 3), 0)
    spectrum = compute_spectrum(vs_doublet, cfg, ProductBasis(6, 30))
    low, high = spectrum.pair_indices((2, 1), (3, 0))
    energies = spectrum.energies_ghz()
    assert dressed.splitting == pytest.approx(energies[high] - energies[low], rel=0.1)


def test_shift_vanishes_untilted(vs15, shift_field):
    assert perturbative_shift(vs15, shift_field, 1, 0) == 0.0
    assert lamb_light_shifts(vs15, shift_field, [0, 1]) == {0: 0.0, 1: 0.0}


def test_shift_is_quadratic_in_tilt(vs15, shift_field):
    weak = perturbative_shift(vs15, replace(shift_field, b_y=0.1), 2, 0, guard=0.0)
    strong = perturbative_shift(vs15, replace(shift_field, b_y=0.2), 2, 0, guard=0.0)
    assert strong == pytest.approx(4.0 * weak, rel=1e-12)


def test_lamb_shift_closed_form(vs15, shift_field):
    cfg = replace(shift_field, b_y=0.2)
    expected = lamb_light_shifts(vs15, cfg, [0], guard=0.0)[0]
    assert lamb_shift_closed_form(vs15, cfg) == pytest.approx(expected, rel=1e-10)


@pytest.mark.parametrize(("n", "l"), [(1, 0), (2, 0), (1, 1)])
def test_bethe_cancellation_matches_truncation(vs15_wide, shift_field, n, l):  # noqa: E741
    check = bethe_cancellation_check(vs15_wide, replace(shift_field, b_y=0.2), n, l)
    assert check.residual == pytest.approx(check.truncation, rel=1e-6, abs=1e-10)


def test_bethe_check_catches_a_wrong_reduced_form(vs15_wide, shift_field, mocker):
    cfg = replace(shift_field, b_y=0.2)
    check = bethe_cancellation_check(vs15_wide, cfg, 2, 0)
    mocker.patch("heliumjcm.src.jcm.perturbative_shift", return_value=1.05 * check.reduced)
    broken = bethe_cancellation_check(vs15_wide, cfg, 2, 0)
    assert broken.raw == check.raw
    assert broken.residual != pytest.approx(broken.truncation, rel=0.01)


@pytest.mark.parametrize("n", [1, 2])
def test_bethe_residual_falls_with_levels(he3, shift_field, n):
    cfg = replace(shift_field, b_y=0.2)
    spectra = [solve_vertical(he3, cfg.e_perp, n_max) for n_max in (6, 10, 20)]
    residuals = [bethe_cancellation_check(vs, cfg, n, 0).residual for vs in spectra]
    assert residuals[0] > residuals[1] > residuals[2]


def test_near_resonance_guard(vs15):
    # |2,1> sits on top of |3,0> near the 2->3 crossing
    cfg = FieldConfiguration(e_perp=vs15.e_perp, b_z=1.0, b_y=0.2)
    b_z = find_crossing(vs15, cfg, ((2, 1), (3, 0)), (0.3, 3.0))
    with pytest.raises(NearResonance):
        perturbative_shift(vs15, replace(cfg, b_z=b_z), 2, 1)


def test_guard_refuses_shifted_detuning(vs15, shift_field):
    # |2,1> -> |3,0> is more than three couplings away at 0.2 T, but the diamagnetic term moves it
    cfg = replace(shift_field, b_y=0.2)
    with pytest.raises(NearResonance, match="diamagnetic"):
        perturbative_shift(vs15, cfg, 2, 1)
    assert math.isfinite(perturbative_shift(vs15, cfg, 2, 1, guard=0.0))
    assert math.isfinite(perturbative_shift(vs15, replace(shift_field, b_y=0.05), 2, 1))


@pytest.mark.parametrize("b_y", [0.1, 0.2, 0.3])
def test_lamb_shift_against_diagonalization(vs15_wide, shift_field, b_y):
    cfg = replace(shift_field, b_y=b_y)
    expected = shift_from_spectrum(vs15_wide, cfg, ProductBasis(10, 30), 0, DiamagneticMode.PROJECTED)
    shift = lamb_light_shifts(vs15_wide, cfg, [0], guard=0.0)[0]
    assert expected > 0.0
    assert shift == pytest.approx(expected, rel=0.1)


@pytest.mark.parametrize("b_y", [0.025, 0.05])
def test_light_shift_against_diagonalization(vs15_wide, shift_field, b_y):
    cfg = replace(shift_field, b_y=b_y)
    expected = shift_from_spectrum(vs15_wide, cfg, ProductBasis(10, 30), 1, DiamagneticMode.PROJECTED)
    shift = lamb_light_shifts(vs15_wide, cfg, [1])[1]
    assert expected < 0.0
    assert shift == pytest.approx(expected, rel=0.1)


def test_shifts_against_full_diagonalization(vs15, shift_field):
    basis = ProductBasis(6, 50)
    compared = {0: 0, 1: 0}
    for b_y in (0.05, 0.1, 0.15, 0.2, 0.25, 0.3):
        cfg = replace(shift_field, b_y=b_y)
        lamb = shift_from_spectrum(vs15, cfg, basis, 0)
        assert lamb > 0.0
        for l in (0, 1):  # noqa: E741
            try:
                shift = lamb_light_shifts(vs15, cfg, [l])[l]
            except NearResonance:
                continue
            compared[l] += 1
            assert abs(shift - shift_from_spectrum(vs15, cfg, basis, l)) <= 0.1 * lamb
    assert shift_from_spectrum(vs15, replace(shift_field, b_y=0.05), basis, 1) < 0.0
    assert compared[0] >= 4
    assert compared[1] >= 1


@pytest.mark.parametrize("l", [0, 1])
def test_shift_error_falls_fourfold_when_tilt_halves(vs15, shift_field, l):  # noqa: E741
    basis = ProductBasis(6, 30)

    def relative_error(b_y):
        cfg = replace(shift_field, b_y=b_y)
        expected = shift_from_spectrum(vs15, cfg, basis, l, DiamagneticMode.PROJECTED)
        return abs(lamb_light_shifts(vs15, cfg, [l])[l] - expected) / abs(expected)

    assert relative_error(0.06) / relative_error(0.03) == pytest.approx(4.0, rel=0.25)


def test_admixture_coefficients(vs15, shift_field):
    cfg = replace(shift_field, b_y=0.05)
    ratio = cfg.b_y / cfg.b_z
    length = scaled_fields(vs15.material, cfg).magnetic_length
    z22 = vs15.z_element(2, 2)
    z33 = vs15.z_element(3, 3)
    upper = admixed_state(vs15, cfg, 2, 1, guard=0.0)
    assert upper[(2, 1)] == 1.0
    assert upper[(2, 0)] == pytest.approx(z22 * ratio / (math.sqrt(2.0) * length), rel=1e-12)
    assert upper[(2, 2)] == pytest.approx(-z22 * ratio / length, rel=1e-12)
    lower = admixed_state(vs15, cfg, 3, 0, guard=0.0)
    assert lower[(3, 1)] == pytest.approx(-z33 * ratio / (math.sqrt(2.0) * length), rel=1e-12)
    assert (3, -1) not in lower


@pytest.mark.parametrize(("n", "l"), [(1, 0), (2, 0)])
def test_admixed_state_overlaps_eigenvector(vs15, shift_field, n, l):  # noqa: E741
    cfg = replace(shift_field, b_y=0.05)
    basis = ProductBasis(6, 20)
    spectrum = compute_spectrum(vs15, cfg, basis)
    eigenvector = spectrum.eigenvectors[:, spectrum.state_index(n, l)]
    approximate = admixed_vector(admixed_state(vs15, cfg, n, l), basis)
    assert abs(approximate @ eigenvector) > 0.999


def test_interference_identity(vs_doublet, doublet_field):
    for b_y in (0.0, 0.2, 0.6):
        moments = interference_moments(vs_doublet, replace(doublet_field, b_y=b_y))
        total = moments.z_plus**2 + moments.z_minus**2
        assert total == pytest.approx(2.0 * (moments.admixture**2 + vs_doublet.z_element(3, 1) ** 2), rel=1e-12)
    untilted = interference_moments(vs_doublet, doublet_field)
    assert untilted.z_plus == pytest.approx(-untilted.z_minus)


def test_exact_doublet_moments(vs_doublet, doublet_field):
    cfg = replace(doublet_field, b_y=0.05)
    moments = interference_moments(vs_doublet, cfg, ProductBasis(6, 30))
    total = moments.exact_plus**2 + moments.exact_minus**2
    # the doublet shares the |3,0> strength between its two branches
    assert total == pytest.approx(vs_doublet.z_element(3, 1) ** 2, rel=0.1)


def test_cancellation_field_closed_form():
    _, _, l_b = derived_frequencies(FieldConfiguration.lab(0.0, 1.18))
    length = l_b / (10.3 * NANOMETER)
    assert cancellation_field(3.91, 0.5, 1.18, length) == pytest.approx(0.49, abs=0.02)


def test_upper_branch_moment_cancels(vs_doublet, doublet_field):
    b_y_values = np.arange(0.05, 1.31, 0.05)
    scan = interference_scan(vs_doublet, doublet_field, ProductBasis(6, 40), b_y_values)
    upper = scan[:, 0]
    lowest = int(np.argmin(upper))
    assert 0.4 <= b_y_values[lowest] <= 0.8
    assert upper[lowest] < 0.1 * upper[0]
    # the lower branch keeps its strength
    assert scan[lowest, 1] > upper[lowest]


@pytest.mark.xfail(reason="the full-diagonalization minimum sits near 0.56 T, see DESIGN.md", strict=False)
def test_upper_branch_minimum_in_quoted_window(vs_doublet, doublet_field):
    b_y_values = np.arange(0.3, 0.61, 0.01)
    scan = interference_scan(vs_doublet, doublet_field, ProductBasis(6, 40), b_y_values)
    assert 0.35 <= b_y_values[int(np.argmin(scan[:, 0]))] <= 0.55


def test_doublet_moments_labels(vs_doublet, doublet_field):
    spectrum = compute_spectrum(vs_doublet, replace(doublet_field, b_y=0.1), ProductBasis(6, 20))
    upper, lower = doublet_moments(spectrum)
    low, high = spectrum.pair_indices((2, 1), (3, 0))
    moments = spectrum.moments_from(spectrum.state_index(1, 0))
    assert (upper, lower) == (moments[high], moments[low])


def test_doublet_labels_follow_the_states(vs_doublet, doublet_field):
    spectrum = compute_spectrum(vs_doublet, replace(doublet_field, b_y=0.6), ProductBasis(6, 40))
    reversed_order = replace(
        spectrum,
        eigenvalues=spectrum.eigenvalues[::-1].copy(),
        eigenvectors=spectrum.eigenvectors[:, ::-1].copy(),
    )
    assert doublet_moments(reversed_order) == pytest.approx(doublet_moments(spectrum), rel=1e-9, abs=1e-12)
