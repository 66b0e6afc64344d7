#! /usr/bin/env python3

#                                                                                      #
# test_coupled: product basis, Hamiltonian assembly, diagonalization and sweeps        #
#                                                                                      #
from dataclasses import replace

import numpy as np
import pytest
from scipy.linalg import hadamard

from heliumjcm.src.coupled import (
    ProductBasis,
    assemble_hamiltonian,
    compute_spectrum,
    convergence_drift,
    diagonalize,
    find_crossing,
    minimum_gap,
    pair_branches,
    refine_minimum_gap,
    spectrum_sweep,
    spectrum_table,
    uncoupled_energy,
)
from heliumjcm.src.error import BasisMismatch, BranchTrackingLost, ConvergenceFailure, NoCrossingInRange
from heliumjcm.src.jcm import coupling_constant
from heliumjcm.src.materials import FieldConfiguration, scaled_fields
from heliumjcm.src.sysconst import V_PER_CM, DiamagneticMode
from heliumjcm.src.vertical import solve_vertical


@pytest.fixture(scope="module")
def small_basis():
    return ProductBasis(n_max=4, l_max=12)


def test_basis_indexing(small_basis):
    assert small_basis.size == 52
    for k in range(small_basis.size):
        assert small_basis.index(*small_basis.state(k)) == k
    assert small_basis.index(1, 1) == 4
    with pytest.raises(BasisMismatch):
        small_basis.index(5, 0)
    with pytest.raises(BasisMismatch):
        ProductBasis(n_max=0, l_max=3)


def test_untilted_hamiltonian_is_diagonal(vs15, small_basis):
    cfg = FieldConfiguration.lab(15.0, 1.0)
    hamiltonian = assemble_hamiltonian(vs15, cfg, small_basis)
    assert np.count_nonzero(hamiltonian - np.diag(np.diag(hamiltonian))) == 0
    w = scaled_fields(vs15.material, cfg).cyclotron
    assert hamiltonian[small_basis.index(2, 3), small_basis.index(2, 3)] == pytest.approx(vs15.energies[1] + 3 * w)


def test_tilted_hamiltonian_structure(vs15, small_basis):
    cfg = FieldConfiguration.lab(15.0, 1.0, 0.2)
    hamiltonian = assemble_hamiltonian(vs15, cfg, small_basis)
    assert np.array_equal(hamiltonian, hamiltonian.T)
    g = vs15.material.from_ghz(coupling_constant(vs15, cfg, 1, 2))
    for l in range(3):  # noqa: E741
        element = hamiltonian[small_basis.index(1, l), small_basis.index(2, l + 1)]
        assert element == pytest.approx(g * np.sqrt(l + 1), rel=1e-12)
    # only neighbouring Landau blocks couple
    assert hamiltonian[small_basis.index(1, 0), small_basis.index(2, 2)] == 0.0
    assert hamiltonian[small_basis.index(1, 0), small_basis.index(1, 3)] == 0.0


@pytest.mark.parametrize("mode", list(DiamagneticMode))
def test_diamagnetic_modes_share_the_coupling(vs15, small_basis, mode):
    cfg = FieldConfiguration.lab(15.0, 1.0, 0.2)
    full = assemble_hamiltonian(vs15, cfg, small_basis)
    other = assemble_hamiltonian(vs15, cfg, small_basis, mode)
    upper, lower = small_basis.index(1, 0), small_basis.index(3, 1)
    assert other[upper, lower] == full[upper, lower]
    if mode is DiamagneticMode.DIAGONAL:
        assert other[small_basis.index(1, 0), small_basis.index(2, 0)] == 0.0


def test_basis_must_match_vertical_levels(vs15):
    cfg = FieldConfiguration.lab(15.0, 1.0, 0.1)
    with pytest.raises(BasisMismatch):
        assemble_hamiltonian(vs15, cfg, ProductBasis(n_max=8, l_max=4))
    with pytest.raises(BasisMismatch):
        assemble_hamiltonian(vs15, FieldConfiguration.lab(20.0, 1.0, 0.1), ProductBasis(n_max=4, l_max=4))


def test_diagonalize(vs15, small_basis):
    cfg = FieldConfiguration.lab(15.0, 1.0, 0.3)
    hamiltonian = assemble_hamiltonian(vs15, cfg, small_basis)
    spectrum = diagonalize(hamiltonian, small_basis, vs15, cfg)
    vectors = spectrum.eigenvectors
    assert np.max(np.abs(vectors.T @ vectors - np.eye(small_basis.size))) < 1e-8
    assert np.sum(spectrum.eigenvalues) == pytest.approx(np.trace(hamiltonian), abs=1e-9)
    assert np.all(np.diff(spectrum.eigenvalues) >= 0.0)
    broken = hamiltonian.copy()
    broken[0, 0] = np.nan
    with pytest.raises(ConvergenceFailure):
        diagonalize(broken, small_basis, vs15, cfg)


def test_untilted_spectrum_is_the_fan(vs15, small_basis):
    cfg = FieldConfiguration.lab(15.0, 0.65)
    spectrum = compute_spectrum(vs15, cfg, small_basis)
    fan = np.sort(np.diag(assemble_hamiltonian(vs15, cfg, small_basis)))
    assert np.max(np.abs(spectrum.eigenvalues - fan)) < 1e-10


def test_tilt_sign_symmetry(vs15, small_basis):
    """B_y -> -B_y negates the Landau-changing blocks; (-1)^l maps it back."""
    cfg = FieldConfiguration.lab(15.0, 1.0, 0.3)
    hamiltonian = assemble_hamiltonian(vs15, cfg, small_basis)
    landau = np.repeat(np.arange(small_basis.l_max + 1), small_basis.n_max)
    flipped = np.where(landau[:, None] == landau[None, :], hamiltonian, -hamiltonian)
    parity = (-1.0) ** landau
    transformed = parity[:, None] * flipped * parity[None, :]
    assert np.array_equal(transformed, hamiltonian)
    assert np.allclose(np.linalg.eigvalsh(flipped), np.linalg.eigvalsh(hamiltonian), atol=1e-12)


def test_pair_indices_and_labels(vs15, small_basis):
    spectrum = compute_spectrum(vs15, FieldConfiguration.lab(15.0, 0.65, 0.05), small_basis)
    low, high = spectrum.pair_indices((1, 1), (2, 0))
    assert low < high
    assert spectrum.dominant(0)[:2] == (1, 0)
    assert spectrum.state_index(1, 0) == 0
    assert spectrum.weights(0).shape == (small_basis.l_max + 1, small_basis.n_max)
    assert spectrum.weights(0).sum() == pytest.approx(1.0)


def test_crossing_of_first_landau_level(vs15):
    cfg = FieldConfiguration.lab(15.0, 1.0)
    b_z = find_crossing(vs15, cfg, ((1, 1), (2, 0)), (0.5, 5.0))
    cyclotron = scaled_fields(vs15.material, replace(cfg, b_z=b_z)).cyclotron
    assert cyclotron == pytest.approx(vs15.energies[1] - vs15.energies[0], rel=1e-4)
    with pytest.raises(NoCrossingInRange):
        find_crossing(vs15, cfg, ((1, 1), (2, 0)), (0.5, 1.0))


@pytest.mark.xfail(reason="recorded against the quoted field in DESIGN.md", strict=False)
def test_crossing_of_first_landau_level_at_quoted_field(vs15):
    b_z = find_crossing(vs15, FieldConfiguration.lab(15.0, 1.0), ((1, 1), (2, 0)), (0.5, 5.0))
    assert b_z == pytest.approx(2.82, abs=0.08)


def test_doublet_crossing_at_resonance(vs_doublet, e_doublet):
    cfg = FieldConfiguration(e_perp=e_doublet, b_z=1.0)
    b_z = find_crossing(vs_doublet, cfg, ((2, 1), (3, 0)), (0.3, 3.0))
    assert 1.20 < b_z < 1.26


@pytest.mark.xfail(reason="the (2,1)/(3,0) crossing is 1.141 T at 20 V/cm in this model, see DESIGN.md", strict=False)
def test_doublet_crossing_at_quoted_field(he3):
    vs = solve_vertical(he3, 20.0 * V_PER_CM, 4)
    b_z = find_crossing(vs, FieldConfiguration.lab(20.0, 1.0), ((2, 1), (3, 0)), (0.3, 3.0))
    assert b_z == pytest.approx(1.18, abs=0.03)


@pytest.mark.parametrize("b_y", [0.05, 0.1, 0.15])
@pytest.mark.parametrize("l", [0, 1, 2])
def test_minimum_gap_is_vacuum_rabi_splitting(vs_doublet, e_doublet, b_y, l):  # noqa: E741
    base = FieldConfiguration(e_perp=e_doublet, b_z=1.0, b_y=b_y)
    pair = ((2, l + 1), (3, l))
    center = find_crossing(vs_doublet, base, pair, (0.3, 3.0))
    values = np.linspace(center - 0.15, center + 0.15, 61)
    family = spectrum_sweep(vs_doublet.material, base, ProductBasis(6, 30), "b_z", values, threads=2)
    b_z, gap = minimum_gap(family, values, pair)
    expected = 2.0 * abs(coupling_constant(vs_doublet, replace(base, b_z=b_z), 2, 3)) * np.sqrt(l + 1)
    assert gap == pytest.approx(expected, rel=0.1)
    assert abs(b_z - center) < 0.15


def test_gap_grows_as_root_photon_number(vs_doublet, e_doublet):
    base = FieldConfiguration(e_perp=e_doublet, b_z=1.0, b_y=0.1)
    per_photon = []
    for l in range(4):  # noqa: E741
        pair = ((2, l + 1), (3, l))
        center = find_crossing(vs_doublet, base, pair, (0.3, 3.0))
        values = np.linspace(center - 0.15, center + 0.15, 61)
        family = spectrum_sweep(vs_doublet.material, base, ProductBasis(6, 50), "b_z", values, threads=2)
        per_photon.append(minimum_gap(family, values, pair)[1] / np.sqrt(l + 1))
    assert np.allclose(per_photon, per_photon[0], rtol=0.05)


def test_refined_gap_agrees(vs_doublet, e_doublet):
    base = FieldConfiguration(e_perp=e_doublet, b_z=1.0, b_y=0.1)
    pair = ((2, 1), (3, 0))
    center = find_crossing(vs_doublet, base, pair, (0.3, 3.0))
    values = np.linspace(center - 0.15, center + 0.15, 61)
    family = spectrum_sweep(vs_doublet.material, base, ProductBasis(6, 30), "b_z", values)
    coarse = minimum_gap(family, values, pair)
    fine = refine_minimum_gap(vs_doublet, base, ProductBasis(6, 30), pair, coarse[0])
    assert fine[1] == pytest.approx(coarse[1], rel=0.02)
    assert fine[0] == pytest.approx(coarse[0], abs=0.01)


def test_edge_minimum_is_rejected(vs_doublet, e_doublet):
    base = FieldConfiguration(e_perp=e_doublet, b_z=1.0, b_y=0.05)
    pair = ((2, 1), (3, 0))
    center = find_crossing(vs_doublet, base, pair, (0.3, 3.0))
    values = np.linspace(center + 0.2, center + 0.4, 11)
    family = spectrum_sweep(vs_doublet.material, base, ProductBasis(6, 20), "b_z", values)
    with pytest.raises(NoCrossingInRange):
        minimum_gap(family, values, pair)


def test_branch_tracking_lost(vs15, small_basis):
    spectrum = compute_spectrum(vs15, FieldConfiguration.lab(15.0, 0.65, 0.05), small_basis)
    rotation = np.eye(small_basis.size)
    rotation[:16, :16] = hadamard(16) / 4.0
    scrambled = replace(spectrum, eigenvectors=spectrum.eigenvectors @ rotation)
    pair = ((1, 0), (2, 0))
    with pytest.raises(BranchTrackingLost):
        pair_branches([spectrum, scrambled], pair)
    assert np.array_equal(pair_branches([spectrum, spectrum], pair)[1], spectrum.pair_indices(*pair))


def test_sweep_keeps_order_and_failures(he3, mocker):
    values = np.array([0.5, 0.75, 1.0, 1.25])
    base = FieldConfiguration.lab(15.0, 1.0, 0.1)
    basis = ProductBasis(4, 8)
    serial = spectrum_sweep(he3, base, basis, "b_z", values, threads=1)
    parallel = spectrum_sweep(he3, base, basis, "b_z", values, threads=4)
    for first, second in zip(serial, parallel, strict=True):
        assert np.array_equal(first.eigenvalues, second.eigenvalues)
    assert [spectrum.config.b_z for spectrum in serial] == list(values)

    original = compute_spectrum

    def flaky(vs, cfg, basis, mode=DiamagneticMode.FULL):
        if cfg.b_z == 0.75:
            msg = "no convergence"
            raise ConvergenceFailure(msg)
        return original(vs, cfg, basis, mode)

    mocker.patch("heliumjcm.src.coupled.compute_spectrum", side_effect=flaky)
    with pytest.raises(ConvergenceFailure):
        spectrum_sweep(he3, base, basis, "b_z", values)
    family = spectrum_sweep(he3, base, basis, "b_z", values, keep_going=True)
    assert family[1] is None
    assert all(spectrum is not None for spectrum in (family[0], family[2], family[3]))


def test_e_perp_sweep_solves_each_point(he3):
    values = np.array([10.0, 20.0]) * V_PER_CM
    family = spectrum_sweep(he3, FieldConfiguration.lab(0.0, 1.0), ProductBasis(3, 4), "e_perp", values)
    assert family[0].config.e_perp == pytest.approx(1000.0)
    assert family[1].eigenvalues[0] > family[0].eigenvalues[0]


@pytest.mark.parametrize("b_y", [0.3, 1.0])
def test_convergence_drift_below_fourth_manifold(vs15, b_y):
    cfg = FieldConfiguration.lab(15.0, 1.0, b_y)
    ceiling = vs15.material.to_ghz(uncoupled_energy(vs15, cfg, (4, 0)))
    assert convergence_drift(vs15, cfg, ProductBasis(6, 50), ceiling_ghz=ceiling, l_step=30) < 10.0


def test_spectrum_table(he3):
    values = np.array([0.5, 1.0])
    family = spectrum_sweep(he3, FieldConfiguration.lab(15.0, 1.0, 0.1), ProductBasis(4, 8), "b_z", values)
    table = spectrum_table(family, "b_z", values, max_levels=5)
    assert list(table.columns) == ["b_z", "k", "energy_ghz", "dominant_n", "dominant_l", "dominant_weight"]
    assert len(table) == 10
    assert table.loc[0, "dominant_n"] == 1


def test_same_level_pair_never_crosses(vs15):
    with pytest.raises(NoCrossingInRange):
        find_crossing(vs15, FieldConfiguration.lab(15.0, 1.0), ((1, 1), (1, 0)), (0.05, 5.0))
