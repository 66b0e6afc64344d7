"""Vertical Rydberg states of an electron above liquid helium in a perpendicular field."""

#! /usr/bin/env python3

#                                                                                      #
# vertical: 1D Schroedinger solver for -d2/dz2 - 2/z + F*z with a hard wall at z = 0   #
#                                                                                      #
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np
import pandas as pd
from scipy import linalg
from scipy.optimize import brentq

from heliumjcm.src.config import (
    GRID_POINTS,
    GRID_TAIL_FRACTION,
    GRID_TAIL_LIMIT,
    GRID_Z_MAX,
    STARK_STEP_V_CM,
    VERTICAL_N_MAX,
)
from heliumjcm.src.error import ConvergenceFailure, GridTooSmall
from heliumjcm.src.materials import MaterialProperties
from heliumjcm.src.sysconst import NANOMETER, V_PER_CM, logger


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid on (0, z_max) in units of r_B with Dirichlet walls at both ends."""

    z_max: float = GRID_Z_MAX
    n_points: int = GRID_POINTS
    richardson: bool = True

    @property
    def step(self) -> float:
        """Grid spacing."""
        return self.z_max / (self.n_points + 1)


@dataclass(frozen=True, eq=False)
class VerticalSpectrum:
    """
    Solved vertical levels for one material and one E_perp.

    All arrays are read-only.  Energies are in units of R_e, lengths in r_B and
    the wall derivative (dV/dz)_nn in R_e/r_B.  Index 0 is the ground state n = 1.
    """

    material: MaterialProperties
    e_perp: float  # V/m
    grid_spec: GridSpec
    z: np.ndarray
    energies: np.ndarray
    wavefunctions: np.ndarray  # shape (n_points, n_max)
    z_matrix: np.ndarray
    z2_matrix: np.ndarray
    dvdz: np.ndarray
    dvdz_slope: np.ndarray
    tail_norm: np.ndarray = field(repr=False)

    @property
    def n_max(self) -> int:
        """Number of solved levels."""
        return self.energies.shape[0]

    @property
    def stark(self) -> float:
        """Scaled Stark strength F."""
        return self.material.scaled_field(self.e_perp)

    def energy_ghz(self, n: int) -> float:
        """E_n/h in GHz (n counts from 1)."""
        return self.material.to_ghz(self.energies[n - 1])

    def transition_ghz(self, n: int, n_prime: int) -> float:
        """(E_n' - E_n)/h in GHz."""
        return self.material.to_ghz(self.energies[n_prime - 1] - self.energies[n - 1])

    def z_element(self, n: int, n_prime: int) -> float:
        """<n|z|n'> in r_B."""
        return float(self.z_matrix[n - 1, n_prime - 1])

    def dvdz_si(self, n: int) -> float:
        """(dV/dz)_nn in N."""
        return float(self.dvdz[n - 1]) * self.material.force_unit


def _read_only(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


def _grid_levels(stark: float, n_max: int, z_max: float, n_points: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Lowest n_max eigenpairs of the 3-point finite-difference Hamiltonian."""
    step = z_max / (n_points + 1)
    z = step * np.arange(1, n_points + 1)
    diagonal = 2.0 / step**2 - 2.0 / z + stark * z
    off_diagonal = np.full(n_points - 1, -1.0 / step**2)
    try:
        values, vectors = linalg.eigh_tridiagonal(
            diagonal,
            off_diagonal,
            select="i",
            select_range=(0, n_max - 1),
        )
    except (linalg.LinAlgError, ValueError) as e:
        msg = f"Vertical eigensolver failed at F={stark:.6g}: {e}"
        raise ConvergenceFailure(msg) from e
    if not np.all(np.isfinite(values)):
        msg = f"Vertical eigensolver returned non-finite energies at F={stark:.6g}."
        raise ConvergenceFailure(msg)
    return z, values, vectors / np.sqrt(step)


def _richardson(fine: np.ndarray, coarse: np.ndarray, ratio: float) -> np.ndarray:
    """Remove the leading h^2 error term from two grid estimates."""
    return (ratio**2 * fine - coarse) / (ratio**2 - 1.0)


def solve_vertical(
    material: MaterialProperties,
    e_perp: float,
    n_max: int = VERTICAL_N_MAX,
    grid: GridSpec | None = None,
) -> VerticalSpectrum:
    """
    Solve for the lowest vertical levels at a perpendicular field.

    Args:
        material (MaterialProperties): calibrated material.
        e_perp (float): perpendicular field in V/m, >= 0.
        n_max (int): number of levels, >= 1.
        grid (GridSpec | None): solver grid; default box and density when None.

    Returns:
        VerticalSpectrum: energies, wavefunctions and matrix elements.

    Processing Logic:
        - Energies are Richardson-extrapolated from the grid and one with half the density.
        - Wavefunctions are taken from the fine grid, positive at the first grid point.
        - The highest level must keep its tail out of the last part of the box.
    """
    return _solve_cached(material, float(e_perp), int(n_max), grid or GridSpec())


@lru_cache(maxsize=128)
def _solve_cached(material: MaterialProperties, e_perp: float, n_max: int, grid: GridSpec) -> VerticalSpectrum:
    if n_max < 1:
        msg = f"n_max must be >= 1, got {n_max}."
        raise ConvergenceFailure(msg)
    stark = material.scaled_field(e_perp)
    z, energies, psi = _grid_levels(stark, n_max, grid.z_max, grid.n_points)
    step = grid.step

    if grid.richardson:
        coarse_intervals = (grid.n_points + 1) // 2
        _, coarse, _ = _grid_levels(stark, n_max, grid.z_max, coarse_intervals - 1)
        energies = _richardson(energies, coarse, (grid.z_max / coarse_intervals) / step)

    # Phase convention: psi_n > 0 next to the wall.
    psi = psi * np.where(psi[0] < 0.0, -1.0, 1.0)

    # Tail check on every level: the outer part of the box must be empty.
    tail_start = int(np.floor((1.0 - GRID_TAIL_FRACTION) * grid.n_points))
    tail_norm = np.sum(psi[tail_start:] ** 2, axis=0) * step
    if tail_norm[-1] > GRID_TAIL_LIMIT:
        msg = (
            f"Level n={n_max} keeps {tail_norm[-1]:.2e} of its norm in the outer"
            f" {GRID_TAIL_FRACTION:.0%} of a {grid.z_max:g} r_B box.  Increase z_max or lower n_max."
        )
        raise GridTooSmall(msg)

    weighted = psi * step
    z_matrix = weighted.T @ (z[:, None] * psi)
    z2_matrix = weighted.T @ ((z**2)[:, None] * psi)
    z_matrix = 0.5 * (z_matrix + z_matrix.T)
    z2_matrix = 0.5 * (z2_matrix + z2_matrix.T)

    # Wall form: (psi'(0))^2 from the one-sided second-order derivative.
    dvdz_slope = ((4.0 * psi[0] - psi[1]) / (2.0 * step)) ** 2
    # Trapezoid from the wall, where psi^2 * 2/z^2 tends to 2 * psi'(0)^2.
    dvdz = (np.sum(psi**2 * (2.0 / z**2 + stark)[:, None], axis=0) + dvdz_slope) * step

    logger.debug(
        f"vertical: {material.isotope.value} E_perp={e_perp / V_PER_CM:.4f} V/cm n_max={n_max}"
        f" E={np.array2string(energies, precision=6)}",
    )
    return VerticalSpectrum(
        material=material,
        e_perp=e_perp,
        grid_spec=grid,
        z=_read_only(z),
        energies=_read_only(energies),
        wavefunctions=_read_only(psi),
        z_matrix=_read_only(z_matrix),
        z2_matrix=_read_only(z2_matrix),
        dvdz=_read_only(dvdz),
        dvdz_slope=_read_only(dvdz_slope),
        tail_norm=_read_only(tail_norm),
    )


def orthonormality_error(vs: VerticalSpectrum) -> float:
    """max |<n|n'> - delta_nn'| on the grid."""
    overlap = vs.wavefunctions.T @ vs.wavefunctions * vs.grid_spec.step
    return float(np.max(np.abs(overlap - np.eye(vs.n_max))))


def truncation_report(vs: VerticalSpectrum) -> np.ndarray:
    """
    Completeness of the truncated basis for the z^2 sum rule.

        :param vs: vertical spectrum
        :return: |(z^2)_nn - sum_n' z_nn'^2| / (z^2)_nn for every level
    """
    diagonal = np.diag(vs.z2_matrix)
    return np.abs(diagonal - np.sum(vs.z_matrix**2, axis=1)) / diagonal


def stark_slope(
    material: MaterialProperties,
    e_perp: float,
    n: int,
    n_prime: int,
    grid: GridSpec | None = None,
    step_v_cm: float = STARK_STEP_V_CM,
) -> float:
    """
    d(E_n' - E_n)/dE_perp in GHz per V/cm by central difference.

    Falls back to a forward difference when E_perp is closer to zero than the step.
    """
    levels = max(n, n_prime, 2)
    delta = step_v_cm * V_PER_CM

    def frequency(field_v_m: float) -> float:
        return solve_vertical(material, field_v_m, levels, grid).transition_ghz(n, n_prime)

    if e_perp >= delta:
        return (frequency(e_perp + delta) - frequency(e_perp - delta)) / (2.0 * step_v_cm)
    return (frequency(e_perp + delta) - frequency(e_perp)) / step_v_cm


def resonance_field(
    material: MaterialProperties,
    frequency_ghz: float,
    n: int = 1,
    n_prime: int = 2,
    e_range_v_cm: tuple[float, float] = (0.0, 60.0),
    grid: GridSpec | None = None,
) -> float:
    """
    The E_perp (V/m) at which the n -> n' transition is resonant with a microwave frequency.

    Raises:
        ConvergenceFailure: the frequency is not bracketed by the field range.
    """
    levels = max(n, n_prime, 2)

    def detuning(field_v_cm: float) -> float:
        return solve_vertical(material, field_v_cm * V_PER_CM, levels, grid).transition_ghz(n, n_prime) - frequency_ghz

    low, high = e_range_v_cm
    if detuning(low) * detuning(high) > 0.0:
        msg = (
            f"{frequency_ghz} GHz is not reached by the {n}->{n_prime} transition between"
            f" {low} and {high} V/cm."
        )
        raise ConvergenceFailure(msg)
    root = brentq(detuning, low, high, xtol=1e-6)
    logger.debug(f"resonance: {n}->{n_prime} at {frequency_ghz} GHz for E_perp={root:.4f} V/cm")
    return root * V_PER_CM


def dump_wavefunctions(vs: VerticalSpectrum, path: Path | str) -> Path:
    """Write z (nm) and psi_n (1/sqrt(r_B)) on the grid as CSV."""
    frame = pd.DataFrame({"z_nm": vs.z * vs.material.bohr_radius / NANOMETER})
    for index in range(vs.n_max):
        frame[f"psi_{index + 1}"] = vs.wavefunctions[:, index]
    path = Path(path)
    frame.to_csv(path, index=False, float_format="%.10e", lineterminator="\n")
    return path
