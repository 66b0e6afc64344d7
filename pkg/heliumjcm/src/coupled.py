"""Coupled vertical and Landau-level spectrum in a tilted magnetic field."""

#! /usr/bin/env python3

#                                                                                      #
# coupled: |n,l> product basis, Hamiltonian assembly, diagonalization and sweeps       #
#                                                                                      #
from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass, replace

import numpy as np
import pandas as pd
from scipy import linalg
from scipy.optimize import bisect, minimize_scalar

from heliumjcm.src.config import BRANCH_OVERLAP_FLOOR, CROSSING_TOLERANCE_T, GAP_SEARCH_HALF_WIDTH_T
from heliumjcm.src.error import (
    BasisMismatch,
    BranchTrackingLost,
    ConvergenceFailure,
    HeliumJCMError,
    NoCrossingInRange,
)
from heliumjcm.src.materials import FieldConfiguration, MaterialProperties, scaled_fields
from heliumjcm.src.sysconst import V_PER_CM, DiamagneticMode, logger
from heliumjcm.src.vertical import GridSpec, VerticalSpectrum, solve_vertical

State = tuple[int, int]  # (n, l), n counts from 1


@dataclass(frozen=True)
class ProductBasis:
    """Truncated |n,l> basis.  Index k = l*n_max + (n - 1)."""

    n_max: int
    l_max: int

    def __post_init__(self) -> None:
        """Validate the truncation."""
        if self.n_max < 1 or self.l_max < 0:
            msg = f"Invalid basis truncation n_max={self.n_max}, l_max={self.l_max}."
            raise BasisMismatch(msg)

    @property
    def size(self) -> int:
        """Number of product states."""
        return self.n_max * (self.l_max + 1)

    def index(self, n: int, l: int) -> int:  # noqa: E741
        """Position of |n,l> in the basis."""
        if not (1 <= n <= self.n_max and 0 <= l <= self.l_max):
            msg = f"|{n},{l}> is outside the basis n<={self.n_max}, l<={self.l_max}."
            raise BasisMismatch(msg)
        return l * self.n_max + (n - 1)

    def state(self, k: int) -> State:
        """(n, l) of basis position k."""
        l, n0 = divmod(k, self.n_max)  # noqa: E741
        return n0 + 1, l


@dataclass(frozen=True, eq=False)
class CoupledSpectrum:
    """Eigenpairs of the coupled Hamiltonian.  Energies in R_e, ascending."""

    basis: ProductBasis
    config: FieldConfiguration
    material: MaterialProperties
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns are eigenstates
    z_block: np.ndarray  # <n|z|n'> of the basis, r_B

    def energies_ghz(self) -> np.ndarray:
        """Eigenvalues as E/h in GHz."""
        return self.eigenvalues * self.material.rydberg_ghz

    def weights(self, k: int) -> np.ndarray:
        """|<n,l|k>|^2 as an (l_max+1, n_max) array."""
        return (self.eigenvectors[:, k] ** 2).reshape(self.basis.l_max + 1, self.basis.n_max)

    def dominant(self, k: int) -> tuple[int, int, float]:
        """(n, l, weight) of the product state with the largest weight in eigenstate k."""
        column = self.eigenvectors[:, k] ** 2
        position = int(np.argmax(column))
        n, l = self.basis.state(position)  # noqa: E741
        return n, l, float(column[position])

    def state_index(self, n: int, l: int) -> int:  # noqa: E741
        """Eigenstate with the largest projection on |n,l>."""
        return int(np.argmax(self.eigenvectors[self.basis.index(n, l)] ** 2))

    def pair_indices(self, first: State, second: State) -> tuple[int, int]:
        """The two eigenstates with the largest combined weight on a pair of product states, lower first."""
        rows = [self.basis.index(*first), self.basis.index(*second)]
        weight = np.sum(self.eigenvectors[rows] ** 2, axis=0)
        top = np.argsort(weight)[-2:]
        low, high = sorted(int(k) for k in top)
        return low, high

    def moments_from(self, k_initial: int) -> np.ndarray:
        """<k|z|k_initial> for every eigenstate k, in r_B."""
        shape = (self.basis.l_max + 1, self.basis.n_max)
        applied = (self.eigenvectors[:, k_initial].reshape(shape) @ self.z_block.T).reshape(-1)
        return self.eigenvectors.T @ applied

    def moment(self, k: int, k_initial: int) -> float:
        """<k|z|k_initial> in r_B."""
        return float(self.moments_from(k_initial)[k])


def _diamagnetic_block(vs: VerticalSpectrum, n_max: int, mode: DiamagneticMode) -> np.ndarray:
    if mode is DiamagneticMode.FULL:
        return np.array(vs.z2_matrix[:n_max, :n_max])
    if mode is DiamagneticMode.DIAGONAL:
        return np.diag(np.diag(vs.z2_matrix)[:n_max])
    z = vs.z_matrix[:n_max, :n_max]
    return z @ z


def assemble_hamiltonian(
    vs: VerticalSpectrum,
    cfg: FieldConfiguration,
    basis: ProductBasis,
    mode: DiamagneticMode = DiamagneticMode.FULL,
) -> np.ndarray:
    """
    Build the real symmetric Hamiltonian on the product basis (units of R_e).

    H = E_n + hbar*omega_c*l + (m*omega_y^2/2)*z^2 + (hbar*omega_y/(sqrt(2)*l_B))*z*(a + a_dagger),
    with the constant hbar*omega_c/2 dropped.

    Args:
        vs (VerticalSpectrum): vertical levels at cfg.e_perp.
        cfg (FieldConfiguration): fields.
        basis (ProductBasis): truncation, basis.n_max <= vs.n_max.
        mode (DiamagneticMode): representation of the z^2 term.

    Returns:
        np.ndarray: (size, size) Hamiltonian.
    """
    if basis.n_max > vs.n_max:
        msg = f"Basis needs {basis.n_max} vertical levels but only {vs.n_max} were solved."
        raise BasisMismatch(msg)
    if not np.isclose(vs.e_perp, cfg.e_perp, rtol=1e-9, atol=1e-9):
        msg = (
            f"Vertical levels were solved at {vs.e_perp / V_PER_CM:g} V/cm but the field configuration"
            f" has {cfg.e_perp_v_cm:g} V/cm."
        )
        raise BasisMismatch(msg)

    scaled = scaled_fields(vs.material, cfg)
    n_count = basis.n_max
    l_count = basis.l_max + 1
    landau = np.arange(l_count, dtype=float)
    ladder = np.diag(np.sqrt(landau[1:]), 1)
    ladder = ladder + ladder.T

    hamiltonian = np.kron(np.eye(l_count), np.diag(vs.energies[:n_count]))
    hamiltonian += np.kron(np.diag(scaled.cyclotron * landau), np.eye(n_count))
    if scaled.diamagnetic != 0.0:
        hamiltonian += scaled.diamagnetic * np.kron(np.eye(l_count), _diamagnetic_block(vs, n_count, mode))
    if scaled.coupling != 0.0:
        hamiltonian += scaled.coupling * np.kron(ladder, vs.z_matrix[:n_count, :n_count])
    return 0.5 * (hamiltonian + hamiltonian.T)


def diagonalize(
    hamiltonian: np.ndarray,
    basis: ProductBasis,
    vs: VerticalSpectrum,
    cfg: FieldConfiguration,
) -> CoupledSpectrum:
    """Full eigendecomposition of an assembled Hamiltonian."""
    if not np.all(np.isfinite(hamiltonian)):
        msg = "Hamiltonian has non-finite entries."
        raise ConvergenceFailure(msg)
    try:
        values, vectors = linalg.eigh(hamiltonian)
    except linalg.LinAlgError as e:
        msg = f"Coupled eigensolver failed at B_z={cfg.b_z} T, B_y={cfg.b_y} T: {e}"
        raise ConvergenceFailure(msg) from e
    return CoupledSpectrum(
        basis=basis,
        config=cfg,
        material=vs.material,
        eigenvalues=values,
        eigenvectors=vectors,
        z_block=np.array(vs.z_matrix[: basis.n_max, : basis.n_max]),
    )


def compute_spectrum(
    vs: VerticalSpectrum,
    cfg: FieldConfiguration,
    basis: ProductBasis,
    mode: DiamagneticMode = DiamagneticMode.FULL,
) -> CoupledSpectrum:
    """Assemble and diagonalize in one step."""
    return diagonalize(assemble_hamiltonian(vs, cfg, basis, mode), basis, vs, cfg)


def uncoupled_energy(vs: VerticalSpectrum, cfg: FieldConfiguration, state: State) -> float:
    """E_n + hbar*omega_c*l (units of R_e), the B_y = 0 level of |n,l>."""
    n, l = state  # noqa: E741
    return float(vs.energies[n - 1]) + scaled_fields(vs.material, replace(cfg, b_y=0.0)).cyclotron * l


def find_crossing(
    vs: VerticalSpectrum,
    cfg: FieldConfiguration,
    pair: tuple[State, State],
    b_z_range: tuple[float, float],
    tolerance: float = CROSSING_TOLERANCE_T,
) -> float:
    """
    B_z (T) at which two uncoupled levels |n,l+1> and |n',l> are degenerate.

    Raises:
        NoCrossingInRange: the levels do not change order strictly inside the range.
    """
    first, second = pair

    def splitting(b_z: float) -> float:
        point = replace(cfg, b_z=b_z, b_y=0.0)
        return uncoupled_energy(vs, point, first) - uncoupled_energy(vs, point, second)

    low, high = b_z_range
    if splitting(low) * splitting(high) >= 0.0:
        msg = f"Levels {first} and {second} do not cross between {low} and {high} T."
        raise NoCrossingInRange(msg)
    b_z = bisect(splitting, low, high, xtol=tolerance)
    logger.debug(f"crossing {first}/{second} at B_z={b_z:.5f} T")
    return b_z


def spectrum_sweep(
    material: MaterialProperties,
    cfg: FieldConfiguration,
    basis: ProductBasis,
    axis: str,
    values: np.ndarray,
    mode: DiamagneticMode = DiamagneticMode.FULL,
    vertical_n_max: int | None = None,
    threads: int = 1,
    grid: GridSpec | None = None,
    keep_going: bool = False,
) -> list[CoupledSpectrum | None]:
    """
    Diagonalize along a sweep of one field knob, in sweep order.

        :param material: material
        :param cfg: base field configuration
        :param basis: product basis
        :param axis: "b_z", "b_y" or "e_perp" (values for e_perp in V/m)
        :param values: sweep points
        :param mode: diamagnetic representation
        :param vertical_n_max: number of vertical levels to solve (defaults to basis.n_max)
        :param threads: worker threads
        :param grid: vertical solver grid
        :param keep_going: log failed points and return None for them instead of raising
        :return: one CoupledSpectrum per sweep point
    """
    levels = max(vertical_n_max or basis.n_max, basis.n_max)

    def one_point(value: float) -> CoupledSpectrum | None:
        point = replace(cfg, **{axis: float(value)})
        try:
            vs = solve_vertical(material, point.e_perp, levels, grid)
            return compute_spectrum(vs, point, basis, mode)
        except HeliumJCMError as e:
            if not keep_going:
                raise
            logger.warning(f"sweep point {axis}={value} failed: {e}")
            return None

    with concurrent.futures.ThreadPoolExecutor(max_workers=max(threads, 1)) as executor:
        return list(executor.map(one_point, values))


def pair_branches(family: list[CoupledSpectrum], pair: tuple[State, State]) -> np.ndarray:
    """
    The two eigenstates carrying a pair of product states at every sweep point, checked for continuity.

    Each point takes the states with the largest weight on the pair, so a weak side crossing with a
    third level cannot pull a branch away.  Successive selections must overlap by BRANCH_OVERLAP_FLOOR.

        :param family: spectra along a sweep, same basis
        :param pair: the two product states
        :return: (len(family), 2) array of eigenstate indices, lower first
    """
    indices = np.array([spectrum.pair_indices(*pair) for spectrum in family], dtype=int)
    for step in range(1, len(family)):
        previous = family[step - 1].eigenvectors[:, indices[step - 1]]
        overlap = np.abs(family[step].eigenvectors[:, indices[step]].T @ previous)
        kept = max(min(overlap[0, 0], overlap[1, 1]), min(overlap[0, 1], overlap[1, 0]))
        if kept < BRANCH_OVERLAP_FLOOR:
            msg = f"Branch overlap dropped below {BRANCH_OVERLAP_FLOOR} at sweep point {step}.  Refine the sweep."
            raise BranchTrackingLost(msg)
    return indices


def minimum_gap(
    family: list[CoupledSpectrum],
    b_z_values: np.ndarray,
    pair: tuple[State, State],
) -> tuple[float, float]:
    """
    Location and size of the minimum splitting of a pair's two branches along a B_z sweep.

    The minimum is refined with a parabola through gap^2, which is exact for an isolated
    two-level anticrossing.

    Returns:
        tuple[float, float]: (B_z in T, gap in GHz).
    """
    branches = pair_branches(family, pair)
    gaps = np.array(
        [spec.eigenvalues[high] - spec.eigenvalues[low] for spec, (low, high) in zip(family, branches, strict=True)],
    )
    lowest = int(np.argmin(gaps))
    if lowest in (0, len(gaps) - 1):
        msg = f"The {pair[0]}/{pair[1]} splitting has no interior minimum in the sweep."
        raise NoCrossingInRange(msg)
    window = slice(lowest - 1, lowest + 2)
    curve = np.polyfit(b_z_values[window], gaps[window] ** 2, 2)
    if curve[0] <= 0.0:
        b_z = float(b_z_values[lowest])
        gap_sq = float(gaps[lowest] ** 2)
    else:
        b_z = float(-curve[1] / (2.0 * curve[0]))
        gap_sq = max(float(np.polyval(curve, b_z)), 0.0)
    return b_z, family[0].material.to_ghz(np.sqrt(gap_sq))


def refine_minimum_gap(
    vs: VerticalSpectrum,
    cfg: FieldConfiguration,
    basis: ProductBasis,
    pair: tuple[State, State],
    center: float,
    half_width: float = GAP_SEARCH_HALF_WIDTH_T,
    mode: DiamagneticMode = DiamagneticMode.FULL,
) -> tuple[float, float]:
    """Bounded scalar minimization of the pair splitting around a B_z estimate.  Returns (B_z, gap GHz)."""

    def gap(b_z: float) -> float:
        spectrum = compute_spectrum(vs, replace(cfg, b_z=b_z), basis, mode)
        low, high = spectrum.pair_indices(*pair)
        return float(spectrum.eigenvalues[high] - spectrum.eigenvalues[low])

    bounds = (max(center - half_width, 1e-6), center + half_width)
    result = minimize_scalar(gap, bounds=bounds, method="bounded", options={"xatol": CROSSING_TOLERANCE_T})
    if not result.success:
        msg = f"Gap minimization failed near B_z={center} T: {result.message}"
        raise ConvergenceFailure(msg)
    return float(result.x), vs.material.to_ghz(float(result.fun))


def convergence_drift(
    vs: VerticalSpectrum,
    cfg: FieldConfiguration,
    basis: ProductBasis,
    ceiling_ghz: float,
    l_step: int = 10,
    mode: DiamagneticMode = DiamagneticMode.FULL,
) -> float:
    """Largest eigenvalue change (MHz) below a ceiling when l_max grows by l_step."""
    small = compute_spectrum(vs, cfg, basis, mode).energies_ghz()
    large = compute_spectrum(vs, cfg, replace(basis, l_max=basis.l_max + l_step), mode).energies_ghz()
    keep = small < ceiling_ghz
    return float(np.max(np.abs(small[keep] - large[: len(small)][keep])) * 1e3) if np.any(keep) else 0.0


def spectrum_table(family: list[CoupledSpectrum], axis: str, values: np.ndarray, max_levels: int) -> pd.DataFrame:
    """Long-format table of the lowest eigenvalues along a sweep with their dominant labels."""
    rows = []
    for value, spectrum in zip(values, family, strict=True):
        energies = spectrum.energies_ghz()
        for k in range(min(max_levels, len(energies))):
            n, l, weight = spectrum.dominant(k)  # noqa: E741
            rows.append(
                {
                    axis: float(value),
                    "k": k,
                    "energy_ghz": energies[k],
                    "dominant_n": n,
                    "dominant_l": l,
                    "dominant_weight": weight,
                },
            )
    return pd.DataFrame(rows)
