"""Microwave absorption spectroscopy on the coupled spectrum."""

#! /usr/bin/env python3

#                                                                                      #
# spectro: thermal populations, transition catalogs, broadening and absorption maps    #
#                                                                                      #
# Maps are recorded the way the experiment does it: fixed microwave frequency, E_perp  #
# swept on one axis, B_z or B_y stepped on the other.  A line of frequency f at the    #
# reference field sits at E_c = E_ref + (f_mw - f)/kappa with kappa its Stark slope.   #
#                                                                                      #
from __future__ import annotations

import concurrent.futures
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.signal import find_peaks

from heliumjcm.src.config import (
    BASE_WIDTH_GHZ,
    DEFAULT_STARK_SLOPE,
    FLUCTUATING_FIELD_COEFFICIENT,
    PROFILE_SIGMAS,
    THERMAL_L_CUT,
    THERMAL_REGIME_BZ,
)
from heliumjcm.src.coupled import CoupledSpectrum, ProductBasis, State, compute_spectrum
from heliumjcm.src.error import ConfigError, DegenerateField, HeliumJCMError
from heliumjcm.src.materials import FieldConfiguration, MaterialProperties, derived_frequencies
from heliumjcm.src.sysconst import BOLTZMANN, ELECTRON_MASS, HBAR, V_PER_CM, DiamagneticMode, logger
from heliumjcm.src.vertical import GridSpec, solve_vertical, stark_slope

# Lines lighter than this (population x |z|^2, r_B^2) are not drawn on a map.
MIN_LINE_STRENGTH = 1.0e-12
# Thermal weights below this are ignored when picking initial states.
MIN_POPULATION = 1.0e-6
# Lines whose Stark slope is below this (GHz per V/cm) do not move with E_perp.
MIN_SLOPE = 1.0e-3


def thermal_populations(cfg: FieldConfiguration, l_cut: int = THERMAL_L_CUT) -> np.ndarray:
    """
    Boltzmann weights of the Landau ladder of the ground vertical level, l = 0..l_cut.

    Raises:
        DegenerateField: B_z = 0 has no Landau ladder.
    """
    if cfg.b_z == 0.0:
        msg = "Thermal Landau populations need B_z > 0."
        raise DegenerateField(msg)
    omega_c, _, _ = derived_frequencies(cfg)
    ratio = HBAR * omega_c / (BOLTZMANN * cfg.temperature)
    weights = np.exp(-ratio * np.arange(l_cut + 1))
    return weights / np.sum(weights)


@dataclass(frozen=True)
class TransitionLine:
    """One absorption line from a thermally populated |1,l> into an eigenstate."""

    initial: State
    final: State  # dominant label of the final eigenstate
    initial_index: int
    final_index: int
    frequency_ghz: float
    moment_sq: float  # |<f|z|i>|^2 in r_B^2
    population: float
    slope: float = 0.0  # GHz per V/cm
    reference_e_perp_v_cm: float = 0.0

    @property
    def sideband_order(self) -> int:
        """l_final - l_initial."""
        return self.final[1] - self.initial[1]

    @property
    def strength(self) -> float:
        """Population times moment squared: the area of the line."""
        return self.population * self.moment_sq

    def center_e_perp(self, mw_frequency: float) -> float:
        """E_perp in V/cm at which the line is resonant with the microwave."""
        return self.reference_e_perp_v_cm + (mw_frequency - self.frequency_ghz) / self.slope


def transition_catalog(
    spectrum: CoupledSpectrum,
    populations: np.ndarray,
    band: tuple[float, float],
) -> list[TransitionLine]:
    """
    All upward lines from populated |1,l> eigenstates with frequency inside a band (GHz).

    Lines of zero moment are kept so that forbidden sidebands stay visible in the catalog.
    """
    energies = spectrum.energies_ghz()
    lines: list[TransitionLine] = []
    for l, population in enumerate(populations):  # noqa: E741
        if population < MIN_POPULATION or l > spectrum.basis.l_max:
            continue
        k_initial = spectrum.state_index(1, l)
        moments = spectrum.moments_from(k_initial)
        frequencies = energies - energies[k_initial]
        for k in np.flatnonzero((frequencies > band[0]) & (frequencies < band[1])):
            n, l_final, _ = spectrum.dominant(int(k))
            lines.append(
                TransitionLine(
                    initial=(1, l),
                    final=(n, l_final),
                    initial_index=k_initial,
                    final_index=int(k),
                    frequency_ghz=float(frequencies[k]),
                    moment_sq=float(moments[k] ** 2),
                    population=float(population),
                ),
            )
    return lines


def sideband_moment_ratio(lines: list[TransitionLine], initial: State = (1, 0), final_n: int = 2) -> float:
    """
    |<final_n, l+1|z|initial>|^2 over |<final_n, l|z|initial>|^2 for an initial state |1,l>.

    Both lines are picked by the dominant label of their final state.
    """
    l = initial[1]  # noqa: E741

    def moment_sq(final: State) -> float:
        return max((ln.moment_sq for ln in lines if ln.initial == initial and ln.final == final), default=0.0)

    carrier = moment_sq((final_n, l))
    return moment_sq((final_n, l + 1)) / carrier if carrier else math.inf


@dataclass(frozen=True)
class BroadeningModel:
    """
    Gaussian line width (GHz, one standard deviation) from three sources added in quadrature:
    a base width, the many-electron fluctuating field seen through the tilted field, and the
    thermal smearing of the in-plane velocity at low B_z.
    """

    base_width: float = BASE_WIDTH_GHZ
    density: float = 0.0  # n_s, cm^-2
    field_coefficient: float = FLUCTUATING_FIELD_COEFFICIENT
    stark_slope: float = DEFAULT_STARK_SLOPE  # GHz per V/cm

    def width(self, cfg: FieldConfiguration) -> float:
        """Width for a field configuration."""
        return broadening_width(cfg, self)


def broadening_width(cfg: FieldConfiguration, model: BroadeningModel) -> float:
    """
    sqrt(base^2 + (kappa*(B_y/B_z)*<E_f>)^2 + thermal^2) in GHz.

    <E_f> = C_f*n_s^(3/4) in V/cm.  The thermal term kappa*sqrt(k_B*T/m)*B_y applies below
    THERMAL_REGIME_BZ only.
    """
    many_electron = 0.0
    if cfg.b_y > 0.0 and model.density > 0.0:
        if cfg.b_z == 0.0:
            msg = "Many-electron broadening diverges at B_z = 0 with B_y > 0."
            raise DegenerateField(msg)
        fluctuating = model.field_coefficient * model.density**0.75
        many_electron = model.stark_slope * (cfg.b_y / cfg.b_z) * fluctuating
    thermal = 0.0
    if cfg.b_z < THERMAL_REGIME_BZ:
        velocity = math.sqrt(BOLTZMANN * cfg.temperature / ELECTRON_MASS)
        thermal = model.stark_slope * velocity * cfg.b_y / V_PER_CM
    return math.sqrt(model.base_width**2 + many_electron**2 + thermal**2)


def line_profile(
    line: TransitionLine,
    width_ghz: float,
    e_perp_axis: np.ndarray,
    mw_frequency: float,
) -> np.ndarray:
    """
    Gaussian in E_perp (V/cm) of area line.strength centred where the line meets the microwave.

    A zero width puts the whole area into the nearest grid cell.
    """
    profile = np.zeros_like(e_perp_axis, dtype=float)
    if abs(line.slope) < MIN_SLOPE:
        return profile
    center = line.center_e_perp(mw_frequency)
    sigma = width_ghz / abs(line.slope)
    if sigma == 0.0:
        position = int(np.argmin(np.abs(e_perp_axis - center)))
        step = e_perp_axis[1] - e_perp_axis[0] if len(e_perp_axis) > 1 else 1.0
        profile[position] = line.strength / step
        return profile
    offset = (e_perp_axis - center) / sigma
    inside = np.abs(offset) < PROFILE_SIGMAS
    profile[inside] = line.strength * np.exp(-0.5 * offset[inside] ** 2) / (sigma * math.sqrt(2.0 * math.pi))
    return profile


@dataclass(frozen=True, eq=False)
class AbsorptionMap:
    """Intensity over (sweep value, E_perp), normalized to a maximum of 1."""

    sweep_axis: str
    sweep_values: np.ndarray
    e_perp_axis: np.ndarray  # V/cm
    intensity: np.ndarray  # (len(sweep_values), len(e_perp_axis))
    scale: float  # raw = intensity * scale
    mw_frequency: float
    lines: list[list[TransitionLine]] = field(repr=False)
    failed_points: list[dict] = field(default_factory=list)

    @property
    def raw(self) -> np.ndarray:
        """Intensity before normalization."""
        return self.intensity * self.scale


def _with_slopes(
    lines: list[TransitionLine],
    material: MaterialProperties,
    e_perp: float,
    grid: GridSpec | None = None,
) -> list[TransitionLine]:
    slopes: dict[tuple[int, int], float] = {}
    updated = []
    for line in lines:
        pair = (line.initial[0], line.final[0])
        if pair not in slopes:
            slopes[pair] = 0.0 if pair[0] == pair[1] else stark_slope(material, e_perp, *pair, grid=grid)
        updated.append(replace(line, slope=slopes[pair], reference_e_perp_v_cm=e_perp / V_PER_CM))
    return updated


def absorption_map(
    material: MaterialProperties,
    cfg: FieldConfiguration,
    basis: ProductBasis,
    sweep_axis: str,
    sweep_values: np.ndarray,
    e_perp_axis: np.ndarray,
    mw_frequency: float,
    broadening: BroadeningModel,
    l_cut: int = THERMAL_L_CUT,
    mode: DiamagneticMode = DiamagneticMode.FULL,
    high_fidelity: bool = False,
    threads: int = 1,
    grid: GridSpec | None = None,
) -> AbsorptionMap:
    """
    Simulate an absorption map.

    Args:
        material (MaterialProperties): material.
        cfg (FieldConfiguration): reference configuration; cfg.e_perp is the reference E_perp.
        basis (ProductBasis): product basis.
        sweep_axis (str): "b_z" or "b_y".
        sweep_values (np.ndarray): stepped field values in T.
        e_perp_axis (np.ndarray): swept E_perp in V/cm.
        mw_frequency (float): microwave frequency in GHz.
        broadening (BroadeningModel): line width model.
        l_cut (int): highest thermally populated Landau index.
        mode (DiamagneticMode): diamagnetic representation.
        high_fidelity (bool): re-solve at every E_perp instead of using Stark slopes.  Line traces come
            from the reference E_perp in both modes.
        threads (int): worker threads over sweep points.
        grid (GridSpec | None): vertical solver grid.

    Returns:
        AbsorptionMap: the map; points that failed numerically are zero and listed in failed_points.
    """
    if sweep_axis not in ("b_z", "b_y"):
        msg = f"Absorption maps step B_z or B_y, not '{sweep_axis}'.  E_perp is always the second axis."
        raise ConfigError(msg)
    span = (np.max(e_perp_axis) - np.min(e_perp_axis)) * 2.0 + 20.0
    band = (mw_frequency - span, mw_frequency + span)

    def one_point(value: float) -> tuple[np.ndarray, list[TransitionLine]]:
        point = replace(cfg, **{sweep_axis: float(value)})
        width = broadening.width(point)
        populations = thermal_populations(point, l_cut)
        vs = solve_vertical(material, point.e_perp, basis.n_max, grid)
        lines = transition_catalog(compute_spectrum(vs, point, basis, mode), populations, band)
        lines = [line for line in lines if line.strength >= MIN_LINE_STRENGTH]
        lines = _with_slopes(lines, material, point.e_perp, grid)
        if high_fidelity:
            row = _resolved_row(material, point, basis, e_perp_axis, mw_frequency, width, populations, mode, grid)
            return row, lines
        row = np.zeros(len(e_perp_axis))
        for line in lines:
            row += line_profile(line, width, e_perp_axis, mw_frequency)
        return row, lines

    def guarded(value: float) -> tuple[np.ndarray | None, list[TransitionLine], str | None]:
        try:
            row, lines = one_point(value)
        except HeliumJCMError as e:
            logger.warning(f"absorption map: {sweep_axis}={value} failed: {e}")
            return None, [], str(e)
        return row, lines, None

    with concurrent.futures.ThreadPoolExecutor(max_workers=max(threads, 1)) as executor:
        results = list(executor.map(guarded, sweep_values))

    raw = np.zeros((len(sweep_values), len(e_perp_axis)))
    failed = []
    for index, (row, _, error) in enumerate(results):
        if row is None:
            failed.append({"index": index, sweep_axis: float(sweep_values[index]), "error": error})
        else:
            raw[index] = row
    scale = float(np.max(raw)) if np.max(raw) > 0.0 else 1.0
    return AbsorptionMap(
        sweep_axis=sweep_axis,
        sweep_values=np.asarray(sweep_values, dtype=float),
        e_perp_axis=np.asarray(e_perp_axis, dtype=float),
        intensity=raw / scale,
        scale=scale,
        mw_frequency=mw_frequency,
        lines=[lines for _, lines, _ in results],
        failed_points=failed,
    )


def _resolved_row(
    material: MaterialProperties,
    point: FieldConfiguration,
    basis: ProductBasis,
    e_perp_axis: np.ndarray,
    mw_frequency: float,
    width: float,
    populations: np.ndarray,
    mode: DiamagneticMode,
    grid: GridSpec | None,
) -> np.ndarray:
    """Row of a map with the spectrum recomputed at every E_perp; Gaussian in frequency."""
    row = np.zeros(len(e_perp_axis))
    band = (mw_frequency - PROFILE_SIGMAS * width, mw_frequency + PROFILE_SIGMAS * width)
    for index, e_perp_v_cm in enumerate(e_perp_axis):
        here = replace(point, e_perp=float(e_perp_v_cm) * V_PER_CM)
        vs = solve_vertical(material, here.e_perp, basis.n_max, grid)
        for line in transition_catalog(compute_spectrum(vs, here, basis, mode), populations, band):
            detuning = (line.frequency_ghz - mw_frequency) / width
            row[index] += line.strength * math.exp(-0.5 * detuning**2) / (width * math.sqrt(2.0 * math.pi))
    return row


def extract_line_centers(amap: AbsorptionMap, row: int, height: float = 0.05) -> np.ndarray:
    """
    Peak positions (V/cm) along E_perp in one map row, refined by a parabola through each maximum.

        :param amap: absorption map
        :param row: sweep index
        :param height: minimum normalized peak height
        :return: sorted E_perp positions
    """
    values = amap.intensity[row]
    axis = amap.e_perp_axis
    peaks, _ = find_peaks(values, height=height)
    centers = []
    for peak in peaks:
        if 0 < peak < len(values) - 1:
            left, middle, right = values[peak - 1 : peak + 2]
            curvature = left - 2.0 * middle + right
            shift = 0.5 * (left - right) / curvature if curvature != 0.0 else 0.0
            centers.append(axis[peak] + shift * (axis[1] - axis[0]))
        else:
            centers.append(axis[peak])
    return np.array(sorted(centers))
