"""Task runners behind the HeliumJCM command line"""

#! /usr/bin/env python3

#                                                                                      #
# runtask: turn a resolved configuration into solver calls and artifacts               #
#                                                                                      #
from __future__ import annotations

import math
from dataclasses import replace
from pathlib import Path

import numpy as np
import pandas as pd

from heliumjcm.src.artifact import provenance, write_sidecar, write_table
from heliumjcm.src.coupled import (
    ProductBasis,
    convergence_drift,
    find_crossing,
    minimum_gap,
    spectrum_sweep,
    spectrum_table,
)
from heliumjcm.src.error import BranchTrackingLost, NearResonance, NoCrossingInRange
from heliumjcm.src.jcm import (
    bethe_cancellation_check,
    coupling_constant,
    lamb_shift_closed_form,
    perturbative_shift,
    shift_from_spectrum,
)
from heliumjcm.src.materials import FieldConfiguration, MaterialProperties, material_for
from heliumjcm.src.primitem import PrimeItems
from heliumjcm.src.ripplon import strong_coupling_report
from heliumjcm.src.selftest import run_self_test
from heliumjcm.src.spectro import BroadeningModel, absorption_map
from heliumjcm.src.sysconst import EXIT_OK, EXIT_SELF_TEST, V_PER_CM, DiamagneticMode, logger
from heliumjcm.src.vertical import (
    GridSpec,
    VerticalSpectrum,
    resonance_field,
    solve_vertical,
    stark_slope,
    truncation_report,
)

# Column names of the stepped axis in lab units.
AXIS_LABELS = {"b_z": "b_z_t", "b_y": "b_y_t", "e_perp": "e_perp_v_cm"}
# Lines weaker than this fraction of the strongest are left out of the map sidecar.
SIDECAR_LINE_FLOOR = 1.0e-3


def build_material(resolved: dict) -> MaterialProperties:
    """Material from the [material] section."""
    section = resolved["material"]
    return material_for(
        section["isotope"],
        barrier_height_ev=section["barrier_height_ev"],
        surface_tension=section["surface_tension"],
        mass_density=section["mass_density"],
        rydberg_mev=section["rydberg_mev"] or None,
    )


def build_grid(resolved: dict) -> GridSpec:
    """Solver grid from the [grid] section."""
    return GridSpec(z_max=resolved["grid"]["z_max"], n_points=resolved["grid"]["n_points"])


def build_field(resolved: dict, material: MaterialProperties, grid: GridSpec) -> FieldConfiguration:
    """
    Field configuration from the [field] section.  E_perp comes from the value, else from the
    requested resonance, else 0 (a stepped E_perp axis replaces it).
    """
    section = resolved["field"]
    if "e_perp_v_cm" in section:
        e_perp = section["e_perp_v_cm"] * V_PER_CM
    elif section["resonance_ghz"] > 0.0:
        n, n_prime = section["resonance_pair"]
        e_perp = resonance_field(material, section["resonance_ghz"], n, n_prime, grid=grid)
    else:
        e_perp = 0.0
    return FieldConfiguration(
        e_perp=e_perp,
        b_z=section.get("b_z", 0.0),
        b_y=section.get("b_y", 0.0),
        temperature=section["temperature"],
    )


def build_basis(resolved: dict) -> tuple[ProductBasis, DiamagneticMode]:
    """Product basis and diamagnetic representation from the [basis] section."""
    section = resolved["basis"]
    return ProductBasis(section["n_max"], section["l_max"]), DiamagneticMode(section["diamagnetic"])


def _sweep_values(resolved: dict) -> np.ndarray:
    section = resolved["sweep"]
    return np.linspace(section["start"], section["stop"], section["points"])


# ################################################################################
# spectrum-sweep
# ################################################################################
def run_spectrum_sweep(resolved: dict, out_dir: Path, threads: int) -> int:
    """Eigenvalues with dominant labels along one field axis."""
    material = build_material(resolved)
    grid = build_grid(resolved)
    cfg = build_field(resolved, material, grid)
    basis, mode = build_basis(resolved)
    axis = resolved["sweep"]["axis"]
    values = _sweep_values(resolved)
    points = values * V_PER_CM if axis == "e_perp" else values
    levels = resolved["grid"]["vertical_n_max"]

    family = spectrum_sweep(material, cfg, basis, axis, points, mode, levels, threads, grid, keep_going=True)
    kept = [(value, spectrum) for value, spectrum in zip(values, family, strict=True) if spectrum is not None]
    for index, spectrum in enumerate(family):
        if spectrum is None:
            failure = {"task": "spectrum-sweep", "index": index, AXIS_LABELS[axis]: float(values[index])}
            PrimeItems.failures.append(failure)

    max_levels = resolved["sweep"]["max_levels"]
    frame = spectrum_table([s for _, s in kept], AXIS_LABELS[axis], np.array([v for v, _ in kept]), max_levels)
    write_table(frame, out_dir, "spectrum.csv")

    diagnostics: dict = {"failed_points": len(family) - len(kept)}
    if kept:
        last = kept[-1][1]
        vs = solve_vertical(material, last.config.e_perp, levels, grid)
        ceiling = float(last.energies_ghz()[min(max_levels, basis.size) - 1])
        diagnostics["truncation_residual"] = truncation_report(vs)
        diagnostics["l_max_drift_mhz"] = convergence_drift(vs, last.config, basis, ceiling, mode=mode)
    write_sidecar({**provenance(resolved, material), "diagnostics": diagnostics}, out_dir, "spectrum.json")
    return EXIT_OK


# ################################################################################
# absorption-map
# ################################################################################
def run_absorption_map(resolved: dict, out_dir: Path, threads: int) -> int:
    """Simulated absorption map over (stepped field, E_perp)."""
    material = build_material(resolved)
    grid = build_grid(resolved)
    cfg = build_field(resolved, material, grid)
    basis, mode = build_basis(resolved)
    section = resolved["spectroscopy"]
    axis = resolved["sweep"]["axis"]
    values = _sweep_values(resolved)
    e_axis = np.linspace(section["e_perp_start"], section["e_perp_stop"], section["e_perp_points"])

    kappa = abs(stark_slope(material, cfg.e_perp, 1, 2, grid=grid))
    model = BroadeningModel(
        base_width=section["base_width_ghz"],
        density=section["density_cm2"],
        field_coefficient=section["field_coefficient"],
        stark_slope=kappa,
    )
    amap = absorption_map(
        material,
        cfg,
        basis,
        axis,
        values,
        e_axis,
        section["mw_frequency_ghz"],
        model,
        l_cut=section["l_cut"],
        mode=mode,
        high_fidelity=section["high_fidelity"],
        threads=threads,
        grid=grid,
    )
    PrimeItems.failures.extend({"task": "absorption-map", **point} for point in amap.failed_points)

    frame = pd.DataFrame(
        {
            AXIS_LABELS[axis]: np.repeat(amap.sweep_values, len(e_axis)),
            "e_perp_v_cm": np.tile(amap.e_perp_axis, len(values)),
            "intensity": amap.intensity.ravel(),
        },
    )
    write_table(frame, out_dir, "absorption_map.csv")

    catalog = []
    for value, lines in zip(amap.sweep_values, amap.lines, strict=True):
        strongest = max((line.strength for line in lines), default=0.0)
        for line in lines:
            if line.strength >= SIDECAR_LINE_FLOOR * strongest:
                catalog.append(
                    {
                        AXIS_LABELS[axis]: float(value),
                        "initial": list(line.initial),
                        "final": list(line.final),
                        "frequency_ghz": line.frequency_ghz,
                        "moment_sq": line.moment_sq,
                        "population": line.population,
                        "sideband_order": line.sideband_order,
                        "center_e_perp_v_cm": line.center_e_perp(amap.mw_frequency) if line.slope else None,
                    },
                )
    sidecar = {
        **provenance(resolved, material),
        "reference_e_perp_v_cm": cfg.e_perp_v_cm,
        "stark_slope_ghz_per_v_cm": kappa,
        "intensity_scale": amap.scale,
        "lines": catalog,
    }
    write_sidecar(sidecar, out_dir, "absorption_map.json")
    return EXIT_OK


# ################################################################################
# shifts
# ################################################################################
def run_shifts(resolved: dict, out_dir: Path, threads: int) -> int:  # noqa: ARG001
    """Lamb and light shifts of the |1,l> -> |2,l> lines against B_y."""
    material = build_material(resolved)
    grid = build_grid(resolved)
    cfg = build_field(resolved, material, grid)
    basis, mode = build_basis(resolved)
    section = resolved["shifts"]
    vs = solve_vertical(material, cfg.e_perp, resolved["grid"]["vertical_n_max"], grid)

    rows = []
    for b_y in section["b_y_values"]:
        point = replace(cfg, b_y=float(b_y))
        for l in section["l_values"]:  # noqa: E741
            near = False
            try:
                perturbative = perturbative_shift(vs, point, 2, l) - perturbative_shift(vs, point, 1, l)
            except NearResonance as e:
                perturbative = math.nan
                near = True
                PrimeItems.warnings.append(f"B_y={b_y} T, l={l}: {e}")
            full = shift_from_spectrum(vs, point, basis, l, mode) if section["compare_full"] else math.nan
            rows.append(
                {
                    "b_y_t": float(b_y),
                    "l": l,
                    "perturbative_ghz": perturbative,
                    "full_ghz": full,
                    "near_resonance": near,
                },
            )
    write_table(pd.DataFrame(rows), out_dir, "shifts.csv")

    strongest = replace(cfg, b_y=float(max(section["b_y_values"])))
    sidecar = {
        **provenance(resolved, material),
        "lamb_closed_form_ghz": {
            str(b_y): lamb_shift_closed_form(vs, replace(cfg, b_y=float(b_y))) for b_y in section["b_y_values"]
        },
        "bethe_check": {f"n={n}": vars(bethe_cancellation_check(vs, strongest, n, 0)) for n in (1, 2)},
        "truncation_residual": truncation_report(vs),
    }
    write_sidecar(sidecar, out_dir, "shifts.json")
    return EXIT_OK


# ################################################################################
# crossings
# ################################################################################
def run_crossings(resolved: dict, out_dir: Path, threads: int) -> int:
    """Uncoupled level crossings in B_z and, optionally, the minimum gaps at a tilt."""
    material = build_material(resolved)
    grid = build_grid(resolved)
    cfg = build_field(resolved, material, grid)
    basis, mode = build_basis(resolved)
    section = resolved["crossings"]
    levels = resolved["grid"]["vertical_n_max"]
    vs = solve_vertical(material, cfg.e_perp, levels, grid)

    entries = []
    for n, upper_l, n_prime, lower_l in section["pairs"]:
        pair = ((n, upper_l), (n_prime, lower_l))
        entry: dict = {"pair": [list(pair[0]), list(pair[1])]}
        try:
            crossing = find_crossing(vs, cfg, pair, (section["b_z_start"], section["b_z_stop"]))
        except NoCrossingInRange as e:
            entry.update({"b_z_t": None, "reason": str(e)})
            entries.append(entry)
            continue
        entry["b_z_t"] = crossing
        if section["gap_b_y"] > 0.0:
            tilted = replace(cfg, b_z=crossing, b_y=section["gap_b_y"])
            entry.update(_gap_at_tilt(material, vs, tilted, basis, mode, pair, levels, threads, grid))
        entries.append(entry)

    write_sidecar(
        {**provenance(resolved, material), "e_perp_v_cm": cfg.e_perp_v_cm, "crossings": entries},
        out_dir,
        "crossings.json",
    )
    return EXIT_OK


def _gap_at_tilt(
    material: MaterialProperties,
    vs: VerticalSpectrum,
    cfg: FieldConfiguration,
    basis: ProductBasis,
    mode: DiamagneticMode,
    pair: tuple,
    levels: int,
    threads: int,
    grid: GridSpec,
) -> dict:
    """Minimum gap of a pair near its crossing and the 2*sqrt(l+1)*|g| it should equal."""
    b_values = np.linspace(max(cfg.b_z - 0.15, 1e-3), cfg.b_z + 0.15, 61)
    try:
        family = spectrum_sweep(material, cfg, basis, "b_z", b_values, mode, levels, threads, grid)
        b_min, gap = minimum_gap(family, b_values, pair)
    except (BranchTrackingLost, NoCrossingInRange) as e:
        PrimeItems.failures.append({"task": "crossings", "pair": [list(p) for p in pair], "error": str(e)})
        return {"gap_error": str(e)}
    lower_l = pair[1][1]
    g = coupling_constant(vs, replace(cfg, b_z=b_min), pair[0][0], pair[1][0])
    return {
        "gap_b_y_t": cfg.b_y,
        "gap_b_z_t": b_min,
        "gap_ghz": gap,
        "gap_predicted_ghz": 2.0 * math.sqrt(lower_l + 1) * abs(g),
    }


# ################################################################################
# rates
# ################################################################################
def run_rates(resolved: dict, out_dir: Path, threads: int) -> int:  # noqa: ARG001
    """Two-ripplon decay and the strong-coupling ratio of one pair."""
    material = build_material(resolved)
    grid = build_grid(resolved)
    cfg = build_field(resolved, material, grid)
    section = resolved["rates"]
    n, n_prime = section["pair"]
    l = section["l"]  # noqa: E741
    vs = solve_vertical(material, cfg.e_perp, max(resolved["grid"]["vertical_n_max"], n_prime), grid)
    if section["at_crossing"]:
        window = (resolved["crossings"]["b_z_start"], resolved["crossings"]["b_z_stop"])
        cfg = replace(cfg, b_z=find_crossing(vs, cfg, ((n, l + 1), (n_prime, l)), window))
    report = strong_coupling_report(vs, cfg, (n, n_prime), l, section["nu_0"], section["finite_temperature"])
    report.update({"b_z_t": cfg.b_z, "b_y_t": cfg.b_y, "e_perp_v_cm": cfg.e_perp_v_cm})
    logger.info(f"rates: g/h={report['coupling_ghz']:.3f} GHz, ratio={report['ratio']:.3e}")
    write_sidecar({**provenance(resolved, material), "rates": report}, out_dir, "rates.json")
    return EXIT_OK


# ################################################################################
# self-test
# ################################################################################
def run_self_test_task(resolved: dict, out_dir: Path, threads: int) -> int:  # noqa: ARG001
    """Numerical checks; exit 4 when any fails."""
    checks = run_self_test(build_grid(resolved))
    write_sidecar(
        {
            "checks": [
                {"name": c.name, "value": c.value, "tolerance": c.tolerance, "passed": c.passed} for c in checks
            ],
        },
        out_dir,
        "self_test.json",
    )
    failed = [c.name for c in checks if not c.passed]
    if failed:
        logger.error(f"self-test failed: {failed}")
        return EXIT_SELF_TEST
    return EXIT_OK


TASK_RUNNERS = {
    "spectrum-sweep": run_spectrum_sweep,
    "absorption-map": run_absorption_map,
    "shifts": run_shifts,
    "crossings": run_crossings,
    "rates": run_rates,
    "self-test": run_self_test_task,
}
