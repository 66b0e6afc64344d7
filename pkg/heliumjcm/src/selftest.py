"""Built-in numerical checks against exactly solvable limits"""

#! /usr/bin/env python3

#                                                                                      #
# selftest: hydrogenic limit, orthonormality, sum rule and B_y = 0 fan checks          #
#                                                                                      #
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from heliumjcm.src.config import ORTHONORMAL_TOLERANCE
from heliumjcm.src.coupled import ProductBasis, assemble_hamiltonian, diagonalize
from heliumjcm.src.materials import FieldConfiguration, material_for
from heliumjcm.src.sysconst import Isotope, logger
from heliumjcm.src.vertical import GridSpec, orthonormality_error, solve_vertical, truncation_report


@dataclass(frozen=True)
class SelfTestCheck:
    """Outcome of one check."""

    name: str
    value: float
    tolerance: float

    @property
    def passed(self) -> bool:
        """value <= tolerance."""
        return bool(self.value <= self.tolerance)


def run_self_test(grid: GridSpec | None = None) -> list[SelfTestCheck]:
    """
    Run every check on He3.

    Returns:
        list[SelfTestCheck]: one entry per check, passed or not.
    """
    material = material_for(Isotope.HE3)
    levels = np.arange(1, 5)

    zero_field = solve_vertical(material, 0.0, 6, grid)
    energy_error = np.max(np.abs(zero_field.energies[:4] + 1.0 / levels**2) * levels**2)
    moment_error = np.max(np.abs(np.diag(zero_field.z_matrix)[:4] - 1.5 * levels**2) / (1.5 * levels**2))
    wall = 4.0 / levels[:3] ** 3
    wall_error = np.max(np.abs(zero_field.dvdz[:3] - wall) / wall)

    in_field = solve_vertical(material, 1500.0, 10, grid)
    residual_6 = truncation_report(solve_vertical(material, 1500.0, 6, grid))[0]
    residual_10 = truncation_report(in_field)[0]

    basis = ProductBasis(n_max=4, l_max=6)
    cfg = FieldConfiguration.lab(15.0, 1.0)
    hamiltonian = assemble_hamiltonian(in_field, cfg, basis)
    spectrum = diagonalize(hamiltonian, basis, in_field, cfg)
    fan = np.sort(np.diag(hamiltonian))
    fan_error = np.max(np.abs(spectrum.eigenvalues - fan))

    tilted = FieldConfiguration.lab(15.0, 1.0, 0.3)
    tilted_h = assemble_hamiltonian(in_field, tilted, basis)
    trace_error = abs(np.trace(tilted_h) - np.sum(diagonalize(tilted_h, basis, in_field, tilted).eigenvalues))

    checks = [
        SelfTestCheck("hydrogenic energies, relative", float(energy_error), 1e-3),
        SelfTestCheck("hydrogenic <z>_nn, relative", float(moment_error), 1e-3),
        SelfTestCheck("hydrogenic wall slope psi'(0)^2, relative", float(wall_error), 1e-2),
        SelfTestCheck("orthonormality", orthonormality_error(in_field), ORTHONORMAL_TOLERANCE),
        SelfTestCheck("z^2 sum rule improves with n_max", float(residual_10 - residual_6), 0.0),
        SelfTestCheck("B_y = 0 spectrum is the uncoupled fan", float(fan_error), 1e-10),
        SelfTestCheck("trace preserved by diagonalization", float(trace_error), 1e-9),
    ]
    for check in checks:
        logger.info(f"self-test {check.name}: {check.value:.3e} <= {check.tolerance:.1e} {check.passed}")
    return checks
