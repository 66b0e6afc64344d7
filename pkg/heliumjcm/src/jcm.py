"""Analytic Jaynes-Cummings picture of the tilted-field coupling."""

#! /usr/bin/env python3

#                                                                                      #
# jcm: dressed pairs, perturbative Lamb and light shifts, admixed states and the       #
#      interference of transition moments                                              #
#                                                                                      #
# All functions take a solved VerticalSpectrum and return lab units: energies as E/h   #
# in GHz, lengths in r_B (the quoted natural unit of the matrix elements).             #
#                                                                                      #
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from heliumjcm.src.config import ADMIXTURE_FLOOR, DETUNING_SHIFT_FRACTION, NEAR_RESONANCE_FACTOR
from heliumjcm.src.coupled import CoupledSpectrum, ProductBasis, State, compute_spectrum
from heliumjcm.src.error import BasisMismatch, NearResonance
from heliumjcm.src.materials import FieldConfiguration, scaled_fields
from heliumjcm.src.sysconst import DiamagneticMode
from heliumjcm.src.vertical import VerticalSpectrum, truncation_report


@dataclass(frozen=True)
class DressedPair:
    """
    Two-level (n, l+1) / (n', l) block of the coupled Hamiltonian.

    Energies are E/h in GHz with hbar*omega_c/2 dropped.  tan(mixing_angle) = sqrt(l+1)*g/E_delta,
    so the angle is pi/2 on resonance and tends to 0 (pi) when |n,l+1> lies far above (below).
    """

    pair: tuple[State, State]
    coupling: float  # g_nn'
    e_sigma: float
    e_delta: float
    mixing_angle: float
    energies: tuple[float, float]  # (E_plus, E_minus)

    @property
    def splitting(self) -> float:
        """E_plus - E_minus."""
        return self.energies[0] - self.energies[1]

    def amplitudes(self) -> dict[str, dict[State, float]]:
        """Product-state amplitudes of |+> and |->."""
        upper, lower = self.pair
        half = 0.5 * self.mixing_angle
        return {
            "plus": {upper: math.cos(half), lower: math.sin(half)},
            "minus": {upper: -math.sin(half), lower: math.cos(half)},
        }


def _check_levels(vs: VerticalSpectrum, *levels: int) -> None:
    if max(levels) > vs.n_max:
        msg = f"Level {max(levels)} requested but only {vs.n_max} vertical levels were solved."
        raise BasisMismatch(msg)


def coupling_constant(vs: VerticalSpectrum, cfg: FieldConfiguration, n: int, n_prime: int) -> float:
    """g_nn' = hbar*omega_y*z_nn'/(sqrt(2)*l_B), as E/h in GHz.  Sign follows z_nn'."""
    _check_levels(vs, n, n_prime)
    return vs.material.to_ghz(scaled_fields(vs.material, cfg).coupling * vs.z_element(n, n_prime))


def dressed_energy(vs: VerticalSpectrum, cfg: FieldConfiguration, state: State) -> float:
    """E_n + hbar*omega_c*l + (m*omega_y^2/2)*(z^2)_nn, scaled units."""
    n, l = state  # noqa: E741
    scaled = scaled_fields(vs.material, cfg)
    return float(vs.energies[n - 1] + scaled.cyclotron * l + scaled.diamagnetic * vs.z2_matrix[n - 1, n - 1])


def dressed_pair(
    vs: VerticalSpectrum,
    cfg: FieldConfiguration,
    pair: tuple[int, int],
    l: int,  # noqa: E741
) -> DressedPair:
    """
    Dress the |n,l+1> / |n',l> pair.

        :param vs: vertical levels
        :param cfg: fields
        :param pair: (n, n')
        :param l: Landau index of the |n', l> member
        :return: DressedPair in GHz
    """
    n, n_prime = pair
    _check_levels(vs, n, n_prime)
    upper = dressed_energy(vs, cfg, (n, l + 1))
    lower = dressed_energy(vs, cfg, (n_prime, l))
    e_sigma = 0.5 * (upper + lower)
    e_delta = 0.5 * (upper - lower)
    g = scaled_fields(vs.material, cfg).coupling * vs.z_element(n, n_prime)
    rabi = math.sqrt(l + 1) * g
    root = math.hypot(e_delta, rabi)
    to_ghz = vs.material.to_ghz
    return DressedPair(
        pair=((n, l + 1), (n_prime, l)),
        coupling=to_ghz(g),
        e_sigma=to_ghz(e_sigma),
        e_delta=to_ghz(e_delta),
        mixing_angle=math.atan2(rabi, e_delta),
        energies=(to_ghz(e_sigma + root), to_ghz(e_sigma - root)),
    )


def _guard(vs: VerticalSpectrum, cfg: FieldConfiguration, n: int, l: int, guard: float) -> None:  # noqa: E741
    if guard == 0.0:
        return
    scaled = scaled_fields(vs.material, cfg)
    z2 = np.diag(vs.z2_matrix)
    for index in range(vs.n_max):
        n_prime = index + 1
        if n_prime == n:
            continue
        gap = vs.energies[n - 1] - vs.energies[index]
        g = abs(scaled.coupling * vs.z_matrix[n - 1, index])
        # the second-order denominators leave out this diamagnetic shift of the detuning
        drift = abs(scaled.diamagnetic * (z2[n - 1] - z2[index]))
        # |n',l+1> enters with sqrt(l+1), |n',l-1> with sqrt(l)
        channels = ((gap - scaled.cyclotron, g * math.sqrt(l + 1)), (gap + scaled.cyclotron, g * math.sqrt(l)))
        for denominator, rabi in channels:
            if rabi == 0.0:
                continue
            detuning = vs.material.to_ghz(denominator)
            if abs(denominator) <= guard * rabi:
                msg = (
                    f"|{n},{l}> is within {guard:g} couplings of |{n_prime},{l}+-1>"
                    f" (detuning {detuning:.3f} GHz, g {vs.material.to_ghz(rabi):.3f} GHz)."
                )
                raise NearResonance(msg)
            if rabi > ADMIXTURE_FLOOR * abs(denominator) and drift > DETUNING_SHIFT_FRACTION * abs(denominator):
                msg = (
                    f"The diamagnetic shift {vs.material.to_ghz(drift):.3f} GHz moves the |{n},{l}>/|{n_prime},{l}+-1>"
                    f" detuning of {detuning:.3f} GHz by more than {DETUNING_SHIFT_FRACTION:.0%}."
                )
                raise NearResonance(msg)


def perturbative_shift(
    vs: VerticalSpectrum,
    cfg: FieldConfiguration,
    n: int,
    l: int,  # noqa: E741
    guard: float = NEAR_RESONANCE_FACTOR,
) -> float:
    """
    Second-order shift of |n,l> in the Bethe-cancelled form, as E/h in GHz.

    dE = (m*omega_y^2/2) * sum_{n' != n} |z_nn'|^2 * (1 + w*l/(E_nn' + w) + w*(l+1)/(E_nn' - w))
    with w = hbar*omega_c and E_nn' = E_n - E_n'.  The sum runs over the solved levels.

    Raises:
        NearResonance: a denominator is within `guard` couplings of zero, or a channel admixed by more
            than ADMIXTURE_FLOOR has its detuning moved by more than DETUNING_SHIFT_FRACTION by the
            diamagnetic term.  guard=0 turns both checks off.
    """
    _check_levels(vs, n)
    if cfg.b_y == 0.0:
        return 0.0
    _guard(vs, cfg, n, l, guard)
    scaled = scaled_fields(vs.material, cfg)
    w = scaled.cyclotron
    others = np.arange(vs.n_max) != n - 1
    gaps = vs.energies[n - 1] - vs.energies[others]
    weights = vs.z_matrix[n - 1, others] ** 2
    shift = scaled.diamagnetic * np.sum(weights * (1.0 + w * l / (gaps + w) + w * (l + 1) / (gaps - w)))
    return vs.material.to_ghz(float(shift))


def raw_shift(vs: VerticalSpectrum, cfg: FieldConfiguration, n: int, l: int) -> float:  # noqa: E741
    """
    Second-order shift before cancellation: diamagnetic (z^2)_nn term plus the paramagnetic sum over
    every solved level including n itself.  E/h in GHz.
    """
    _check_levels(vs, n)
    if cfg.b_y == 0.0:
        return 0.0
    scaled = scaled_fields(vs.material, cfg)
    w = scaled.cyclotron
    gaps = vs.energies[n - 1] - vs.energies
    weights = vs.z_matrix[n - 1] ** 2
    paramagnetic = scaled.coupling**2 * np.sum(weights * ((l + 1) / (gaps - w) + l / (gaps + w)))
    shift = scaled.diamagnetic * vs.z2_matrix[n - 1, n - 1] + paramagnetic
    return vs.material.to_ghz(float(shift))


@dataclass(frozen=True)
class BetheCheck:
    """Raw and cancelled shifts of one level and their relative disagreement."""

    raw: float
    reduced: float
    residual: float
    truncation: float


def bethe_cancellation_check(vs: VerticalSpectrum, cfg: FieldConfiguration, n: int, l: int) -> BetheCheck:  # noqa: E741
    """
    Compare raw_shift with perturbative_shift.

    The residual is |raw - reduced| relative to the diamagnetic term.  The two forms are computed
    separately and agree only up to the z^2 sum-rule truncation of level n, so the residual equals
    that truncation residual when both are right.
    """
    raw = raw_shift(vs, cfg, n, l)
    reduced = perturbative_shift(vs, cfg, n, l, guard=0.0)
    diamagnetic = vs.material.to_ghz(scaled_fields(vs.material, cfg).diamagnetic * vs.z2_matrix[n - 1, n - 1])
    residual = abs(raw - reduced) / abs(diamagnetic) if diamagnetic else 0.0
    return BetheCheck(raw=raw, reduced=reduced, residual=residual, truncation=float(truncation_report(vs)[n - 1]))

def lamb_light_shifts(
    vs: VerticalSpectrum,
    cfg: FieldConfiguration,
    l_values: list[int] | range,
    guard: float = NEAR_RESONANCE_FACTOR,
) -> dict[int, float]:
    """
    Shift of the |1,l> -> |2,l> line for each l, E/h in GHz.

    l = 0 is the Lamb shift; l >= 1 are the light shifts.

    Raises:
        NearResonance: as perturbative_shift.
    """
    return {
        l: perturbative_shift(vs, cfg, 2, l, guard) - perturbative_shift(vs, cfg, 1, l, guard)
        for l in l_values  # noqa: E741
    }


def lamb_shift_closed_form(vs: VerticalSpectrum, cfg: FieldConfiguration) -> float:
    """
    Lamb shift written level by level:
    (m*omega_y^2/2h) * [sum_{n != 2} |z_2n|^2 E_n2/(E_n2 + w) - sum_{n != 1} |z_1n|^2 E_n1/(E_n1 + w)].
    """
    _check_levels(vs, 2)
    scaled = scaled_fields(vs.material, cfg)
    w = scaled.cyclotron

    def level_sum(m: int) -> float:
        others = np.arange(vs.n_max) != m - 1
        gaps = vs.energies[others] - vs.energies[m - 1]
        return float(np.sum(vs.z_matrix[m - 1, others] ** 2 * gaps / (gaps + w)))

    return vs.material.to_ghz(scaled.diamagnetic * (level_sum(2) - level_sum(1)))


def shift_from_spectrum(
    vs: VerticalSpectrum,
    cfg: FieldConfiguration,
    basis: ProductBasis,
    l: int,  # noqa: E741
    mode: DiamagneticMode = DiamagneticMode.FULL,
) -> float:
    """Shift of the |1,l> -> |2,l> line from full diagonalization, E/h in GHz."""
    spectrum = compute_spectrum(vs, cfg, basis, mode)
    energies = spectrum.energies_ghz()
    line = energies[spectrum.state_index(2, l)] - energies[spectrum.state_index(1, l)]
    return float(line - vs.transition_ghz(1, 2))


def admixed_state(
    vs: VerticalSpectrum,
    cfg: FieldConfiguration,
    n: int,
    l: int,  # noqa: E741
    guard: float = NEAR_RESONANCE_FACTOR,
) -> dict[State, float]:
    """
    First-order dressed |n,l>: amplitudes on |n',l+1> and |n',l-1> for every solved n', plus 1 on |n,l>.

    Raises:
        NearResonance: as perturbative_shift.
    """
    _check_levels(vs, n)
    amplitudes: dict[State, float] = {(n, l): 1.0}
    if cfg.b_y == 0.0:
        return amplitudes
    _guard(vs, cfg, n, l, guard)
    scaled = scaled_fields(vs.material, cfg)
    w = scaled.cyclotron
    for index in range(vs.n_max):
        gap = vs.energies[n - 1] - vs.energies[index]
        g = scaled.coupling * vs.z_matrix[n - 1, index]
        amplitudes[(index + 1, l + 1)] = float(g * math.sqrt(l + 1) / (gap - w))
        if l >= 1:
            amplitudes[(index + 1, l - 1)] = float(g * math.sqrt(l) / (gap + w))
    return amplitudes


def admixed_vector(amplitudes: dict[State, float], basis: ProductBasis) -> np.ndarray:
    """Normalized basis vector of an admixed state; components outside the basis are dropped."""
    vector = np.zeros(basis.size)
    for (n, l), value in amplitudes.items():  # noqa: E741
        if n <= basis.n_max and l <= basis.l_max:
            vector[basis.index(n, l)] = value
    return vector / np.linalg.norm(vector)


@dataclass(frozen=True)
class InterferenceMoments:
    """
    Transition moments from |1,0> into the |2,1>/|3,0> doublet, in r_B.

    z_plus/z_minus are the first-order forms a +/- sign(z_23)*z_31 with
    a = z_22*z_21*(B_y/B_z)/(sqrt(2)*l_B); exact_plus/exact_minus are <+-|z|1,0> from full
    diagonalization, which carry the 1/sqrt(2) of the doublet.
    """

    admixture: float
    z_plus: float
    z_minus: float
    exact_plus: float | None = None
    exact_minus: float | None = None


def _admixture(vs: VerticalSpectrum, cfg: FieldConfiguration) -> float:
    scaled = scaled_fields(vs.material, cfg)
    if cfg.b_y == 0.0:
        return 0.0
    return vs.z_element(2, 2) * vs.z_element(2, 1) * (cfg.b_y / cfg.b_z) / (math.sqrt(2.0) * scaled.magnetic_length)


def interference_moments(
    vs: VerticalSpectrum,
    cfg: FieldConfiguration,
    basis: ProductBasis | None = None,
    mode: DiamagneticMode = DiamagneticMode.FULL,
) -> InterferenceMoments:
    """
    First-order and, when a basis is given, exact moments into the (2,1)/(3,0) doublet.
    Needs at least three vertical levels.
    """
    _check_levels(vs, 3)
    a = _admixture(vs, cfg)
    sigma = math.copysign(1.0, vs.z_element(2, 3))
    z31 = vs.z_element(3, 1)
    moments = InterferenceMoments(admixture=a, z_plus=a + sigma * z31, z_minus=a - sigma * z31)
    if basis is None:
        return moments
    spectrum = compute_spectrum(vs, cfg, basis, mode)
    return replace(moments, **dict(zip(("exact_plus", "exact_minus"), doublet_moments(spectrum), strict=True)))


def doublet_moments(spectrum: CoupledSpectrum) -> tuple[float, float]:
    """
    (<+|z|1,0>, <-|z|1,0>) for the |2,1>/|3,0> doublet.

    Each branch is the eigenstate with the largest overlap with (|2,1> +- sign(g)|3,0>)/sqrt(2), so the
    labels follow the doublet when a neighbouring level moves between its branches.
    """
    block = spectrum.eigenvectors[[spectrum.basis.index(2, 1), spectrum.basis.index(3, 0)]]
    sign = math.copysign(1.0, spectrum.z_block[1, 2] * spectrum.config.b_y)
    upper = int(np.argmax(np.abs(block[0] + sign * block[1])))
    lower = int(np.argmax(np.abs(block[0] - sign * block[1])))
    if upper == lower:
        lower, upper = spectrum.pair_indices((2, 1), (3, 0))
    moments = spectrum.moments_from(spectrum.state_index(1, 0))
    return float(moments[upper]), float(moments[lower])


def interference_scan(
    vs: VerticalSpectrum,
    cfg: FieldConfiguration,
    basis: ProductBasis,
    b_y_values: np.ndarray,
    mode: DiamagneticMode = DiamagneticMode.FULL,
) -> np.ndarray:
    """|<+|z|1,0>|^2 and |<-|z|1,0>|^2 along B_y, shape (len, 2)."""
    rows = []
    for b_y in b_y_values:
        upper, lower = doublet_moments(compute_spectrum(vs, replace(cfg, b_y=float(b_y)), basis, mode))
        rows.append((upper**2, lower**2))
    return np.array(rows)


def cancellation_field(z22: float, z31_over_z21: float, b_z: float, magnetic_length: float) -> float:
    """
    B_y (T) at which the admixture cancels z_31 on the upper branch.

        :param z22: <2|z|2> in r_B
        :param z31_over_z21: |z_31/z_21|
        :param b_z: quantizing field in T
        :param magnetic_length: l_B/r_B at b_z
        :return: sqrt(2)*l_B*B_z*|z_31/z_21|/z_22
    """
    return math.sqrt(2.0) * magnetic_length * b_z * abs(z31_over_z21) / z22
