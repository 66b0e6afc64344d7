"""User Modifiable Configuration File"""

#! /usr/bin/env python3

#                                                                                      #
# config: Configuration file for HeliumJCM                                             #
#                                                                                      #
# MIT License   Refer to https://opensource.org/license/mit                            #

#  START User-modifiable global constants

# Vertical grid: box length in effective Bohr radii and number of interior points.
# Energies are Richardson-extrapolated from this grid and the half-density grid.
GRID_Z_MAX = 150.0
GRID_POINTS = 4000
# Fraction of the box (outermost part) in which the highest state must hold < GRID_TAIL_LIMIT of its norm.
GRID_TAIL_FRACTION = 0.1
GRID_TAIL_LIMIT = 1.0e-6

# Number of Rydberg levels solved by default and the |n,l> basis truncation.
VERTICAL_N_MAX = 6
BASIS_N_MAX = 6
BASIS_L_MAX = 50

# Quoted effective Rydberg energy (meV) and Bohr radius (nm) per isotope.  Lambda is calibrated
# to the Rydberg energy; the Bohr radius is then derived.
QUOTED_RYDBERG_MEV = {"He3": 0.36, "He4": 0.63}
QUOTED_BOHR_RADIUS_NM = {"He3": 10.3, "He4": 7.8}

# Literature dielectric constants, only used for the Lambda round-trip check.
LITERATURE_EPSILON = {"He3": 1.0426, "He4": 1.0572}
LAMBDA_ROUND_TRIP_TOLERANCE = 0.01

# Liquid and barrier constants (SI) used by the ripplon rates.
SURFACE_TENSION = 1.55e-4  # N/m, He3 near 0.3 K
MASS_DENSITY = 82.0  # kg/m^3, He3 near 0.3 K
BARRIER_HEIGHT_EV = 1.0
ONE_RIPPLON_RATE = 1.0e6  # 1/s, zero-field elastic rate nu_0

# Numerical tolerances
STARK_STEP_V_CM = 0.1
CROSSING_TOLERANCE_T = 1.0e-4
BRANCH_OVERLAP_FLOOR = 0.5
NEAR_RESONANCE_FACTOR = 3.0
DETUNING_SHIFT_FRACTION = 0.05
ADMIXTURE_FLOOR = 0.1
ORTHONORMAL_TOLERANCE = 1.0e-8

# Spectroscopy
BASE_WIDTH_GHZ = 0.2
# <E_f> = C_f * n_s^(3/4) with E_f in V/cm and n_s in cm^-2.  Calibrated so the width at
# B_z = 0.584 T, n_s = 5e6 cm^-2 roughly doubles between B_y = 0 and 0.6 T.
FLUCTUATING_FIELD_COEFFICIENT = 4.3e-6
# Stark slope used to turn field broadening into a frequency width when none is supplied.
DEFAULT_STARK_SLOPE = 0.74  # GHz per V/cm
THERMAL_REGIME_BZ = 0.2  # T, below this the thermal rms-field smearing is applied
THERMAL_L_CUT = 40
PROFILE_SIGMAS = 8.0
MAP_E_PERP_POINTS = 301

# Sweeps
SWEEP_POINTS = 61
GAP_SEARCH_HALF_WIDTH_T = 0.15
