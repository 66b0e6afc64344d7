"""Intialize command line interface/runtime arguments and run-configuration defaults for HeliumJCM"""

#! /usr/bin/env python3

#                                                                                      #
# initparg: intialize runtime arguments and run-configuration defaults for HeliumJCM   #
#                                                                                      #
from heliumjcm.src.config import (
    BARRIER_HEIGHT_EV,
    BASE_WIDTH_GHZ,
    BASIS_L_MAX,
    BASIS_N_MAX,
    FLUCTUATING_FIELD_COEFFICIENT,
    GRID_POINTS,
    GRID_Z_MAX,
    MAP_E_PERP_POINTS,
    MASS_DENSITY,
    ONE_RIPPLON_RATE,
    SURFACE_TENSION,
    SWEEP_POINTS,
    THERMAL_L_CUT,
    VERTICAL_N_MAX,
)


#######################################################################################
# Initialize Program runtime arguments to default values
# Command line parameters
def initialize_runtime_arguments() -> dict:
    """
    Initialize the program's runtime arguments...as a dictionary of options.
    The key must be the same name as the key in PrimeItems.program_arguments.
        :return: runtime arguments in dictionary
    """

    return {
        "config": "",  # Path of the TOML run configuration
        "debug": False,  # Run in debug mode (create log file)
        "out": "",  # Output directory, overrides the config and HELIUMJCM_OUT
        "task": "",  # Task to run
        "threads": 0,  # Worker threads, 0 = physical cores
    }


#######################################################################################
# Run-configuration defaults, one dictionary per TOML section.
# Field values that a task cannot guess (B_z, B_y, E_perp) have no default; see getputer.
def initialize_run_config() -> dict:
    """
    Defaults for every section and key of a run configuration.
    A key absent here is unknown and rejected when read from a file.
        :return: nested dictionary section -> key -> default
    """
    return {
        "run": {
            "task": "",  # Task name, see sysconst.TASKS
            "out": "",  # Output directory
            "threads": 0,  # Worker threads, 0 = physical cores
        },
        "material": {
            "isotope": "He3",  # He3 or He4
            "barrier_height_ev": BARRIER_HEIGHT_EV,  # Surface barrier V0
            "surface_tension": SURFACE_TENSION,  # N/m
            "mass_density": MASS_DENSITY,  # kg/m^3
            "rydberg_mev": 0.0,  # 0 = quoted value of the isotope
        },
        "field": {
            "temperature": 0.33,  # K
            "resonance_ghz": 0.0,  # >0: place E_perp on this vertical resonance
            "resonance_pair": [1, 2],  # Vertical levels of the resonance
        },
        "grid": {
            "z_max": GRID_Z_MAX,  # Box length in r_B
            "n_points": GRID_POINTS,  # Interior grid points
            "vertical_n_max": VERTICAL_N_MAX,  # Rydberg levels to solve
        },
        "basis": {
            "n_max": BASIS_N_MAX,  # Vertical levels in the product basis
            "l_max": BASIS_L_MAX,  # Highest Landau index
            "diamagnetic": "full",  # full, diagonal or projected
        },
        "sweep": {
            "axis": "b_z",  # b_z, b_y or e_perp
            "start": 0.0,  # T, or V/cm for e_perp
            "stop": 3.0,
            "points": SWEEP_POINTS,
            "max_levels": 40,  # Eigenvalues written per sweep point
        },
        "spectroscopy": {
            "mw_frequency_ghz": 90.0,  # Microwave frequency
            "e_perp_start": 10.0,  # V/cm
            "e_perp_stop": 40.0,  # V/cm
            "e_perp_points": MAP_E_PERP_POINTS,
            "base_width_ghz": BASE_WIDTH_GHZ,
            "density_cm2": 0.0,  # Electron density n_s
            "field_coefficient": FLUCTUATING_FIELD_COEFFICIENT,
            "l_cut": THERMAL_L_CUT,
            "high_fidelity": False,  # Re-solve at every E_perp
        },
        "shifts": {
            "b_y_values": [0.05, 0.1, 0.15, 0.2, 0.25, 0.3],  # T
            "l_values": [0, 1],  # Landau indices of the shifted |1,l> -> |2,l> lines
            "compare_full": True,  # Also diagonalize
        },
        "crossings": {
            "pairs": [[1, 1, 2, 0], [2, 1, 3, 0]],  # n, l+1, n', l
            "b_z_start": 0.05,  # T
            "b_z_stop": 5.0,  # T
            "gap_b_y": 0.0,  # >0: also locate the minimum gap at this B_y
        },
        "rates": {
            "pair": [1, 2],  # n, n'
            "l": 0,
            "nu_0": ONE_RIPPLON_RATE,  # 1/s
            "finite_temperature": False,
            "at_crossing": True,  # Evaluate at the |n,l+1>/|n',l> crossing instead of field.b_z
        },
    }
