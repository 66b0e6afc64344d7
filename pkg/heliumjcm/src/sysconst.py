"""System constants for HeliumJCM"""

#! /usr/bin/env python3

#                                                                                      #
# sysconst: System constants                                                           #
#                                                                                      #
from __future__ import annotations

import logging
from datetime import datetime
from enum import Enum

from scipy import constants

# Global constants
VERSION = "1.0"
MY_VERSION = f"HeliumJCM version {VERSION}"
MY_LICENSE = "MIT License"
PROGRAM_NAME = "heliumjcm"

LOG_FILE = "heliumjcm.log"
CRASH_FILE = "heliumjcm_crash.log"
RESOLVED_CONFIG_FILE = "resolved_config.toml"
FAILURE_MANIFEST_FILE = "failed_points.json"
OUTPUT_DIR_ENV = "HELIUMJCM_OUT"
DEFAULT_OUTPUT_DIR = "heliumjcm_out"

# CODATA values, SI units
ELECTRON_MASS = constants.m_e
HBAR = constants.hbar
PLANCK = constants.h
ELEMENTARY_CHARGE = constants.e
EPSILON_0 = constants.epsilon_0
BOLTZMANN = constants.k
ELECTRON_VOLT = constants.electron_volt
MILLI_EV = constants.milli * constants.electron_volt
GIGAHERTZ = constants.giga
NANOMETER = constants.nano
V_PER_CM = 1.0 / constants.centi  # V/m in one V/cm
PER_CM = 1.0 / constants.centi  # 1/m in one 1/cm

# Exit codes
EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_SELF_TEST = 4
EXIT_WARNING = 100

# Tasks the batch front-end knows how to run.
TASKS = ("spectrum-sweep", "absorption-map", "shifts", "crossings", "rates", "self-test")
SWEEP_AXES = ("b_z", "b_y", "e_perp")

logger = logging.getLogger("HeliumJCM")

DEBUG_PROGRAM = False
NOW_TIME = datetime.now()  # noqa: DTZ005


class Isotope(Enum):
    """Helium isotopes supported by the material table."""

    HE3 = "He3"
    HE4 = "He4"


class DiamagneticMode(Enum):
    """How the m_e*omega_y^2*z^2/2 term enters the coupled Hamiltonian."""

    FULL = "full"  # (z^2)_nn' from quadrature on the vertical grid
    DIAGONAL = "diagonal"  # (z^2)_nn only
    PROJECTED = "projected"  # (Z @ Z)_nn' within the truncated basis


class Colors:
    """Define ANSI color codes for terminal output."""

    White = "\033[0m"
    Yellow = "\033[33m"
    Red = "\033[31m"
    Green = "\033[32m"
    Blue = "\033[34m"
    BOLD = "\033[1m"
