"""Error handling module for HeliumJCM."""

#! /usr/bin/env python3
import sys

#                                                                                      #
# Error: Process Errors                                                                #
#                                                                                      #
from heliumjcm.src.sysconst import EXIT_CONFIG, EXIT_NUMERICAL, EXIT_WARNING, Colors, logger


class HeliumJCMError(Exception):
    """Base class for all HeliumJCM failures.  Carries the CLI exit code."""

    exit_code = EXIT_NUMERICAL


class ConfigError(HeliumJCMError):
    """The run configuration is unreadable, incomplete or out of range."""

    exit_code = EXIT_CONFIG


class DegenerateField(HeliumJCMError):
    """A quantity needs B_z > 0 (magnetic length, cyclotron energy) but B_z == 0."""


class GridTooSmall(HeliumJCMError):
    """The highest requested vertical state does not fit in the solver box."""


class ConvergenceFailure(HeliumJCMError):
    """An eigensolver or root finder did not converge."""


class BasisMismatch(HeliumJCMError):
    """The product basis asks for more vertical states than were solved for."""


class NoCrossingInRange(HeliumJCMError):
    """The uncoupled levels do not cross inside the requested B_z range."""


class BranchTrackingLost(HeliumJCMError):
    """Successive eigenvectors of a tracked branch stopped overlapping."""


class NearResonance(HeliumJCMError):
    """Perturbation theory is invalid: an energy denominator is within the guard of a coupling."""


class NotDownward(HeliumJCMError):
    """A decay rate was requested for a transition that releases no energy."""


def error_handler(error_message: str, exit_code: int) -> None:
    """
    Error handler: print and log the error.  Exit with error code if provided
        :param error_message: text of error to print and log
        :param exit_code: error code to exit with
    """
    # Add our heading to more easily identify the problem
    if exit_code in {0, 99}:
        final_error_message = f"{Colors.Green}{error_message}{Colors.White}"
    # Warning?
    elif exit_code == EXIT_WARNING:
        final_error_message = f"{Colors.Yellow}HeliumJCM warning: {error_message}{Colors.White}"
    else:
        final_error_message = f"{Colors.Red}HeliumJCM error: {error_message}{Colors.White}"

    # Process an error?
    if exit_code > 0 and exit_code < EXIT_WARNING:
        logger.error(error_message)
        print(final_error_message, file=sys.stderr)
        sys.exit(exit_code)

    # Warnings are reported and the run carries on.
    elif exit_code == EXIT_WARNING:
        logger.warning(error_message)
        print(final_error_message, file=sys.stderr)

    # return code 0
    else:
        logger.info(error_message)
        print(final_error_message)
