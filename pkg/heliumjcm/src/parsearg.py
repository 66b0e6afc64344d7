"""HeliumJCM runtime argument parser"""

#! /usr/bin/env python3

#                                                                                      #
# parsearg: HeliumJCM runtime argument parser                                          #
#                                                                                      #
# MIT License   Refer to https://opensource.org/license/mit                            #

import argparse
import textwrap
from argparse import ArgumentParser
from pathlib import Path

from heliumjcm.src.error import error_handler
from heliumjcm.src.sysconst import EXIT_CONFIG, MY_VERSION, PROGRAM_NAME, TASKS


# ################################################################################
# Thread count validation
# ################################################################################
def threads_validation(x: str) -> int:
    """Validate the worker thread count
    Args:
        x: thread count as typed
    Returns:
        int: the count, 0 meaning one per physical core"""
    try:
        threads = int(x)
    except ValueError:
        threads = -1
    if threads < 0:
        msg = f"Invalid thread count.  You specified {x}."
        error_handler(msg, EXIT_CONFIG)
    return threads


# ################################################################################
# Configuration file validation
# ################################################################################
def file_validation(file: str) -> str:
    """Validate that the configuration file exists
    Args:
        file: path as typed
    Returns:
        str: the path"""
    if not Path(file).is_file():
        msg = f"Configuration file {file} does not exist."
        error_handler(msg, EXIT_CONFIG)
    return file


def runtime_parser(argv: list | None = None) -> argparse.Namespace:
    """
    Get the program arguments
    Args:
        argv (list | None): arguments without the program name; sys.argv when None
    Returns:
        argparse.Namespace: the parsed arguments
    Processing Logic:
        - Setup argument parser
        - Add arguments for runtime settings
        - Parse arguments
    """
    parser = ArgumentParser(
        prog=PROGRAM_NAME,
        description=(
            "Simulate the spectrum, absorption maps and decay of electrons on liquid helium"
            " in a tilted magnetic field"
        ),
        epilog=textwrap.dedent(
            """\
                                Exit codes...
                                    exit 0- success
                                    exit 2- configuration error
                                    exit 3- numerical failure (see failed_points.json)
                                    exit 4- self-test failure
                                    exit 100- completed with warnings

                                Artifacts go to --out, else [run] out, else $HELIUMJCM_OUT, else ./heliumjcm_out
                                .
                                """,
        ),
        formatter_class=argparse.RawTextHelpFormatter,
    )
    parser.add_argument(
        "task",
        help="Task to run, or 'validate' to check a configuration without running it.",
        choices=[*TASKS, "validate"],
    )
    parser.add_argument(
        "--config",
        help="TOML run configuration.",
        type=file_validation,
        default="",
    )
    parser.add_argument("--out", help="Output directory.", default="")
    parser.add_argument(
        "--threads",
        help="Worker threads (0 = one per physical core).",
        type=threads_validation,
        default=0,
    )
    parser.add_argument("--debug", help="Write heliumjcm.log.", action="store_true", default=False)
    parser.add_argument("--version", action="version", version=MY_VERSION)
    return parser.parse_args(argv)
