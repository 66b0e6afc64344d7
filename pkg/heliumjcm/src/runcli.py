"""Process command line interface arguments for HeliumJCM"""

#! /usr/bin/env python3

#                                                                                      #
# runcli: process command line interface arguments for HeliumJCM                       #
#                                                                                      #
from __future__ import annotations

import os

import psutil

from heliumjcm.src.error import error_handler
from heliumjcm.src.initparg import initialize_runtime_arguments
from heliumjcm.src.parsearg import runtime_parser
from heliumjcm.src.primitem import PrimeItems
from heliumjcm.src.sysconst import DEFAULT_OUTPUT_DIR, EXIT_CONFIG, OUTPUT_DIR_ENV, logger


def default_threads() -> int:
    """One worker per physical core."""
    return psutil.cpu_count(logical=False) or 1


def resolve_threads(requested: int) -> int:
    """0 means one per physical core."""
    return requested if requested > 0 else default_threads()


def resolve_output_dir(cli_out: str, config_out: str) -> str:
    """
    Output directory precedence: command line, configuration, environment, default.
        :param cli_out: --out value
        :param config_out: [run] out value
        :return: directory name
    """
    return cli_out or config_out or os.environ.get(OUTPUT_DIR_ENV, "") or DEFAULT_OUTPUT_DIR


# ################################################################################
# Process the command line arguments into PrimeItems.program_arguments
# ################################################################################
def process_cli(argv: list | None = None) -> None:
    """
    Parse the command line and store the arguments.
        :param argv: arguments without the program name; sys.argv when None
    """
    args = runtime_parser(argv)
    program_arguments = initialize_runtime_arguments()
    program_arguments.update(
        {
            "config": args.config,
            "debug": args.debug,
            "out": args.out,
            "task": args.task,
            "threads": args.threads,
        },
    )
    if not program_arguments["config"] and program_arguments["task"] not in ("self-test",):
        error_handler(f"Task '{program_arguments['task']}' needs --config.", EXIT_CONFIG)
    PrimeItems.program_arguments = program_arguments
    logger.debug(f"program arguments: {program_arguments}")
