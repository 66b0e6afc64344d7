"""Run a HeliumJCM task from the command line"""

#! /usr/bin/env python3

#                                                                                      #
# jcmrun: HeliumJCM driver: parse, configure, run the task and set the exit code       #
#                                                                                      #
from __future__ import annotations

import sys
from pathlib import Path

from heliumjcm.src.artifact import prepare_output_dir, write_failure_manifest
from heliumjcm.src.debug import settings_listing
from heliumjcm.src.error import HeliumJCMError, error_handler
from heliumjcm.src.getputer import resolve_run_config, save_resolved_config, validate_run_config
from heliumjcm.src.initparg import initialize_run_config
from heliumjcm.src.primitem import PrimeItems, PrimeItemsReset
from heliumjcm.src.proginit import log_startup_values, setup_logging
from heliumjcm.src.runcli import process_cli, resolve_output_dir, resolve_threads
from heliumjcm.src.runtask import TASK_RUNNERS
from heliumjcm.src.sysconst import CRASH_FILE, EXIT_NUMERICAL, EXIT_OK, EXIT_WARNING, logger

crash_debug = False


# Handle program runtime errors.  We only get here if there is a runtime error.
def on_crash(exctype: type, value: BaseException, traceback: object) -> None:
    """
    Handle runtime errors
    Args:
        exctype: Exception type
        value: Exception value
        traceback: Traceback object
    Returns:
        None
    Processing Logic:
        - Display crash report if in debug mode using default excepthook
        - Else print a short message to stderr and write the report to the crash file
    """
    if crash_debug:
        sys.__excepthook__(exctype, value, traceback)
        print(f"HeliumJCM encountered a runtime error!  Error can be found in {CRASH_FILE}")
    else:
        print("\nHeliumJCM encountered a runtime error!", file=sys.stderr)
        print(f"The error log can be found in {CRASH_FILE}.", file=sys.stderr)
    with open(CRASH_FILE, "w") as log:
        sys.stderr = log
        sys.__excepthook__(exctype, value, traceback)
        sys.stderr = sys.__stderr__


def load_configuration() -> dict:
    """Resolved configuration for the parsed arguments.  self-test runs without a file."""
    arguments = PrimeItems.program_arguments
    overrides = {"task": arguments["task"], "out": arguments["out"], "threads": arguments["threads"]}
    if arguments["config"]:
        resolved, warnings = resolve_run_config(arguments["config"], overrides)
    else:
        resolved = initialize_run_config()
        resolved["run"].update({key: value for key, value in overrides.items() if value})
        warnings = validate_run_config(resolved)
    PrimeItems.warnings.extend(warnings)
    return resolved


def validate_only() -> int:
    """Check the configuration given with `validate` and list the resolved settings."""
    arguments = PrimeItems.program_arguments
    resolved, warnings = resolve_run_config(arguments["config"])
    for line in settings_listing(resolved):
        print(line)
    for warning in warnings:
        error_handler(warning, EXIT_WARNING)
    return EXIT_WARNING if warnings else EXIT_OK


def run_task() -> int:
    """
    Run the configured task and write its artifacts.
        :return: exit code
    """
    resolved = load_configuration()
    PrimeItems.run_config = resolved
    if PrimeItems.program_arguments["debug"]:
        log_startup_values()
    out_dir = prepare_output_dir(resolve_output_dir(PrimeItems.program_arguments["out"], resolved["run"]["out"]))
    PrimeItems.output_dir = str(out_dir)
    threads = resolve_threads(resolved["run"]["threads"])
    save_resolved_config(resolved, out_dir)

    task = resolved["run"]["task"]
    logger.info(f"running {task} into {out_dir} with {threads} threads")
    return_code = TASK_RUNNERS[task](resolved, Path(out_dir), threads)

    if write_failure_manifest(out_dir) is not None:
        error_handler(f"{len(PrimeItems.failures)} point(s) failed.  See {out_dir}.", EXIT_NUMERICAL)
    if return_code == EXIT_OK and PrimeItems.warnings:
        for warning in PrimeItems.warnings:
            error_handler(warning, EXIT_WARNING)
        return EXIT_WARNING
    return return_code


def run_heliumjcm(argv: list | None = None) -> int:
    """
    Main entry point.
        :param argv: arguments without the program name; sys.argv when None
        :return: exit code (0 ok, 4 self-test failure, 100 warnings); configuration and
            numerical failures exit through error_handler with 2 and 3
    """
    global crash_debug  # noqa: PLW0603
    PrimeItemsReset()
    process_cli(argv)
    if PrimeItems.program_arguments["debug"]:
        crash_debug = True
        setup_logging()
    sys.excepthook = on_crash

    try:
        if PrimeItems.program_arguments["task"] == "validate":
            return validate_only()
        return_code = run_task()
    except HeliumJCMError as e:
        error_handler(str(e), e.exit_code)
        return e.exit_code
    PrimeItems.error_code = return_code
    return return_code
