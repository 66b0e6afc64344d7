"""Prime items which are used throughout HeliumJCM (globals)."""

#! /usr/bin/env python3

#                                                                                      #
# primitem = intialize PrimeItems which are used throughout HeliumJCM (globals).       #
#                                                                                      #
# Primary Items = global variables used throughout HeliumJCM
#
#  program_arguments = runtime arguments entered by user and parsed.
#    See initparg.py for details.
#  run_config = resolved configuration, one dictionary per section
#  output_dir = directory that receives the artifacts of this run
#  failures = sweep points that failed numerically, written to the failure manifest
#  warnings = non-fatal findings that turn the exit code into 100
#  artifacts = paths written by the task
#  error_code = exit code of the run
#
from __future__ import annotations

from typing import ClassVar

from heliumjcm.src.sysconst import NOW_TIME


class PrimeItems:
    """PrimeItems class contains global variables used throughout HeliumJCM"""

    program_arguments: ClassVar = {}
    run_config: ClassVar = {}
    output_dir = ""
    failures: ClassVar = []
    warnings: ClassVar = []
    artifacts: ClassVar = []
    error_code = 0
    error_msg = ""
    last_run = NOW_TIME


# Reset all values
class PrimeItemsReset:
    """Re-initialize all values in PrimeItems class"""

    def __init__(self) -> None:
        """
        Reset PrimeItems between runs (the unit tests run many in one process).
        """
        PrimeItems.program_arguments = {}
        PrimeItems.run_config = {}
        PrimeItems.output_dir = ""
        PrimeItems.failures = []
        PrimeItems.warnings = []
        PrimeItems.artifacts = []
        PrimeItems.error_code = 0
        PrimeItems.error_msg = ""
