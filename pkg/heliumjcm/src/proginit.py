"""Program initialization for HeliumJCM: logging and startup values"""

#! /usr/bin/env python3

#                                                                                      #
# proginit: set up logging and record the startup values                               #
#                                                                                      #
import logging
import sys

from heliumjcm.src.debug import log_settings
from heliumjcm.src.primitem import PrimeItems
from heliumjcm.src.sysconst import LOG_FILE, MY_VERSION, NOW_TIME, logger


# Set up logging
def setup_logging() -> None:
    """
    Set up the logging: name the file and establish the log type and format
    """
    logging.basicConfig(
        filename=LOG_FILE,
        filemode="w",
        format="%(asctime)s,%(msecs)d %(levelname)s %(name)s %(funcName)s %(message)s",
        datefmt="%H:%M:%S",
        level=logging.DEBUG,
    )
    logger.info(sys.version_info)


# Log the arguments
def log_startup_values() -> None:
    """
    Log the runtime arguments and the resolved configuration
    """
    logger.info(f"{MY_VERSION} {NOW_TIME!s}")
    logger.info(f"sys.argv:{sys.argv!s}")
    for key, value in PrimeItems.program_arguments.items():
        logger.info(f"{key}: {value}")
    if PrimeItems.run_config:
        log_settings(PrimeItems.run_config)
