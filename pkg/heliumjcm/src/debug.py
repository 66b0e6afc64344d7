#! /usr/bin/env python3
"""Listing of the resolved run configuration for `validate` and debug logs"""

#                                                                                      #
# debug: resolved-settings listing for HeliumJCM                                       #
#                                                                                      #
from heliumjcm.src.initparg import initialize_run_config
from heliumjcm.src.sysconst import logger


# Format a text line to a specific width by filling in blank spaces with periods.
def format_line_debug(text: str, width: int) -> str:
    """Format text line to given width by filling with periods"""

    formatted = text

    if len(text) < width:
        formatted += "." * (width - len(text))

    return formatted[:width]


# ################################################################################
# List the resolved configuration, marking values that differ from the defaults
# ################################################################################
def settings_listing(resolved: dict, width: int = 40) -> list[str]:
    """
    One line per setting, sorted by section then key.  Non-default values carry a '*'.
        :param resolved: merged configuration
        :param width: width of the dotted name column
        :return: lines of text
    """
    defaults = initialize_run_config()
    lines = []
    for section in sorted(resolved):
        for key in sorted(resolved[section]):
            value = resolved[section][key]
            marker = "" if defaults.get(section, {}).get(key) == value else " *"
            shown = "None" if value in ("", None) else value
            lines.append(f"{format_line_debug(f'{section}.{key}', width)}{shown}{marker}")
    return lines


def log_settings(resolved: dict) -> None:
    """Write the listing to the log."""
    for line in settings_listing(resolved):
        logger.info(line)
