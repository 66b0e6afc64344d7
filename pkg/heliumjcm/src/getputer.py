"""Read the run configuration and write the resolved copy"""

#! /usr/bin/env python3

#                                                                                      #
# getputer: read, validate and save run configurations                                 #
#                                                                                      #
from __future__ import annotations

import copy
from pathlib import Path

import tomli_w
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from heliumjcm.src.error import ConfigError
from heliumjcm.src.initparg import initialize_run_config
from heliumjcm.src.sysconst import RESOLVED_CONFIG_FILE, SWEEP_AXES, TASKS, DiamagneticMode, Isotope, logger

# Keys a file may set that have no default: the field values a task cannot guess.
FIELD_KEYS = ("e_perp_v_cm", "b_z", "b_y")

# Tasks that build an |n,l> basis and need at least three vertical levels in it.
DOUBLET_TASKS = ("absorption-map", "crossings")


def read_run_config(path: Path | str) -> dict:
    """
    Read a TOML run configuration.
        :param path: file to read
        :return: raw dictionary as written in the file
    """
    path = Path(path)
    try:
        with path.open("rb") as config_file:
            raw = tomllib.load(config_file)
    except FileNotFoundError as e:
        msg = f"Configuration file {path} not found."
        raise ConfigError(msg) from e
    except tomllib.TOMLDecodeError as e:
        msg = f"Configuration file {path} is not valid TOML: {e}"
        raise ConfigError(msg) from e
    logger.info(f"read configuration {path}")
    return raw


def _coerce(section: str, key: str, value: object, default: object) -> object:
    """Check a value against the type of its default."""
    where = f"[{section}] {key}"
    if isinstance(default, bool):
        if not isinstance(value, bool):
            msg = f"{where} must be true or false, got {value!r}."
            raise ConfigError(msg)
        return value
    if isinstance(default, int):
        if isinstance(value, bool) or not isinstance(value, int):
            msg = f"{where} must be an integer, got {value!r}."
            raise ConfigError(msg)
        return value
    if isinstance(default, float):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            msg = f"{where} must be a number, got {value!r}."
            raise ConfigError(msg)
        return float(value)
    if isinstance(default, list):
        if not isinstance(value, list):
            msg = f"{where} must be a list, got {value!r}."
            raise ConfigError(msg)
        return value
    if not isinstance(value, str):
        msg = f"{where} must be a string, got {value!r}."
        raise ConfigError(msg)
    return value


def merge_run_config(raw: dict, overrides: dict | None = None) -> dict:
    """
    Lay a raw configuration over the defaults.  Unknown sections and keys are errors.
        :param raw: dictionary read from the file
        :param overrides: command line values for the [run] section
        :return: merged configuration
    """
    resolved = initialize_run_config()
    for section, values in raw.items():
        if section not in resolved:
            msg = f"Unknown configuration section [{section}].  Known sections: {', '.join(resolved)}."
            raise ConfigError(msg)
        if not isinstance(values, dict):
            msg = f"[{section}] must be a table."
            raise ConfigError(msg)
        for key, value in values.items():
            if section == "field" and key in FIELD_KEYS:
                resolved[section][key] = _coerce(section, key, value, 0.0)
                continue
            if key not in resolved[section]:
                msg = f"Unknown key '{key}' in [{section}]."
                raise ConfigError(msg)
            resolved[section][key] = _coerce(section, key, value, resolved[section][key])
    for key, value in (overrides or {}).items():
        if value not in ("", 0, None):
            resolved["run"][key] = value
    return resolved


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ConfigError(message)


def validate_run_config(resolved: dict) -> list[str]:
    """
    Check ranges and the presence of field values each task needs.

    Args:
        resolved (dict): merged configuration.

    Returns:
        list[str]: warnings that do not stop the run.

    Processing Logic:
        - The stepped axis of a sweep is the only field value that may be missing.
        - E_perp may come from a resonance instead of a value.
        - Truncations too small for the requested fields are warned about, not rejected.
    """
    run, field, grid, basis = resolved["run"], resolved["field"], resolved["grid"], resolved["basis"]
    sweep, spectro = resolved["sweep"], resolved["spectroscopy"]
    task = run["task"]
    _require(task in TASKS, f"[run] task must be one of {', '.join(TASKS)}, got '{task}'.")
    _require(resolved["material"]["isotope"] in [i.value for i in Isotope], "[material] isotope must be He3 or He4.")
    _require(
        basis["diamagnetic"] in [m.value for m in DiamagneticMode],
        "[basis] diamagnetic must be full, diagonal or projected.",
    )
    _require(sweep["axis"] in SWEEP_AXES, f"[sweep] axis must be one of {', '.join(SWEEP_AXES)}.")
    _require(run["threads"] >= 0, "[run] threads must be >= 0.")
    _require(grid["z_max"] > 0.0 and grid["n_points"] >= 100, "[grid] needs z_max > 0 and n_points >= 100.")
    _require(basis["n_max"] >= 1 and basis["l_max"] >= 0, "[basis] needs n_max >= 1 and l_max >= 0.")
    _require(
        grid["vertical_n_max"] >= basis["n_max"],
        f"[grid] vertical_n_max={grid['vertical_n_max']} is smaller than [basis] n_max={basis['n_max']}.",
    )
    _require(field["temperature"] > 0.0, "[field] temperature must be positive.")
    _require(sweep["points"] >= 2 and sweep["stop"] > sweep["start"], "[sweep] needs points >= 2 and stop > start.")
    _require(
        spectro["e_perp_points"] >= 2 and spectro["e_perp_stop"] > spectro["e_perp_start"],
        "[spectroscopy] needs e_perp_points >= 2 and e_perp_stop > e_perp_start.",
    )
    if task in DOUBLET_TASKS:
        _require(basis["n_max"] >= 3, f"Task {task} needs [basis] n_max >= 3, got {basis['n_max']}.")

    if task == "self-test":
        return []

    stepped = sweep["axis"] if task in ("spectrum-sweep", "absorption-map") else None
    if task == "absorption-map":
        _require(stepped in ("b_z", "b_y"), "[sweep] axis of an absorption map must be b_z or b_y.")
    needs = {"b_z", "b_y", "e_perp"} - {stepped}
    if task == "crossings":
        needs -= {"b_z", "b_y"}
    if task == "rates" and resolved["rates"]["at_crossing"]:
        needs -= {"b_z"}
    if task == "shifts":
        needs -= {"b_y"}
    if "e_perp" in needs:
        _require(
            "e_perp_v_cm" in field or field["resonance_ghz"] > 0.0,
            "[field] e_perp_v_cm is missing (or set resonance_ghz).",
        )
    for name in ("b_z", "b_y"):
        if name in needs:
            _require(name in field, f"[field] {name} is missing.")

    warnings = []
    b_y_max = max(field.get("b_y", 0.0), sweep["stop"] if stepped == "b_y" else 0.0)
    if b_y_max >= 0.5 and basis["l_max"] < 20:
        warnings.append(
            f"[basis] l_max={basis['l_max']} with B_y up to {b_y_max} T: the l_max convergence check will likely fail.",
        )
    return warnings


def resolve_run_config(path: Path | str, overrides: dict | None = None) -> tuple[dict, list[str]]:
    """Read, merge and validate.  Returns (resolved, warnings)."""
    resolved = merge_run_config(read_run_config(path), overrides)
    return resolved, validate_run_config(resolved)


def save_resolved_config(resolved: dict, out_dir: Path | str) -> Path:
    """
    Write the resolved configuration next to the artifacts.
        :param resolved: merged configuration
        :param out_dir: output directory
        :return: path written
    """
    path = Path(out_dir) / RESOLVED_CONFIG_FILE
    with path.open("wb") as config_file:
        tomli_w.dump(copy.deepcopy(resolved), config_file)
    return path
