"""Result files written by HeliumJCM tasks"""

#! /usr/bin/env python3

#                                                                                      #
# artifact: CSV tables, JSON sidecars and the failure manifest                         #
#                                                                                      #
# Outputs carry no timestamps so that a rerun with the same configuration produces     #
# byte-identical files.                                                                #
#                                                                                      #
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np
import pandas as pd

from heliumjcm.src.materials import MaterialProperties
from heliumjcm.src.primitem import PrimeItems
from heliumjcm.src.sysconst import FAILURE_MANIFEST_FILE, MILLI_EV, NANOMETER, VERSION, logger


def _jsonable(value: object) -> object:
    """json.dump fallback for numpy and path values."""
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, Path):
        return str(value)
    msg = f"{type(value).__name__} is not JSON serializable"
    raise TypeError(msg)


def _finite(value: object) -> object:
    """Replace non-finite floats by strings so the sidecar stays strict JSON."""
    if isinstance(value, dict):
        return {key: _finite(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_finite(item) for item in value]
    if isinstance(value, (float, np.floating)) and not math.isfinite(value):
        return str(float(value))
    return value


def prepare_output_dir(out_dir: Path | str) -> Path:
    """Create the output directory."""
    path = Path(out_dir)
    path.mkdir(parents=True, exist_ok=True)
    return path


def write_table(frame: pd.DataFrame, out_dir: Path | str, name: str) -> Path:
    """Write a table as CSV and remember it."""
    path = Path(out_dir) / name
    frame.to_csv(path, index=False, float_format="%.9g", lineterminator="\n")
    PrimeItems.artifacts.append(path)
    logger.info(f"wrote {path} ({len(frame)} rows)")
    return path


def write_sidecar(data: dict, out_dir: Path | str, name: str) -> Path:
    """Write a JSON sidecar with sorted keys and remember it."""
    path = Path(out_dir) / name
    with path.open("w") as sidecar:
        json.dump(_finite(data), sidecar, sort_keys=True, indent=2, default=_jsonable)
        sidecar.write("\n")
    PrimeItems.artifacts.append(path)
    logger.info(f"wrote {path}")
    return path


def provenance(resolved: dict, material: MaterialProperties) -> dict:
    """Version, resolved configuration and derived material constants."""
    return {
        "version": VERSION,
        "config": resolved,
        "material": {
            "isotope": material.isotope.value,
            "rydberg_mev": material.rydberg_energy / MILLI_EV,
            "bohr_radius_nm": material.bohr_radius / NANOMETER,
            "epsilon": material.epsilon,
            "lambda_j_m": material.lambda_coupling,
        },
    }


def write_failure_manifest(out_dir: Path | str) -> Path | None:
    """Write failed_points.json when PrimeItems.failures is not empty."""
    if not PrimeItems.failures:
        return None
    return write_sidecar({"failed_points": PrimeItems.failures}, out_dir, FAILURE_MANIFEST_FILE)
