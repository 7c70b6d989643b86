"""Calibrated tolerances and bound constants, versioned on disk.

Every scalar key can be overridden by an environment variable named
PADICWEIGHTS_<KEY> (upper case), e.g. ``PADICWEIGHTS_ZERO_ATOL=1e-8``.
"""

from __future__ import annotations

import json
import os
from importlib import resources

ENV_PREFIX = "PADICWEIGHTS_"
SCHEMA_VERSION = 1


def _raw() -> dict:
    text = resources.files("padicweights").joinpath("data/constants.json").read_text()
    data = json.loads(text)
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"constants schema {data.get('schema_version')} != {SCHEMA_VERSION}")
    return data


def load_constants(env: dict | None = None) -> dict:
    env = os.environ if env is None else env
    data = _raw()
    for key, val in list(data.items()):
        name = ENV_PREFIX + key.upper()
        if name in env and isinstance(val, (int, float)):
            try:
                data[key] = float(env[name])
            except ValueError as exc:
                raise ValueError(f"{name} must be a number") from exc
    return data


def generic_threshold(p: int, constants: dict | None = None) -> float:
    c = constants or load_constants()
    return float(c["generic_threshold"].get(str(p), c["generic_threshold_default"]))
