"""Flat key=value model files.

Example::

    slope_te=1.2
    slope_tm=0.8
    intercept_te=0
    psi_in=z
    psi_f=0.6,0.8j
"""

from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

import numpy as np
import structlog
from dotenv import dotenv_values
from pydantic import ValidationError

from app.core.exceptions import ConfigError
from app.models.domain import DispersionModel, Scenario
from app.waveplate.presets import get_preset

logger = structlog.get_logger()

MODEL_KEYS = ("slope_te", "intercept_te", "slope_tm", "intercept_tm")
STATE_KEYS = ("psi_in", "psi_f")

_R2 = 1.0 / np.sqrt(2.0)
NAMED_STATES = {
    "z": (1.0, 0.0),
    "1": (1.0, 0.0),
    "x": (0.0, 1.0),
    "2": (0.0, 1.0),
    "d": (_R2, _R2),
    "a": (_R2, -_R2),
    "r": (_R2, 1j * _R2),
    "l": (_R2, -1j * _R2),
}


def parse_state(text: str) -> np.ndarray:
    """Parse a state name or a pair of complex literals; pairs are normalized."""
    key = text.strip().lower()
    if key in NAMED_STATES:
        return np.array(NAMED_STATES[key], dtype=complex)
    parts = [p.strip() for p in key.split(",")]
    if len(parts) != 2:
        raise ConfigError(f"state {text!r} must be a name ({', '.join(NAMED_STATES)}) or 'c1,c2'")
    try:
        vec = np.array([complex(p) for p in parts], dtype=complex)
    except ValueError as e:
        raise ConfigError(f"state {text!r}: {e}") from None
    norm = np.linalg.norm(vec)
    if not np.isfinite(norm) or norm == 0.0:
        raise ConfigError(f"state {text!r} has zero or non-finite norm")
    return vec / norm


def load_model_file(path: Union[str, Path]) -> Dict[str, Any]:
    """Read a key=value model file into typed overrides."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"model config not found: {path}")
    raw = dotenv_values(path)
    overrides: Dict[str, Any] = {}
    for key, value in raw.items():
        name = key.strip().lower()
        if value is None or value.strip() == "":
            raise ConfigError(f"{path}: key {key!r} has no value")
        if name in MODEL_KEYS:
            try:
                overrides[name] = float(value)
            except ValueError:
                raise ConfigError(f"{path}: {key}={value!r} is not a number") from None
        elif name in STATE_KEYS:
            overrides[name] = parse_state(value)
        else:
            raise ConfigError(f"{path}: unknown key {key!r}")
    logger.debug("Model config loaded", path=str(path), keys=sorted(overrides))
    return overrides


def build_scenario(
    preset: str = "reference",
    config_path: Optional[Union[str, Path]] = None,
    overrides: Optional[Mapping[str, Any]] = None,
) -> Scenario:
    """Preset, then config file, then explicit overrides."""
    try:
        base = get_preset(preset)
    except ValueError as e:
        raise ConfigError(str(e)) from None
    values: Dict[str, Any] = base.model_dump()
    states: Dict[str, Any] = {}
    layers = [load_model_file(config_path) if config_path else {}, dict(overrides or {})]
    for layer in layers:
        for key, value in layer.items():
            if value is None:
                continue
            if key in MODEL_KEYS:
                values[key] = value
            elif key in STATE_KEYS:
                states[key] = parse_state(value) if isinstance(value, str) else value
            else:
                raise ConfigError(f"unknown model key {key!r}")
    try:
        return Scenario(model=DispersionModel(**values), **states)
    except ValidationError as e:
        raise ConfigError(f"invalid model: {e.errors()[0]['msg']}") from None
