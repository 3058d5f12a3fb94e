"""Shipped dispersion models."""

import math
from typing import Dict

from app.models.domain import DispersionModel

# Reference model used throughout the test-suite: phi_minus = 0.2 omega.
REFERENCE_MODEL = DispersionModel(slope_te=1.2, intercept_te=0.0, slope_tm=0.8, intercept_tm=0.0)

CRYSTAL_HALF_WAVE_GHZ = 16.7


def crystal_model() -> DispersionModel:
    """Illustrative crystal tuned so the first half-wave frequency is 16.7 GHz.

    slope_minus is fixed by phi_minus(2 pi * 16.7) = pi / 2 and
    slope_plus = 10 * slope_minus; the true crystal dispersion is not known.
    """
    slope_minus = (math.pi / 2.0) / (2.0 * math.pi * CRYSTAL_HALF_WAVE_GHZ)
    slope_plus = 10.0 * slope_minus
    return DispersionModel(
        slope_te=slope_plus + slope_minus,
        intercept_te=0.0,
        slope_tm=slope_plus - slope_minus,
        intercept_tm=0.0,
    )


PRESETS: Dict[str, DispersionModel] = {
    "reference": REFERENCE_MODEL,
    "paper": crystal_model(),
}

# Alternative names accepted wherever a preset is chosen.
PRESET_ALIASES: Dict[str, str] = {"crystal": "paper"}

PRESET_NAMES = sorted(PRESETS) + sorted(PRESET_ALIASES)


def get_preset(name: str) -> DispersionModel:
    """Look up a shipped model by name or alias."""
    try:
        return PRESETS[PRESET_ALIASES.get(name, name)]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {PRESET_NAMES}") from None
