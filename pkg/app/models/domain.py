"""Domain data models."""

import math
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.polarization.algebra import KET_Z, STATE_TOL, Vec2C


def _finite(value: float) -> float:
    if not math.isfinite(value):
        raise ValueError("value must be finite")
    return value


class Axis(str, Enum):
    """Differentiation axis in the (rho, eta) = (omega, beta) plane."""
    RHO = "rho"
    ETA = "eta"


class Stencil(str, Enum):
    """Central finite-difference stencils."""
    CENTRAL_2 = "central-2"
    CENTRAL_4 = "central-4"


class DispersionModel(BaseModel):
    """Linear birefringent phases phi(omega) = slope * omega + intercept.

    Slopes are in rad*ns (omega in rad/ns), intercepts in rad.
    """
    model_config = ConfigDict(frozen=True)

    slope_te: float
    intercept_te: float = 0.0
    slope_tm: float
    intercept_tm: float = 0.0

    @field_validator("slope_te", "intercept_te", "slope_tm", "intercept_tm")
    @classmethod
    def check_finite(cls, v: float) -> float:
        return _finite(v)

    @property
    def slope_plus(self) -> float:
        return 0.5 * (self.slope_te + self.slope_tm)

    @property
    def slope_minus(self) -> float:
        return 0.5 * (self.slope_te - self.slope_tm)

    @property
    def intercept_plus(self) -> float:
        return 0.5 * (self.intercept_te + self.intercept_tm)

    @property
    def intercept_minus(self) -> float:
        return 0.5 * (self.intercept_te - self.intercept_tm)

    def is_degenerate(self) -> bool:
        """phi_minus is constant when the two slopes coincide."""
        return self.slope_te == self.slope_tm

    def perturbed(
        self,
        d_slope_te: float = 0.0,
        d_intercept_te: float = 0.0,
        d_slope_tm: float = 0.0,
        d_intercept_tm: float = 0.0,
    ) -> "DispersionModel":
        return DispersionModel(
            slope_te=self.slope_te + d_slope_te,
            intercept_te=self.intercept_te + d_intercept_te,
            slope_tm=self.slope_tm + d_slope_tm,
            intercept_tm=self.intercept_tm + d_intercept_tm,
        )


class Scenario(BaseModel):
    """A dispersion model with its pre- and post-selected states."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    model: DispersionModel
    psi_in: Vec2C = Field(default_factory=lambda: KET_Z.copy())
    psi_f: Vec2C = Field(default_factory=lambda: KET_Z.copy())

    @field_validator("psi_in", "psi_f", mode="before")
    @classmethod
    def validate_state(cls, v):
        vec = np.asarray(v, dtype=complex)
        if vec.shape != (2,):
            raise ValueError(f"state must have two components, got shape {vec.shape}")
        if not np.all(np.isfinite(vec)):
            raise ValueError("state components must be finite")
        norm = float(np.linalg.norm(vec))
        if abs(norm - 1.0) > STATE_TOL:
            raise ValueError(f"state must be normalized, got norm {norm!r}")
        return vec

    @classmethod
    def default(cls, model: DispersionModel) -> "Scenario":
        """psi_in = psi_f = |1> (z-polarized source and detector)."""
        return cls(model=model)

    def is_default(self) -> bool:
        return bool(
            np.allclose(self.psi_in, KET_Z, rtol=0.0, atol=STATE_TOL)
            and np.allclose(self.psi_f, KET_Z, rtol=0.0, atol=STATE_TOL)
        )


class ParamPoint(BaseModel):
    """A point (rho, eta) in parameter space; here (omega [rad/ns], beta [rad])."""
    model_config = ConfigDict(frozen=True)

    rho: float
    eta: float

    @field_validator("rho", "eta")
    @classmethod
    def check_finite(cls, v: float) -> float:
        return _finite(v)

    def shifted(self, d_rho: float, d_eta: float) -> "ParamPoint":
        return ParamPoint(rho=self.rho + d_rho, eta=self.eta + d_eta)

    def as_tuple(self) -> Tuple[float, float]:
        return self.rho, self.eta


class DiffSettings(BaseModel):
    """Finite-difference configuration.

    Steps are relative (h = step * max(1, |x|)) unless ``absolute`` is set.
    """
    model_config = ConfigDict(frozen=True)

    step_rho: float = Field(default=1e-5, gt=0)
    step_eta: float = Field(default=1e-5, gt=0)
    stencil: Stencil = Stencil.CENTRAL_4
    absolute: bool = False

    def step_for(self, axis: Axis, coordinate: float) -> float:
        base = self.step_rho if axis == Axis.RHO else self.step_eta
        if self.absolute:
            return base
        return base * max(1.0, abs(coordinate))


class PointerValue(BaseModel):
    """Complex pointer: re = d(arg T), im = -d(ln|T|).

    ``axis`` is None for a directional pointer, in which case ``direction``
    holds the unit vector (d_rho, d_eta).
    """
    model_config = ConfigDict(frozen=True)

    re: float
    im: float
    axis: Optional[Axis] = None
    direction: Optional[Tuple[float, float]] = None

    @model_validator(mode="after")
    def check_axis(self):
        if self.axis is None and self.direction is None:
            raise ValueError("either axis or direction is required")
        if self.direction is not None:
            norm = math.hypot(*self.direction)
            if abs(norm - 1.0) > 1e-12:
                raise ValueError(f"direction must have unit norm, got {norm!r}")
        return self

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)


class GridSpec(BaseModel):
    """Rectangular (rho, eta) window sampled on an n_rho x n_eta node grid."""
    model_config = ConfigDict(frozen=True)

    rho_min: float
    rho_max: float
    eta_min: float
    eta_max: float
    n_rho: int = Field(ge=2)
    n_eta: int = Field(ge=2)

    @model_validator(mode="after")
    def check_ranges(self):
        for name in ("rho_min", "rho_max", "eta_min", "eta_max"):
            _finite(getattr(self, name))
        if not self.rho_max > self.rho_min:
            raise ValueError("rho_max must exceed rho_min")
        if not self.eta_max > self.eta_min:
            raise ValueError("eta_max must exceed eta_min")
        return self

    def rho_axis(self) -> np.ndarray:
        return np.linspace(self.rho_min, self.rho_max, self.n_rho)

    def eta_axis(self) -> np.ndarray:
        return np.linspace(self.eta_min, self.eta_max, self.n_eta)

    @property
    def d_rho(self) -> float:
        return (self.rho_max - self.rho_min) / (self.n_rho - 1)

    @property
    def d_eta(self) -> float:
        return (self.eta_max - self.eta_min) / (self.n_eta - 1)

    def contains(self, rho: float, eta: float) -> bool:
        return self.rho_min <= rho <= self.rho_max and self.eta_min <= eta <= self.eta_max


class SingularityRecord(BaseModel):
    """A refined zero of the response with its topological charge."""
    model_config = ConfigDict(frozen=True)

    rho: float
    eta: float
    charge: int
    residual: float
    iterations: int = 0


class PhaseGrid(BaseModel):
    """Sampled arg T (principal value) and |T| on a GridSpec.

    Arrays have shape (n_rho, n_eta); flattening in C order gives the
    row-major layout with i indexing rho.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    spec: GridSpec
    phase: np.ndarray
    magnitude: np.ndarray

    @model_validator(mode="after")
    def check_shapes(self):
        shape = (self.spec.n_rho, self.spec.n_eta)
        if self.phase.shape != shape or self.magnitude.shape != shape:
            raise ValueError(f"grid arrays must have shape {shape}")
        return self

    def values(self) -> np.ndarray:
        """Reconstruct complex samples |T| * exp(i arg T)."""
        return self.magnitude * np.exp(1j * self.phase)


class SweepTable(BaseModel):
    """Complex transmission along omega at a fixed beta."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    beta: float
    omega: np.ndarray
    t: np.ndarray

    @model_validator(mode="after")
    def check_rows(self):
        if self.omega.ndim != 1 or self.omega.shape != self.t.shape:
            raise ValueError("omega and t must be 1-D arrays of equal length")
        if self.omega.size < 3:
            raise ValueError("a sweep needs at least 3 rows")
        if not np.all(np.diff(self.omega) > 0):
            raise ValueError("omega must be strictly increasing")
        return self

    def __eq__(self, other) -> bool:
        if not isinstance(other, SweepTable):
            return NotImplemented
        return (
            self.beta == other.beta
            and np.array_equal(self.omega, other.omega)
            and np.array_equal(self.t, other.t)
        )


class PointerCurve(BaseModel):
    """Pointer values along a line; gap rows carry NaN and ``gap=True``.

    ``axis`` names the swept coordinate ("omega" or "beta"); ``fixed`` is the
    value of the other coordinate.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    axis: str = Field(pattern="^(omega|beta)$")
    fixed: float
    coord: np.ndarray
    re: np.ndarray
    im: np.ndarray
    gap: np.ndarray
    analytic: Optional[np.ndarray] = None

    @model_validator(mode="after")
    def check_rows(self):
        n = self.coord.shape
        arrays = [self.re, self.im, self.gap]
        if self.analytic is not None:
            arrays.append(self.analytic)
        if any(a.shape != n for a in arrays):
            raise ValueError("pointer curve columns must have equal length")
        ok = ~self.gap
        if not (np.all(np.isfinite(self.re[ok])) and np.all(np.isfinite(self.im[ok]))):
            raise ValueError("non-gap rows must be finite")
        return self

    def gap_indices(self) -> List[int]:
        return [int(i) for i in np.flatnonzero(self.gap)]


class Rectangle(BaseModel):
    """Axis-aligned closed loop in the (rho, eta) plane, traversed counterclockwise."""
    model_config = ConfigDict(frozen=True)

    rho_min: float
    rho_max: float
    eta_min: float
    eta_max: float

    @model_validator(mode="after")
    def check_ranges(self):
        if not (self.rho_max > self.rho_min and self.eta_max > self.eta_min):
            raise ValueError("rectangle must have positive extent on both axes")
        return self

    def contains(self, rho: float, eta: float) -> bool:
        return self.rho_min < rho < self.rho_max and self.eta_min < eta < self.eta_max


class ModelPerturbation(BaseModel):
    """Additive changes to the dispersion parameters."""
    model_config = ConfigDict(frozen=True)

    d_slope_te: float = 0.0
    d_intercept_te: float = 0.0
    d_slope_tm: float = 0.0
    d_intercept_tm: float = 0.0
