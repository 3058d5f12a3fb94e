"""Two-level polarization algebra (Jones vectors and 2x2 operators)."""

from app.polarization.algebra import (
    KET_X,
    KET_Z,
    Operator2,
    Vec2C,
    adjoint,
    apply,
    hermiticity_deviation,
    identity,
    inner,
    matmul,
    pauli,
    rotation,
    state,
    unitarity_deviation,
)

__all__ = [
    "KET_X",
    "KET_Z",
    "Operator2",
    "Vec2C",
    "adjoint",
    "apply",
    "hermiticity_deviation",
    "identity",
    "inner",
    "matmul",
    "pauli",
    "rotation",
    "state",
    "unitarity_deviation",
]
