"""Jones vectors and 2x2 operators in the basis (|1> = z, |2> = x).

Operators are numpy arrays of shape (..., 2, 2) and vectors of shape (..., 2);
every function broadcasts over leading axes so whole parameter grids can be
evaluated at once. sigma_3 = diag(-1, +1): |2> carries the +1 eigenvalue.
"""

from typing import Union

import numpy as np
import numpy.typing as npt

Vec2C = npt.NDArray[np.complex128]
Operator2 = npt.NDArray[np.complex128]
ArrayLike = Union[float, npt.NDArray[np.float64]]

KET_Z: Vec2C = np.array([1.0, 0.0], dtype=complex)
KET_X: Vec2C = np.array([0.0, 1.0], dtype=complex)

_PAULI = {
    1: np.array([[0, 1], [1, 0]], dtype=complex),
    2: np.array([[0, 1j], [-1j, 0]], dtype=complex),
    3: np.array([[-1, 0], [0, 1]], dtype=complex),
}

STATE_TOL = 1e-12


def identity() -> Operator2:
    """2x2 identity."""
    return np.eye(2, dtype=complex)


def pauli(k: int) -> Operator2:
    """Return sigma_k for k in {1, 2, 3}.

    sigma_3 = diag(-1, +1) so that sigma_3|1> = -|1>. To keep the algebra
    sigma_j sigma_k = delta_jk I + i eps_jkl sigma_l, sigma_2 is the negative
    of the textbook matrix: sigma_2 = [[0, i], [-i, 0]].
    """
    if k not in _PAULI:
        raise ValueError(f"Pauli index must be 1, 2 or 3, got {k!r}")
    return _PAULI[k].copy()


def rotation(beta: ArrayLike) -> Operator2:
    """Real rotation R(beta) = [[cos, -sin], [sin, cos]], broadcast over beta."""
    beta = np.asarray(beta, dtype=float)
    c = np.cos(beta)
    s = np.sin(beta)
    out = np.empty(beta.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = c
    out[..., 0, 1] = -s
    out[..., 1, 0] = s
    out[..., 1, 1] = c
    return out


def state(c1: complex, c2: complex) -> Vec2C:
    """Build a normalized state vector; raises if the norm is not 1."""
    vec = np.array([c1, c2], dtype=complex)
    norm = np.linalg.norm(vec)
    if not np.all(np.isfinite(vec)) or abs(norm - 1.0) > STATE_TOL:
        raise ValueError(f"state must be normalized, got norm {norm!r}")
    return vec


def inner(bra: Vec2C, ket: Vec2C) -> Union[complex, npt.NDArray[np.complex128]]:
    """<bra|ket>, conjugate-linear in bra."""
    result = np.einsum("...i,...i->...", np.conj(bra), ket)
    if np.ndim(result) == 0:
        return complex(result)
    return result


def matmul(a: Operator2, b: Operator2) -> Operator2:
    """Operator product a b, broadcast over leading axes."""
    return np.matmul(a, b)


def apply(op: Operator2, vec: Vec2C) -> Vec2C:
    """op |vec>."""
    return np.einsum("...ij,...j->...i", op, vec)


def adjoint(op: Operator2) -> Operator2:
    """Conjugate transpose of the last two axes."""
    return np.conj(np.swapaxes(op, -1, -2))


def unitarity_deviation(op: Operator2) -> float:
    """Max-entry modulus of U U^dagger - I (over all broadcast entries)."""
    residual = np.matmul(op, adjoint(op)) - np.eye(2)
    return float(np.max(np.abs(residual)))


def hermiticity_deviation(op: Operator2) -> float:
    """Max-entry modulus of A - A^dagger."""
    return float(np.max(np.abs(op - adjoint(op))))
