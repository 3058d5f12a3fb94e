"""Tests for the two-level polarization algebra."""

import numpy as np
import pytest

from app.polarization.algebra import (
    KET_X,
    KET_Z,
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


class TestPauli:
    def test_squares_are_identity(self):
        for k in (1, 2, 3):
            assert np.max(np.abs(pauli(k) @ pauli(k) - identity())) <= 1e-15

    @pytest.mark.parametrize("a,b,c", [(1, 2, 3), (2, 3, 1), (3, 1, 2)])
    def test_cyclic_products(self, a, b, c):
        assert np.max(np.abs(pauli(a) @ pauli(b) - 1j * pauli(c))) <= 1e-15

    @pytest.mark.parametrize("a,b", [(1, 2), (2, 3), (1, 3)])
    def test_anticommute(self, a, b):
        assert np.max(np.abs(pauli(a) @ pauli(b) + pauli(b) @ pauli(a))) <= 1e-15

    def test_sigma3_sign_convention(self):
        assert np.allclose(apply(pauli(3), KET_Z), -KET_Z)
        assert np.allclose(apply(pauli(3), KET_X), KET_X)

    def test_hermitian(self):
        for k in (1, 2, 3):
            assert hermiticity_deviation(pauli(k)) == 0.0

    def test_bad_index(self):
        with pytest.raises(ValueError):
            pauli(4)

    def test_returns_copy(self):
        m = pauli(1)
        m[0, 0] = 5.0
        assert pauli(1)[0, 0] == 0.0


class TestRotation:
    def test_zero_is_identity(self):
        assert np.array_equal(rotation(0.0), identity())

    def test_quarter_turn_maps_z_to_x(self):
        assert np.allclose(apply(rotation(np.pi / 2), KET_Z), KET_X, atol=1e-15)

    def test_broadcasts(self):
        r = rotation(np.linspace(0.0, 1.0, 5))
        assert r.shape == (5, 2, 2)
        assert unitarity_deviation(r) <= 1e-15

    def test_adjoint_inverts(self):
        r = rotation(0.37)
        assert np.allclose(r @ adjoint(r), identity(), atol=1e-15)

    def test_unitary_over_many_angles(self, rng):
        r = rotation(rng.uniform(-4 * np.pi, 4 * np.pi, 10_000))
        assert unitarity_deviation(r) <= 1e-12


class TestStates:
    def test_orthonormal_basis(self):
        assert inner(KET_Z, KET_Z) == 1.0
        assert inner(KET_Z, KET_X) == 0.0

    def test_inner_is_conjugate_linear_in_bra(self):
        r = state(1 / np.sqrt(2), 1j / np.sqrt(2))
        assert inner(r, KET_X) == pytest.approx(-1j / np.sqrt(2))
        assert isinstance(inner(r, KET_X), complex)

    def test_inner_broadcasts(self):
        kets = np.stack([KET_Z, KET_X, KET_Z])
        assert np.allclose(inner(KET_Z, kets), [1.0, 0.0, 1.0])

    def test_unnormalized_state_rejected(self):
        with pytest.raises(ValueError):
            state(1.0, 1.0)

    def test_non_finite_state_rejected(self):
        with pytest.raises(ValueError):
            state(np.nan, 0.0)


def test_unitarity_deviation_detects_non_unitary():
    assert unitarity_deviation(identity()) == 0.0
    assert unitarity_deviation(2.0 * identity()) == pytest.approx(3.0)


def _random_unitary(rng):
    q, r = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
    return q @ np.diag(np.diag(r) / np.abs(np.diag(r)))


def test_adjoint_moves_operator_across_inner_product(rng):
    for _ in range(200):
        u = _random_unitary(rng)
        a = rng.normal(size=2) + 1j * rng.normal(size=2)
        b = rng.normal(size=2) + 1j * rng.normal(size=2)
        lhs = inner(a, apply(u, b))
        assert abs(lhs - inner(apply(adjoint(u), a), b)) <= 1e-12
        assert abs(lhs - np.conj(inner(b, apply(adjoint(u), a)))) <= 1e-12
        assert np.array_equal(adjoint(adjoint(u)), u)


@pytest.mark.parametrize("fn", [identity, matmul, apply, adjoint, inner, pauli, rotation, state])
def test_public_helpers_are_documented(fn):
    assert fn.__doc__ and fn.__doc__.strip()
