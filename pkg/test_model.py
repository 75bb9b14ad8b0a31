"""
Tests: core model (Hamiltonian, canonical coordinates, gradient)
"""
import cmath
import math

import numpy as np
import pytest

from core.errors import DegeneratePhaseError, DomainError, NormalizationError, SingularDerivativeError
from core.model import (
    CanonicalCoords,
    ModelParams,
    StateVector,
    apply_hamiltonian,
    chemical_potential,
    classical_gradient,
    classical_hamiltonian,
    from_canonical,
    mean_field_energy,
    to_canonical,
)


def random_state(rng) -> StateVector:
    psi = rng.normal(size=3) + 1j * rng.normal(size=3)
    return StateVector.from_array(psi, normalize=True)


def random_params(rng, g_scale=1.0) -> ModelParams:
    eps, delta, v, w = rng.uniform(-1.0, 1.0, 4)
    return ModelParams(epsilon=eps, delta=delta, v=v, w=w, g=g_scale * rng.uniform(-1.0, 1.0))


def test_apply_hamiltonian_examples():
    params = ModelParams(epsilon=0.5, v=0.1, w=0.2, delta=0.0, g=0.2)
    out = apply_hamiltonian(StateVector.basis(0), params)
    assert np.allclose(out, [0.7, 0.1, 0.0], atol=1e-15)

    params = ModelParams(delta=-0.4, w=0.2, g=-0.4)
    out = apply_hamiltonian(StateVector.basis(2), params)
    assert np.allclose(out, [0.0, 0.2, -0.8], atol=1e-15)


def test_linear_limit_is_matrix_product():
    rng = np.random.default_rng(1)
    for _ in range(20):
        params = random_params(rng, g_scale=0.0)
        state = random_state(rng)
        expected = params.linear_matrix() @ state.as_array()
        assert np.allclose(apply_hamiltonian(state, params), expected, atol=1e-14)


def test_global_phase_covariance():
    rng = np.random.default_rng(2)
    params = random_params(rng)
    state = random_state(rng)
    phase = cmath.exp(0.7j)
    rotated = StateVector.from_array(phase * state.as_array())
    assert np.allclose(apply_hamiltonian(rotated, params), phase * apply_hamiltonian(state, params), atol=1e-14)
    assert chemical_potential(rotated, params) == pytest.approx(chemical_potential(state, params), abs=1e-14)


def test_chemical_potential_of_basis_states():
    params = ModelParams(epsilon=0.3, delta=-0.2, v=0.1, w=0.4, g=-0.7)
    assert chemical_potential(StateVector.basis(0), params) == pytest.approx(0.3 - 0.7)
    assert chemical_potential(StateVector.basis(1), params) == pytest.approx(-0.7)


def test_chemical_potential_of_linear_eigenvector():
    params = ModelParams(epsilon=0.3, delta=-0.4, v=0.1, w=0.2)
    values, vectors = np.linalg.eigh(params.linear_matrix())
    for k in range(3):
        state = StateVector.from_array(vectors[:, k])
        assert chemical_potential(state, params) == pytest.approx(values[k], abs=1e-14)


def test_state_vector_rejects_unnormalized():
    with pytest.raises(NormalizationError):
        StateVector(1.0, 1.0, 0.0)
    with pytest.raises(NormalizationError):
        StateVector(float("nan"), 0.0, 0.0)


def test_model_params_rejects_non_finite():
    with pytest.raises(DomainError):
        ModelParams(g=float("inf"))
    with pytest.raises(DomainError):
        ModelParams().with_value("alpha", 1.0)


def test_to_canonical_examples():
    s = 1.0 / math.sqrt(2.0)
    coords = to_canonical(StateVector(s, s, 0.0))
    assert coords.p1 == pytest.approx(0.5)
    assert coords.p3 == 0.0
    assert coords.q1 == 0.0
    assert coords.q3 == 0.0

    state = from_canonical(CanonicalCoords(1 / 3, 1 / 3, 0.0, 0.0))
    assert np.allclose(state.as_array(), np.full(3, 1 / math.sqrt(3.0)), atol=1e-15)


def test_to_canonical_needs_b():
    with pytest.raises(DegeneratePhaseError):
        to_canonical(StateVector.basis(0))


def test_canonical_round_trip():
    rng = np.random.default_rng(3)
    for _ in range(100):
        state = random_state(rng)
        back = from_canonical(to_canonical(state))
        assert state.overlap(back) == pytest.approx(1.0, abs=1e-12)
        assert np.allclose(back.gauge_fixed().as_array(), state.gauge_fixed().as_array(), atol=1e-12)


def test_phases_are_wrapped():
    coords = CanonicalCoords(0.2, 0.3, 2.5 * math.pi, -math.pi)
    assert coords.q1 == pytest.approx(0.5 * math.pi)
    assert coords.q3 == pytest.approx(math.pi)
    with pytest.raises(DomainError):
        CanonicalCoords(0.7, 0.5)


def test_classical_hamiltonian_boundary_values():
    params = ModelParams(epsilon=0.5, v=0.1, w=0.2, g=0.2)
    assert classical_hamiltonian(CanonicalCoords(1.0, 0.0), params) == pytest.approx(0.6)
    assert classical_hamiltonian(CanonicalCoords(0.0, 0.0), params) == pytest.approx(0.1)


def test_classical_hamiltonian_matches_mean_field_energy():
    rng = np.random.default_rng(4)
    for _ in range(50):
        params = random_params(rng)
        state = random_state(rng)
        assert classical_hamiltonian(to_canonical(state), params) == pytest.approx(
            mean_field_energy(state, params), abs=1e-12)


def test_gradient_vanishes_in_p_for_real_phases():
    params = ModelParams(epsilon=0.2, delta=-0.1, v=0.3, w=0.5, g=0.4)
    grad = classical_gradient(CanonicalCoords(0.3, 0.2, 0.0, 0.0), params)
    assert grad[0] == 0.0
    assert grad[1] == 0.0


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(5)
    h = 1e-5
    worst = 0.0
    checked = 0
    while checked < 1000:
        p1, p3 = rng.uniform(0.05, 0.9, 2)
        if p1 + p3 > 0.95:
            continue
        q1, q3 = rng.uniform(-math.pi, math.pi, 2)
        params = random_params(rng)
        point = np.array([p1, p3, q1, q3])

        def H(z):
            return classical_hamiltonian(CanonicalCoords(*z), params)

        partial = np.array([(H(point + h * e) - H(point - h * e)) / (2 * h) for e in np.eye(4)])
        expected = np.array([-partial[2], -partial[3], partial[0], partial[1]])
        grad = classical_gradient(CanonicalCoords(*point), params)
        worst = max(worst, float(np.max(np.abs(grad - expected))))
        checked += 1
    assert worst < 1e-6


def test_gradient_singular_on_boundary():
    params = ModelParams(v=0.1, w=0.2)
    with pytest.raises(SingularDerivativeError):
        classical_gradient(CanonicalCoords(0.0, 0.5), params)
    with pytest.raises(SingularDerivativeError):
        classical_gradient(CanonicalCoords(0.5, 0.5), params)
