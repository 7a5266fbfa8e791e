import math

import numpy as np
import pytest
from scipy.integrate import quad

from quadsuite import (
    DomainError,
    IntervalSet,
    coherent_state,
    commutator_block,
    complementarity_summary,
    gaussian_pure_state,
    number_state,
    quadrature_density,
    quadrature_matrix,
    quadrature_moment,
    quadrature_probability,
    rotate_state,
    trace_pair,
    uncertainty_product,
    vacuum_state,
    weyl_relation_deviation,
)

UNIT = IntervalSet.of((0.0, 1.0))


def test_matrix_entries():
    m = quadrature_matrix(0.7, 5).matrix
    ns = np.arange(4)
    np.testing.assert_allclose(
        np.diag(m, 1), np.exp(-0.7j) * np.sqrt((ns + 1) / 2.0), atol=1e-15
    )
    np.testing.assert_allclose(m, m.conj().T, atol=1e-15)


def test_zero_angle_is_position_and_half_pi_is_momentum():
    q = quadrature_matrix(0.0, 4).matrix
    p = quadrature_matrix(math.pi / 2.0, 4).matrix
    assert np.max(np.abs(q.imag)) < 1e-15
    np.testing.assert_allclose(p, 1j * (np.tril(q, -1) - np.triu(q, 1)), atol=1e-15)


def test_coherent_density_is_shifted_gaussian():
    alpha = 0.9 - 0.4j
    st = coherent_state(alpha, 50)
    theta = 0.6
    xs = np.linspace(-5.0, 5.0, 101)
    mean = math.sqrt(2.0) * (alpha * np.exp(-1j * theta)).real
    ref = np.exp(-((xs - mean) ** 2)) / math.sqrt(math.pi)
    np.testing.assert_allclose(quadrature_density(st, theta, xs), ref, atol=1e-9)


@pytest.mark.parametrize("n", [0, 1, 3])
def test_number_density_angle_free(n):
    from quadsuite import hermite_function

    st = number_state(n, 10)
    xs = np.linspace(-4.0, 4.0, 33)
    ref = hermite_function(n, xs) ** 2
    for theta in (0.0, 0.8, 2.5):
        np.testing.assert_allclose(quadrature_density(st, theta, xs), ref, atol=1e-13)


def test_density_covariance_under_rotation(rng, random_pure):
    st = random_pure(rng, 6, 10)
    xs = np.linspace(-4.0, 4.0, 21)
    phi, theta = 0.5, 1.2
    np.testing.assert_allclose(
        quadrature_density(rotate_state(st, phi), theta + phi, xs),
        quadrature_density(st, theta, xs),
        atol=1e-13,
    )


def test_probability_normalization(rng, random_pure):
    st = random_pure(rng, 8, 12)
    assert abs(quadrature_probability(st, 0.9, IntervalSet.full_line()) - 1.0) < 1e-12
    p_half = quadrature_probability(st, 0.9, IntervalSet.of((0.0, math.inf)))
    p_rest = quadrature_probability(st, 0.9, IntervalSet.of((-math.inf, 0.0)))
    assert abs(p_half + p_rest - 1.0) < 1e-12


def test_moment_against_integral_oracle(rng, random_pure):
    st = random_pure(rng, 5, 9)
    theta = 0.4
    for k in (1, 2, 3):
        ref, _ = quad(
            lambda x: x**k * quadrature_density(st, theta, np.array([x]))[0],
            -9.0,
            9.0,
            limit=300,
        )
        assert abs(quadrature_moment(st, theta, k) - ref) < 1e-9


def test_number_state_moments():
    st = number_state(2, 12)
    assert abs(quadrature_moment(st, 1.1, 1)) < 1e-13
    assert abs(quadrature_moment(st, 1.1, 2) - 2.5) < 1e-12


def test_commutator_block_is_scalar():
    for theta in (0.3, math.pi / 2):
        block = commutator_block(theta, 25)
        target = 1j * math.sin(theta) * np.eye(23)
        assert np.max(np.abs(block - target)) < 1e-13


def test_commutator_needs_room():
    with pytest.raises(DomainError):
        commutator_block(0.5, 2)


def test_uncertainty_bound_random_states(rng, random_pure):
    theta = 1.1
    bound = math.sin(theta) ** 2 / 4.0
    for _ in range(100):
        st = random_pure(rng, 6, 12)
        assert uncertainty_product(st, theta) >= bound - 1e-9


def test_uncertainty_bound_attained_by_gaussian():
    theta = math.pi / 4
    var_q = math.sin(theta) / 2.0
    cov = -var_q / math.tan(theta)
    st = gaussian_pure_state(var_q, cov, 60)
    product = uncertainty_product(st, theta)
    assert abs(product / (math.sin(theta) ** 2 / 4.0) - 1.0) < 1e-6


def test_trace_pair_converges_from_above():
    limit = 1.0 / (2.0 * math.pi)
    vals = [trace_pair(UNIT, UNIT, math.pi / 2.0, d) for d in (50, 100, 200)]
    assert vals[0] > vals[1] > vals[2] > limit
    assert abs(vals[2] - limit) / limit < 0.02


def test_trace_pair_theta_symmetry():
    a = trace_pair(UNIT, UNIT, 0.9, 60)
    b = trace_pair(UNIT, UNIT, -0.9, 60)
    assert abs(a - b) < 1e-12


@pytest.mark.parametrize(
    "bad",
    [
        dict(X=IntervalSet.full_line(), Y=UNIT, theta=1.0, dim=20),
        dict(X=UNIT, Y=UNIT, theta=0.0, dim=20),
        dict(X=UNIT, Y=UNIT, theta=1.0, dim=500),
        dict(X=UNIT, Y=UNIT, theta=1.0, dim=20, inner_dim=10),
    ],
)
def test_trace_pair_rejects(bad):
    with pytest.raises(DomainError):
        trace_pair(**bad)


def test_weyl_relation_small_deviation():
    assert weyl_relation_deviation(0.5, -0.3, 60) < 1e-8
    assert weyl_relation_deviation(0.0, 0.0, 10) < 1e-15


def test_summary_is_thin_wrapper():
    summary = complementarity_summary(60, 1.0)
    assert summary["trace_estimate"] == trace_pair(UNIT, UNIT, 1.0, 60)
    assert summary["weyl_deviation"] == weyl_relation_deviation(0.5, 0.5, 60)
    assert abs(summary["uncertainty_attained"] - summary["uncertainty_bound"]) < 1e-3
    assert summary["trace_rel_error"] < 0.05


def test_vacuum_density_rotation_invariant():
    st = vacuum_state(6)
    xs = np.linspace(-3.0, 3.0, 13)
    ref = np.exp(-(xs**2)) / math.sqrt(math.pi)
    for theta in (0.0, 0.785398, 2.0):
        np.testing.assert_allclose(quadrature_density(st, theta, xs), ref, atol=1e-14)
