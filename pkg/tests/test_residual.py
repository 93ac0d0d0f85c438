"""Residual minimization over image cones and separating vectors."""

import numpy as np
import pytest

from conedual.cones import generators, orthant, sample_members, wedge
from conedual.linops import OperatorSpec, pairing, weighted_quadrature
from conedual.residual import residual_minimize, separating_vector, variational_check

I2 = OperatorSpec(matrix=np.eye(2))


def grid_residual_min(A, cone, b, upper=3.0, step=1e-3):
    """Brute-force oracle: exact min of ||A G u - b||^2 over the coefficient
    grid [0, upper]^2, reduced column-wise by 1-D convexity."""
    M = A.matrix @ generators(cone)
    u1 = np.arange(0.0, upper + step / 2, step)
    m0, m1 = M[:, 0], M[:, 1]
    a22 = float(m1 @ m1)
    base = np.outer(u1, m0) - b
    const = np.einsum("ij,ij->i", base, base)
    lin = base @ m1
    best = np.inf
    for i in range(u1.size):
        if a22 > 1e-300:
            vertex = -lin[i] / a22
            snapped = np.floor(vertex / step) * step
            cand = np.unique(np.clip([snapped, snapped + step, 0.0, upper], 0.0, upper))
        else:
            cand = np.array([0.0, upper])
        vals = const[i] + 2.0 * lin[i] * cand + a22 * cand**2
        best = min(best, float(vals.min()))
    return best


def test_b_inside_image_cone():
    res = residual_minimize(I2, np.array([1.0, 1.0]), orthant(2))
    np.testing.assert_allclose(res.gamma, [1.0, 1.0], atol=1e-10)
    assert res.value <= 1e-20


def test_projection_value_one():
    b = np.array([-1.0, 0.0])
    oracle = grid_residual_min(I2, orthant(2), b)
    assert oracle == pytest.approx(1.0, abs=1e-5)
    res = residual_minimize(I2, b, orthant(2))
    np.testing.assert_allclose(res.gamma, [0.0, 0.0], atol=1e-12)
    assert res.value == pytest.approx(oracle, abs=1e-5)


def test_projection_value_five():
    b = np.array([-1.0, -2.0])
    oracle = grid_residual_min(I2, orthant(2), b)
    assert oracle == pytest.approx(5.0, abs=1e-5)
    res = residual_minimize(I2, b, orthant(2))
    assert res.value == pytest.approx(oracle, abs=1e-5)


def test_preimage_representation():
    rng = np.random.default_rng(83)
    for _ in range(100):
        a = OperatorSpec(matrix=rng.uniform(-1, 1, size=(3, 3)))
        cone = orthant(3)
        b = rng.uniform(-1, 1, size=3)
        res = residual_minimize(a, b, cone)
        assert np.all(res.coefficients >= -1e-12)
        np.testing.assert_allclose(res.gamma, a.matrix @ generators(cone) @ res.coefficients, atol=1e-12)
        assert res.value >= 0.0


def test_variational_check_at_minimizer():
    b = np.array([-1.0, 0.0])
    gamma = np.array([0.0, 0.0])
    rng = np.random.default_rng(89)
    samples = sample_members(orthant(2), 1000, rng)
    assert variational_check(gamma, b, samples, tol=1e-8)


def test_variational_check_trivial_when_gamma_is_b():
    rng = np.random.default_rng(97)
    samples = sample_members(orthant(2), 100, rng)
    assert variational_check(np.array([0.5, 0.5]), np.array([0.5, 0.5]), samples, tol=0.0)


def test_variational_check_rejects_non_minimizer():
    # gamma' = (1, 0) for b = (-1, 0): the sample x = 0 witnesses
    # <gamma' - b, x - gamma'> = <(2, 0), (-1, 0)> = -2 < 0.
    assert not variational_check(np.array([1.0, 0.0]), np.array([-1.0, 0.0]), [np.zeros(2)], tol=1e-8)


def test_separating_vector_example():
    alpha = separating_vector(I2, np.array([-1.0, 0.0]), orthant(2))
    np.testing.assert_allclose(alpha, [1.0, 0.0], atol=1e-10)
    assert separating_vector(I2, np.array([1.0, 1.0]), orthant(2)) is None


def test_separating_vector_degenerate_image():
    # C_A is the nonnegative x-axis; b below it separates along +y.
    a = OperatorSpec(matrix=np.array([[1.0], [0.0]]))
    b = np.array([0.0, -1.0])
    alpha = separating_vector(a, b, orthant(1))
    np.testing.assert_allclose(alpha, [0.0, 1.0], atol=1e-12)
    assert pairing(None, alpha, b) < 0
    image = a.matrix.T @ alpha
    assert np.all(image >= -1e-12)


def test_separator_validity_properties():
    rng = np.random.default_rng(101)
    found = 0
    while found < 50:
        dim_y = int(rng.integers(2, 5))
        dim_x = int(rng.integers(2, 5))
        a = OperatorSpec(matrix=rng.uniform(-1, 1, size=(dim_y, dim_x)))
        b = rng.uniform(-1, 1, size=dim_y)
        cone = orthant(dim_x)
        alpha = separating_vector(a, b, cone, tol=1e-8)
        if alpha is None:
            continue
        found += 1
        g = generators(cone)
        for j in range(g.shape[1]):
            assert pairing(None, a.matrix.T @ alpha, g[:, j]) >= -1e-9
        assert pairing(None, alpha, b) <= -1e-8


def test_optimality_certified_by_sampling():
    rng = np.random.default_rng(103)
    for _ in range(20):
        a = OperatorSpec(matrix=rng.uniform(-1, 1, size=(2, 2)))
        cone = wedge(rng.uniform(0.3, 1.2))
        b = rng.uniform(-1, 1, size=2)
        res = residual_minimize(a, b, cone)
        members = sample_members(cone, 1000, rng)
        images = members @ a.matrix.T
        assert variational_check(res.gamma, b, images, tol=1e-8)


def test_perturbed_minimizers_fail_variational_check():
    rng = np.random.default_rng(107)
    for _ in range(20):
        a = OperatorSpec(matrix=rng.uniform(-1, 1, size=(2, 2)))
        cone = orthant(2)
        b = rng.uniform(-1, 1, size=2) - 2.0  # push b out of the image cone
        res = residual_minimize(a, b, cone)
        if res.value < 1e-10:
            continue
        g = a.matrix @ generators(cone)
        samples = [res.gamma] + list(sample_members(cone, 200, rng) @ a.matrix.T)
        for j in range(g.shape[1]):
            d = g[:, j]
            norm = np.linalg.norm(d)
            if norm < 1e-12:
                continue
            perturbed = res.gamma + 1e-3 * d / norm
            assert not variational_check(perturbed, b, samples, tol=1e-8)


def test_scale_coherence():
    rng = np.random.default_rng(109)
    checked = 0
    while checked < 30:
        a = OperatorSpec(matrix=rng.uniform(-1, 1, size=(3, 2)))
        b = rng.uniform(-1, 1, size=3)
        res = residual_minimize(a, b, orthant(2))
        if res.value < 1e-6:
            continue
        checked += 1
        for mu in (0.5, 2.0, 7.5):
            scaled = residual_minimize(a, mu * b, orthant(2))
            assert scaled.value == pytest.approx(mu**2 * res.value, rel=1e-6)


def test_weighted_pairing_residual():
    # Row weights change the projection: check the value against the
    # scaled Euclidean problem solved independently.
    w = np.array([4.0, 1.0])
    p = weighted_quadrature(w)
    a = OperatorSpec(matrix=np.eye(2), pairing_codomain=p)
    b = np.array([-1.0, -1.0])
    res = residual_minimize(a, b, orthant(2), p=p)
    assert res.value == pytest.approx(4.0 * 1.0 + 1.0 * 1.0)
