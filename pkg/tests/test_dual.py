import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from darboux.dual import Dual, derivative, dual_jacobian, seed

xs = st.floats(-3, 3)


def test_arithmetic_rules():
    x = Dual(2.0, np.array([1.0]))
    y = Dual(3.0, np.array([0.5]))
    assert (x * y).grad[0] == 3.0 + 2.0 * 0.5
    assert (x / y).grad[0] == pytest.approx((1.0 * 3.0 - 2.0 * 0.5) / 9.0)
    assert (1.0 / x).grad[0] == pytest.approx(-0.25)
    assert (5.0 - x).grad[0] == -1.0
    assert (x**3).grad[0] == 12.0
    assert (-x).value == -2.0 and abs(-x).grad[0] == 1.0


def test_comparisons_use_values():
    x = Dual(1.0, np.array([5.0]))
    assert x < 2 and x <= 1.0 and x > 0.5 and x >= 1.0


@given(xs)
def test_elementary_functions(x):
    assert derivative(np.sin, x) == pytest.approx(np.cos(x), abs=1e-14)
    assert derivative(np.cos, x) == pytest.approx(-np.sin(x), abs=1e-14)
    assert derivative(lambda t: np.sqrt(t * t + 1), x) == pytest.approx(x / np.sqrt(x * x + 1), abs=1e-14)


@given(xs, st.floats(0.1, 3))
def test_arctan2_partials(y, x):
    f = lambda z: np.arctan2(z[0], z[1])
    J = dual_jacobian(lambda z: np.array([f(z)]), np.array([y, x]))
    r2 = x * x + y * y
    np.testing.assert_allclose(J[0], [x / r2, -y / r2], atol=1e-14)


def test_arctan2_on_negative_axis():
    # branch cut of the value, but the derivative is smooth across it
    J = dual_jacobian(lambda z: np.array([np.arctan2(z[0], z[1])]), np.array([0.0, -2.0]))
    np.testing.assert_allclose(J[0], [-0.5, 0.0], atol=1e-15)


def test_mod_keeps_the_derivative():
    assert derivative(lambda t: np.mod(3 * t, 2 * np.pi), 7.0) == 3.0
    assert derivative(lambda t: (3 * t) % (2 * np.pi), 7.0) == 3.0


def test_numpy_array_operations():
    A = np.array([[1.0, 2.0], [3.0, -1.0]])
    J = dual_jacobian(lambda z: A @ z, np.array([0.3, 0.4]))
    np.testing.assert_array_equal(J, A)
    J = dual_jacobian(lambda z: np.array([np.sum(z**2), np.sqrt(z @ z)]), np.array([3.0, 4.0]))
    np.testing.assert_allclose(J, [[6.0, 8.0], [0.6, 0.8]], atol=1e-15)


def test_cross_product_jacobian():
    from darboux.phasespace import cross3

    a, b = np.array([1.0, 2.0, 3.0]), np.array([-1.0, 0.5, 2.0])
    J = dual_jacobian(lambda z: cross3(z[:3], z[3:]), np.concatenate([a, b]))
    hat = lambda v: np.array([[0, -v[2], v[1]], [v[2], 0, -v[0]], [-v[1], v[0], 0]])
    np.testing.assert_allclose(J[:, :3], -hat(b), atol=1e-15)
    np.testing.assert_allclose(J[:, 3:], hat(a), atol=1e-15)


def test_seed_and_constant_outputs():
    s = seed([1.0, 2.0])
    np.testing.assert_array_equal(s[1].grad, [0.0, 1.0])
    J = dual_jacobian(lambda z: np.array([z[0], 4.0], dtype=object), np.array([1.0, 2.0]))
    np.testing.assert_array_equal(J, [[1.0, 0.0], [0.0, 0.0]])


def test_unsupported_ufunc_raises():
    with pytest.raises(TypeError):
        np.exp(Dual(1.0, np.ones(1)))
