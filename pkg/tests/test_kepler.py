import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from darboux.catalog import sample_ellipse
from darboux.errors import DarbouxError, InvalidElementsError, NonEllipticError
from darboux.kepler import (
    DelaunayElements,
    OrbitalElements,
    cartesian_to_delaunay,
    cartesian_to_elements,
    delaunay_to_cartesian,
    delaunay_to_elements,
    elements_to_cartesian,
    elements_to_delaunay,
    keplerian_energy,
    mean_motion,
    solve_kepler,
)

from oracles import angle_diff, kepler_bisection, two_body_energy

# eccentric anomaly for M = 1, e = 0.5 from a 40-digit bisection
E_M1_E05 = 1.4987011335178483


def random_elements(rng):
    return OrbitalElements(
        a=rng.uniform(0.5, 3.0),
        e=rng.uniform(0.05, 0.9),
        i=np.arccos(rng.uniform(-0.95, 0.95)),
        omega=rng.uniform(0, 2 * np.pi),
        Omega=rng.uniform(0, 2 * np.pi),
        mean_anomaly=rng.uniform(0, 2 * np.pi),
    )


# -- Kepler's equation ----------------------------------------------------------


def test_kepler_fixed_points():
    assert solve_kepler(1.0, 0.0) == 1.0
    assert solve_kepler(np.pi, 0.5) == pytest.approx(np.pi, abs=1e-15)


def test_kepler_against_bisection_oracle():
    assert kepler_bisection(1.0, 0.5) == pytest.approx(E_M1_E05, abs=1e-15)
    assert abs(solve_kepler(1.0, 0.5) - E_M1_E05) < 1e-14


def test_kepler_residual_grid():
    worst = 0.0
    for e in np.linspace(0.0, 0.99, 40):
        for M in np.linspace(0.0, 2 * np.pi, 25, endpoint=False):
            E = solve_kepler(M, e)
            r = E - e * np.sin(E) - M
            worst = max(worst, abs((r + np.pi) % (2 * np.pi) - np.pi))
    assert worst < 1e-13


@settings(max_examples=200)
@given(st.floats(-50, 50), st.floats(0, 0.999))
def test_kepler_residual_property(M, e):
    E = solve_kepler(M, e)
    assert 0 <= E < 2 * np.pi
    assert angle_diff(E - e * np.sin(E), M) < 1e-13


@pytest.mark.parametrize("e", [-0.1, 1.0, 1.5, np.nan])
def test_kepler_rejects_bad_eccentricity(e):
    with pytest.raises(DarbouxError):
        solve_kepler(1.0, e)


# -- Cartesian <-> elements ---------------------------------------------------


def test_circular_equatorial_elements():
    el = cartesian_to_elements([1, 0, 0], [0, 1, 0], 1.0, 1.0)
    assert el.a == pytest.approx(1.0)
    assert el.e == pytest.approx(0.0, abs=1e-15)
    assert el.i == pytest.approx(0.0)
    assert el.circular and el.horizontal


def test_hyperbolic_is_rejected():
    with pytest.raises(NonEllipticError):
        cartesian_to_elements([1, 0, 0], [0, 2, 0], 1.0, 1.0)


def test_elements_to_cartesian_examples():
    Q, P = elements_to_cartesian(OrbitalElements(1, 0, 0, 0, 0, 0), 1.0, 1.0)
    np.testing.assert_allclose(Q, [1, 0, 0], atol=1e-15)
    np.testing.assert_allclose(P, [0, 1, 0], atol=1e-15)
    Q, P = elements_to_cartesian(OrbitalElements(1, 0, np.pi / 2, 0, 0, 0), 1.0, 1.0)
    np.testing.assert_allclose(Q, [1, 0, 0], atol=1e-15)
    np.testing.assert_allclose(P, [0, 0, 1], atol=1e-15)


def test_elements_round_trip(rng):
    for _ in range(200):
        el = random_elements(rng)
        mu, mgrav = rng.uniform(0.3, 3.0, size=2)
        back = cartesian_to_elements(*elements_to_cartesian(el, mu, mgrav), mu, mgrav)
        assert back.a == pytest.approx(el.a, rel=1e-10)
        assert back.e == pytest.approx(el.e, abs=1e-10)
        assert back.i == pytest.approx(el.i, abs=1e-10)
        for name in ("omega", "Omega", "mean_anomaly"):
            assert angle_diff(getattr(back, name), getattr(el, name)) < 1e-10


def test_energy_matches_semi_major_axis(rng):
    for _ in range(100):
        el = random_elements(rng)
        mu, mgrav = rng.uniform(0.3, 3.0, size=2)
        Q, P = elements_to_cartesian(el, mu, mgrav)
        assert two_body_energy(Q, P, mu, mgrav) == pytest.approx(-mu * mgrav / (2 * el.a), rel=1e-12)


def test_invalid_elements():
    with pytest.raises(InvalidElementsError):
        OrbitalElements(-1, 0.1, 0, 0, 0, 0)
    with pytest.raises(InvalidElementsError):
        OrbitalElements(1, 1.1, 0, 0, 0, 0)
    with pytest.raises(InvalidElementsError):
        DelaunayElements(1.0, 0, 1.5, 0, 0, 0)


# -- Delaunay -----------------------------------------------------------------


def test_delaunay_substitution():
    d = elements_to_delaunay(OrbitalElements(4, np.sqrt(3) / 2, np.pi / 3, 0.1, 0.2, 0.3), 1.0, 1.0)
    assert (d.L, d.G, d.H) == pytest.approx((2.0, 1.0, 0.5), abs=1e-14)
    d = elements_to_delaunay(OrbitalElements(1, 0, 0, 0, 0, 0), 1.0, 1.0)
    assert (d.L, d.G, d.H) == pytest.approx((1.0, 1.0, 1.0), abs=1e-15)


@settings(max_examples=100)
@given(st.floats(0.2, 5), st.floats(0.05, 0.999), st.floats(-0.999, 0.999), st.floats(0.3, 3), st.floats(0.3, 3))
def test_delaunay_inverts_to_elements(L, g_ratio, h_ratio, mu, mgrav):
    G = g_ratio * L
    H = h_ratio * G
    el = delaunay_to_elements(DelaunayElements(L, 0.1, G, 0.2, H, 0.3), mu, mgrav)
    assert el.a == pytest.approx(L**2 / (mu**2 * mgrav), rel=1e-12)
    assert el.e == pytest.approx(np.sqrt(1 - g_ratio**2), rel=1e-12, abs=1e-12)
    assert el.i == pytest.approx(np.arccos(h_ratio), abs=1e-12)


def test_cartesian_delaunay_round_trip(rng):
    for _ in range(100):
        mu, mgrav = rng.uniform(0.5, 2.0, size=2)
        Q, P = sample_ellipse(rng, mu, mgrav)
        d = cartesian_to_delaunay(Q, P, mu, mgrav)
        Q2, P2 = delaunay_to_cartesian(d, mu, mgrav)
        scale = max(1.0, np.max(np.abs(np.concatenate([Q, P]))))
        assert np.max(np.abs(np.concatenate([Q2 - Q, P2 - P]))) / scale < 1e-10


def test_keplerian_energy_and_mean_motion():
    assert keplerian_energy(1.0, 1.0, 1.0) == -0.5
    assert mean_motion(1.0, 1.0, 1.0) == 1.0
    for L, mu, mgrav in [(0.7, 1.3, 0.8), (2.0, 0.5, 2.5)]:
        h = 1e-5 * L
        fd = (keplerian_energy(L + h, mu, mgrav) - keplerian_energy(L - h, mu, mgrav)) / (2 * h)
        assert fd == pytest.approx(mean_motion(L, mu, mgrav), rel=1e-8)


def test_keplerian_energy_equals_cartesian(rng):
    for _ in range(100):
        el = random_elements(rng)
        mu, mgrav = rng.uniform(0.3, 3.0, size=2)
        Q, P = elements_to_cartesian(el, mu, mgrav)
        K = keplerian_energy(elements_to_delaunay(el, mu, mgrav).L, mu, mgrav)
        assert K == pytest.approx(two_body_energy(Q, P, mu, mgrav), rel=1e-12)
