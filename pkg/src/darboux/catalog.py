"""Shipped charts, seeded samplers of nondegenerate points, and verification sweeps.

Every sampler draws from a ``numpy.random.Generator`` and rejects points
whose degeneracy margins (eccentricity, sin of inclinations, coplanarity,
vertical C, triangle slack) fall below ``margin``.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .deprit import deprit_chart
from .jacobi import JacobiState, anchored, jacobi_chart, reduced_masses
from .kepler import delaunay_chart, delaunay_core, delaunay_to_cartesian, DelaunayElements
from .kepler import orbit_axes, place_orbit, planar_delaunay_chart
from .phasespace import CERTIFY_TOL, Chart, PhaseState, compose_charts, flatten, pack, unpack
from .symcheck import SymplecticReport, certify_symplectic, measure_d_factor

DEFAULT_MARGIN = 0.05
MAX_REJECTIONS = 10_000


def random_rotation(rng) -> np.ndarray:
    """Haar-random proper rotation matrix."""
    A = rng.normal(size=(3, 3))
    Qm, R = np.linalg.qr(A)
    Qm = Qm * np.sign(np.diag(R))
    if np.linalg.det(Qm) < 0:
        Qm[:, 0] = -Qm[:, 0]
    return Qm


def rotation_about(axis, angle) -> np.ndarray:
    """Rodrigues rotation matrix, counterclockwise about ``axis``."""
    k = np.asarray(axis, dtype=float)
    k = k / np.linalg.norm(k)
    K = np.array([[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]])
    return np.eye(3) + np.sin(angle) * K + (1 - np.cos(angle)) * K @ K


def sample_masses(rng, n_bodies: int) -> np.ndarray:
    return rng.uniform(0.5, 2.0, size=n_bodies)


def sample_ellipse(rng, mu, mgrav, a_range=(0.6, 1.6), margin=DEFAULT_MARGIN, planar=False):
    """(Q, P) of a nondegenerate bound orbit."""
    a = rng.uniform(*a_range)
    e = rng.uniform(max(margin, 0.05), 0.7)
    if planar:
        inc, Omega = 0.0, 0.0
    else:
        inc = np.arcsin(rng.uniform(margin, 1.0))
        if rng.uniform() < 0.5:
            inc = np.pi - inc
        Omega = rng.uniform(0, 2 * np.pi)
    chat, _, ehat = orbit_axes(inc, Omega, rng.uniform(0, 2 * np.pi))
    return place_orbit(a, e, rng.uniform(0, 2 * np.pi), chat, ehat, mu, mgrav)


def _sin_between(u, v):
    return np.linalg.norm(np.cross(u, v)) / (np.linalg.norm(u) * np.linalg.norm(v))


def deprit_margin(j: JacobiState) -> float:
    """Smallest degeneracy margin of the Deprit construction at ``j``."""
    C = np.cross(j.Q, j.P)
    S = np.cumsum(C, axis=0)
    mu, mgrav = j.mu, j.mgrav
    margins = []
    for i in range(j.n_pairs):
        v = j.P[i] / mu[i]
        evec = np.cross(v, C[i] / mu[i]) / mgrav[i] - j.Q[i] / np.linalg.norm(j.Q[i])
        margins.append(np.linalg.norm(evec))
    axis = np.array([0.0, 0.0, 1.0])
    for m in range(j.n_pairs, 1, -1):
        margins.append(_sin_between(axis, S[m - 1]))
        margins.append(_sin_between(S[m - 1], S[m - 2]))
        margins.append(_sin_between(S[m - 1], C[m - 1]))
        margins.append(_sin_between(C[m - 1], S[m - 2]))
        axis = S[m - 1]
    return float(min(margins))


def sample_jacobi_state(rng, n_bodies: int, margin=DEFAULT_MARGIN, masses=None) -> JacobiState:
    """Random hierarchical Jacobi state with every Deprit margin above ``margin``."""
    for _ in range(MAX_REJECTIONS):
        m = sample_masses(rng, n_bodies) if masses is None else np.asarray(masses, dtype=float)
        mu, mgrav = reduced_masses(m)
        P, Q = [], []
        for i in range(n_bodies - 1):
            q, p = sample_ellipse(rng, mu[i], mgrav[i], a_range=(0.7 * 2.5**i, 1.3 * 2.5**i), margin=margin)
            P.append(p)
            Q.append(q)
        j = JacobiState(m, P, Q)
        if deprit_margin(j) > margin:
            return j
    raise RuntimeError("could not sample a nondegenerate Jacobi state")


def sample_cartesian_state(rng, n_bodies: int) -> PhaseState:
    """Random Cartesian state with zero total momentum."""
    m = sample_masses(rng, n_bodies)
    q = rng.normal(size=(n_bodies, 3))
    p = rng.normal(size=(n_bodies, 3))
    p -= p.mean(axis=0)
    return PhaseState(m, q, p)


def with_laplace_direction(j: JacobiState, direction) -> JacobiState:
    """Rotate ``j`` rigidly so that its total angular momentum points along ``direction``."""
    C = np.cross(j.Q, j.P).sum(axis=0)
    u = C / np.linalg.norm(C)
    d = np.asarray(direction, dtype=float)
    d = d / np.linalg.norm(d)
    axis = np.cross(u, d)
    s = np.linalg.norm(axis)
    if s < 1e-15:
        R = np.eye(3) if u @ d > 0 else rotation_about(np.cross(u, np.eye(3)[np.argmin(np.abs(u))]), np.pi)
    else:
        R = rotation_about(axis, np.arctan2(s, u @ d))
    return j.rotated(R)


# (a, e, mean anomaly, i, Omega, omega) of the two Jacobi ellipses of the demo state
DEMO_MASSES = (1.0, 0.6, 0.3)
DEMO_ORBITS = ((1.0, 0.2, 0.3, 0.5, 0.4, 1.1), (4.0, 0.1, 2.0, 0.9, 2.2, 0.7))


def demo_state() -> PhaseState:
    """Hierarchical three-body state used by the invariance demo.

    Inner and outer orbits are inclined to each other and to the reference
    plane, so every Deprit variable is defined; the run stays far from close
    encounters for 10^4 steps of dt = 0.005.
    """
    from .jacobi import from_jacobi

    m = np.array(DEMO_MASSES)
    mu, mgrav = reduced_masses(m)
    P, Q = [], []
    for k, (a, e, M, inc, Om, om) in enumerate(DEMO_ORBITS):
        chat, _, ehat = orbit_axes(inc, Om, om)
        q, p = place_orbit(a, e, M, chat, ehat, mu[k], mgrav[k])
        P.append(p)
        Q.append(q)
    return from_jacobi(JacobiState(m, P, Q))


# -- composite and control charts -----------------------------------------------


def delaunay_system_chart(masses) -> Chart:
    """Reduced Jacobi vector -> Delaunay variables (L, l, G, g, H, h) of every pair."""
    masses = np.asarray(masses, dtype=float)
    n = masses.size - 1
    mu, mgrav = reduced_masses(masses)
    single = [delaunay_chart(mu[i], mgrav[i]) for i in range(n)]

    def forward(x):
        P, Q = unpack(x, n)
        return np.concatenate([delaunay_core(Q[i], P[i], mu[i], mgrav[i]) for i in range(n)])

    def inverse(y):
        P, Q = np.empty((n, 3)), np.empty((n, 3))
        for i in range(n):
            d = DelaunayElements(*(float(v) for v in y[6 * i : 6 * i + 6]))
            Q[i], P[i] = delaunay_to_cartesian(d, mu[i], mgrav[i])
        return pack(P, Q)

    def in_domain(x):
        P, Q = unpack(x, n)
        return all(single[i].in_domain(np.concatenate([P[i], Q[i]])) for i in range(n))

    labels = tuple(f"{s}{i + 1}" for i in range(n) for s in ("L", "l", "G", "g", "H", "h"))
    return Chart(
        name=f"delaunay-system{n + 1}",
        dim=6 * n,
        forward=forward,
        inverse=inverse,
        in_domain=in_domain,
        pairing=tuple((2 * k, 2 * k + 1) for k in range(3 * n)),
        labels=labels,
        periodic=frozenset(range(1, 6 * n, 2)),
    )


def scale_pair(chart: Chart, label: str, factor: float) -> Chart:
    """Copy of ``chart`` with one target coordinate multiplied by ``factor``."""
    k = chart.index(label)

    def forward(x):
        y = np.array(chart.forward(x), copy=True)
        y[k] = y[k] * factor
        return y

    def inverse(y):
        y = np.array(y, dtype=float, copy=True)
        y[k] /= factor
        return chart.inverse(y)

    return Chart(
        name=f"{chart.name}-scaled",
        dim=chart.dim,
        forward=forward,
        inverse=inverse,
        in_domain=chart.in_domain,
        pairing=chart.pairing,
        labels=chart.labels,
        periodic=chart.periodic,
        d_pair=chart.d_pair,
    )


def deprit_pipeline_chart(masses) -> Chart:
    """Cartesian bodies -> anchor plus Deprit variables, in one chart."""
    masses = np.asarray(masses, dtype=float)
    return compose_charts(jacobi_chart(masses), anchored(deprit_chart(masses), masses.size))


# -- named sweeps -------------------------------------------------------------


def _jacobi_sample(n_bodies):
    def sample(rng, margin):
        state = sample_cartesian_state(rng, n_bodies)
        return jacobi_chart(state.masses), flatten(state)

    return sample


def _delaunay_sample(rng, margin):
    mu, mgrav = rng.uniform(0.5, 2.0, size=2)
    Q, P = sample_ellipse(rng, mu, mgrav, margin=margin)
    return delaunay_chart(mu, mgrav), np.concatenate([P, Q])


def _planar_sample(rng, margin):
    mu, mgrav = rng.uniform(0.5, 2.0, size=2)
    Q, P = sample_ellipse(rng, mu, mgrav, margin=margin, planar=True)
    return planar_delaunay_chart(mu, mgrav), np.array([P[0], P[1], Q[0], Q[1]])


def _deprit_sample(n_bodies):
    def sample(rng, margin):
        j = sample_jacobi_state(rng, n_bodies, margin)
        return deprit_chart(j.masses), j.flat()

    return sample


def _pipeline_sample(rng, margin):
    from .jacobi import from_jacobi

    j = sample_jacobi_state(rng, 3, margin)
    return deprit_pipeline_chart(j.masses), flatten(from_jacobi(j))


def _scaled_bad_sample(rng, margin):
    chart, x = _deprit_sample(3)(rng, margin)
    return scale_pair(chart, "Phi2", 2.0), x


SAMPLERS: dict[str, Callable] = {
    "jacobi3": _jacobi_sample(3),
    "jacobi4": _jacobi_sample(4),
    "delaunay-planar": _planar_sample,
    "delaunay": _delaunay_sample,
    "deprit3": _deprit_sample(3),
    "deprit4": _deprit_sample(4),
    "pipeline3": _pipeline_sample,
    "scaled-bad": _scaled_bad_sample,
}


def sample_points(name: str, points: int, seed: int, margin=DEFAULT_MARGIN):
    """Seeded list of (chart, point) pairs for the named sweep."""
    if name not in SAMPLERS:
        raise KeyError(name)
    rng = np.random.default_rng(seed)
    return [SAMPLERS[name](rng, margin) for _ in range(points)]


@dataclass(frozen=True)
class SweepResult:
    name: str
    seed: int
    tol: float
    reports: list
    d_values: list

    @property
    def worst_defect(self) -> float:
        return max(r.max_defect for r in self.reports)

    @property
    def worst_antisymmetry(self) -> float:
        return max(r.antisymmetry for r in self.reports)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)


def _evaluate(item, tol, scheme):
    chart, x = item
    report: SymplecticReport = certify_symplectic(chart, x, tol, scheme=scheme)
    d = measure_d_factor(chart, x, report) if chart.d_pair is not None else None
    return report, d


def run_sweep(name: str, points: int = 100, seed: int = 0, tol: float = CERTIFY_TOL,
              margin: float = DEFAULT_MARGIN, workers: int = 1, scheme: str = "auto") -> SweepResult:
    """Certify the named chart at ``points`` seeded random points.

    Points are drawn before any evaluation, so results do not depend on
    ``workers``.
    """
    items = sample_points(name, points, seed, margin)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda it: _evaluate(it, tol, scheme), items))
    else:
        results = [_evaluate(it, tol, scheme) for it in items]
    reports = [r for r, _ in results]
    d_values = [d for _, d in results if d is not None]
    return SweepResult(name, seed, tol, reports, d_values)

