"""Newtonian N-body flow, a kick-drift-kick leapfrog, and invariance monitors."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import CollisionError, DomainError, ZeroAngularMomentumError
from .kepler import DelaunayElements, mean_motion
from .phasespace import PhaseState, wrap_angle

COLLISION_FACTOR = 1e-8


def _pair_distances(q):
    diff = q[:, None, :] - q[None, :, :]
    return diff, np.linalg.norm(diff, axis=-1)


def _energy(masses, q, p, upper):
    _, dist = _pair_distances(q)
    mm = np.outer(masses, masses)
    return 0.5 * np.sum(np.sum(p**2, axis=1) / masses) - np.sum(mm[upper] / dist[upper])


def hamiltonian(state: PhaseState) -> float:
    """``F = 1/2 sum |p_j|^2 / m_j - sum_{j<k} m_j m_k / |q_j - q_k|``."""
    m = state.masses
    kinetic = 0.5 * np.sum(np.sum(state.p**2, axis=1) / m)
    potential = 0.0
    n = m.size
    for j in range(n):
        for k in range(j + 1, n):
            r = np.linalg.norm(state.q[j] - state.q[k])
            if r <= 0:
                raise CollisionError(f"bodies {j} and {k} collide")
            potential -= m[j] * m[k] / r
    return float(kinetic + potential)


def forces(masses, q) -> np.ndarray:
    """``-dF/dq`` for every body, shape (N, 3)."""
    diff, dist = _pair_distances(q)
    np.fill_diagonal(dist, np.inf)
    mm = np.outer(masses, masses)
    return -np.einsum("jk,jkc->jc", mm / dist**3, diff)


@dataclass(frozen=True)
class Trajectory:
    masses: np.ndarray
    times: np.ndarray
    q: np.ndarray
    p: np.ndarray
    energy: np.ndarray
    C: np.ndarray

    def __len__(self):
        return self.times.size

    @property
    def C_hat(self) -> np.ndarray:
        return self.C / np.linalg.norm(self.C, axis=1, keepdims=True)

    def state(self, k: int) -> PhaseState:
        return PhaseState(self.masses, self.q[k], self.p[k])

    def states(self):
        for k in range(len(self)):
            yield self.state(k)


def integrate(state: PhaseState, dt: float, steps: int) -> Trajectory:
    """Fixed-step kick-drift-kick leapfrog; samples every step, t = 0 included.

    Raises CollisionError (carrying the partial trajectory) once some pair
    distance drops below 1e-8 times the initial minimum distance.
    """
    if not dt > 0:
        raise DomainError("dt must be positive")
    if steps < 0:
        raise DomainError("steps must be non-negative")
    m = state.masses
    q = state.q.copy()
    p = state.p.copy()
    upper = np.triu_indices(m.size, 1)
    _, dist = _pair_distances(q)
    threshold = COLLISION_FACTOR * dist[upper].min()

    qs = np.empty((steps + 1,) + q.shape)
    ps = np.empty_like(qs)
    energy = np.empty(steps + 1)
    C = np.empty((steps + 1, 3))

    def record(k):
        qs[k] = q
        ps[k] = p
        energy[k] = _energy(m, q, p, upper)
        C[k] = np.cross(q, p).sum(axis=0)

    def partial(k):
        return Trajectory(m, dt * np.arange(k), qs[:k].copy(), ps[:k].copy(), energy[:k].copy(), C[:k].copy())

    record(0)
    f = forces(m, q)
    half = 0.5 * dt
    for k in range(1, steps + 1):
        p = p + half * f
        q = q + dt * p / m[:, None]
        _, dist = _pair_distances(q)
        if dist[upper].min() < threshold:
            raise CollisionError(f"close encounter at step {k}; integration aborted", partial(k))
        f = forces(m, q)
        p = p + half * f
        record(k)
    return Trajectory(m, dt * np.arange(steps + 1), qs, ps, energy, C)


def propagate_kepler(d: DelaunayElements, mu: float, mgrav: float, t: float) -> DelaunayElements:
    """Exact Kepler flow in Delaunay variables: only the mean anomaly moves."""
    n = mean_motion(d.L, mu, mgrav)
    return DelaunayElements(d.L, float(wrap_angle(d.l + n * t)), d.G, d.g, d.H, d.h, d.circular, d.horizontal)


@dataclass(frozen=True)
class InvarianceReport:
    max_angle: float
    C_norm_drift: float
    trajectory: Trajectory
    deprit: Optional[np.ndarray]
    deprit_labels: tuple
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_angle < self.tol

    def spread(self, label: str) -> float:
        """Peak-to-peak variation of one Deprit variable along the run (angles unwrapped)."""
        k = self.deprit_labels.index(label)
        series = self.deprit[:, k]
        if label[0].islower():
            series = np.unwrap(series)
        return float(series.max() - series.min())


def _angle_between(u, v):
    return np.arctan2(np.linalg.norm(np.cross(u, v), axis=-1), np.sum(u * v, axis=-1))


def invariance_demo(state: PhaseState, dt: float, steps: int, direction=None, tol: float = 1e-10) -> InvarianceReport:
    """Integrate and measure how far the direction of C wanders.

    For three or more bodies the Deprit variables are recomputed at every
    sample; (Phi1, Phi2, phi2) depend only on C and must stay put.
    """
    from .deprit import deprit_core, deprit_labels
    from .jacobi import momenta_to_jacobi, positions_to_jacobi, reduced_masses

    C0 = state.angular_momentum()
    if np.linalg.norm(C0) == 0:
        raise ZeroAngularMomentumError("total angular momentum vanishes")
    if direction is None:
        direction = C0
    direction = np.asarray(direction, dtype=float)
    direction = direction / np.linalg.norm(direction)
    if _angle_between(C0, direction) > tol:
        raise DomainError("initial angular momentum is not parallel to the requested direction")
    traj = integrate(state, dt, steps)
    angles = _angle_between(traj.C, direction[None, :])
    norms = np.linalg.norm(traj.C, axis=1)
    drift = float(np.max(np.abs(norms - norms[0])) / norms[0])
    deprit = None
    labels = ()
    if state.n_bodies >= 3:
        labels = deprit_labels(state.n_bodies - 1)
        m = state.masses
        mu, mgrav = reduced_masses(m)
        deprit = np.array([
            deprit_core(momenta_to_jacobi(m, p)[1:], positions_to_jacobi(m, q)[1:], mu, mgrav)
            for q, p in zip(traj.q, traj.p)
        ])
    return InvarianceReport(float(angles.max()), drift, traj, deprit, labels, tol)
