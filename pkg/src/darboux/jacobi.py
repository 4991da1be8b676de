"""Reduction of the translation symmetry with hierarchical Jacobi coordinates.

Body positions map to fictitious-particle positions

    Q_0 = q_0,    Q_i = q_i - (m_0 q_0 + ... + m_{i-1} q_{i-1}) / eta_{i-1},

with ``eta_i = m_0 + ... + m_i``. Momenta transform with the inverse
transpose, so that P_0 is the total momentum and, for three bodies,
P_1 = p_1 + sigma_1 p_2 and P_2 = p_2 with sigma_1 = m_1 / (m_0 + m_1).
The pair (P_0, Q_0) is kept as an :class:`Anchor` so the map is lossless.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CollisionError, DimensionError, DomainError
from .phasespace import Chart, PhaseState, pack, require_finite, unpack


def partial_masses(masses) -> np.ndarray:
    """``eta_i = m_0 + ... + m_i``."""
    return np.cumsum(np.asarray(masses, dtype=float))


def reduced_masses(masses):
    """Return ``(mu, mgrav)`` for the N-1 Jacobi pairs.

    ``mu_i = m_i eta_{i-1} / eta_i`` and ``mgrav_i = eta_i``, i = 1..N-1, so
    that pair i has Keplerian part ``|P_i|^2 / (2 mu_i) - mu_i mgrav_i / |Q_i|``.
    """
    m = np.asarray(masses, dtype=float)
    eta = partial_masses(m)
    mu = m[1:] * eta[:-1] / eta[1:]
    return mu, eta[1:]


@dataclass(frozen=True)
class Anchor:
    """The pair dropped by the reduction: total momentum and body-0 position."""

    P0: np.ndarray
    Q0: np.ndarray


@dataclass(frozen=True)
class JacobiState:
    """Jacobi pairs (P_i, Q_i), i = 1..N-1, together with the body masses."""

    masses: np.ndarray
    P: np.ndarray
    Q: np.ndarray

    def __post_init__(self):
        masses = np.array(self.masses, dtype=float).reshape(-1)
        P = np.array(self.P, dtype=float)
        Q = np.array(self.Q, dtype=float)
        n = masses.size - 1
        if n < 1:
            raise DimensionError("need at least two bodies")
        if P.shape != (n, 3) or Q.shape != (n, 3):
            raise DimensionError(f"expected Jacobi arrays of shape ({n}, 3)")
        for arr, what in ((masses, "masses"), (P, "P"), (Q, "Q")):
            require_finite(arr, what)
        if np.any(masses <= 0):
            raise DomainError("masses must be positive")
        for arr in (masses, P, Q):
            arr.flags.writeable = False
        object.__setattr__(self, "masses", masses)
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "Q", Q)

    @property
    def n_pairs(self) -> int:
        return self.masses.size - 1

    @property
    def mu(self) -> np.ndarray:
        return reduced_masses(self.masses)[0]

    @property
    def mgrav(self) -> np.ndarray:
        return reduced_masses(self.masses)[1]

    def flat(self) -> np.ndarray:
        return pack(self.P, self.Q)

    @classmethod
    def from_flat(cls, x, masses) -> "JacobiState":
        masses = np.asarray(masses, dtype=float)
        P, Q = unpack(np.asarray(x, dtype=float), masses.size - 1)
        return cls(masses, P, Q)

    def rotated(self, rotation) -> "JacobiState":
        R = np.asarray(rotation, dtype=float)
        return JacobiState(self.masses, self.P @ R.T, self.Q @ R.T)


def positions_to_jacobi(masses, q):
    """All N Jacobi positions (Q_0 first) from body positions, shape (N, 3)."""
    m = np.asarray(masses, dtype=float)
    eta = partial_masses(m)
    Q = np.empty_like(q)
    Q[0] = q[0]
    weighted = m[0] * q[0]
    for i in range(1, m.size):
        Q[i] = q[i] - weighted / eta[i - 1]
        weighted = weighted + m[i] * q[i]
    return Q


def jacobi_to_positions(masses, Q):
    m = np.asarray(masses, dtype=float)
    eta = partial_masses(m)
    q = np.empty_like(Q)
    q[0] = Q[0]
    weighted = m[0] * q[0]
    for i in range(1, m.size):
        q[i] = Q[i] + weighted / eta[i - 1]
        weighted = weighted + m[i] * q[i]
    return q


def momenta_to_jacobi(masses, p):
    """All N Jacobi momenta (P_0 = total momentum first)."""
    m = np.asarray(masses, dtype=float)
    eta = partial_masses(m)
    N = m.size
    P = np.empty_like(p)
    tail = np.zeros_like(p[0])  # sum_{i>j} P_i / eta_{i-1}
    for j in range(N - 1, 0, -1):
        P[j] = p[j] + m[j] * tail
        tail = tail + P[j] / eta[j - 1]
    P[0] = p[0] + m[0] * tail
    return P


def jacobi_to_momenta(masses, P):
    m = np.asarray(masses, dtype=float)
    eta = partial_masses(m)
    N = m.size
    p = np.empty_like(P)
    tail = np.zeros_like(P[0])
    for j in range(N - 1, 0, -1):
        p[j] = P[j] - m[j] * tail
        tail = tail + P[j] / eta[j - 1]
    p[0] = P[0] - m[0] * tail
    return p


def to_jacobi(state: PhaseState):
    """Return ``(JacobiState, Anchor)`` for a Cartesian phase state."""
    Q = positions_to_jacobi(state.masses, state.q)
    P = momenta_to_jacobi(state.masses, state.p)
    return JacobiState(state.masses, P[1:], Q[1:]), Anchor(P[0].copy(), Q[0].copy())


def from_jacobi(j: JacobiState, anchor: Anchor | None = None) -> PhaseState:
    """Invert :func:`to_jacobi`.

    Without an anchor the total momentum is zero and the barycenter sits at
    the origin.
    """
    if anchor is None:
        P0 = np.zeros(3)
        Q0 = np.zeros(3)
    else:
        P0 = np.asarray(anchor.P0, dtype=float)
        Q0 = np.asarray(anchor.Q0, dtype=float)
    q = jacobi_to_positions(j.masses, np.vstack([Q0, j.Q]))
    p = jacobi_to_momenta(j.masses, np.vstack([P0, j.P]))
    if anchor is None:
        q = q - j.masses @ q / j.masses.sum()
    return PhaseState(j.masses, q, p)


def reduced_hamiltonian(j: JacobiState, closed_form: bool = False) -> float:
    """Energy of the translation-reduced system (total momentum zero).

    By default the value is the Cartesian Hamiltonian pulled back through
    :func:`from_jacobi`. ``closed_form=True`` selects the explicit three-body
    expression in Jacobi variables.
    """
    if not closed_form:
        from .dynamics import hamiltonian

        return hamiltonian(from_jacobi(j))
    if j.n_pairs != 2:
        raise DimensionError("the closed form is only available for three bodies")
    m0, m1, m2 = j.masses
    sigma0 = m0 / (m0 + m1)
    sigma1 = m1 / (m0 + m1)
    mu1, mu2 = j.mu
    P1, P2 = j.P
    Q1, Q2 = j.Q
    r01 = np.linalg.norm(Q1)
    r02 = np.linalg.norm(Q2 + sigma1 * Q1)
    r12 = np.linalg.norm(Q2 - sigma0 * Q1)
    if min(r01, r02, r12) <= 0:
        raise CollisionError("collision in Jacobi configuration")
    kinetic = P1 @ P1 / (2 * mu1) + P2 @ P2 / (2 * mu2)
    return float(kinetic - m0 * m1 / r01 - m0 * m2 / r02 - m1 * m2 / r12)


def jacobi_chart(masses) -> Chart:
    """Lossless chart from Cartesian (p, q) of N bodies to (P_0..P_{N-1}, Q_0..Q_{N-1})."""
    m = np.asarray(masses, dtype=float)
    N = m.size
    dim = 6 * N

    def forward(x):
        p, q = unpack(x, N)
        return pack(momenta_to_jacobi(m, p), positions_to_jacobi(m, q))

    def inverse(y):
        P, Q = unpack(y, N)
        return pack(jacobi_to_momenta(m, P), jacobi_to_positions(m, Q))

    labels = tuple(f"P{i}{c}" for i in range(N) for c in "xyz") + tuple(
        f"Q{i}{c}" for i in range(N) for c in "xyz"
    )
    return Chart(
        name=f"jacobi{N}",
        dim=dim,
        forward=forward,
        inverse=inverse,
        in_domain=lambda x: True,
        pairing=tuple((k, 3 * N + k) for k in range(3 * N)),
        labels=labels,
    )


def anchored(chart: Chart, n_bodies: int) -> Chart:
    """Extend a chart on reduced Jacobi vectors to full Jacobi vectors.

    The anchor pair (P_0, Q_0) is passed through unchanged and placed in
    front of the inner chart's target: ``(P_0, Q_0, *inner)``.
    """
    N = n_bodies
    if chart.dim != 6 * (N - 1):
        raise DimensionError(f"{chart.name!r} does not act on {N - 1} Jacobi pairs")

    def split(x):
        P, Q = unpack(x, N)
        return P[0], Q[0], pack(P[1:], Q[1:])

    def forward(x):
        P0, Q0, rest = split(x)
        return np.concatenate([P0, Q0, chart.forward(rest)])

    def inverse(y):
        P0, Q0 = y[:3], y[3:6]
        P, Q = unpack(chart.inverse(y[6:]), N - 1)
        return pack(np.vstack([P0, P]), np.vstack([Q0, Q]))

    def in_domain(x):
        return chart.in_domain(split(x)[2])

    pairing = ((0, 3), (1, 4), (2, 5)) + tuple((a + 6, b + 6) for a, b in chart.pairing)
    labels = ("P0x", "P0y", "P0z", "Q0x", "Q0y", "Q0z") + tuple(chart.labels) if chart.labels else ()
    return Chart(
        name=f"anchored-{chart.name}",
        dim=6 * N,
        forward=forward,
        inverse=inverse,
        in_domain=in_domain,
        pairing=pairing,
        labels=labels,
        periodic=frozenset(i + 6 for i in chart.periodic),
        d_pair=None if chart.d_pair is None else (chart.d_pair[0] + 6, chart.d_pair[1] + 6),
    )
