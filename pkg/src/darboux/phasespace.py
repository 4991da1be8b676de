"""Phase-space conventions, state containers and the Chart abstraction.

Fixed conventions:

* A coordinate vector lists every momentum-like coordinate before every
  position-like one. N bodies flatten to ``(p_0, ..., p_{N-1}, q_0, ..., q_{N-1})``,
  each entry a 3-vector.
* The canonical matrix in that ordering is ``Omega = [[0, I], [-I, 0]]``.
* ``{f, g} = sum_i (df/dP_i dg/dQ_i - df/dQ_i dg/dP_i) = grad(f)^T Omega grad(g)``.
* Equations of motion: ``dQ/dt = dH/dP``, ``dP/dt = -dH/dQ``.
* Angles are returned in ``[0, 2*pi)``; any real angle is accepted on input.
* The gravitational constant is 1.

With these conventions every declared (action, angle) pair of a Darboux chart
has bracket ``{action, angle} = +1``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import CollisionError, DimensionError, DomainError, NonFiniteError

TAU = 2.0 * np.pi

ROUND_TRIP_TOL = 1e-10
CERTIFY_TOL = 1e-6


def require_finite(x, what="input"):
    """Raise NonFiniteError unless every entry of ``x`` is finite."""
    arr = np.asarray(x)
    if arr.dtype == object:
        arr = np.array([float(getattr(v, "value", v)) for v in arr.ravel()])
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError(f"{what} contains NaN or Inf")
    return x


def as_vec3(v, what="vector"):
    arr = np.array(v, dtype=float)
    if arr.shape != (3,):
        raise DimensionError(f"{what} must have 3 components, got shape {arr.shape}")
    require_finite(arr, what)
    return arr


def wrap_angle(x):
    """Map an angle (or array of angles) into [0, 2*pi)."""
    if np.ndim(x) == 0:
        r = x % TAU
        # x % TAU can round up to TAU for tiny negative x
        return r - TAU if r >= TAU else r
    r = np.mod(x, TAU)
    return np.where(r >= TAU, r - TAU, r)


def wrap_difference(d):
    """Map an angle difference into (-pi, pi]."""
    return np.pi - np.mod(np.pi - d, TAU)


def unit(v):
    return v / np.linalg.norm(v)


def cross3(a, b):
    """Cross product of two 3-vectors; cheaper than np.cross and dual friendly."""
    return np.array([a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]])


def angle_about(u, v, axis):
    """Oriented angle from ``u`` to ``v`` measured counterclockwise about ``axis``.

    ``u`` and ``v`` are assumed to be (close to) orthogonal to ``axis``.
    """
    return wrap_angle(np.arctan2(np.dot(cross3(u, v), axis), np.dot(u, v)))


def canonical_matrix(n_dof: int) -> np.ndarray:
    """Integer matrix ``[[0, I], [-I, 0]]`` of size ``2*n_dof``."""
    eye = np.eye(n_dof, dtype=int)
    zero = np.zeros((n_dof, n_dof), dtype=int)
    return np.block([[zero, eye], [-eye, zero]])


@dataclass(frozen=True)
class PhaseState:
    """Positions, momenta and masses of N >= 2 bodies in an inertial frame."""

    masses: np.ndarray
    q: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        masses = np.array(self.masses, dtype=float).reshape(-1)
        q = np.array(self.q, dtype=float)
        p = np.array(self.p, dtype=float)
        n = masses.size
        if n < 2:
            raise DimensionError("a phase state needs at least two bodies")
        if q.shape != (n, 3) or p.shape != (n, 3):
            raise DimensionError(
                f"expected positions and momenta of shape ({n}, 3), got {q.shape} and {p.shape}"
            )
        for arr, what in ((masses, "masses"), (q, "positions"), (p, "momenta")):
            require_finite(arr, what)
        if np.any(masses <= 0):
            raise DomainError("masses must be positive")
        diff = q[:, None, :] - q[None, :, :]
        dist = np.linalg.norm(diff, axis=-1)
        if np.any(dist[np.triu_indices(n, 1)] <= 0):
            raise CollisionError("two bodies share a position")
        for arr in (masses, q, p):
            arr.flags.writeable = False
        object.__setattr__(self, "masses", masses)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "p", p)

    @property
    def n_bodies(self) -> int:
        return self.masses.size

    def total_momentum(self) -> np.ndarray:
        return self.p.sum(axis=0)

    def angular_momentum(self) -> np.ndarray:
        return np.cross(self.q, self.p).sum(axis=0)

    def barycenter(self) -> np.ndarray:
        return self.masses @ self.q / self.masses.sum()


def pack(p, q) -> np.ndarray:
    """Flatten momentum and position arrays of shape (n, 3) as (p..., q...)."""
    return np.concatenate([np.asarray(p).reshape(-1), np.asarray(q).reshape(-1)])


def unpack(x, n: int):
    """Inverse of :func:`pack`: returns ``(p, q)`` each of shape (n, 3)."""
    x = np.asarray(x)
    if x.shape != (6 * n,):
        raise DimensionError(f"expected a vector of length {6 * n}, got shape {x.shape}")
    return x[: 3 * n].reshape(n, 3), x[3 * n :].reshape(n, 3)


def flatten(state: PhaseState) -> np.ndarray:
    return pack(state.p, state.q)


def unflatten(x, masses) -> PhaseState:
    masses = np.asarray(masses, dtype=float)
    p, q = unpack(np.asarray(x, dtype=float), masses.size)
    return PhaseState(masses, q, p)


@dataclass(frozen=True)
class Chart:
    """An invertible coordinate map with declared canonical pairing.

    ``forward`` sends a canonical source vector ((p, q) ordering) to the
    target coordinates; ``pairing`` lists the (action index, angle index)
    pairs of the target and must cover every index exactly once.
    ``periodic`` marks the target indices that are angles (finite differences
    across the 2*pi cut are unwrapped). ``d_pair`` optionally names the pair
    playing the role of (C_z, node angle).
    """

    name: str
    dim: int
    forward: Callable[[np.ndarray], np.ndarray]
    inverse: Callable[[np.ndarray], np.ndarray]
    in_domain: Callable[[np.ndarray], bool]
    pairing: tuple
    labels: tuple = ()
    periodic: frozenset = field(default_factory=frozenset)
    d_pair: Optional[tuple] = None

    def __post_init__(self):
        if self.dim <= 0 or self.dim % 2:
            raise DimensionError(f"chart dimension must be even and positive, got {self.dim}")
        pairing = tuple((int(a), int(b)) for a, b in self.pairing)
        seen = sorted(i for pair in pairing for i in pair)
        if seen != list(range(self.dim)):
            raise DimensionError(f"pairing of {self.name!r} does not cover 0..{self.dim - 1} once")
        if self.labels and len(self.labels) != self.dim:
            raise DimensionError("one label per target coordinate expected")
        object.__setattr__(self, "pairing", pairing)
        object.__setattr__(self, "periodic", frozenset(self.periodic))

    def __call__(self, x):
        return self.forward(x)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def canonical_order(self) -> np.ndarray:
        """Permutation putting the target in (actions..., angles...) order."""
        actions = [a for a, _ in self.pairing]
        angles = [b for _, b in self.pairing]
        return np.array(actions + angles)

    def canonical_pattern(self) -> np.ndarray:
        """Expected bracket matrix ``{y_i, y_j}`` in target order."""
        pattern = np.zeros((self.dim, self.dim))
        for a, b in self.pairing:
            pattern[a, b] = 1.0
            pattern[b, a] = -1.0
        return pattern


def compose_charts(a: Chart, b: Chart) -> Chart:
    """The chart ``b o a``: apply ``a`` first, then ``b``."""
    if a.dim != b.dim:
        raise DimensionError(f"cannot compose {a.name!r} (dim {a.dim}) with {b.name!r} (dim {b.dim})")

    def forward(x):
        return b.forward(a.forward(x))

    def inverse(y):
        return a.inverse(b.inverse(y))

    def in_domain(x):
        if not a.in_domain(x):
            return False
        return b.in_domain(a.forward(x))

    return Chart(
        name=f"{a.name}>{b.name}",
        dim=b.dim,
        forward=forward,
        inverse=inverse,
        in_domain=in_domain,
        pairing=b.pairing,
        labels=b.labels,
        periodic=b.periodic,
        d_pair=b.d_pair,
    )


def identity_chart(dim: int) -> Chart:
    n = dim // 2
    return Chart(
        name="identity",
        dim=dim,
        forward=lambda x: np.array(x, copy=True),
        inverse=lambda y: np.array(y, copy=True),
        in_domain=lambda x: True,
        pairing=tuple((i, n + i) for i in range(n)),
    )


def linear_chart(matrix, name="linear", pairing: Optional[Sequence] = None) -> Chart:
    """Chart ``x -> matrix @ x``; pairing defaults to the canonical (p_i, q_i) pairing."""
    matrix = np.asarray(matrix, dtype=float)
    dim = matrix.shape[0]
    inv = np.linalg.inv(matrix)
    n = dim // 2
    return Chart(
        name=name,
        dim=dim,
        forward=lambda x: matrix @ x,
        inverse=lambda y: inv @ y,
        in_domain=lambda x: True,
        pairing=tuple(pairing) if pairing is not None else tuple((i, n + i) for i in range(n)),
    )


def round_trip_error(chart: Chart, x) -> float:
    """``||inverse(forward(x)) - x||_inf / max(1, ||x||_inf)``."""
    x = np.asarray(x, dtype=float)
    back = chart.inverse(chart.forward(x))
    return float(np.max(np.abs(back - x)) / max(1.0, np.max(np.abs(x))))
