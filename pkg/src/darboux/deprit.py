"""Deprit variables, Jacobi's elimination of the nodes and the Deprit charts.

Notation for n = N - 1 Keplerian ellipses with angular momenta C_1..C_n:

* S_k = C_1 + ... + C_k are the partial sums, S_n = C the total.
* At level k (k = n down to 2) the pair (S_{k-1}, C_k) is combined into S_k.
  The reference axis of the top level is z with first axis x. Level k uses

      nu_T = axis x S_k            (node of the plane orthogonal to S_k)
      nu_L = S_k x S_{k-1}         (common node, oriented by the inner group)

  and contributes (|S_k|, angle nu_T -> nu_L about S_k) and
  (S_k . axis, angle first-axis -> nu_T about axis). Only the top level
  keeps the second pair; a lower level k-1 is evaluated with axis S_k and
  first axis nu_L, its (S_{k-1} . S_k, 0) pair being redundant.
* Each ellipse contributes (L_i, l_i, G_i, gbar_i) with gbar_i the angle
  from the nu_L of the level where it enters to its pericenter.

For three bodies this is (L1, l1, G1, gbar1, L2, l2, G2, gbar2, Phi1, phi1,
Phi2, phi2) with Phi1 = |C|, Phi2 = C_z.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    CoplanarOrbitsError,
    DimensionError,
    DomainError,
    InvalidElementsError,
    RectilinearError,
    TriangleError,
    VerticalCError,
    ZeroAngularMomentumError,
)
from .jacobi import JacobiState, reduced_masses
from .kepler import (
    CIRCULAR_TOL,
    RECTILINEAR_TOL,
    ACTION_SLACK,
    mean_anomaly_from,
    osculating_vectors,
    place_orbit,
)
from .phasespace import Chart, angle_about, cross3, require_finite, wrap_angle

VERTICAL_TOL = 1e-9
COPLANAR_TOL = 1e-9
TRIANGLE_SLACK = 1e-12

_EX, _EY, _EZ = np.eye(3)


class CircularOrbitError(DomainError):
    pass


def _val(x) -> float:
    return float(getattr(x, "value", x))


def _norm(v):
    return np.sqrt(np.dot(v, v))


# -- elimination of the nodes -------------------------------------------------


@dataclass(frozen=True)
class NodesResult:
    H1: float
    H2: float


def eliminate_nodes(G1, G2, C) -> NodesResult:
    """Vertical components of C_1, C_2 on the Laplace plane.

    ``H1 = (C^2 + G1^2 - G2^2) / (2C)`` and ``H2 = (C^2 + G2^2 - G1^2) / (2C)``,
    evaluated as ``C/2 +- (G1 - G2)(G1 + G2) / (2C)``.
    """
    require_finite([_val(G1), _val(G2), _val(C)], "nodes arguments")
    if _val(C) <= 0:
        raise ZeroAngularMomentumError("elimination of the nodes needs C > 0")
    if _val(G1) <= 0 or _val(G2) <= 0:
        raise DomainError("G1 and G2 must be positive")
    slack = TRIANGLE_SLACK * (_val(G1) + _val(G2))
    if _val(C) > _val(G1) + _val(G2) + slack or _val(C) < abs(_val(G1) - _val(G2)) - slack:
        raise TriangleError(
            f"triangle inequality |G1 - G2| <= C <= G1 + G2 fails for "
            f"G1={_val(G1)}, G2={_val(G2)}, C={_val(C)}"
        )
    half = C / 2
    shift = (G1 - G2) * (G1 + G2) / (2 * C)
    return NodesResult(half + shift, half - shift)


# -- angular momenta ----------------------------------------------------------


@dataclass(frozen=True)
class AngularMomenta:
    per_ellipse: np.ndarray
    total: np.ndarray

    @property
    def partial_sums(self) -> np.ndarray:
        return np.cumsum(self.per_ellipse, axis=0)


def angular_momenta(j: JacobiState) -> AngularMomenta:
    C = np.cross(j.Q, j.P)
    return AngularMomenta(C, C.sum(axis=0))


# -- state --------------------------------------------------------------------


@dataclass(frozen=True)
class DepritState:
    """Deprit variables of N - 1 ellipses.

    ``ellipses`` has rows (L_i, l_i, G_i, gbar_i); ``chain`` has rows
    (|S_k|, psi_k) for the intermediate levels k = 2..N-2 (empty for three
    bodies); the top level is (Phi1, phi1, Phi2, phi2).
    """

    masses: np.ndarray
    ellipses: np.ndarray
    chain: np.ndarray
    Phi1: float
    phi1: float
    Phi2: float
    phi2: float

    def __post_init__(self):
        masses = np.array(self.masses, dtype=float).reshape(-1)
        n = masses.size - 1
        if n < 2:
            raise DimensionError("Deprit variables need at least three bodies")
        ell = np.array(self.ellipses, dtype=float).reshape(n, 4)
        chain = np.array(self.chain, dtype=float).reshape(n - 2, 2)
        top = [float(self.Phi1), float(self.phi1), float(self.Phi2), float(self.phi2)]
        require_finite(np.concatenate([masses, ell.ravel(), chain.ravel(), top]), "Deprit state")
        ell[:, 1] = wrap_angle(ell[:, 1])
        ell[:, 3] = wrap_angle(ell[:, 3])
        chain[:, 1] = wrap_angle(chain[:, 1])
        if np.any(ell[:, 0] <= 0) or np.any(ell[:, 2] <= 0):
            raise InvalidElementsError("L_i and G_i must be positive")
        if np.any(ell[:, 2] > ell[:, 0] * (1 + ACTION_SLACK)):
            raise InvalidElementsError("G_i <= L_i violated")
        if top[0] <= 0:
            raise ZeroAngularMomentumError("Phi1 = |C| must be positive")
        if abs(top[2]) > top[0] * (1 + ACTION_SLACK):
            raise InvalidElementsError("|Phi2| <= Phi1 violated")
        for arr in (masses, ell, chain):
            arr.flags.writeable = False
        object.__setattr__(self, "masses", masses)
        object.__setattr__(self, "ellipses", ell)
        object.__setattr__(self, "chain", chain)
        object.__setattr__(self, "Phi1", top[0])
        object.__setattr__(self, "phi1", float(wrap_angle(top[1])))
        object.__setattr__(self, "Phi2", top[2])
        object.__setattr__(self, "phi2", float(wrap_angle(top[3])))

    @property
    def n_ellipses(self) -> int:
        return self.masses.size - 1

    @property
    def phi_sum(self) -> float:
        """phi1 + phi2 (mod 2 pi), meaningful even close to a vertical C."""
        return float(wrap_angle(self.phi1 + self.phi2))

    def flat(self) -> np.ndarray:
        return np.concatenate(
            [self.ellipses.ravel(), self.chain.ravel(), [self.Phi1, self.phi1, self.Phi2, self.phi2]]
        )

    @classmethod
    def from_flat(cls, y, masses) -> "DepritState":
        masses = np.asarray(masses, dtype=float)
        n = masses.size - 1
        y = np.asarray(y, dtype=float)
        if y.shape != (6 * n,):
            raise DimensionError(f"expected {6 * n} Deprit coordinates, got shape {y.shape}")
        return cls(masses, y[: 4 * n], y[4 * n : 6 * n - 4], *y[6 * n - 4 :])


def deprit_labels(n_ellipses: int) -> tuple:
    labels = []
    for i in range(1, n_ellipses + 1):
        labels += [f"L{i}", f"l{i}", f"G{i}", f"gbar{i}"]
    for k in range(2, n_ellipses):
        labels += [f"Psi{k}", f"psi{k}"]
    return tuple(labels + ["Phi1", "phi1", "Phi2", "phi2"])


# -- forward ------------------------------------------------------------------


def _ellipse_data(P, Q, mu, mgrav, check):
    """Per-ellipse (L, l, G) plus unit normal and pericenter directions."""
    out = []
    for i in range(len(mu)):
        a, c, evec = osculating_vectors(Q[i], P[i], mu[i], mgrav[i])
        G = _norm(c)
        e = _norm(evec)
        if check:
            if _val(G) < RECTILINEAR_TOL * mu[i] * np.sqrt(mgrav[i] * _val(a)):
                raise RectilinearError(f"ellipse {i + 1} is rectilinear")
            if _val(e) < CIRCULAR_TOL:
                raise CircularOrbitError(f"ellipse {i + 1} is circular; its pericenter is undefined")
        chat = c / G
        ehat = evec / e
        L = mu[i] * np.sqrt(mgrav[i] * a)
        l = mean_anomaly_from(Q[i], ehat, chat, e)
        out.append((L, l, G, chat, ehat, c))
    return out


def _levels_forward(S, chats, ehats, axis, first_axis, m, check):
    Sm = S[m - 1]
    Phi1 = _norm(Sm)
    if check and _val(Phi1) == 0:
        raise ZeroAngularMomentumError(f"angular momentum of level {m} vanishes")
    Shat = Sm / Phi1
    nuT = cross3(axis, Shat)
    sT = _norm(nuT)
    if check and _val(sT) < VERTICAL_TOL:
        raise VerticalCError(f"VerticalC: total angular momentum of level {m} is parallel to its axis", m)
    nuT = nuT / sT
    inner = S[m - 2] / _norm(S[m - 2])
    if check and _val(_norm(cross3(chats[m - 1], inner))) < COPLANAR_TOL:
        raise CoplanarOrbitsError(f"CoplanarOrbits: the two planes combined at level {m} coincide", m)
    nuL = cross3(Shat, inner)
    nuL = nuL / _norm(nuL)
    top = (Phi1, angle_about(nuT, nuL, Shat), np.dot(Sm, axis), angle_about(first_axis, nuT, axis))
    g_last = angle_about(nuL, ehats[m - 1], chats[m - 1])
    if m == 2:
        return [angle_about(nuL, ehats[0], chats[0]), g_last], [], top
    gbars, chain, inner_top = _levels_forward(S, chats, ehats, Shat, nuL, m - 1, check)
    return gbars + [g_last], chain + [inner_top[0], inner_top[1]], top


def deprit_core(P, Q, mu, mgrav, check=True):
    """Flat Deprit vector from Jacobi arrays P, Q of shape (n, 3).

    Written against plain numpy operations so that it also runs on arrays of
    dual numbers (``check`` then only inspects real parts).
    """
    data = _ellipse_data(P, Q, mu, mgrav, check)
    S = []
    acc = None
    for c in (d[5] for d in data):
        acc = c if acc is None else acc + c
        S.append(acc)
    chats = [d[3] for d in data]
    ehats = [d[4] for d in data]
    gbars, chain, top = _levels_forward(S, chats, ehats, _EZ, _EX, len(data), check)
    ell = []
    for (L, l, G, _, _, _), gb in zip(data, gbars):
        ell += [L, l, G, gb]
    return np.array(ell + list(chain) + list(top))


def to_deprit_n(j: JacobiState) -> DepritState:
    """Deprit variables of N >= 3 bodies, built level by level."""
    if j.n_pairs < 2:
        raise DimensionError("Deprit variables need at least three bodies")
    y = deprit_core(j.P, j.Q, j.mu, j.mgrav)
    return DepritState.from_flat(y, j.masses)


def to_deprit(j: JacobiState) -> DepritState:
    """Three-body Deprit variables; same code path as :func:`to_deprit_n`."""
    if j.n_pairs != 2:
        raise DimensionError("to_deprit is the three-body case; use to_deprit_n")
    return to_deprit_n(j)


# -- inverse ------------------------------------------------------------------


def _tilt(cos_angle):
    return np.sqrt(max(0.0, (1 - cos_angle) * (1 + cos_angle)))


def _levels_inverse(G, gbar, chain, top, axis, first_axis, m):
    Phi1, phi1, Phi2, phi2 = top
    cosI = Phi2 / Phi1
    sinI = _tilt(cosI)
    if sinI < VERTICAL_TOL:
        raise VerticalCError(f"VerticalC: level {m} angular momentum is parallel to its axis", m)
    nuT = np.cos(phi2) * first_axis + np.sin(phi2) * cross3(axis, first_axis)
    Shat = cosI * axis + sinI * cross3(nuT, axis)
    nuL = np.cos(phi1) * nuT + np.sin(phi1) * cross3(Shat, nuT)
    w = cross3(Shat, nuL)
    G_last = G[m - 1]
    G_in = G[0] if m == 2 else chain[m - 3][0]
    nodes = eliminate_nodes(G_in, G_last, Phi1)
    cos_in = min(1.0, max(-1.0, nodes.H1 / G_in))
    cos_last = min(1.0, max(-1.0, nodes.H2 / G_last))
    sin_in, sin_last = _tilt(cos_in), _tilt(cos_last)
    if min(sin_in, sin_last) < COPLANAR_TOL:
        raise CoplanarOrbitsError(f"CoplanarOrbits: the two planes combined at level {m} coincide", m)
    inner_hat = cos_in * Shat - sin_in * w
    last_hat = cos_last * Shat + sin_last * w
    e_last = np.cos(gbar[m - 1]) * nuL + np.sin(gbar[m - 1]) * cross3(last_hat, nuL)
    if m == 2:
        e_first = np.cos(gbar[0]) * nuL + np.sin(gbar[0]) * cross3(inner_hat, nuL)
        return [(inner_hat, e_first), (last_hat, e_last)]
    inner_top = (G_in, chain[m - 3][1], nodes.H1, 0.0)
    return _levels_inverse(G, gbar, chain, inner_top, Shat, nuL, m - 1) + [(last_hat, e_last)]


def from_deprit_n(d: DepritState) -> JacobiState:
    n = d.n_ellipses
    mu, mgrav = reduced_masses(d.masses)
    ell = d.ellipses
    frames = _levels_inverse(
        ell[:, 2], ell[:, 3], d.chain, (d.Phi1, d.phi1, d.Phi2, d.phi2), _EZ, _EX, n
    )
    P = np.empty((n, 3))
    Q = np.empty((n, 3))
    for i, (chat, ehat) in enumerate(frames):
        L, l, G, _ = ell[i]
        a = L**2 / (mu[i] ** 2 * mgrav[i])
        ratio = min(G / L, 1.0)
        e = np.sqrt((1 - ratio) * (1 + ratio))
        if e < CIRCULAR_TOL:
            raise CircularOrbitError(f"ellipse {i + 1} is circular; gbar{i + 1} is undefined")
        Q[i], P[i] = place_orbit(a, e, l, chat, ehat, mu[i], mgrav[i])
    return JacobiState(d.masses, P, Q)


def from_deprit(d: DepritState) -> JacobiState:
    if d.n_ellipses != 2:
        raise DimensionError("from_deprit is the three-body case; use from_deprit_n")
    return from_deprit_n(d)


# -- chart --------------------------------------------------------------------


def deprit_chart(masses) -> Chart:
    """Reduced Jacobi vector (P_1..P_n, Q_1..Q_n) -> flat Deprit vector."""
    masses = np.asarray(masses, dtype=float)
    n = masses.size - 1
    if n < 2:
        raise DimensionError("Deprit charts need at least three bodies")
    mu, mgrav = reduced_masses(masses)
    labels = deprit_labels(n)

    def forward(x):
        require_finite(x)
        P = x[: 3 * n].reshape(n, 3)
        Q = x[3 * n :].reshape(n, 3)
        return deprit_core(P, Q, mu, mgrav)

    def inverse(y):
        return from_deprit_n(DepritState.from_flat(y, masses)).flat()

    def in_domain(x):
        try:
            to_deprit_n(JacobiState.from_flat(x, masses))
        except DomainError:
            return False
        return True

    return Chart(
        name=f"deprit{n + 1}",
        dim=6 * n,
        forward=forward,
        inverse=inverse,
        in_domain=in_domain,
        pairing=tuple((2 * k, 2 * k + 1) for k in range(3 * n)),
        labels=labels,
        periodic=frozenset(range(1, 6 * n, 2)),
        d_pair=(labels.index("Phi2"), labels.index("phi2")),
    )
