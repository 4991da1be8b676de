"""Two-body machinery: Kepler's equation, orbital elements, Delaunay variables.

A fictitious body (Q, P) with reduced mass ``mu`` moving in the potential of
``mgrav`` has Hamiltonian ``|P|^2 / (2 mu) - mu mgrav / |Q|``. Its Delaunay
variables are

    L = mu sqrt(mgrav a),  G = L sqrt(1 - e^2) = |Q x P|,  H = G cos i = (Q x P)_z,

conjugate to the mean anomaly l, the argument of pericenter g and the
longitude of the ascending node h.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DomainError,
    InvalidElementsError,
    NonEllipticError,
    RectilinearError,
)
from .phasespace import TAU, Chart, angle_about, as_vec3, cross3, require_finite, wrap_angle

CIRCULAR_TOL = 1e-9
HORIZONTAL_TOL = 1e-9
RECTILINEAR_TOL = 1e-12
# slack allowed on G <= L and |H| <= G before an input is rejected
ACTION_SLACK = 1e-12

_NEWTON_MAXITER = 50
_EX, _EY, _EZ = np.eye(3)


def _check_mass_params(mu, mgrav):
    if not (np.isfinite(mu) and np.isfinite(mgrav)):
        raise DomainError("mass parameters must be finite")
    if mu <= 0 or mgrav <= 0:
        raise DomainError("mass parameters must be positive")


def solve_kepler(mean_anomaly: float, e: float) -> float:
    """Eccentric anomaly E in [0, 2*pi) with ``E - e sin E = M (mod 2*pi)``.

    Newton's method from ``M + 0.85 e sign(sin M)``; if it has not converged
    after 50 iterations, bisection on ``[M - e, M + e]`` finishes the job.
    """
    require_finite([mean_anomaly, e], "Kepler equation arguments")
    if not 0.0 <= e < 1.0:
        raise DomainError(f"eccentricity {e} outside [0, 1)")
    M = float(wrap_angle(float(mean_anomaly)))
    if e == 0.0:
        return M

    def f(E):
        return E - e * np.sin(E) - M

    E = M + 0.85 * e * np.sign(np.sin(M))
    converged = False
    for _ in range(_NEWTON_MAXITER):
        step = f(E) / (1.0 - e * np.cos(E))
        E -= step
        if abs(step) <= 4 * np.finfo(float).eps * max(1.0, abs(E)):
            converged = True
            break
    if not converged or abs(f(E)) > 1e-14:
        lo, hi = M - e, M + e
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if f(mid) > 0:
                hi = mid
            else:
                lo = mid
            if hi - lo <= 2 * np.finfo(float).eps * max(1.0, abs(mid)):
                break
        E = 0.5 * (lo + hi)
    return float(wrap_angle(E))


@dataclass(frozen=True)
class OrbitalElements:
    """Osculating elements; angles in radians.

    ``omega`` is meaningless on a circular orbit and ``Omega`` on a
    horizontal one; both are then reported as 0 with the flag raised.
    """

    a: float
    e: float
    i: float
    omega: float
    Omega: float
    mean_anomaly: float
    circular: bool = False
    horizontal: bool = False
    rectilinear: bool = False

    def __post_init__(self):
        require_finite([self.a, self.e, self.i, self.omega, self.Omega, self.mean_anomaly], "elements")
        if self.a <= 0:
            raise InvalidElementsError("semi-major axis must be positive")
        if not 0.0 <= self.e < 1.0:
            raise InvalidElementsError(f"eccentricity {self.e} outside [0, 1)")
        if not 0.0 <= self.i <= np.pi:
            raise InvalidElementsError(f"inclination {self.i} outside [0, pi]")


@dataclass(frozen=True)
class DelaunayElements:
    L: float
    l: float
    G: float
    g: float
    H: float
    h: float
    circular: bool = False
    horizontal: bool = False

    def __post_init__(self):
        require_finite([self.L, self.l, self.G, self.g, self.H, self.h], "Delaunay variables")
        if self.L <= 0:
            raise InvalidElementsError("L must be positive")
        if not 0 < self.G <= self.L * (1 + ACTION_SLACK):
            raise InvalidElementsError(f"need 0 < G <= L, got G={self.G}, L={self.L}")
        if abs(self.H) > self.G * (1 + ACTION_SLACK):
            raise InvalidElementsError(f"need |H| <= G, got H={self.H}, G={self.G}")

    def as_array(self) -> np.ndarray:
        return np.array([self.L, self.l, self.G, self.g, self.H, self.h])


# -- geometry shared with the Deprit construction ------------------------------


def osculating_vectors(Q, P, mu, mgrav):
    """Return ``(a, c, evec)``: semi-major axis, Q x P and the eccentricity vector.

    Raises NonEllipticError for unbound motion.
    """
    r = np.sqrt(np.dot(Q, Q))
    v = P / mu
    energy = np.dot(v, v) / 2 - mgrav / r
    if energy >= 0:
        raise NonEllipticError(f"orbit is not elliptic (specific energy {float(getattr(energy, 'value', energy)):.6g})")
    a = -mgrav / (2 * energy)
    c = cross3(Q, P)
    evec = cross3(v, c / mu) / mgrav - Q / r
    return a, c, evec


def mean_anomaly_from(Q, ehat, chat, e):
    """Mean anomaly of position Q on an ellipse with pericenter direction ehat."""
    f = np.arctan2(np.dot(cross3(ehat, Q), chat), np.dot(ehat, Q))
    E = np.arctan2(np.sqrt(1 - e * e) * np.sin(f), e + np.cos(f))
    return wrap_angle(E - e * np.sin(E))


def place_orbit(a, e, mean_anomaly, chat, ehat, mu, mgrav):
    """(Q, P) on the ellipse (a, e) with normal chat and pericenter direction ehat."""
    E = solve_kepler(mean_anomaly, e)
    cosE, sinE = np.cos(E), np.sin(E)
    b = np.sqrt((1 - e) * (1 + e))
    n = np.sqrt(mgrav / a**3)
    denom = 1 - e * cosE
    side = cross3(chat, ehat)
    Q = a * (cosE - e) * ehat + a * b * sinE * side
    V = (-a * n * sinE / denom) * ehat + (a * n * b * cosE / denom) * side
    return Q, mu * V


def orbit_axes(i, Omega, omega):
    """Unit normal, node and pericenter directions for the given angles."""
    node = np.array([np.cos(Omega), np.sin(Omega), 0.0])
    chat = np.array([np.sin(i) * np.sin(Omega), -np.sin(i) * np.cos(Omega), np.cos(i)])
    ehat = np.cos(omega) * node + np.sin(omega) * cross3(chat, node)
    return chat, node, ehat


# -- Cartesian <-> elements ---------------------------------------------------


def _flags(Q, P, mu, mgrav):
    a, c, evec = osculating_vectors(Q, P, mu, mgrav)
    cn = np.linalg.norm(c)
    if cn < RECTILINEAR_TOL * mu * np.sqrt(mgrav * a):
        raise RectilinearError("angular momentum vanishes (rectilinear orbit)")
    e = np.linalg.norm(evec)
    chat = c / cn
    sin_i = np.hypot(chat[0], chat[1])
    return a, c, cn, chat, evec, e, sin_i


def cartesian_to_elements(Q, P, mu: float, mgrav: float) -> OrbitalElements:
    Q = as_vec3(Q, "Q")
    P = as_vec3(P, "P")
    _check_mass_params(mu, mgrav)
    if np.linalg.norm(Q) == 0:
        raise DomainError("Q must be nonzero")
    a, c, cn, chat, evec, e, sin_i = _flags(Q, P, mu, mgrav)
    circular = bool(e < CIRCULAR_TOL)
    horizontal = bool(sin_i < HORIZONTAL_TOL)
    inc = float(np.arctan2(sin_i, chat[2]))
    if horizontal:
        node = _EX
        Omega = 0.0
    else:
        node = np.array([-chat[1], chat[0], 0.0]) / sin_i
        Omega = float(wrap_angle(np.arctan2(node[1], node[0])))
    if circular:
        ehat = node
        omega = 0.0
    else:
        ehat = evec / e
        omega = float(angle_about(node, ehat, chat))
    l = float(mean_anomaly_from(Q, ehat, chat, e))
    return OrbitalElements(
        a=float(a),
        e=float(e),
        i=inc,
        omega=omega,
        Omega=Omega,
        mean_anomaly=l,
        circular=circular,
        horizontal=horizontal,
    )


def elements_to_cartesian(el: OrbitalElements, mu: float, mgrav: float):
    _check_mass_params(mu, mgrav)
    chat, _, ehat = orbit_axes(el.i, el.Omega, el.omega)
    return place_orbit(el.a, el.e, el.mean_anomaly, chat, ehat, mu, mgrav)


# -- elements <-> Delaunay ----------------------------------------------------


def elements_to_delaunay(el: OrbitalElements, mu: float, mgrav: float) -> DelaunayElements:
    _check_mass_params(mu, mgrav)
    L = mu * np.sqrt(mgrav * el.a)
    G = L * np.sqrt((1 - el.e) * (1 + el.e))
    H = G * np.cos(el.i)
    return DelaunayElements(
        L=float(L),
        l=float(wrap_angle(el.mean_anomaly)),
        G=float(G),
        g=float(wrap_angle(el.omega)),
        H=float(H),
        h=float(wrap_angle(el.Omega)),
        circular=el.circular,
        horizontal=el.horizontal,
    )


def delaunay_to_elements(d: DelaunayElements, mu: float, mgrav: float) -> OrbitalElements:
    _check_mass_params(mu, mgrav)
    a = d.L**2 / (mu**2 * mgrav)
    ratio = min(d.G / d.L, 1.0)
    e = np.sqrt((1 - ratio) * (1 + ratio))
    cos_i = np.clip(d.H / d.G, -1.0, 1.0)
    i = np.arctan2(np.sqrt((1 - cos_i) * (1 + cos_i)), cos_i)
    return OrbitalElements(
        a=float(a),
        e=float(e),
        i=float(i),
        omega=float(wrap_angle(d.g)),
        Omega=float(wrap_angle(d.h)),
        mean_anomaly=float(wrap_angle(d.l)),
        circular=bool(e < CIRCULAR_TOL),
        horizontal=bool(np.sin(i) < HORIZONTAL_TOL),
    )


def cartesian_to_delaunay(Q, P, mu: float, mgrav: float) -> DelaunayElements:
    """Delaunay variables straight from (Q, P); G and H come from Q x P directly."""
    el = cartesian_to_elements(Q, P, mu, mgrav)
    c = np.cross(np.asarray(Q, dtype=float), np.asarray(P, dtype=float))
    return DelaunayElements(
        L=float(mu * np.sqrt(mgrav * el.a)),
        l=el.mean_anomaly,
        G=float(np.linalg.norm(c)),
        g=el.omega,
        H=float(c[2]),
        h=el.Omega,
        circular=el.circular,
        horizontal=el.horizontal,
    )


def delaunay_to_cartesian(d: DelaunayElements, mu: float, mgrav: float):
    return elements_to_cartesian(delaunay_to_elements(d, mu, mgrav), mu, mgrav)


def keplerian_energy(L: float, mu: float, mgrav: float) -> float:
    """``K = -mu^3 mgrav^2 / (2 L^2)``."""
    if L <= 0:
        raise DomainError("L must be positive")
    return -(mu**3) * mgrav**2 / (2 * L**2)


def mean_motion(L: float, mu: float, mgrav: float) -> float:
    """``n = dK/dL = mu^3 mgrav^2 / L^3``."""
    if L <= 0:
        raise DomainError("L must be positive")
    return mu**3 * mgrav**2 / L**3


# -- charts -------------------------------------------------------------------


def delaunay_core(Q, P, mu, mgrav):
    """(L, l, G, g, H, h) without validation; works on dual numbers too."""
    a, c, evec = osculating_vectors(Q, P, mu, mgrav)
    G = np.sqrt(np.dot(c, c))
    chat = c / G
    e = np.sqrt(np.dot(evec, evec))
    ehat = evec / e
    sin_i = np.sqrt(chat[0] * chat[0] + chat[1] * chat[1])
    node = np.array([-chat[1], chat[0], 0.0 * chat[0]]) / sin_i
    L = mu * np.sqrt(mgrav * a)
    l = mean_anomaly_from(Q, ehat, chat, e)
    g = angle_about(node, ehat, chat)
    h = wrap_angle(np.arctan2(node[1], node[0]))
    return np.array([L, l, G, g, c[2], h])


def _delaunay_in_domain(Q, P, mu, mgrav):
    try:
        el = cartesian_to_elements(Q, P, mu, mgrav)
    except DomainError:
        return False
    return not (el.circular or el.horizontal)


def delaunay_chart(mu: float = 1.0, mgrav: float = 1.0) -> Chart:
    """Spatial Delaunay chart: (Px, Py, Pz, Qx, Qy, Qz) -> (L, l, G, g, H, h)."""
    _check_mass_params(mu, mgrav)

    def forward(x):
        require_finite(x)
        return delaunay_core(x[3:], x[:3], mu, mgrav)

    def inverse(y):
        d = DelaunayElements(*(float(v) for v in y))
        Q, P = delaunay_to_cartesian(d, mu, mgrav)
        return np.concatenate([P, Q])

    return Chart(
        name="delaunay",
        dim=6,
        forward=forward,
        inverse=inverse,
        in_domain=lambda x: _delaunay_in_domain(x[3:], x[:3], mu, mgrav),
        pairing=((0, 1), (2, 3), (4, 5)),
        labels=("L", "l", "G", "g", "H", "h"),
        periodic=frozenset({1, 3, 5}),
        d_pair=(4, 5),
    )


def planar_delaunay_core(Q2, P2, mu, mgrav):
    zero = 0.0 * Q2[0]
    Q = np.array([Q2[0], Q2[1], zero])
    P = np.array([P2[0], P2[1], zero])
    a, c, evec = osculating_vectors(Q, P, mu, mgrav)
    e = np.sqrt(np.dot(evec, evec))
    ehat = evec / e
    L = mu * np.sqrt(mgrav * a)
    l = mean_anomaly_from(Q, ehat, _EZ, e)
    g = wrap_angle(np.arctan2(ehat[1], ehat[0]))
    return np.array([L, l, c[2], g])


def planar_delaunay_chart(mu: float = 1.0, mgrav: float = 1.0) -> Chart:
    """Planar Delaunay chart on prograde ellipses: (Px, Py, Qx, Qy) -> (L, l, G, g)."""
    _check_mass_params(mu, mgrav)

    def forward(x):
        require_finite(x)
        return planar_delaunay_core(x[2:], x[:2], mu, mgrav)

    def inverse(y):
        L, l, G, g = (float(v) for v in y)
        if not 0 < G <= L * (1 + ACTION_SLACK):
            raise InvalidElementsError("need 0 < G <= L")
        a = L**2 / (mu**2 * mgrav)
        ratio = min(G / L, 1.0)
        e = np.sqrt((1 - ratio) * (1 + ratio))
        ehat = np.array([np.cos(g), np.sin(g), 0.0])
        Q, P = place_orbit(a, e, l, _EZ, ehat, mu, mgrav)
        return np.array([P[0], P[1], Q[0], Q[1]])

    def in_domain(x):
        Q = np.array([x[2], x[3], 0.0])
        P = np.array([x[0], x[1], 0.0])
        try:
            el = cartesian_to_elements(Q, P, mu, mgrav)
        except DomainError:
            return False
        return not el.circular and np.cross(Q, P)[2] > 0

    return Chart(
        name="delaunay-planar",
        dim=4,
        forward=forward,
        inverse=inverse,
        in_domain=in_domain,
        pairing=((0, 1), (2, 3)),
        labels=("L", "l", "G", "g"),
        periodic=frozenset({1, 3}),
    )
