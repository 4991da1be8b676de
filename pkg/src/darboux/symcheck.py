"""Numerical certification of symplectic charts.

For a chart y = f(x) on canonical source coordinates the matrix of Poisson
brackets of the target coordinates is ``B = J Omega J^T`` with J the
Jacobian. The chart is Darboux exactly when B equals the canonical pattern
of its declared pairing.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DomainError, ZeroAngularMomentumError
from .phasespace import CERTIFY_TOL, Chart, canonical_matrix, wrap_difference

EPS = np.finfo(float).eps


def fd_steps(x) -> np.ndarray:
    """Central-difference steps ``eps^(1/3) * max(1, |x_i|)``."""
    return EPS ** (1.0 / 3.0) * np.maximum(1.0, np.abs(x))


def fd_jacobian(fn: Callable, x, periodic: Sequence[int] = (), steps=None) -> np.ndarray:
    """Central finite-difference Jacobian of ``fn`` at ``x``.

    Output components listed in ``periodic`` are angles: their differences
    are taken modulo 2*pi. ``steps`` defaults to ``fd_steps(x)``.
    """
    x = np.asarray(x, dtype=float)
    steps = fd_steps(x) if steps is None else np.broadcast_to(np.asarray(steps, dtype=float), x.shape)
    periodic = list(periodic)
    columns = []
    for i, h in enumerate(steps):
        up = x.copy()
        down = x.copy()
        up[i] += h
        down[i] -= h
        diff = np.atleast_1d(np.asarray(fn(up), dtype=float) - np.asarray(fn(down), dtype=float))
        if periodic:
            diff[periodic] = wrap_difference(diff[periodic])
        # divide by the step actually represented in floating point
        columns.append(diff / (up[i] - down[i]))
    return np.stack(columns, axis=1)


def jacobian(chart: Chart, x, scheme: str = "auto") -> np.ndarray:
    """Jacobian ``d(target)/d(source)`` of a chart.

    ``scheme="fd"`` uses central differences; ``scheme="dual"`` propagates
    forward-mode dual numbers through the chart's forward map. ``"auto"``
    prefers duals and falls back to differences for forward maps that only
    accept floats.
    """
    if scheme == "auto":
        scheme = resolve_scheme(chart.forward, x)
    x = np.asarray(x, dtype=float)
    if not chart.in_domain(x):
        raise DomainError(f"point outside the domain of {chart.name!r}")
    if scheme == "fd":
        for h, sign in ((fd_steps(x), 1), (fd_steps(x), -1)):
            if not chart.in_domain(x + sign * h):
                raise DomainError(f"finite-difference probe leaves the domain of {chart.name!r}")
        return fd_jacobian(chart.forward, x, sorted(chart.periodic))
    if scheme == "dual":
        from .dual import dual_jacobian

        return dual_jacobian(chart.forward, x)
    raise ValueError(f"unknown differentiation scheme {scheme!r}")


def resolve_scheme(fn: Callable, x) -> str:
    """``"dual"`` if ``fn`` runs on dual numbers at ``x``, else ``"fd"``."""
    from .dual import seed

    try:
        fn(seed(x))
    except (TypeError, AttributeError):
        return "fd"
    return "dual"


def jacobians_agree(Ja, Jb, tol: float = CERTIFY_TOL) -> float:
    """Largest entrywise difference, scaled by ``max(1, |J|)``."""
    Ja, Jb = np.asarray(Ja), np.asarray(Jb)
    return float(np.max(np.abs(Ja - Jb) / np.maximum(1.0, np.abs(Jb))))


def bracket_matrix(J) -> np.ndarray:
    J = np.asarray(J)
    return J @ canonical_matrix(J.shape[1] // 2) @ J.T


@dataclass(frozen=True)
class SymplecticReport:
    point: np.ndarray
    max_defect: float
    bracket_matrix: np.ndarray
    passed: bool
    tol: float
    scheme: str = "fd"
    steps: Optional[np.ndarray] = None
    antisymmetry: float = 0.0

    def line(self, seed=None) -> str:
        text = f"defect={self.max_defect:.3e} pass={int(self.passed)}"
        return text if seed is None else f"{text} seed={seed}"


def certify_symplectic(chart: Chart, x, tol: float = CERTIFY_TOL, scheme: str = "auto") -> SymplecticReport:
    """Compare the bracket matrix of the chart at ``x`` with its declared pattern."""
    x = np.asarray(x, dtype=float)
    if scheme == "auto":
        scheme = resolve_scheme(chart.forward, x)
    J = jacobian(chart, x, scheme=scheme)
    B = bracket_matrix(J)
    defect = float(np.max(np.abs(B - chart.canonical_pattern())))
    return SymplecticReport(
        point=x,
        max_defect=defect,
        bracket_matrix=B,
        passed=bool(defect < tol),
        tol=tol,
        scheme=scheme,
        steps=fd_steps(x) if scheme == "fd" else None,
        antisymmetry=float(np.max(np.abs(B + B.T))),
    )


def _gradient(f, x, periodic, scheme):
    fn = lambda z: np.atleast_1d(f(z))
    if scheme == "auto":
        scheme = resolve_scheme(fn, x)
    if scheme == "dual":
        from .dual import dual_jacobian

        return dual_jacobian(fn, x)[0]
    return fd_jacobian(fn, x, [0] if periodic else [])[0]


def bracket(f: Callable, g: Callable, x, periodic=(False, False), scheme: str = "auto") -> float:
    """Poisson bracket ``{f, g}(x)`` of two scalar functions on canonical coordinates.

    ``periodic`` flags f and/or g as angle-valued (used by the FD scheme).
    """
    x = np.asarray(x, dtype=float)
    n = x.size // 2
    df = _gradient(f, x, periodic[0], scheme)
    dg = _gradient(g, x, periodic[1], scheme)
    return float(np.sum(df[:n] * dg[n:]) - np.sum(df[n:] * dg[:n]))


def measure_d_factor(chart: Chart, x, report: Optional[SymplecticReport] = None) -> float:
    """The factor D in front of ``dPhi2 ^ dphi2``, i.e. ``1 / {Phi2, phi2}``."""
    if chart.d_pair is None:
        raise ValueError(f"chart {chart.name!r} declares no (C_z, angle) pair")
    if report is None:
        report = certify_symplectic(chart, x)
    a, b = chart.d_pair
    return 1.0 / float(report.bracket_matrix[a, b])


# -- symplectic cross-section -------------------------------------------------


def _angular_momentum_flat(x):
    n = x.size // 6
    P = x[: 3 * n].reshape(n, 3)
    Q = x[3 * n :].reshape(n, 3)
    return np.cross(Q, P).sum(axis=0)


def direction_constraints(direction) -> Callable:
    """Two functions whose joint zero set is {C parallel to ``direction``}.

    They are the components of C along two unit vectors orthogonal to it.
    """
    u = np.asarray(direction, dtype=float)
    u = u / np.linalg.norm(u)
    helper = np.eye(3)[np.argmin(np.abs(u))]
    e1 = np.cross(u, helper)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(u, e1)

    def constraints(x):
        C = _angular_momentum_flat(x)
        return np.array([C @ e1, C @ e2])

    return constraints


@dataclass(frozen=True)
class CrossSectionReport:
    min_singular_values: np.ndarray
    ranks: np.ndarray
    tangent_dim: int
    passed: bool
    tol: float
    details: list = field(default_factory=list)


def restricted_form(constraints: Callable, x, rank_tol=1e-9):
    """Restriction of Omega to the tangent space of ``{constraints = const}`` at ``x``.

    Returns ``(R, T)`` where the rows of T are an orthonormal basis of the
    tangent space and ``R = T Omega T^T``.
    """
    x = np.asarray(x, dtype=float)
    D = np.atleast_2d(fd_jacobian(constraints, x))
    _, s, Vt = np.linalg.svd(D)
    k = int(np.sum(s > rank_tol * max(1.0, s[0])))
    if k != D.shape[0]:
        raise DomainError("constraint differentials are linearly dependent; no tangent basis")
    T = Vt[k:]
    R = T @ canonical_matrix(x.size // 2) @ T.T
    return R, T


def check_cross_section(points, tol: float = CERTIFY_TOL, constraints: Optional[Callable] = None) -> CrossSectionReport:
    """Check that the fixed-direction submanifold is symplectic at each point.

    ``points`` are Jacobi states sharing the direction of their total angular
    momentum. A custom ``constraints`` function replaces the two direction
    constraints (used for negative controls).
    """
    flats = [p.flat() for p in points]
    if constraints is None:
        totals = [_angular_momentum_flat(x) for x in flats]
        if any(np.linalg.norm(C) == 0 for C in totals):
            raise ZeroAngularMomentumError("total angular momentum vanishes")
        direction = totals[0] / np.linalg.norm(totals[0])
        for C in totals[1:]:
            if np.linalg.norm(np.cross(direction, C / np.linalg.norm(C))) > 1e-9:
                raise DomainError("points do not share the direction of C")
        constraints = direction_constraints(direction)
    mins, ranks, dims, details = [], [], [], []
    for x in flats:
        R, T = restricted_form(constraints, x)
        s = np.linalg.svd(R, compute_uv=False)
        mins.append(s[-1])
        ranks.append(int(np.sum(s > tol)))
        dims.append(T.shape[0])
        details.append(s)
    mins = np.array(mins)
    ranks = np.array(ranks)
    tangent_dim = dims[0]
    passed = bool(np.all(ranks == tangent_dim) and np.all(mins > tol))
    return CrossSectionReport(mins, ranks, tangent_dim, passed, tol, details)
