"""Dataclass configurations for sweeps and the invariance demo."""
from __future__ import annotations

import os
from dataclasses import dataclass

from .catalog import DEFAULT_MARGIN
from .phasespace import CERTIFY_TOL

TOL_ENV = "DARBOUX_TOL"


def default_tolerance() -> float:
    """Certification tolerance, optionally overridden through ``DARBOUX_TOL``."""
    raw = os.environ.get(TOL_ENV)
    return CERTIFY_TOL if raw is None else float(raw)


@dataclass(frozen=True)
class SweepConfig:
    chart: str
    points: int = 100
    seed: int = 0
    tol: float = CERTIFY_TOL
    margin: float = DEFAULT_MARGIN
    workers: int = 1
    scheme: str = "auto"


@dataclass(frozen=True)
class InvarianceConfig:
    dt: float = 0.005
    steps: int = 10_000
    angle_tol: float = 1e-10
    invariant_tol: float = 1e-8
    # angles that must move noticeably for the demo to be informative
    min_variation: float = 1e-6


SHIPPED_SWEEPS = (
    SweepConfig("jacobi3", seed=7),
    SweepConfig("jacobi4", seed=7),
    SweepConfig("delaunay-planar", seed=7),
    SweepConfig("delaunay", seed=7),
    SweepConfig("deprit3", seed=7),
    SweepConfig("deprit4", seed=7),
)
