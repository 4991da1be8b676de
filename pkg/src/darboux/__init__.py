"""Symplectic coordinate charts for the N-body problem.

Jacobi coordinates, Delaunay and Deprit action-angle charts, numerical
certification that a chart is Darboux, and a leapfrog integrator for
checking invariance of the total angular momentum direction.
"""
from .deprit import DepritState, eliminate_nodes, from_deprit, from_deprit_n, to_deprit, to_deprit_n
from .dynamics import hamiltonian, integrate, invariance_demo, propagate_kepler
from .jacobi import Anchor, JacobiState, from_jacobi, jacobi_chart, to_jacobi
from .kepler import (
    DelaunayElements,
    OrbitalElements,
    cartesian_to_delaunay,
    cartesian_to_elements,
    delaunay_to_cartesian,
    elements_to_cartesian,
    solve_kepler,
)
from .phasespace import Chart, PhaseState
from .symcheck import bracket, certify_symplectic, jacobian, measure_d_factor

__version__ = "0.1.0"
