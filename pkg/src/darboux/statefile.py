"""Plain-text state files and conversions between representations.

One record per line, ``#`` starts a comment. Numbers are written with 17
significant digits so that files round-trip bit for bit.

    mass <j> <m>                                  every representation
    body <j> <qx> <qy> <qz> <px> <py> <pz>        cartesian
    anchor <P0x> <P0y> <P0z> <Q0x> <Q0y> <Q0z>    reduced representations
    jacobi <i> <Px> <Py> <Pz> <Qx> <Qy> <Qz>      jacobi
    elem <i> <L> <l> <G> <g> <H> <h>              delaunay (one per Jacobi pair)
    deprit ellipse <i> <L> <l> <G> <gbar>         deprit
    deprit chain <k> <Psi> <psi>
    deprit total <Phi1> <phi1> <Phi2> <phi2>
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .deprit import DepritState, from_deprit_n, to_deprit_n
from .dynamics import Trajectory
from .errors import DarbouxError
from .jacobi import Anchor, JacobiState, from_jacobi, reduced_masses, to_jacobi
from .kepler import DelaunayElements, cartesian_to_delaunay, delaunay_to_cartesian
from .phasespace import PhaseState

KINDS = ("cartesian", "jacobi", "delaunay", "deprit")


class StateFileError(DarbouxError):
    """Malformed state file."""


def fmt(x) -> str:
    return format(float(x), ".17g")


@dataclass(frozen=True)
class Representation:
    """A state in one of the four representations.

    ``payload`` is a PhaseState (cartesian), JacobiState (jacobi), a tuple of
    DelaunayElements (delaunay) or a DepritState (deprit). Reduced
    representations keep the dropped anchor pair so that nothing is lost.
    """

    kind: str
    masses: np.ndarray
    payload: object
    anchor: Optional[Anchor] = None
    warnings: tuple = field(default=())


# -- parsing ------------------------------------------------------------------


def _floats(tokens, count, lineno):
    if len(tokens) != count:
        raise StateFileError(f"line {lineno}: expected {count} numbers, got {len(tokens)}")
    try:
        values = [float(t) for t in tokens]
    except ValueError as exc:
        raise StateFileError(f"line {lineno}: {exc}") from None
    if not np.all(np.isfinite(values)):
        raise StateFileError(f"line {lineno}: non-finite value")
    return values


def _index(token, lineno):
    try:
        return int(token)
    except ValueError:
        raise StateFileError(f"line {lineno}: bad index {token!r}") from None


def _contiguous(table, start, what):
    keys = sorted(table)
    if keys != list(range(start, start + len(keys))):
        raise StateFileError(f"{what} indices must be contiguous from {start}, got {keys}")
    return [table[k] for k in keys]


def parse_state(text: str) -> Representation:
    masses, bodies, jac, elems, ell, chain = {}, {}, {}, {}, {}, {}
    anchor = total = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        tag, rest = line[0], line[1:]
        if tag == "mass":
            j = _index(rest[0] if rest else "", lineno)
            masses[j] = _floats(rest[1:], 1, lineno)[0]
        elif tag == "body":
            bodies[_index(rest[0] if rest else "", lineno)] = _floats(rest[1:], 6, lineno)
        elif tag == "anchor":
            anchor = _floats(rest, 6, lineno)
        elif tag == "jacobi":
            jac[_index(rest[0] if rest else "", lineno)] = _floats(rest[1:], 6, lineno)
        elif tag == "elem":
            elems[_index(rest[0] if rest else "", lineno)] = _floats(rest[1:], 6, lineno)
        elif tag == "deprit" and rest[:1] == ["ellipse"]:
            ell[_index(rest[1] if len(rest) > 1 else "", lineno)] = _floats(rest[2:], 4, lineno)
        elif tag == "deprit" and rest[:1] == ["chain"]:
            chain[_index(rest[1] if len(rest) > 1 else "", lineno)] = _floats(rest[2:], 2, lineno)
        elif tag == "deprit" and rest[:1] == ["total"]:
            total = _floats(rest[1:], 4, lineno)
        else:
            raise StateFileError(f"line {lineno}: unknown record {tag!r}")

    kinds = [k for k, present in zip(KINDS, (bodies, jac, elems, ell or total)) if present]
    if len(kinds) != 1:
        raise StateFileError(f"expected records of exactly one representation, found {kinds or 'none'}")
    kind = kinds[0]
    if not masses:
        raise StateFileError("no mass records")
    m = np.array(_contiguous(masses, 0, "mass"))
    if np.any(m <= 0):
        raise StateFileError("masses must be positive")
    n = m.size - 1
    anc = None if anchor is None else Anchor(np.array(anchor[:3]), np.array(anchor[3:]))

    if kind == "cartesian":
        rows = np.array(_contiguous(bodies, 0, "body"))
        if len(rows) != m.size:
            raise StateFileError(f"{len(rows)} bodies but {m.size} masses")
        return Representation(kind, m, PhaseState(m, rows[:, :3], rows[:, 3:]))
    if kind == "jacobi":
        rows = np.array(_contiguous(jac, 1, "jacobi"))
        if len(rows) != n:
            raise StateFileError(f"expected {n} jacobi records, got {len(rows)}")
        return Representation(kind, m, JacobiState(m, rows[:, :3], rows[:, 3:]), anc)
    if kind == "delaunay":
        rows = _contiguous(elems, 1, "elem")
        if len(rows) != n:
            raise StateFileError(f"expected {n} elem records, got {len(rows)}")
        return Representation(kind, m, tuple(DelaunayElements(*r) for r in rows), anc)
    rows = _contiguous(ell, 1, "deprit ellipse")
    chains = _contiguous(chain, 2, "deprit chain") if chain else []
    if len(rows) != n or len(chains) != max(n - 2, 0) or total is None:
        raise StateFileError(f"incomplete deprit record set for {m.size} bodies")
    return Representation(kind, m, DepritState(m, rows, np.reshape(chains, (-1, 2)), *total), anc)


def read_state(path) -> Representation:
    with open(path) as fh:
        return parse_state(fh.read())


# -- formatting ---------------------------------------------------------------


def format_state(rep: Representation) -> str:
    lines = [f"# representation: {rep.kind}"]
    lines += [f"mass {j} {fmt(mj)}" for j, mj in enumerate(rep.masses)]
    if rep.anchor is not None:
        lines.append("anchor " + " ".join(fmt(v) for v in (*rep.anchor.P0, *rep.anchor.Q0)))
    x = rep.payload
    if rep.kind == "cartesian":
        for j in range(x.n_bodies):
            lines.append(f"body {j} " + " ".join(fmt(v) for v in (*x.q[j], *x.p[j])))
    elif rep.kind == "jacobi":
        for i in range(x.n_pairs):
            lines.append(f"jacobi {i + 1} " + " ".join(fmt(v) for v in (*x.P[i], *x.Q[i])))
    elif rep.kind == "delaunay":
        for i, d in enumerate(x):
            lines.append(f"elem {i + 1} " + " ".join(fmt(v) for v in d.as_array()))
    else:
        for i, row in enumerate(x.ellipses):
            lines.append(f"deprit ellipse {i + 1} " + " ".join(fmt(v) for v in row))
        for k, row in enumerate(x.chain):
            lines.append(f"deprit chain {k + 2} " + " ".join(fmt(v) for v in row))
        lines.append("deprit total " + " ".join(fmt(v) for v in (x.Phi1, x.phi1, x.Phi2, x.phi2)))
    return "\n".join(lines) + "\n"


def write_state(path, rep: Representation) -> None:
    with open(path, "w") as fh:
        fh.write(format_state(rep))


def format_trajectory(traj: Trajectory) -> str:
    """One sample per line: ``t q0 .. qN p0 .. pN F Cx Cy Cz``."""
    n = traj.masses.size
    header = ["t"] + [f"q{j}{c}" for j in range(n) for c in "xyz"]
    header += [f"p{j}{c}" for j in range(n) for c in "xyz"] + ["F", "Cx", "Cy", "Cz"]
    lines = ["# " + " ".join(header)]
    for k in range(len(traj)):
        row = [traj.times[k], *traj.q[k].ravel(), *traj.p[k].ravel(), traj.energy[k], *traj.C[k]]
        lines.append(" ".join(fmt(v) for v in row))
    return "\n".join(lines) + "\n"


# -- conversions --------------------------------------------------------------


def _to_hub(rep: Representation):
    """(JacobiState, Anchor or None) for any representation."""
    m = rep.masses
    if rep.kind == "cartesian":
        return to_jacobi(rep.payload)
    if rep.kind == "jacobi":
        return rep.payload, rep.anchor
    if rep.kind == "delaunay":
        mu, mgrav = reduced_masses(m)
        P, Q = [], []
        for i, d in enumerate(rep.payload):
            q, p = delaunay_to_cartesian(d, mu[i], mgrav[i])
            P.append(p)
            Q.append(q)
        return JacobiState(m, P, Q), rep.anchor
    return from_deprit_n(rep.payload), rep.anchor


def convert(rep: Representation, target: str) -> Representation:
    """Convert between representations, going through Jacobi coordinates.

    Degeneracy flags of Delaunay elements (circular, horizontal) are
    reported in ``warnings``; a Deprit target raises on degenerate input.
    """
    if target not in KINDS:
        raise ValueError(f"unknown representation {target!r}")
    if target == rep.kind:
        return rep
    j, anchor = _to_hub(rep)
    m = rep.masses
    if target == "cartesian":
        return Representation(target, m, from_jacobi(j, anchor))
    if target == "jacobi":
        return Representation(target, m, j, anchor)
    if target == "delaunay":
        elems, warnings = [], []
        for i in range(j.n_pairs):
            d = cartesian_to_delaunay(j.Q[i], j.P[i], j.mu[i], j.mgrav[i])
            if d.circular:
                warnings.append(f"Circular: ellipse {i + 1} is circular, g and l are conventional")
            if d.horizontal:
                warnings.append(f"Horizontal: ellipse {i + 1} is horizontal, h and g are conventional")
            elems.append(d)
        return Representation(target, m, tuple(elems), anchor, tuple(warnings))
    return Representation(target, m, to_deprit_n(j), anchor)
