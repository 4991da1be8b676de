"""Acceptance criteria 1-9, each at its stated tolerance.

Every test records a one-line verdict that is printed in the terminal
summary, then asserts it.
"""
import contextlib
import io
import json
import os
from pathlib import Path

import numpy as np
import pytest

from darboux.catalog import (
    demo_state,
    run_sweep,
    sample_cartesian_state,
    sample_ellipse,
    sample_jacobi_state,
    sample_points,
    with_laplace_direction,
)
from darboux.cli import main
from darboux.config import SHIPPED_SWEEPS, InvarianceConfig, SweepConfig
from darboux.deprit import angular_momenta, eliminate_nodes, from_deprit_n, to_deprit_n
from darboux.dynamics import integrate, invariance_demo, propagate_kepler
from darboux.jacobi import from_jacobi, to_jacobi
from darboux.kepler import (
    OrbitalElements,
    cartesian_to_delaunay,
    cartesian_to_elements,
    delaunay_to_cartesian,
    elements_to_cartesian,
    elements_to_delaunay,
    mean_motion,
    solve_kepler,
)
from darboux.phasespace import PhaseState, flatten
from darboux.symcheck import bracket, check_cross_section

from oracles import angle_diff, relative_inf

TOL = 1e-6
GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="module")
def sweeps():
    configs = list(SHIPPED_SWEEPS) + [SweepConfig("scaled-bad", seed=7)]
    return {c.chart: run_sweep(c.chart, c.points, c.seed, c.tol, workers=c.workers, scheme=c.scheme) for c in configs}


def test_criterion_1_chart_certification(sweeps, verdict):
    names = ("jacobi3", "jacobi4", "delaunay-planar", "delaunay", "deprit3", "deprit4")
    worst = {n: sweeps[n].worst_defect for n in names}
    ok = all(sweeps[n].passed and len(sweeps[n].reports) == 100 for n in names) and max(worst.values()) < TOL
    detail = ", ".join(f"{n} {w:.1e}" for n, w in worst.items())
    assert verdict(1, "symplectic defect < 1e-6 at 100 points", ok, detail)


def test_criterion_2_d_factor(sweeps, verdict):
    ds = np.concatenate([sweeps[n].d_values for n in ("delaunay", "deprit3", "deprit4")])
    bad = np.array(sweeps["scaled-bad"].d_values)
    err = float(np.max(np.abs(ds - 1)))
    ctrl = float(np.max(np.abs(bad - 0.5)))
    ok = ds.size == 300 and err < TOL and ctrl < TOL
    assert verdict(2, "D = 1 on sweeps, control 0.5", ok, f"max |D-1| {err:.1e} over {ds.size}, control |D-0.5| {ctrl:.1e}")


def test_criterion_3_planar_bracket_table(verdict):
    worst = 0.0
    for chart, x in sample_points("delaunay-planar", 100, 7):
        comp = [(lambda k: (lambda z: chart.forward(z)[k]))(k) for k in range(4)]
        L, l, G, g = comp
        table = [(L, l, 1.0), (G, g, 1.0), (L, g, 0.0), (G, l, 0.0), (L, G, 0.0), (l, g, 0.0)]
        for f, h, want in table:
            worst = max(worst, abs(bracket(f, h, x) - want))
    assert verdict(3, "planar bracket table at 100 points", worst < TOL, f"max error {worst:.1e}")


def test_criterion_4_elimination_of_nodes(rng, verdict):
    sum_err = 0.0
    for G1 in np.linspace(0.05, 2.0, 25):
        for G2 in np.linspace(0.05, 2.0, 25):
            lo, hi = abs(G1 - G2), G1 + G2
            for C in np.linspace(lo, hi, 12)[1:-1]:
                r = eliminate_nodes(G1, G2, C)
                sum_err = max(sum_err, abs(r.H1 + r.H2 - C))
    geo_err = 0.0
    for _ in range(100):
        j = sample_jacobi_state(rng, 3)
        am = angular_momenta(j)
        Chat = am.total / np.linalg.norm(am.total)
        G = np.linalg.norm(am.per_ellipse, axis=1)
        r = eliminate_nodes(G[0], G[1], np.linalg.norm(am.total))
        geo_err = max(geo_err, abs(am.per_ellipse[0] @ Chat - r.H1), abs(am.per_ellipse[1] @ Chat - r.H2))
    ok = sum_err <= 1e-15 and geo_err < 1e-10
    assert verdict(4, "H1 + H2 = C and geometric H_i", ok, f"sum {sum_err:.1e}, geometric {geo_err:.1e}")


def test_criterion_5_round_trips(verdict):
    rng = np.random.default_rng(7)
    errs = {"cartesian-jacobi": 0.0, "cartesian-delaunay": 0.0, "jacobi-deprit3": 0.0, "jacobi-deprit4": 0.0}
    for _ in range(100):
        for n in (3, 4):
            s = sample_cartesian_state(rng, n)
            j, anchor = to_jacobi(s)
            errs["cartesian-jacobi"] = max(errs["cartesian-jacobi"], relative_inf(flatten(from_jacobi(j, anchor)), flatten(s)))
        mu, mgrav = rng.uniform(0.3, 3.0, size=2)
        Q, P = sample_ellipse(rng, mu, mgrav)
        Q2, P2 = delaunay_to_cartesian(cartesian_to_delaunay(Q, P, mu, mgrav), mu, mgrav)
        errs["cartesian-delaunay"] = max(errs["cartesian-delaunay"], relative_inf(np.r_[P2, Q2], np.r_[P, Q]))
        for n, key in ((3, "jacobi-deprit3"), (4, "jacobi-deprit4")):
            j = sample_jacobi_state(rng, n)
            errs[key] = max(errs[key], relative_inf(from_deprit_n(to_deprit_n(j)).flat(), j.flat()))
    limits = {"cartesian-jacobi": 1e-12, "cartesian-delaunay": 1e-10, "jacobi-deprit3": 1e-9, "jacobi-deprit4": 1e-8}
    ok = all(errs[k] < limits[k] for k in limits)
    assert verdict(5, "round trips", ok, ", ".join(f"{k} {v:.1e}" for k, v in errs.items()))


def test_criterion_6_cross_section(verdict):
    rng = np.random.default_rng(7)
    points = [with_laplace_direction(sample_jacobi_state(rng, 3), (0.2, -0.3, 0.9)) for _ in range(20)]
    good = check_cross_section(points)
    n = 2
    bad = check_cross_section(points, constraints=lambda x: x[[3 * n, 3 * n + 1]])
    smallest = float(np.min(good.min_singular_values))
    ok = good.passed and np.all(good.ranks == good.tangent_dim) and smallest > 1e-6 and not bad.passed
    assert verdict(6, "fixed-direction submanifold symplectic, control degenerate", ok,
                   f"min singular value {smallest:.2e}, control rank {int(bad.ranks.max())}/{bad.tangent_dim}")


def test_criterion_7_invariance_demo(verdict):
    cfg = InvarianceConfig()
    report = invariance_demo(demo_state(), cfg.dt, cfg.steps, tol=cfg.angle_tol)
    const = max(report.spread(x) for x in ("Phi1", "Phi2", "phi2"))
    moving = min(report.spread(x) for x in ("l1", "l2", "gbar1", "gbar2", "phi1"))
    ok = len(report.trajectory) == cfg.steps + 1 and report.max_angle < cfg.angle_tol
    ok = ok and const < cfg.invariant_tol and moving > cfg.min_variation
    assert verdict(7, f"{cfg.steps} leapfrog steps", ok,
                   f"C-hat angle {report.max_angle:.1e} rad, Phi1/Phi2/phi2 spread {const:.1e}, smallest moving spread {moving:.1e}")


def test_criterion_8_kepler(verdict):
    worst = 0.0
    for e in np.linspace(0.0, 0.99, 40):
        for M in np.linspace(0.0, 2 * np.pi, 25, endpoint=False):
            E = solve_kepler(M, e)
            worst = max(worst, angle_diff(E - e * np.sin(E), M))
    mu, mgrav = 0.5, 2.0
    el = OrbitalElements(a=1.3, e=0.4, i=0.7, omega=1.2, Omega=0.5, mean_anomaly=2.0)
    d = elements_to_delaunay(el, mu, mgrav)
    Q, P = elements_to_cartesian(el, mu, mgrav)
    T = 2 * np.pi / mean_motion(d.L, mu, mgrav)
    steps = 20_000
    state = PhaseState([1.0, 1.0], [-Q / 2, Q / 2], [-P, P])
    traj = integrate(state, T / steps, steps)
    q, p = traj.q[-1], traj.p[-1]
    got = cartesian_to_elements(q[1] - q[0], p[1], mu, mgrav)
    want = propagate_kepler(d, mu, mgrav, T)
    prop = max(abs(got.a - el.a) / el.a, abs(got.e - el.e), abs(got.i - el.i),
               angle_diff(got.mean_anomaly, want.l), angle_diff(got.omega, want.g), angle_diff(got.Omega, want.h))
    ok = worst < 1e-13 and prop < 1e-6
    assert verdict(8, "Kepler residual on 1000 points, one-period propagation", ok,
                   f"residual {worst:.1e}, propagation {prop:.1e}")


def test_criterion_9_cli_golden(verdict):
    cases = json.loads((GOLDEN / "cases.json").read_text())
    failures = []
    cwd = os.getcwd()
    os.chdir(GOLDEN)
    try:
        for case in cases:
            runs = []
            for _ in range(2):
                out, err = io.StringIO(), io.StringIO()
                with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
                    code = main(case["argv"])
                runs.append((code, out.getvalue(), err.getvalue()))
            expected = (case["exit"], (GOLDEN / f"{case['name']}.out").read_text(),
                        (GOLDEN / f"{case['name']}.err").read_text())
            if runs[0] != runs[1] or runs[0] != expected:
                failures.append(case["name"])
    finally:
        os.chdir(cwd)
    commands = sorted({c["argv"][0] for c in cases if c["argv"]})
    codes = sorted({c["exit"] for c in cases})
    ok = not failures and len(commands) == 6 and codes == [0, 1, 2, 3]
    assert verdict(9, "CLI golden files", ok,
                   f"{len(cases) - len(failures)}/{len(cases)} cases, commands {len(commands)}, exit codes {codes}")
