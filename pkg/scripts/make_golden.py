"""Regenerate the CLI golden files under tests/golden.

Inputs are built from fixed seeds; every case in CASES is run through the
CLI in-process and its stdout, stderr and exit code are stored. Run after an
intentional change of output format, then review the diff.
"""
import contextlib
import io
import json
from pathlib import Path

import numpy as np

from darboux.catalog import demo_state, sample_jacobi_state, with_laplace_direction
from darboux.cli import main
from darboux.jacobi import from_jacobi
from darboux.phasespace import PhaseState
from darboux.statefile import Representation, format_state

ROOT = Path(__file__).resolve().parents[1] / "tests" / "golden"
INPUTS = ROOT / "inputs"

# name, argv (paths relative to tests/golden), expected exit code
CASES = [
    ("convert_cartesian_jacobi", ["convert", "--from", "cartesian", "--to", "jacobi", "--in", "inputs/demo3.txt"], 0),
    ("convert_cartesian_delaunay", ["convert", "--from", "cartesian", "--to", "delaunay", "--in", "inputs/demo3.txt"], 0),
    ("convert_cartesian_deprit", ["convert", "--from", "cartesian", "--to", "deprit", "--in", "inputs/demo3.txt"], 0),
    ("convert_deprit_cartesian", ["convert", "--from", "deprit", "--to", "cartesian", "--in", "inputs/demo3_deprit.txt"], 0),
    ("convert_circular_warns", ["convert", "--from", "cartesian", "--to", "delaunay", "--in", "inputs/circular2.txt"], 0),
    ("convert_vertical_c", ["convert", "--from", "cartesian", "--to", "deprit", "--in", "inputs/vertical3.txt"], 3),
    ("convert_malformed", ["convert", "--from", "cartesian", "--to", "jacobi", "--in", "inputs/malformed.txt"], 2),
    ("convert_wrong_kind", ["convert", "--from", "jacobi", "--to", "cartesian", "--in", "inputs/demo3.txt"], 2),
    ("convert_missing_file", ["convert", "--from", "cartesian", "--to", "jacobi", "--in", "inputs/absent.txt"], 2),
    ("verify_deprit3", ["verify", "--chart", "deprit3", "--points", "100", "--seed", "7", "--tol", "1e-6"], 0),
    ("verify_jacobi3_fd", ["verify", "--chart", "jacobi3", "--points", "5", "--seed", "3", "--scheme", "fd"], 0),
    ("verify_scaled_bad", ["verify", "--chart", "scaled-bad", "--points", "5", "--seed", "7"], 1),
    ("verify_unknown_chart", ["verify", "--chart", "nosuch"], 2),
    ("nodes_example", ["nodes", "--G1", "1.5", "--G2", "1.0", "--C", "2.0"], 0),
    ("nodes_triangle", ["nodes", "--G1", "1.0", "--G2", "1.0", "--C", "3.0"], 3),
    ("kepler_circular", ["kepler", "--M", "1.0", "--e", "0.0"], 0),
    ("kepler_eccentric", ["kepler", "--M", "1.0", "--e", "0.5"], 0),
    ("kepler_bad_e", ["kepler", "--M", "1.0", "--e", "1.5"], 3),
    ("propagate_two_body", ["propagate", "--in", "inputs/circular2.txt", "--dt", "0.01", "--steps", "20"], 0),
    ("propagate_collision", ["propagate", "--in", "inputs/headon2.txt", "--dt", "0.015625", "--steps", "100"], 3),
    ("propagate_bad_dt", ["propagate", "--in", "inputs/circular2.txt", "--dt", "-1", "--steps", "5"], 3),
    ("demo_invariance_short", ["demo-invariance", "--steps", "200"], 0),
    ("demo_invariance_file", ["demo-invariance", "--in", "inputs/demo3.txt", "--steps", "50", "--dt", "0.01"], 0),
    ("no_command", [], 2),
]


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue(), err.getvalue()


def write_inputs():
    INPUTS.mkdir(parents=True, exist_ok=True)
    demo = demo_state()
    (INPUTS / "demo3.txt").write_text(format_state(Representation("cartesian", demo.masses, demo)))
    m = np.array([1.0, 1.0])
    circ = PhaseState(m, [[-0.5, 0, 0], [0.5, 0, 0]], [[0, -0.5 * np.sqrt(2), 0], [0, 0.5 * np.sqrt(2), 0]])
    (INPUTS / "circular2.txt").write_text(format_state(Representation("cartesian", m, circ)))
    # near-massless bodies meeting after 64 steps of 1/64
    tiny = 1e-20
    head = PhaseState([tiny, tiny], [[0, 0, 0], [1, 0, 0]], [[0, 0, 0], [-tiny, 0, 0]])
    (INPUTS / "headon2.txt").write_text(format_state(Representation("cartesian", head.masses, head)))
    j = with_laplace_direction(sample_jacobi_state(np.random.default_rng(5), 3), [0, 0, 1])
    vert = from_jacobi(j)
    (INPUTS / "vertical3.txt").write_text(format_state(Representation("cartesian", vert.masses, vert)))
    (INPUTS / "malformed.txt").write_text("mass 0 1.0\nmass 1 1.0\nbody 0 0 0 0 0 0\nbody 1 1 0 0 0 1 0 0\n")
    code, out, _ = run(["convert", "--from", "cartesian", "--to", "deprit", "--in", str(INPUTS / "demo3.txt")])
    assert code == 0
    (INPUTS / "demo3_deprit.txt").write_text(out)


def main_golden():
    import os

    write_inputs()
    os.chdir(ROOT)
    table = []
    for name, argv, expected in CASES:
        code, out, err = run(argv)
        if code != expected:
            raise SystemExit(f"{name}: exit {code}, expected {expected}\n{err}")
        (ROOT / f"{name}.out").write_text(out)
        (ROOT / f"{name}.err").write_text(err)
        table.append({"name": name, "argv": argv, "exit": code})
    (ROOT / "cases.json").write_text(json.dumps(table, indent=1) + "\n")
    print(f"wrote {len(table)} cases to {ROOT}")


if __name__ == "__main__":
    main_golden()
