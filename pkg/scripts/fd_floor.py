"""Finite-difference floor study: FD vs dual-number defects of each chart.

For every chart the worst symplectic defect over a seeded sweep is computed
with both Jacobian schemes and with the FD step scaled by a few factors, to
show that the FD defect is truncation error scaling as h^2.
"""
import argparse

import numpy as np

from darboux.catalog import sample_points
from darboux.symcheck import bracket_matrix, fd_jacobian, fd_steps, jacobian

CHARTS = ("jacobi3", "delaunay-planar", "delaunay", "deprit3", "deprit4")


def defect(chart, J):
    return float(np.max(np.abs(bracket_matrix(J) - chart.canonical_pattern())))


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--points", type=int, default=100)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()
    factors = (0.25, 0.5, 1.0, 2.0)
    print(f"{'chart':16s} {'dual':>9s} " + " ".join(f"{'fd h*' + str(f):>10s}" for f in factors))
    for name in CHARTS:
        items = sample_points(name, args.points, args.seed)
        worst_dual = max(defect(c, jacobian(c, x, "dual")) for c, x in items)
        row = []
        for f in factors:
            w = 0.0
            for c, x in items:
                J = fd_jacobian(c.forward, x, sorted(c.periodic), steps=f * fd_steps(x))
                w = max(w, defect(c, J))
            row.append(w)
        print(f"{name:16s} {worst_dual:9.1e} " + " ".join(f"{w:10.2e}" for w in row))


if __name__ == "__main__":
    main()
