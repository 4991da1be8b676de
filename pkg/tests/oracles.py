"""Independent reference computations used by the tests.

Nothing here imports the package's own conversion code: each oracle works
from first principles (high-precision bisection, direct vector algebra).
"""
import mpmath as mp
import numpy as np


def kepler_bisection(M, e, digits=40):
    """Eccentric anomaly by bisection of E - e sin E - M on [0, 2 pi)."""
    with mp.workdps(digits):
        M = mp.mpf(M) % (2 * mp.pi)
        e = mp.mpf(e)
        lo, hi = mp.mpf(0), 2 * mp.pi
        for _ in range(4 * digits):
            mid = (lo + hi) / 2
            if mid - e * mp.sin(mid) - M > 0:
                hi = mid
            else:
                lo = mid
        return float((lo + hi) / 2)


def two_body_energy(Q, P, mu, mgrav):
    return float(P @ P / (2 * mu) - mu * mgrav / np.linalg.norm(Q))


def newton_potential(masses, q):
    total = 0.0
    for j in range(len(masses)):
        for k in range(j + 1, len(masses)):
            total -= masses[j] * masses[k] / np.linalg.norm(q[j] - q[k])
    return total


def cartesian_energy(masses, q, p):
    return float(sum(p[j] @ p[j] / (2 * masses[j]) for j in range(len(masses))) + newton_potential(masses, q))


def semi_major_axis(Q, P, mu, mgrav):
    energy = P @ P / (2 * mu**2) - mgrav / np.linalg.norm(Q)
    return float(-mgrav / (2 * energy))


def relative_inf(a, b):
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return float(np.max(np.abs(a - b)) / max(1.0, np.max(np.abs(b))))


def angle_diff(a, b):
    d = np.mod(np.asarray(a) - np.asarray(b) + np.pi, 2 * np.pi) - np.pi
    return np.abs(d)
