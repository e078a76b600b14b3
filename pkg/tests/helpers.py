"""Instance generators and independent oracles shared by the test modules."""

import numpy as np
from scipy.optimize import brentq

from holoext.polys import Poly


def disk_points(rng, n, radius=0.85, min_gap=0.15):
    """n points of the disk of the given radius with pairwise gaps >= min_gap."""
    pts = []
    while len(pts) < n:
        z = radius * np.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random())
        if all(abs(z - q) >= min_gap for q in pts):
            pts.append(z)
    return np.array(pts)


def random_poly1(rng, degree=3, scale=1.0):
    coef = scale * (rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1)) / 2
    return Poly({(k,): c for k, c in enumerate(coef)}, 1)


def disk_instance(seed):
    """Random disk problem: N <= 5 separated nodes and a random polynomial."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 6))
    nodes = disk_points(rng, n)
    return nodes, random_poly1(rng)


def unit_vector(rng, d):
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def ball_point(rng, d, radius=0.9):
    return unit_vector(rng, d) * radius * rng.random() ** (1 / (2 * d))


def rho_oracle(a, b):
    """Pseudo-hyperbolic distance through the Mobius map sending a to 0."""
    return abs((b - a) / (1 - np.conj(a) * b))


def szego_gram_loops(nodes):
    """Szego Gram by explicit loops: entry (i, j) is the kernel at node j evaluated at node i."""
    n = len(nodes)
    G = np.empty((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            G[i, j] = 1 / (1 - nodes[i] * np.conj(nodes[j]))
    return G


def two_point_norm(l1, l2, w1, w2):
    """Minimal interpolation norm for two disk nodes via Schwarz-Pick.

    The least t with rho(w1/t, w2/t) <= rho(l1, l2) and |w_i| < t.
    """
    d = rho_oracle(l1, l2)
    lo = max(abs(w1), abs(w2)) * (1 + 1e-15)

    def gap(t):
        return rho_oracle(w1 / t, w2 / t) - d

    if gap(lo) <= 0:
        return max(abs(w1), abs(w2))
    hi = lo * 2
    while gap(hi) > 0:
        hi *= 2
    return brentq(gap, lo, hi, xtol=1e-15, rtol=1e-15)
