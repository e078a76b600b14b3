"""Reproducing-kernel Grams, Pick matrices and minimal interpolation norms.

Gram entries follow the reproducing property: ``G[i, j] = <k_j, k_i> =
k_j(lam_i)``.  For the Szego kernel of the disk this is ``1 / (1 - lam_i *
conj(lam_j))``, which is Hermitian with ``G[i, i] = 1 / (1 - |lam_i|^2)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, InputError

KERNELS = ("szego_disk", "szego_polydisk_product", "cauchy_szego_ball")
EXACT_KERNELS = ("szego_disk",)
DISTINCT_TOL = 1e-12
PSD_TOL = 1e-9
MAX_BISECTION = 200


def _as_nodes(kernel_id, nodes):
    if kernel_id not in KERNELS:
        raise InputError(f"unknown kernel {kernel_id!r}; expected one of {KERNELS}")
    pts = np.asarray(nodes, dtype=complex)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise InputError("nodes must be a non-empty sequence of points")
    if not np.all(np.isfinite(pts)):
        raise InputError("nodes must be finite")
    if kernel_id == "szego_disk" and pts.shape[1] != 1:
        raise InputError("szego_disk takes scalar nodes")
    if kernel_id == "cauchy_szego_ball":
        inside = np.sum(np.abs(pts) ** 2, axis=1) < 1
    else:
        inside = np.all(np.abs(pts) < 1, axis=1)
    if not inside.all():
        raise DomainError(f"node {int(np.flatnonzero(~inside)[0])} lies outside the kernel's domain")
    diff = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=2)
    np.fill_diagonal(diff, np.inf)
    if diff.min() <= DISTINCT_TOL:
        raise InputError("nodes must be pairwise distinct")
    return pts


@dataclass
class KernelGram:
    kernel_id: str
    nodes: np.ndarray
    entries: np.ndarray

    @property
    def size(self):
        return self.entries.shape[0]

    @property
    def dim(self):
        return self.nodes.shape[1]

    def to_json(self):
        return {"kernel": self.kernel_id, "nodes": [[[c.real, c.imag] for c in p] for p in self.nodes]}


def kernel_matrix(kernel_id, left, right):
    """Matrix ``K[i, j] = k_{right_j}(left_i)`` for the named kernel (no validation)."""
    inner = left @ np.conj(right).T
    if kernel_id == "cauchy_szego_ball":
        return (1 - inner) ** (-left.shape[1])
    prod = 1 / (1 - left[:, None, :] * np.conj(right)[None, :, :])
    return np.prod(prod, axis=2)


def gram(kernel_id, nodes):
    """Gram matrix of the kernel functions at ``nodes``."""
    pts = _as_nodes(kernel_id, nodes)
    G = kernel_matrix(kernel_id, pts, pts)
    G = 0.5 * (G + G.conj().T)
    return KernelGram(kernel_id, pts, G)


@dataclass
class PickProblem:
    gram: KernelGram
    targets: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.targets, dtype=complex).reshape(-1)
        if w.size != self.gram.size:
            raise InputError(f"{w.size} targets for {self.gram.size} nodes")
        if not np.all(np.isfinite(w)):
            raise InputError("targets must be finite")
        self.targets = w

    @classmethod
    def from_json(cls, obj):
        try:
            kernel = obj["kernel"]
            nodes = _complex_array(obj["nodes"])
            targets = _complex_array(obj["targets"])
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed Pick problem: {exc}") from None
        return cls(gram(kernel, nodes), targets)


def _complex_array(obj):
    """Nested lists whose innermost level is ``[re, im]`` (or a bare real) to complex."""
    arr = np.asarray(obj, dtype=float)
    if arr.ndim >= 1 and arr.shape[-1] == 2 and arr.ndim >= 2:
        return arr[..., 0] + 1j * arr[..., 1]
    return arr.astype(complex)


def pick_matrix(problem):
    """``M[i, j] = (1 - w_i conj(w_j)) G[i, j]``."""
    w = problem.targets
    M = (1 - np.outer(w, np.conj(w))) * problem.gram.entries
    return 0.5 * (M + M.conj().T)


def _check_hermitian(M):
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InputError("expected a square matrix")
    scale = max(1.0, float(np.linalg.norm(M, 2))) if M.size else 1.0
    if np.max(np.abs(M - M.conj().T), initial=0.0) > 1e-10 * scale:
        raise InputError("matrix is not Hermitian")
    return 0.5 * (M + M.conj().T), scale


def min_eigenvalue(M):
    M, _ = _check_hermitian(M)
    return float(np.linalg.eigvalsh(M)[0])


def is_psd(M, tol=PSD_TOL):
    """Smallest eigenvalue >= -tol * max(1, ||M||)."""
    M, scale = _check_hermitian(M)
    if M.size == 0:
        return True
    return bool(np.linalg.eigvalsh(M)[0] >= -tol * scale)


@dataclass
class MinimalNormReport:
    value: float
    bracket: tuple
    iterations: int
    exact: bool
    trace: list = field(default_factory=list)

    def __float__(self):
        return self.value

    def to_dict(self):
        return {
            "t_star": self.value,
            "bracket": list(self.bracket),
            "iterations": self.iterations,
            "exact": self.exact,
            "bound": "exact" if self.exact else "lower",
            "min_eigenvalue_trace": [[t, e] for t, e in self.trace],
        }


def solve_minimal_norm(kernel_id, nodes, targets, tol=1e-10):
    """Least t > 0 such that the Pick matrix of ``targets / t`` is PSD, by bisection.

    Feasibility is tested on the Pick matrix whitened by the Gram's Cholesky
    factor, ``I - L^-1 W G W* L^-* / t^2``; this has the same inertia as the
    Pick matrix but is well scaled, so the bisection resolves t to ``tol``
    even when G is far from the identity.  The trace records the smallest
    eigenvalue of the unwhitened Pick matrix at each probe.
    """
    if not tol > 0:
        raise InputError("tol must be positive")
    problem = PickProblem(gram(kernel_id, nodes), targets)
    G, w = problem.gram.entries, problem.targets
    exact = kernel_id in EXACT_KERNELS
    if not np.any(w):
        return MinimalNormReport(0.0, (0.0, 0.0), 0, exact, [])
    try:
        L = np.linalg.cholesky(G)
    except np.linalg.LinAlgError:
        raise InputError("Gram matrix is numerically singular; nodes too close") from None
    B = np.linalg.solve(L, w[:, None] * L)
    K = B @ B.conj().T

    def probe(t):
        lam = float(np.linalg.eigvalsh(np.eye(len(w)) - K / t**2)[0])
        raw = float(np.linalg.eigvalsh(pick_matrix(PickProblem(problem.gram, w / t)))[0])
        trace.append((t, raw))
        return lam >= -PSD_TOL * 1e-3

    trace = []
    lo = float(np.max(np.abs(w)))
    hi = max(float(np.sum(np.abs(w)) * np.max(G.diagonal().real)), lo)
    bracket = (lo, hi)
    if probe(lo):
        return MinimalNormReport(lo, bracket, 0, exact, trace)
    while not probe(hi):
        hi *= 2
    bracket = (lo, hi)
    it = 0
    while hi - lo > tol * max(1.0, hi) and it < MAX_BISECTION:
        mid = 0.5 * (lo + hi)
        if probe(mid):
            hi = mid
        else:
            lo = mid
        it += 1
    return MinimalNormReport(hi, bracket, it, exact, trace)


def minimal_sup_norm(kernel_id, nodes, targets, tol=1e-10):
    """Minimal sup-norm of an interpolant (exact for szego_disk, a lower bound otherwise)."""
    return solve_minimal_norm(kernel_id, nodes, targets, tol).value
