"""The domain zoo: bidisk, unit ball, symmetrized bidisk and real ellipsoids.

Smooth kinds (ball, ellipsoid) carry the closed-form defining function

    r(z) = scale * (sum_j alpha_j |z_j|^2 + beta_j Re(z_j^2) - 1)

(the ball is alpha = 1, beta = 0), with all first and second complex
derivatives in closed form.  The bidisk and the symmetrized bidisk have no
smooth defining function and are handled through their distinguished
boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import null_space
from scipy.optimize import minimize_scalar

from . import boundary
from .errors import DegenerateNormalError, InputError, UnsupportedDomainError
from .polys import as_points

KINDS = ("bidisk", "ball", "symmetrized_bidisk", "ellipsoid")
SMOOTH_KINDS = ("ball", "ellipsoid")
CONVEX_KINDS = ("bidisk", "ball", "ellipsoid")
BOUNDARY_TOL = 1e-10


@dataclass(frozen=True)
class DomainSpec:
    kind: str
    dim: int
    alpha: tuple = ()
    beta: tuple = ()
    scale: float = 1.0
    allow_unbounded: bool = field(default=False, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"unknown domain kind {self.kind!r}")
        if self.dim < 1:
            raise InputError("dimension must be positive")
        if self.kind in ("bidisk", "symmetrized_bidisk") and self.dim != 2:
            raise InputError(f"{self.kind} is two-dimensional")
        if self.scale <= 0:
            raise InputError("defining-function scale must be positive")
        if self.kind == "ellipsoid":
            a = np.asarray(self.alpha, dtype=float)
            b = np.asarray(self.beta, dtype=float)
            if a.shape != (self.dim,) or b.shape != (self.dim,):
                raise InputError("ellipsoid needs one alpha and one beta per coordinate")
            if np.any(a <= 0):
                raise InputError("ellipsoid alpha coefficients must be positive")
            if not self.allow_unbounded and not self.bounded:
                raise InputError("ellipsoid is unbounded: need alpha_j > |beta_j| for every j")

    @property
    def bounded(self):
        if self.kind != "ellipsoid":
            return True
        return bool(np.all(np.asarray(self.alpha) > np.abs(np.asarray(self.beta))))

    @property
    def coefficients(self):
        """(alpha, beta) arrays of the quadratic defining function."""
        if self.kind == "ball":
            return np.ones(self.dim), np.zeros(self.dim)
        if self.kind == "ellipsoid":
            return np.asarray(self.alpha, dtype=float), np.asarray(self.beta, dtype=float)
        raise UnsupportedDomainError(f"{self.kind} has no smooth defining function")

    def to_json(self):
        if self.kind == "ellipsoid":
            out = {"kind": "ellipsoid", "alpha": list(self.alpha), "beta": list(self.beta)}
        else:
            out = {"kind": self.kind, "dim": self.dim}
        if self.scale != 1.0:
            out["scale"] = self.scale
        return out

    @classmethod
    def from_json(cls, obj):
        kind = obj.get("kind")
        if kind == "ellipsoid":
            return ellipsoid(obj["alpha"], obj["beta"], scale=obj.get("scale", 1.0),
                             allow_unbounded=obj.get("allow_unbounded", False))
        if kind in ("bidisk", "symmetrized_bidisk"):
            return cls(kind, int(obj.get("dim", 2)))
        if kind == "ball":
            return cls("ball", int(obj["dim"]), scale=obj.get("scale", 1.0))
        raise InputError(f"unknown domain kind {kind!r}")


def ball(dim, scale=1.0):
    return DomainSpec("ball", int(dim), scale=scale)


def bidisk():
    return DomainSpec("bidisk", 2)


def symmetrized_bidisk():
    return DomainSpec("symmetrized_bidisk", 2)


def ellipsoid(alpha, beta, scale=1.0, allow_unbounded=False):
    alpha = tuple(float(a) for a in alpha)
    beta = tuple(float(b) for b in beta)
    return DomainSpec("ellipsoid", len(alpha), alpha, beta, scale, allow_unbounded)


@dataclass
class DefiningFunctionEval:
    value: float
    gradient: np.ndarray
    holomorphic_hessian: np.ndarray
    mixed_hessian: np.ndarray


def symmetrized_roots(s, p):
    """Both roots of x**2 - s x + p = 0, vectorized and cancellation-free."""
    s = np.asarray(s, dtype=complex)
    p = np.asarray(p, dtype=complex)
    sq = np.sqrt(s * s - 4 * p)
    # pick the sign that adds moduli instead of cancelling them
    sq = np.where((np.conj(s) * sq).real < 0, -sq, sq)
    q = (s + sq) / 2
    safe = np.where(q == 0, 1, q)
    with np.errstate(over="ignore", invalid="ignore"):
        other = p / safe
    # at subnormal scale the division can fail; the sum rule is then exact enough
    other = np.where((q == 0) | ~np.isfinite(other), s - q, other)
    return q, other


def _check_dim(domain, pts):
    if pts.shape[1] != domain.dim:
        raise InputError(f"point dimension {pts.shape[1]} does not match domain dimension {domain.dim}")


def _quadratic_value(domain, pts):
    a, b = domain.coefficients
    return domain.scale * (np.sum(a * np.abs(pts) ** 2 + b * (pts**2).real, axis=1) - 1.0)


def contains(domain, points):
    """Vectorized open-domain membership for an (n, d) array of points."""
    pts = as_points(points)
    _check_dim(domain, pts)
    if domain.kind == "bidisk":
        return np.max(np.abs(pts), axis=1) < 1
    if domain.kind == "symmetrized_bidisk":
        r1, r2 = symmetrized_roots(pts[:, 0], pts[:, 1])
        return (np.abs(r1) < 1) & (np.abs(r2) < 1)
    if domain.kind == "ball":
        return np.sum(np.abs(pts) ** 2, axis=1) < 1
    return _quadratic_value(domain, pts) < 0


def closure_contains(domain, points, tol=1e-9):
    """Vectorized membership in the closed domain, with slack ``tol``."""
    pts = as_points(points)
    _check_dim(domain, pts)
    if domain.kind == "bidisk":
        return np.max(np.abs(pts), axis=1) <= 1 + tol
    if domain.kind == "symmetrized_bidisk":
        r1, r2 = symmetrized_roots(pts[:, 0], pts[:, 1])
        return np.maximum(np.abs(r1), np.abs(r2)) <= 1 + tol
    return _quadratic_value(domain, pts) <= tol


def membership(domain, p):
    """True iff ``p`` lies in the open domain."""
    pts = as_points(p)
    if pts.shape[0] != 1:
        raise InputError("membership takes a single point; use contains() for batches")
    return bool(contains(domain, pts)[0])


def defining_function(domain, p):
    """Closed-form value and complex derivatives of r at ``p``."""
    if domain.kind not in SMOOTH_KINDS:
        raise UnsupportedDomainError(f"{domain.kind} has no smooth defining function")
    z = as_points(p)
    _check_dim(domain, z)
    z = z[0]
    a, b = domain.coefficients
    c = domain.scale
    return DefiningFunctionEval(
        value=float(_quadratic_value(domain, z[None])[0]),
        gradient=c * (a * np.conj(z) + b * z),
        holomorphic_hessian=c * np.diag(b).astype(complex),
        mixed_hessian=c * np.diag(a).astype(complex),
    )


def boundary_sample(domain, count, seed):
    """Deterministic boundary points: the smooth boundary, or the distinguished boundary."""
    if count < 1:
        raise InputError("count must be positive")
    rng = np.random.default_rng(seed)
    d = domain.dim
    if domain.kind in ("bidisk", "symmetrized_bidisk"):
        z = np.exp(2j * np.pi * rng.random((count, 2)))
        if domain.kind == "bidisk":
            return z
        return np.column_stack([z[:, 0] + z[:, 1], z[:, 0] * z[:, 1]])
    if not domain.bounded:
        raise UnsupportedDomainError("cannot sample the boundary of an unbounded ellipsoid")
    x = rng.standard_normal((count, d)) + 1j * rng.standard_normal((count, d))
    a, b = domain.coefficients
    q = np.sum(a * np.abs(x) ** 2 + b * (x**2).real, axis=1)
    return x / np.sqrt(q)[:, None]


def interior_sample(domain, count, seed, radius=1.0):
    """Seeded points of the open domain (ball and ellipsoid: radial shrink of boundary points)."""
    rng = np.random.default_rng(seed)
    if domain.kind == "bidisk":
        return np.sqrt(rng.random((count, 2))) * radius * np.exp(2j * np.pi * rng.random((count, 2)))
    if domain.kind == "symmetrized_bidisk":
        z = np.sqrt(rng.random((count, 2))) * radius * np.exp(2j * np.pi * rng.random((count, 2)))
        return np.column_stack([z[:, 0] + z[:, 1], z[:, 0] * z[:, 1]])
    bd = boundary_sample(domain, count, int(rng.integers(2**31)))
    t = rng.random(count) ** (1.0 / (2 * domain.dim)) * radius
    return bd * np.minimum(t, 1 - 1e-12)[:, None]


def boundary_patches(domain):
    """Patches covering the Shilov boundary; sup of |polynomial| on the closure is attained there."""
    if domain.kind == "bidisk":
        return [boundary.Torus(2)]
    if domain.kind == "symmetrized_bidisk":
        return [boundary.Torus(2, post=lambda z: np.column_stack([z[:, 0] + z[:, 1], z[:, 0] * z[:, 1]]))]
    if not domain.bounded:
        raise UnsupportedDomainError("unbounded ellipsoid has no compact boundary")
    a, b = domain.coefficients
    return [boundary.Quadric(a + b, a - b)]


def _on_boundary(domain, xi):
    if domain.kind in SMOOTH_KINDS:
        return abs(defining_function(domain, xi).value) <= 1e-8
    if domain.kind == "bidisk":
        return abs(np.max(np.abs(xi)) - 1) <= 1e-8
    r1, r2 = symmetrized_roots(xi[0], xi[1])
    return abs(max(abs(r1), abs(r2)) - 1) <= 1e-8


def outward_normal(domain, xi):
    """Unit outward normal at a boundary point, as a complex vector for Re<., .>."""
    xi = as_points(xi)[0]
    if domain.kind in SMOOTH_KINDS:
        n = np.conj(defining_function(domain, xi).gradient)
    elif domain.kind == "bidisk":
        active = np.abs(np.abs(xi) - 1) <= 1e-8
        if active.sum() != 1:
            raise DegenerateNormalError("bidisk corner or interior point: normal is not unique")
        n = np.where(active, xi, 0)
    else:
        raise UnsupportedDomainError(f"{domain.kind} is not convex")
    norm = np.linalg.norm(n)
    if norm < 1e-14:
        raise DegenerateNormalError("zero gradient at boundary point")
    return n / norm


def check_strict_convexity_at(domain, boundary_point, interior_samples, tol):
    """Supporting-plane test at a boundary point.

    Every interior sample must sit strictly below the real tangent plane,
    by a depth of more than ``tol`` times its squared distance to the
    boundary point.  ``tol`` is thus a lower bound on half the normal
    curvature seen by the samples (the unit ball passes for any tol < 1/2),
    and samples close to a flat boundary face violate it.
    """
    if domain.kind not in CONVEX_KINDS:
        raise UnsupportedDomainError(f"{domain.kind} is not convex")
    xi = as_points(boundary_point, domain.dim)[0]
    if not _on_boundary(domain, xi):
        raise InputError("boundary_point is not on the boundary")
    n = outward_normal(domain, xi)
    samples = np.asarray(interior_samples, dtype=complex).reshape(-1, domain.dim)
    if samples.shape[0] == 0:
        return True
    diff = samples - xi
    depth = -np.real(diff @ np.conj(n))
    dist2 = np.sum(np.abs(diff) ** 2, axis=1)
    return bool(np.all(depth > tol * dist2))


@dataclass
class SLCReport:
    passed: bool
    worst_margin: float
    worst_vector: np.ndarray

    def to_dict(self):
        return {
            "pass": self.passed,
            "worst_margin": self.worst_margin,
            "worst_vector": [[c.real, c.imag] for c in self.worst_vector],
        }


def _herm_embedding(herm):
    """Real symmetric matrix of xi -> xi^* H xi, with xi = a + i b stacked as (a, b)."""
    return np.block([[herm.real, -herm.imag], [herm.imag, herm.real]])


def _sym_embedding(sym):
    """Real symmetric matrix of xi -> Re(xi^T S xi)."""
    return np.block([[sym.real, -sym.imag], [-sym.imag, -sym.real]])


def _slc_worst_case(herm, sym):
    """Exact min over unit xi of xi^* H xi - |xi^T S xi|, with a minimizer.

    |xi^T S xi| is the max over theta of Re(e^{i theta} xi^T S xi), so the
    margin is the min over theta of the lowest eigenvalue of a real form.
    """
    hr = _herm_embedding(herm)
    s_re, s_im = _sym_embedding(sym), _sym_embedding(1j * sym)
    m = herm.shape[0]

    def lowest(theta):
        w, v = np.linalg.eigh(hr - np.cos(theta) * s_re - np.sin(theta) * s_im)
        return w[0], v[:, 0]

    thetas = np.linspace(0, 2 * np.pi, 361)[:-1]
    vals = [lowest(t)[0] for t in thetas]
    i = int(np.argmin(vals))
    res = minimize_scalar(lambda t: lowest(t)[0], bounds=(thetas[i] - 0.02, thetas[i] + 0.02),
                          method="bounded", options={"xatol": 1e-12})
    theta = res.x if res.fun < vals[i] else thetas[i]
    val, vec = lowest(theta)
    xi = vec[:m] + 1j * vec[m:]
    return float(val), xi / np.linalg.norm(xi)


def check_strong_linear_convexity(domain, boundary_point, tangent_samples, seed, tol):
    """Worst margin of mixed Hessian over |holomorphic Hessian| on complex tangent vectors.

    Random unit tangent vectors are combined with the exact worst case
    obtained from a one-parameter family of real eigenproblems.
    """
    ev = defining_function(domain, boundary_point)
    if abs(ev.value) > 1e-8:
        raise InputError("boundary_point is not on the boundary")
    g = ev.gradient
    if np.linalg.norm(g) < 1e-14:
        raise DegenerateNormalError("zero gradient at boundary point")
    d = domain.dim
    H, S = ev.mixed_hessian, ev.holomorphic_hessian
    if d == 1:
        return SLCReport(True, float("inf"), np.zeros(1, dtype=complex))

    def margins(X):
        lhs = np.einsum("nj,jk,nk->n", X, H, np.conj(X)).real
        rhs = np.abs(np.einsum("nj,jk,nk->n", X, S, X))
        return lhs - rhs

    rng = np.random.default_rng(seed)
    X = rng.standard_normal((tangent_samples, d)) + 1j * rng.standard_normal((tangent_samples, d))
    X = X - np.outer(X @ g, np.conj(g)) / np.vdot(g, g).real
    X /= np.linalg.norm(X, axis=1)[:, None]
    m = margins(X)
    j = int(np.argmin(m))
    worst, worst_vec = float(m[j]), X[j]

    B = null_space(g[None, :])
    K = B.conj().T @ H.T @ B
    Sb = B.T @ S @ B
    exact, xi = _slc_worst_case(K, Sb)
    if exact < worst:
        worst, worst_vec = exact, B @ xi
    return SLCReport(bool(worst > tol), worst, worst_vec)
