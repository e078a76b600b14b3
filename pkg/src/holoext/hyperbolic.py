"""Pseudo-hyperbolic geometry, ball geodesics, and extremal-map checks.

Complex geodesics of the unit ball are the slices of complex affine lines.
Parameterized affinely, ``k(zeta) = c0 + zeta * c1`` with ``c0`` the point of
the line nearest the origin and ``|c0|**2 + |c1|**2 = 1``, the slice is
exactly ``k(D)`` and ``k`` is a Kobayashi extremal for every pair of points on
it.  The Royden-Wong functional of such a disc is ``h(z) = conj(c1) + z *
conj(c0)``: on the circle ``conj(z) h(z) = conj(k(z))``, so the sign
condition reduces to ``Re <lam, k(z)> < 1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import domains
from .boundary import SupEstimator
from .errors import (
    DegenerateFunctionalError,
    DomainError,
    InputError,
    UnsupportedDomainError,
)
from .polys import AnalyticDisc, BoundaryFunctional, Poly, as_points
from .search import maximize_separation

DISTINCT_TOL = 1e-12


def rho(a, b):
    """Pseudo-hyperbolic distance |a - b| / |1 - conj(a) b| on the unit disk."""
    a, b = complex(a), complex(b)
    if abs(a) >= 1 or abs(b) >= 1:
        raise DomainError("rho needs points of the open unit disk")
    return abs(a - b) / abs(1 - a.conjugate() * b)


def mobius_disk(a, z):
    """The involution m_a(z) = (a - z) / (1 - conj(a) z), swapping a and 0."""
    a = complex(a)
    if abs(a) >= 1:
        raise DomainError("Mobius parameter must lie in the open disk")
    z = np.asarray(z, dtype=complex)
    out = (a - z) / (1 - np.conj(a) * z)
    return complex(out) if out.ndim == 0 else out


def ball_automorphism_to_origin(a, z):
    """Involutive automorphism of the ball exchanging ``a`` and 0.

    phi_a(z) = (a - P z - s Q z) / (1 - <z, a>), where P projects onto the
    line through ``a``, Q = I - P and s = sqrt(1 - |a|^2).  Accepts one point
    or an (n, d) batch.
    """
    a = np.asarray(a, dtype=complex).reshape(-1)
    na2 = float(np.vdot(a, a).real)
    if na2 >= 1:
        raise DomainError("automorphism centre must lie in the open ball")
    pts = np.asarray(z, dtype=complex)
    single = pts.ndim == 1
    pts = as_points(pts, a.size)
    if na2 == 0:
        out = -pts
    else:
        inner = pts @ np.conj(a)
        proj = np.outer(inner / na2, a)
        s = np.sqrt(1 - na2)
        out = (a - proj - s * (pts - proj)) / (1 - inner)[:, None]
    return out[0] if single else out


class Datum:
    """Ordered pair of distinct points (lam, mu)."""

    def __init__(self, lam, mu, domain=None):
        lam = np.asarray(lam, dtype=complex).reshape(-1)
        mu = np.asarray(mu, dtype=complex).reshape(-1)
        if lam.shape != mu.shape:
            raise InputError("datum points have different dimensions")
        if np.linalg.norm(lam - mu) <= DISTINCT_TOL:
            raise InputError("datum points must be distinct")
        if domain is not None and not (domains.membership(domain, lam) and domains.membership(domain, mu)):
            raise DomainError("datum points must lie in the domain")
        self.lam = lam
        self.mu = mu

    def to_json(self):
        return {"lambda": [[c.real, c.imag] for c in self.lam], "mu": [[c.real, c.imag] for c in self.mu]}


@dataclass
class KobayashiResult:
    disc: AnalyticDisc
    param_lambda: complex
    param_mu: complex
    distance: float

    def to_dict(self):
        return {
            "disc": self.disc.to_json(),
            "param_lambda": [self.param_lambda.real, self.param_lambda.imag],
            "param_mu": [self.param_mu.real, self.param_mu.imag],
            "distance": self.distance,
        }


def ball_geodesic(lam, mu):
    """Affine Kobayashi extremal ``c0 + zeta c1`` of the ball through two points."""
    lam = np.asarray(lam, dtype=complex).reshape(-1)
    mu = np.asarray(mu, dtype=complex).reshape(-1)
    v = mu - lam
    u = v / np.linalg.norm(v)
    c0 = lam - np.vdot(u, lam) * u
    r2 = 1.0 - float(np.vdot(c0, c0).real)
    return AnalyticDisc(np.vstack([c0, np.sqrt(r2) * u]))


def disc_parameter(disc, point):
    """Preimage of ``point`` under an affine disc ``c0 + zeta c1``."""
    c0, c1 = disc.coefficients[0], disc.coefficients[1]
    return complex(np.vdot(c1, np.asarray(point, dtype=complex) - c0) / np.vdot(c1, c1).real)


def kobayashi_ball(datum):
    """Closed-form Kobayashi extremal and distance in the unit ball."""
    d = datum.lam.size
    b = domains.ball(d)
    if not (domains.membership(b, datum.lam) and domains.membership(b, datum.mu)):
        raise DomainError("datum must lie in the open ball")
    disc = ball_geodesic(datum.lam, datum.mu)
    pl = disc_parameter(disc, datum.lam)
    pm = disc_parameter(disc, datum.mu)
    return KobayashiResult(disc, pl, pm, rho(pl, pm))


def left_inverse_ball(disc):
    """Lempert left inverse z -> <z, u> of the linear disc zeta -> zeta u."""
    coef = disc.coefficients
    if disc.degree != 1 or np.linalg.norm(coef[0]) > 1e-12:
        raise UnsupportedDomainError("left_inverse_ball needs a linear disc through the origin")
    u = coef[1]
    if abs(np.linalg.norm(u) - 1) > 1e-10:
        raise UnsupportedDomainError("disc direction must be a unit vector")
    d = u.size
    return Poly({tuple(int(i == j) for i in range(d)): np.conj(u[j]) for j in range(d)}, d)


@dataclass
class CaratheodoryResult:
    value: float
    map: Poly
    sup: float
    degree: int
    evaluations: int

    def to_dict(self):
        return {
            "value": self.value,
            "map": self.map.to_json(),
            "sup": self.sup,
            "degree": self.degree,
            "evaluations": self.evaluations,
        }


def caratheodory_search(domain, datum, degree, budget, seed):
    """Certified lower bound for the Caratheodory distance by polynomial search.

    The returned map has sup <= 1 + 1e-9 on the boundary sample (refined), and
    ``value`` is rho of the images of the datum.
    """
    if not (domains.membership(domain, datum.lam) and domains.membership(domain, datum.mu)):
        raise DomainError("datum must lie in the domain")
    est = SupEstimator(domains.boundary_patches(domain))
    res = maximize_separation(est, datum.lam, datum.mu, degree, budget, seed)
    return CaratheodoryResult(res.value, res.poly, res.sup, res.degree, res.evaluations)


def ball_royden_wong_functional(disc):
    """The functional h(z) = conj(c1) + z conj(c0) of an affine ball geodesic."""
    c0, c1 = disc.coefficients[0], disc.coefficients[1]
    return BoundaryFunctional(np.vstack([np.conj(c1), np.conj(c0)]))


@dataclass
class RoydenWongReport:
    boundary_ae_pass: bool
    sign_pass: bool
    worst_value: float
    boundary_residual: float

    def to_dict(self):
        return {
            "boundary_ae_pass": self.boundary_ae_pass,
            "sign_pass": self.sign_pass,
            "worst_value": self.worst_value,
            "boundary_residual": self.boundary_residual,
        }


def royden_wong_check(domain, disc, h, interior_samples, boundary_grid):
    """Check that the disc's boundary values lie on the boundary and the sign condition.

    The sign expression is Re[(lam - k(z)) . (conj(z) h(z))] with the
    bilinear pairing, over every interior sample lam and grid point z.
    """
    if domain.kind not in domains.SMOOTH_KINDS:
        raise UnsupportedDomainError("Royden-Wong check needs a smooth convex domain")
    z = np.exp(2j * np.pi * np.arange(boundary_grid) / boundary_grid)
    kz = disc(z)
    hz = h(z)
    if np.max(np.abs(hz)) == 0:
        raise DegenerateFunctionalError("h vanishes on the grid")
    a, b = domain.coefficients
    r = domain.scale * (np.sum(a * np.abs(kz) ** 2 + b * (kz**2).real, axis=1) - 1)
    resid = float(np.max(np.abs(r)))
    lam = as_points(interior_samples, domain.dim)
    w = np.conj(z)[:, None] * hz
    # Re[(lam - k(z)) . w(z)] for every (lam, z) pair
    vals = np.real(lam @ w.T - np.sum(kz * w, axis=1)[None, :])
    worst = float(np.max(vals))
    return RoydenWongReport(resid <= 1e-8, bool(worst < 0), worst, resid)
