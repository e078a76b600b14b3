"""Experiments on subvarieties: sampling, geodesy tests, certificates and retracts.

A variety is a closed-form spec (a membership residual and a parameterization
by one or more disc variables) together with a finite sample of its points.
Every spec here is the image of a closed disc or ball under a polynomial map,
so the sup of a polynomial over the closure of V is attained on the image of
the boundary circle or sphere; those images are the sup patches.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from . import domains
from .boundary import Circle, Finite, Quadric, SupEstimator
from .errors import InputError, RangeViolationError, UnsupportedDomainError
from .hyperbolic import Datum, caratheodory_search, kobayashi_ball, rho
from .polys import Poly, VectorPolyMap, as_points
from .search import maximize_separation

SPEC_KINDS = ("ball_slice", "parabola_curve", "sym_R", "sym_D", "sym_R_union_D", "point_list", "line")
PARABOLA_SCALE = 0.9
SAMPLE_RADIUS = 0.95
MEMBER_TOL = 1e-9


def parabola_radius(scale=PARABOLA_SCALE):
    """Largest |t| with scale * (t, t^2) in the closed unit ball."""
    return brentq(lambda t: scale**2 * (t**2 + t**4) - 1, 0.0, 1.0 / scale, xtol=1e-15)


@dataclass(frozen=True)
class VarietySpec:
    kind: str
    dim: int = 2
    k: int = 1
    beta: complex = 0j
    direction: tuple = ()
    points: tuple = ()

    def __post_init__(self):
        if self.kind not in SPEC_KINDS:
            raise InputError(f"unknown variety spec {self.kind!r}; expected one of {SPEC_KINDS}")
        if self.kind in ("sym_R", "sym_D", "sym_R_union_D", "parabola_curve") and self.dim != 2:
            raise InputError(f"{self.kind} lives in C^2")
        if self.kind in ("sym_D", "sym_R_union_D") and not abs(self.beta) < 1:
            raise InputError("beta must satisfy |beta| < 1")
        if self.kind == "ball_slice" and not 1 <= self.k <= self.dim:
            raise InputError("ball_slice needs 1 <= k <= dim")
        if self.kind == "line":
            u = np.asarray(self.direction, dtype=complex)
            if u.shape != (self.dim,) or np.linalg.norm(u) < 1e-12:
                raise InputError("line needs a nonzero direction of length dim")
        if self.kind == "point_list":
            pts = np.asarray(self.points, dtype=complex)
            if pts.ndim != 2 or pts.shape[1] != self.dim or pts.shape[0] < 1:
                raise InputError("point_list needs a non-empty list of points of dimension dim")

    @property
    def unit_direction(self):
        u = np.asarray(self.direction, dtype=complex)
        return u / np.linalg.norm(u)

    def host_domain(self):
        """The domain the spec is drawn in."""
        if self.kind in ("sym_R", "sym_D", "sym_R_union_D"):
            return domains.symmetrized_bidisk()
        return domains.ball(self.dim)

    def _r_branch(self, z):
        return np.column_stack([2 * z, z**2])

    def _d_branch(self, z):
        b = complex(self.beta)
        return np.column_stack([b + np.conj(b) * z, z])

    def residual(self, points):
        """Closed-form distance-like residual of each point from the spec, zero on V."""
        pts = as_points(points, self.dim)
        if self.kind == "ball_slice":
            return np.linalg.norm(pts[:, self.k :], axis=1)
        if self.kind == "parabola_curve":
            return np.abs(pts[:, 1] - pts[:, 0] ** 2 / PARABOLA_SCALE)
        if self.kind == "line":
            u = self.unit_direction
            return np.linalg.norm(pts - np.outer(pts @ np.conj(u), u), axis=1)
        if self.kind == "point_list":
            ref = np.asarray(self.points, dtype=complex)
            return np.min(np.linalg.norm(pts[:, None, :] - ref[None], axis=2), axis=1)
        b = complex(self.beta)
        res_r = np.abs(pts[:, 1] - pts[:, 0] ** 2 / 4)
        res_d = np.abs(pts[:, 0] - b - np.conj(b) * pts[:, 1])
        if self.kind == "sym_R":
            return res_r
        if self.kind == "sym_D":
            return res_d
        return np.minimum(res_r, res_d)

    def patches(self):
        """Sup patches: the image of the parameter circle or sphere."""
        if self.kind == "ball_slice":
            return [Quadric(np.ones(self.k), np.ones(self.k), self.dim)]
        if self.kind == "parabola_curve":
            tau = parabola_radius()
            return [Circle(lambda th: PARABOLA_SCALE * np.column_stack(
                [tau * np.exp(1j * th), tau**2 * np.exp(2j * th)]))]
        if self.kind == "line":
            u = self.unit_direction
            return [Circle(lambda th: np.exp(1j * th)[:, None] * u)]
        if self.kind == "point_list":
            return [Finite(np.asarray(self.points, dtype=complex))]
        out = []
        if self.kind in ("sym_R", "sym_R_union_D"):
            out.append(Circle(lambda th: self._r_branch(np.exp(1j * th))))
        if self.kind in ("sym_D", "sym_R_union_D"):
            out.append(Circle(lambda th: self._d_branch(np.exp(1j * th))))
        return out

    def to_json(self):
        out = {"kind": self.kind, "dim": self.dim}
        if self.kind == "ball_slice":
            out["k"] = self.k
        if self.kind in ("sym_D", "sym_R_union_D"):
            out["beta"] = [complex(self.beta).real, complex(self.beta).imag]
        if self.kind == "line":
            out["direction"] = [[c.real, c.imag] for c in np.asarray(self.direction, dtype=complex)]
        if self.kind == "point_list":
            out["points"] = [[[c.real, c.imag] for c in p] for p in np.asarray(self.points, dtype=complex)]
        return out

    @classmethod
    def from_json(cls, obj):
        def cplx(v):
            return complex(v[0], v[1]) if isinstance(v, (list, tuple)) else complex(v)

        try:
            kind = obj["kind"]
            dim = int(obj.get("dim", 2))
            kw = {}
            if "k" in obj:
                kw["k"] = int(obj["k"])
            if "beta" in obj:
                kw["beta"] = cplx(obj["beta"])
            if "direction" in obj:
                kw["direction"] = tuple(cplx(v) for v in obj["direction"])
            if "points" in obj:
                kw["points"] = tuple(tuple(cplx(v) for v in p) for p in obj["points"])
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise InputError(f"malformed variety spec: {exc}") from None
        return cls(kind, dim, **kw)


def ball_slice(k, dim=2):
    return VarietySpec("ball_slice", dim, k=k)


def parabola_curve():
    return VarietySpec("parabola_curve")


def sym_R():
    return VarietySpec("sym_R")


def sym_D(beta):
    return VarietySpec("sym_D", beta=complex(beta))


def sym_R_union_D(beta):
    return VarietySpec("sym_R_union_D", beta=complex(beta))


def point_list(points):
    pts = as_points(points)
    return VarietySpec("point_list", pts.shape[1], points=tuple(tuple(p) for p in pts))


def line(direction):
    u = np.asarray(direction, dtype=complex).reshape(-1)
    return VarietySpec("line", u.size, direction=tuple(u))


@dataclass
class VarietySample:
    spec: VarietySpec
    points: np.ndarray
    parameters: np.ndarray
    branches: list = field(default_factory=list)

    def to_json(self):
        return {
            "spec": self.spec.to_json(),
            "points": [[[c.real, c.imag] for c in p] for p in self.points],
        }


def _disc_draw(rng, n, radius):
    return radius * np.sqrt(rng.random(n)) * np.exp(2j * np.pi * rng.random(n))


def sample_variety(spec, count, seed):
    """Seeded sample of V.  The first two points are anchors at parameters 0 and 1/2."""
    if count < 2:
        raise InputError("count must be at least 2")
    rng = np.random.default_rng(seed)
    extra = count - 2
    branches = []
    if spec.kind == "ball_slice":
        k = spec.k
        g = rng.standard_normal((extra, k)) + 1j * rng.standard_normal((extra, k))
        g /= np.linalg.norm(g, axis=1)[:, None]
        g *= (SAMPLE_RADIUS * rng.random(extra) ** (1 / (2 * k)))[:, None]
        anchors = np.zeros((2, k), dtype=complex)
        anchors[1, 0] = 0.5
        params = np.vstack([anchors, g])
        pts = np.zeros((count, spec.dim), dtype=complex)
        pts[:, :k] = params
    elif spec.kind == "point_list":
        pts = np.asarray(spec.points, dtype=complex)
        params = np.arange(len(pts))
    else:
        radius = SAMPLE_RADIUS * (parabola_radius() if spec.kind == "parabola_curve" else 1.0)
        params = np.concatenate([[0, 0.5], _disc_draw(rng, extra, radius)]).astype(complex)
        if spec.kind == "parabola_curve":
            pts = PARABOLA_SCALE * np.column_stack([params, params**2])
        elif spec.kind == "line":
            pts = np.outer(params, spec.unit_direction)
        elif spec.kind == "sym_R":
            pts = spec._r_branch(params)
        elif spec.kind == "sym_D":
            pts = spec._d_branch(params)
        else:
            # interleave the branches: R(0), D(0), R(1/2), D(1/2), ...
            params = np.concatenate([[0, 0, 0.5, 0.5], _disc_draw(rng, max(count - 4, 0), radius)])
            params = params[:count].astype(complex)
            branches = ["R" if i % 2 == 0 else "D" for i in range(count)]
            is_r = np.array([b == "R" for b in branches])
            pts = np.where(is_r[:, None], spec._r_branch(params), spec._d_branch(params))
    host = spec.host_domain()
    if not np.all(domains.contains(host, pts)):
        raise InputError("sample points must lie in the open domain")
    return VarietySample(spec, pts, np.asarray(params), branches)


@dataclass
class GeodesyReport:
    passed: bool
    worst_pair: Datum
    worst_distance: float
    pairs_tested: int

    def to_dict(self):
        return {
            "pass": self.passed,
            "worst_pair": self.worst_pair.to_json() if self.worst_pair is not None else None,
            "worst_distance": self.worst_distance,
            "pairs_tested": self.pairs_tested,
        }


def _pairs(n, count, rng):
    out = [(0, 1)] if n >= 2 else []
    while len(out) < min(count, n * (n - 1)):
        i, j = rng.choice(n, size=2, replace=False)
        out.append((int(i), int(j)))
    return out[:count]


def totally_geodesic_test(domain, sample, pair_count, seed, tol):
    """Do ball geodesics through sampled pairs stay on the spec?

    For each pair the closed-form geodesic disc is evaluated on a polar grid
    of the parameter disc and the spec residual is maximized over it.
    """
    if domain.kind != "ball":
        raise UnsupportedDomainError("totally_geodesic_test needs closed-form geodesics (ball only)")
    pts = as_points(sample.points, domain.dim)
    rng = np.random.default_rng(seed)
    radii = np.linspace(0.0, 0.99, 12)
    angles = 2 * np.pi * np.arange(48) / 48
    grid = (radii[:, None] * np.exp(1j * angles)[None, :]).ravel()
    worst, worst_pair, tested = 0.0, None, 0
    for i, j in _pairs(len(pts), pair_count, rng):
        if np.linalg.norm(pts[i] - pts[j]) <= 1e-12:
            continue
        datum = Datum(pts[i], pts[j])
        disc = kobayashi_ball(datum).disc
        r = float(np.max(sample.spec.residual(disc(grid))))
        tested += 1
        if worst_pair is None or r > worst:
            worst, worst_pair = r, datum
    return GeodesyReport(bool(worst <= tol), worst_pair, worst, tested)


@dataclass
class Certificate:
    map: Poly
    datum: Datum
    achieved: float
    baseline: float
    margin: float
    sup_on_V: float
    baseline_kind: str
    degree: int
    evaluations: int
    per_degree: list = field(default_factory=list)

    def to_dict(self):
        return {
            "map": self.map.to_json(),
            "datum": self.datum.to_json(),
            "achieved": self.achieved,
            "baseline": self.baseline,
            "baseline_kind": self.baseline_kind,
            "margin": self.margin,
            "sup_on_V": self.sup_on_V,
            "degree": self.degree,
            "evaluations": self.evaluations,
            "best_by_degree": [[d, v] for d, v in self.per_degree],
        }


def certificate_search(domain, sample, datum, degree, budget, seed):
    """Search for a polynomial of sup <= 1 on V separating the datum better than the domain allows.

    A positive margin means no function of norm 1 on the domain matches the
    found map at the two points, so V lacks the extension property.  For the
    ball the baseline is the exact Kobayashi distance; otherwise it is a
    Caratheodory search with the same degree, budget and seed.
    """
    if not (domains.membership(domain, datum.lam) and domains.membership(domain, datum.mu)):
        raise InputError("datum must lie in the domain")
    if np.max(sample.spec.residual(np.vstack([datum.lam, datum.mu]))) > MEMBER_TOL:
        raise InputError("datum points must belong to the variety")
    est = SupEstimator(sample.spec.patches())
    res = maximize_separation(est, datum.lam, datum.mu, degree, budget, seed)
    if domain.kind == "ball":
        baseline, kind = kobayashi_ball(datum).distance, "kobayashi_exact"
    else:
        baseline = caratheodory_search(domain, datum, degree, budget, seed).value
        kind = "caratheodory_search"
    p = res.poly
    achieved = float(rho(p(datum.lam)[0], p(datum.mu)[0]))
    best, per_degree = -np.inf, []
    for d in range(1, degree + 1):
        best = max([best] + [v for deg, _, v in res.history if deg == d])
        per_degree.append((d, float(best)))
    return Certificate(p, datum, achieved, float(baseline), achieved - float(baseline),
                       res.sup, kind, res.degree, res.evaluations, per_degree)


@dataclass
class RetractReport:
    idempotent_pass: bool
    fixes_V_pass: bool
    range_in_V_pass: bool
    idempotent_residual: float
    fixes_V_residual: float
    range_residual: float

    def to_dict(self):
        return {
            "idempotent_pass": self.idempotent_pass,
            "fixes_V_pass": self.fixes_V_pass,
            "range_in_V_pass": self.range_in_V_pass,
            "idempotent_residual": self.idempotent_residual,
            "fixes_V_residual": self.fixes_V_residual,
            "range_residual": self.range_residual,
        }


RetractMap = VectorPolyMap


def lempert_retract(direction):
    """The map z -> <z, u> u: a linear disc composed with its left inverse."""
    u = np.asarray(direction, dtype=complex).reshape(-1)
    u = u / np.linalg.norm(u)
    d = u.size
    phi = Poly({tuple(int(i == j) for i in range(d)): np.conj(u[j]) for j in range(d)}, d)
    return RetractMap([phi * u[i] for i in range(d)])


def retract_check(r, domain, sample, probe_count, seed, tol):
    """Idempotence, identity on V and range in V, on seeded interior probes."""
    if r.nvars != domain.dim or r.dim != domain.dim:
        raise InputError("retract must map C^d to C^d with d the domain dimension")
    probes = domains.interior_sample(domain, probe_count, seed)
    rx = r(probes)
    bad = ~domains.closure_contains(domain, rx)
    if bad.any():
        raise RangeViolationError(f"probe {int(np.flatnonzero(bad)[0])} is mapped outside the closed domain")
    idem = float(np.max(np.linalg.norm(r(rx) - rx, axis=1)))
    fix = float(np.max(np.linalg.norm(r(sample.points) - sample.points, axis=1)))
    rng_res = float(np.max(sample.spec.residual(rx)))
    return RetractReport(idem <= tol, fix <= tol, rng_res <= tol, idem, fix, rng_res)


def slice_decomposition(b, c):
    """Split c in C^k as a multiple of b's leading block plus a part with zero k-th entry.

    ``k`` is the position of the last nonzero coordinate of ``b``.  The k-th
    entry of the scaled part is set to c_k itself, so the parts sum to c
    with no rounding in that coordinate.
    """
    b = np.asarray(b, dtype=complex).reshape(-1)
    c = np.asarray(c, dtype=complex).reshape(-1)
    if np.sum(np.abs(b) ** 2) >= 1:
        raise InputError("b must lie in the open ball")
    nz = np.flatnonzero(b)
    if nz.size == 0:
        raise InputError("b must be nonzero")
    k = int(nz[-1]) + 1
    if c.size < k or np.any(c[k:]):
        raise InputError(f"c must lie in the first {k} coordinates")
    bk = b[k - 1]
    if not np.linalg.norm(c) < abs(bk) / 2:
        raise InputError("need |c| < |b_k| / 2")
    ratio = c[k - 1] / bk
    scaled = np.zeros_like(c)
    scaled[:k] = ratio * b[:k]
    scaled[k - 1] = c[k - 1]
    remainder = c - scaled
    remainder[k - 1] = 0
    return scaled, remainder
