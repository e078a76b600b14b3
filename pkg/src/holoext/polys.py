"""Polynomials on C^d and polynomial discs D -> C^d.

``Poly`` (alias ``PolyMap``) stores a sparse table ``{exponent tuple: coefficient}``.  It is the
carrier for competitor maps Omega -> D, for the functional calculus of the
model tuple, and (one per coordinate) for retraction maps.  ``AnalyticDisc``
is a vector-valued polynomial in one complex variable.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from .errors import InputError


@lru_cache(maxsize=None)
def monomials(nvars, degree):
    """Exponent tuples of total degree <= ``degree``, graded then lexicographic."""
    out = []
    for total in range(degree + 1):
        for exps in itertools.product(range(total, -1, -1), repeat=nvars):
            if sum(exps) == total:
                out.append(exps)
    return tuple(out)


def as_points(points, nvars=None):
    """Coerce to a complex (n, d) array; a single point becomes one row."""
    pts = np.asarray(points, dtype=complex)
    if pts.ndim == 1:
        pts = pts[None, :]
    if pts.ndim != 2:
        raise InputError(f"expected points of shape (n, d), got {pts.shape}")
    if nvars is not None and pts.shape[1] != nvars:
        raise InputError(f"points have dimension {pts.shape[1]}, expected {nvars}")
    if not np.all(np.isfinite(pts)):
        raise InputError("points must be finite")
    return pts


def monomial_matrix(points, exponents):
    """Matrix ``V[i, m] = points[i] ** exponents[m]`` (multi-index power)."""
    pts = as_points(points)
    exps = np.asarray(exponents, dtype=int).reshape(-1, pts.shape[1])
    top = int(exps.max()) if exps.size else 0
    powers = np.ones((top + 1,) + pts.shape, dtype=complex)
    for k in range(1, top + 1):
        powers[k] = powers[k - 1] * pts
    cols = np.ones((pts.shape[0], exps.shape[0]), dtype=complex)
    for j in range(pts.shape[1]):
        cols *= powers[exps[:, j], :, j].T
    return cols


class Poly:
    """Polynomial C^d -> C in multi-index form.

    >>> p = Poly({(1, 0): 0.6, (0, 1): 0.8})
    >>> complex(p([0.6, 0.8])[0])
    (1+0j)
    """

    def __init__(self, terms, nvars=None):
        clean = {}
        for exps, c in dict(terms).items():
            exps = tuple(int(e) for e in exps)
            if any(e < 0 for e in exps):
                raise InputError(f"negative exponent in {exps}")
            if nvars is None:
                nvars = len(exps)
            elif len(exps) != nvars:
                raise InputError("inconsistent number of variables in terms")
            c = complex(c)
            if not np.isfinite(c):
                raise InputError("coefficients must be finite")
            if c != 0:
                clean[exps] = clean.get(exps, 0) + c
        if nvars is None:
            raise InputError("cannot infer the number of variables of an empty polynomial")
        self.nvars = int(nvars)
        self.terms = clean

    @classmethod
    def from_coeffs(cls, exponents, coeffs, nvars=None):
        if nvars is None:
            nvars = len(exponents[0])
        return cls(dict(zip(exponents, coeffs)), nvars)

    @classmethod
    def constant(cls, c, nvars):
        return cls({(0,) * nvars: c}, nvars)

    @classmethod
    def coordinate(cls, r, nvars):
        """The r-th coordinate function (0-based)."""
        exps = [0] * nvars
        exps[r] = 1
        return cls({tuple(exps): 1.0}, nvars)

    @property
    def degree(self):
        return max((sum(e) for e in self.terms), default=0)

    def __call__(self, points):
        pts = as_points(points, self.nvars)
        if not self.terms:
            return np.zeros(pts.shape[0], dtype=complex)
        exps = list(self.terms)
        coef = np.array([self.terms[e] for e in exps])
        return monomial_matrix(pts, exps) @ coef

    def coeff_vector(self, exponents):
        return np.array([self.terms.get(tuple(e), 0) for e in exponents], dtype=complex)

    def conjugate_coefficients(self):
        return Poly({e: np.conj(c) for e, c in self.terms.items()}, self.nvars)

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise InputError("polynomials in different numbers of variables")
            return other
        return Poly.constant(other, self.nvars)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Poly(out, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return Poly({e: -c for e, c in self.terms.items()}, self.nvars)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out = {}
        for (e1, c1), (e2, c2) in itertools.product(self.terms.items(), other.terms.items()):
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
        return Poly(out, self.nvars)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return Poly({e: c / scalar for e, c in self.terms.items()}, self.nvars)

    def __eq__(self, other):
        return isinstance(other, Poly) and self.nvars == other.nvars and self.terms == other.terms

    def __repr__(self):
        return f"Poly({self.terms!r}, nvars={self.nvars})"

    def to_json(self):
        return {
            "nvars": self.nvars,
            "terms": [[list(e), [c.real, c.imag]] for e, c in sorted(self.terms.items())],
        }

    @classmethod
    def from_json(cls, obj):
        terms = {tuple(e): complex(c[0], c[1]) for e, c in obj["terms"]}
        return cls(terms, obj["nvars"])


class AnalyticDisc:
    """Polynomial map zeta -> sum_k coefficients[k] * zeta**k into C^d."""

    def __init__(self, coefficients):
        coef = np.atleast_2d(np.asarray(coefficients, dtype=complex))
        if coef.ndim != 2 or coef.shape[1] < 1:
            raise InputError("disc coefficients must have shape (degree + 1, d)")
        if not np.all(np.isfinite(coef)):
            raise InputError("disc coefficients must be finite")
        self.coefficients = coef

    @property
    def degree(self):
        return self.coefficients.shape[0] - 1

    @property
    def dim(self):
        return self.coefficients.shape[1]

    def __call__(self, zeta):
        z = np.atleast_1d(np.asarray(zeta, dtype=complex))
        out = np.zeros(z.shape + (self.dim,), dtype=complex)
        for c in self.coefficients[::-1]:
            out = out * z[..., None] + c
        return out

    def to_json(self):
        return {"coefficients": [[[c.real, c.imag] for c in row] for row in self.coefficients]}

    @classmethod
    def from_json(cls, obj):
        coef = np.array(obj["coefficients"], dtype=float)
        return cls(coef[..., 0] + 1j * coef[..., 1])


class BoundaryFunctional(AnalyticDisc):
    """The vector function h on the circle, stored as polynomial coefficients in z."""

    def __init__(self, coefficients):
        super().__init__(coefficients)
        if not np.any(self.coefficients):
            raise InputError("boundary functional must not be identically zero")


class VectorPolyMap:
    """Polynomial map C^d -> C^m given coordinate-wise by ``Poly`` objects."""

    def __init__(self, components):
        comps = list(components)
        if not comps:
            raise InputError("a polynomial map needs at least one component")
        nv = {p.nvars for p in comps}
        if len(nv) != 1:
            raise InputError("components must share the number of variables")
        self.components = comps
        self.nvars = nv.pop()

    @property
    def dim(self):
        return len(self.components)

    def __call__(self, points):
        pts = as_points(points, self.nvars)
        return np.stack([p(pts) for p in self.components], axis=1)

    def to_json(self):
        return {"components": [p.to_json() for p in self.components]}

    @classmethod
    def from_json(cls, obj):
        return cls([Poly.from_json(c) for c in obj["components"]])


PolyMap = Poly
