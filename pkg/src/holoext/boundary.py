"""Parameterized compact sets on which sup-norms of polynomials are estimated.

Every set here is the image of a parameter space under a smooth ``embed``
map.  A sup estimate is a deterministic grid maximum followed by a
vectorized local ascent from the best grid points, so that the reported sup
is accurate to roughly machine precision near a non-degenerate maximum.
"""

from __future__ import annotations

import numpy as np
from scipy.stats import qmc

GRID_SIZE = 2048
MAX_STEP = 10.0  # parameter units; longer Newton steps only arise from near-null curvature


def _sobol(dim, n, seed=0):
    sampler = qmc.Sobol(d=dim, scramble=True, seed=seed)
    return sampler.random(n)


def _normal_grid(dim, n):
    """Quasi-random standard normal vectors, deterministic."""
    from scipy.stats import norm

    u = _sobol(dim, n)
    return norm.ppf(np.clip(u, 1e-12, 1 - 1e-12))


class Patch:
    """Base class: ``nparams`` real parameters mapped into C^d."""

    nparams = 0

    def embed(self, x):
        raise NotImplementedError

    def grid_params(self):
        raise NotImplementedError

    def grid(self):
        return self.embed(self.grid_params())

    def normalize(self, x):
        return x

    def tangent(self, x, step):
        """Drop step components along directions the embedding ignores."""
        return step

    def regularize(self, x, hess):
        """Give directions the embedding ignores strong negative curvature."""
        return hess


class Circle(Patch):
    """Image of the unit circle under a vectorized curve ``theta -> C^d``."""

    nparams = 1

    def __init__(self, curve, n=GRID_SIZE):
        self.curve = curve
        self.n = n

    def embed(self, x):
        theta = np.asarray(x, dtype=float).reshape(-1)
        return np.atleast_2d(self.curve(theta))

    def grid_params(self):
        return (2 * np.pi * np.arange(self.n) / self.n)[:, None]


class Torus(Patch):
    """Distinguished boundary of the polydisk, optionally pushed forward by ``post``."""

    def __init__(self, dim, post=None, n=GRID_SIZE):
        self.nparams = dim
        self.post = post
        self.n = n

    def embed(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        z = np.exp(1j * x)
        return self.post(z) if self.post is not None else z

    def grid_params(self):
        if self.nparams == 1:
            return (2 * np.pi * np.arange(self.n) / self.n)[:, None]
        if self.nparams == 2:
            a = 2 * np.pi * np.arange(64) / 64
            b = 2 * np.pi * np.arange(self.n // 64) / (self.n // 64)
            aa, bb = np.meshgrid(a, b, indexing="ij")
            return np.column_stack([aa.ravel(), bb.ravel()])
        return 2 * np.pi * _sobol(self.nparams, self.n)


class Quadric(Patch):
    """Level set {q = 1} of a positive definite real quadratic form, placed in the first k coordinates.

    ``weights_re`` and ``weights_im`` are the diagonal coefficients of q on
    the real and imaginary parts of each coordinate; the unit sphere uses all
    ones.
    """

    def __init__(self, weights_re, weights_im, ambient_dim=None, n=GRID_SIZE):
        self.wr = np.asarray(weights_re, dtype=float)
        self.wi = np.asarray(weights_im, dtype=float)
        self.k = self.wr.size
        self.d = ambient_dim or self.k
        self.nparams = 2 * self.k
        self.n = n

    def embed(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        re, im = x[:, : self.k], x[:, self.k :]
        q = np.sum(self.wr * re**2 + self.wi * im**2, axis=1)
        z = (re + 1j * im) / np.sqrt(q)[:, None]
        if self.d > self.k:
            z = np.concatenate([z, np.zeros((z.shape[0], self.d - self.k), dtype=complex)], axis=1)
        return z

    def normalize(self, x):
        return x / np.linalg.norm(x, axis=-1, keepdims=True)

    def tangent(self, x, step):
        # embed is invariant under positive rescaling, so the radial direction is a null direction
        radial = np.sum(step * x, axis=-1, keepdims=True) / np.sum(x * x, axis=-1, keepdims=True)
        return step - radial * x

    def regularize(self, x, hess):
        xh = x / np.linalg.norm(x, axis=-1, keepdims=True)
        scale = np.max(np.abs(hess), axis=(1, 2), initial=0.0)[:, None, None]
        return hess - np.maximum(scale, 1e-300) * xh[:, :, None] * xh[:, None, :]

    def grid_params(self):
        if self.k == 1:
            t = 2 * np.pi * np.arange(self.n) / self.n
            return np.column_stack([np.cos(t), np.sin(t)])
        return _normal_grid(self.nparams, self.n)


class Finite(Patch):
    """A finite point set; there is nothing to refine."""

    def __init__(self, points):
        self.points = np.atleast_2d(np.asarray(points, dtype=complex))

    def embed(self, x):
        idx = np.asarray(x, dtype=int).reshape(-1)
        return self.points[idx]

    def grid_params(self):
        return np.arange(len(self.points))[:, None]


def _fd_derivatives(fun, x, h_grad=1e-6, h_hess=1e-4):
    """Central-difference gradients and Hessians of ``fun`` at each row of ``x``."""
    k, m = x.shape
    eg, eh = np.eye(m) * h_grad, np.eye(m) * h_hess
    pairs = [(i, j) for i in range(m) for j in range(i + 1, m)]
    probes = [x]
    probes += [x + eg[i] for i in range(m)] + [x - eg[i] for i in range(m)]
    probes += [x + eh[i] for i in range(m)] + [x - eh[i] for i in range(m)]
    for i, j in pairs:
        probes += [x + eh[i] + eh[j], x - eh[i] - eh[j], x + eh[i] - eh[j], x - eh[i] + eh[j]]
    vals = fun(np.concatenate(probes, axis=0)).reshape(len(probes), k)
    f0 = vals[0]
    gp, gm = vals[1 : 1 + m], vals[1 + m : 1 + 2 * m]
    hp, hm = vals[1 + 2 * m : 1 + 3 * m], vals[1 + 3 * m : 1 + 4 * m]
    grad = ((gp - gm) / (2 * h_grad)).T
    hess = np.zeros((k, m, m))
    for i in range(m):
        hess[:, i, i] = (hp[i] - 2 * f0 + hm[i]) / h_hess**2
    base = 1 + 4 * m
    for n, (i, j) in enumerate(pairs):
        pp, mm, pm, mp = vals[base + 4 * n : base + 4 * n + 4]
        hess[:, i, j] = hess[:, j, i] = (pp + mm - pm - mp) / (4 * h_hess**2)
    return f0, grad, hess


def refine_max(func, patch, x0, max_iter=40):
    """Local maximization of ``|func(embed(x))|**2`` from each row of ``x0``.

    Damped Newton steps on finite-difference derivatives; the Hessian is
    forced negative definite through its eigen-decomposition, and a step is
    halved until it increases the objective.  Returns the refined parameters
    and the moduli there.
    """
    x = np.array(x0, dtype=float, copy=True)
    if isinstance(patch, Finite) or x.size == 0:
        return x, np.abs(func(patch.embed(x)))

    def fun(params):
        return np.abs(func(patch.embed(params))) ** 2

    k, m = x.shape
    f = fun(x)
    active = np.ones(k, dtype=bool)
    for _ in range(max_iter):
        idx = np.flatnonzero(active)
        _, g, H = _fd_derivatives(fun, x[idx])
        H = patch.regularize(x[idx], H)
        w, V = np.linalg.eigh(H)
        scale = np.maximum(np.max(np.abs(w), axis=1, keepdims=True), 1e-300)
        w = -np.maximum(np.abs(w), 1e-8 * scale)
        step = patch.tangent(x[idx], -np.einsum("kij,kj,klj,kl->ki", V, 1 / w, V, g))
        step[~np.all(np.isfinite(step), axis=1)] = 0  # flat objective: nothing to climb
        with np.errstate(over="ignore"):  # an overflowing length just means the step is dropped
            length = np.linalg.norm(step, axis=1, keepdims=True)
            step *= np.minimum(1.0, MAX_STEP / np.maximum(length, 1e-300))
        t = np.ones(len(idx))
        moved = np.zeros(len(idx), dtype=bool)
        for _ in range(30):
            trial = patch.normalize(x[idx] + t[:, None] * step)
            ft = fun(trial)
            ok = (ft > f[idx]) & ~moved
            x[idx[ok]] = trial[ok]
            moved |= ok
            t[~moved] *= 0.5
            if moved.all():
                break
        fnew = fun(x[idx])
        gain = fnew - f[idx]
        f[idx] = fnew
        done = ~moved | (gain <= 1e-15 * np.abs(fnew))
        active[idx[done]] = False
        if not active.any():
            break
    return x, np.sqrt(f)


class SupEstimator:
    """Grid-plus-refinement sup of ``|F|`` over a union of patches."""

    def __init__(self, patches, topk=4):
        self.patches = list(patches)
        self.topk = topk
        self._params = [p.grid_params() for p in self.patches]
        self._points = [p.embed(x) for p, x in zip(self.patches, self._params)]

    @property
    def grid_points(self):
        return np.concatenate(self._points, axis=0)

    def sup(self, func):
        """Return ``(sup_value, argmax_point)`` for a vectorized ``func``."""
        best_val, best_pt = -np.inf, None
        for patch, params, pts in zip(self.patches, self._params, self._points):
            vals = np.abs(func(pts))
            order = np.argsort(-vals, kind="stable")[: self.topk]
            if isinstance(patch, Finite):
                i = order[0]
                cand_val, cand_pt = vals[i], pts[i]
            else:
                xr, fr = refine_max(func, patch, params[order])
                j = int(np.argmax(fr))
                cand_val, cand_pt = fr[j], patch.embed(xr[j : j + 1])[0]
                if vals[order[0]] > cand_val:
                    cand_val, cand_pt = vals[order[0]], pts[order[0]]
            if cand_val > best_val:
                best_val, best_pt = cand_val, cand_pt
        return float(best_val), best_pt

    def sup_candidates(self, func, stencil=()):
        """Refined local maxima (one per start) across patches; used to grow active sets.

        With a ``stencil`` of step lengths, parameter-space neighbours of each
        maximizer at those distances are returned as well, so that a finite
        constraint set sees the local curvature of the boundary.
        """
        out = []
        for patch, params, pts in zip(self.patches, self._params, self._points):
            if isinstance(patch, Finite):
                continue
            vals = np.abs(func(pts))
            order = np.argsort(-vals, kind="stable")[: self.topk]
            xr, _ = refine_max(func, patch, params[order])
            xr = patch.normalize(xr)
            groups = [xr]
            eye = np.eye(xr.shape[1])
            for h in stencil:
                groups.append((xr[:, None, :] + h * eye[None]).reshape(-1, xr.shape[1]))
                groups.append((xr[:, None, :] - h * eye[None]).reshape(-1, xr.shape[1]))
            out.append(patch.embed(np.concatenate(groups, axis=0)))
        if not out:
            return np.zeros((0, self._points[0].shape[1]), dtype=complex)
        return np.concatenate(out, axis=0)
