"""Seeded multistart search for polynomials that separate two points.

Maximizes rho(p(lam) / S(p), p(mu) / S(p)) over polynomial coefficient
vectors, where S(p) is the sup of |p| over a compact test set (the boundary
of Omega, or the closure of a variety).  Rescaling by S(p) turns the
constrained problem into an unconstrained one.

S(p) is estimated on a fixed grid plus an active set of refined maximizers.
Every ``EXCHANGE_EVERY`` evaluations the incumbent's sup is refined and the
new maximizers join the active set, so the optimizer cannot exploit gaps
between grid points for long.  Reported values always use the refined sup.

Determinism: restarts have a fixed length, each draws from its own
``SeedSequence`` child, ties go to the lowest restart index, and each degree
level runs with its own active set.  For budgets that are multiples of the
restart length the candidate sets are nested, so the reported value is
nondecreasing in both the degree and the budget.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .errors import InputError, SearchFailure
from .polys import Poly, monomial_matrix, monomials

RESTART_LENGTH = 1000
EXCHANGE_EVERY = 100
SUP_SLACK = 1e-9
POLISH_ROUNDS = 6
POLISH_CONSTRAINTS = 256
POLISH_GAP = 0.02
STENCIL = (0.1, 0.03, 0.01, 3e-3, 1e-3)


def _rho(a, b):
    return abs(a - b) / abs(1 - np.conj(a) * b)


@dataclass
class SearchResult:
    value: float
    poly: Poly
    sup: float
    degree: int
    restart: int
    evaluations: int
    history: list = field(default_factory=list)


class _Level:
    """One degree level: the objective, its active set and the ES restarts."""

    def __init__(self, estimator, lam, mu, nvars, degree):
        self.estimator = estimator
        self.exps = monomials(nvars, degree)
        self.grid_rows = monomial_matrix(estimator.grid_points, self.exps)
        self.active_rows = np.zeros((0, len(self.exps)), dtype=complex)
        self.recent_rows = self.active_rows
        self.row_lam = monomial_matrix(lam, self.exps)[0]
        self.row_mu = monomial_matrix(mu, self.exps)[0]
        self.evaluations = 0

    def _func(self, c):
        exps = self.exps

        def f(points):
            return monomial_matrix(points, exps) @ c

        return f

    def objective(self, c):
        self.evaluations += 1
        s = np.max(np.abs(self.grid_rows @ c))
        if self.active_rows.shape[0]:
            s = max(s, np.max(np.abs(self.active_rows @ c)))
        if not np.isfinite(s) or s <= 0:
            return -np.inf
        u = (self.row_lam @ c) / s
        v = (self.row_mu @ c) / s
        if abs(u) >= 1 or abs(v) >= 1:
            return -np.inf
        return float(_rho(u, v))

    def exchange(self, c, stencil=()):
        pts = self.estimator.sup_candidates(self._func(c), stencil)
        if pts.shape[0]:
            self.recent_rows = monomial_matrix(pts, self.exps)
            self.active_rows = np.concatenate([self.active_rows, self.recent_rows])

    def certified(self, c):
        """Value and sup of ``c`` under the refined sup estimate."""
        s_ref, _ = self.estimator.sup(self._func(c))
        s = max(s_ref, np.max(np.abs(self.grid_rows @ c)))
        if self.active_rows.shape[0]:
            s = max(s, np.max(np.abs(self.active_rows @ c)))
        if not np.isfinite(s) or s <= 0:
            return -np.inf, s
        s *= 1 + 1e-12  # keep the rescaled sup at or below 1 after rounding
        u = (self.row_lam @ c) / s
        v = (self.row_mu @ c) / s
        if abs(u) >= 1 or abs(v) >= 1:
            return -np.inf, s
        return float(_rho(u, v)), s

    def _constraint_rows(self, c):
        """Rows where |p| is near its max: from the grid and the active set, plus the latest exchange."""
        out = [self.recent_rows]
        for rows in (self.grid_rows, self.active_rows):
            if rows.shape[0]:
                vals = np.abs(rows @ c)
                top = np.argsort(-vals, kind="stable")[:POLISH_CONSTRAINTS]
                out.append(rows[top[vals[top] >= 0.5 * vals[top[0]]]])
        return np.concatenate(out)

    def polish(self, c, floor=-np.inf):
        """Exchange-method refinement with SLSQP.

        Solves max rho(p(lam), p(mu)) subject to |p(z)| <= 1 on the current
        constraint points, then refines the sup, adds the new maximizers and
        repeats.  Smooth constraints replace the kinked max, which is where
        the evolution strategy stalls.  A round that neither improves nor
        lifts the value above ``floor`` ends the polish.
        """
        a, b = self.row_lam, self.row_mu
        m = a.size

        def split(x):
            return x[:m] + 1j * x[m:]

        def real_grad(dc):
            return np.concatenate([2 * dc.real, -2 * dc.imag])

        def neg_rho2(x):
            cc = split(x)
            u, v = a @ cc, b @ cc
            w = u - v
            den = 1 - np.conj(u) * v
            N, D = abs(w) ** 2, abs(den) ** 2
            dN = (a - b) * np.conj(w)
            dD = -np.conj(u) * b * np.conj(den) - a * np.conj(v) * den
            return -N / D, -real_grad((dN * D - N * dD) / D**2)

        self.exchange(c, STENCIL)
        best_c, best_f = c, self.certified(c)[0]
        for _ in range(POLISH_ROUNDS):
            s = self.certified(c)[1]
            x0 = np.concatenate([(c / s).real, (c / s).imag])
            # the datum rows keep both images inside the disk between exchanges
            A = np.vstack([self._constraint_rows(c), a, b])

            def cons(x):
                return 1 - np.abs(A @ split(x)) ** 2

            def cons_jac(x):
                g = A @ split(x)
                dc = -A * np.conj(g)[:, None]
                return np.hstack([2 * dc.real, -2 * dc.imag])

            res = minimize(neg_rho2, x0, jac=True, method="SLSQP",
                           constraints=[{"type": "ineq", "fun": cons, "jac": cons_jac}],
                           options={"maxiter": 200, "ftol": 1e-15})
            c = split(res.x)
            self.exchange(c, STENCIL)
            f, _ = self.certified(c)
            stalled = f <= best_f + 1e-12 and f <= floor
            if f > best_f:
                best_c, best_f = c, f
            if stalled:
                break
            if res.success and res.fun < 0 and np.sqrt(-res.fun) - f < 1e-13:
                break
        return best_c

    def run_restart(self, x0, length, rng):
        """(1+1) evolution strategy with isotropic complex steps and the 1/5 rule.

        The incumbent is only trusted right after an exchange, when its own
        refined maximizers are in the active set; the best such checkpoint is
        returned.
        """
        x = np.array(x0, dtype=complex)
        nrm = np.linalg.norm(x)
        x = x / nrm if nrm > 0 else x
        self.exchange(x)
        fx = self.objective(x)
        best_x, best_f = x, fx
        sigma = 0.3
        m = x.size
        for t in range(1, length):
            step = (rng.standard_normal(m) + 1j * rng.standard_normal(m)) / np.sqrt(2 * m)
            y = x + sigma * step
            y = y / np.linalg.norm(y)
            fy = self.objective(y)
            if fy > fx:
                x, fx = y, fy
                sigma *= 1.5
            else:
                sigma *= 1.5 ** -0.25
            sigma = min(max(sigma, 1e-12), 2.0)
            if t % EXCHANGE_EVERY == 0 or t == length - 1:
                self.exchange(x)
                fx = self.objective(x)
                if fx > best_f:
                    best_x, best_f = x, fx
        return best_x


def maximize_separation(estimator, lam, mu, degree, budget, seed, init=None):
    """Best polynomial of degree <= ``degree`` separating ``lam`` from ``mu``.

    ``budget`` counts objective evaluations per degree level.  ``init`` is an
    optional starting polynomial for the first restart of degree level 1.
    """
    lam = np.asarray(lam, dtype=complex).reshape(-1)
    mu = np.asarray(mu, dtype=complex).reshape(-1)
    nvars = lam.size
    if degree < 1:
        raise InputError("degree must be positive")
    if budget < 1:
        raise InputError("budget must be positive")

    children = np.random.SeedSequence(seed).spawn(degree)
    chain = init
    best = None
    history = []
    total = 0
    for deg in range(1, degree + 1):
        level = _Level(estimator, lam, mu, nvars, deg)
        nrest = max(1, budget // RESTART_LENGTH)
        length = min(budget, RESTART_LENGTH)
        seeds = children[deg - 1].spawn(nrest)
        level_best = -np.inf
        for r in range(nrest):
            rng = np.random.default_rng(seeds[r])
            if r == 0 and chain is not None:
                x0 = chain.coeff_vector(level.exps)
            elif r == 0:
                # default first start: the Hermitian pairing with mu - lam
                lin = [e for e in level.exps if sum(e) == 1]
                x0 = Poly({e: np.conj(mu[e.index(1)] - lam[e.index(1)]) for e in lin}, nvars).coeff_vector(level.exps)
            else:
                x0 = rng.standard_normal(len(level.exps)) + 1j * rng.standard_normal(len(level.exps))
            x = level.run_restart(x0, length, rng)
            # polishing is the expensive step, so only competitive restarts get it;
            # the rule looks at earlier restarts only, which keeps budgets nested
            if r == 0 or level.certified(x)[0] >= level_best - POLISH_GAP:
                x = level.polish(x, level_best)
            val, s = level.certified(x)
            level_best = max(level_best, val)
            history.append((deg, r, val))
            poly = Poly.from_coeffs(level.exps, x / s, nvars)
            if r == 0:
                chain = poly
            if np.isfinite(val) and (best is None or val > best.value):
                best = SearchResult(val, poly, 1.0, deg, r, 0)
        total += level.evaluations
    if best is None:
        raise SearchFailure("no feasible polynomial found within the budget")
    best.history = history
    best.evaluations = total
    best.sup, _ = estimator.sup(best.poly)
    return best
