"""The commuting model tuple on the span of kernel functions.

With ``k_j`` the kernel function at node ``lam_j``, the coordinate operators
are defined through their adjoints, ``T_r* k_j = conj(lam_j[r]) k_j``.  Every
operator is stored by its matrix in the k-basis: column j holds the
coefficients of the image of ``k_j``.  The inner product of coefficient
vectors a, b is ``b* G a``, so the adjoint of a matrix A is ``G^-1 A* G`` and

    p(T) = G^-1 diag(p(lam)) G

for every polynomial p.  Nothing is ever evaluated at a matrix argument.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import ConsistencyError, IllConditionedError, InputError
from .pick import KernelGram, gram
from .polys import Poly

COND_LIMIT = 1e12
DEFECT_TOL = 1e-10
VN_SLACK = 1e-9
VANISH_TOL = 1e-12
ZERO_NORM = 1e-10


@dataclass
class ModelTuple:
    gram: KernelGram
    factor: np.ndarray  # lower Cholesky factor of the Gram matrix

    @property
    def nodes(self):
        return self.gram.nodes

    @property
    def dim_d(self):
        return self.gram.dim

    @property
    def size(self):
        return self.gram.size

    def coordinate(self, r):
        """Matrix of T_r in the k-basis."""
        return evaluate_poly(self, Poly.coordinate(r, self.dim_d)).matrix

    def to_json(self):
        return self.gram.to_json()


@dataclass
class GramOperator:
    matrix: np.ndarray
    gram: KernelGram

    def adjoint(self):
        G = self.gram.entries
        return GramOperator(np.linalg.solve(G, self.matrix.conj().T @ G), self.gram)


def build_model(kernel_id, nodes):
    """Model tuple on the kernel functions at ``nodes``; rejects ill-conditioned Grams."""
    g = gram(kernel_id, nodes)
    cond = float(np.linalg.cond(g.entries))
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise IllConditionedError(f"Gram condition number {cond:.3e} exceeds {COND_LIMIT:.0e}", cond)
    try:
        L = np.linalg.cholesky(g.entries)
    except np.linalg.LinAlgError:
        raise IllConditionedError("Gram matrix is not positive definite", cond) from None
    return ModelTuple(g, L)


def psi_cup(p):
    """The polynomial z -> conj(p(conj z)), i.e. p with conjugated coefficients."""
    return p.conjugate_coefficients()


def node_values(model, p):
    if p.nvars != model.dim_d:
        raise InputError(f"polynomial has {p.nvars} variables, model has dimension {model.dim_d}")
    return p(model.nodes)


def evaluate_poly(model, p):
    """p(T) in the k-basis: the Gram adjoint of diag(conj p(lam_j))."""
    w = node_values(model, p)
    G = model.gram.entries
    return GramOperator(np.linalg.solve(G, w[:, None] * G), model.gram)


def _congruence(op):
    """The operator's matrix in an orthonormal basis, ``L* A L^-*`` with G = L L*."""
    G = op.gram.entries
    try:
        L = np.linalg.cholesky(G)
    except np.linalg.LinAlgError:
        raise InputError("Gram matrix is singular") from None
    LA = L.conj().T @ op.matrix
    return sla.solve_triangular(L, LA.conj().T, lower=True).conj().T


def operator_norm(op):
    """Norm of ``op`` for the Gram inner product."""
    return float(np.linalg.norm(_congruence(op), 2))


def _defect_via_operator(model, p, a):
    G = model.gram.entries
    adj = evaluate_poly(model, p).adjoint().matrix
    y = adj @ a
    return float(np.real(np.vdot(a, G @ a) - np.vdot(y, G @ y)))


def _defect_closed_form(model, p, a):
    w = node_values(model, p)
    M = (1 - np.outer(w, np.conj(w))) * model.gram.entries
    return float(np.real(np.conj(a) @ M @ a))


def defect_form(model, p, a):
    """<(I - p(T) p(T)*) v, v> for v = sum_j a_j k_j.

    Computed through the operator and through the Pick-type bilinear sum; the
    two must agree to 1e-10 (relative to |v|^2 when that exceeds 1).
    """
    a = np.asarray(a, dtype=complex).reshape(-1)
    if a.size != model.size:
        raise InputError(f"coefficient vector has length {a.size}, expected {model.size}")
    via_op = _defect_via_operator(model, p, a)
    closed = _defect_closed_form(model, p, a)
    scale = max(1.0, float(np.real(np.vdot(a, model.gram.entries @ a))))
    if abs(via_op - closed) > DEFECT_TOL * scale:
        raise ConsistencyError(f"defect paths disagree: {via_op!r} vs {closed!r}")
    return via_op


def defect_witness(model, p):
    """Smallest value of the defect form on unit vectors and a vector attaining it.

    Solves the generalized eigenproblem M a = nu G a; the minimum nu equals
    ``1 - ||p(T)||^2`` and the eigenvector is normalized to unit Gram length.
    """
    w = node_values(model, p)
    G = model.gram.entries
    M = (1 - np.outer(w, np.conj(w))) * G
    nu, vecs = sla.eigh(0.5 * (M + M.conj().T), G)
    a = vecs[:, 0]
    a = a / np.sqrt(np.real(np.vdot(a, G @ a)))
    k = int(np.argmax(np.abs(a)))
    a = a * np.exp(-1j * np.angle(a[k]))  # fix the phase for reproducible reports
    return float(nu[0]), a


@dataclass
class VonNeumannReport:
    norm: float
    vn_V_pass: bool
    vn_Omega_pass: bool
    min_defect: float
    witness: np.ndarray

    def to_dict(self):
        return {
            "norm": self.norm,
            "vn_V_pass": self.vn_V_pass,
            "vn_Omega_pass": self.vn_Omega_pass,
            "min_defect_eigenvalue": self.min_defect,
            "witness": [[c.real, c.imag] for c in self.witness],
        }


def von_neumann_check(model, p, sup_on_V, sup_on_Omega):
    """Compare ||p(T)|| with caller-supplied sups over V and over the domain."""
    if sup_on_V < 0 or sup_on_Omega < 0:
        raise InputError("sups must be nonnegative")
    norm = operator_norm(evaluate_poly(model, p))
    nu, a = defect_witness(model, p)
    return VonNeumannReport(
        norm,
        bool(norm <= sup_on_V + VN_SLACK),
        bool(norm <= sup_on_Omega + VN_SLACK),
        nu,
        a,
    )


def subordination_check(model, p, variety_values):
    """If p vanishes at every node, p(T) must be the zero operator."""
    vals = np.asarray(variety_values, dtype=complex).reshape(-1)
    if vals.size != model.size:
        raise InputError(f"{vals.size} values for {model.size} nodes")
    if np.any(np.abs(vals) > VANISH_TOL):
        return True
    return bool(operator_norm(evaluate_poly(model, p)) <= ZERO_NORM)
