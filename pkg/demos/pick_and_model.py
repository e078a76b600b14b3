"""Minimal interpolation norms and the model tuple on a handful of disk nodes."""

import numpy as np

from holoext import operator_model as om, pick
from holoext.polys import Poly

nodes = np.array([0.0, 0.5, -0.3j, 0.4 + 0.4j])
p = Poly({(0,): 0.1, (1,): 0.8, (2,): -0.5j})
w = p(nodes[:, None])

rep = pick.solve_minimal_norm("szego_disk", nodes, w)
print(f"minimal sup-norm of an interpolant: t* = {rep.value:.12f} ({rep.iterations} bisection steps)")

model = om.build_model("szego_disk", nodes)
norm = om.operator_norm(om.evaluate_poly(model, p))
print(f"norm of p(T) on the model space:      {norm:.12f}")

# the defect form is negative exactly when p / t fails to be a contraction
nu, a = om.defect_witness(model, p)
print(f"smallest defect eigenvalue {nu:.6f} = 1 - ||p(T)||^2 = {1 - norm**2:.6f}")
scaled = p / (1.001 * norm)
print("Pick matrix of p / (1.001 ||p(T)||) is PSD:",
      pick.is_psd(pick.pick_matrix(pick.PickProblem(model.gram, scaled(nodes[:, None])))))
