"""Geodesics of the ball and the agreement of the two invariant distances."""

import numpy as np

from holoext import domains, hyperbolic as hyp

lam, mu = np.array([0.0, 0.0]), np.array([0.3, 0.4j])
res = hyp.kobayashi_ball(hyp.Datum(lam, mu))
print(f"Kobayashi distance from 0 to {mu}: {res.distance:.12f}")

zeta = np.exp(2j * np.pi * np.arange(8) / 8)
print("boundary values of the extremal disc have norm", np.round(np.linalg.norm(res.disc(zeta), axis=1), 12))

phi = hyp.left_inverse_ball(res.disc)
print("left inverse recovers the disc parameter:", np.allclose(phi(res.disc(0.7 * zeta)), 0.7 * zeta))

cara = hyp.caratheodory_search(domains.ball(2), hyp.Datum(lam, mu), 1, 1000, 0)
print(f"Caratheodory search (degree 1): {cara.value:.12f}, sup on the sphere {cara.sup:.12f}")

# away from the origin the automorphism carries one point to 0
a = np.array([0.2, -0.5j])
b = np.array([-0.1, 0.3])
print(f"distance via automorphism: {np.linalg.norm(hyp.ball_automorphism_to_origin(a, b)):.12f}, "
      f"closed form: {hyp.kobayashi_ball(hyp.Datum(a, b)).distance:.12f}")
