"""Fast built-in invariant suite, run by ``holoext selftest``.

Each check is a small seeded instance of an invariant the library promises;
the whole suite takes a few seconds.
"""

from __future__ import annotations

import numpy as np

from . import domains, extension_lab as lab, hyperbolic as hyp, operator_model as om, pick
from .polys import Poly


def _rand_disk(rng, n, radius=0.9):
    return radius * np.sqrt(rng.random(n)) * np.exp(2j * np.pi * rng.random(n))


def check_membership():
    G = domains.symmetrized_bidisk()
    return (domains.membership(domains.ball(2), [0.3, 0.4])
            and domains.membership(G, [1.0, 0.25])
            and not domains.membership(G, [2, 1]))


def check_symmetrized_image():
    rng = np.random.default_rng(0)
    z, w = _rand_disk(rng, 200, 0.999), _rand_disk(rng, 200, 0.999)
    return bool(np.all(domains.contains(domains.symmetrized_bidisk(), np.column_stack([z + w, z * w]))))


def check_boundary_samples():
    B = domains.ellipsoid([1, 2], [0.3, -0.5])
    pts = domains.boundary_sample(B, 50, 0)
    return all(abs(domains.defining_function(B, p).value) <= 1e-10 for p in pts)


def check_slc():
    ok = domains.check_strong_linear_convexity(domains.ball(2), [1, 0], 64, 0, 0.0).passed
    bad = domains.ellipsoid([1, 1], [0, 1.1], allow_unbounded=True)
    return ok and not domains.check_strong_linear_convexity(bad, [1, 0], 64, 0, 0.0).passed


def check_mobius():
    rng = np.random.default_rng(1)
    a, x, y = _rand_disk(rng, 3)
    lhs = hyp.rho(hyp.mobius_disk(a, x), hyp.mobius_disk(a, y))
    return abs(lhs - hyp.rho(x, y)) <= 1e-12 and abs(hyp.mobius_disk(a, hyp.mobius_disk(a, x)) - x) <= 1e-12


def check_automorphism():
    a = domains.interior_sample(domains.ball(3), 1, 0, 0.9)[0]
    z = domains.boundary_sample(domains.ball(3), 20, 1)
    img = hyp.ball_automorphism_to_origin(a, z)
    back = hyp.ball_automorphism_to_origin(a, img)
    return (np.allclose(np.linalg.norm(img, axis=1), 1, atol=1e-10) and np.allclose(back, z, atol=1e-10)
            and np.linalg.norm(hyp.ball_automorphism_to_origin(a, a)) <= 1e-12)


def check_kobayashi():
    res = hyp.kobayashi_ball(hyp.Datum([0, 0], [0.3, 0.4]))
    return abs(res.distance - 0.5) <= 1e-12 and np.allclose(res.disc.coefficients[1], [0.6, 0.8])


def check_left_inverse():
    disc = hyp.ball_geodesic([0, 0], [0.36, 0.48j])
    phi = hyp.left_inverse_ball(disc)
    zeta = np.exp(2j * np.pi * np.arange(256) / 256) * 0.7
    return np.max(np.abs(phi(disc(zeta)) - zeta)) <= 1e-10


def check_caratheodory():
    res = hyp.caratheodory_search(domains.ball(2), hyp.Datum([0, 0], [0.3, 0.4]), 1, 1000, 0)
    return abs(res.value - 0.5) <= 1e-6 and res.sup <= 1 + 1e-9


def check_pick():
    t = pick.minimal_sup_norm("szego_disk", [0, 0.5], [0, 0.75])
    M = pick.pick_matrix(pick.PickProblem(pick.gram("szego_disk", [0, 0.5]), [0, 0.5]))
    return abs(t - 1.5) <= 1e-6 and np.allclose(M, 1)


def check_model():
    rng = np.random.default_rng(3)
    nodes = _rand_disk(rng, 4, 0.8)
    model = om.build_model("szego_disk", nodes)
    p = Poly({(0,): 0.2, (1,): 0.5 - 0.3j, (2,): 0.4})
    norm = om.operator_norm(om.evaluate_poly(model, p))
    t = pick.minimal_sup_norm("szego_disk", nodes, p(nodes[:, None]))
    om.defect_form(model, p, rng.standard_normal(4) + 1j * rng.standard_normal(4))
    vanish = Poly({(0,): 1.0})
    for lam in nodes:
        vanish = vanish * Poly({(1,): 1.0, (0,): -lam})
    return abs(norm - t) <= 1e-7 and om.subordination_check(model, vanish, vanish(nodes[:, None]))


def check_geodesy():
    B = domains.ball(2)
    flat = lab.totally_geodesic_test(B, lab.sample_variety(lab.ball_slice(1), 12, 0), 10, 0, 1e-9)
    curved = lab.totally_geodesic_test(B, lab.sample_variety(lab.parabola_curve(), 12, 0), 10, 0, 1e-9)
    return flat.passed and not curved.passed and curved.worst_distance >= 1e-3


def check_certificate():
    s = lab.sample_variety(lab.parabola_curve(), 4, 0)
    cert = lab.certificate_search(domains.ball(2), s, hyp.Datum(s.points[0], s.points[1]), 1, 1000, 0)
    return cert.margin > 0 and cert.sup_on_V <= 1 + 1e-9


def check_retract():
    u = np.array([0.6, 0.8j])
    s = lab.sample_variety(lab.line(u), 10, 0)
    rep = lab.retract_check(lab.lempert_retract(u), domains.ball(2), s, 50, 0, 1e-10)
    return rep.idempotent_pass and rep.fixes_V_pass and rep.range_in_V_pass


def check_slice():
    scaled, rem = lab.slice_decomposition([0.5, 0.5, 0], [1 / 8, 1 / 8])
    return np.array_equal(scaled + rem, [1 / 8, 1 / 8]) and rem[1] == 0


CHECKS = [
    ("membership", check_membership),
    ("symmetrized_image", check_symmetrized_image),
    ("boundary_samples", check_boundary_samples),
    ("strong_linear_convexity", check_slc),
    ("mobius_invariance", check_mobius),
    ("ball_automorphism", check_automorphism),
    ("kobayashi_ball", check_kobayashi),
    ("left_inverse", check_left_inverse),
    ("caratheodory_equals_kobayashi", check_caratheodory),
    ("pick_two_point", check_pick),
    ("norm_equals_pick_bound", check_model),
    ("geodesy_dichotomy", check_geodesy),
    ("parabola_certificate", check_certificate),
    ("lempert_retract", check_retract),
    ("slice_decomposition", check_slice),
]


def run_all():
    """Run every check; a check that raises counts as a failure."""
    results = []
    for name, fn in CHECKS:
        try:
            ok = bool(fn())
            detail = ""
        except Exception as exc:  # a crash is reported, not propagated
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append({"check": name, "pass": ok, "detail": detail})
    return results
