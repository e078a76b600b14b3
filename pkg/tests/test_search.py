import numpy as np
import pytest

from holoext import domains, hyperbolic as hyp
from holoext.boundary import SupEstimator
from holoext.errors import InputError
from holoext.search import maximize_separation

LAM, MU = np.array([0.1, 0.2j]), np.array([-0.3, 0.1])


def _run(degree, budget, seed, dom=None):
    est = SupEstimator(domains.boundary_patches(dom or domains.ball(2)))
    return maximize_separation(est, LAM, MU, degree, budget, seed)


def test_deterministic():
    a, b = _run(2, 1000, 3), _run(2, 1000, 3)
    assert a.value == b.value
    assert a.poly == b.poly
    assert a.history == b.history


def test_monotone_in_degree_and_budget():
    one, two = _run(1, 1000, 0), _run(2, 1000, 0)
    assert two.value >= one.value
    more = _run(1, 2000, 0)
    assert more.value >= one.value
    assert more.history[0] == one.history[0]


def test_certified_sup_and_value():
    res = _run(1, 1000, 0)
    assert res.sup <= 1 + 1e-9
    p = res.poly
    assert res.value == pytest.approx(hyp.rho(p(LAM)[0], p(MU)[0]), abs=1e-12)
    assert res.evaluations > 0


def test_bidisk_search_never_beats_the_coordinates_by_much():
    dom = domains.bidisk()
    res = _run(2, 1000, 0, dom)
    best_coord = max(hyp.rho(LAM[0], MU[0]), hyp.rho(LAM[1], MU[1]))
    assert res.value <= best_coord + 1e-6


def test_input_checks():
    est = SupEstimator(domains.boundary_patches(domains.ball(2)))
    with pytest.raises(InputError):
        maximize_separation(est, LAM, MU, 0, 100, 0)
    with pytest.raises(InputError):
        maximize_separation(est, LAM, MU, 1, 0, 0)


def test_sphere_refinement_handles_flat_and_scale_invariant_objectives():
    from holoext.boundary import Quadric, refine_max

    patch = Quadric([1.0, 1.0], [1.0, 1.0])
    x0 = patch.grid_params()[:4]
    # constant on the sphere: nothing to climb, and no blow-up along the radial direction
    x, f = refine_max(lambda z: np.ones(len(z)), patch, x0)
    assert np.all(np.isfinite(x)) and np.allclose(f, 1)
    # |z1|^2 peaks at 1 on the circle z2 = 0
    x, f = refine_max(lambda z: z[:, 0] ** 2, patch, x0)
    assert np.max(f) == pytest.approx(1, abs=1e-12)
    assert np.all(np.isfinite(x))
