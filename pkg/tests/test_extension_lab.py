import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from holoext import domains, extension_lab as lab, hyperbolic as hyp
from holoext.errors import InputError, RangeViolationError, UnsupportedDomainError
from holoext.polys import Poly, VectorPolyMap

B2 = domains.ball(2)


def test_parabola_radius_touches_sphere():
    tau = lab.parabola_radius()
    assert lab.PARABOLA_SCALE**2 * (tau**2 + tau**4) == pytest.approx(1, abs=1e-14)
    assert tau == pytest.approx(0.8476, abs=1e-4)


@pytest.mark.parametrize("spec", [
    lab.ball_slice(1), lab.ball_slice(2, 3), lab.parabola_curve(), lab.sym_R(),
    lab.sym_D(0.3), lab.sym_R_union_D(0.2j), lab.line([1, 1j]), lab.point_list([[0.1, 0.2], [0, 0.3j]]),
])
def test_samples_lie_on_spec_and_in_host(spec):
    s = lab.sample_variety(spec, 12 if spec.kind != "point_list" else 2, 4)
    assert np.max(spec.residual(s.points)) <= 1e-12
    assert np.all(domains.contains(spec.host_domain(), s.points))
    again = lab.sample_variety(spec, len(s.points), 4)
    np.testing.assert_array_equal(s.points, again.points)
    assert lab.VarietySpec.from_json(spec.to_json()) == spec


def test_sample_anchors():
    s = lab.sample_variety(lab.parabola_curve(), 5, 0)
    np.testing.assert_allclose(s.points[:2], [[0, 0], [0.45, 0.225]])
    u = lab.sample_variety(lab.sym_R_union_D(0.0), 6, 0)
    assert u.branches[:4] == ["R", "D", "R", "D"]
    np.testing.assert_allclose(u.points[:4], [[0, 0], [0, 0], [1, 0.25], [0, 0.5]])


def test_spec_validation():
    with pytest.raises(InputError):
        lab.VarietySpec("torus")
    with pytest.raises(InputError):
        lab.sym_D(1.2)
    with pytest.raises(InputError):
        lab.ball_slice(3, 2)
    with pytest.raises(InputError):
        lab.VarietySpec.from_json({"dim": 2})
    with pytest.raises(InputError):
        lab.sample_variety(lab.parabola_curve(), 1, 0)


def test_residual_values():
    spec = lab.parabola_curve()
    assert spec.residual([[0.3, 0.1]])[0] == pytest.approx(0)
    assert spec.residual([[0.3, 0.2]])[0] == pytest.approx(0.1)
    assert lab.ball_slice(1).residual([[0.3, 0.4]])[0] == pytest.approx(0.4)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 1000))
def test_geodesy_dichotomy(seed):
    flat = lab.totally_geodesic_test(B2, lab.sample_variety(lab.ball_slice(1), 15, seed), 10, seed, 1e-9)
    assert flat.passed and flat.worst_distance <= 1e-12
    line = lab.totally_geodesic_test(B2, lab.sample_variety(lab.line([0.6, 0.8j]), 15, seed), 10, seed, 1e-9)
    assert line.passed
    curved = lab.totally_geodesic_test(B2, lab.sample_variety(lab.parabola_curve(), 15, seed), 10, seed, 1e-9)
    assert not curved.passed and curved.worst_distance >= 1e-3
    assert curved.pairs_tested == 10


def test_geodesy_needs_ball():
    s = lab.sample_variety(lab.sym_R(), 5, 0)
    with pytest.raises(UnsupportedDomainError):
        lab.totally_geodesic_test(domains.symmetrized_bidisk(), s, 3, 0, 1e-9)


def test_parabola_certificate_low_degree():
    s = lab.sample_variety(lab.parabola_curve(), 6, 0)
    datum = hyp.Datum(s.points[0], s.points[1])
    cert = lab.certificate_search(B2, s, datum, 1, 1000, 0)
    assert cert.baseline == pytest.approx(hyp.kobayashi_ball(datum).distance)
    assert cert.baseline_kind == "kobayashi_exact"
    assert cert.sup_on_V <= 1 + 1e-9
    assert cert.margin > 0.05
    # polynomials on the parabola are polynomials in its parameter, so rho(0, t) is optimal
    tau = lab.parabola_radius()
    assert cert.achieved == pytest.approx(0.5 / tau, abs=1e-6)
    d = cert.to_dict()
    assert d["margin"] == cert.margin and len(d["best_by_degree"]) == 1


def test_slice_certificate_has_no_margin():
    s = lab.sample_variety(lab.ball_slice(1), 6, 1)
    cert = lab.certificate_search(B2, s, hyp.Datum(s.points[2], s.points[3]), 2, 1000, 1)
    assert cert.margin <= 1e-6
    assert cert.margin >= -1e-3


def test_certificate_rejects_off_variety_datum():
    s = lab.sample_variety(lab.parabola_curve(), 4, 0)
    with pytest.raises(InputError):
        lab.certificate_search(B2, s, hyp.Datum([0, 0], [0.3, 0.3]), 1, 100, 0)


def test_lempert_retract_passes():
    u = np.array([1, 2j]) / np.sqrt(5)
    r = lab.lempert_retract(u)
    rep = lab.retract_check(r, B2, lab.sample_variety(lab.line(u), 10, 0), 100, 0, 1e-10)
    assert rep.idempotent_pass and rep.fixes_V_pass and rep.range_in_V_pass


def test_non_retract_detected():
    # the coordinate projection onto z1 does not fix the line through (1, 1)
    r = VectorPolyMap([Poly.coordinate(0, 2), Poly.constant(0, 2)])
    u = np.array([1, 1]) / np.sqrt(2)
    rep = lab.retract_check(r, B2, lab.sample_variety(lab.line(u), 10, 0), 50, 0, 1e-10)
    assert rep.idempotent_pass and not rep.fixes_V_pass and not rep.range_in_V_pass


def test_retract_range_violation():
    r = VectorPolyMap([Poly.coordinate(0, 2) * 3, Poly.constant(0, 2)])
    with pytest.raises(RangeViolationError):
        lab.retract_check(r, B2, lab.sample_variety(lab.ball_slice(1), 5, 0), 50, 0, 1e-10)


@settings(max_examples=50)
@given(st.integers(0, 100_000))
def test_slice_decomposition(seed):
    rng = np.random.default_rng(seed)
    k = int(rng.integers(1, 4))
    b = rng.standard_normal(k) + 1j * rng.standard_normal(k)
    b *= 0.9 * rng.random() / np.linalg.norm(b)
    if abs(b[-1]) < 1e-3:
        b[-1] = 1e-3
    c = rng.standard_normal(k) + 1j * rng.standard_normal(k)
    c *= 0.49 * abs(b[-1]) * rng.random() / np.linalg.norm(c)
    scaled, rem = lab.slice_decomposition(b, c)
    np.testing.assert_allclose(scaled + rem, c, atol=1e-15)
    assert scaled[k - 1] == c[k - 1] and rem[k - 1] == 0
    ratio = c[k - 1] / b[k - 1]
    np.testing.assert_allclose(scaled[: k - 1], ratio * b[: k - 1])


def test_slice_decomposition_rejects():
    with pytest.raises(InputError):
        lab.slice_decomposition([0.5, 0.5], [0.3, 0.3])
    with pytest.raises(InputError):
        lab.slice_decomposition([0, 0], [0, 0])
    with pytest.raises(InputError):
        lab.slice_decomposition([1, 0.5], [0, 0])


def test_union_in_symmetrized_bidisk_gives_no_certificate():
    # R union D_beta is expected to have the extension property, so the search finds no margin
    s = lab.sample_variety(lab.sym_R_union_D(0.3), 8, 0)
    dom = s.spec.host_domain()
    for i, j in ((0, 1), (2, 3), (4, 5)):
        cert = lab.certificate_search(dom, s, hyp.Datum(s.points[i], s.points[j]), 2, 1000, 0)
        assert cert.baseline_kind == "caratheodory_search"
        assert cert.sup_on_V <= 1 + 1e-9
        assert cert.margin <= 1e-6
