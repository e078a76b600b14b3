import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from helpers import disk_instance, disk_points, random_poly1
from holoext import operator_model as om, pick
from holoext.errors import ConsistencyError, IllConditionedError, InputError
from holoext.polys import Poly

seeds = st.integers(0, 100_000)


def _model(seed):
    nodes, p = disk_instance(seed)
    return om.build_model("szego_disk", nodes), nodes, p


def test_coordinate_is_gram_adjoint_of_conjugate_diagonal():
    nodes = np.array([0.1, -0.5j, 0.3 + 0.2j])
    model = om.build_model("szego_disk", nodes)
    T = om.GramOperator(model.coordinate(0), model.gram)
    # T* k_j = conj(lam_j) k_j, i.e. the Gram adjoint is diagonal
    np.testing.assert_allclose(T.adjoint().matrix, np.diag(np.conj(nodes)), atol=1e-12)
    np.testing.assert_allclose(T.adjoint().adjoint().matrix, T.matrix, atol=1e-10)


def test_ill_conditioned_model_rejected():
    with pytest.raises(IllConditionedError) as exc:
        om.build_model("szego_disk", [0.99, 0.99 + 1e-9])
    assert exc.value.condition > 1e12


def test_evaluate_poly_examples():
    model = om.build_model("szego_disk", [0, 0.5])
    assert om.operator_norm(om.evaluate_poly(model, Poly({(0,): 2.0}))) == pytest.approx(2)
    assert om.operator_norm(om.evaluate_poly(model, Poly({(1,): 1.5}))) == pytest.approx(1.5)
    with pytest.raises(InputError):
        om.evaluate_poly(model, Poly({(1, 0): 1.0}))


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_functional_calculus_is_multiplicative(seed):
    model, nodes, p = _model(seed)
    q = random_poly1(np.random.default_rng(seed + 1), 2)
    pq = om.evaluate_poly(model, p * q).matrix
    np.testing.assert_allclose(pq, om.evaluate_poly(model, p).matrix @ om.evaluate_poly(model, q).matrix,
                               atol=1e-8 * max(1, np.abs(pq).max()))


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_norm_equals_minimal_norm(seed):
    model, nodes, p = _model(seed)
    norm = om.operator_norm(om.evaluate_poly(model, p))
    assert norm == pytest.approx(pick.minimal_sup_norm("szego_disk", nodes, p(nodes[:, None])), rel=1e-8, abs=1e-10)


@settings(max_examples=40, deadline=None)
@given(seeds, st.floats(0.1, 10))
def test_defect_witness_and_rescaling(seed, c):
    model, nodes, p = _model(seed)
    norm = om.operator_norm(om.evaluate_poly(model, p))
    nu, a = om.defect_witness(model, p)
    assert nu == pytest.approx(1 - norm**2, abs=1e-8 * max(1, norm**2))
    assert om.defect_form(model, p, a) == pytest.approx(nu, abs=1e-8 * max(1, norm**2))
    # the norm is homogeneous in p
    assert om.operator_norm(om.evaluate_poly(model, c * p)) == pytest.approx(c * norm, rel=1e-9, abs=1e-12)


def test_defect_form_consistency_error(monkeypatch):
    model, nodes, p = _model(3)
    a = np.ones(model.size)
    monkeypatch.setattr(om, "_defect_closed_form", lambda *args: 123.0)
    with pytest.raises(ConsistencyError):
        om.defect_form(model, p, a)


def test_defect_form_length_checked():
    model, nodes, p = _model(3)
    with pytest.raises(InputError):
        om.defect_form(model, p, np.ones(model.size + 1))


def test_von_neumann_check():
    model = om.build_model("szego_disk", [0, 0.5])
    p = Poly({(1,): 1.5})
    rep = om.von_neumann_check(model, p, 0.75, 1.5)
    assert rep.norm == pytest.approx(1.5)
    assert not rep.vn_V_pass and rep.vn_Omega_pass
    assert rep.min_defect == pytest.approx(1 - 2.25)
    with pytest.raises(InputError):
        om.von_neumann_check(model, p, -1, 1)


def test_subordination():
    nodes = np.array([0.2, -0.4j, 0.5])
    model = om.build_model("szego_disk", nodes)
    psi = Poly({(0,): 1.0})
    for lam in nodes:
        psi = psi * Poly({(1,): 1.0, (0,): -lam})
    assert om.subordination_check(model, psi, psi(nodes[:, None]))
    assert om.operator_norm(om.evaluate_poly(model, psi)) <= 1e-12
    q = Poly({(1,): 1.0})
    assert om.subordination_check(model, q, q(nodes[:, None]))  # does not vanish: nothing to check
    with pytest.raises(InputError):
        om.subordination_check(model, psi, [0, 0])


def test_polydisk_model_commutes():
    rng = np.random.default_rng(0)
    nodes = np.column_stack([disk_points(rng, 4, 0.6, 0.1), disk_points(rng, 4, 0.6, 0.1)])
    model = om.build_model("szego_polydisk_product", nodes)
    T1, T2 = model.coordinate(0), model.coordinate(1)
    np.testing.assert_allclose(T1 @ T2, T2 @ T1, atol=1e-10)
    # coordinate multipliers of the polydisk are contractions
    assert om.operator_norm(om.GramOperator(T1, model.gram)) <= 1 + 1e-9


def test_psi_cup():
    p = Poly({(0,): 1j, (2,): 2 - 1j})
    z = np.array([[0.3 + 0.1j]])
    assert om.psi_cup(p)(z)[0] == pytest.approx(np.conj(p(np.conj(z))[0]))


def test_ball_kernel_models_are_row_contractions():
    # the coordinate tuple of a ball-kernel model satisfies sum T_r T_r* <= I
    rng = np.random.default_rng(5)
    for _ in range(20):
        n = int(rng.integers(1, 6))
        nodes = np.column_stack([disk_points(rng, n, 0.6, 0.1), 0.5 * disk_points(rng, n, 0.6, 0.0)])
        model = om.build_model("cauchy_szego_ball", nodes)
        rows = np.hstack([om._congruence(om.GramOperator(model.coordinate(r), model.gram)) for r in range(2)])
        assert np.linalg.norm(rows, 2) <= 1 + 1e-9
