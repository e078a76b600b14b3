import numpy as np
import pytest
import scipy.linalg as sla
from hypothesis import given, settings, strategies as st

from helpers import disk_points, szego_gram_loops, two_point_norm
from holoext import pick
from holoext.errors import DomainError, InputError

seeds = st.integers(0, 100_000)


def test_gram_matches_loops():
    nodes = np.array([0, 0.5, -0.3j, 0.2 + 0.6j])
    np.testing.assert_allclose(pick.gram("szego_disk", nodes).entries, szego_gram_loops(nodes), atol=1e-15)


def test_gram_kernels_examples():
    G = pick.gram("szego_polydisk_product", [[0.5, 0.5j]]).entries
    assert G[0, 0] == pytest.approx(1 / 0.75**2)
    G = pick.gram("cauchy_szego_ball", [[0.6, 0], [0, 0.6]]).entries
    assert G[0, 0] == pytest.approx(1 / 0.64**2)
    assert G[0, 1] == pytest.approx(1)


@settings(max_examples=40)
@given(seeds, st.sampled_from(pick.KERNELS))
def test_grams_are_positive_definite(seed, kernel):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 7))
    first = disk_points(rng, n, 0.6, 0.1)
    nodes = first if kernel == "szego_disk" else np.column_stack([first, 0.6 * disk_points(rng, n, 0.6, 0.0)])
    G = pick.gram(kernel, nodes).entries
    np.testing.assert_allclose(G, G.conj().T, atol=1e-12)
    assert np.linalg.eigvalsh(G)[0] > 0


def test_node_validation():
    with pytest.raises(InputError):
        pick.gram("bergman", [0.1])
    with pytest.raises(DomainError):
        pick.gram("szego_disk", [0.1, 1.0])
    with pytest.raises(DomainError):
        pick.gram("cauchy_szego_ball", [[0.8, 0.8]])
    with pytest.raises(InputError):
        pick.gram("szego_disk", [0.1, 0.1])
    with pytest.raises(InputError):
        pick.gram("szego_disk", [[0.1, 0.2]])
    with pytest.raises(InputError):
        pick.PickProblem(pick.gram("szego_disk", [0.1, 0.2]), [1])


def test_pick_matrix_example():
    M = pick.pick_matrix(pick.PickProblem(pick.gram("szego_disk", [0, 0.5]), [0, 0.5]))
    np.testing.assert_allclose(M, np.ones((2, 2)))
    assert pick.is_psd(M)
    assert pick.min_eigenvalue(M) == pytest.approx(0, abs=1e-12)


def test_is_psd_rejects_non_hermitian():
    with pytest.raises(InputError):
        pick.is_psd(np.array([[1, 1], [0, 1]]))
    assert pick.is_psd(np.zeros((0, 0)))
    assert not pick.is_psd(np.diag([1, -1e-3]))


def test_two_point_closed_form():
    assert pick.minimal_sup_norm("szego_disk", [0, 0.5], [0, 0.75]) == pytest.approx(1.5, abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_two_point_matches_schwarz_pick(seed):
    rng = np.random.default_rng(seed)
    l1, l2 = disk_points(rng, 2, 0.9, 0.05)
    w1, w2 = 2 * (rng.standard_normal(2) + 1j * rng.standard_normal(2))
    t = pick.minimal_sup_norm("szego_disk", [l1, l2], [w1, w2])
    assert t == pytest.approx(two_point_norm(l1, l2, w1, w2), rel=1e-8, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_minimal_norm_is_generalized_eigenvalue(seed):
    # t*^2 is the top eigenvalue of W G W* against G
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 6))
    nodes = disk_points(rng, n)
    w = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    G = szego_gram_loops(nodes)
    top = sla.eigh(np.outer(w, np.conj(w)) * G, G, eigvals_only=True)[-1]
    assert pick.minimal_sup_norm("szego_disk", nodes, w) == pytest.approx(np.sqrt(top), rel=1e-8)


@settings(max_examples=30, deadline=None)
@given(seeds, st.floats(0.05, 20))
def test_minimal_norm_homogeneous(seed, c):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 5))
    nodes = disk_points(rng, n)
    w = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    t = pick.minimal_sup_norm("szego_disk", nodes, w)
    assert pick.minimal_sup_norm("szego_disk", nodes, c * w) == pytest.approx(c * t, rel=1e-8)
    # a unimodular phase does not change the answer
    assert pick.minimal_sup_norm("szego_disk", nodes, 1j * w) == pytest.approx(t, rel=1e-8)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_feasibility_straddles_minimal_norm(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 6))
    nodes = disk_points(rng, n)
    w = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    g = pick.gram("szego_disk", nodes)
    t = pick.minimal_sup_norm("szego_disk", nodes, w)
    assert pick.is_psd(pick.pick_matrix(pick.PickProblem(g, w / (t * (1 + 1e-4)))))
    assert not pick.is_psd(pick.pick_matrix(pick.PickProblem(g, w / (t * (1 - 1e-4)))))


def test_minimal_norm_of_constant_targets():
    # a constant is its own minimal interpolant
    rep = pick.solve_minimal_norm("szego_disk", [0.1, -0.4j, 0.3], [0.7, 0.7, 0.7])
    assert rep.value == pytest.approx(0.7)
    assert rep.exact and rep.iterations == 0
    assert pick.minimal_sup_norm("szego_disk", [0.1, 0.2], [0, 0]) == 0


def test_report_fields():
    rep = pick.solve_minimal_norm("cauchy_szego_ball", [[0, 0], [0.5, 0]], [0, 0.75])
    d = rep.to_dict()
    assert d["bound"] == "lower" and not d["exact"]
    assert d["bracket"][0] <= d["t_star"] <= d["bracket"][1]
    assert len(d["min_eigenvalue_trace"]) >= rep.iterations
    # 1.5 z1 interpolates with sup 1.5 on the ball, so the lower bound cannot exceed it
    assert 0.75 <= rep.value <= 1.5 + 1e-9
    with pytest.raises(InputError):
        pick.solve_minimal_norm("szego_disk", [0.1], [1], tol=0)


def test_from_json():
    prob = pick.PickProblem.from_json({"kernel": "szego_disk", "nodes": [[0, 0], [0.5, 0]],
                                       "targets": [[0, 0], [0.5, 0]]})
    np.testing.assert_allclose(prob.targets, [0, 0.5])
    with pytest.raises(InputError):
        pick.PickProblem.from_json({"kernel": "szego_disk"})
