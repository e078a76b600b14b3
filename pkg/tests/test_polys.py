import numpy as np
import pytest
from hypothesis import given, strategies as st

from holoext.errors import InputError
from holoext.polys import AnalyticDisc, Poly, VectorPolyMap, monomial_matrix, monomials

coef = st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False)


def test_monomials_count_and_order():
    assert monomials(2, 2) == ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2))
    assert len(monomials(3, 4)) == 35


def test_monomial_matrix():
    V = monomial_matrix([[2, 3]], [(0, 0), (1, 2), (3, 0)])
    np.testing.assert_array_equal(V, [[1, 18, 8]])


@given(coef, coef, coef, coef)
def test_arithmetic_matches_pointwise(a, b, c, z):
    p = Poly({(0,): a, (1,): b})
    q = Poly({(2,): c, (0,): 1})
    pt = [[z]]
    assert (p * q)(pt)[0] == pytest.approx(p(pt)[0] * q(pt)[0], rel=1e-9, abs=1e-9)
    assert (p + q)(pt)[0] == pytest.approx(p(pt)[0] + q(pt)[0], rel=1e-9, abs=1e-9)
    assert (p - q)(pt)[0] == pytest.approx(p(pt)[0] - q(pt)[0], rel=1e-9, abs=1e-9)


def test_poly_validation_and_json():
    with pytest.raises(InputError):
        Poly({(-1,): 1})
    with pytest.raises(InputError):
        Poly({(1,): 1, (1, 0): 2})
    with pytest.raises(InputError):
        Poly({})
    p = Poly({(1, 2): 1 - 2j, (0, 0): 3}, 2)
    assert Poly.from_json(p.to_json()) == p
    assert p.degree == 3
    assert Poly.constant(0, 2)([[1, 1]])[0] == 0
    with pytest.raises(InputError):
        p([[1, 2, 3]])


def test_disc_and_vector_map():
    disc = AnalyticDisc([[0.5, 0], [0.5, 0.5j]])
    assert disc.degree == 1 and disc.dim == 2
    np.testing.assert_allclose(disc(1.0)[0] if np.ndim(disc(1.0)) == 2 else disc(1.0), [1, 0.5j])
    assert AnalyticDisc.from_json(disc.to_json())(0.3).tolist() == disc(0.3).tolist()
    f = VectorPolyMap([Poly.coordinate(1, 2), Poly.coordinate(0, 2)])
    np.testing.assert_allclose(f([[1, 2]]), [[2, 1]])
    assert VectorPolyMap.from_json(f.to_json())([[1, 2]]).tolist() == f([[1, 2]]).tolist()
