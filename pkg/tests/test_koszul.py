import random

from hypothesis import given, strategies as st

from trimdg.koszul import build_koszul, exterior_sign, koszul_lift
from trimdg.poly import default_ring

from conftest import P, random_poly


def test_d1(R):
    K = build_koszul(R)
    assert K.complex.ranks() == (1, 3, 3, 1)
    assert K.d(1).row(0) == R.gens


def test_exterior_signs(R):
    K = build_koszul(R)
    e1 = K.complex.basis_vector(1, K.index((1,))[1])
    e2 = K.complex.basis_vector(1, K.index((2,))[1])
    e12 = K.complex.basis_vector(2, K.index((1, 2))[1])
    assert K.act(1, e1, 1, e2) == e12
    assert K.act(1, e2, 1, e1) == tuple(-v for v in e12)
    assert not any(K.act(1, e1, 1, e1))
    assert exterior_sign((2,), (1, 3)) == -1
    assert exterior_sign((1,), (1, 2)) == 0


def test_lift_examples(R):
    x1, x2, x3 = R.gens
    K = build_koszul(R)
    assert koszul_lift(K, 1, [x1 ** 2]) == (x1, R.zero, R.zero)
    assert koszul_lift(K, 1, [R.one]) is None
    y = koszul_lift(K, 2, [x2, -x1, R.zero])
    assert K.complex.apply_d(2, y) == (x2, -x1, R.zero)
    assert y == (-R.one, R.zero, R.zero)
    # not a cycle
    assert koszul_lift(K, 2, [x1, R.zero, R.zero]) is None


def test_twisted_copy(R):
    K = build_koszul(R, 3, 4, "g1_")
    assert K.complex.degrees(1) == (5, 5, 5)
    assert K.complex.names(2) == ("g1_12", "g1_13", "g1_23")


@given(st.integers(0, 10 ** 6), st.integers(2, 3), st.integers(0, 3))
def test_boundaries_always_lift(seed, k, d):
    R = default_ring(P)
    K = build_koszul(R)
    rng = random.Random(seed)
    y = [random_poly(R, d, rng) for _ in range(K.complex.rank(k))]
    z = K.complex.apply_d(k, y)
    lift = koszul_lift(K, k, z)
    assert lift is not None
    assert K.complex.apply_d(k, lift) == z
