from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from trimdg.field import PrimeField, RationalField, make_field
from trimdg.poly import (DegreeGuardError, IncompatibleOperandsError, PolynomialParseError,
                         PolynomialRing, default_ring, homogeneous_component, poly_arith,
                         poly_eval_zero)

from conftest import P

F = PrimeField(P)
Q = RationalField()
fp = st.integers(0, P - 1)
rat = st.fractions(max_denominator=50).filter(lambda x: abs(x) < 1000)


@given(fp, fp, fp)
def test_prime_field_axioms(a, b, c):
    assert F.mul(F.add(a, b), c) == F.add(F.mul(a, c), F.mul(b, c))
    assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    if a:
        assert F.mul(a, F.inv(a)) == 1


@given(rat, rat, rat)
def test_rational_field_axioms(a, b, c):
    assert Q.mul(Q.add(a, b), c) == Q.add(Q.mul(a, c), Q.mul(b, c))
    if a:
        assert Q.mul(a, Q.inv(a)) == 1


def test_canonical_forms():
    assert F.convert(-1) == P - 1
    assert F.convert(Fraction(1, 2)) == (P + 1) // 2
    assert make_field(0) == Q and make_field(P) == F
    with pytest.raises(ValueError):
        PrimeField(2)
    with pytest.raises(ValueError):
        PrimeField(15)


def test_examples(R):
    x1, x2, x3 = R.gens
    assert poly_arith(x1 + x2, x1 - x2, "mul") == x1 ** 2 - x2 ** 2
    assert poly_arith(x1 + x2, R.zero, "mul") == R.zero
    assert (x2 ** 2 - x1 * x3) * (x1 * x2) == x1 * x2 ** 3 - x1 ** 2 * x2 * x3
    assert poly_eval_zero(R.const(5) + x1) == 5
    assert poly_eval_zero(x1 ** 2 * x3) == 0
    assert poly_eval_zero(R.zero) == 0
    f = x1 + x1 * x2
    assert homogeneous_component(f, 2) == x1 * x2
    assert homogeneous_component(f, 3) == R.zero
    g = x1 ** 2 * x2 - x3 ** 3
    assert homogeneous_component(g, 3) == g


def naive_mul(a, b, p):
    out = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = tuple(i + j for i, j in zip(m1, m2))
            out[m] = (out.get(m, 0) + c1 * c2) % p
    return {m: c for m, c in out.items() if c}


terms = st.dictionaries(st.tuples(*[st.integers(0, 3)] * 3), st.integers(1, P - 1), max_size=6)


@given(terms, terms)
def test_arith_matches_term_by_term_oracle(a, b):
    R = default_ring(P)
    A, B = R.poly(a), R.poly(b)
    assert (A * B).terms == naive_mul(a, b, P)
    s = dict(a)
    for m, c in b.items():
        s[m] = (s.get(m, 0) + c) % P
    assert (A + B).terms == {m: c for m, c in s.items() if c}
    assert (A - A).is_zero()
    assert all(c for c in (A * B).terms.values())


@given(terms)
def test_components_sum_back(a):
    R = default_ring(P)
    A = R.poly(a)
    total = R.zero
    for d in range(0, 10):
        total = total + homogeneous_component(A, d)
    assert total == A


def test_parse_and_print_roundtrip(R):
    for text in ["x2^2-x1*x3", "-x1*x2", "3*x1^4+2", "x1^2*x2-x3^3", "0"]:
        f = R.parse(text)
        assert R.parse(str(f)) == f


def test_parse_error_has_position(R):
    with pytest.raises(PolynomialParseError) as e:
        R.parse("x1+*x2")
    assert e.value.position == 3


def test_mixed_rings_rejected():
    a = default_ring(P).var(1)
    b = default_ring(101).var(1)
    with pytest.raises(IncompatibleOperandsError):
        a + b
    c = PolynomialRing(F, 3, names=("a", "b", "c")).var(1)
    with pytest.raises(IncompatibleOperandsError):
        a * c


def test_homogeneity(R):
    x1, x2, x3 = R.gens
    assert (x1 * x2 - x3 ** 2).homogeneous_degree() == 2
    with pytest.raises(ValueError):
        (x1 + x2 * x3).homogeneous_degree()


def test_degree_guard(R):
    with pytest.raises(DegreeGuardError):
        R.var(1) ** 150 * R.var(2) ** 150


def test_rational_coefficients(RQ):
    f = RQ.parse("1/2*x1 + x2")
    assert (f * RQ.const(2)) == RQ.parse("x1 + 2*x2")
