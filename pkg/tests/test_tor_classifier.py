import random

import pytest
from hypothesis import given, strategies as st

from trimdg.dga import reduce_mod_m
from trimdg.families import FamilySpec, build_V, family_resolution, pfaffian_resolution
from trimdg.field import PrimeField
from trimdg.koszul import build_koszul
from trimdg.linalg import rank_over_k
from trimdg.poly import default_ring
from trimdg.tor import (HomologyAlgebra, TorProfile, UnsupportedInputError, algebra_from_table,
                        classify, compute_profile, homology_algebra, koszul_homology_algebra,
                        koszul_homology_oracle, max_homothety_rank, trimmed_profile)
from trimdg.trimming import trim, trimmed_ideal_generators

from conftest import P

F = PrimeField(P)

# printed multiplication tables; f1^a f1^b -> {k: c} in H_2, f1^a f2^b -> {k: c} in H_3
CI = ({(2, 3): {1: 1}, (3, 1): {2: 1}, (1, 2): {3: 1}},
      {(i, i): {1: 1} for i in (1, 2, 3)}, (3, 3, 1))
TE = ({(2, 3): {1: 1}, (3, 1): {2: 1}, (1, 2): {3: 1}}, {}, (3, 3, 1))
B = ({(1, 2): {3: 1}}, {(1, 1): {1: 1}, (2, 2): {1: 1}}, (3, 3, 1))


def G(r, m=None, n=1):
    m = m or r + 1
    return {}, {(i, i): {1: 1} for i in range(1, r + 1)}, (m, r + 1, n)


def H(p, q, extra1=1, extra3=0):
    m = p + 1 + extra1
    prod11 = {(p + 1, i): {i: 1} for i in range(1, p + 1)}
    prod12 = {(p + 1, p + i): {i: 1} for i in range(1, q + 1)}
    return prod11, prod12, (m, p + q + 1, q + extra3 or 1)


def profile_of(table):
    p11, p12, dims = table
    return compute_profile(algebra_from_table(F, dims, p11, p12))


def test_decision_table_from_printed_tables():
    pr = profile_of(CI)
    assert (pr.p, pr.q, pr.r, pr.cls) == (3, 1, 3, "CI")
    pr = profile_of(TE)
    assert (pr.p, pr.q, pr.r, pr.cls) == (3, 0, 0, "TE")
    pr = profile_of(B)
    assert (pr.p, pr.q, pr.r, pr.cls) == (1, 1, 2, "B")
    for r in range(2, 7):
        pr = profile_of(G(r))
        assert (pr.p, pr.q, pr.r, pr.cls) == (0, 1, r, f"G({r})")
    for p in range(0, 5):
        for q in range(0, 4):
            pr = profile_of(H(p, q))
            assert (pr.p, pr.q, pr.r) == (p, q, q)
            if (p, q) == (0, 0):
                assert pr.cls == "Golod"
            elif (p, q) == (0, 1):
                assert pr.cls == "H(0,1)"
            else:
                assert pr.cls == f"H({p},{q})"
    zero = compute_profile(algebra_from_table(F, (2, 2, 1), {}, {}))
    assert (zero.p, zero.q, zero.r, zero.cls) == (0, 0, 0, "Golod")


def test_te_versus_h30_discriminator():
    te = algebra_from_table(F, TE[2], TE[0], TE[1])
    h30 = algebra_from_table(F, H(3, 0)[2], H(3, 0)[0], H(3, 0)[1])
    assert max_homothety_rank(te) <= 2
    assert max_homothety_rank(h30) == 3
    assert compute_profile(h30).cls == "H(3,0)"


def test_unclassified_profile():
    pr = TorProfile(3, 2, 2, 1, 3)
    assert classify(pr) == "unclassified"
    assert pr.diagnostics


def change_basis(Hd: HomologyAlgebra, A):
    h1 = Hd.dims[1]
    f = Hd.field
    m11 = [[[0] * Hd.dims[2] for _ in range(h1)] for _ in range(h1)]
    m12 = [[[0] * Hd.dims[3] for _ in range(Hd.dims[2])] for _ in range(h1)]
    for a in range(h1):
        for b in range(h1):
            for c in range(h1):
                for d in range(h1):
                    coef = A[a][c] * A[b][d] % P
                    if coef:
                        for k, v in enumerate(Hd.mult11[c][d]):
                            m11[a][b][k] = (m11[a][b][k] + coef * v) % P
        for e in range(Hd.dims[2]):
            for c in range(h1):
                for k, v in enumerate(Hd.mult12[c][e]):
                    m12[a][e][k] = (m12[a][e][k] + A[a][c] * v) % P
    return HomologyAlgebra(f, Hd.dims, m11, m12)


tables = st.sampled_from([CI, TE, B, G(2), G(4), H(2, 1), H(3, 2), H(1, 3), H(3, 0)])


@given(tables, st.integers(0, 10 ** 6))
def test_profile_is_basis_independent(table, seed):
    p11, p12, dims = table
    Hd = algebra_from_table(F, dims, p11, p12)
    rng = random.Random(seed)
    h1 = dims[0]
    while True:
        A = [[rng.randrange(P) for _ in range(h1)] for _ in range(h1)]
        if rank_over_k(A, F) == h1:
            break
    a, b = compute_profile(Hd), compute_profile(change_basis(Hd, A))
    assert a.as_dict() == b.as_dict()
    assert a.p <= Hd.dims[2] and a.q <= a.n and a.r <= Hd.dims[2]
    if a.cls.startswith("H("):
        assert a.r == a.q


def test_oracle_examples(R):
    pr = koszul_homology_oracle(R, list(R.gens))
    assert (pr.m, pr.n, pr.cls) == (3, 1, "CI")
    g7 = [R.parse(s) for s in ["x1^2*x3", "x1^2*x2-x3^3", "x2^2*x3^2", "x1*x2^2*x3",
                               "x2^4", "x1*x2^3", "x1^4"]]
    pr = koszul_homology_oracle(R, g7)
    assert (pr.m, pr.n, pr.r, pr.cls) == (7, 2, 2, "G(2)")
    J3 = [R.parse(s) for s in ["x2^2-x1*x3", "-x1*x2", "x1^2", "x3^2"]]
    assert koszul_homology_oracle(R, J3).cls == "H(3,2)"
    RQ = default_ring(0)
    assert koszul_homology_oracle(RQ, [RQ.parse(str(g)) for g in J3]).cls == "H(3,2)"


def test_oracle_rejects_bad_input(R):
    with pytest.raises(UnsupportedInputError):
        koszul_homology_oracle(R, [R.parse("x1^2"), R.parse("x2^2")])
    with pytest.raises(UnsupportedInputError):
        koszul_homology_oracle(R, [R.parse("x1^2+x2"), R.parse("x2^2"), R.parse("x3^2")])


def test_reduced_koszul_homology(R):
    K = build_koszul(R)
    Hd = homology_algebra(reduce_mod_m(K.product))
    assert Hd.dims == (1, 3, 3, 1)
    assert compute_profile(Hd).cls == "CI"


def test_reduced_pfaffian_homology(R):
    res = pfaffian_resolution(build_V(2, 1, R))
    Hd = homology_algebra(reduce_mod_m(res.product))
    assert Hd.dims == (1, 5, 5, 1)
    pr = compute_profile(Hd)
    assert (pr.p, pr.q, pr.r, pr.cls) == (0, 1, 5, "G(5)")


@pytest.mark.parametrize("spec,sigma", [("pfaffian:m=2,j=1", [1]), ("jp:p=3", [2]),
                                        ("pfaffian:m=2,j=3", [1, 2]), ("jp:p=4", [1, 5])])
def test_rank_nullity_for_H1(spec, sigma):
    res = family_resolution(FamilySpec.parse(spec))
    T = trim(res.complex, res.product, sigma)
    Cb = T.complex.constant_part()
    Hd = homology_algebra(reduce_mod_m(T.product))
    l1 = rank_over_k(Cb.d(1).to_k(), F)
    l2 = rank_over_k(Cb.d(2).to_k(), F)
    assert Hd.dims[1] == Cb.rank(1) - l1 - l2


@pytest.mark.parametrize("spec,sigma", [("pfaffian:m=2,j=1", [1]), ("pfaffian:m=3,j=2", [1, 7]),
                                        ("jp:p=4", [2]), ("jpprime:p=3", [1, 4])])
def test_representative_independence(spec, sigma):
    res = family_resolution(FamilySpec.parse(spec))
    T = trim(res.complex, res.product, sigma)
    Pb = reduce_mod_m(T.product)
    base = homology_algebra(Pb)
    for seed in (1, 2, 3):
        other = homology_algebra(Pb, random.Random(seed))
        assert other.mult11 == base.mult11 and other.mult12 == base.mult12
    R = res.complex.ring
    gens = trimmed_ideal_generators(res.generators, sigma)
    kbase = koszul_homology_algebra(R, gens)
    kother = koszul_homology_algebra(R, gens, rng=random.Random(5))
    assert kother.mult11 == kbase.mult11 and kother.mult12 == kbase.mult12


@pytest.mark.parametrize("spec,sigma", [("pfaffian:m=2,j=1", [2]), ("pfaffian:m=3,j=0", [1, 2]),
                                        ("jp:p=5", [1, 3]), ("jpprime:p=4", [5])])
def test_two_routes_agree(spec, sigma):
    res = family_resolution(FamilySpec.parse(spec))
    T = trim(res.complex, res.product, sigma)
    R = res.complex.ring
    a = trimmed_profile(T.product)
    b = koszul_homology_oracle(R, trimmed_ideal_generators(res.generators, sigma))
    assert a.as_dict() == b.as_dict()
