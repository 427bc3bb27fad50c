import os

import pytest
from hypothesis import HealthCheck, settings

from trimdg.poly import default_ring, monomials_of_degree

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

P = 32003


@pytest.fixture(scope="session")
def R():
    return default_ring(P)


@pytest.fixture(scope="session")
def RQ():
    return default_ring(0)


def random_poly(ring, d, rng, density=0.5, coeff_range=None):
    """Random homogeneous polynomial of degree d."""
    terms = {}
    for mon in monomials_of_degree(ring.nvars, d):
        if rng.random() < density:
            c = rng.randrange(1, ring.char) if ring.char else rng.randint(-5, 5)
            if c:
                terms[mon] = c
    return ring.poly(terms)


def dense_rank_mod_p(rows, p=P):
    """Plain Gaussian elimination over F_p on a list of lists."""
    M = [[x % p for x in r] for r in rows]
    rank = 0
    ncols = len(M[0]) if M else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = pow(M[rank][c], -1, p)
        M[rank] = [x * inv % p for x in M[rank]]
        for i in range(len(M)):
            if i != rank and M[i][c]:
                f = M[i][c]
                M[i] = [(a - f * b) % p for a, b in zip(M[i], M[rank])]
        rank += 1
    return rank


def dense_det_mod_p(M, p=P):
    """Determinant by elimination over F_p."""
    A = [[x % p for x in r] for r in M]
    n = len(A)
    det = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det = det * A[c][c] % p
        inv = pow(A[c][c], -1, p)
        for i in range(c + 1, n):
            if A[i][c]:
                f = A[i][c] * inv % p
                A[i] = [(a - f * b) % p for a, b in zip(A[i], A[c])]
    return det % p
