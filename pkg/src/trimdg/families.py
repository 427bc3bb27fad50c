"""Skew-symmetric U/V families with their pfaffian resolutions, the
Hilbert-Burch families J_p and J_p', explicit comparison maps, and the
predicted invariants after trimming."""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .complexes import FreeComplex, check_complex, complex_from_matrices, exactness_check
from .dga import DGProduct, check_leibniz, complete_product_by_lifting, tensor_dg_product
from .koszul import build_koszul
from .linalg import PolyMatrix, PreconditionError, rank_over_k
from .poly import Polynomial, PolynomialRing, default_ring


class FamilyError(ValueError):
    pass


class FixtureMismatchError(AssertionError):
    pass


@dataclass(frozen=True)
class FamilySpec:
    kind: str           # "pfaffian", "jp" or "jpprime"
    m: int = 0
    j: int = 0
    p: int = 0

    def __post_init__(self):
        if self.kind == "pfaffian":
            if self.m < 2 or not 0 <= self.j <= self.m + 1:
                raise FamilyError(f"need m >= 2 and 0 <= j <= m+1, got m={self.m}, j={self.j}")
        elif self.kind in ("jp", "jpprime"):
            if self.p < 2:
                raise FamilyError(f"need p >= 2, got p={self.p}")
        else:
            raise FamilyError(f"unknown family {self.kind!r}")

    def __str__(self):
        if self.kind == "pfaffian":
            return f"pfaffian:m={self.m},j={self.j}"
        return f"{self.kind}:p={self.p}"

    @classmethod
    def parse(cls, text: str) -> "FamilySpec":
        m = re.fullmatch(r"\s*(\w+)\s*:\s*(.*?)\s*", text)
        if not m:
            raise FamilyError(f"cannot parse family {text!r}")
        kind = m.group(1).lower()
        params = {}
        for part in filter(None, (s.strip() for s in m.group(2).split(","))):
            k, _, v = part.partition("=")
            try:
                params[k.strip()] = int(v)
            except ValueError:
                raise FamilyError(f"bad parameter {part!r} in {text!r}")
        allowed = {"pfaffian": {"m", "j"}, "jp": {"p"}, "jpprime": {"p"}}
        if kind not in allowed:
            raise FamilyError(f"unknown family {kind!r}")
        if set(params) != allowed[kind]:
            raise FamilyError(f"{kind} needs parameters {sorted(allowed[kind])}")
        return cls(kind, **params)


# ---------------------------------------------------------------------------
# matrices


def build_U(m: int, j: int, ring: PolynomialRing | None = None) -> List[List[Polynomial]]:
    """The m x m matrix with a shifted anti-diagonal band x1, x3, x2 (squared
    in the first m - j rows)."""
    if j > m or j < 0:
        raise FamilyError(f"U needs 0 <= j <= m, got m={m}, j={j}")
    R = ring or default_ring()
    x1, x2, x3 = R.gens
    U = [[R.zero] * m for _ in range(m)]
    for i in range(1, m + 1):
        e = 2 if i <= m - j else 1
        for col, v in ((m - i, x1), (m - i + 1, x3), (m - i + 2, x2)):
            if 1 <= col <= m:
                U[i - 1][col - 1] = v ** e
    return U


def build_V(m: int, j: int, ring: PolynomialRing | None = None) -> List[List[Polynomial]]:
    """(2m+1) x (2m+1) skew matrix with U^T in the top right, -U in the bottom
    left and two corner entries around the middle row."""
    if m < 2 or not 0 <= j <= m + 1:
        raise FamilyError(f"V needs m >= 2 and 0 <= j <= m+1, got m={m}, j={j}")
    R = ring or default_ring()
    x1, x2, x3 = R.gens
    U = build_U(m, min(j, m), R)
    a = x1 if j == m + 1 else x1 ** 2
    b = x2 if j >= m else x2 ** 2
    n = 2 * m + 1
    V = [[R.zero] * n for _ in range(n)]
    for r in range(m):
        for c in range(m):
            V[r][m + 1 + c] = U[c][r]
            V[m + 1 + c][r] = -U[c][r]
    V[m - 1][m] = a
    V[m][m - 1] = -a
    V[m][m + 1] = b
    V[m + 1][m] = -b
    return V


# the 5 x 5 matrix used as a standalone fixture; it is V_2^3 with x2 and x3 swapped
def example_X(ring: PolynomialRing | None = None) -> List[List[Polynomial]]:
    R = ring or default_ring()
    rows = [["0", "0", "0", "x1", "x2"],
            ["0", "0", "x1", "x2", "x3"],
            ["0", "-x1", "0", "x3", "0"],
            ["-x1", "-x2", "-x3", "0", "0"],
            ["-x2", "-x3", "0", "0", "0"]]
    return [[R.parse(s) for s in row] for row in rows]


def _entries(M):
    return M.entries if isinstance(M, PolyMatrix) else M


def is_skew(M) -> bool:
    E = _entries(M)
    n = len(E)
    return all(E[i][j] == -E[j][i] for i in range(n) for j in range(n))


def pfaffian(M, L: Sequence[int] = ()) -> Polynomial:
    """Pfaffian of M with the (1-based) rows and columns in L deleted,
    expanding along the first remaining row. Odd sizes give 0."""
    E = _entries(M)
    n = len(E)
    keep = tuple(i for i in range(n) if i + 1 not in set(L))
    if not E:
        raise PreconditionError("empty matrix")
    ring = E[0][0].ring if isinstance(E[0][0], Polynomial) else None
    memo: Dict[Tuple[int, ...], object] = {}

    def pf(idx):
        if not idx:
            return ring.one if ring else 1
        if len(idx) % 2:
            return ring.zero if ring else 0
        got = memo.get(idx)
        if got is not None:
            return got
        first = idx[0]
        acc = ring.zero if ring else 0
        for pos in range(1, len(idx)):
            a = E[first][idx[pos]]
            if not a:
                continue
            rest = idx[1:pos] + idx[pos + 1:]
            term = a * pf(rest)
            # entry (1, pos+1) of the submatrix carries sign (-1)^(pos+1)
            acc = acc + term if pos % 2 == 1 else acc - term
        memo[idx] = acc
        return acc

    return pf(keep)


def determinant(M) -> Polynomial:
    """Laplace expansion along rows, memoized on the remaining column set."""
    E = _entries(M)
    n = len(E)
    if n == 0:
        raise PreconditionError("empty matrix")
    ring = E[0][0].ring if isinstance(E[0][0], Polynomial) else None
    memo = {}

    def det(row, cols):
        if row == n:
            return ring.one if ring else 1
        got = memo.get(cols)
        if got is not None:
            return got
        acc = ring.zero if ring else 0
        for k, c in enumerate(cols):
            a = E[row][c]
            if not a:
                continue
            term = a * det(row + 1, cols[:k] + cols[k + 1:])
            acc = acc + term if k % 2 == 0 else acc - term
        memo[cols] = acc
        return acc

    return det(0, tuple(range(n)))


# ---------------------------------------------------------------------------
# resolutions


class FamilyResolution:
    """A resolution F of R/I with its DG product and the generators of I."""

    def __init__(self, spec, complex: FreeComplex, product: DGProduct, generators):
        self.spec = spec
        self.complex = complex
        self.product = product
        self.generators = tuple(generators)

    def __repr__(self):
        return f"FamilyResolution({self.spec}, ranks={self.complex.ranks()})"

    def validate(self, dmax: int | None = None) -> List[str]:
        """Problems found by check_complex, check_leibniz and exactness."""
        out = list(check_complex(self.complex))
        out += check_leibniz(self.product)
        hom = exactness_check(self.complex, dmax)
        for i in (1, 2, 3):
            bad = [d for d, v in enumerate(hom[i]) if v]
            if bad:
                out.append(f"H_{i} nonzero in degrees {bad}")
        return out


def pfaffian_generators(V) -> List[Polynomial]:
    n = len(_entries(V))
    return [pfaffian(V, (i,)) if i % 2 else -pfaffian(V, (i,)) for i in range(1, n + 1)]


def pfaffian_resolution(V, spec=None, validate: bool = True) -> FamilyResolution:
    """0 -> R -> R^n -> R^n -> R with d_1 the signed maximal pfaffians,
    d_2 = V, d_3 = d_1^T, and the pfaffian product."""
    E = [list(row) for row in _entries(V)]
    if not is_skew(E) or len(E) % 2 == 0:
        raise PreconditionError("need a skew matrix of odd size")
    n = len(E)
    R = E[0][0].ring
    gens = pfaffian_generators(E)
    if any(not g for g in gens):
        raise FamilyError("a maximal pfaffian vanishes")
    d3 = [[g] for g in gens]
    C = complex_from_matrices(R, gens, E, d3)
    P = DGProduct(C)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            val = []
            for k in range(1, n + 1):
                if k in (i, j):
                    val.append(R.zero)
                    continue
                # Pf_{ijk} is alternating in the index sequence (i, j, k)
                pf = pfaffian(E, sorted((i, j, k)))
                if i < k < j:
                    pf = -pf
                val.append(pf if (i + j + k) % 2 == 0 else -pf)
            P.set((1, i - 1), (1, j - 1), val)
        for j in range(1, n + 1):
            if i == j:
                P.set((1, i - 1), (2, j - 1), [R.one])
    res = FamilyResolution(spec, C, P, gens)
    if validate:
        problems = res.validate()
        if problems:
            raise FamilyError("pfaffian complex is degenerate: " + "; ".join(problems[:3]))
    return res


def build_X_p(p: int, primed: bool = False, ring: PolynomialRing | None = None):
    """p x (p-1) banded matrix with x1, x2, x3 down each column (squared when primed)."""
    R = ring or default_ring()
    e = 2 if primed else 1
    x = [v ** e for v in R.gens]
    X = [[R.zero] * (p - 1) for _ in range(p)]
    for c in range(p - 1):
        for k in range(3):
            if c + k < p:
                X[c + k][c] = x[k]
    return X


def signed_minors(X) -> List[Polynomial]:
    """Delta_i = (-1)^(i+1) det(X without row i)."""
    p = len(X)
    out = []
    for i in range(p):
        minor = [row for r, row in enumerate(X) if r != i]
        d = determinant(minor)
        out.append(d if i % 2 == 0 else -d)
    return out


def hilbert_burch_complex(X, prefix="h") -> FreeComplex:
    R = X[0][0].ring
    deltas = signed_minors(X)
    return complex_from_matrices(R, deltas, X, names=[f"{prefix}0", f"{prefix}1_",
                                                        f"{prefix}2_", f"{prefix}3_"])


def Jp_generators(p: int, primed: bool = False, ring: PolynomialRing | None = None):
    R = ring or default_ring()
    X = build_X_p(p, primed, R)
    x3 = R.var(3)
    tail = x3 ** (2 * p - 2) if primed else x3 ** (p - 1)
    return signed_minors(X) + [tail]


def hilbert_burch_Jp(p: int, primed: bool = False, ring: PolynomialRing | None = None,
                     validate: bool = True) -> FamilyResolution:
    """H (x) G where H is the Hilbert-Burch resolution of the maximal minors
    of X_p (or X_p') and G = (R --x3^e--> R)."""
    if p < 2:
        raise FamilyError("p must be at least 2")
    R = ring or default_ring()
    X = build_X_p(p, primed, R)
    H = hilbert_burch_complex(X)
    PH = complete_product_by_lifting(H)
    x3 = R.var(3)
    tail = x3 ** (2 * p - 2) if primed else x3 ** (p - 1)
    G = complex_from_matrices(R, [tail], names=["g0", "g1_", "g2_", "g3_"])
    PG = DGProduct(G)
    F, PF = tensor_dg_product(PH, PG)
    spec = FamilySpec("jpprime" if primed else "jp", p=p)
    gens = list(F.d(1).row(0))
    res = FamilyResolution(spec, F, PF, gens)
    if validate:
        problems = res.validate()
        if problems:
            raise FamilyError(f"{spec} resolution failed: " + "; ".join(problems[:3]))
    return res


@lru_cache(maxsize=64)
def family_resolution(spec: FamilySpec, char: int = 32003) -> FamilyResolution:
    ring = default_ring(char)
    if spec.kind == "pfaffian":
        return pfaffian_resolution(build_V(spec.m, spec.j, ring), spec)
    return hilbert_burch_Jp(spec.p, spec.kind == "jpprime", ring)


# ---------------------------------------------------------------------------
# explicit comparison maps F_2 -> K_1


def _q_matrix(R, F: FreeComplex, i: int, images: Dict[int, Tuple[Polynomial, Polynomial, Polynomial]]):
    w = F.degrees(1)[i - 1]
    K = build_koszul(R, 3, w, f"g{i}_")
    cols = []
    for c in range(F.rank(2)):
        cols.append(images.get(c, (R.zero, R.zero, R.zero)))
    ent = [[cols[c][k] for c in range(F.rank(2))] for k in range(3)]
    return PolyMatrix(R, ent, K.complex.degrees(1), F.degrees(2), check=False), K


def _validate_q(R, F: FreeComplex, i: int, q: PolyMatrix, K, label: str):
    bad = q.homogeneity_violations()
    lhs = K.d(1) @ q
    row = F.d(2).row(i - 1)
    diff = [lhs[0, c] - row[c] for c in range(F.rank(2))]
    if bad or any(diff):
        cols = [c + 1 for c, v in enumerate(diff) if v]
        raise FixtureMismatchError(
            f"{label}: m_1 q_1^{i} differs from row {i} of d_2 in columns {cols}"
            + (f"; {bad[0]}" if bad else ""))


def explicit_q1_pfaffian(m: int, j: int, i: int, ring: PolynomialRing | None = None) -> PolyMatrix:
    """The printed map F_2 -> K_1 for the pfaffian family and trimmed index i."""
    R = ring or default_ring()
    n = 2 * m + 1
    if not 1 <= i <= n:
        raise FamilyError(f"index {i} out of range 1..{n}")
    x1, x2, x3 = R.gens
    one, zero = R.one, R.zero
    imgs: Dict[int, Tuple] = {}

    def put(col, k, v):
        if 1 <= col <= n and v is not None:
            vec = [zero, zero, zero]
            vec[k] = v
            imgs[col - 1] = tuple(vec)

    # f_2^{2m+3-i}
    v = None
    if 1 < i <= j + 1 <= m + 1:
        v = one
    elif j + 1 < i <= m + 1:
        v = x2
    elif m + 1 < i <= 2 * m + 1 - j:
        v = -x2
    elif 2 * m + 1 - j < i <= 2 * m + 1:
        v = -one
    put(2 * m + 3 - i, 1, v)
    # f_2^{2m+2-i}
    v = None
    if 1 <= i <= j and i < m + 1:
        v = one
    elif j < i < m + 1:
        v = x3
    elif i == m + 1:
        v = None
    elif m + 1 < i <= 2 * m + 1 - j:
        v = -x3
    elif 2 * m + 1 - j < i <= 2 * m + 1:
        v = -one
    put(2 * m + 2 - i, 2, v)
    # f_2^{2m+1-i}
    v = None
    if 1 <= i <= j - 1:
        v = one
    elif j - 1 < i < m + 1:
        v = x1
    elif i == m + 1 and j < m + 1:
        v = -x1
    elif i == m + 1 and j == m + 1:
        v = -one
    elif m + 1 < i <= 2 * m + 1 - j:
        v = -x1
    elif 2 * m + 1 - j < i < 2 * m + 1:
        v = -one
    put(2 * m + 1 - i, 0, v)
    F = family_resolution(FamilySpec("pfaffian", m=m, j=j), R.char).complex
    q, K = _q_matrix(R, F, i, imgs)
    _validate_q(R, F, i, q, K, f"pfaffian m={m} j={j}")
    return q


def split_by_variables(f: Polynomial) -> Tuple[Polynomial, Polynomial, Polynomial]:
    """f = x1 a + x2 b + x3 c, assigning each term to its first dividing variable."""
    R = f.ring
    parts = [dict(), dict(), dict()]
    for mon, c in f.terms.items():
        for k in range(3):
            if mon[k] > 0:
                q = list(mon)
                q[k] -= 1
                parts[k][tuple(q)] = c
                break
        else:
            raise PreconditionError(f"{f} has a constant term")
    return tuple(Polynomial(R, t) for t in parts)


def explicit_q1_Jp(p: int, i: int, ring: PolynomialRing | None = None) -> PolyMatrix:
    """The printed map F_2 -> K_1 for J_p and trimmed index i < p or i = p+1."""
    R = ring or default_ring()
    if not (1 <= i < p or i == p + 1):
        raise FamilyError(f"explicit map defined for i < p or i = p+1, got i={i}, p={p}")
    res = family_resolution(FamilySpec("jp", p=p), R.char)
    F = res.complex
    names = F.names(2)
    x3 = R.var(3)
    zero, one = R.zero, R.one
    imgs = {}
    if i < p:
        for c, k in ((i - 2, 2), (i - 1, 1), (i, 0)):
            if 1 <= c <= p - 1:
                vec = [zero, zero, zero]
                vec[k] = one
                imgs[names.index(f"h2_{c}*g0")] = tuple(vec)
        imgs[names.index(f"h1_{i}*g1_1")] = (zero, zero, -x3 ** (p - 2))
    else:
        deltas = signed_minors(build_X_p(p, False, R))
        for jj in range(1, p + 1):
            imgs[names.index(f"h1_{jj}*g1_1")] = split_by_variables(deltas[jj - 1])
    q, K = _q_matrix(R, F, i, imgs)
    _validate_q(R, F, i, q, K, f"J_{p}")
    return q


def explicit_q1(spec: FamilySpec, i: int, ring: PolynomialRing | None = None) -> PolyMatrix:
    if spec.kind == "pfaffian":
        return explicit_q1_pfaffian(spec.m, spec.j, i, ring)
    if spec.kind == "jp":
        return explicit_q1_Jp(spec.p, i, ring)
    raise FamilyError(f"no explicit map for {spec}")


# ---------------------------------------------------------------------------
# predictions


@dataclass
class Prediction:
    """Predicted invariants; fields left as None are not predicted."""
    cls: str
    m: Optional[int] = None
    n: Optional[int] = None
    p: Optional[int] = None
    q: Optional[int] = None
    r: Optional[int] = None
    golod_allowed: bool = False
    source: str = ""

    def as_dict(self) -> dict:
        return {"class": self.cls, "m": self.m, "n": self.n, "p": self.p, "q": self.q,
                "r": self.r, "golod_allowed": self.golod_allowed, "source": self.source}

    def agrees(self, profile) -> bool:
        if self.golod_allowed and profile.cls == "Golod":
            return True
        if profile.cls != self.cls:
            return False
        for name in ("m", "n", "p", "q", "r"):
            want = getattr(self, name)
            if want is not None and getattr(profile, name) != want:
                return False
        return True


class PredictionUnavailable(ValueError):
    pass


def reduced_q_stack(spec: FamilySpec, sigma: Sequence[int], ring=None, qmaps=None):
    """Constant part of the stacked map Q_1 = (q_1^i) over i in sigma, as a
    k-matrix with 3|sigma| rows; explicit maps are used where printed."""
    R = ring or default_ring()
    rows = []
    for pos, i in enumerate(sigma):
        q = None
        try:
            q = explicit_q1(spec, i, R)
        except (FamilyError, FixtureMismatchError):
            # the reduction of q_1^i does not depend on the chosen lift
            if qmaps is None:
                raise PredictionUnavailable(f"no printed map for index {i} of {spec}")
            q = qmaps[pos]
        rows.extend(q.to_k())
    return rows


def predicted_tuple(spec: FamilySpec, sigma: Sequence[int], ring=None, qmaps=None) -> Prediction:
    """Predicted invariants of R / tm_sigma(I) for a family ideal I."""
    R = ring or default_ring()
    sigma = sorted(set(sigma))
    t = len(sigma)
    if t == 0:
        raise PredictionUnavailable("empty index set")
    if spec.kind == "pfaffian":
        m, j = spec.m, spec.j
        if not (m >= 3 or (m == 2 and j == 0)):
            raise PredictionUnavailable(f"hypotheses need m >= 3 or (m, j) = (2, 0); got {spec}")
        Q = reduced_q_stack(spec, sigma, R, qmaps)
        rk = rank_over_k(Q, R.field)
        nonzero_cols = {c + 1 for c in range(len(Q[0])) if any(row[c] for row in Q)}
        S = len(set(sigma) & nonzero_cols)
        r = 2 * m + 1 - t - rk + S
        # (p, q, r) = (0, 1, 1) is the class H(0,1); G(r) needs r >= 2
        label = f"G({r})" if r >= 2 else f"H(0,{r})"
        return Prediction(label, m=2 * m + 2 * t + 1 - rk, n=1 + t, p=0, q=1, r=r,
                          golod_allowed=True, source="pfaffian trim formula")
    p = spec.p
    if p < 4:
        raise PredictionUnavailable("hypotheses need p >= 4")
    if spec.kind == "jpprime":
        if p + 1 in sigma:
            return Prediction("Golod", source="hyperplane-section family, tail trimmed")
        return Prediction(f"H({p - t},{p - 1})", m=p + 1 + 2 * t, n=p - 1 + t, p=p - t,
                          q=p - 1, r=p - 1, source="squared hyperplane-section formula")
    if p + 1 in sigma:
        return Prediction("Golod", source="hyperplane-section family, tail trimmed")
    Q = reduced_q_stack(spec, sigma, R, qmaps)
    rk = rank_over_k(Q, R.field)
    q = p - 1 - rk
    # an initial segment [t] is asserted outright, without the Golod escape
    initial = sigma == list(range(1, t + 1)) and t < p
    return Prediction(f"H({p - t},{q})", m=p + 1 + 2 * t - rk, n=p - 1 + t, p=p - t, q=q,
                      r=q, golod_allowed=not initial, source="hyperplane-section trim formula")
