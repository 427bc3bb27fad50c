"""Homology algebras of finite DG algebras over k, the invariants
(m, n, p, q, r), the class decision table, and an independent computation
through Koszul homology of R/I."""
from __future__ import annotations

import heapq
import random
from dataclasses import dataclass, field as dc_field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .dga import DGProduct, reduce_mod_m
from .field import Field
from .koszul import exterior_sign, subsets_by_size
from .linalg import LinearSolver, SparseEchelon, rank_over_k
from .poly import PolynomialRing, monomial_index, monomials_of_degree

SEED = 20240229
TRIALS = 20


class UnsupportedInputError(ValueError):
    pass


# ---------------------------------------------------------------------------
# homology of a finite complex of k-vector spaces, strand by strand


class Strand:
    """One internal degree of a complex of k-vector spaces: dims[i] and the
    differentials as sparse columns, diffs[i] : k^dims[i] -> k^dims[i-1]."""

    def __init__(self, field: Field, dims: Sequence[int], diffs: Dict[int, List[dict]]):
        self.field = field
        self.dims = list(dims)
        self.diffs = diffs

    def d(self, i: int, v: dict) -> dict:
        cols = self.diffs.get(i)
        if not cols:
            return {}
        p = self.field.char
        out: dict = {}
        for c, a in v.items():
            for r, b in cols[c].items():
                out[r] = out.get(r, 0) + a * b
        if p:
            return {r: x % p for r, x in out.items() if x % p}
        return {r: x for r, x in out.items() if x}


class StrandHomology:
    """Cycle representatives of H_i and a projector from cycles to coordinates."""

    def __init__(self, strand: Strand, i: int, rng: random.Random | None = None):
        F = strand.field
        n = strand.dims[i] if i < len(strand.dims) else 0
        nrow = strand.dims[i - 1] if i >= 1 else 0
        cols = strand.diffs.get(i) or [dict() for _ in range(n)]
        if nrow and n:
            kernel = LinearSolver(F, nrow, cols).kernel_basis()
        else:
            kernel = [{c: F.one} for c in range(n)]
        bcols = strand.diffs.get(i + 1) or []
        ech = SparseEchelon(F)
        bbasis = []
        for v in bcols:
            if ech.add(v):
                bbasis.append(v)
        reps = []
        for z in kernel:
            if ech.add(z):
                reps.append(z)
        if rng is not None and bbasis:
            # shift each representative by a random boundary
            p = F.char
            shifted = []
            for z in reps:
                w = dict(z)
                for b in bbasis:
                    c = F.random(rng)
                    for k, a in b.items():
                        w[k] = w.get(k, 0) + c * a
                shifted.append({k: (a % p if p else a) for k, a in w.items() if (a % p if p else a)})
            reps = shifted
        self.field = F
        self.dim_space = n
        self.reps = reps
        self.nb = len(bbasis)
        self._solver = LinearSolver(F, n, bbasis + reps) if n else None

    @property
    def dim(self) -> int:
        return len(self.reps)

    def coords(self, z: dict) -> List:
        """Homology coordinates of a cycle z."""
        F = self.field
        if not self.reps:
            return []
        y = self._solver.solve(z)
        if y is None:
            raise ArithmeticError("element is not a cycle of this strand")
        return [y.get(self.nb + k, F.zero) for k in range(len(self.reps))]


@dataclass
class HomologyAlgebra:
    """Bases of H_1, H_2, H_3 with the products H_1 x H_1 -> H_2 and
    H_1 x H_2 -> H_3 as coordinate lists."""
    field: Field
    dims: Tuple[int, int, int, int]
    mult11: List[List[List]]
    mult12: List[List[List]]
    labels: Dict[int, List] = dc_field(default_factory=dict)

    @property
    def m(self):
        return self.dims[1]

    @property
    def n(self):
        return self.dims[3]


def homology_from_strands(field: Field, strands: Dict[object, Strand],
                          product: Callable, rng: random.Random | None = None) -> HomologyAlgebra:
    """``product(i, key_a, va, j, key_b, vb)`` returns (key_c, vc) for the
    product of va in strand key_a degree i with vb in strand key_b degree j."""
    keys = sorted(strands)
    hom = {i: {k: StrandHomology(strands[k], i, rng) for k in keys} for i in (0, 1, 2, 3)}
    basis: Dict[int, List[Tuple[object, int]]] = {}
    offset: Dict[int, Dict[object, int]] = {}
    for i in (0, 1, 2, 3):
        basis[i] = []
        offset[i] = {}
        for k in keys:
            offset[i][k] = len(basis[i])
            basis[i].extend((k, a) for a in range(hom[i][k].dim))
    dims = tuple(len(basis[i]) for i in (0, 1, 2, 3))

    def project(i, key, v):
        out = [field.zero] * dims[i]
        if not v or key not in hom[i]:
            return out
        c = hom[i][key].coords(v)
        off = offset[i][key]
        for a, x in enumerate(c):
            out[off + a] = x
        return out

    def table(i, j):
        rows = []
        for (ka, a) in basis[i]:
            va = hom[i][ka].reps[a]
            row = []
            for (kb, b) in basis[j]:
                vb = hom[j][kb].reps[b]
                kc, vc = product(i, ka, va, j, kb, vb)
                row.append(project(i + j, kc, vc))
            rows.append(row)
        return rows

    return HomologyAlgebra(field, dims, table(1, 1), table(1, 2),
                           labels={i: basis[i] for i in basis})


def homology_algebra(P: DGProduct, rng: random.Random | None = None) -> HomologyAlgebra:
    """Homology algebra of a complex with k-constant differentials and
    structure constants, split by internal degree."""
    C = P.complex
    R = C.ring
    F = R.field
    by_deg: Dict[int, Dict[int, List[int]]] = {}
    for i in range(4):
        for a, d in enumerate(C.degrees(i)):
            by_deg.setdefault(d, {}).setdefault(i, []).append(a)
    local = {}
    strands = {}
    for d, parts in by_deg.items():
        dims = [len(parts.get(i, [])) for i in range(4)]
        pos = {i: {a: k for k, a in enumerate(parts.get(i, []))} for i in range(4)}
        local[d] = (parts, pos)
        diffs = {}
        for i in range(1, 4):
            cols = []
            for a in parts.get(i, []):
                col = {}
                for r, e in enumerate(C.d(i).column(a)):
                    c = e.constant_term()
                    if c:
                        if r not in pos[i - 1]:
                            raise ValueError("differential is not k-constant of degree 0")
                        col[pos[i - 1][r]] = c
                cols.append(col)
            diffs[i] = cols
        strands[d] = Strand(F, dims, diffs)

    def product(i, ka, va, j, kb, vb):
        parts_a = local[ka][0].get(i, [])
        parts_b = local[kb][0].get(j, [])
        u = [R.zero] * C.rank(i)
        for k, x in va.items():
            u[parts_a[k]] = R.const(x)
        w = [R.zero] * C.rank(j)
        for k, x in vb.items():
            w[parts_b[k]] = R.const(x)
        res = P.mul(i, u, j, w)
        kc = ka + kb
        out = {}
        if kc in local:
            pos = local[kc][1].get(i + j, {})
            for a, e in enumerate(res):
                c = e.constant_term()
                if c:
                    out[pos[a]] = c
        return kc, out

    return homology_from_strands(F, strands, product, rng)


# ---------------------------------------------------------------------------
# invariants and classification


@dataclass
class TorProfile:
    m: int
    n: int
    p: int
    q: int
    r: int
    cls: str = ""
    diagnostics: str = ""

    def as_tuple(self):
        return (self.m, self.n, self.p, self.q, self.r)

    def as_dict(self) -> dict:
        return {"m": self.m, "n": self.n, "p": self.p, "q": self.q, "r": self.r, "class": self.cls}


def _span_rank(vectors, field) -> int:
    vecs = [v for v in vectors if any(v)]
    if not vecs:
        return 0
    return rank_over_k(vecs, field)


def compute_profile(H: HomologyAlgebra, seed: int = SEED) -> TorProfile:
    F = H.field
    h1, h2, h3 = H.dims[1], H.dims[2], H.dims[3]
    p = _span_rank([H.mult11[a][b] for a in range(h1) for b in range(h1)], F)
    q = _span_rank([H.mult12[a][c] for a in range(h1) for c in range(h2)], F)
    # nu(h2) is the h1 x h3 matrix of h1 -> h1 h2, flattened
    nu = [[x for a in range(h1) for x in H.mult12[a][c]] for c in range(h2)]
    r = _span_rank(nu, F)
    prof = TorProfile(h1, h3, p, q, r)
    prof.cls = classify(prof, H, seed)
    return prof


def max_homothety_rank(H: HomologyAlgebra, seed: int = SEED, trials: int = TRIALS) -> int:
    """Largest rank of h' -> h h' (H_1 -> H_2) over random h in H_1."""
    F = H.field
    rng = random.Random(seed)
    h1, h2 = H.dims[1], H.dims[2]
    best = 0
    for _ in range(trials):
        c = [F.random(rng) for _ in range(h1)]
        cols = []
        for b in range(h1):
            v = [F.zero] * h2
            for a in range(h1):
                if c[a]:
                    for k, x in enumerate(H.mult11[a][b]):
                        v[k] = F.add(v[k], F.mul(c[a], x))
            cols.append(v)
        best = max(best, _span_rank(cols, F))
    return best


def classify(pr: TorProfile, H: HomologyAlgebra | None = None, seed: int = SEED) -> str:
    """Class label from (p, q, r); (3, 0, 0) is split by the homothety rank."""
    p, q, r = pr.p, pr.q, pr.r
    if (p, q, r) == (0, 0, 0):
        pr.diagnostics = "trivial products; H(0,0) is the same class"
        return "Golod"
    if (p, q, r) == (3, 1, 3):
        return "CI"
    if (p, q, r) == (1, 1, 2):
        return "B"
    if p == 0 and q == 1 and r >= 2:
        return f"G({r})"
    if (p, q, r) == (3, 0, 0):
        if H is None:
            pr.diagnostics = "TE and H(3,0) need the multiplication table"
            return "unclassified"
        return "H(3,0)" if max_homothety_rank(H, seed) >= 3 else "TE"
    if r == q:
        return f"H({p},{q})"
    pr.diagnostics = f"no class has (p,q,r) = ({p},{q},{r})"
    return "unclassified"


def algebra_from_table(field: Field, dims, products11: Dict[Tuple[int, int], Dict[int, int]],
                       products12: Dict[Tuple[int, int], Dict[int, int]]) -> HomologyAlgebra:
    """Graded-commutative algebra from a printed table of nonzero basis
    products (1-based indices; f_a f_b for a < b in degree 1)."""
    h1, h2, h3 = dims
    m11 = [[[field.zero] * h2 for _ in range(h1)] for _ in range(h1)]
    for (a, b), val in products11.items():
        for k, c in val.items():
            m11[a - 1][b - 1][k - 1] = field.convert(c)
            m11[b - 1][a - 1][k - 1] = field.convert(-c)
    m12 = [[[field.zero] * h3 for _ in range(h2)] for _ in range(h1)]
    for (a, b), val in products12.items():
        for k, c in val.items():
            m12[a - 1][b - 1][k - 1] = field.convert(c)
    return HomologyAlgebra(field, (1, h1, h2, h3), m11, m12)


# ---------------------------------------------------------------------------
# Koszul homology of R/I


class QuotientRing:
    """Degreewise normal forms for R/I from echelon forms of I_d."""

    def __init__(self, ring: PolynomialRing, gens, dmax: int):
        self.ring = ring
        self.gens = [ring.coerce(g) for g in gens]
        if not self.gens or any(not g for g in self.gens):
            raise UnsupportedInputError("need nonzero generators")
        for g in self.gens:
            if not g.is_homogeneous():
                raise UnsupportedInputError(f"generator {g} is not homogeneous")
        self.nvars = ring.nvars
        self.ech: Dict[int, SparseEchelon] = {}
        self.std: Dict[int, List[tuple]] = {}
        self.std_pos: Dict[int, Dict[tuple, int]] = {}
        d = 0
        while True:
            self._build(d)
            if not self.std[d]:
                self.top = d - 1
                break
            d += 1
            if d > dmax:
                raise UnsupportedInputError(
                    f"R/I does not vanish by degree {dmax}; the ideal is not m-primary within the bound")
        self._nf_cache: Dict[tuple, dict] = {}

    def _build(self, d: int):
        n = self.nvars
        idx = monomial_index(n, d)
        ech = SparseEchelon(self.ring.field)
        for g in self.gens:
            e = g.homogeneous_degree()
            if e > d:
                continue
            for mu in monomials_of_degree(n, d - e):
                ech.add({idx[tuple(a + b for a, b in zip(m, mu))]: c for m, c in g.terms.items()})
        mons = monomials_of_degree(n, d)
        std = [mons[k] for k in range(len(mons)) if k not in ech.pivots]
        self.ech[d] = ech
        self.std[d] = std
        self.std_pos[d] = {mu: k for k, mu in enumerate(std)}

    def dim(self, d: int) -> int:
        return len(self.std.get(d, ())) if d >= 0 else 0

    def normal_form_monomial(self, mon: tuple) -> dict:
        """Coordinates of a monomial in the standard basis of its degree."""
        got = self._nf_cache.get(mon)
        if got is not None:
            return got
        d = sum(mon)
        if d > self.top:
            out = {}
        else:
            idx = monomial_index(self.nvars, d)
            v = full_reduce(self.ech[d], {idx[mon]: self.ring.field.one})
            mons = monomials_of_degree(self.nvars, d)
            pos = self.std_pos[d]
            out = {pos[mons[k]]: c for k, c in v.items()}
        self._nf_cache[mon] = out
        return out


def full_reduce(ech: SparseEchelon, v: dict) -> dict:
    """Remove every pivot index from v."""
    p = ech.field.char
    v = dict(v)
    heap = list(v)
    heapq.heapify(heap)
    seen = set(heap)
    while heap:
        c = heapq.heappop(heap)
        seen.discard(c)
        f = v.get(c)
        row = ech.pivots.get(c)
        if f is None or row is None:
            continue
        for k, a in row.items():
            nv = v.get(k, 0) - f * a
            if p:
                nv %= p
            if nv:
                if k not in v and k not in seen:
                    heapq.heappush(heap, k)
                    seen.add(k)
                v[k] = nv
            else:
                v.pop(k, None)
    return v


def koszul_homology_algebra(ring: PolynomialRing, gens, dmax: Optional[int] = None,
                            rng: random.Random | None = None) -> HomologyAlgebra:
    """H(K (x) R/I) with the product induced by the exterior algebra."""
    gens = [ring.coerce(g) for g in gens]
    if dmax is None:
        dmax = 3 * max(g.degree() for g in gens) + 6
    A = QuotientRing(ring, gens, dmax)
    F = ring.field
    n = ring.nvars
    subsets = subsets_by_size(n)

    # basis of (K_i (x) A)_D: pairs (S, standard monomial of degree D - i)
    def basis(i, D):
        return [(S, mu) for S in subsets[i] for mu in A.std.get(D - i, [])] if D - i >= 0 else []

    strands = {}
    layout = {}
    for D in range(0, A.top + n + 1):
        bases = [basis(i, D) for i in range(n + 1)]
        if not any(bases[1:]):
            continue
        pos = [{b: k for k, b in enumerate(B)} for B in bases]
        diffs = {}
        for i in range(1, n + 1):
            cols = []
            for S, mu in bases[i]:
                col = {}
                for t, v in enumerate(S):
                    rest = S[:t] + S[t + 1:]
                    sign = 1 if t % 2 == 0 else -1
                    mon = list(mu)
                    mon[v - 1] += 1
                    for k, c in A.normal_form_monomial(tuple(mon)).items():
                        key = pos[i - 1][(rest, A.std[D - i + 1][k])]
                        col[key] = col.get(key, 0) + sign * c
                p = F.char
                cols.append({r: (x % p if p else x) for r, x in col.items() if (x % p if p else x)})
            diffs[i] = cols
        strands[D] = Strand(F, [len(B) for B in bases], diffs)
        layout[D] = (bases, pos)

    def product(i, ka, va, j, kb, vb):
        kc = ka + kb
        out: dict = {}
        if kc not in layout or i + j > n:
            return kc, out
        ba, bb = layout[ka][0][i], layout[kb][0][j]
        pos_c = layout[kc][1][i + j]
        std_c = A.std.get(kc - i - j, [])
        for x, cx in va.items():
            S, mu = ba[x]
            for y, cy in vb.items():
                T, nu = bb[y]
                s = exterior_sign(S, T)
                if not s:
                    continue
                U = tuple(sorted(S + T))
                mon = tuple(a + b for a, b in zip(mu, nu))
                for k, c in A.normal_form_monomial(mon).items():
                    key = pos_c[(U, std_c[k])]
                    out[key] = out.get(key, 0) + s * cx * cy * c
        p = F.char
        return kc, {k: (x % p if p else x) for k, x in out.items() if (x % p if p else x)}

    return homology_from_strands(F, strands, product, rng)


def koszul_homology_oracle(ring: PolynomialRing, gens, dmax: Optional[int] = None,
                            seed: int = SEED) -> TorProfile:
    return compute_profile(koszul_homology_algebra(ring, gens, dmax), seed)


def trimmed_profile(PT: DGProduct, rng: random.Random | None = None, seed: int = SEED) -> TorProfile:
    """Profile of the reduction of a DG algebra resolution."""
    return compute_profile(homology_algebra(reduce_mod_m(PT), rng), seed)
