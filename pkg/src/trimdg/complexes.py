"""Graded free complexes of length at most 3 and the standard constructions on them."""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .linalg import PolyMatrix, PreconditionError, strand_rank
from .poly import PolynomialRing, default_ring

MAX_LENGTH = 3


@dataclass(frozen=True)
class GradedFreeModule:
    names: Tuple[str, ...]
    degrees: Tuple[int, ...]

    def __post_init__(self):
        if len(self.names) != len(self.degrees):
            raise PreconditionError("one degree per generator required")
        if len(set(self.names)) != len(self.names):
            dup = sorted({n for n in self.names if self.names.count(n) > 1})
            raise PreconditionError(f"duplicate generator names {dup}")

    @classmethod
    def of(cls, names, degrees) -> "GradedFreeModule":
        return cls(tuple(names), tuple(int(d) for d in degrees))

    @property
    def rank(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def __add__(self, other: "GradedFreeModule") -> "GradedFreeModule":
        return GradedFreeModule(self.names + other.names, self.degrees + other.degrees)


ZERO_MODULE = GradedFreeModule((), ())


class FreeComplex:
    """C_3 -> C_2 -> C_1 -> C_0 with homogeneous differentials.

    ``diffs[i]`` is d_{i+1}: C_{i+1} -> C_i as a PolyMatrix whose rows are
    the generators of C_i and whose columns are those of C_{i+1}.
    """

    def __init__(self, ring: PolynomialRing, modules: Sequence[GradedFreeModule],
                 diffs: Sequence[PolyMatrix]):
        modules = list(modules)
        if len(modules) > MAX_LENGTH + 1:
            raise PreconditionError("complexes longer than 3 are not supported")
        while len(modules) < MAX_LENGTH + 1:
            modules.append(ZERO_MODULE)
        diffs = list(diffs)
        while len(diffs) < MAX_LENGTH:
            i = len(diffs) + 1
            diffs.append(PolyMatrix.zeros(ring, modules[i - 1].degrees, modules[i].degrees))
        for i, d in enumerate(diffs, start=1):
            if d.row_degs != modules[i - 1].degrees or d.col_degs != modules[i].degrees:
                raise PreconditionError(f"d_{i} does not match the module degrees")
        self.ring = ring
        self.modules = tuple(modules)
        self.diffs = tuple(diffs)

    def __repr__(self):
        return f"FreeComplex(ranks={self.ranks()})"

    def ranks(self) -> Tuple[int, ...]:
        return tuple(M.rank for M in self.modules)

    def rank(self, i: int) -> int:
        return self.modules[i].rank if 0 <= i <= MAX_LENGTH else 0

    def degrees(self, i: int) -> Tuple[int, ...]:
        return self.modules[i].degrees if 0 <= i <= MAX_LENGTH else ()

    def names(self, i: int) -> Tuple[str, ...]:
        return self.modules[i].names if 0 <= i <= MAX_LENGTH else ()

    def d(self, i: int) -> PolyMatrix:
        if 1 <= i <= MAX_LENGTH:
            return self.diffs[i - 1]
        return PolyMatrix.zeros(self.ring, self.degrees(i - 1), self.degrees(i))

    def apply_d(self, i: int, vec):
        if i <= 0 or i > MAX_LENGTH:
            return tuple(self.ring.zero for _ in self.degrees(i - 1))
        return self.d(i).apply(vec)

    def zero_vector(self, i: int):
        return tuple(self.ring.zero for _ in self.degrees(i))

    def basis_vector(self, i: int, j: int, coeff=None):
        z = self.ring.zero
        c = self.ring.one if coeff is None else self.ring.coerce(coeff)
        return tuple(c if k == j else z for k in range(self.rank(i)))

    def length(self) -> int:
        n = 0
        for i, M in enumerate(self.modules):
            if M.rank:
                n = i
        return n

    def with_differential(self, i: int, d: PolyMatrix) -> "FreeComplex":
        diffs = list(self.diffs)
        diffs[i - 1] = d
        return FreeComplex(self.ring, self.modules, diffs)

    def constant_part(self) -> "FreeComplex":
        return FreeComplex(self.ring, self.modules, [d.constant_part() for d in self.diffs])

    def __eq__(self, other):
        return (isinstance(other, FreeComplex) and self.modules == other.modules
                and self.diffs == other.diffs)

    def __hash__(self):
        return hash((self.modules, self.diffs))

    # -- serialization

    def to_json(self) -> dict:
        return {
            "char": self.ring.char,
            "modules": [[{"name": n, "degree": d} for n, d in zip(M.names, M.degrees)]
                        for M in self.modules],
            "differentials": [[[str(e) for e in row] for row in d.entries]
                              for d in self.diffs],
        }

    @classmethod
    def from_json(cls, data, ring: PolynomialRing | None = None) -> "FreeComplex":
        if isinstance(data, str):
            data = json.loads(data)
        if ring is None:
            ring = default_ring(int(data.get("char", 32003)))
        modules = [GradedFreeModule.of([g["name"] for g in M], [g["degree"] for g in M])
                   for M in data["modules"]]
        diffs = []
        for i, rows in enumerate(data["differentials"], start=1):
            ent = [[ring.parse(s) for s in row] for row in rows]
            if not ent:
                ent = [[] for _ in modules[i - 1].degrees]
            diffs.append(PolyMatrix(ring, ent, modules[i - 1].degrees, modules[i].degrees,
                                    check=False))
        return cls(ring, modules, diffs)


class ComplexMorphism:
    """Chain map given by one PolyMatrix per homological degree 0..3."""

    def __init__(self, source: FreeComplex, target: FreeComplex, maps: Dict[int, PolyMatrix]):
        ring = source.ring
        full = {}
        for i in range(MAX_LENGTH + 1):
            m = maps.get(i)
            if m is None:
                m = PolyMatrix.zeros(ring, target.degrees(i), source.degrees(i))
            if m.row_degs != target.degrees(i) or m.col_degs != source.degrees(i):
                raise PreconditionError(f"component {i} does not match the module degrees")
            full[i] = m
        self.source = source
        self.target = target
        self.maps = full

    def __getitem__(self, i) -> PolyMatrix:
        return self.maps[i]

    def violations(self) -> List[str]:
        """Squares d^G_i phi_i = phi_{i-1} d^F_i that fail to commute."""
        out = []
        for i in range(1, MAX_LENGTH + 1):
            lhs = self.target.d(i) @ self.maps[i]
            rhs = self.maps[i - 1] @ self.source.d(i)
            diff = lhs - rhs
            for r, row in enumerate(diff.entries):
                for c, e in enumerate(row):
                    if e:
                        out.append(f"square {i}: entry ({r},{c}) off by {e}")
        return out


def check_complex(C: FreeComplex) -> List[str]:
    """All homogeneity and d*d violations; an empty list means C is a complex."""
    out = []
    for i in range(1, MAX_LENGTH + 1):
        for msg in C.d(i).homogeneity_violations():
            out.append(f"d_{i}: {msg}")
    for i in range(1, MAX_LENGTH):
        dd = C.d(i) @ C.d(i + 1)
        for r, row in enumerate(dd.entries):
            for c, e in enumerate(row):
                if e:
                    out.append(
                        f"d_{i}*d_{i + 1} entry ({C.names(i - 1)[r]}, {C.names(i + 1)[c]}) = {e}")
    return out


def _disjoint_names(a: GradedFreeModule, b: GradedFreeModule, pa="s:", pb="t:"):
    if set(a.names) & set(b.names):
        a = GradedFreeModule(tuple(pa + n for n in a.names), a.degrees)
        b = GradedFreeModule(tuple(pb + n for n in b.names), b.degrees)
    return a + b


def _paste(ent, M: PolyMatrix, r0: int, c0: int):
    for i, row in enumerate(M.entries):
        for j, e in enumerate(row):
            if e:
                ent[r0 + i][c0 + j] = e


def mapping_cone(phi: ComplexMorphism) -> FreeComplex:
    """C_n = F_{n-1} + G_n with d_n = [[d^F_{n-1}, 0], [(-1)^(n-1) phi_{n-1}, d^G_n]]."""
    F, G = phi.source, phi.target
    ring = F.ring
    if F.rank(MAX_LENGTH):
        raise PreconditionError("the source must vanish in degree 3 for the cone to fit")
    mods = [G.modules[0]]
    for n in range(1, MAX_LENGTH + 1):
        mods.append(_disjoint_names(F.modules[n - 1], G.modules[n]))
    diffs = []
    for n in range(1, MAX_LENGTH + 1):
        sign = 1 if (n - 1) % 2 == 0 else -1
        nf_row, nf_col = F.rank(n - 2), F.rank(n - 1)
        ent = [[ring.zero] * mods[n].rank for _ in range(mods[n - 1].rank)]
        if n >= 2:
            _paste(ent, F.d(n - 1), 0, 0)
        _paste(ent, phi[n - 1] if sign == 1 else -phi[n - 1], nf_row, 0)
        _paste(ent, G.d(n), nf_row, nf_col)
        diffs.append(PolyMatrix(ring, ent, mods[n - 1].degrees, mods[n].degrees, check=False))
    return FreeComplex(ring, mods, diffs)


def tensor_index(A: FreeComplex, B: FreeComplex):
    """For each total degree n, the list of (i, a, j, b) generator pairs in order."""
    out = []
    for n in range(0, 2 * MAX_LENGTH + 1):
        pairs = []
        for i in range(n, -1, -1):
            j = n - i
            if i > MAX_LENGTH or j > MAX_LENGTH:
                continue
            for a in range(A.rank(i)):
                for b in range(B.rank(j)):
                    pairs.append((i, a, j, b))
        out.append(pairs)
    return out


def tensor_complexes(A: FreeComplex, B: FreeComplex) -> FreeComplex:
    """Tensor product with d(a x b) = da x b + (-1)^|a| a x db."""
    ring = A.ring
    idx = tensor_index(A, B)
    for n in range(MAX_LENGTH + 1, len(idx)):
        if idx[n]:
            raise PreconditionError("tensor product is longer than 3")
    mods = []
    for n in range(MAX_LENGTH + 1):
        names = [f"{A.names(i)[a]}*{B.names(j)[b]}" for i, a, j, b in idx[n]]
        degs = [A.degrees(i)[a] + B.degrees(j)[b] for i, a, j, b in idx[n]]
        mods.append(GradedFreeModule.of(names, degs))
    diffs = []
    for n in range(1, MAX_LENGTH + 1):
        pos = {key: r for r, key in enumerate(idx[n - 1])}
        ent = [[ring.zero] * len(idx[n]) for _ in idx[n - 1]]
        for c, (i, a, j, b) in enumerate(idx[n]):
            if i >= 1:
                col = A.d(i).column(a)
                for a2, e in enumerate(col):
                    if e:
                        ent[pos[(i - 1, a2, j, b)]][c] += e
            if j >= 1:
                col = B.d(j).column(b)
                for b2, e in enumerate(col):
                    if e:
                        ent[pos[(i, a, j - 1, b2)]][c] += e if i % 2 == 0 else -e
        diffs.append(PolyMatrix(ring, ent, mods[n - 1].degrees, mods[n].degrees, check=False))
    return FreeComplex(ring, mods, diffs)


def strand_dim(ring: PolynomialRing, degs, D: int) -> int:
    return sum(ring.dim(D - g) for g in degs)


@lru_cache(maxsize=8192)
def _cached_strand_rank(M: PolyMatrix, D: int) -> int:
    if not M.nrows or not M.ncols or M.is_zero():
        return 0
    return strand_rank(M, D)


def default_dmax(C: FreeComplex) -> int:
    degs = C.degrees(3) or C.degrees(2) or C.degrees(1) or (0,)
    return max(degs) + 10


def exactness_check(C: FreeComplex, dmax: Optional[int] = None) -> List[List[int]]:
    """dim_k H_i(C)_d for i = 0..3 and d = 0..dmax."""
    if dmax is None:
        dmax = default_dmax(C)
    if dmax < 0:
        raise PreconditionError("dmax must be nonnegative")
    ring = C.ring
    out = []
    for i in range(MAX_LENGTH + 1):
        row = []
        for D in range(dmax + 1):
            dim = strand_dim(ring, C.degrees(i), D)
            if dim == 0:
                row.append(0)
                continue
            r_out = _cached_strand_rank(C.d(i), D) if i >= 1 else 0
            r_in = _cached_strand_rank(C.d(i + 1), D) if i < MAX_LENGTH else 0
            row.append(dim - r_out - r_in)
        out.append(row)
    return out


def is_resolution(C: FreeComplex, dmax: Optional[int] = None) -> bool:
    hom = exactness_check(C, dmax)
    return all(v == 0 for row in hom[1:] for v in row)


def complex_from_matrices(ring: PolynomialRing, generators, d2=None, d3=None,
                          names=None) -> FreeComplex:
    """Resolution-shaped complex from an ideal's generators and the higher
    matrices, inferring twists from homogeneity.

    A zero column leaves its twist undetermined and is rejected.
    """
    gens = [ring.coerce(g) for g in generators]
    deg1 = []
    for g in gens:
        if not g:
            raise PreconditionError("zero generator")
        deg1.append(g.homogeneous_degree())
    layers = [[[g for g in gens]]]
    degs = [[0], deg1]
    for k, mat in enumerate((d2, d3), start=2):
        if mat is None:
            break
        mat = [[ring.coerce(e) for e in row] for row in mat]
        row_degs = degs[-1]
        if len(mat) != len(row_degs):
            raise PreconditionError(f"d_{k} has {len(mat)} rows, expected {len(row_degs)}")
        ncols = len(mat[0]) if mat else 0
        cd = []
        for j in range(ncols):
            found = None
            for i in range(len(mat)):
                e = mat[i][j]
                if e:
                    found = e.homogeneous_degree() + row_degs[i]
                    break
            if found is None:
                raise PreconditionError(f"column {j} of d_{k} is zero; its twist is ambiguous")
            cd.append(found)
        layers.append(mat)
        degs.append(cd)
    prefixes = names or ["e0", "f1_", "f2_", "f3_"]
    mods = []
    for i, dl in enumerate(degs):
        if i == 0:
            mods.append(GradedFreeModule.of([prefixes[0]], [0]))
        else:
            mods.append(GradedFreeModule.of([f"{prefixes[i]}{k + 1}" for k in range(len(dl))], dl))
    diffs = [PolyMatrix(ring, layers[i], degs[i], degs[i + 1]) for i in range(len(layers))]
    return FreeComplex(ring, mods, diffs)
