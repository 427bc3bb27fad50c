"""Exact linear algebra over k and graded lifting over k[x1, ..., xn].

A ``MatrixOverK`` is a plain list of rows of field elements. Sparse vectors
are ``{index: value}`` dicts with no zero values.
"""
from __future__ import annotations

import heapq
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .field import Field
from .poly import Polynomial, PolynomialRing, monomial_index, monomials_of_degree

SparseVec = Dict[int, object]
MatrixOverK = List[List[object]]


class PreconditionError(ValueError):
    pass


# ---------------------------------------------------------------------------
# k-linear algebra


class SparseEchelon:
    """Incrementally maintained echelon basis; the leading index of a vector
    is its smallest key."""

    def __init__(self, field: Field):
        self.field = field
        self.pivots: Dict[int, SparseVec] = {}

    def __len__(self):
        return len(self.pivots)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, v: SparseVec) -> SparseVec:
        """Reduce until the leading index is not a pivot; returns the remainder."""
        if not v:
            return {}
        p = self.field.char
        pivots = self.pivots
        v = dict(v)
        heap = list(v)
        heapq.heapify(heap)
        seen = set(heap)
        while heap:
            c = heapq.heappop(heap)
            seen.discard(c)
            f = v.get(c)
            if f is None:
                continue
            row = pivots.get(c)
            if row is None:
                return v
            if p:
                for k, a in row.items():
                    nv = (v.get(k, 0) - f * a) % p
                    if nv:
                        if k not in v and k not in seen:
                            heapq.heappush(heap, k)
                            seen.add(k)
                        v[k] = nv
                    else:
                        v.pop(k, None)
            else:
                for k, a in row.items():
                    nv = v.get(k, 0) - f * a
                    if nv:
                        if k not in v and k not in seen:
                            heapq.heappush(heap, k)
                            seen.add(k)
                        v[k] = nv
                    else:
                        v.pop(k, None)
        return v

    def add(self, v: SparseVec) -> bool:
        """Insert v; True when it enlarged the span."""
        v = self.reduce(v)
        if not v:
            return False
        c = min(v)
        inv = self.field.inv(v[c])
        p = self.field.char
        if p:
            self.pivots[c] = {k: a * inv % p for k, a in v.items()}
        else:
            self.pivots[c] = {k: a * inv for k, a in v.items()}
        return True

    def contains(self, v: SparseVec) -> bool:
        return not self.reduce(v)


class LinearSolver:
    """Reduced row echelon form of A together with the row operations E
    (E A = rref), so that A y = z can be solved for many right sides.

    A is given by its columns as sparse vectors over ``nrows`` rows.
    """

    def __init__(self, field: Field, nrows: int, columns: Sequence[SparseVec]):
        self.field = field
        self.nrows = nrows
        self.ncols = len(columns)
        p = field.char
        rows: List[SparseVec] = [dict() for _ in range(nrows)]
        for j, col in enumerate(columns):
            for i, a in col.items():
                rows[i][j] = a
        trans: List[SparseVec] = [{i: field.one} for i in range(nrows)]
        pivot_cols: List[int] = []
        r = 0
        for c in range(self.ncols):
            piv = None
            best = None
            for i in range(r, nrows):
                if c in rows[i]:
                    n = len(rows[i])
                    if best is None or n < best:
                        piv, best = i, n
            if piv is None:
                continue
            rows[r], rows[piv] = rows[piv], rows[r]
            trans[r], trans[piv] = trans[piv], trans[r]
            inv = field.inv(rows[r][c])
            prow = _scale(rows[r], inv, p)
            ptrans = _scale(trans[r], inv, p)
            rows[r], trans[r] = prow, ptrans
            for i in range(nrows):
                if i != r:
                    f = rows[i].get(c)
                    if f is not None:
                        rows[i] = _axpy(rows[i], prow, f, p)
                        trans[i] = _axpy(trans[i], ptrans, f, p)
            pivot_cols.append(c)
            r += 1
            if r == nrows:
                break
        self.rank = r
        self.pivot_cols = pivot_cols
        self.rref = rows
        self.trans = trans

    def solve(self, z: SparseVec) -> Optional[SparseVec]:
        """Particular solution with free variables zero, or None."""
        p = self.field.char
        if not z:
            return {}
        w = []
        for row in self.trans:
            s = 0
            if len(row) < len(z):
                for k, a in row.items():
                    b = z.get(k)
                    if b is not None:
                        s += a * b
            else:
                for k, b in z.items():
                    a = row.get(k)
                    if a is not None:
                        s += a * b
            w.append(s % p if p else s)
        for r in range(self.rank, self.nrows):
            if w[r]:
                return None
        return {self.pivot_cols[r]: w[r] for r in range(self.rank) if w[r]}

    def kernel_basis(self) -> List[SparseVec]:
        """Basis of the null space, one vector per free column."""
        p = self.field.char
        pivset = set(self.pivot_cols)
        out = []
        for f in range(self.ncols):
            if f in pivset:
                continue
            v = {f: self.field.one}
            for r, c in enumerate(self.pivot_cols):
                a = self.rref[r].get(f)
                if a:
                    v[c] = (-a) % p if p else -a
            out.append(v)
        return out


def _scale(v: SparseVec, c, p) -> SparseVec:
    if p:
        return {k: a * c % p for k, a in v.items()}
    return {k: a * c for k, a in v.items()}


def _axpy(v: SparseVec, w: SparseVec, f, p) -> SparseVec:
    """v - f*w."""
    out = dict(v)
    for k, a in w.items():
        nv = out.get(k, 0) - f * a
        if p:
            nv %= p
        if nv:
            out[k] = nv
        else:
            out.pop(k, None)
    return out


def dense_to_columns(M: MatrixOverK, ncols: int | None = None) -> List[SparseVec]:
    ncols = len(M[0]) if M else (ncols or 0)
    cols: List[SparseVec] = [dict() for _ in range(ncols)]
    for i, row in enumerate(M):
        for j, a in enumerate(row):
            if a:
                cols[j][i] = a
    return cols


def rank_over_k(M: MatrixOverK, field: Field) -> int:
    """Rank by exact row reduction."""
    ech = SparseEchelon(field)
    conv = field.convert
    for row in M:
        ech.add({j: conv(a) for j, a in enumerate(row) if conv(a)})
    return ech.rank


def solve_over_k(M: MatrixOverK, z: Sequence, field: Field, ncols: int | None = None):
    """Some y with M y = z as a dense list, or None if z is not in the column space."""
    conv = field.convert
    M = [[conv(a) for a in row] for row in M]
    ncols = len(M[0]) if M else (ncols or 0)
    solver = LinearSolver(field, len(M), dense_to_columns(M, ncols))
    zz = {i: conv(a) for i, a in enumerate(z) if conv(a)}
    y = solver.solve(zz)
    if y is None:
        return None
    return [y.get(j, field.zero) for j in range(ncols)]


def transpose(M: MatrixOverK) -> MatrixOverK:
    return [list(col) for col in zip(*M)] if M else []


# ---------------------------------------------------------------------------
# matrices over R


class PolyMatrix:
    """A homogeneous map of graded free modules.

    Rows are target generators with degrees ``row_degs``; columns are source
    generators with degrees ``col_degs``. Entry (i, j) must be zero or
    homogeneous of degree ``col_degs[j] - row_degs[i]``.
    """

    __slots__ = ("ring", "entries", "row_degs", "col_degs", "_hash")

    def __init__(self, ring: PolynomialRing, entries, row_degs, col_degs, check: bool = True):
        self.ring = ring
        self.row_degs = tuple(int(d) for d in row_degs)
        self.col_degs = tuple(int(d) for d in col_degs)
        ent = tuple(tuple(ring.coerce(e) for e in row) for row in entries)
        if len(ent) != len(self.row_degs):
            raise PreconditionError(
                f"{len(ent)} rows but {len(self.row_degs)} row degrees")
        for row in ent:
            if len(row) != len(self.col_degs):
                raise PreconditionError(
                    f"row of length {len(row)} but {len(self.col_degs)} column degrees")
        self.entries = ent
        self._hash = None
        if check:
            bad = self.homogeneity_violations()
            if bad:
                raise PreconditionError("inhomogeneous matrix: " + "; ".join(bad[:5]))

    @property
    def nrows(self) -> int:
        return len(self.row_degs)

    @property
    def ncols(self) -> int:
        return len(self.col_degs)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij) -> Polynomial:
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        return (isinstance(other, PolyMatrix) and self.entries == other.entries
                and self.row_degs == other.row_degs and self.col_degs == other.col_degs)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.entries, self.row_degs, self.col_degs))
        return self._hash

    def __repr__(self):
        rows = ["[" + ", ".join(str(e) for e in row) + "]" for row in self.entries]
        return f"PolyMatrix({self.nrows}x{self.ncols}: " + ", ".join(rows) + ")"

    def homogeneity_violations(self) -> List[str]:
        out = []
        for i, row in enumerate(self.entries):
            for j, e in enumerate(row):
                if not e:
                    continue
                want = self.col_degs[j] - self.row_degs[i]
                degs = {sum(m) for m in e.terms}
                if degs != {want}:
                    out.append(f"entry ({i},{j}) = {e} should have degree {want}")
        return out

    def is_zero(self) -> bool:
        return all(not e for row in self.entries for e in row)

    def column(self, j: int) -> Tuple[Polynomial, ...]:
        return tuple(row[j] for row in self.entries)

    def row(self, i: int) -> Tuple[Polynomial, ...]:
        return self.entries[i]

    def apply(self, vec: Sequence[Polynomial]) -> Tuple[Polynomial, ...]:
        if len(vec) != self.ncols:
            raise PreconditionError(f"vector of length {len(vec)} for {self.ncols} columns")
        zero = self.ring.zero
        nz = [(j, v) for j, v in enumerate(vec) if v]
        out = []
        for row in self.entries:
            acc = zero
            for j, v in nz:
                e = row[j]
                if e:
                    acc = acc + e * v
            out.append(acc)
        return tuple(out)

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.col_degs != other.row_degs:
            raise PreconditionError("degree mismatch in composition")
        cols = [self.apply(other.column(j)) for j in range(other.ncols)]
        entries = [[cols[j][i] for j in range(other.ncols)] for i in range(self.nrows)]
        return PolyMatrix(self.ring, entries, self.row_degs, other.col_degs, check=False)

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.shape != other.shape:
            raise PreconditionError("shape mismatch")
        ent = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)]
        return PolyMatrix(self.ring, ent, self.row_degs, self.col_degs, check=False)

    def __neg__(self) -> "PolyMatrix":
        return PolyMatrix(self.ring, [[-a for a in row] for row in self.entries],
                          self.row_degs, self.col_degs, check=False)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "PolyMatrix":
        return PolyMatrix(self.ring, [[a.scale(c) for a in row] for row in self.entries],
                          self.row_degs, self.col_degs, check=False)

    def submatrix(self, rows=None, cols=None) -> "PolyMatrix":
        rows = range(self.nrows) if rows is None else list(rows)
        cols = range(self.ncols) if cols is None else list(cols)
        ent = [[self.entries[i][j] for j in cols] for i in rows]
        return PolyMatrix(self.ring, ent, [self.row_degs[i] for i in rows],
                          [self.col_degs[j] for j in cols], check=False)

    def constant_part(self) -> "PolyMatrix":
        """Entrywise reduction modulo the irrelevant ideal."""
        ring = self.ring
        ent = [[ring.const(e.constant_term()) for e in row] for row in self.entries]
        return PolyMatrix(ring, ent, self.row_degs, self.col_degs, check=False)

    def to_k(self) -> MatrixOverK:
        return [[e.constant_term() for e in row] for row in self.entries]

    def with_entry(self, i, j, value) -> "PolyMatrix":
        ent = [list(row) for row in self.entries]
        ent[i][j] = self.ring.coerce(value)
        return PolyMatrix(self.ring, ent, self.row_degs, self.col_degs, check=False)

    @classmethod
    def zeros(cls, ring, row_degs, col_degs) -> "PolyMatrix":
        z = ring.zero
        return cls(ring, [[z] * len(col_degs) for _ in row_degs], row_degs, col_degs,
                   check=False)

    @classmethod
    def identity(cls, ring, degs) -> "PolyMatrix":
        n = len(degs)
        ent = [[ring.one if i == j else ring.zero for j in range(n)] for i in range(n)]
        return cls(ring, ent, degs, degs, check=False)

    @classmethod
    def block(cls, ring, blocks, row_degs, col_degs) -> "PolyMatrix":
        """Assemble from a grid of blocks; ``None`` stands for a zero block."""
        ent = []
        for brow in blocks:
            heights = {b.nrows for b in brow if b is not None}
            if len(heights) != 1:
                raise PreconditionError("inconsistent block heights")
            h = heights.pop()
            for i in range(h):
                row = []
                for b in brow:
                    row.extend(b.entries[i])
                ent.append(row)
        return cls(ring, ent, row_degs, col_degs, check=False)

    @classmethod
    def from_columns(cls, ring, columns, row_degs, col_degs, check=True) -> "PolyMatrix":
        ent = [[columns[j][i] for j in range(len(col_degs))] for i in range(len(row_degs))]
        return cls(ring, ent, row_degs, col_degs, check=check)


# ---------------------------------------------------------------------------
# graded strands


def strand_basis(ring: PolynomialRing, degs: Sequence[int], D: int):
    """Coordinates (generator, monomial) of the degree-D piece of a free module,
    with offsets per generator."""
    offsets = []
    total = 0
    for g in degs:
        offsets.append(total)
        total += ring.dim(D - g)
    return offsets, total


def vector_to_strand(ring: PolynomialRing, degs, D: int, vec: Sequence[Polynomial]) -> SparseVec:
    offsets, _ = strand_basis(ring, degs, D)
    n = ring.nvars
    out: SparseVec = {}
    for i, f in enumerate(vec):
        if not f:
            continue
        idx = monomial_index(n, D - degs[i])
        off = offsets[i]
        for m, c in f.terms.items():
            try:
                out[off + idx[m]] = c
            except KeyError:
                raise PreconditionError(
                    f"component {i} = {f} is not homogeneous of degree {D - degs[i]}")
    return out


def strand_to_vector(ring: PolynomialRing, degs, D: int, v: SparseVec) -> Tuple[Polynomial, ...]:
    n = ring.nvars
    offsets, _ = strand_basis(ring, degs, D)
    comps = [dict() for _ in degs]
    for k, c in v.items():
        # offsets are sorted; find owning generator
        i = _owner(offsets, k)
        mons = monomials_of_degree(n, D - degs[i])
        comps[i][mons[k - offsets[i]]] = c
    return tuple(Polynomial(ring, t) for t in comps)


def _owner(offsets, k):
    lo, hi = 0, len(offsets) - 1
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if offsets[mid] <= k:
            lo = mid
        else:
            hi = mid - 1
    # skip empty generators sharing an offset
    while lo + 1 < len(offsets) and offsets[lo + 1] <= k:
        lo += 1
    return lo


def strand_columns(M: PolyMatrix, D: int) -> Tuple[List[SparseVec], int]:
    """Images of the degree-D monomial basis of the source, as sparse vectors
    in the degree-D monomial basis of the target."""
    ring = M.ring
    n = ring.nvars
    t_off, t_dim = strand_basis(ring, M.row_degs, D)
    cols_of = [[(i, M.entries[i][j]) for i in range(M.nrows) if M.entries[i][j]]
               for j in range(M.ncols)]
    out: List[SparseVec] = []
    for j, cd in enumerate(M.col_degs):
        mons = monomials_of_degree(n, D - cd)
        if not mons:
            continue
        prepared = []
        for i, f in cols_of[j]:
            prepared.append((t_off[i], monomial_index(n, D - M.row_degs[i]),
                             list(f.terms.items())))
        for mu in mons:
            v: SparseVec = {}
            for off, idx, terms in prepared:
                for m, c in terms:
                    v[off + idx[tuple(a + b for a, b in zip(m, mu))]] = c
            out.append(v)
    return out, t_dim


def strand_rank(M: PolyMatrix, D: int) -> int:
    cols, _ = strand_columns(M, D)
    ech = SparseEchelon(M.ring.field)
    for v in cols:
        ech.add(v)
    return ech.rank


@lru_cache(maxsize=4096)
def _strand_solver(M: PolyMatrix, D: int) -> LinearSolver:
    cols, t_dim = strand_columns(M, D)
    return LinearSolver(M.ring.field, t_dim, cols)


def vector_degree(ring, degs, vec) -> Optional[int]:
    """Internal degree of a homogeneous element; None for zero."""
    D = None
    for i, f in enumerate(vec):
        if not f:
            continue
        try:
            e = f.homogeneous_degree()
        except ValueError:
            raise PreconditionError(f"component {i} = {f} is not homogeneous")
        if D is None:
            D = e + degs[i]
        elif D != e + degs[i]:
            raise PreconditionError("components of the vector have different degrees")
    return D


def graded_solve(M: PolyMatrix, z: Sequence[Polynomial]) -> Optional[Tuple[Polynomial, ...]]:
    """A homogeneous y with M y = z, or None when z is not in the image.

    The solution is the row-reduction particular solution on the single
    relevant degree strand, with free variables set to zero.
    """
    ring = M.ring
    if len(z) != M.nrows:
        raise PreconditionError(f"right side has {len(z)} components, need {M.nrows}")
    z = tuple(ring.coerce(f) for f in z)
    bad = M.homogeneity_violations()
    if bad:
        raise PreconditionError("inhomogeneous matrix: " + bad[0])
    D = vector_degree(ring, M.row_degs, z)
    if D is None:
        return tuple(ring.zero for _ in range(M.ncols))
    solver = _strand_solver(M, D)
    y = solver.solve(vector_to_strand(ring, M.row_degs, D, z))
    if y is None:
        return None
    return strand_to_vector(ring, M.col_degs, D, y)
