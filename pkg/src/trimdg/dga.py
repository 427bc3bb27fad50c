"""Products on free complexes stored as structure constants, with checkers
and a lifting construction."""
from __future__ import annotations

import json
from typing import Dict, List, Tuple

from .complexes import MAX_LENGTH, FreeComplex, tensor_complexes, tensor_index
from .linalg import graded_solve

Key = Tuple[Tuple[int, int], Tuple[int, int]]


class ConstructionError(RuntimeError):
    pass


class DGProduct:
    """Multiplication on a complex whose C_0 is R, generated by its unit.

    ``table[((i, a), (j, b))]`` is the product of generator a of C_i with
    generator b of C_j as a coordinate vector in C_{i+j}. Only keys with
    1 <= i <= j, i + j <= 3 (and a < b when i == j) are stored; the other
    order follows from graded commutativity, and odd squares are zero.
    Missing keys mean zero.
    """

    def __init__(self, complex: FreeComplex, table: Dict[Key, tuple] | None = None):
        self.complex = complex
        self.ring = complex.ring
        self.table: Dict[Key, tuple] = {}
        for key, val in (table or {}).items():
            self.set(key[0], key[1], val)

    def __repr__(self):
        return f"DGProduct({self.complex!r}, {len(self.table)} entries)"

    def set(self, left, right, value):
        (i, a), (j, b) = left, right
        C = self.complex
        if i < 1 or j < 1 or i + j > MAX_LENGTH:
            raise ValueError(f"no stored product for degrees ({i}, {j})")
        value = tuple(self.ring.coerce(v) for v in value)
        if len(value) != C.rank(i + j):
            raise ValueError("product value has the wrong length")
        sign = 1
        if i > j or (i == j and a > b):
            (i, a), (j, b) = (j, b), (i, a)
            sign = -1 if (i * j) % 2 else 1
        if i == j and a == b:
            if i % 2 and any(value):
                raise ValueError("odd generators must square to zero")
            return
        if sign == -1:
            value = tuple(-v for v in value)
        if any(value):
            self.table[((i, a), (j, b))] = value
        else:
            self.table.pop(((i, a), (j, b)), None)

    def basis_product(self, i: int, a: int, j: int, b: int) -> tuple:
        C = self.complex
        n = i + j
        if n > MAX_LENGTH:
            return ()
        if i == 0:
            return C.basis_vector(j, b)
        if j == 0:
            return C.basis_vector(i, a)
        sign = 1
        if i > j or (i == j and a > b):
            i, a, j, b = j, b, i, a
            sign = -1 if (i * j) % 2 else 1
        val = self.table.get(((i, a), (j, b)))
        if val is None:
            return C.zero_vector(n)
        return val if sign == 1 else tuple(-v for v in val)

    def mul(self, i: int, u, j: int, v) -> tuple:
        """Product of u in C_i and v in C_j."""
        C = self.complex
        n = i + j
        if n > MAX_LENGTH:
            return ()
        acc = [self.ring.zero] * C.rank(n)
        for a, ua in enumerate(u):
            if not ua:
                continue
            for b, vb in enumerate(v):
                if not vb:
                    continue
                c = ua * vb
                for k, e in enumerate(self.basis_product(i, a, j, b)):
                    if e:
                        acc[k] = acc[k] + c * e
        return tuple(acc)

    def constants(self):
        """Iterate (left, right, value) over stored nonzero entries in key order."""
        for key in sorted(self.table):
            yield key[0], key[1], self.table[key]

    def to_json(self) -> list:
        C = self.complex
        out = []
        for (i, a), (j, b), val in self.constants():
            out.append({"left": C.names(i)[a], "right": C.names(j)[b],
                        "value": [str(v) for v in val]})
        return out

    @classmethod
    def from_json(cls, C: FreeComplex, data) -> "DGProduct":
        if isinstance(data, str):
            data = json.loads(data)
        where = {}
        for i in range(MAX_LENGTH + 1):
            for a, name in enumerate(C.names(i)):
                where[name] = (i, a)
        P = cls(C)
        for item in data:
            P.set(where[item["left"]], where[item["right"]],
                  [C.ring.parse(s) for s in item["value"]])
        return P


def _vsub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def _vadd(u, v):
    return tuple(a + b for a, b in zip(u, v))


def _vscale(c, u):
    return tuple(c * a for a in u)


def leibniz_defect(P: DGProduct, i: int, a: int, j: int, b: int) -> tuple:
    """d(ab) - d(a) b - (-1)^i a d(b) for generators a of C_i, b of C_j."""
    C = P.complex
    n = i + j
    ea = C.basis_vector(i, a)
    eb = C.basis_vector(j, b)
    ab = P.basis_product(i, a, j, b) if n <= MAX_LENGTH else ()
    lhs = C.apply_d(n, ab) if n <= MAX_LENGTH else C.zero_vector(n - 1)
    t1 = P.mul(i - 1, C.apply_d(i, ea), j, eb)
    t2 = P.mul(i, ea, j - 1, C.apply_d(j, eb))
    if i % 2:
        return _vadd(_vsub(lhs, t1), t2)
    return _vsub(_vsub(lhs, t1), t2)


def check_leibniz(P: DGProduct) -> List[str]:
    """Nonzero Leibniz defects over all generator pairs of positive degree
    with total degree at most 4."""
    C = P.complex
    out = []
    for i in range(1, MAX_LENGTH + 1):
        for j in range(i, MAX_LENGTH + 1):
            if i + j > MAX_LENGTH + 1:
                continue
            for a in range(C.rank(i)):
                for b in range(C.rank(j)):
                    if i == j and b < a:
                        continue
                    defect = leibniz_defect(P, i, a, j, b)
                    if any(defect):
                        shown = ", ".join(str(x) for x in defect)
                        out.append(f"({C.names(i)[a]}, {C.names(j)[b]}): defect ({shown})")
    return out


def check_graded_commutativity(P: DGProduct) -> List[str]:
    """b a = (-1)^{ij} a b and odd squares vanish, evaluated through ``mul``."""
    C = P.complex
    out = []
    for i in range(1, MAX_LENGTH + 1):
        for j in range(i, MAX_LENGTH + 1 - i):
            for a in range(C.rank(i)):
                for b in range(C.rank(j)):
                    ab = P.mul(i, C.basis_vector(i, a), j, C.basis_vector(j, b))
                    ba = P.mul(j, C.basis_vector(j, b), i, C.basis_vector(i, a))
                    s = -1 if (i * j) % 2 else 1
                    if any(x - s * y for x, y in zip(ba, ab)):
                        out.append(f"({C.names(i)[a]}, {C.names(j)[b]}) not graded commutative")
                    if i == j and a == b and i % 2 and any(ab):
                        out.append(f"{C.names(i)[a]} squares to a nonzero element")
    return out


def complete_product_by_lifting(C: FreeComplex) -> DGProduct:
    """A DG product on a resolution of a cyclic module, built degree by degree
    with graded_solve."""
    if C.rank(0) != 1 or C.degrees(0) != (0,):
        raise ConstructionError("C_0 must be R generated in degree 0")
    P = DGProduct(C)
    d1 = C.d(1)
    for a in range(C.rank(1)):
        for b in range(a + 1, C.rank(1)):
            rhs = _vsub(C.basis_vector(1, b, d1[0, a]), C.basis_vector(1, a, d1[0, b]))
            g = graded_solve(C.d(2), rhs) if C.rank(2) else (None if any(rhs) else ())
            if g is None:
                raise ConstructionError(
                    f"cannot lift the product of {C.names(1)[a]} and {C.names(1)[b]}")
            P.set((1, a), (1, b), g)
    for a in range(C.rank(1)):
        for h in range(C.rank(2)):
            eh = C.basis_vector(2, h)
            rhs = _vsub(_vscale(d1[0, a], eh),
                        P.mul(1, C.basis_vector(1, a), 1, C.apply_d(2, eh)))
            if not any(rhs):
                continue
            g = graded_solve(C.d(3), rhs) if C.rank(3) else None
            if g is None:
                raise ConstructionError(
                    f"cannot lift the product of {C.names(1)[a]} and {C.names(2)[h]}")
            P.set((1, a), (2, h), g)
    return P


def reduce_mod_m(P: DGProduct) -> DGProduct:
    """Structure constants and differentials replaced by their constant terms."""
    ring = P.ring
    Cbar = P.complex.constant_part()
    table = {key: tuple(ring.const(v.constant_term()) for v in val)
             for key, val in P.table.items()}
    return DGProduct(Cbar, table)


def tensor_dg_product(PA: DGProduct, PB: DGProduct) -> Tuple[FreeComplex, DGProduct]:
    """The product (a x b)(a' x b') = (-1)^{|b||a'|} aa' x bb' on A (x) B."""
    A, B = PA.complex, PB.complex
    T = tensor_complexes(A, B)
    idx = tensor_index(A, B)
    pos = [{key: r for r, key in enumerate(idx[n])} for n in range(len(idx))]
    P = DGProduct(T)
    for n1 in range(1, MAX_LENGTH + 1):
        for n2 in range(n1, MAX_LENGTH + 1 - n1):
            n = n1 + n2
            for r1, (i, a, j, b) in enumerate(idx[n1]):
                for r2, (i2, a2, j2, b2) in enumerate(idx[n2]):
                    if n1 == n2 and r2 <= r1:
                        continue
                    if i + i2 > MAX_LENGTH or j + j2 > MAX_LENGTH:
                        continue
                    left = PA.basis_product(i, a, i2, a2)
                    right = PB.basis_product(j, b, j2, b2)
                    if not any(left) or not any(right):
                        continue
                    sign = -1 if (j * i2) % 2 else 1
                    val = [T.ring.zero] * T.rank(n)
                    for x, u in enumerate(left):
                        if not u:
                            continue
                        for y, w in enumerate(right):
                            if w:
                                k = pos[n][(i + i2, x, j + j2, y)]
                                val[k] = val[k] + (u * w if sign == 1 else -(u * w))
                    P.set((n1, r1), (n2, r2), val)
    return T, P
