"""The Koszul complex on the variables, its exterior product, and lifting."""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import Optional, Tuple

from .complexes import FreeComplex, GradedFreeModule
from .dga import DGProduct
from .linalg import PolyMatrix, graded_solve
from .poly import PolynomialRing


def subsets_by_size(n: int):
    """Subsets of {1..n} grouped by size, each group in lexicographic order."""
    return [list(combinations(range(1, n + 1), k)) for k in range(n + 1)]


def exterior_sign(S, T) -> int:
    """Sign of e_S e_T = sign * e_{S u T}; 0 when S and T meet."""
    if set(S) & set(T):
        return 0
    inv = sum(1 for s in S for t in T if s > t)
    return -1 if inv % 2 else 1


class KoszulComplex:
    """K(x1..xn) with generators e_S in degree |S| + twist."""

    def __init__(self, ring: PolynomialRing, n: int = 3, twist: int = 0, prefix: str = "e"):
        if n > 3:
            raise ValueError("only n <= 3 fits in a complex of length 3")
        self.ring = ring
        self.n = n
        self.twist = twist
        self.subsets = subsets_by_size(n)
        self._pos = [{S: a for a, S in enumerate(layer)} for layer in self.subsets]
        mods = []
        for k, layer in enumerate(self.subsets):
            names = [prefix + ("".join(str(s) for s in S) if S else "0") for S in layer]
            mods.append(GradedFreeModule.of(names, [k + twist] * len(layer)))
        x = ring.gens
        diffs = []
        for k in range(1, n + 1):
            ent = [[ring.zero] * len(self.subsets[k]) for _ in self.subsets[k - 1]]
            for c, S in enumerate(self.subsets[k]):
                for p, i in enumerate(S):
                    rest = S[:p] + S[p + 1:]
                    ent[self._pos[k - 1][rest]][c] = x[i - 1] if p % 2 == 0 else -x[i - 1]
            diffs.append(PolyMatrix(ring, ent, mods[k - 1].degrees, mods[k].degrees))
        self.complex = FreeComplex(ring, mods, diffs)
        self.product = DGProduct(self.complex, self._table())

    def __repr__(self):
        return f"KoszulComplex(n={self.n}, twist={self.twist})"

    def index(self, S) -> Tuple[int, int]:
        S = tuple(sorted(S))
        return len(S), self._pos[len(S)][S]

    def d(self, k: int) -> PolyMatrix:
        return self.complex.d(k)

    def _table(self):
        table = {}
        for i in range(1, self.n + 1):
            for j in range(i, self.n + 1 - i):
                for a, S in enumerate(self.subsets[i]):
                    for b, T in enumerate(self.subsets[j]):
                        if i == j and b <= a:
                            continue
                        s = exterior_sign(S, T)
                        val = [self.ring.zero] * len(self.subsets[i + j])
                        if s:
                            U = tuple(sorted(S + T))
                            val[self._pos[i + j][U]] = self.ring.const(s)
                        table[((i, a), (j, b))] = tuple(val)
        return table

    def act(self, i: int, u, j: int, v):
        """Exterior product of u in K_i with v in K_j."""
        return self.product.mul(i, u, j, v)


@lru_cache(maxsize=64)
def build_koszul(ring: PolynomialRing, n: int = 3, twist: int = 0, prefix: str = "e") -> KoszulComplex:
    return KoszulComplex(ring, n, twist, prefix)


def koszul_lift(K: KoszulComplex, k: int, z) -> Optional[tuple]:
    """y in K_k with d_k(y) = z, or None when z is not a boundary.

    For k >= 2 a non-cycle z is rejected without solving.
    """
    C = K.complex
    if k < 1 or k > K.n:
        return None
    z = tuple(K.ring.coerce(v) for v in z)
    if not any(z):
        return C.zero_vector(k)
    if k >= 2 and any(C.apply_d(k - 1, z)):
        return None
    return graded_solve(C.d(k), z)
