"""Iterated trimming: the cone T of the comparison map from a truncated
resolution F to a sum of twisted Koszul complexes, and its DG product."""
from __future__ import annotations

from typing import List, Optional, Sequence

from .complexes import ComplexMorphism, FreeComplex, GradedFreeModule, mapping_cone
from .dga import DGProduct
from .koszul import KoszulComplex, build_koszul, koszul_lift
from .linalg import PolyMatrix, PreconditionError, graded_solve


class NotMinimalError(ValueError):
    pass


class TrimConstructionError(RuntimeError):
    pass


class TrimData:
    """Everything needed to build the trimming complex for one index set.

    ``sigma`` is 1-based and sorted; ``keep`` holds the 0-based indices of
    F_1 outside sigma. ``q1[i]`` maps F_2 to K_1 of the i-th Koszul copy and
    ``q2[i]`` maps F_3 to its K_2.
    """

    def __init__(self, F: FreeComplex, PF: Optional[DGProduct], sigma: Sequence[int]):
        self.F = F
        self.PF = PF
        self.ring = F.ring
        self.sigma = sorted(set(int(s) for s in sigma))
        self.keep = [a for a in range(F.rank(1)) if a + 1 not in self.sigma]
        self.d2p: Optional[PolyMatrix] = None
        self.d0: List[tuple] = []
        self.koszul: List[KoszulComplex] = []
        self.q1: List[PolyMatrix] = []
        self.q2: List[PolyMatrix] = []

    @property
    def t(self) -> int:
        return len(self.sigma)

    def e0(self, i: int) -> int:
        """0-based F_1 index of the i-th trimmed generator (i 0-based)."""
        return self.sigma[i] - 1

    def phi(self, i: int):
        return self.F.d(1)[0, self.e0(i)]

    def check_invariants(self) -> List[str]:
        out = []
        F = self.F
        for i in range(self.t):
            K = self.koszul[i]
            lhs = K.d(1) @ self.q1[i]
            row = F.d(2).row(self.e0(i))
            for c in range(F.rank(2)):
                if lhs[0, c] != row[c]:
                    out.append(f"m_1 q_1^{i + 1} differs from d_2 at column {c + 1}")
            if F.rank(3):
                diff = K.d(2) @ self.q2[i] - self.q1[i] @ F.d(3)
                if not diff.is_zero():
                    out.append(f"m_2 q_2^{i + 1} != q_1^{i + 1} d_3")
        proj = F.d(2).submatrix(rows=self.keep)
        if self.d2p is not None and proj != self.d2p:
            out.append("d_2' is not the projection of d_2")
        return out


def trimmed_ideal_generators(gens, sigma: Sequence[int]):
    """phi_i for i outside sigma, then x_k phi_j for j in sigma and k = 1, 2, 3."""
    gens = list(gens)
    sigma = sorted(set(sigma))
    for s in sigma:
        if not 1 <= s <= len(gens):
            raise PreconditionError(f"index {s} out of range 1..{len(gens)}")
    out = [g for a, g in enumerate(gens) if a + 1 not in sigma]
    for s in sigma:
        g = gens[s - 1]
        out.extend(x * g for x in g.ring.gens)
    return out


def split_differential(F: FreeComplex, sigma: Sequence[int], PF: DGProduct | None = None) -> TrimData:
    sig = sorted(set(int(s) for s in sigma))
    if not sig:
        raise PreconditionError("sigma must be nonempty")
    for s in sig:
        if not 1 <= s <= F.rank(1):
            raise PreconditionError(f"index {s} out of range 1..{F.rank(1)}")
    if F.rank(0) != 1 or F.degrees(0) != (0,):
        raise PreconditionError("F_0 must be R in degree 0")
    td = TrimData(F, PF, sig)
    for s in sig:
        row = F.d(2).row(s - 1)
        for c, e in enumerate(row):
            if e.constant_term():
                raise NotMinimalError(
                    f"d_2 has a unit in row {s}, column {c + 1}; generator {s} is not minimal there")
        td.d0.append(row)
    td.d2p = F.d(2).submatrix(rows=td.keep)
    for pos, s in enumerate(sig):
        td.koszul.append(build_koszul(F.ring, 3, F.degrees(1)[s - 1], f"g{pos + 1}_"))
    return td


def build_q_maps(td: TrimData) -> TrimData:
    F = td.F
    R = td.ring
    td.q1, td.q2 = [], []
    for i, K in enumerate(td.koszul):
        cols = []
        for c in range(F.rank(2)):
            z = (td.d0[i][c],)
            y = graded_solve(K.d(1), z)
            if y is None:
                raise TrimConstructionError(f"cannot lift column {c + 1} of d_0^{i + 1}")
            cols.append(y)
        q1 = PolyMatrix.from_columns(R, cols, K.complex.degrees(1), F.degrees(2), check=False)
        cols = []
        q1d3 = q1 @ F.d(3)
        for c in range(F.rank(3)):
            y = koszul_lift(K, 2, q1d3.column(c))
            if y is None:
                raise TrimConstructionError(f"cannot lift q_1^{i + 1} d_3 at column {c + 1}")
            cols.append(y)
        q2 = PolyMatrix.from_columns(R, cols, K.complex.degrees(2), F.degrees(3), check=False)
        td.q1.append(q1)
        td.q2.append(q2)
    bad = td.check_invariants()
    if bad:
        raise TrimConstructionError("; ".join(bad))
    return td


def _stack(R, mats, row_degs, col_degs):
    ent = []
    for M in mats:
        ent.extend(M.entries)
    if not ent:
        return PolyMatrix.zeros(R, row_degs, col_degs)
    return PolyMatrix(R, ent, row_degs, col_degs, check=False)


def _blockdiag(R, mats, row_degs, col_degs):
    ent = [[R.zero] * len(col_degs) for _ in row_degs]
    r0 = c0 = 0
    for M in mats:
        for i, row in enumerate(M.entries):
            for j, e in enumerate(row):
                ent[r0 + i][c0 + j] = e
        r0 += M.nrows
        c0 += M.ncols
    return PolyMatrix(R, ent, row_degs, col_degs, check=False)


def source_and_target(td: TrimData):
    """The truncated source P = (F_3 -> F_2 -> F_1') and the target
    Q = (sum G_3 -> sum G_2 -> sum G_1 -> R)."""
    F, R = td.F, td.ring
    keep = td.keep
    P1 = GradedFreeModule.of([F.names(1)[a] for a in keep], [F.degrees(1)[a] for a in keep])
    P = FreeComplex(R, [P1, F.modules[2], F.modules[3]], [td.d2p, F.d(3)])
    qmods = [GradedFreeModule.of(["1"], [0])]
    for k in (1, 2, 3):
        names, degs = [], []
        for K in td.koszul:
            names.extend(K.complex.names(k))
            degs.extend(K.complex.degrees(k))
        qmods.append(GradedFreeModule.of(names, degs))
    row = []
    for i, K in enumerate(td.koszul):
        phi = td.phi(i)
        row.extend(-(phi * e) for e in K.d(1).row(0))
    qd = [PolyMatrix(R, [row], (0,), qmods[1].degrees, check=False)]
    for k in (2, 3):
        qd.append(_blockdiag(R, [K.d(k) for K in td.koszul], qmods[k - 1].degrees, qmods[k].degrees))
    Q = FreeComplex(R, qmods, qd)
    return P, Q


def comparison_morphism(td: TrimData) -> ComplexMorphism:
    P, Q = source_and_target(td)
    R = td.ring
    d1p = td.F.d(1).submatrix(cols=td.keep)
    maps = {
        0: d1p,
        1: _stack(R, td.q1, Q.degrees(1), P.degrees(1)),
        2: _stack(R, td.q2, Q.degrees(2), P.degrees(2)),
    }
    return ComplexMorphism(P, Q, maps)


def build_trimming_complex(td: TrimData) -> FreeComplex:
    phi = comparison_morphism(td)
    bad = phi.violations()
    if bad:
        raise TrimConstructionError("comparison map is not a chain map: " + bad[0])
    return mapping_cone(phi)


class TrimLayout:
    """Positions of the F-part and of each Koszul block inside T_1, T_2, T_3."""

    def __init__(self, td: TrimData):
        F = td.F
        self.fsize = {1: len(td.keep), 2: F.rank(2), 3: F.rank(3)}
        self.ksize = {1: 3, 2: 3, 3: 1}
        self.t = td.t

    def g(self, n: int, i: int, a: int) -> int:
        return self.fsize[n] + i * self.ksize[n] + a

    def block(self, n: int, i: int):
        start = self.fsize[n] + i * self.ksize[n]
        return start, start + self.ksize[n]

    def kind(self, n: int, idx: int):
        """('F', local index) or ('G', block, local index)."""
        if idx < self.fsize[n]:
            return ("F", idx)
        i, a = divmod(idx - self.fsize[n], self.ksize[n])
        return ("G", i, a)


def build_trim_product(td: TrimData, T: FreeComplex) -> DGProduct:
    """DG product on T: explicit formulas in T_1 x T_1 and for G_1^i x G_2^i,
    leading F_3 terms plus Koszul corrections lifted from the Leibniz defect
    elsewhere in T_1 x T_2."""
    if td.PF is None:
        raise PreconditionError("a DG product on F is required")
    R = td.ring
    F, PF = td.F, td.PF
    lay = TrimLayout(td)
    zero = R.zero
    P = DGProduct(T)

    def tvec(n, fpart=None, gparts=None):
        v = [zero] * T.rank(n)
        if fpart is not None:
            for k, e in enumerate(fpart):
                v[k] = e
        for i, gv in (gparts or {}).items():
            s, _ = lay.block(n, i)
            for k, e in enumerate(gv):
                if e:
                    v[s + k] = v[s + k] + e
        return v

    def fbasis(n, a):
        return F.basis_vector(n, a)

    def kbasis(K, n, a):
        return K.complex.basis_vector(n, a)

    def m1(K, a):
        return K.d(1)[0, a]

    def scal(c, vec):
        return tuple(c * e for e in vec)

    def add(u, v):
        return tuple(a + b for a, b in zip(u, v))

    def q1_of(i, f2vec):
        return td.q1[i].apply(f2vec)

    # T_1 x T_1
    n1 = T.rank(1)
    for x in range(n1):
        for y in range(x + 1, n1):
            kx, ky = lay.kind(1, x), lay.kind(1, y)
            if kx[0] == "F" and ky[0] == "F":
                f, f2 = td.keep[kx[1]], td.keep[ky[1]]
                ff = PF.basis_product(1, f, 1, f2)
                gp = {}
                for i, K in enumerate(td.koszul):
                    g2 = koszul_lift(K, 2, q1_of(i, ff))
                    if g2 is None:
                        raise TrimConstructionError(f"q_1^{i + 1}(f f') is not a boundary")
                    gp[i] = g2
                val = tvec(2, ff, gp)
            elif kx[0] == "F":
                f = td.keep[kx[1]]
                _, i, a = ky
                K = td.koszul[i]
                ef = PF.basis_product(1, td.e0(i), 1, f)
                gp = {j: td.koszul[j].act(1, kbasis(K, 1, a), 1, q1_of(j, ef))
                      for j in range(td.t)}
                val = tvec(2, scal(m1(K, a), ef), gp)
            else:
                _, i, a = kx
                _, j, b = ky
                Ki, Kj = td.koszul[i], td.koszul[j]
                if i == j:
                    g = Ki.act(1, kbasis(Ki, 1, a), 1, kbasis(Ki, 1, b))
                    val = tvec(2, None, {i: scal(-td.phi(i), g)})
                else:
                    E = PF.basis_product(1, td.e0(i), 1, td.e0(j))
                    mi, mj = m1(Ki, a), m1(Kj, b)
                    gp = {}
                    for k, Kk in enumerate(td.koszul):
                        qk = q1_of(k, E)
                        if k == i:
                            gp[k] = scal(mj, Kk.act(1, kbasis(Ki, 1, a), 1, qk))
                        else:
                            gp[k] = scal(mi, Kk.act(1, kbasis(Kj, 1, b), 1, qk))
                    val = tvec(2, scal(mi * mj, E), gp)
            P.set((1, x), (1, y), val)

    # T_1 x T_2
    for x in range(n1):
        kx = lay.kind(1, x)
        for y in range(T.rank(2)):
            ky = lay.kind(2, y)
            lead = None
            if kx[0] == "F" and ky[0] == "F":
                lead = PF.basis_product(1, td.keep[kx[1]], 2, ky[1])
            elif kx[0] == "G" and ky[0] == "F":
                _, i, a = kx
                lead = scal(-m1(td.koszul[i], a), PF.basis_product(1, td.e0(i), 2, ky[1]))
            elif kx[0] == "G" and ky[0] == "G" and kx[1] == ky[1]:
                _, i, a = kx
                K = td.koszul[i]
                g = K.act(1, kbasis(K, 1, a), 2, kbasis(K, 2, ky[2]))
                P.set((1, x), (2, y), tvec(3, None, {i: scal(-td.phi(i), g)}))
                continue
            lead_t = tvec(3, lead, None)
            ex, ey = T.basis_vector(1, x), T.basis_vector(2, y)
            delta = [a - b - c for a, b, c in zip(
                P.mul(0, T.apply_d(1, ex), 2, ey),
                P.mul(1, ex, 1, T.apply_d(2, ey)),
                T.apply_d(3, lead_t))]
            if any(delta[:lay.fsize[2]]):
                raise TrimConstructionError(
                    f"Leibniz defect of ({T.names(1)[x]}, {T.names(2)[y]}) has an F_2 component")
            gp = {}
            for i, K in enumerate(td.koszul):
                s, e = lay.block(2, i)
                g3 = koszul_lift(K, 3, delta[s:e])
                if g3 is None:
                    raise TrimConstructionError(
                        f"Leibniz defect of ({T.names(1)[x]}, {T.names(2)[y]}) is not a cycle in block {i + 1}")
                gp[i] = g3
            P.set((1, x), (2, y), add(lead_t, tvec(3, None, gp)))
    return P


class TrimResult:
    def __init__(self, td: TrimData, T: FreeComplex, PT: Optional[DGProduct]):
        self.data = td
        self.complex = T
        self.product = PT

    def __repr__(self):
        return f"TrimResult(sigma={self.data.sigma}, ranks={self.complex.ranks()})"


def trim(F: FreeComplex, PF: DGProduct | None, sigma: Sequence[int], with_product: bool = True) -> TrimResult:
    """Split, lift the comparison maps, build T and (optionally) its product."""
    td = build_q_maps(split_differential(F, sigma, PF))
    T = build_trimming_complex(td)
    PT = build_trim_product(td, T) if with_product else None
    return TrimResult(td, T, PT)
