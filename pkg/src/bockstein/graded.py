"""Finite-type free graded modules, graded maps, chain complexes, homology.

Degrees live in a window [0, N_max].  Homology of a Z_(p) complex is computed
by decomposing the complex into elementary pieces (iterated Smith normal form
with basis tracking, top degree down); the same decomposition later drives the
Bockstein pages, so torsion bookkeeping happens exactly once.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .scalars import Matrix, RingError, ZpLocal


class WindowError(ValueError):
    """A degree outside the trusted window was requested."""


class ComplexError(ValueError):
    """d∘d ≠ 0 or a malformed differential."""


class GradedBasis:
    """Ordered basis names per degree in [0, n_max]; finite rank everywhere."""

    def __init__(self, names_by_degree: dict, n_max: int):
        self.n_max = n_max
        self._names = {}
        for n, names in names_by_degree.items():
            if not names:
                continue
            if n < 0 or n > n_max:
                raise WindowError(f"degree {n} outside window [0, {n_max}]")
            if len(set(names)) != len(names):
                raise ValueError(f"duplicate basis names in degree {n}")
            self._names[n] = list(names)

    def dim(self, n: int) -> int:
        return len(self._names.get(n, []))

    def names(self, n: int) -> list:
        return list(self._names.get(n, []))

    def degrees(self):
        return sorted(self._names)

    def total_dim(self) -> int:
        return sum(len(v) for v in self._names.values())

    def index(self, n: int, name: str) -> int:
        return self._names[n].index(name)

    def __eq__(self, other):
        return (isinstance(other, GradedBasis) and self.n_max == other.n_max
                and self._names == other._names)

    def __repr__(self):
        return f"GradedBasis({dict(self._names)}, n_max={self.n_max})"


def suspend(basis: GradedBasis, marker: str = "s") -> GradedBasis:
    """(sM)_i = M_{i-1}; names gain the suspension marker.

    Degrees pushed past n_max are dropped (the window truncates).
    """
    shifted = {}
    for n in basis.degrees():
        if n + 1 > basis.n_max:
            continue
        shifted[n + 1] = [marker + name for name in basis.names(n)]
    return GradedBasis(shifted, basis.n_max)


class GradedMap:
    """Degree-d linear map between graded bases; per-degree matrix blocks.

    The block at degree n is a dim(target, n+d) x dim(source, n) matrix;
    missing blocks are zero.
    """

    def __init__(self, source: GradedBasis, target: GradedBasis, degree: int,
                 ring, blocks: dict | None = None):
        self.source = source
        self.target = target
        self.degree = degree
        self.ring = ring
        self.blocks = {}
        if blocks:
            for n, m in blocks.items():
                self.set_block(n, m)

    def set_block(self, n: int, m: Matrix):
        if m.rows != self.target.dim(n + self.degree) or m.cols != self.source.dim(n):
            raise ComplexError(
                f"block at degree {n} has shape {m.rows}x{m.cols}, expected "
                f"{self.target.dim(n + self.degree)}x{self.source.dim(n)}")
        if not m.is_zero():
            self.blocks[n] = m

    def block(self, n: int) -> Matrix:
        if n in self.blocks:
            return self.blocks[n]
        return Matrix.zeros(self.ring, self.target.dim(n + self.degree),
                            self.source.dim(n))

    def compose(self, other: "GradedMap") -> "GradedMap":
        """self ∘ other."""
        if other.target is not self.source and other.target != self.source:
            raise ComplexError("composition source/target mismatch")
        out = GradedMap(other.source, self.target, self.degree + other.degree,
                        self.ring)
        for n in range(other.source.n_max + 1):
            mid = n + other.degree
            if mid < 0 or mid + self.degree < 0:
                continue
            if mid > self.source.n_max or n + out.degree > self.target.n_max:
                continue
            out.set_block(n, self.block(mid) * other.block(n))
        return out

    def __add__(self, other: "GradedMap") -> "GradedMap":
        if self.degree != other.degree:
            raise ComplexError("cannot add maps of different degrees")
        out = GradedMap(self.source, self.target, self.degree, self.ring)
        for n in set(self.blocks) | set(other.blocks):
            out.set_block(n, self.block(n) + other.block(n))
        return out

    def __eq__(self, other):
        if not isinstance(other, GradedMap) or self.degree != other.degree:
            return False
        for n in set(self.blocks) | set(other.blocks):
            if self.block(n).a != other.block(n).a:
                return False
        return True

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.blocks.values())

    def apply(self, n: int, vec):
        return self.block(n).apply(vec)

    def reduce_mod_p(self) -> "GradedMap":
        fp = self.ring.residue_field()
        out = GradedMap(self.source, self.target, self.degree, fp)
        for n, m in self.blocks.items():
            out.set_block(n, m.reduce_mod_p())
        return out


def dual_basis(basis: GradedBasis, marker: str = "#") -> GradedBasis:
    return GradedBasis({n: [name + marker for name in basis.names(n)]
                        for n in basis.degrees()}, basis.n_max)


def dualize(f: GradedMap, source_dual: GradedBasis, target_dual: GradedBasis,
            signed: bool = True) -> GradedMap:
    """Dual of a degree-d map: transposed blocks with Koszul sign bookkeeping.

    The dual map sends (target)^# -> (source)^# and, indexing duals by the
    degrees they pair against, its block at degree n+d is the transpose of the
    block at n, scaled by (-1)^{d*n} when `signed` (trivial for degree-0 maps).
    """
    ring = f.ring
    out = GradedMap(target_dual, source_dual, -f.degree, ring)
    for n, m in f.blocks.items():
        mt = m.transpose()
        if signed and (f.degree * n) % 2 == 1:
            mt = mt.scaled(ring.neg(ring.one))
        out.set_block(n + f.degree, mt)
    return out


class GradedChainComplex:
    """Free chain complex: basis + degree -1 differential with d∘d = 0."""

    def __init__(self, basis: GradedBasis, d: GradedMap, ring):
        if d.degree != -1:
            raise ComplexError("chain differential must have degree -1")
        self.basis = basis
        self.d = d
        self.ring = ring
        self.n_max = basis.n_max
        dd = d.compose(d)
        if not dd.is_zero():
            bad = next(n for n in dd.blocks if not dd.block(n).is_zero())
            raise ComplexError(f"d∘d ≠ 0 starting at degree {bad}")

    def dim(self, n: int) -> int:
        return self.basis.dim(n)


# ---------------------------------------------------------------------------
# Elementary-piece decomposition over Z_(p)
# ---------------------------------------------------------------------------

@dataclass
class Piece:
    """Free piece (top_degree only) or elementary piece p^k: top -> bottom.

    Indices refer to positions in the transformed (new) basis of the
    respective degree.
    """

    kind: str                      # "free" | "elementary"
    top_degree: int
    top_index: int
    exponent: int = 0              # for elementary pieces: d(top) = p^k bottom
    bottom_index: int = -1         # position in degree top_degree - 1


@dataclass
class Decomposition:
    complex: GradedChainComplex
    pieces: list
    P: dict = field(default_factory=dict)       # n -> new basis in old coords
    Pinv: dict = field(default_factory=dict)

    def representative(self, n: int, index: int):
        """Chain in original coordinates for new-basis vector (n, index)."""
        return self.P[n].column(index)

    def coordinates(self, n: int, vec):
        """Coordinates of an original-basis chain in the new basis."""
        return self.Pinv[n].apply(vec)


def decompose(C: GradedChainComplex) -> Decomposition:
    """Split C into free and elementary pieces with recorded basis change.

    Differentials are processed from the top degree down; at each level the
    columns already hit from above are frozen, and Smith normal form is
    applied to the remaining columns only, which keeps the pieces found so
    far intact.
    """
    ring = C.ring
    if ring.is_field:
        raise RingError("decompose runs over Z_(p); reduce afterwards instead")
    n_max = C.n_max
    cur = {n: C.d.block(n).copy() for n in range(1, n_max + 1)}
    P = {n: Matrix.identity(ring, C.dim(n)) for n in range(n_max + 1)}
    Pinv = {n: Matrix.identity(ring, C.dim(n)) for n in range(n_max + 1)}
    bottoms = {n: {} for n in range(n_max + 1)}   # index -> exponent of its piece
    tops = {n: set() for n in range(n_max + 1)}
    pieces = []

    for n in range(n_max, 0, -1):
        M = cur[n]
        if M.cols == 0:
            continue
        frozen = set(bottoms[n])
        free_cols = [j for j in range(M.cols) if j not in frozen]
        if M.rows == 0 or not free_cols:
            rank = 0
        else:
            sub = Matrix(ring, M.rows, len(free_cols))
            for i in range(M.rows):
                for jj, j in enumerate(free_cols):
                    sub.a[i][jj] = M.a[i][j]
            res = sub.snf()
            rank = len(res.invariant_exponents)
            # scatter V into a full column transform (identity on frozen cols)
            Vf = Matrix.identity(ring, M.cols)
            Vfinv = Matrix.identity(ring, M.cols)
            for a, ja in enumerate(free_cols):
                for b, jb in enumerate(free_cols):
                    Vf.a[ja][jb] = res.V.a[a][b]
                    Vfinv.a[ja][jb] = res.Vinv.a[a][b]
            P[n] = P[n] * Vf
            Pinv[n] = Vfinv * Pinv[n]
            P[n - 1] = P[n - 1] * res.Uinv
            Pinv[n - 1] = res.U * Pinv[n - 1]
            cur[n] = res.U * M * Vf
            if n + 1 <= n_max:
                cur[n + 1] = Vfinv * cur[n + 1]
            if n - 1 >= 1:
                cur[n - 1] = cur[n - 1] * res.Uinv
            for i in range(rank):
                k = res.invariant_exponents[i]
                top_col = free_cols[i]
                pieces.append(Piece("elementary", n, top_col, k, i))
                tops[n].add(top_col)
                bottoms[n - 1][i] = k
        for j in range(C.dim(n)):
            if j not in tops[n] and j not in bottoms[n]:
                pieces.append(Piece("free", n, j))

    for j in range(C.dim(0)):
        if j not in bottoms[0]:
            pieces.append(Piece("free", 0, j))

    dec = Decomposition(C, pieces, P, Pinv)
    _verify_decomposition(dec)
    return dec


def _verify_decomposition(dec: Decomposition):
    """Recompose: Pinv[n-1] * d * P[n] must equal the canonical piece matrix."""
    C = dec.complex
    ring = C.ring
    p = ring.p
    for n in range(1, C.n_max + 1):
        got = dec.Pinv[n - 1] * C.d.block(n) * dec.P[n]
        want = Matrix.zeros(ring, C.dim(n - 1), C.dim(n))
        for pc in dec.pieces:
            if pc.kind == "elementary" and pc.top_degree == n:
                want.a[pc.bottom_index][pc.top_index] = ring.of(p ** pc.exponent)
        if got != want:
            raise ComplexError(f"decomposition verification failed at degree {n}")


@dataclass
class HomologySummary:
    """H_n = Z_(p)^{betti_n} + sum of Z/p^{k} summands, within the window."""

    n_max: int
    _betti: dict
    _torsion: dict

    def trusted(self, n: int) -> bool:
        return 0 <= n <= self.n_max - 1

    def _check(self, n: int):
        if not self.trusted(n):
            raise WindowError(
                f"degree {n} outside trust window [0, {self.n_max - 1}]: "
                "boundaries from above are unknown at the cutoff")

    def betti(self, n: int) -> int:
        self._check(n)
        return self._betti.get(n, 0)

    def torsion_exponents(self, n: int) -> list:
        self._check(n)
        return sorted(self._torsion.get(n, []))

    def mod_p_dim(self, n: int) -> int:
        """dim_Fp H_n(C ⊗ F_p) via universal coefficients."""
        self._check(n)
        low = len(self._torsion.get(n - 1, [])) if n >= 1 else 0
        return self.betti(n) + len(self._torsion.get(n, [])) + low


def homology(C: GradedChainComplex, dec: Decomposition | None = None) -> HomologySummary:
    """Betti numbers and p-torsion orders per degree ≤ n_max - 1."""
    if dec is None:
        dec = decompose(C)
    betti, torsion = {}, {}
    for pc in dec.pieces:
        if pc.kind == "free":
            betti[pc.top_degree] = betti.get(pc.top_degree, 0) + 1
        elif pc.exponent >= 1:
            torsion.setdefault(pc.top_degree - 1, []).append(pc.exponent)
    return HomologySummary(C.n_max, betti, torsion)


# ---------------------------------------------------------------------------
# Homology over a field (used for cochain models and as an independent oracle)
# ---------------------------------------------------------------------------

class FieldHomology:
    """Per-degree homology of a complex over F_p, any differential degree ±1.

    Stores, per degree, a basis of cycles completed from boundaries, so that
    classes of cycles and maps induced on homology can be extracted.
    """

    def __init__(self, basis: GradedBasis, d: GradedMap):
        if not d.ring.is_field:
            raise RingError("FieldHomology expects a field")
        self.basis = basis
        self.d = d
        self.ring = d.ring
        self._cycle = {}       # n -> Matrix, columns a basis of cycles
        self._boundary_count = {}
        self._classes = {}     # n -> Matrix sending chain coords to H coords
        for n in range(basis.n_max + 1):
            self._compute(n)

    def _compute(self, n: int):
        ring = self.ring
        dim = self.basis.dim(n)
        out = self.d.block(n)
        kern = out.kernel_basis()
        inc = n - self.d.degree
        bnd = []
        if 0 <= inc <= self.basis.n_max:
            B = self.d.block(inc)
            R, pivots = B.rref()
            bnd = [B.column(j) for j in pivots]
        # complete boundaries to a basis of cycles
        cols = [list(v) for v in bnd]
        chosen = []
        for v in kern:
            trial = Matrix.from_columns(ring, dim, cols + [v])
            if trial.rank() == len(cols) + 1:
                cols.append(list(v))
                chosen.append(v)
        self._cycle[n] = Matrix.from_columns(ring, dim, cols) if cols else \
            Matrix.zeros(ring, dim, 0)
        self._boundary_count[n] = len(bnd)

    def dim(self, n: int) -> int:
        return self._cycle[n].cols - self._boundary_count[n]

    def class_of(self, n: int, vec):
        """Homology coordinates of a cycle; raises if not a cycle."""
        ring = self.ring
        if any(not ring.is_zero(x) for x in self.d.block(n).apply(vec)):
            raise ComplexError("not a cycle")
        coords = self._solve_in_cycles(n, vec)
        return coords[self._boundary_count[n]:]

    def _solve_in_cycles(self, n, vec):
        M = self._cycle[n]
        sol = M.solve(vec)
        if sol is None:
            raise ComplexError("cycle not in computed cycle space")
        return sol

    def representative(self, n: int, h_index: int):
        return self._cycle[n].column(self._boundary_count[n] + h_index)


def induced_map(f: GradedMap, H_src: FieldHomology, H_tgt: FieldHomology) -> dict:
    """Per-degree matrices of H(f); f must be a (co)chain map."""
    ring = f.ring
    out = {}
    for n in range(H_src.basis.n_max + 1):
        if not (0 <= n + f.degree <= H_tgt.basis.n_max):
            continue
        cols = []
        for j in range(H_src.dim(n)):
            rep = H_src.representative(n, j)
            img = f.apply(n, rep)
            cols.append(H_tgt.class_of(n + f.degree, img))
        out[n] = Matrix.from_columns(ring, H_tgt.dim(n + f.degree), cols) \
            if cols else Matrix.zeros(ring, H_tgt.dim(n + f.degree), 0)
    return out
