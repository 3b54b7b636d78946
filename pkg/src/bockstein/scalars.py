"""Exact arithmetic in Z_(p) and F_p, and dense matrix algorithms over both.

Z_(p) elements are `fractions.Fraction`s whose denominator is coprime to p;
F_p elements are ints in [0, p).  A ring object supplies the arithmetic so
matrix code is ring-agnostic.  Everything is exact: no floats anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction


class RingError(ValueError):
    """Wrong ring, bad prime, or an element outside the ring."""


class DimensionError(ValueError):
    """Incompatible matrix/vector shapes."""


def is_odd_prime(p: int) -> bool:
    if p < 3 or p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def _check_prime(p: int) -> None:
    if not is_odd_prime(p):
        raise RingError(f"{p} is not an odd prime")


@dataclass(frozen=True)
class ZpLocal:
    """The integers localized at the odd prime p: fractions a/b with p∤b."""

    p: int
    is_field = False
    tag = "Z_(p)"

    def __post_init__(self):
        _check_prime(self.p)

    def of(self, x) -> Fraction:
        if isinstance(x, str):
            x = Fraction(x)
        f = Fraction(x)
        if f.denominator % self.p == 0:
            raise RingError(
                f"denominator of {f} is divisible by p={self.p}: not in Z_(p)")
        return f

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def is_zero(self, a) -> bool:
        # ints and Fractions both carry .numerator; this skips the slow
        # Fraction.__eq__ dispatch on the hottest call in the library
        return a.numerator == 0

    def valuation(self, a) -> int:
        """p-adic valuation; raises on zero (v(0) = +inf)."""
        if a == 0:
            raise ZeroDivisionError("valuation of zero is undefined")
        v = 0
        n = a.numerator
        while n % self.p == 0:
            n //= self.p
            v += 1
        return v

    def is_unit(self, a) -> bool:
        return a != 0 and self.valuation(a) == 0

    def inv(self, a):
        if not self.is_unit(a):
            raise RingError(f"{a} is not a unit in Z_({self.p})")
        return 1 / a

    def div(self, a, b):
        """Exact quotient a/b; raises if the quotient leaves Z_(p)."""
        if b == 0:
            raise ZeroDivisionError
        q = a / b
        return self.of(q)

    def divides(self, b, a) -> bool:
        """Whether b | a in Z_(p)."""
        if a == 0:
            return True
        if b == 0:
            return False
        return (a / b).denominator % self.p != 0

    def unit_part(self, a):
        """Write a = unit * p^v and return the unit."""
        return a / Fraction(self.p) ** self.valuation(a)

    def reduce_mod_p(self, a) -> int:
        """Image in F_p."""
        num = a.numerator % self.p
        den = a.denominator % self.p
        return (num * pow(den, self.p - 2, self.p)) % self.p

    def residue_field(self) -> "PrimeField":
        return PrimeField(self.p)

    def coerce_vector(self, entries):
        return [self.of(x) for x in entries]


@dataclass(frozen=True)
class PrimeField:
    """The prime field F_p, p an odd prime; elements are ints in [0, p)."""

    p: int
    is_field = True
    tag = "F_p"

    def __post_init__(self):
        _check_prime(self.p)

    def of(self, x) -> int:
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise RingError(f"denominator of {x} vanishes mod {self.p}")
            return (x.numerator * pow(x.denominator, self.p - 2, self.p)) % self.p
        return int(x) % self.p

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def is_zero(self, a) -> bool:
        return a % self.p == 0

    def is_unit(self, a) -> bool:
        return a % self.p != 0

    def inv(self, a):
        if a % self.p == 0:
            raise RingError("division by zero in F_p")
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return (a * self.inv(b)) % self.p

    def divides(self, b, a) -> bool:
        return b % self.p != 0 or a % self.p == 0

    def coerce_vector(self, entries):
        return [self.of(x) for x in entries]


class Matrix:
    """Dense exact matrix over ZpLocal or PrimeField."""

    def __init__(self, ring, rows: int, cols: int, entries=None):
        self.ring = ring
        self.rows = rows
        self.cols = cols
        if entries is None:
            self.a = [[ring.zero] * cols for _ in range(rows)]
        else:
            if len(entries) != rows or any(len(r) != cols for r in entries):
                raise DimensionError("entry grid does not match shape")
            self.a = [[ring.of(x) for x in row] for row in entries]

    # -- construction helpers -------------------------------------------

    @classmethod
    def identity(cls, ring, n: int) -> "Matrix":
        m = cls(ring, n, n)
        for i in range(n):
            m.a[i][i] = ring.one
        return m

    @classmethod
    def zeros(cls, ring, rows: int, cols: int) -> "Matrix":
        return cls(ring, rows, cols)

    @classmethod
    def from_columns(cls, ring, rows: int, columns) -> "Matrix":
        m = cls(ring, rows, len(columns))
        for j, col in enumerate(columns):
            if len(col) != rows:
                raise DimensionError("column length mismatch")
            for i in range(rows):
                m.a[i][j] = ring.of(col[i])
        return m

    def copy(self) -> "Matrix":
        m = Matrix(self.ring, self.rows, self.cols)
        m.a = [row[:] for row in self.a]
        return m

    def column(self, j: int):
        return [self.a[i][j] for i in range(self.rows)]

    def columns(self):
        return [self.column(j) for j in range(self.cols)]

    # -- algebra ----------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.rows == other.rows
                and self.cols == other.cols and self.a == other.a)

    def __mul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise DimensionError(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        ring = self.ring
        is_zero, add, mul = ring.is_zero, ring.add, ring.mul
        r = Matrix(ring, self.rows, other.cols)
        for i in range(self.rows):
            ai = self.a[i]
            ri = r.a[i]
            for k in range(self.cols):
                c = ai[k]
                if is_zero(c):
                    continue
                bk = other.a[k]
                for j in range(other.cols):
                    if not is_zero(bk[j]):
                        ri[j] = add(ri[j], mul(c, bk[j]))
        return r

    def __add__(self, other: "Matrix") -> "Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionError("shape mismatch in addition")
        r = self.copy()
        for i in range(self.rows):
            for j in range(self.cols):
                r.a[i][j] = self.ring.add(r.a[i][j], other.a[i][j])
        return r

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + other.scaled(self.ring.neg(self.ring.one))

    def scaled(self, c) -> "Matrix":
        r = self.copy()
        for i in range(self.rows):
            for j in range(self.cols):
                r.a[i][j] = self.ring.mul(c, r.a[i][j])
        return r

    def transpose(self) -> "Matrix":
        r = Matrix(self.ring, self.cols, self.rows)
        for i in range(self.rows):
            for j in range(self.cols):
                r.a[j][i] = self.a[i][j]
        return r

    def is_zero(self) -> bool:
        return all(self.ring.is_zero(x) for row in self.a for x in row)

    def apply(self, vec):
        if len(vec) != self.cols:
            raise DimensionError("vector length mismatch")
        ring = self.ring
        is_zero, add, mul = ring.is_zero, ring.add, ring.mul
        out = [ring.zero] * self.rows
        for k, c in enumerate(vec):
            if is_zero(c):
                continue
            for i in range(self.rows):
                x = self.a[i][k]
                if not is_zero(x):
                    out[i] = add(out[i], mul(x, c))
        return out

    def reduce_mod_p(self) -> "Matrix":
        """Image of a Z_(p) matrix in F_p."""
        if self.ring.is_field:
            return self.copy()
        fp = self.ring.residue_field()
        m = Matrix(fp, self.rows, self.cols)
        m.a = [[self.ring.reduce_mod_p(x) for x in row] for row in self.a]
        return m

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in row) for row in self.a)
        return f"Matrix({self.ring.tag}, {self.rows}x{self.cols}: {body})"

    # -- field elimination -------------------------------------------------

    def rref(self):
        """Row-reduce over a field; returns (R, pivot_columns)."""
        if not self.ring.is_field:
            raise RingError("rref requires a field")
        R = self.copy()
        ring = self.ring
        pivots = []
        r = 0
        for c in range(self.cols):
            pr = next((i for i in range(r, self.rows)
                       if not ring.is_zero(R.a[i][c])), None)
            if pr is None:
                continue
            R.a[r], R.a[pr] = R.a[pr], R.a[r]
            inv = ring.inv(R.a[r][c])
            R.a[r] = [ring.mul(inv, x) for x in R.a[r]]
            for i in range(self.rows):
                if i != r and not ring.is_zero(R.a[i][c]):
                    f = R.a[i][c]
                    R.a[i] = [ring.sub(x, ring.mul(f, y))
                              for x, y in zip(R.a[i], R.a[r])]
            pivots.append(c)
            r += 1
            if r == self.rows:
                break
        return R, pivots

    def rank(self) -> int:
        if self.ring.is_field:
            return len(self.rref()[1])
        return len(self.snf().invariant_exponents)

    def inverse(self) -> "Matrix":
        """Inverse; over Z_(p) requires all pivots to be units."""
        if self.rows != self.cols:
            raise DimensionError("only square matrices invert")
        ring = self.ring
        n = self.rows
        A = self.copy()
        I = Matrix.identity(ring, n)
        for c in range(n):
            pr = next((i for i in range(c, n) if ring.is_unit(A.a[i][c])), None)
            if pr is None:
                raise RingError("matrix is not invertible over the ring")
            A.a[c], A.a[pr] = A.a[pr], A.a[c]
            I.a[c], I.a[pr] = I.a[pr], I.a[c]
            inv = ring.inv(A.a[c][c])
            A.a[c] = [ring.mul(inv, x) for x in A.a[c]]
            I.a[c] = [ring.mul(inv, x) for x in I.a[c]]
            for i in range(n):
                if i != c and not ring.is_zero(A.a[i][c]):
                    f = A.a[i][c]
                    A.a[i] = [ring.sub(x, ring.mul(f, y))
                              for x, y in zip(A.a[i], A.a[c])]
                    I.a[i] = [ring.sub(x, ring.mul(f, y))
                              for x, y in zip(I.a[i], I.a[c])]
        return I

    # -- Smith normal form over Z_(p) ---------------------------------------

    def snf(self) -> "SnfResult":
        """U*A*V = S diagonal with entries p^{k_1} | p^{k_2} | ... then zeros.

        Pivots are chosen by minimal p-adic valuation and normalized to pure
        powers of p, so the exponents are nondecreasing.  U, V are invertible
        over Z_(p); their inverses are accumulated alongside.
        """
        if self.ring.is_field:
            raise RingError("snf is defined over Z_(p), not F_p")
        ring = self.ring
        S = self.copy()
        U = Matrix.identity(ring, self.rows)
        Uinv = Matrix.identity(ring, self.rows)
        V = Matrix.identity(ring, self.cols)
        Vinv = Matrix.identity(ring, self.cols)
        exponents = []
        t = 0
        while t < min(self.rows, self.cols):
            best = None
            for i in range(t, self.rows):
                for j in range(t, self.cols):
                    if not ring.is_zero(S.a[i][j]):
                        v = ring.valuation(S.a[i][j])
                        if best is None or v < best[0]:
                            best = (v, i, j)
            if best is None:
                break
            v, pi, pj = best
            _swap_rows(S, U, Uinv, t, pi)
            _swap_cols(S, V, Vinv, t, pj)
            u = ring.unit_part(S.a[t][t])
            _scale_row(S, U, Uinv, t, ring.inv(u))
            piv = S.a[t][t]
            for i in range(self.rows):
                if i != t and not ring.is_zero(S.a[i][t]):
                    _add_row(S, U, Uinv, i, t, ring.neg(ring.div(S.a[i][t], piv)))
            for j in range(self.cols):
                if j != t and not ring.is_zero(S.a[t][j]):
                    _add_col(S, V, Vinv, j, t, ring.neg(ring.div(S.a[t][j], piv)))
            exponents.append(v)
            t += 1
        return SnfResult(U=U, S=S, V=V, Uinv=Uinv, Vinv=Vinv,
                         invariant_exponents=exponents)

    # -- kernels and solving -------------------------------------------------

    def kernel_basis(self):
        """Basis of ker A as column vectors; saturated over Z_(p)."""
        if self.ring.is_field:
            R, pivots = self.rref()
            free = [j for j in range(self.cols) if j not in pivots]
            basis = []
            for j in free:
                v = [self.ring.zero] * self.cols
                v[j] = self.ring.one
                for r, pc in enumerate(pivots):
                    v[pc] = self.ring.neg(R.a[r][j])
                basis.append(v)
            return basis
        res = self.snf()
        rank = len(res.invariant_exponents)
        return [res.V.column(j) for j in range(rank, self.cols)]

    def solve(self, b):
        """Exact solution x of A x = b, or None when b is not in the image."""
        if len(b) != self.rows:
            raise DimensionError("right-hand side length mismatch")
        ring = self.ring
        b = [ring.of(x) for x in b]
        if ring.is_field:
            aug = Matrix(ring, self.rows, self.cols + 1)
            for i in range(self.rows):
                aug.a[i][:self.cols] = self.a[i][:]
                aug.a[i][self.cols] = b[i]
            R, pivots = aug.rref()
            if self.cols in pivots:
                return None
            x = [ring.zero] * self.cols
            for r, pc in enumerate(pivots):
                x[pc] = R.a[r][self.cols]
            return x
        res = self.snf()
        rank = len(res.invariant_exponents)
        ub = res.U.apply(b)
        y = [ring.zero] * self.cols
        for i in range(self.rows):
            if i < rank:
                piv = res.S.a[i][i]
                if not ring.divides(piv, ub[i]):
                    return None
                y[i] = ub[i] / piv
            elif not ring.is_zero(ub[i]):
                return None
        return res.V.apply(y)


@dataclass
class SnfResult:
    """U*A*V = S with U, V invertible over Z_(p) and S = diag(p^{k_i}, ..., 0)."""

    U: Matrix
    S: Matrix
    V: Matrix
    Uinv: Matrix
    Vinv: Matrix
    invariant_exponents: list = field(default_factory=list)


def _dot(ring, row, vec):
    s = ring.zero
    for x, y in zip(row, vec):
        if not ring.is_zero(x):
            s = ring.add(s, ring.mul(x, y))
    return s


def _swap_rows(S, U, Uinv, i, j):
    if i == j:
        return
    S.a[i], S.a[j] = S.a[j], S.a[i]
    U.a[i], U.a[j] = U.a[j], U.a[i]
    # inverse of a swap is the same swap, applied on the other side (columns)
    for r in range(Uinv.rows):
        Uinv.a[r][i], Uinv.a[r][j] = Uinv.a[r][j], Uinv.a[r][i]


def _swap_cols(S, V, Vinv, i, j):
    if i == j:
        return
    for r in range(S.rows):
        S.a[r][i], S.a[r][j] = S.a[r][j], S.a[r][i]
    for r in range(V.rows):
        V.a[r][i], V.a[r][j] = V.a[r][j], V.a[r][i]
    Vinv.a[i], Vinv.a[j] = Vinv.a[j], Vinv.a[i]


def _scale_row(S, U, Uinv, i, c):
    ring = S.ring
    S.a[i] = [ring.mul(c, x) for x in S.a[i]]
    U.a[i] = [ring.mul(c, x) for x in U.a[i]]
    cinv = ring.inv(c)
    for r in range(Uinv.rows):
        Uinv.a[r][i] = ring.mul(Uinv.a[r][i], cinv)


def _add_row(S, U, Uinv, i, j, c):
    """Row_i += c * Row_j (and bookkeeping for U, Uinv)."""
    ring = S.ring
    S.a[i] = [ring.add(x, ring.mul(c, y)) for x, y in zip(S.a[i], S.a[j])]
    U.a[i] = [ring.add(x, ring.mul(c, y)) for x, y in zip(U.a[i], U.a[j])]
    for r in range(Uinv.rows):
        Uinv.a[r][j] = ring.sub(Uinv.a[r][j], ring.mul(c, Uinv.a[r][i]))


def _add_col(S, V, Vinv, j, k, c):
    """Col_j += c * Col_k (and bookkeeping for V, Vinv)."""
    ring = S.ring
    for r in range(S.rows):
        S.a[r][j] = ring.add(S.a[r][j], ring.mul(c, S.a[r][k]))
    for r in range(V.rows):
        V.a[r][j] = ring.add(V.a[r][j], ring.mul(c, V.a[r][k]))
    Vinv.a[k] = [ring.sub(x, ring.mul(c, y))
                 for x, y in zip(Vinv.a[k], Vinv.a[j])]
