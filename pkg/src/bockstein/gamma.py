"""Free divided-powers algebras inside the tensor coalgebra.

Γ(V) sits in T_C(V) as the symmetric words; its product is the shuffle
product and γ^k(v) = [v|...|v] on even generators.  The basis consists of
words γ^{k_1}(v_1)···γ^{k_s}(v_s) with v_i in generator order and k_i ≤ 1
for odd v_i — mirroring PBW monomials of an enveloping algebra on the dual
generators, which makes dualizing a Hopf map a plain blockwise transpose.

Divided powers of arbitrary even elements are computed in the ambient
tensor coalgebra as (k-fold shuffle power)/k!; over F_p the element is
lifted to integers first, the division performed exactly, and the result
reduced (legitimate because γ^j of a multiple of p is 0 mod p for j ≥ 1).
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .graded import GradedBasis, GradedMap
from .scalars import Matrix, ZpLocal


class GammaError(ValueError):
    pass


class GammaAlgebra:
    """Γ(V) on ordered generators [(name, degree)] up to total degree n_max.

    Elements are dicts mapping gamma words to scalars.  A gamma word is a
    tuple of (generator index, exponent) pairs with strictly increasing
    indices; exponent 1 on odd generators.
    """

    def __init__(self, ring, n_max, generators):
        self.ring = ring
        self.n_max = n_max
        self.names = [g[0] for g in generators]
        self.degrees = [g[1] for g in generators]
        if any(d < 1 for d in self.degrees):
            raise GammaError("generator degrees must be >= 1")
        self._shuffle_cache = {}
        self._expand_cache = {(): {(): 1}}
        self._words = {0: [()]}          # degree -> ordered gamma words
        self._build_bases()
        names = {n: [self.word_name(w) for w in ws]
                 for n, ws in self._words.items()}
        self.basis = GradedBasis(names, n_max)

    # -- bases ---------------------------------------------------------------

    def _build_bases(self):
        # gamma words enumerated exactly like PBW monomials on the same
        # generator list, canonically sorted by the flattened index tuple
        flat = {0: [()]}

        def extend(start, mono, deg):
            for i in range(start, len(self.names)):
                nd = deg + self.degrees[i]
                if nd > self.n_max:
                    continue
                m2 = mono + (i,)
                flat.setdefault(nd, []).append(m2)
                extend(i if self.degrees[i] % 2 == 0 else i + 1, m2, nd)

        extend(0, (), 0)
        for n, monos in flat.items():
            monos.sort()
            self._words[n] = [_run_length(m) for m in monos]

    def words(self, n: int) -> list:
        return self._words.get(n, [])

    def dim(self, n: int) -> int:
        return len(self._words.get(n, []))

    def word_degree(self, gword) -> int:
        return sum(k * self.degrees[i] for i, k in gword)

    def word_name(self, gword) -> str:
        if not gword:
            return "1"
        return "*".join(self.names[i] if k == 1 else f"g{k}({self.names[i]})"
                        for i, k in gword)

    def to_vector(self, elem: dict, n: int):
        ring = self.ring
        vec = [ring.zero] * self.dim(n)
        idx = {w: j for j, w in enumerate(self._words.get(n, []))}
        for w, c in elem.items():
            if ring.is_zero(c):
                continue
            if self.word_degree(w) != n:
                raise GammaError("element not homogeneous of stated degree")
            vec[idx[w]] = c
        return vec

    def from_vector(self, n: int, vec) -> dict:
        ring = self.ring
        return {w: c for w, c in zip(self._words.get(n, []), vec)
                if not ring.is_zero(c)}

    # -- shuffle product in T_C(V), integer coefficients ----------------------

    def shuffle(self, a, b) -> dict:
        """Shuffle product of two tensor words (tuples of gen indices)."""
        key = (a, b)
        cached = self._shuffle_cache.get(key)
        if cached is not None:
            return cached
        if not a:
            out = {b: 1}
        elif not b:
            out = {a: 1}
        else:
            out = {}
            for w, c in self.shuffle(a[1:], b).items():
                k = (a[0],) + w
                out[k] = out.get(k, 0) + c
            # bringing b[0] to the front moves it past all of a
            sign = -1 if (self.degrees[b[0]]
                          * sum(self.degrees[i] for i in a)) % 2 else 1
            for w, c in self.shuffle(a, b[1:]).items():
                k = (b[0],) + w
                out[k] = out.get(k, 0) + sign * c
            out = {w: c for w, c in out.items() if c}
        self._shuffle_cache[key] = out
        return out

    def expand(self, gword) -> dict:
        """Tensor-word expansion (integer coefficients) of a gamma word."""
        cached = self._expand_cache.get(gword)
        if cached is not None:
            return cached
        head = self.expand(gword[:-1])
        i, k = gword[-1]
        block = (i,) * k
        out = {}
        for w, c in head.items():
            for w2, c2 in self.shuffle(w, block).items():
                out[w2] = out.get(w2, 0) + c * c2
        out = {w: c for w, c in out.items() if c}
        self._expand_cache[gword] = out
        return out

    def expand_elem(self, elem: dict) -> dict:
        """Element -> tensor expansion over the ring."""
        ring = self.ring
        out = {}
        for gw, c in elem.items():
            for w, n in self.expand(gw).items():
                v = ring.add(out.get(w, ring.zero),
                             ring.mul(c, ring.of(n)))
                if ring.is_zero(v):
                    out.pop(w, None)
                else:
                    out[w] = v
        return out

    def from_tensor(self, tensor_elem: dict, n: int = None) -> dict:
        """Tensor expansion -> gamma coordinates; raises if outside Γ(V).

        Each gamma word hits its sorted tensor word with coefficient 1, and
        distinct gamma words have distinct letter multisets, so peeling the
        sorted words recovers the coordinates without linear algebra; the
        residual must cancel exactly or the element is not symmetric.
        """
        ring = self.ring
        out = {}
        residual = {w: c for w, c in tensor_elem.items()
                    if not ring.is_zero(c)}
        for w, c in list(residual.items()):
            if any(w[i] > w[i + 1] for i in range(len(w) - 1)):
                continue
            gw = _run_length(w)
            if any(k > 1 and self.degrees[i] % 2 for i, k in gw):
                raise GammaError("tensor element does not lie in Γ(V)")
            out[gw] = c
            for w2, m in self.expand(gw).items():
                v = ring.sub(residual.get(w2, ring.zero),
                             ring.mul(c, ring.of(m)))
                if ring.is_zero(v):
                    residual.pop(w2, None)
                else:
                    residual[w2] = v
        if residual:
            raise GammaError("tensor element does not lie in Γ(V)")
        return out

    # -- algebra structure -----------------------------------------------------

    def mul(self, a: dict, b: dict) -> dict:
        ring = self.ring
        tensor = {}
        for wa, ca in a.items():
            for wb, cb in b.items():
                if self.word_degree(wa) + self.word_degree(wb) > self.n_max:
                    continue
                coeff = ring.mul(ca, cb)
                if ring.is_zero(coeff):
                    continue
                for ta, na in self.expand(wa).items():
                    for tb, nb in self.expand(wb).items():
                        for w, c in self.shuffle(ta, tb).items():
                            v = ring.add(tensor.get(w, ring.zero),
                                         ring.mul(coeff, ring.of(na * nb * c)))
                            if ring.is_zero(v):
                                tensor.pop(w, None)
                            else:
                                tensor[w] = v
        return self.from_tensor(tensor)

    def gen(self, i: int) -> dict:
        return {((i, 1),): self.ring.one}

    def element_degree(self, elem: dict) -> int | None:
        degs = {self.word_degree(w) for w, c in elem.items()
                if not self.ring.is_zero(c)}
        if not degs:
            return None
        if len(degs) > 1:
            raise GammaError("element not homogeneous")
        return degs.pop()

    def divided_power(self, elem: dict, k: int) -> dict:
        """γ^k of a homogeneous even-degree element."""
        ring = self.ring
        if k < 0:
            raise GammaError("negative divided power")
        if k == 0:
            return {(): ring.one}
        if k == 1:
            return dict(elem)
        n = self.element_degree(elem)
        if n is None:
            return {}
        if n % 2 or n == 0:
            raise GammaError("divided powers only on nonzero even degrees")
        if n * k > self.n_max:
            raise GammaError(f"γ^{k} lands in degree {n * k} > window")
        # integer lift, exact k-fold shuffle power over Q, divide by k!
        lift = {gw: Fraction(c) for gw, c in elem.items()}
        tensor = {}
        for gw, c in lift.items():
            for w, m in self.expand(gw).items():
                tensor[w] = tensor.get(w, Fraction(0)) + c * m
        power = {(): Fraction(1)}
        for _ in range(k):
            nxt = {}
            for wa, ca in power.items():
                for wb, cb in tensor.items():
                    for w, c in self.shuffle(wa, wb).items():
                        nxt[w] = nxt.get(w, Fraction(0)) + ca * cb * c
            power = {w: c for w, c in nxt.items() if c}
        kf = factorial(k)
        result = {w: c / kf for w, c in power.items()}
        for w, c in result.items():
            if c.denominator % ring.p == 0:
                raise GammaError("divided power not p-integral (internal)")
        exact = _exact_from_tensor(self, result, n * k, ZpLocal(ring.p))
        return {gw: ring.of(c) for gw, c in exact.items()
                if not ring.is_zero(ring.of(c))}


def _exact_from_tensor(A: GammaAlgebra, tensor: dict, n: int, zp) -> dict:
    """Peel gamma coordinates over Z_(p) regardless of A.ring."""
    out = {}
    residual = {w: c for w, c in tensor.items() if c != 0}
    for w, c in list(residual.items()):
        if any(w[i] > w[i + 1] for i in range(len(w) - 1)):
            continue
        gw = _run_length(w)
        if any(k > 1 and A.degrees[i] % 2 for i, k in gw):
            raise GammaError("tensor element does not lie in Γ(V)")
        out[gw] = c
        for w2, m in A.expand(gw).items():
            v = residual.get(w2, Fraction(0)) - c * m
            if v == 0:
                residual.pop(w2, None)
            else:
                residual[w2] = v
    if residual:
        raise GammaError("tensor element does not lie in Γ(V)")
    return out


def _run_length(mono) -> tuple:
    out = []
    i = 0
    while i < len(mono):
        j = i
        while j < len(mono) and mono[j] == mono[i]:
            j += 1
        out.append((mono[i], j - i))
        i = j
    return tuple(out)


# ---------------------------------------------------------------------------
# Γ-morphism / Γ-derivation detectors
# ---------------------------------------------------------------------------

def apply_map(f: GradedMap, src: GammaAlgebra, tgt: GammaAlgebra,
              elem: dict) -> dict:
    """Apply a per-degree matrix map to a homogeneous element."""
    n = src.element_degree(elem)
    if n is None:
        return {}
    if not (0 <= n + f.degree <= tgt.n_max):
        return {}
    return tgt.from_vector(n + f.degree, f.apply(n, src.to_vector(elem, n)))


def is_gamma_morphism(f: GradedMap, src: GammaAlgebra, tgt: GammaAlgebra):
    """(True, None) if f is an algebra map respecting all γ^k, else a witness.

    Checked on basis words within the window: multiplicativity on pairs and
    f(γ^k(w)) = γ^k(f(w)) for even-degree words w, k ≥ 2.  Witness is
    ("product", w1, w2) or ("gamma", w, k).
    """
    ring = f.ring
    if f.degree != 0:
        raise GammaError("Γ-morphism must have degree 0")
    one_img = apply_map(f, src, tgt, {(): ring.one})
    if one_img != {(): ring.one}:
        return False, ("unit", (), 0)
    for n1 in range(1, src.n_max + 1):
        for w1 in src.words(n1):
            for n2 in range(n1, src.n_max + 1 - n1):
                for w2 in src.words(n2):
                    lhs = apply_map(f, src, tgt,
                                    src.mul({w1: ring.one}, {w2: ring.one}))
                    rhs = tgt.mul(apply_map(f, src, tgt, {w1: ring.one}),
                                  apply_map(f, src, tgt, {w2: ring.one}))
                    if lhs != rhs:
                        return False, ("product", w1, w2)
    for n in range(2, src.n_max + 1, 2):
        for w in src.words(n):
            for k in range(2, src.n_max // n + 1):
                lhs = apply_map(f, src, tgt,
                                src.divided_power({w: ring.one}, k))
                rhs = tgt.divided_power(
                    apply_map(f, src, tgt, {w: ring.one}), k)
                if lhs != rhs:
                    return False, ("gamma", w, k)
    return True, None


def is_gamma_derivation(theta: GradedMap, A: GammaAlgebra):
    """(True, None) if theta satisfies Leibniz and the divided-power rule
    θ(γ^k(a)) = θ(a)·γ^{k-1}(a) on basis words; else (False, witness)."""
    ring = theta.ring
    deg = theta.degree

    def th(elem):
        return apply_map(theta, A, A, elem)

    for n1 in range(1, A.n_max + 1):
        for w1 in A.words(n1):
            for n2 in range(n1, A.n_max + 1 - n1):
                for w2 in A.words(n2):
                    a, b = {w1: ring.one}, {w2: ring.one}
                    lhs = th(A.mul(a, b))
                    sign = ring.of(-1 if (deg * n1) % 2 else 1)
                    rhs = A.mul(th(a), b)
                    for gw, c in A.mul(a, th(b)).items():
                        v = ring.add(rhs.get(gw, ring.zero),
                                     ring.mul(sign, c))
                        if ring.is_zero(v):
                            rhs.pop(gw, None)
                        else:
                            rhs[gw] = v
                    if lhs != rhs:
                        return False, ("product", w1, w2)
    for n in range(2, A.n_max + 1, 2):
        for w in A.words(n):
            a = {w: ring.one}
            for k in range(2, A.n_max // n + 1):
                lhs = th(A.divided_power(a, k))
                rhs = A.mul(th(a), A.divided_power(a, k - 1))
                if lhs != rhs:
                    return False, ("gamma", w, k)
    return True, None


# ---------------------------------------------------------------------------
# The ΛV ⊗ ΓW pairing
# ---------------------------------------------------------------------------

def tensor_pairing_sign(degrees: list) -> int:
    """Sign of v_1..v_k w_1..w_k -> v_1 w_1 .. v_k w_k when |w_i| = |v_i|.

    w_i moves past v_{i+1}, ..., v_k.
    """
    sign = 1
    for i in range(len(degrees)):
        moved = sum(degrees[i + 1:])
        if (degrees[i] * moved) % 2:
            sign = -sign
    return sign


def lambda_gamma_pairing(ring, degrees, lam_word, gamma_expansion: dict):
    """⟨v_1···v_k, ω⟩ for a Λ-monomial (tuple of generator indices, the
    PBW order) against a tensor expansion of ω ∈ Γ(W), dual generators
    matched index to index."""
    coeff = gamma_expansion.get(lam_word)
    if coeff is None:
        return ring.zero
    sign = tensor_pairing_sign([degrees[i] for i in lam_word])
    return ring.mul(ring.of(sign), ring.of(coeff) if isinstance(coeff, int)
                    else coeff)


def pairing_matrix(ring, lam, G: GammaAlgebra, n: int) -> Matrix:
    """⟨ , ⟩ between ΛV_n (PBW basis of `lam`) and Γ(W)_n; rows = Λ basis.

    `lam` is a PbwAlgebra on an abelian Lie algebra with the same ordered
    generator degrees as G.
    """
    rows = lam.monomials(n)
    cols = G.words(n)
    m = Matrix.zeros(ring, len(rows), len(cols))
    for j, gw in enumerate(cols):
        exp = G.expand(gw)
        exp_ring = {w: ring.of(c) for w, c in exp.items()}
        for i, mono in enumerate(rows):
            m.a[i][j] = lambda_gamma_pairing(ring, G.degrees, mono, exp_ring)
    return m
