"""Cochains (ΛV, d0 + d1) and chains (Γ(sL), ∂0 + ∂1) on a DGL.

V is the dual of sL: one generator v_x of degree |x| + 1 per Lie generator
x.  The linear part d0 is dual to ∂ via ⟨d0 v, sx⟩ = (-1)^{|v|}⟨v, s∂x⟩;
the quadratic part d1 is dual to the bracket via
⟨d1 v, sx·sy⟩ = (-1)^{|sy|}⟨v, s[x,y]⟩, solved against the word-length-two
block of the Λ/Γ pairing.  Chains are obtained by dualizing blockwise
through the same pairing, which keeps the two complexes strictly adjoint:
⟨a, ∂ω⟩ = (-1)^{|a|}⟨d a, ω⟩.
"""

from __future__ import annotations

from dataclasses import dataclass

from .gamma import GammaAlgebra, pairing_matrix
from .graded import (ComplexError, FieldHomology, GradedChainComplex,
                     GradedMap, induced_map)
from .lie import DgLie, LieError, PbwAlgebra, abelian
from .scalars import Matrix


@dataclass
class CochainAlgebra:
    """Free commutative cochain algebra: ΛW with a degree +1 derivation."""

    algebra: PbwAlgebra
    d: GradedMap

    @property
    def ring(self):
        return self.algebra.ring

    @property
    def n_max(self):
        return self.algebra.n_max


@dataclass
class CceCochains(CochainAlgebra):
    L: DgLie = None
    d0: GradedMap = None
    d1: GradedMap = None


@dataclass
class CceChains:
    L: DgLie
    algebra: GammaAlgebra
    d: GradedMap
    d0: GradedMap
    d1: GradedMap

    def as_complex(self) -> GradedChainComplex:
        return GradedChainComplex(self.algebra.basis, self.d,
                                  self.algebra.ring)


def free_cochain_algebra(ring, n_max, generators, d_images=None,
                         check=True) -> CochainAlgebra:
    """(ΛW, d) from generator degrees and d on generators (element dicts,
    keyed like PbwAlgebra.element specs)."""
    lam = PbwAlgebra(abelian(ring, n_max, generators))
    images = {}
    for key, elem in (d_images or {}).items():
        i = lam.L.index[key] if isinstance(key, str) else key
        images[i] = lam.element(elem) if not _is_elem(elem) else elem
    d = lam.derivation(1, images)
    if check:
        _check_square_zero(d, n_max)
    return CochainAlgebra(lam, d)


def _is_elem(x) -> bool:
    return isinstance(x, dict) and all(isinstance(k, tuple) for k in x)


def _check_square_zero(d: GradedMap, n_max: int):
    dd = d.compose(d)
    for n in sorted(dd.blocks):
        if n + 2 <= n_max and not dd.block(n).is_zero():
            raise ComplexError(f"d∘d ≠ 0 at degree {n}")


def cochains(L: DgLie) -> CceCochains:
    """The Cartan-Chevalley-Eilenberg-Cartan cochain algebra of a DGL."""
    bad = L.validate()
    if bad:
        raise LieError("invalid DgLie: " + "; ".join(bad))
    ring = L.ring
    n_max = L.n_max
    vgens = [(f"v{name}", deg + 1) for name, deg in zip(L.names, L.degrees)]
    lam = PbwAlgebra(abelian(ring, n_max, vgens))
    sgamma = GammaAlgebra(ring, n_max,
                          [(f"s{name}", deg + 1)
                           for name, deg in zip(L.names, L.degrees)])

    # d0 v_x = (-1)^{|v_x|} Σ_y (∂y)_x v_y
    d0_images = {}
    for x in range(L.n_gens()):
        vdeg = L.degrees[x] + 1
        img = {}
        for y in range(L.n_gens()):
            c = L.d_gen.get(y, {}).get(x)
            if c is not None:
                s = ring.of(-1 if vdeg % 2 else 1)
                img[(y,)] = ring.mul(s, c)
        if img:
            d0_images[x] = img

    # d1 v_z solved from its pairings against Γ²(sL)
    d1_images = {}
    for z in range(L.n_gens()):
        n = L.degrees[z] + 2       # degree of d1 v_z = |v_z| + 1
        if n > n_max:
            continue
        lam2 = [i for i, mono in enumerate(lam.monomials(n))
                if len(mono) == 2]
        if not lam2:
            continue
        gamma_words = sgamma.words(n)
        rhs = [ring.zero] * len(gamma_words)
        nonzero = False
        for j, gw in enumerate(gamma_words):
            if sum(k for _, k in gw) != 2:
                continue
            if len(gw) == 2:
                (x, _), (y, _) = gw
                # the gamma word is the product sx·sy itself
                val = L.bracket_gens(x, y).get(z, ring.zero)
                sy = L.degrees[y] + 1
                val = ring.mul(ring.of(-1 if sy % 2 else 1), val)
            else:
                # γ²(sx) = (sx·sx)/2
                (x, _k) = gw[0]
                val = L.bracket_gens(x, x).get(z, ring.zero)
                sx = L.degrees[x] + 1
                val = ring.mul(ring.of(-1 if sx % 2 else 1), val)
                val = ring.div(val, ring.of(2))
            if not ring.is_zero(val):
                rhs[j] = val
                nonzero = True
        if not nonzero:
            continue
        A = pairing_matrix(ring, lam, sgamma, n)
        # restrict to the word-length-2 block (pairing vanishes across
        # lengths, and gamma words of length 2 sit at the same indices)
        sub = Matrix(ring, len(lam2), len(lam2),
                     [[A.a[i][j] for j in lam2] for i in lam2])
        b = [rhs[j] for j in lam2]
        coeffs = sub.transpose().solve(b)
        if coeffs is None:
            raise ComplexError("bracket not dualizable (pairing degenerate)")
        img = {}
        for c, i in zip(coeffs, lam2):
            if not ring.is_zero(c):
                img[lam.monomials(n)[i]] = c
        d1_images[z] = img

    d0 = lam.derivation(1, d0_images)
    d1 = lam.derivation(1, d1_images)
    d = d0 + d1
    _check_square_zero(d, n_max)
    return CceCochains(lam, d, L, d0, d1)


def chains(L: DgLie, co: CceCochains | None = None) -> CceChains:
    """Γ(sL) with the differential adjoint to the cochain differential."""
    if co is None:
        co = cochains(L)
    ring = L.ring
    n_max = L.n_max
    sgamma = GammaAlgebra(ring, n_max,
                          [(f"s{name}", deg + 1)
                           for name, deg in zip(L.names, L.degrees)])
    lam = co.algebra
    pairings = {n: pairing_matrix(ring, lam, sgamma, n)
                for n in range(n_max + 1) if sgamma.dim(n) > 0}

    def dual_block(dmap, n):
        # ⟨a, ∂ω⟩ = (-1)^{n-1} ⟨d a, ω⟩ for a of degree n-1, ω of degree n
        if sgamma.dim(n) == 0 or sgamma.dim(n - 1) == 0:
            return None
        D = dmap.block(n - 1)
        if D.is_zero():
            return None
        m = pairings[n - 1].inverse() * D.transpose() * pairings[n]
        if (n - 1) % 2:
            m = m.scaled(ring.neg(ring.one))
        return m

    parts = []
    for dmap in (co.d0, co.d1, co.d):
        g = GradedMap(sgamma.basis, sgamma.basis, -1, ring)
        for n in range(1, n_max + 1):
            m = dual_block(dmap, n)
            if m is not None:
                g.set_block(n, m)
        parts.append(g)
    p0, p1, pd = parts
    GradedChainComplex(sgamma.basis, pd, ring)   # validates ∂∂ = 0
    return CceChains(L, sgamma, pd, p0, p1)


def verify_quasi_iso(gen_images: dict, src: CochainAlgebra,
                     tgt: CochainAlgebra, window: int | None = None):
    """Check a generator assignment extends to a cochain quasi-isomorphism.

    Works over a field.  Returns (True, report) or (False, reason);
    homology is compared in degrees ≤ window (default n_max - 1, the top
    degree being distorted by truncation).
    """
    ring = src.ring
    if not ring.is_field:
        raise ComplexError("quasi-isomorphism check runs over a field")
    if window is None:
        window = src.n_max - 1
    images = {}
    for key, elem in gen_images.items():
        i = src.algebra.L.index[key] if isinstance(key, str) else key
        images[i] = (tgt.algebra.element(elem) if not _is_elem(elem)
                     else elem)
    m = src.algebra.algebra_map(tgt.algebra, images)
    lhs = tgt.d.compose(m)
    rhs = m.compose(src.d)
    for n in range(window):
        if lhs.block(n).a != rhs.block(n).a:
            return False, f"not a cochain map at degree {n}"
    H_src = FieldHomology(src.algebra.basis, src.d)
    H_tgt = FieldHomology(tgt.algebra.basis, tgt.d)
    ind = induced_map(m, H_src, H_tgt)
    dims = {}
    for n in range(window + 1):
        a, b = H_src.dim(n), H_tgt.dim(n)
        if a != b or ind[n].rank() != a:
            return False, (f"H^{n}(m) is not an isomorphism: "
                           f"dims {a} -> {b}, rank {ind[n].rank()}")
        dims[n] = a
    return True, {"window": window, "dims": dims}
