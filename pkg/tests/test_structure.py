"""Two-route Lie-restriction detectors, page Hopf structure, and the
enveloping-algebra shape of Bockstein pages."""

import random

import pytest

from bockstein.bss import bockstein_pages
from bockstein.lie import DgLie, PbwAlgebra, abelian
from bockstein.scalars import PrimeField, ZpLocal
from bockstein.structure import (PageAlgebra, StructureError, TensorSquareBss,
                                 _envelope_dims, differential_restricts_to_lie,
                                 hopf_morphism, is_lie_type,
                                 page_hopf_structure, verify_envelope_pages)

Z3 = ZpLocal(3)
F3 = PrimeField(3)


class TestRestriction:
    def test_zero_differential(self):
        alg = PbwAlgebra(abelian(Z3, 8, [("e", 1), ("f", 2)]))
        chk = differential_restricts_to_lie(alg)
        assert chk.verdict and chk.witness is None

    def test_abelian_restricting(self):
        L = DgLie(Z3, 8, [("e", 1), ("f", 2)], {}, {1: {0: 3}})
        chk = differential_restricts_to_lie(PbwAlgebra(L))
        assert chk.verdict

    def test_nonabelian_restricting(self):
        # dual route must be insensitive to the bracket
        L = DgLie(Z3, 8, [("x", 1), ("y", 1), ("z", 2), ("w", 3)],
                  {(0, 1): {2: 1}}, {3: {2: 1}})
        chk = differential_restricts_to_lie(PbwAlgebra(L))
        assert chk.verdict

    def test_frobenius_perturbation_detected(self):
        # over F_3, x^3 is primitive but not in the Lie part; both
        # detectors must reject, the dual one with a γ witness
        L = abelian(F3, 12, [("x", 2), ("b", 7)])
        alg = PbwAlgebra(L)
        d = alg.derivation(-1, {1: {(0, 0, 0): F3.one}})
        chk = differential_restricts_to_lie(alg, d)
        assert not chk.verdict
        assert chk.witness[0] == "b" and "x^3" in chk.witness[1]
        assert chk.dual_witness[0] == "gamma" and chk.dual_witness[2] == 3

    def test_non_derivation_rejected(self):
        alg = PbwAlgebra(abelian(Z3, 8, [("e", 1), ("f", 2)]))
        d = alg.differential()
        m = d.block(3).copy()
        m.a[0][0] = Z3.one          # corrupt a composite-monomial column
        d.set_block(3, m)
        with pytest.raises(StructureError):
            differential_restricts_to_lie(alg, d)

    def test_non_primitive_image_rejected(self):
        # over Z_(3) the decomposable x^3 is not primitive, so the input
        # is not a coalgebra derivation at all
        L = abelian(Z3, 12, [("x", 2), ("b", 7)])
        alg = PbwAlgebra(L)
        d = alg.derivation(-1, {1: {(0, 0, 0): Z3.one}})
        with pytest.raises(StructureError):
            differential_restricts_to_lie(alg, d)

    def test_random_agreement(self):
        # detector agreement is asserted inside the call; a disagreement
        # raises StructureError
        rng = random.Random(7)
        for _ in range(12):
            degs = sorted(rng.choice([1, 2, 2, 3, 4, 5, 6])
                          for _ in range(rng.randint(2, 3)))
            gens = [(f"g{i}", d) for i, d in enumerate(degs)]
            alg = PbwAlgebra(abelian(F3, 10, gens))
            images = {}
            for i, d in enumerate(degs):
                img = {}
                for j, dj in enumerate(degs):
                    if dj == d - 1 and rng.random() < 0.7:
                        img[(j,)] = F3.of(rng.randint(0, 2))
                # sometimes smuggle in a primitive p-th power
                for j, dj in enumerate(degs):
                    if dj % 2 == 0 and 3 * dj == d - 1 and rng.random() < 0.5:
                        img[(j, j, j)] = F3.one
                images[i] = {k: v for k, v in img.items() if v}
            d_op = alg.derivation(-1, images)
            chk = differential_restricts_to_lie(alg, d_op)
            expected = all(len(m) == 1 for img in images.values()
                           for m in img)
            assert chk.verdict == expected


def ul_abc(ring, n_max=14):
    """U L_ab(a, b, c) with |a| = 5, |b| = 6, |c| = 2."""
    return PbwAlgebra(abelian(ring, n_max, [("a", 5), ("b", 6), ("c", 2)]))


class TestHopfMorphism:
    def test_identity(self):
        alg = ul_abc(F3)
        phi = hopf_morphism(alg, alg,
                            {"a": {"a": 1}, "b": {"b": 1}, "c": {"c": 1}})
        chk = is_lie_type(phi)
        assert chk.verdict

    def test_frobenius_twist_not_lie_type(self):
        alg = ul_abc(F3, n_max=18)
        phi = hopf_morphism(alg, alg, {"a": {"a": 1}, "c": {"c": 1},
                                       "b": {"b": 1, (2, 2, 2): 1}})
        chk = is_lie_type(phi)
        assert not chk.verdict
        assert chk.witness[0] == "b" and "c^3" in chk.witness[1]
        assert chk.dual_witness[0] == "gamma" and chk.dual_witness[2] == 3

    def test_twist_rejected_over_local_ring(self):
        # over Z_(3) the binomial middle terms of Δ(c^3) survive, so
        # b ↦ b + c^3 is not even a coalgebra morphism
        alg = ul_abc(Z3, n_max=18)
        with pytest.raises(StructureError):
            hopf_morphism(alg, alg, {"a": {"a": 1}, "c": {"c": 1},
                                     "b": {"b": 1, (2, 2, 2): 1}})

    def test_bracket_relation_enforced(self):
        src = PbwAlgebra(DgLie(Z3, 8, [("x", 1), ("y", 1), ("z", 2)],
                               {(0, 1): {2: 1}}))
        tgt = PbwAlgebra(abelian(Z3, 8, [("x", 1), ("y", 1), ("z", 2)]))
        # forgetting the bracket cannot be an algebra morphism
        with pytest.raises(StructureError):
            hopf_morphism(src, tgt,
                          {"x": {"x": 1}, "y": {"y": 1}, "z": {"z": 1}})

    def test_lie_morphism_and_composition(self):
        src = ul_abc(F3)
        phi = hopf_morphism(src, src, {"a": {"a": 1},
                                       "b": {"b": 2}, "c": {"c": 1}})
        assert is_lie_type(phi).verdict
        comp = {}
        for i, img in phi.gen_images.items():
            acc = {}
            for mono, c in img.items():
                for m2, c2 in src.from_vector(
                        src.monomial_degree(mono),
                        phi.f.apply(src.monomial_degree(mono),
                                    src.to_vector({mono: c}, src.monomial_degree(mono)))).items():
                    acc[m2] = F3.add(acc.get(m2, F3.zero), c2)
            comp[i] = {k: v for k, v in acc.items() if v}
        assert is_lie_type(hopf_morphism(src, src, comp)).verdict


def example1_ul(n_max=12):
    L = DgLie(Z3, n_max, [("e", 1), ("f", 2)], {}, {1: {0: 3}})
    return PbwAlgebra(L)


class TestPageAlgebra:
    def test_first_page_is_mod_p_reduction(self):
        # p | ∂, so E^1 carries the product of UL ⊗ F_3
        alg = example1_ul()
        result = bockstein_pages(alg.as_complex(), 1)
        pa = page_hopf_structure(alg, result, 1)
        # each degree is 1-dimensional with representative a PBW monomial;
        # products of classes are classes of products
        prod = pa.product(1, [1], 2, [1])
        target = alg.to_vector(alg.mul(alg.gen(0), alg.gen(1)), 3)
        assert prod == result.class_of_chain(1, 3, target)

    def test_product_well_defined(self):
        alg = example1_ul()
        result = bockstein_pages(alg.as_complex(), 2)
        pa = PageAlgebra(alg, result, 2)
        ring = alg.ring
        # perturb a representative by 9·z and by a boundary d(3·x):
        # the page-2 class of the product must not move
        rep = result.page(2).classes[5][0].rep
        base = pa.product(5, [1], 6, [1])
        pert = list(rep)
        pert[0] = ring.add(pert[0], ring.of(9))
        bnd = result.complex.d.block(6).apply(
            [ring.of(3)] * alg.dim(6))
        pert = [ring.add(a, b) for a, b in zip(pert, bnd)]
        e1 = alg.from_vector(5, pert)
        e2 = pa._rep_elem(6, [1])
        vec = alg.to_vector(alg.mul(e1, e2), 11)
        assert result.class_of_chain(2, 11, vec) == base

    def test_coproduct_of_primitive(self):
        alg = example1_ul()
        result = bockstein_pages(alg.as_complex(), 1)
        pa = PageAlgebra(alg, result, 1)
        co = pa.coproduct(2, [1])
        pairs = pa.class_pairs(2)
        nonzero = {pairs[i] for i, c in enumerate(co) if c}
        # u ⊗ 1 + 1 ⊗ u only
        assert nonzero == {(0, 0, 0), (2, 0, 0)}

    def test_beta_leibniz(self):
        alg = example1_ul(n_max=14)
        result = bockstein_pages(alg.as_complex(), 2)
        tensor = TensorSquareBss(alg, 2)
        for r in (1, 2):
            pa = PageAlgebra(alg, result, r, tensor)
            page = result.page(r)
            degs = [n for n in page.degrees() if 1 <= n <= 6]
            for n1 in degs:
                for n2 in degs:
                    if n1 + n2 > pa.window:
                        continue
                    v1 = [1] * page.dim(n1)
                    v2 = [1] * page.dim(n2)
                    assert pa.beta_leibniz(n1, v1, n2, v2)


class TestVerifyEnvelopePages:
    def test_example1(self):
        L = DgLie(Z3, 20, [("e", 1), ("f", 2)], {}, {1: {0: 3}})
        rep = verify_envelope_pages(L, 3)
        assert rep.ok, rep.failures
        assert rep.primitive_dims[2] == {5: 1, 6: 1, 18: 1}
        assert rep.primitive_dims[3] == {17: 1, 18: 1}
        assert rep.page_dims[3] == {0: 1, 17: 1, 18: 1}

    def test_abelian_no_torsion(self):
        L = abelian(Z3, 10, [("x", 2), ("y", 3)])
        rep = verify_envelope_pages(L, 2)
        assert rep.ok, rep.failures
        assert rep.primitive_dims[1] == rep.primitive_dims[2]

    def test_three_generator_example(self):
        L = DgLie(Z3, 12, [("e", 1), ("f", 2), ("g", 2)], {}, {1: {0: 3}})
        rep = verify_envelope_pages(L, 2)
        assert rep.ok, rep.failures
        # E^1 primitives: e, f, g, plus the cubes of f and g
        assert rep.primitive_dims[1] == {1: 1, 2: 2, 6: 2}
        # on page 2 the pair (e, f) is gone; g and its cube remain
        assert rep.primitive_dims[2][2] == 1

    def test_envelope_counting(self):
        # base-3 digits: generators 2, 6, 18 with exponents < 3 fill in
        # every even degree exactly once
        dims = _envelope_dims(3, {1: 1, 2: 1, 6: 1, 18: 1}, 19)
        assert all(dims[n] == 1 for n in range(20))
