import random
from fractions import Fraction

import pytest

from imverma.core_algebra import El, build_affine, cartan_mode, real_mode
from imverma.heisenberg_fock import StandardSpec, TrivialModule, fock_module
from imverma.induced import BoxSpec, induce
from imverma.partitions import levi_nat_borel, natural_parabolic
from imverma.wakimoto import (
    Template, WeylPoly, build_realization, character_match,
    imaginary_wakimoto_functor, match_to_verma, seed_keys, verify_homomorphism,
    wakimoto_module, weyl_product,
)


@pytest.fixture(scope="module")
def a1():
    return build_affine("A1")


@pytest.fixture(scope="module")
def a2():
    return build_affine("A2")


# -- the explicit Weyl algebra -------------------------------------------------

def test_weyl_product_contraction():
    al = (1,)
    p = weyl_product(WeylPoly.a(al, 1), WeylPoly.astar(al, -1))
    want = weyl_product(WeylPoly.astar(al, -1), WeylPoly.a(al, 1)) \
        + WeylPoly.const(1)
    assert p == want


def test_weyl_product_independent_variables():
    al, be = (1, 0), (0, 1)
    p = weyl_product(WeylPoly.a(al, 1), WeylPoly.astar(be, -1))
    assert p == weyl_product(WeylPoly.astar(be, -1), WeylPoly.a(al, 1))
    assert len(p.terms) == 1


def test_weyl_product_already_normal_ordered():
    al = (1,)
    p = weyl_product(WeylPoly.astar(al, 0), WeylPoly.astar(al, 0))
    p = weyl_product(p, WeylPoly.a(al, 0))
    assert list(p.terms) == [((((1,), 0), ((1,), 0)), (((1,), 0),), ())]


def test_weyl_product_associative_random():
    rng = random.Random(3)
    alphas = [(1, 0), (0, 1), (1, 1)]

    def rand_poly():
        out = WeylPoly.const(0)
        for _ in range(rng.randrange(1, 4)):
            kind = rng.choice(["a", "astar", "cur", "const"])
            al = rng.choice(alphas)
            n = rng.randrange(-2, 3)
            c = Fraction(rng.randrange(-3, 4), rng.randrange(1, 4))
            if kind == "a":
                out = out + WeylPoly.a(al, n) * c
            elif kind == "astar":
                out = out + WeylPoly.astar(al, n) * c
            elif kind == "cur":
                out = out + WeylPoly.cur(rng.randrange(2), n) * c
            else:
                out = out + WeylPoly.const(c)
        return out

    for _ in range(40):
        p, q, r = rand_poly(), rand_poly(), rand_poly()
        assert weyl_product(weyl_product(p, q), r) \
            == weyl_product(p, weyl_product(q, r))


# -- the realization -----------------------------------------------------------

def test_pi_f_is_single_annihilator(a1):
    wm = build_realization(a1, (), Fraction(1))
    alpha = a1.finite_positive[0]
    neg = tuple(-c for c in alpha)
    tpls = wm.templates[("re", neg)]
    assert tpls == [Template((), ("a", alpha), Fraction(-1))]


def test_pi_h_shape(a1):
    # one bilinear astar-a sum plus the Cartan current, no anomaly
    wm = build_realization(a1, (), Fraction(1))
    tpls = wm.templates[("h", 0)]
    tails = sorted(t.tail[0] for t in tpls)
    assert tails == ["a", "cur"]
    assert all(t.tail != ("one",) for t in tpls)


def test_pi_e_has_anomaly_proportional_to_charge(a1):
    for charge in (0, 2, Fraction(-1, 3)):
        wm = build_realization(a1, (), Fraction(charge))
        alpha = a1.finite_positive[0]
        anomaly = [t for t in wm.templates[("re", alpha)] if t.tail == ("one",)]
        if charge == 0:
            assert not anomaly
        else:
            assert len(anomaly) == 1
            assert anomaly[0].coeff == -Fraction(charge)
            assert anomaly[0].slots == ((alpha, True),)


def test_dump_contains_central_charge(a1):
    wm = build_realization(a1, (), Fraction(5, 7))
    dump = wm.dump(1, 1)
    assert dump["pi(c)"] == "5/7"


def test_nilpotency_guard(a2):
    # building any simply-laced realization terminates (guard would raise)
    build_realization(a2, (0,), Fraction(1))
    build_realization(a2, (), Fraction(-2))


def test_radical_kills_generator(a1, a2):
    for alg in (a1, a2):
        v = fock_module(alg, StandardSpec(), 1,
                        lam_fin=(Fraction(1, 3),) * alg.rank, depth=2)
        w = wakimoto_module(alg, (), v, 1)
        gen = w.generator_key()
        for beta in alg.finite_positive:
            for n in range(-2, 3):
                assert w.act_element(El.of(real_mode(beta, n)), gen) == {}


def test_d_grading(a1):
    v = fock_module(a1, StandardSpec(), 1, lam_fin=(Fraction(1, 3),),
                    lam_d=Fraction(2), depth=2)
    w = wakimoto_module(a1, (), v, 1)
    alpha = a1.finite_positive[0]
    key = (((alpha, -1),), v.keys()[0])
    from imverma.core_algebra import DERIVATION
    assert w.act_element(El.of(DERIVATION), key) == {key: Fraction(1)}  # 2 - 1


@pytest.mark.parametrize("charge", [0, 1, -2])
def test_homomorphism_a1(a1, charge):
    v = fock_module(a1, StandardSpec(), charge, lam_fin=(Fraction(1, 3),), depth=2)
    w = wakimoto_module(a1, (), v, charge)
    seeds = seed_keys(a1, (), v, degree=3, window=2, v_depth=2)
    rep = verify_homomorphism(w, 2, seeds)
    assert rep.ok, rep.violations[:3]


def test_homomorphism_a2_spot(a2):
    v = fock_module(a2, StandardSpec(), 1,
                    lam_fin=(Fraction(1, 3), Fraction(2, 5)), depth=1)
    w = wakimoto_module(a2, (), v, 1)
    seeds = seed_keys(a2, (), v, degree=2, window=1, v_depth=1)
    rep = verify_homomorphism(w, 1, seeds)
    assert rep.ok, rep.violations[:3]


def test_character_and_match_a1(a1):
    v = fock_module(a1, StandardSpec(), 1, lam_fin=(Fraction(1, 3),), depth=2)
    m = induce(a1, natural_parabolic(a1, (), imaginary="full"), v,
               BoxSpec(2, 2, gen_window=2))
    w = wakimoto_module(a1, (), v, 1)
    assert character_match(w, m)
    rep = match_to_verma(w, m)
    assert rep.isomorphism
    gen_block = rep.blocks[((0,), 0)]
    assert gen_block["matrix"] == [[Fraction(1)]]


def test_match_reports_blocks_at_charge_zero(a1):
    # the carrier map exists as a graded map even at charge 0
    v = fock_module(a1, StandardSpec(), 0, lam_fin=(Fraction(1, 3),), depth=2)
    m = induce(a1, natural_parabolic(a1, (), imaginary="full"), v,
               BoxSpec(2, 2, gen_window=2))
    w = wakimoto_module(a1, (), v, 0)
    rep = match_to_verma(w, m)
    assert rep.character_match
    assert rep.isomorphism


def test_wakimoto_functor_on_levi_verma(a2):
    # IW applied to the Verma module of the Levi character-matches induction
    charge = Fraction(1)
    lam = (Fraction(1, 3), Fraction(2, 5))
    inner = levi_nat_borel(a2, (0,))
    v = induce(a2, inner, TrivialModule(a2, lam, 0, charge),
               BoxSpec(1, 1, gen_window=1))
    parab = natural_parabolic(a2, (0,), imaginary="full")
    m = induce(a2, parab, v, BoxSpec(1, 1, gen_window=1))
    functor = imaginary_wakimoto_functor(a2, (0,), charge)
    w = functor(v)
    assert character_match(w, m)
    rep = match_to_verma(w, m)
    assert rep.isomorphism


def test_wakimoto_functor_zero_module(a1):
    class Empty(TrivialModule):
        def __init__(self, alg):
            super().__init__(alg, (0,) * alg.rank, 0, 1)
            self._keys = []

        def keys(self):
            return []

    w = wakimoto_module(a1, (), Empty(a1), 1)
    assert w.v_mod.keys() == []
