import random
from fractions import Fraction

import pytest

from imverma.core_algebra import DERIVATION, El, build_affine, cartan_mode, real_mode
from imverma.heisenberg_fock import (
    StandardSpec, TrivialModule, fock_module, tensor_module,
)
from imverma.induced import (
    BoxSpec, cyclicity_certificate, induce, only_generator_singular,
    singular_vectors,
)
from imverma.partitions import (
    levi_zero_borel, natural_borel, natural_parabolic,
)


@pytest.fixture(scope="module")
def a1():
    return build_affine("A1")


@pytest.fixture(scope="module")
def a2():
    return build_affine("A2")


def borel_verma(a1, charge, lam_h=Fraction(1, 3), depth=3, height=3, window=None,
                absd=None):
    """Imaginary Verma module presented from the natural Borel with V = C_lambda."""
    parab = natural_borel(a1)
    v = TrivialModule(a1, (lam_h,), 0, charge)
    return induce(a1, parab, v,
                  BoxSpec(depth, height, gen_window=window, abs_depth=absd))


def loop_verma(a1, charge, lam_h=Fraction(1, 3), depth=3, height=3, window=None,
               absd=None):
    """The same module presented via the Levi G + H with V a Fock space."""
    parab = natural_parabolic(a1, (), imaginary="full")
    v = fock_module(a1, StandardSpec(), charge, lam_fin=(lam_h,), depth=depth)
    return induce(a1, parab, v,
                  BoxSpec(depth, height, gen_window=window, abs_depth=absd))


def test_character_examples(a1):
    m = loop_verma(a1, 1, depth=2, height=2)
    ch = m.character()
    assert ch[((0,), 0)] == 1          # the generator line
    assert ch[((0,), -1)] == 1         # h_-1 v
    assert ch[((-1,), -1)] == 2        # f_-1 v and f_0 h_-1 v
    assert ((0,), 1) not in ch         # nothing above lambda in the delta direction


def test_two_presentations_same_character(a1):
    m1 = borel_verma(a1, 1, depth=2, height=2, window=2)
    m2 = loop_verma(a1, 1, depth=2, height=2, window=2)
    c1, c2 = m1.character(), m2.character()
    for d in set(c1) | set(c2):
        fin, lev = d
        # compare only inside the common box: the Borel presentation spends
        # abs-depth on its oscillator factors the Fock presentation keeps in V
        if abs(lev) <= 2 and all(abs(x) <= 2 for x in fin):
            assert c1.get(d, 0) == c2.get(d, 0), d


def test_act_examples_borel_presentation(a1):
    m = borel_verma(a1, Fraction(1), depth=3, height=3)
    vkey = m.v_mod.keys()[0]
    # the single level -1 oscillator generator is (h/2) (x) t^-1
    osc = [g for g in m.gens if not any(g.fin) and g.level == -1][0]
    key = ((osc.index,), vkey)
    # act(h (x) t, h_-1 v) = 2 a v, stated here on the generator h_-1 = 2 osc
    vec, clean = m.act(El.of(cartan_mode(0, 1)) * 2, key)
    assert clean
    assert vec == {m.generator_key(): Fraction(2)}
    # act(e_0, f_-1 v) = h_-1 v = 2 osc v
    alpha = a1.finite_positive[0]
    fgen = [g for g in m.gens if g.fin == tuple(-c for c in alpha) and g.level == -1][0]
    vec, clean = m.act(El.of(real_mode(alpha, 0)), ((fgen.index,), vkey))
    assert clean
    assert vec == {key: Fraction(2)}
    # act(d, h_-1 v) = (lambda(d) - 1) h_-1 v
    vec, _ = m.act(El.of(DERIVATION), key)
    assert vec == {key: Fraction(-1)}


def test_pure_v_killed_by_radical(a1):
    m = borel_verma(a1, 1)
    alpha = a1.finite_positive[0]
    gen = m.generator_key()
    for n in range(-3, 4):
        vec, clean = m.act(El.of(real_mode(alpha, n)), gen)
        assert clean and vec == {}


def test_u_height(a1, a2):
    m = borel_verma(a1, 1)
    vkey = m.v_mod.keys()[0]
    alpha = a1.finite_positive[0]
    neg = tuple(-c for c in alpha)
    f_m1 = [g for g in m.gens if g.fin == neg and g.level == -1][0]
    f_0 = [g for g in m.gens if g.fin == neg and g.level == 0][0]
    osc = [g for g in m.gens if not any(g.fin) and g.level == -1][0]
    assert m.u_height((tuple(sorted((f_m1.index, f_0.index))), vkey)) == 2
    assert m.u_height(((), vkey)) == 0
    assert m.u_height(((osc.index,), vkey)) == 0
    with pytest.raises(ValueError):
        m.u_height({((f_0.index,), vkey): Fraction(1), ((), vkey): Fraction(1)})


def test_u_height_a2_omega1(a2):
    parab = natural_parabolic(a2, (0,), imaginary="full")
    v = fock_module(a2, StandardSpec(), 1, depth=2)
    m = induce(a2, parab, v, BoxSpec(2, 2))
    vkey = v.keys()[0]
    # both ubar families have alpha_2-coefficient one
    for g in m.gens:
        assert g.uheight == 1, g
    two = tuple(sorted((m.gens[0].index, m.gens[1].index)))
    assert m.u_height((two, vkey)) == 2


def test_singular_vectors_charge_zero_witness(a1):
    m = loop_verma(a1, 0, depth=2, height=2, window=3)
    cert = singular_vectors(m, depth=1, height=1, mode_bound=2)
    # h_-1 v (the depth-1 Fock key) must appear among the singular weights
    assert [[0], -1] in cert.extra["singular_weights"]
    assert not only_generator_singular(cert)


def test_singular_vectors_charge_one_small_box(a1):
    m = loop_verma(a1, 1, depth=5, height=2, window=5, absd=5)
    cert = singular_vectors(m, depth=1, height=1, mode_bound=2)
    assert cert.conclusive
    assert only_generator_singular(cert)


def test_cyclicity_small_box(a1):
    m = loop_verma(a1, 1, depth=5, height=2, window=5, absd=5)
    cert = cyclicity_certificate(m, depth=1, height=1, mode_bound=2)
    assert cert.extra["all_cyclic"], cert.extra["failures"]
    gen_entry = [e for e in cert.weights if e["key"] == repr(m.generator_key())][0]
    assert gen_entry["word"] == []


def test_cyclicity_fails_on_singular_vector(a1):
    m = loop_verma(a1, 0, depth=4, height=1, window=4, absd=4)
    cert = cyclicity_certificate(m, depth=1, height=1, mode_bound=2, max_nodes=400)
    assert not cert.extra["all_cyclic"]


def make_tensor_module(a2, charge=Fraction(1)):
    parab = natural_parabolic(a2, (0,), imaginary="full")
    inner = levi_zero_borel(a2, (0,))
    lam = (Fraction(1, 3), Fraction(2, 5))
    m_factor = induce(a2, inner, TrivialModule(a2, lam, 0, charge),
                      BoxSpec(2, 2, gen_window=2))
    perp_pairs = {j: parab.osc_pairs[j] for j in parab.osc_pairs
                  if j not in parab.omega}
    s_factor = fock_module(a2, StandardSpec(), charge, depth=2, pairs=perp_pairs)
    v = tensor_module(parab, m_factor, s_factor, depth=2)
    return induce(a2, parab, v, BoxSpec(3, 2, gen_window=3, abs_depth=3,
                                        finite_caps=(4, 2)))


def test_tensor_induced_builds(a2):
    m = make_tensor_module(a2)
    gen = m.generator_key()
    assert gen in set(m.keys())
    ch = m.character()
    assert ch[((0, 0), 0)] == 1
    # radical kills the generator
    for fin in [(0, 1), (1, 1)]:
        for n in (-1, 0, 1):
            vec, clean = m.act(El.of(real_mode(fin, n)), gen)
            assert clean and vec == {}


def test_pbw_oracle_commutators(a1):
    """act(x, act(y, b)) - act(y, act(x, b)) = act([x, y], b) on clean triples."""
    m = loop_verma(a1, 1, depth=4, height=2, window=4, absd=5)
    rng = random.Random(11)
    modes = a1.basis_modes(2)
    keys = m.keys()
    checked = 0
    for _ in range(200):
        x = El.of(rng.choice(modes))
        y = El.of(rng.choice(modes))
        b = rng.choice(keys)
        vy, c1 = m.act(y, b)
        vx, c2 = m.act(x, b)
        lhs1, c3 = m.act_vector(x, vy)
        lhs2, c4 = m.act_vector(y, vx)
        rhs, c5 = m.act_vector(a1.bracket(x, y), {b: Fraction(1)})
        if not (c1 and c2 and c3 and c4 and c5):
            continue
        lhs = dict(lhs1)
        for k, c in lhs2.items():
            v = lhs.get(k, 0) - c
            if v:
                lhs[k] = v
            else:
                lhs.pop(k, None)
        assert lhs == rhs, (x, y, b)
        checked += 1
    assert checked > 50


def test_pbw_oracle_tensor_case(a2):
    m = make_tensor_module(a2)
    rng = random.Random(5)
    modes = a2.basis_modes(1)
    keys = m.keys()
    checked = 0
    for _ in range(250):
        x = El.of(rng.choice(modes))
        y = El.of(rng.choice(modes))
        b = rng.choice(keys)
        vy, c1 = m.act(y, b)
        vx, c2 = m.act(x, b)
        lhs1, c3 = m.act_vector(x, vy)
        lhs2, c4 = m.act_vector(y, vx)
        rhs, c5 = m.act_vector(a2.bracket(x, y), {b: Fraction(1)})
        if not (c1 and c2 and c3 and c4 and c5):
            continue
        lhs = dict(lhs1)
        for k, c in lhs2.items():
            v = lhs.get(k, 0) - c
            if v:
                lhs[k] = v
            else:
                lhs.pop(k, None)
        assert lhs == rhs, (x, y, b)
        checked += 1
    assert checked > 40
