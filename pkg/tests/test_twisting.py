from fractions import Fraction

import pytest

from imverma.core_algebra import CENTRAL, El, build_affine
from imverma.heisenberg_fock import (
    StandardSpec, TrivialModule, fock_module, tensor_module,
)
from imverma.induced import BoxSpec, induce
from imverma.partitions import levi_zero_borel, natural_parabolic
from imverma.twisting import (
    TwistSlice, UbarWords, eta_backward, eta_forward, twist_vector,
    verify_intertwining,
)


@pytest.fixture(scope="module")
def a2():
    return build_affine("A2")


@pytest.fixture(scope="module")
def setup(a2):
    parab = natural_parabolic(a2, (0,), imaginary="full")
    charge = Fraction(1)
    lam = (Fraction(1, 3), Fraction(2, 5))
    inner = levi_zero_borel(a2, (0,))
    m_factor = induce(a2, inner, TrivialModule(a2, lam, 0, charge),
                      BoxSpec(2, 2, gen_window=2))
    perp = {j: parab.osc_pairs[j] for j in parab.osc_pairs
            if j not in parab.omega}
    s_factor = fock_module(a2, StandardSpec(), charge, depth=1, pairs=perp)
    v = tensor_module(parab, m_factor, s_factor, depth=2)
    m_mod = induce(a2, parab, v, BoxSpec(1, 1, gen_window=1))
    fel = twist_vector(a2, ((1, 0), 0))
    froot = (next(iter(fel.terms)).payload, next(iter(fel.terms)).n)
    words = UbarWords(m_mod)
    slc = TwistSlice(a2, v, fel, froot, 8)
    return parab, v, m_mod, words, fel, slc


def test_twist_vector_sides(a2):
    f = twist_vector(a2, ((1, 0), 0))
    (mode, c), = f.terms.items()
    assert mode.payload == (-1, 0) and mode.n == 0
    e = twist_vector(a2, ((1, 0), 0), side=-1)
    (mode, c), = e.terms.items()
    assert mode.payload == (1, 0) and mode.n == 0
    with pytest.raises(ValueError):
        twist_vector(a2, ((2, 0), 0))


def test_eta_forward_identity_factor(setup):
    _, v, m_mod, words, fel, slc = setup
    vk = v.keys()[0]
    for n in (1, 2, 3):
        out, ok = eta_forward(words, slc, n, (), vk)
        assert ok
        assert out == {((), (n, vk)): Fraction(1)}


def test_eta_series_two_terms(setup):
    # u a single generator with ad(f)(u) nonzero and ad(f)^2(u) = 0
    _, v, m_mod, words, fel, slc = setup
    vk = v.keys()[0]
    cand = None
    for g in m_mod.gens:
        powers, _ = words.ad_powers(fel, (g.index,))
        if len(powers) == 2:
            cand = g
            break
    assert cand is not None
    (ymono, coeff), = words.ad(fel, {(cand.index,): Fraction(1)})[0].items()
    out, ok = eta_forward(words, slc, 1, (cand.index,), vk)
    assert ok
    assert out == {((cand.index,), (1, vk)): Fraction(1),
                   (ymono, (2, vk)): -coeff}
    out2, _ = eta_forward(words, slc, 2, (cand.index,), vk)
    assert out2[(ymono, (3, vk))] == -2 * coeff  # binom(2, 1) = 2


def test_eta_backward_signs_all_plus(setup):
    _, v, m_mod, words, fel, slc = setup
    vk = v.keys()[0]
    cand = None
    for g in m_mod.gens:
        powers, _ = words.ad_powers(fel, (g.index,))
        if len(powers) == 2:
            cand = g
            break
    (ymono, coeff), = words.ad(fel, {(cand.index,): Fraction(1)})[0].items()
    back, ok = eta_backward(words, slc, (cand.index,), 1, vk)
    assert ok
    assert back == {1: {((cand.index,), vk): Fraction(1)},
                    2: {(ymono, vk): coeff}}


def test_roundtrip_both_ways(setup):
    _, v, m_mod, words, fel, slc = setup
    from imverma.heisenberg_fock import vec_iadd
    from imverma.twisting import localized_iadd
    for (mono, vkey) in m_mod.keys()[:40]:
        if len(mono) > 2:
            continue
        for n in (1, 2, 3):
            fwd, c1 = eta_forward(words, slc, n, mono, vkey)
            back = {}
            for (m2, (mexp, vk2)), c in fwd.items():
                got, _ = eta_backward(words, slc, m2, mexp, vk2)
                for e, vec in got.items():
                    localized_iadd(back, e, vec, c)
            back = {e: vec for e, vec in back.items() if vec}
            assert c1
            assert back == {n: {(mono, vkey): Fraction(1)}}


def test_ad_series_finite(setup):
    _, v, m_mod, words, fel, slc = setup
    for (mono, vkey) in m_mod.keys():
        powers, _ = words.ad_powers(fel, mono)
        assert len(powers) <= 2 * len(mono) + 1


def test_verify_intertwining_passes(a2, setup):
    parab, v, m_mod, words, fel, slc = setup
    rep = verify_intertwining(a2, parab, v, ((1, 0), 0),
                              BoxSpec(1, 1, gen_window=1),
                              n_max=2, sample_height=1, mode_bound=1)
    assert rep.ok
    assert rep.character_equal
    assert not rep.roundtrip_failures


def test_central_mode_scales_by_charge(a2, setup):
    parab, v, m_mod, words, fel, slc = setup
    from imverma.twisting import act_localized
    vk = v.keys()[0]
    loc = {1: {((), vk): Fraction(1)}}
    out, ok = act_localized(m_mod, words, fel, El.of(CENTRAL), loc, 8)
    assert ok
    assert out == {1: {((), vk): Fraction(1)}}  # charge is 1


def test_intertwining_trivial_sample_set(a2, setup):
    parab, v, m_mod, words, fel, slc = setup
    rep = verify_intertwining(a2, parab, v, ((1, 0), 0),
                              BoxSpec(1, 1, gen_window=1),
                              n_max=0, sample_height=0, mode_bound=0)
    assert rep.samples == 0
    assert rep.ok
