import itertools
from fractions import Fraction

import pytest

from imverma.core_algebra import (
    CENTRAL, DERIVATION, IMAGINARY, NOT_A_ROOT, REAL,
    El, Root, build_affine, cartan_mode, parse_cartan_type, real_mode,
)


def norm2_vectors(cartan, bound=2):
    """Independent oracle: all lattice vectors of squared length 2.

    For simply-laced types these are exactly the roots; coefficients of any
    root over the simple roots are bounded by 2 for the ranks tested here.
    """
    n = len(cartan)
    found = []
    for c in itertools.product(range(-bound, bound + 1), repeat=n):
        q = sum(c[i] * cartan[i][j] * c[j] for i in range(n) for j in range(n))
        if q == 2:
            found.append(c)
    return sorted(found)


def test_root_counts():
    assert len(build_affine("A1").finite_roots) == 2
    assert len(build_affine("A2").finite_roots) == 6
    assert len(build_affine("D4").finite_roots) == 24  # 2 * 4 * 3
    assert len(build_affine("A3").finite_roots) == 12


@pytest.mark.parametrize("label", ["A1", "A2", "A3", "D4"])
def test_roots_match_norm2_oracle(label):
    alg = build_affine(label)
    assert list(alg.finite_roots) == norm2_vectors(alg.cartan)


def test_unsupported_types_rejected():
    for bad in ["B2", "C3", "F4", "G2", "E9", "D3", "A0"]:
        with pytest.raises(ValueError):
            build_affine(bad)


def test_cartan_type_parse():
    assert parse_cartan_type("E6").rank == 6
    with pytest.raises(ValueError):
        parse_cartan_type("X7")


def test_bracket_derivation_and_center():
    alg = build_affine("A1")
    alpha = alg.finite_positive[0]
    e3 = El.of(real_mode(alpha, 3))
    assert alg.bracket(El.of(DERIVATION), e3) == 3 * e3
    for m in alg.basis_modes(2):
        assert not alg.bracket(El.of(CENTRAL), El.of(m))


def test_loop_bracket_central_term_a1():
    # [h (x) t, h (x) t^-1] = (h,h) c = 2c
    alg = build_affine("A1")
    h1 = El.of(cartan_mode(0, 1))
    hm1 = El.of(cartan_mode(0, -1))
    assert alg.bracket(h1, hm1) == El.of(CENTRAL, 2)


def test_chevalley_sl2_triple():
    alg = build_affine("A1")
    alpha = alg.finite_positive[0]
    e = El.of(real_mode(alpha, 0))
    f = El.of(real_mode(tuple(-c for c in alpha), 0))
    h = El.of(cartan_mode(0, 0))
    assert alg.bracket(e, f) == h
    assert alg.bracket(h, e) == 2 * e
    assert alg.bracket(h, f) == -2 * f


def test_form_examples():
    alg = build_affine("A2")
    for alpha in alg.finite_positive:
        xa = El.of(real_mode(alpha, 0))
        xma = El.of(real_mode(tuple(-c for c in alpha), 0))
        assert alg.form(xa, xma) == 1
        assert alg.form(xa, xa) == 0
    for i in range(2):
        for j in range(2):
            assert alg.form(El.of(cartan_mode(i, 0)), El.of(cartan_mode(j, 0))) \
                == alg.cartan[i][j]
    assert alg.form(El.of(CENTRAL), El.of(DERIVATION)) == 1
    assert alg.form(El.of(DERIVATION), El.of(DERIVATION)) == 0


def test_classify_root():
    alg = build_affine("A1")
    alpha = alg.finite_positive[0]
    assert alg.classify_root(Root(alpha, 3)) == REAL
    assert alg.classify_root(Root((0,), 2)) == IMAGINARY
    assert alg.classify_root(Root((0,), 0)) == NOT_A_ROOT
    assert alg.classify_root(Root((2,), 0)) == NOT_A_ROOT


def test_roots_in_box_counts():
    alg1 = build_affine("A1")
    # 2 finite roots at 3 levels each, plus +-delta
    assert len(alg1.roots_in_box(1)) == 8
    assert [r for r in alg1.roots_in_box(0)] == [Root((-1,), 0), Root((1,), 0)]
    assert len(alg1.roots_in_box(2)) == 14
    alg2 = build_affine("A2")
    # 6 finite roots at 3 levels each, plus +-delta
    assert len(alg2.roots_in_box(1)) == 20
    # deterministic order
    assert alg2.roots_in_box(1) == alg2.roots_in_box(1)


def test_epsilon_cocycle_condition():
    for label in ["A1", "A2", "D4"]:
        alg = build_affine(label)
        for a in alg.finite_roots:
            for b in alg.finite_roots:
                lhs = alg.epsilon(a, b) * alg.epsilon(b, a)
                assert lhs == (-1) ** (alg.finite_form(a, b) % 2)


def test_epsilon_bimultiplicative():
    alg = build_affine("A2")
    roots = alg.finite_roots
    for a in roots:
        for b in roots:
            ab = tuple(x + y for x, y in zip(a, b))
            for cr in roots:
                assert alg.epsilon(ab, cr) == alg.epsilon(a, cr) * alg.epsilon(b, cr)
                assert alg.epsilon(cr, ab) == alg.epsilon(cr, a) * alg.epsilon(cr, b)


def _sweep_modes(alg, level):
    return alg.basis_modes(level)


@pytest.mark.parametrize("label", ["A1", "A2"])
def test_antisymmetry_small(label):
    alg = build_affine(label)
    modes = _sweep_modes(alg, 1)
    for a in modes:
        for b in modes:
            x, y = El.of(a), El.of(b)
            assert alg.bracket(x, y) + alg.bracket(y, x) == El()


@pytest.mark.parametrize("label", ["A1", "A2"])
def test_jacobi_small(label):
    alg = build_affine(label)
    modes = _sweep_modes(alg, 1)
    table = {}
    for i, a in enumerate(modes):
        for j, b in enumerate(modes):
            table[i, j] = alg.bracket(El.of(a), El.of(b))
    n = len(modes)
    for i in range(n):
        for j in range(i, n):
            for k in range(j, n):
                acc = alg.bracket(table[i, j], El.of(modes[k])) \
                    + alg.bracket(table[j, k], El.of(modes[i])) \
                    + alg.bracket(table[k, i], El.of(modes[j]))
                assert not acc, (modes[i], modes[j], modes[k])


@pytest.mark.parametrize("label", ["A1", "A2"])
def test_form_invariance_small(label):
    alg = build_affine(label)
    modes = _sweep_modes(alg, 1)
    for a in modes:
        for b in modes:
            br = alg.bracket(El.of(a), El.of(b))
            for c in modes:
                lhs = alg.form(br, El.of(c)) + alg.form(El.of(b), alg.bracket(El.of(a), El.of(c)))
                assert lhs == 0


def test_element_arithmetic():
    alg = build_affine("A1")
    alpha = alg.finite_positive[0]
    e = El.of(real_mode(alpha, 0))
    h = El.of(cartan_mode(0, 0))
    z = e + h - e
    assert z == h
    assert (e - e) == El()
    assert Fraction(1, 2) * (2 * e) == e
    assert e.canon() == (El.of(real_mode(alpha, 0))).canon()
