import random
from fractions import Fraction

import pytest

from loopdirac.affine import (
    AffineWeight,
    AffineWeylElement,
    affine_dominant_representative,
    affine_inner_product,
    affine_norm2,
    affine_weyl_apply,
    level_k_alcove,
    rho_affine,
    translate,
)
from loopdirac.rootsys import Weight, WeylElement, build_root_system

A1 = build_root_system("A", 1)
A2 = build_root_system("A", 2)
B2 = build_root_system("B", 2)
G2 = build_root_system("G", 2)


def rand_lattice(rs, rng, steps=3):
    z = Weight.zero(rs.rank)
    for _ in range(steps):
        z = z + rs.simple_roots[rng.randrange(rs.rank)].scale(rng.randint(-2, 2))
    return z


def rand_affine(rs, rng):
    lam = Weight([rng.randint(-4, 4) for _ in range(rs.rank)])
    return AffineWeight(Fraction(rng.randint(-3, 3)), lam, Fraction(rng.randint(0, 3)))


def test_product_examples():
    alpha = A1.positive_roots[0]
    w = A1.fundamental_weights[0]
    a = AffineWeight(0, w, 1)
    assert affine_inner_product(A1, a, a) == A1.inner(w, w)
    rho_hat = rho_affine(A1)
    assert affine_norm2(A1, rho_hat) == A1.inner(A1.rho, A1.rho)
    assert affine_inner_product(A1, AffineWeight(1, alpha, 1), AffineWeight(0, w, 1)) == 0


def test_product_rank_mismatch():
    with pytest.raises(ValueError):
        affine_inner_product(A2, AffineWeight(0, Weight([1]), 1), AffineWeight(0, A2.rho, 1))


def test_translate_examples():
    alpha = A1.positive_roots[0]
    a = AffineWeight(0, Weight([0]), 1)
    assert translate(A1, Weight.zero(1), a) == a
    moved = translate(A1, alpha, a)
    assert moved == AffineWeight(1, alpha, 1)


def test_translate_requires_root_lattice():
    with pytest.raises(ValueError):
        translate(A1, A1.fundamental_weights[0], AffineWeight(0, Weight([0]), 1))


def test_translate_half_integral_energy_possible():
    # short coroot directions of B2 produce half-integral energy shifts
    short = B2.positive_roots[1]
    a = AffineWeight(0, Weight([0, 0]), 1)
    moved = translate(B2, short, a)
    assert moved.m == B2.norm2(short) / 2
    assert moved.m.denominator in (1, 2)


def test_translate_composition():
    rng = random.Random(2)
    for rs in (A1, A2, B2):
        for _ in range(30):
            z1, z2 = rand_lattice(rs, rng), rand_lattice(rs, rng)
            a = rand_affine(rs, rng)
            assert translate(rs, z1, translate(rs, z2, a)) == translate(rs, z1 + z2, a)


def test_isometry_and_group_law():
    rng = random.Random(4)
    for rs in (A1, A2, B2, G2):
        for _ in range(200):
            a, b = rand_affine(rs, rng), rand_affine(rs, rng)
            w = WeylElement(tuple(rng.randrange(rs.rank) for _ in range(rng.randint(0, 4))))
            g = AffineWeylElement(w, rand_lattice(rs, rng))
            ga, gb = affine_weyl_apply(rs, g, a), affine_weyl_apply(rs, g, b)
            assert affine_inner_product(rs, ga, gb) == affine_inner_product(rs, a, b)
            g2 = AffineWeylElement(
                WeylElement(tuple(rng.randrange(rs.rank) for _ in range(2))),
                rand_lattice(rs, rng, 2),
            )
            lhs = affine_weyl_apply(rs, g, affine_weyl_apply(rs, g2, a))
            rhs = affine_weyl_apply(rs, g.compose(rs, g2), a)
            assert lhs == rhs
            assert affine_weyl_apply(rs, g.inverse(rs), ga) == a


def test_identity_action():
    rng = random.Random(9)
    ident = AffineWeylElement.identity(2)
    for _ in range(10):
        a = rand_affine(A2, rng)
        assert affine_weyl_apply(A2, ident, a) == a


def test_alcove_enumeration():
    assert level_k_alcove(A1, 0) == [Weight([0])]
    assert level_k_alcove(A1, 2) == [Weight([0]), Weight([1]), Weight([2])]
    assert level_k_alcove(A2, 1) == [Weight([0, 0]), Weight([0, 1]), Weight([1, 0])]
    for k in range(11):
        assert len(level_k_alcove(A1, k)) == k + 1
    sizes = [len(level_k_alcove(B2, k)) for k in range(5)]
    assert sizes == sorted(sizes)
    for k in range(4):
        for w in level_k_alcove(G2, k):
            assert w.is_dominant and G2.level(w) <= k
    with pytest.raises(ValueError):
        level_k_alcove(A1, -1)


def test_alcove_reduction_example():
    start = AffineWeight(0, Weight([3]), 2)
    red, g = affine_dominant_representative(A1, start)
    assert red.lam == Weight([1])
    assert affine_weyl_apply(A1, g, start) == red
    assert affine_norm2(A1, start) == affine_norm2(A1, red)


def test_alcove_reduction_fixed_point_and_isometry():
    rng = random.Random(21)
    for rs in (A1, A2, B2):
        for _ in range(40):
            lam = Weight([rng.randint(-6, 6) for _ in range(rs.rank)])
            a = AffineWeight(Fraction(rng.randint(-2, 2)), lam, rng.randint(1, 3))
            red, g = affine_dominant_representative(rs, a)
            assert red.lam.is_dominant and rs.level(red.lam) <= a.k
            assert affine_weyl_apply(rs, g, a) == red
            red2, g2 = affine_dominant_representative(rs, red)
            assert red2 == red and g2.w.word == () and not any(g2.z)
            shifted = a + rho_affine(rs)
            assert affine_norm2(rs, shifted) == affine_norm2(
                rs, affine_weyl_apply(rs, g, shifted)
            )


def test_alcove_reduction_requires_positive_level():
    with pytest.raises(ValueError):
        affine_dominant_representative(A1, AffineWeight(0, Weight([1]), 0))


def test_affine_weight_json_round_trip():
    from loopdirac import jsonio

    a = AffineWeight(Fraction(-3, 2), Weight([1, Fraction(1, 3)]), 2)
    assert jsonio.affine_weight_from_json(jsonio.affine_weight_json(a)) == a
