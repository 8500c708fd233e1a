import random
from fractions import Fraction

import pytest

from loopdirac.rootsys import (
    Weight,
    WeylElement,
    alcove_membership,
    build_root_system,
    centralizer_root_data,
    dominant_representative,
    inner_product,
    weyl_orbit,
)

SMALL_TYPES = [
    ("A", 1), ("A", 2), ("A", 3), ("A", 4),
    ("B", 2), ("B", 3), ("B", 4),
    ("C", 2), ("C", 3), ("C", 4),
    ("D", 3), ("D", 4),
    ("F", 4), ("G", 2),
]


def rand_weight(rng, rank, lo=-5, hi=5):
    return Weight([rng.randint(lo, hi) for _ in range(rank)])


def test_a1_basic_data():
    rs = build_root_system("A", 1)
    w = rs.fundamental_weights[0]
    alpha = rs.positive_roots[0]
    assert len(rs.positive_roots) == 1
    assert rs.rho == w
    assert rs.rho == alpha.scale(Fraction(1, 2))
    assert inner_product(rs, w, w) == Fraction(1, 2)
    assert rs.dual_coxeter == 2
    assert 1 + inner_product(rs, rs.rho, rs.highest_root) == 2


def test_a2_basic_data():
    rs = build_root_system("A", 2)
    assert len(rs.positive_roots) == 3
    assert rs.dual_coxeter == 3
    assert inner_product(rs, rs.rho, rs.highest_root) == 2


@pytest.mark.parametrize("family,rank", SMALL_TYPES)
def test_normalization_and_dual_coxeter_oracle(family, rank):
    rs = build_root_system(family, rank)
    assert rs.norm2(rs.highest_root) == 2
    # independent recomputation from the marks of the highest root
    from_marks = 1 + sum(rs.comarks)
    assert rs.dual_coxeter == from_marks
    # rho is both the all-ones vector and half the positive-root sum
    half = Weight.zero(rs.rank)
    for a in rs.positive_roots:
        half = half + a
    assert half.scale(Fraction(1, 2)) == rs.rho


@pytest.mark.parametrize("family,rank", SMALL_TYPES)
def test_positive_root_count_against_adjoint_dimension(family, rank):
    rs = build_root_system(family, rank)
    dim = Fraction(1)
    for a in rs.positive_roots:
        dim *= rs.inner(rs.highest_root + rs.rho, a) / rs.inner(rs.rho, a)
    assert dim == rs.rank + 2 * len(rs.positive_roots)


@pytest.mark.parametrize("family,rank", [("Z", 9), ("A", 0), ("E", 5), ("F", 3),
                                         ("G", 3), ("D", 2), ("B", 1)])
def test_invalid_types_rejected(family, rank):
    with pytest.raises(ValueError):
        build_root_system(family, rank)


def test_inner_product_weyl_invariance():
    rng = random.Random(11)
    for family, rank in [("A", 2), ("B", 2), ("G", 2), ("A", 3)]:
        rs = build_root_system(family, rank)
        for _ in range(100):
            lam, mu = rand_weight(rng, rank), rand_weight(rng, rank)
            w = WeylElement(tuple(rng.randrange(rank) for _ in range(rng.randint(0, 6))))
            assert rs.inner(rs.apply_weyl(w, lam), rs.apply_weyl(w, mu)) == rs.inner(lam, mu)


def test_inner_product_dimension_mismatch():
    rs = build_root_system("A", 2)
    with pytest.raises(ValueError):
        rs.inner(Weight([1]), rs.rho)


def test_weyl_orbit_examples():
    a1 = build_root_system("A", 1)
    a2 = build_root_system("A", 2)
    assert weyl_orbit(a1, Weight([0])) == frozenset({Weight([0])})
    assert weyl_orbit(a1, Weight([1])) == frozenset({Weight([1]), Weight([-1])})
    assert len(weyl_orbit(a2, a2.rho)) == 6


def test_orbit_closed_under_reflections_and_unique_dominant():
    rng = random.Random(5)
    rs = build_root_system("A", 2)
    for _ in range(20):
        lam = rand_weight(rng, 2, -3, 3)
        orb = weyl_orbit(rs, lam)
        for w in orb:
            for i in range(rs.rank):
                assert rs.reflect(i, w) in orb
        assert sum(1 for w in orb if w.is_dominant) == 1


def test_dominant_representative():
    a1 = build_root_system("A", 1)
    dom, w = dominant_representative(a1, Weight([-1]))
    assert dom == Weight([1]) and w.word == (0,)
    dom0, w0 = dominant_representative(a1, Weight([3]))
    assert dom0 == Weight([3]) and w0.word == ()

    a2 = build_root_system("A", 2)
    moved = a2.apply_weyl(WeylElement((0, 1)), a2.rho)
    dom2, w2 = dominant_representative(a2, moved)
    assert dom2 == a2.rho
    assert a2.apply_weyl(w2, moved) == a2.rho
    assert w2.parity == 0

    rng = random.Random(7)
    for _ in range(50):
        lam = rand_weight(rng, 2)
        dom, w = dominant_representative(a2, lam)
        assert dom.is_dominant
        assert dom in weyl_orbit(a2, lam)
        assert a2.apply_weyl(w, lam) == dom
        again, wi = dominant_representative(a2, dom)
        assert again == dom and wi.word == ()


def test_weyl_element_inverse_round_trip():
    rng = random.Random(3)
    rs = build_root_system("B", 2)
    for _ in range(50):
        w = WeylElement(tuple(rng.randrange(2) for _ in range(rng.randint(0, 5))))
        lam = rand_weight(rng, 2)
        assert rs.apply_weyl(w.inverse(), rs.apply_weyl(w, lam)) == lam


def test_alcove_membership():
    a1 = build_root_system("A", 1)
    at_zero = alcove_membership(a1, Weight([0]))
    assert at_zero.status == "face" and at_zero.walls == ("alpha_1",)
    inside = alcove_membership(a1, Weight([Fraction(1, 2)]))
    assert inside.status == "interior"
    vertex = alcove_membership(a1, Weight([1]))
    assert vertex.status == "face" and vertex.walls == ("affine",)
    out = alcove_membership(a1, Weight([2]))
    assert out.status == "outside"
    neg = alcove_membership(a1, Weight([-1]))
    assert neg.status == "outside"

    a2 = build_root_system("A", 2)
    origin = alcove_membership(a2, Weight([0, 0]))
    assert origin.status == "face" and set(origin.walls) == {"alpha_1", "alpha_2"}


def test_centralizer_anchor_cases():
    a1 = build_root_system("A", 1)
    full = centralizer_root_data(a1, Weight([0]))
    assert not full.is_twisted
    assert len(full.pairs) == 2
    assert full.rho_sigma == a1.rho

    torus = centralizer_root_data(a1, Weight([Fraction(1, 2)]))
    assert torus.pairs == ()
    assert torus.rho_sigma == Weight([0])

    alpha = a1.positive_roots[0]
    vertex = centralizer_root_data(a1, Weight([1]))
    assert vertex.is_twisted
    assert set((n, tuple(a)) for n, a in vertex.pairs) == {
        (-1, tuple(alpha)), (1, tuple(-alpha))
    }
    assert vertex.rho_sigma == alpha.scale(Fraction(-1, 2))


def test_centralizer_interior_generic_is_torus():
    rng = random.Random(19)
    for family, rank in [("A", 2), ("B", 2)]:
        rs = build_root_system(family, rank)
        for _ in range(20):
            # generic interior rational point: tiny dominant coordinates
            xi = Weight([Fraction(1, rng.choice([7, 11, 13])) for _ in range(rank)])
            if alcove_membership(rs, xi).status != "interior":
                continue
            cz = centralizer_root_data(rs, xi)
            if all(rs.inner(a, xi).denominator != 1 for a in rs.all_roots):
                assert cz.pairs == ()


def test_centralizer_rejects_outside_points():
    a1 = build_root_system("A", 1)
    with pytest.raises(ValueError):
        centralizer_root_data(a1, Weight([2]))


def test_json_round_trip():
    from loopdirac import jsonio

    rs = build_root_system("B", 2)
    data = jsonio.root_system_json(rs)
    assert data["dual_coxeter"] == 3
    w = Weight([Fraction(1, 2), 3])
    assert jsonio.weight_from_json(jsonio.weight_json(w)) == w
