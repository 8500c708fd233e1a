import itertools
import random

import pytest

from loopdirac.chevalley import ChevalleyBasis
from loopdirac.rootsys import Weight, build_root_system


def basis_elements(cb):
    rs = cb.rs
    return [cb.root_vector(a) for a in rs.all_roots] + [
        cb.cartan(w) for w in rs.fundamental_weights
    ]


@pytest.mark.parametrize("family,rank", [("A", 1), ("A", 2), ("B", 2), ("G", 2)])
def test_jacobi_identity_exhaustive(family, rank):
    rs = build_root_system(family, rank)
    cb = ChevalleyBasis(rs)
    elems = basis_elements(cb)
    for x, y, z in itertools.combinations(elems, 3):
        total = cb.add(
            cb.add(cb.bracket(x, cb.bracket(y, z)), cb.bracket(y, cb.bracket(z, x))),
            cb.bracket(z, cb.bracket(x, y)),
        )
        assert not total.e and not any(total.h)


@pytest.mark.parametrize("family,rank", [("A", 3), ("C", 3), ("D", 4), ("F", 4)])
def test_jacobi_identity_sampled(family, rank):
    rs = build_root_system(family, rank)
    cb = ChevalleyBasis(rs)
    elems = basis_elements(cb)
    rng = random.Random(0)
    for _ in range(400):
        x, y, z = (elems[rng.randrange(len(elems))] for _ in range(3))
        total = cb.add(
            cb.add(cb.bracket(x, cb.bracket(y, z)), cb.bracket(y, cb.bracket(z, x))),
            cb.bracket(z, cb.bracket(x, y)),
        )
        assert not total.e and not any(total.h)


@pytest.mark.parametrize("family,rank", [("A", 2), ("B", 2), ("G", 2), ("A", 3)])
def test_form_invariance(family, rank):
    rs = build_root_system(family, rank)
    cb = ChevalleyBasis(rs)
    elems = basis_elements(cb)
    rng = random.Random(1)
    for _ in range(300):
        x, y, z = (elems[rng.randrange(len(elems))] for _ in range(3))
        assert cb.form(cb.bracket(x, y), z) == -cb.form(y, cb.bracket(x, z))


def test_sl2_triples_and_pairing():
    rs = build_root_system("A", 1)
    cb = ChevalleyBasis(rs)
    alpha = rs.positive_roots[0]
    h = cb.bracket(cb.root_vector(alpha), cb.root_vector(-alpha))
    # [e, f] = coroot: pairs to 2 with alpha and to 1 with the fundamental weight
    assert rs.inner(alpha, h.h) == 2
    assert rs.inner(rs.fundamental_weights[0], h.h) == 1
    assert cb.form(cb.root_vector(alpha), cb.root_vector(-alpha)) == 1


def test_constants_antisymmetric_and_integral():
    rs = build_root_system("G", 2)
    cb = ChevalleyBasis(rs)
    for a in rs.all_roots:
        for b in rs.all_roots:
            n = cb.n(a, b)
            assert n == -cb.n(b, a)
            assert n == -cb.n(-a, -b)
            assert n.denominator == 1
            s = a + b
            if any(s) and not cb.is_root(s):
                assert n == 0


def test_string_lengths_bound_constants():
    # |N| = p + 1 for the chosen decomposition pairs: spot check the long G2 string
    rs = build_root_system("G", 2)
    cb = ChevalleyBasis(rs)
    vals = {abs(int(cb.n(a, b))) for a in rs.all_roots for b in rs.all_roots
            if cb.n(a, b) != 0}
    assert max(vals) == 3  # G2 has root strings of length 4
