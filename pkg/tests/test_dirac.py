from fractions import Fraction

import numpy as np
import pytest

from loopdirac.affine import level_k_alcove
from loopdirac.dirac import (
    IsotypyConventionError,
    TruncationError,
    affine_isotypic_spectrum,
    cubic_dirac_matrix,
    dirac_kernel_finite,
    geometric_dirac_block,
    isotropy_action_ops,
    quantize_conjugacy_class,
    relative_cubic_dirac_matrix,
    spinor_cubic_term,
    verify_kostant_square,
)
from loopdirac.repthy import EqualRankSubsystem, branch_equal_rank, irrep_weights
from loopdirac.rootsys import Weight, build_root_system, centralizer_root_data
from loopdirac.spinor import finite_spinor_module

A1 = build_root_system("A", 1)
A2 = build_root_system("A", 2)
CZT1 = centralizer_root_data(A1, Weight([Fraction(1, 3)]))
CZT2 = centralizer_root_data(A2, Weight([Fraction(1, 5), Fraction(1, 7)]))
CZW2 = centralizer_root_data(A2, Weight([0, Fraction(1, 2)]))


# -- finite operators -------------------------------------------------------------


def test_scalar_square():
    for n in range(3):
        lam = Weight([n])
        d = cubic_dirac_matrix(A1, lam)
        mat = d.dense()
        expect = float(A1.norm2(lam + A1.rho))
        assert abs(mat @ mat - expect * np.eye(mat.shape[0])).max() < 1e-10
        assert abs(mat - mat.conj().T).max() < 1e-10
        ev = np.sort(np.linalg.eigvalsh(mat))
        assert abs(ev + ev[::-1]).max() < 1e-10  # odd operator, symmetric spectrum


def test_parity_odd():
    d = cubic_dirac_matrix(A2, Weight([1, 0]))
    basis = d.basis
    for r, c, v in d.entries():
        assert basis.parities[r] != basis.parities[c]


def test_dimension_cap():
    with pytest.raises(ValueError):
        cubic_dirac_matrix(A2, Weight([1, 1]), cap=10)


def test_relative_square_a1_torus():
    # the two torus components +-rho of the lam=0 module sit in the kernel
    d = relative_cubic_dirac_matrix(A1, CZT1, Weight([0]))
    assert d.max_abs() < 1e-12
    rep = verify_kostant_square(A1, CZT1, Weight([1]))
    assert rep.ok and rep.max_deviation < 1e-9


@pytest.mark.parametrize("cz,lams", [
    (CZT2, [(0, 0), (1, 0), (1, 1)]),
    (CZW2, [(0, 0), (1, 0), (1, 1), (2, 1)]),
])
def test_kostant_square_a2(cz, lams):
    for coords in lams:
        rep = verify_kostant_square(A2, cz, Weight(coords))
        assert rep.ok
        assert rep.max_deviation < 1e-9


def test_relative_operator_h_equivariant():
    lam = Weight([1, 0])
    d = relative_cubic_dirac_matrix(A2, CZW2, lam)
    for op in isotropy_action_ops(A2, CZW2, lam):
        assert d.commutator(op).max_abs() < 1e-10


def test_relative_operator_self_adjoint_and_odd():
    for cz in (CZT2, CZW2):
        d = relative_cubic_dirac_matrix(A2, cz, Weight([1, 1]))
        mat = d.dense()
        assert abs(mat - mat.conj().T).max() < 1e-10
        for r, c, v in d.entries():
            assert d.basis.parities[r] != d.basis.parities[c]


def test_kernel_a1_structure():
    for n in range(4):
        labels, flags = dirac_kernel_finite(A1, CZT1, Weight([n]))
        assert not flags
        assert labels == {Weight([n + 1]): 1, Weight([-(n + 1)]): -1}


def test_kernel_a2_alternating():
    labels, flags = dirac_kernel_finite(A2, CZT2, Weight([0, 0]))
    assert not flags
    assert len(labels) == 6
    assert sorted(labels.values()) == [-1, -1, -1, 1, 1, 1]
    # labels are w(rho) - rho_H = w(rho) for the torus, over the Weyl group
    from loopdirac.rootsys import weyl_orbit

    assert set(labels) == set(weyl_orbit(A2, A2.rho))


def test_kernel_signed_sum_cancels_at_torus():
    labels, _ = dirac_kernel_finite(A1, CZT1, Weight([0]))
    assert sum(labels.values()) == 0


def kernel_branching_oracle(rs, cz, lam):
    """Exact alternating branching of the graded tensor character at square zero."""
    module_ch = irrep_weights(rs, lam)
    sbasis = finite_spinor_module(rs, cz)
    signed = {}
    for sw, pp in zip(sbasis.weights, sbasis.parities):
        sgn = -1 if pp else 1
        for mw, m in module_ch.items():
            w = mw + sw
            signed[w] = signed.get(w, 0) + sgn * m
    sub = EqualRankSubsystem.from_centralizer(cz)
    labels = branch_equal_rank(rs, sub, signed, check=False)
    top = rs.norm2(lam + rs.rho)
    return {nu: m for nu, m in labels.items() if rs.norm2(nu + sub.rho) == top}


@pytest.mark.parametrize("rs,cz,coords", [
    (A1, CZT1, (0,)), (A1, CZT1, (2,)),
    (A2, CZT2, (0, 0)), (A2, CZT2, (1, 1)),
    (A2, CZW2, (1, 0)), (A2, CZW2, (2, 1)),
])
def test_kernel_matches_branching_oracle(rs, cz, coords):
    lam = Weight(coords)
    labels, flags = dirac_kernel_finite(rs, cz, lam)
    assert not flags
    assert labels == kernel_branching_oracle(rs, cz, lam)


def test_geo_alg_gap_constant():
    const = spinor_cubic_term(A1, CZT1).operator_norm()
    gaps = []
    for n in range(3):
        lam = Weight([n])
        diff = relative_cubic_dirac_matrix(A1, CZT1, lam) - geometric_dirac_block(A1, CZT1, lam)
        gaps.append(diff.operator_norm())
    assert max(gaps) - min(gaps) < 1e-9
    assert abs(gaps[0] - const) < 1e-9


def test_geo_alg_gap_constant_a2():
    const = spinor_cubic_term(A2, CZT2).operator_norm()
    assert const > 0.1  # nondegenerate case
    gaps = []
    for coords in [(0, 0), (1, 0), (1, 1)]:
        lam = Weight(coords)
        diff = relative_cubic_dirac_matrix(A2, CZT2, lam) - geometric_dirac_block(A2, CZT2, lam)
        gaps.append(diff.operator_norm())
    assert max(gaps) - min(gaps) < 1e-9
    assert abs(gaps[0] - const) < 1e-9


def test_geometric_block_self_adjoint():
    mat = geometric_dirac_block(A2, CZT2, Weight([1, 0])).dense()
    assert abs(mat - mat.conj().T).max() < 1e-10


# -- spectral model ---------------------------------------------------------------


def test_spectrum_slope_and_nonnegativity():
    for k in (1, 2):
        for lam in level_k_alcove(A1, k):
            comps, flags = affine_isotypic_spectrum(A1, CZT1, lam, k, 6)
            assert not flags
            assert min(c.dirac_square for c in comps) == 0
            assert all(c.mult_even >= 0 and c.mult_odd >= 0 for c in comps)
            by_nu = {}
            for c in comps:
                by_nu.setdefault(tuple(c.nu), {})[c.energy] = c.dirac_square
            for d in by_nu.values():
                for n, val in d.items():
                    if n + 1 in d:
                        assert d[n + 1] - val == 2 * (k + A1.dual_coxeter)


def test_spectrum_vertex_case():
    cz = centralizer_root_data(A1, Weight([1]))
    comps, flags = affine_isotypic_spectrum(A1, cz, Weight([1]), 1, 6)
    assert not flags
    zeros = [c for c in comps if c.dirac_square == 0]
    # kernel label: the one-dimensional character rho + eta at energy 0
    assert any(c.energy == 0 and c.nu == Weight([3]) and c.mult_even == 1 and c.mult_odd == 0
               for c in zeros)


def test_spectrum_rejects_outside_alcove():
    with pytest.raises(ValueError):
        affine_isotypic_spectrum(A1, CZT1, Weight([3]), 1, 4)


# -- quantization ------------------------------------------------------------------


def expected_index(alcove, eta):
    return [1 if w == eta else 0 for w in alcove]


def test_quantize_a1_level_one():
    iv = quantize_conjugacy_class(A1, 1, Weight([1]), 4)
    assert iv.entries == [0, 1]
    iv0 = quantize_conjugacy_class(A1, 1, Weight([0]), 4)
    assert iv0.entries == [1, 0]


def test_quantize_a1_small_levels():
    for k in range(3):
        for eta in level_k_alcove(A1, k):
            iv = quantize_conjugacy_class(A1, k, eta, 6)
            assert iv.entries == expected_index(iv.alcove, eta), (k, eta)
            assert not iv.flags


def test_quantize_a2_level_one():
    for eta in level_k_alcove(A2, 1):
        iv = quantize_conjugacy_class(A2, 1, eta, 6)
        assert iv.entries == expected_index(iv.alcove, eta)


def test_quantize_truncation_stability():
    for k in (1, 2):
        for eta in level_k_alcove(A1, k):
            a = quantize_conjugacy_class(A1, k, eta, 5)
            b = quantize_conjugacy_class(A1, k, eta, 7)
            assert a.entries == b.entries


def test_quantize_insufficient_truncation():
    with pytest.raises(TruncationError) as info:
        quantize_conjugacy_class(A1, 1, Weight([1]), 0)
    assert info.value.required >= 1
    iv = quantize_conjugacy_class(A1, 1, Weight([1]), info.value.required)
    assert iv.entries == [0, 1]


def test_quantize_rejects_bad_labels():
    with pytest.raises(ValueError):
        quantize_conjugacy_class(A1, 1, Weight([2]), 4)
    with pytest.raises(ValueError):
        quantize_conjugacy_class(A1, -1, Weight([0]), 4)
    with pytest.raises(ValueError):
        quantize_conjugacy_class(A1, 1, Weight([Fraction(1, 2)]), 4)


def test_quantize_evidence_components():
    iv, evidence = quantize_conjugacy_class(A1, 1, Weight([1]), 4, with_evidence=True)
    assert iv.entries == [0, 1]
    assert set(evidence) == {Weight([0]), Weight([1])}
    kern = evidence[Weight([1])]
    assert any(c.energy == 0 and c.nu == Weight([3]) for c in kern)
    assert all(c.dirac_square == 0 for lam in evidence for c in evidence[lam])


def test_quantize_level_zero():
    iv = quantize_conjugacy_class(A1, 0, Weight([0]), 3)
    assert iv.entries == [1]
