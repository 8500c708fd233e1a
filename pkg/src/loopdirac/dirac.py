"""Cubic Dirac operators and the quantization index.

Finite-dimensional matrices of the cubic Dirac operator and its relative
version verify the square formula directly; the loop-algebra operator is
modeled spectrally: the tensor product of a level-k module with the truncated
loop spinor module is decomposed into isotypic components of the isotropy
algebra, each carrying the exact rational value of the squared operator, and
the index of a quantized conjugacy class is read off from the components at
square zero that match the one-dimensional isotropy character.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.sparse as sp

from . import _accel
from .affine import AffineWeight, affine_norm2, level_k_alcove, rho_affine
from .hwmodule import HighestWeightModule
from .repthy import EqualRankSubsystem, affine_weight_multiplicities, branch_equal_rank
from .rootsys import CentralizerData, Q, RootSystem, Weight, centralizer_root_data
from .spinor import (
    Direction,
    OperatorMatrix,
    SpinorBasis,
    ad_quadratic,
    bracket_directions,
    clifford_op,
    finite_spinor_module,
    mode_inventory,
    project_to_p,
    root_direction,
)

DEFAULT_DIM_CAP = 20000
KERNEL_TOL = 1e-8
AMBIGUITY_TOL = 1e-6


class TruncationError(RuntimeError):
    """Raised when the energy cutoff is too small for a requested computation."""

    def __init__(self, message: str, required: int):
        super().__init__(message)
        self.required = required


class IsotypyConventionError(RuntimeError):
    """Raised when an isotypic label violates the isotropy-character conventions."""


@dataclass(frozen=True)
class IsotypicComponent:
    """One isotropy-isotypic block of (module) x (spinor), with its exact square."""

    energy: int
    nu: Weight
    level: int                       # k + dual Coxeter number
    mult_even: int
    mult_odd: int
    dirac_square: Fraction

    @property
    def label(self) -> AffineWeight:
        return AffineWeight(self.energy, self.nu, self.level)


@dataclass
class IndexVector:
    """Signed multiplicities over the level-k alcove basis (lex order)."""

    level: int
    alcove: list[Weight]
    entries: list[int]
    flags: list[str] = field(default_factory=list)

    def as_dict(self) -> dict[Weight, int]:
        return dict(zip(self.alcove, self.entries))


# -- finite-dimensional Dirac matrices ------------------------------------------


@functools.lru_cache(maxsize=None)
def _module(rs: RootSystem, lam: Weight) -> HighestWeightModule:
    return HighestWeightModule(rs, lam)


class TensorBasis:
    """Module tensor spinor basis with weight/parity labels (spinor index fast)."""

    def __init__(self, module: HighestWeightModule, sbasis: SpinorBasis):
        self.module = module
        self.spinor = sbasis
        self.dim = module.dim * sbasis.dim
        self.weights = []
        self.parities = []
        for mw in module.index_weights:
            for sw, pp in zip(sbasis.weights, sbasis.parities):
                self.weights.append(mw + sw)
                self.parities.append(pp)


def _rep_matrix(module: HighestWeightModule, d: Direction) -> np.ndarray:
    if d.kind == "root":
        return module.matrix_root(d.root)
    return module.matrix_cartan(d.cartan)


def _finite_dirac(rs: RootSystem, cz: CentralizerData | None, lam: Weight,
                  cap: int, coefficient_cubic: float, geometric: bool = False):
    """Assemble sum_i rho(u_i) (x) c(u^i) plus a quadratic-coefficient cubic term.

    With ``geometric`` the second term is (1/2) sum_i c(u^i) ad(u_i) instead of
    the invariant cubic element.
    """
    module = _module(rs, lam)
    sbasis = SpinorBasis(rs, cz, trunc=0)
    dim = module.dim * sbasis.dim
    if dim > cap:
        raise ValueError(f"matrix dimension {dim} exceeds the cap {cap}")
    dirs = sbasis.p_direction_basis()
    total = sp.csr_matrix((dim, dim), dtype=complex)
    for v, dual, dc in dirs:
        rho_v = sp.csr_matrix(_rep_matrix(module, v).astype(complex))
        cdual = clifford_op(sbasis, dual).mat * dc
        total = total + sp.kron(rho_v, cdual, format="csr")
    if geometric:
        for v, dual, dc in dirs:
            cdual = clifford_op(sbasis, dual).mat * dc
            adv = ad_quadratic(sbasis, v).mat
            total = total + sp.kron(
                sp.identity(module.dim, format="csr", dtype=complex),
                (cdual @ adv) * 0.5, format="csr",
            )
    elif coefficient_cubic:
        cubic = _cubic_element(sbasis, coefficient_cubic)
        total = total + sp.kron(
            sp.identity(module.dim, format="csr", dtype=complex), cubic, format="csr"
        )
    basis = TensorBasis(module, sbasis)
    return OperatorMatrix(basis, total.tocsr())


def _cubic_element(sbasis: SpinorBasis, coefficient: float) -> sp.csr_matrix:
    """coefficient * sum_{i,j} c([u_i,u_j]_p) c(u^j) c(u^i) / 4 on the spinor factor.

    With coefficient 1/3 this is the invariant cubic term; the factor 1/12 is
    absorbed here as coefficient/4.
    """
    dirs = sbasis.p_direction_basis()
    total = sp.csr_matrix((sbasis.dim, sbasis.dim), dtype=complex)
    for u, udual, uc in dirs:
        for v, vdual, vc in dirs:
            br = project_to_p(sbasis, bracket_directions(sbasis, u, v))
            if not br:
                continue
            right = clifford_op(sbasis, vdual).mat @ clifford_op(sbasis, udual).mat
            for d, cf in br:
                total = total + (clifford_op(sbasis, d).mat @ right) * (
                    cf * uc * vc * coefficient / 4.0
                )
    return sp.csr_matrix(total)


def spinor_cubic_term(rs: RootSystem, cz: CentralizerData | None, scale: float = -1.0 / 6.0
                      ) -> OperatorMatrix:
    """The constant Clifford element scale * sum_i ad(u_i) c(u^i) on the finite spinor."""
    sbasis = SpinorBasis(rs, cz, trunc=0)
    total = sp.csr_matrix((sbasis.dim, sbasis.dim), dtype=complex)
    for v, dual, dc in sbasis.p_direction_basis():
        total = total + (ad_quadratic(sbasis, v).mat @ clifford_op(sbasis, dual).mat) * (
            dc * scale
        )
    return OperatorMatrix(sbasis, sp.csr_matrix(total))


def cubic_dirac_matrix(rs: RootSystem, lam: Weight, cap: int = DEFAULT_DIM_CAP) -> OperatorMatrix:
    """Kostant's cubic Dirac operator on (module lam) x (spinors of the full algebra)."""
    return _finite_dirac(rs, None, lam, cap, coefficient_cubic=1.0 / 3.0)


def relative_cubic_dirac_matrix(rs: RootSystem, cz: CentralizerData, lam: Weight,
                                cap: int = DEFAULT_DIM_CAP) -> OperatorMatrix:
    """Relative cubic Dirac operator on (module lam) x (spinors of p = g (-) h)."""
    if cz.is_twisted:
        raise ValueError("relative operator needs an isotropy algebra inside g")
    return _finite_dirac(rs, cz, lam, cap, coefficient_cubic=1.0 / 3.0)


def geometric_dirac_block(rs: RootSystem, cz: CentralizerData, lam: Weight,
                          cap: int = DEFAULT_DIM_CAP) -> OperatorMatrix:
    """Dirac operator with the spin-connection coefficient 1/2 instead of 1/3."""
    if cz.is_twisted:
        raise ValueError("geometric block needs an isotropy algebra inside g")
    return _finite_dirac(rs, cz, lam, cap, coefficient_cubic=0.0, geometric=True)


def isotropy_action_ops(rs: RootSystem, cz: CentralizerData, lam: Weight,
                        cap: int = DEFAULT_DIM_CAP) -> list[OperatorMatrix]:
    """Matrices of the h-action on (module) x (spinor), for equivariance checks."""
    module = _module(rs, lam)
    sbasis = SpinorBasis(rs, cz, trunc=0)
    dirs: list[Direction] = []
    for s in range(rs.rank):
        dirs.append(Direction(0, "cartan", cartan=tuple(sbasis._cartan_axes[s])))
    for n, alpha in cz.pairs:
        if n == 0:
            dirs.append(root_direction(0, alpha))
    out = []
    ident_s = sp.identity(sbasis.dim, format="csr", dtype=complex)
    ident_m = sp.identity(module.dim, format="csr", dtype=complex)
    basis = TensorBasis(module, sbasis)
    for d in dirs:
        rho = sp.csr_matrix(_rep_matrix(module, d).astype(complex))
        spin = ad_quadratic(sbasis, d).mat
        out.append(OperatorMatrix(basis, (sp.kron(rho, ident_s) + sp.kron(ident_m, spin)).tocsr()))
    return out


# -- square-formula verification --------------------------------------------------


def _tensor_character(rs: RootSystem, cz: CentralizerData, lam: Weight):
    """Exact graded character of (module lam) x (finite spinor of p), split by parity."""
    from .repthy import irrep_weights

    module_ch = irrep_weights(rs, lam)
    sbasis = finite_spinor_module(rs, cz)
    even: dict[Weight, int] = {}
    odd: dict[Weight, int] = {}
    for sw, pp in zip(sbasis.weights, sbasis.parities):
        tgt = odd if pp else even
        for mw, m in module_ch.items():
            w = mw + sw
            tgt[w] = tgt.get(w, 0) + m
    return even, odd


@dataclass
class SquareReport:
    lam: Weight
    dim: int
    max_deviation: float
    eigenvalue_count: int
    predicted_count: int
    components: list[tuple[Weight, int, Fraction]]   # (nu, total multiplicity, square)

    @property
    def ok(self) -> bool:
        return self.eigenvalue_count == self.predicted_count


def verify_kostant_square(rs: RootSystem, cz: CentralizerData, lam: Weight,
                          cap: int = DEFAULT_DIM_CAP) -> SquareReport:
    """Compare every eigenvalue of the squared relative operator with the exact formula."""
    dop = relative_cubic_dirac_matrix(rs, cz, lam, cap)
    d2 = (dop @ dop).dense()
    eigs = np.sort(np.linalg.eigvalsh(d2))

    even, odd = _tensor_character(rs, cz, lam)
    total = dict(even)
    for w, m in odd.items():
        total[w] = total.get(w, 0) + m
    sub = EqualRankSubsystem.from_centralizer(cz)
    labels = branch_equal_rank(rs, cz, total)
    top = rs.norm2(lam + rs.rho)
    predicted = []
    comps = []
    for nu, m in sorted(labels.items()):
        val = top - rs.norm2(nu + sub.rho)
        dimh = sub.weyl_dim(nu)
        predicted.extend([float(val)] * (m * dimh))
        comps.append((nu, m * dimh, Q(val)))
    predicted.sort()
    count_ok = len(predicted) == len(eigs)
    dev = float("inf")
    if count_ok:
        dev = max((abs(a - b) for a, b in zip(eigs, predicted)), default=0.0)
    return SquareReport(
        lam=lam,
        dim=dop.shape[0],
        max_deviation=dev,
        eigenvalue_count=len(eigs),
        predicted_count=len(predicted),
        components=comps,
    )


def dirac_kernel_finite(rs: RootSystem, cz: CentralizerData, lam: Weight,
                        cap: int = DEFAULT_DIM_CAP,
                        kernel_tol: float = KERNEL_TOL,
                        ambiguity_tol: float = AMBIGUITY_TOL):
    """Signed kernel of the relative operator as isotropy labels.

    Returns (labels, flags): labels map an h-dominant weight to the signed
    kernel multiplicity; eigenvalues inside the ambiguity band are flagged and
    never silently counted.
    """
    dop = relative_cubic_dirac_matrix(rs, cz, lam, cap)
    basis: TensorBasis = dop.basis
    d2 = (dop @ dop).dense()
    blocks: dict[tuple[Weight, int], list[int]] = {}
    for i, (w, p) in enumerate(zip(basis.weights, basis.parities)):
        blocks.setdefault((w, p), []).append(i)
    flags: list[str] = []
    kernel_char_even: dict[Weight, int] = {}
    kernel_char_odd: dict[Weight, int] = {}
    for (w, p), ix in blocks.items():
        sub2 = d2[np.ix_(ix, ix)]
        eigs = np.linalg.eigvalsh(sub2)
        nker = int(np.sum(eigs < kernel_tol))
        namb = int(np.sum((eigs >= kernel_tol) & (eigs < ambiguity_tol)))
        if namb:
            flags.append(
                f"ambiguous eigenvalue near zero at weight {tuple(map(str, w))} parity {p}"
            )
        if nker:
            tgt = kernel_char_odd if p else kernel_char_even
            tgt[w] = tgt.get(w, 0) + nker
    sub = EqualRankSubsystem.from_centralizer(cz)
    signed: dict[Weight, int] = {}
    for w, m in kernel_char_even.items():
        signed[w] = signed.get(w, 0) + m
    for w, m in kernel_char_odd.items():
        signed[w] = signed.get(w, 0) - m
    labels = branch_equal_rank(rs, sub, signed, check=False)
    return labels, flags


# -- the spectral model of the loop operator --------------------------------------


@functools.lru_cache(maxsize=None)
def _loop_spinor_character(rs: RootSystem, cz: CentralizerData | None, trunc: int):
    """Exact graded character of the truncated loop spinor module.

    Returns (vacuum weight, entries) with entries keyed by
    (energy, parity, *coords) where coords are relative to the vacuum weight.
    """
    rank = rs.rank
    zero = (0, 0) + (0,) * rank
    acc = {zero: 1}
    cartan_count: dict[int, int] = {}
    for energy, kind, root, _ in mode_inventory(rs, cz, trunc):
        if kind == "cartan":
            if energy > 0:
                cartan_count[energy] = cartan_count.get(energy, 0) + 1
            continue
        factor = [(zero, 1), ((energy, 1) + tuple(int(c) for c in root), 1)]
        acc = _accel.graded_convolve(list(acc.items()), factor, trunc)
    if cz is None:
        # zero-energy Cartan pairs: (rank // 2) paired modes of weight zero
        npairs = rank // 2 + (1 if rank % 2 else 0)
        if npairs:
            cartan_count[0] = cartan_count.get(0, 0) + npairs
    for energy, count in sorted(cartan_count.items()):
        factor = [((energy * j, j % 2) + (0,) * rank, math.comb(count, j))
                  for j in range(count + 1)
                  if energy * j <= trunc or j == 0]
        acc = _accel.graded_convolve(list(acc.items()), factor, trunc)
    vacuum = rs.rho - (cz.rho_sigma if cz is not None else Weight.zero(rank))
    return vacuum, acc


class AffineIsotypy:
    """Dominant projection and Weyl alternation for a (possibly twisted) isotropy algebra.

    Points are (energy, weight) pairs at a fixed level; the reflection in the
    pair (n, alpha) mixes energy and weight unless n = 0.
    """

    def __init__(self, cz: CentralizerData, level: Q):
        self.cz = cz
        self.rs = cz.rs
        self.level = Q(level)
        self.rho_h = cz.rho_sigma
        # root of the pair (n, alpha): label shift (-n, alpha)
        self.simple = [(Q(-n), a, self.rs.norm2(a) / 2) for n, a in cz.simple_pairs()]
        self.positive = [(Q(-n), a, self.rs.norm2(a) / 2) for n, a in cz.positive_pairs]

    def coroot_value(self, y: tuple[Q, Weight], r) -> Q:
        mr, alpha, d = r
        return (self.rs.inner(y[1], alpha) - mr * self.level) / d

    def reflect(self, y: tuple[Q, Weight], r) -> tuple[Q, Weight]:
        mr, alpha, d = r
        c = self.coroot_value(y, r)
        return (y[0] - c * mr, y[1] - alpha.scale(c))

    def project(self, y: tuple[Q, Weight]):
        """Strictly dominant representative, reflection sign, wall flag."""
        sign = 1
        cur = y
        for _ in range(100000):
            for r in self.simple:
                v = self.coroot_value(cur, r)
                if v == 0:
                    return cur, 0, True
                if v < 0:
                    cur = self.reflect(cur, r)
                    sign = -sign
                    break
            else:
                return cur, sign, False
        raise RuntimeError("isotypic projection did not terminate")

    def orbit(self, y: tuple[Q, Weight]) -> list[tuple[Q, Weight]]:
        seen = {(y[0], tuple(y[1]))}
        frontier = [y]
        out = [y]
        while frontier:
            nxt = []
            for p in frontier:
                for r in self.simple:
                    q = self.reflect(p, r)
                    key = (q[0], tuple(q[1]))
                    if key not in seen:
                        seen.add(key)
                        out.append(q)
                        nxt.append(q)
            frontier = nxt
        return out

    def signed_orbit(self, y: tuple[Q, Weight]) -> list[tuple[tuple[Q, Weight], int]]:
        seen = {(y[0], tuple(y[1])): 1}
        frontier = [(y, 1)]
        out = [(y, 1)]
        while frontier:
            nxt = []
            for p, s in frontier:
                for r in self.simple:
                    q = self.reflect(p, r)
                    key = (q[0], tuple(q[1]))
                    if key not in seen:
                        seen[key] = -s
                        out.append((q, -s))
                        nxt.append((q, -s))
            frontier = nxt
        return out


@functools.lru_cache(maxsize=64)
def _character_tables(rs: RootSystem, cz: CentralizerData, lam: Weight, k: int, trunc: int):
    """Graded parity-split character of (level-k module lam) x (loop spinor of p)."""
    vmult = affine_weight_multiplicities(rs, lam, k, trunc)
    vitems = [((n, 0) + tuple(int(c) for c in mu), m) for (n, mu), m in vmult.entries.items()]
    vacuum, sitems = _loop_spinor_character(rs, cz, trunc)
    prod = _accel.graded_convolve(vitems, list(sitems.items()), trunc)
    return vacuum, prod


def affine_isotypic_spectrum(rs: RootSystem, cz: CentralizerData, lam: Weight,
                             k: int, trunc: int):
    """Isotypic components of (level-k module) x (loop spinor), with exact squares.

    Components whose Weyl alternation would need character data beyond the
    truncation are dropped (their labels cannot be trusted).  Returns
    (components, flags).
    """
    if rs.level(lam) > k:
        raise ValueError("weight lies outside the level-k alcove")
    kk = Q(k + rs.dual_coxeter)
    vacuum, prod = _character_tables(rs, cz, lam, k, trunc)
    iso = AffineIsotypy(cz, kk)
    rho_h = iso.rho_h
    raw: dict[tuple[Q, Weight], list[int]] = {}
    flags: list[str] = []
    for key, mult in prod.items():
        if mult == 0:
            continue
        n, par = key[0], key[1]
        w = Weight(key[2:]) + vacuum
        y = (Q(n), w + rho_h)
        dom, sign, wall = iso.project(y)
        if wall:
            continue
        label = (dom[0], dom[1] - rho_h)
        ent = raw.setdefault(label, [0, 0])
        ent[par] += sign * mult
    lam_aff = AffineWeight(0, lam, k)
    top = affine_norm2(rs, lam_aff + rho_affine(rs))
    comps = []
    for (n, nu), (me, mo) in sorted(raw.items(), key=lambda t: (t[0][0], tuple(t[0][1]))):
        if me == 0 and mo == 0:
            continue
        orbit = iso.orbit((n, nu + rho_h))
        max_e = max(p[0] for p in orbit)
        if max_e > trunc:
            continue   # alternation incomplete at this cutoff
        if n.denominator != 1 or n < 0:
            flags.append(f"non-integral or negative component energy {n}")
            continue
        if me < 0 or mo < 0:
            flags.append(
                f"negative isotypic multiplicity at energy {n}, weight {tuple(map(str, nu))}"
            )
        d2 = top - affine_norm2(rs, AffineWeight(n, nu + rho_h, kk))
        comps.append(IsotypicComponent(
            energy=int(n), nu=nu, level=int(kk), mult_even=me, mult_odd=mo,
            dirac_square=Q(d2),
        ))
    return comps, flags


def _matcher_weight(rs: RootSystem, cz: CentralizerData, eta: Weight) -> Weight:
    return rs.rho - cz.rho_sigma + eta


def _check_one_dimensional(rs: RootSystem, cz: CentralizerData, xi: Weight,
                           w: Weight, level: Q) -> None:
    for n, alpha in cz.pairs:
        expect = rs.inner(alpha, xi) * level
        if rs.inner(w, alpha) != expect:
            raise IsotypyConventionError(
                "matching character is not one-dimensional for the isotropy algebra"
            )


def quantize_conjugacy_class(rs: RootSystem, k: int, eta: Weight, trunc: int,
                             with_evidence: bool = False):
    """Index vector of the quantized conjugacy class through xi = eta / k.

    For each alcove weight lam the signed multiplicity of the one-dimensional
    isotropy character (rho_G - rho_H + eta at level k + h) is extracted from
    the kernel components of the spectral model.  Raises TruncationError when
    the cutoff cannot certify the answer.
    """
    if k < 0:
        raise ValueError("level must be nonnegative")
    if not (eta.is_integral and eta.is_dominant) or rs.level(eta) > k:
        raise ValueError("class label must lie in the level-k alcove")
    if k == 0:
        xi = Weight.zero(rs.rank)
    else:
        xi = eta.scale(Q(1, k))
    cz = centralizer_root_data(rs, xi)
    kk = Q(k + rs.dual_coxeter)
    wstar = _matcher_weight(rs, cz, eta)
    _check_one_dimensional(rs, cz, xi, wstar, kk)

    iso = AffineIsotypy(cz, kk)
    alcove = level_k_alcove(rs, k)
    entries = []
    flags: list[str] = []
    evidence = {}
    top_norm = rs.norm2(rs.rho + eta)
    for lam in alcove:
        lam_top = rs.norm2(lam + rs.rho)
        nstar_q = (top_norm - lam_top) / (2 * kk)
        net = 0
        if nstar_q.denominator == 1 and nstar_q >= 0:
            nstar = int(nstar_q)
            orbit = iso.signed_orbit((Q(nstar), wstar + iso.rho_h))
            needed = max(int(math.ceil(p[0])) for p, _ in orbit)
            if max(nstar, needed) > trunc:
                raise TruncationError(
                    f"energy cutoff {trunc} too small; the kernel search needs "
                    f"{max(nstar, needed)}",
                    required=int(max(nstar, needed)),
                )
            vacuum, prod = _character_tables(rs, cz, lam, k, trunc)
            for (m, mu), sign in orbit:
                point = (m, mu - iso.rho_h)
                if point[0].denominator != 1:
                    continue
                rel = point[1] - vacuum
                if not rel.is_integral:
                    continue
                ne = int(point[0])
                ke = (ne, 0) + tuple(int(c) for c in rel)
                ko = (ne, 1) + tuple(int(c) for c in rel)
                net += sign * (prod.get(ke, 0) - prod.get(ko, 0))
        entries.append(net)
        if with_evidence:
            comps, fl = affine_isotypic_spectrum(rs, cz, lam, k, trunc)
            flags.extend(fl)
            evidence[lam] = [c for c in comps if c.dirac_square == 0]
    iv = IndexVector(level=k, alcove=alcove, entries=entries, flags=flags)
    return (iv, evidence) if with_evidence else iv
