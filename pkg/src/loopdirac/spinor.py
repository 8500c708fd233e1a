"""Clifford algebras and spinor modules.

The finite spinor module of p = g (-) h is the exterior algebra on the
negative-root directions missing from h; its loop analogue adds, at every
positive energy, all complexified directions of p at that Fourier mode.  The
occupation basis is exact (energies, weights, parities are rational data);
operator matrices are complex double precision, with creation/annihilation
entries scaled so that real directions give self-adjoint Clifford operators.

Energy convention: the mode at energy +n (n > 0) is the loop direction with
Fourier exponent -n, so an isotropy pair (n, alpha) removes the spinor mode at
(energy -n, root alpha).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.sparse as sp

from .chevalley import ChevalleyBasis
from .rootsys import CentralizerData, Q, RootSystem, Weight

MAX_BASIS_DIM = 200000


@dataclass(frozen=True)
class Direction:
    """A homogeneous loop-algebra direction at a definite energy shift.

    Root directions are labelled by the exact root; Cartan directions by a
    float coefficient vector in fundamental-weight coordinates (only operator
    entries ever touch Cartan labels, never the exact weight bookkeeping).
    """

    energy: int
    kind: str                         # "root" | "cartan"
    root: Weight | None = None
    cartan: tuple[float, ...] | None = None

    def __repr__(self):
        if self.kind == "root":
            return f"Direction(e={self.energy}, root={tuple(map(str, self.root))})"
        return f"Direction(e={self.energy}, cartan={self.cartan})"


def root_direction(energy: int, alpha: Weight) -> Direction:
    return Direction(energy=energy, kind="root", root=alpha)


def cartan_direction(energy: int, w) -> Direction:
    vec = tuple(float(c) for c in w)
    return Direction(energy=energy, kind="cartan", cartan=vec)


@dataclass(frozen=True)
class Mode:
    """A creation mode of the polarized spinor module."""

    idx: int
    energy: int               # >= 0
    kind: str                 # "root" | "cartan"
    root: Weight | None
    cartan_index: int | None
    weight: Weight
    pair_norm: Q              # B(creation direction, annihilation partner)


def mode_inventory(rs: RootSystem, cz: CentralizerData | None, trunc: int
                   ) -> list[tuple[int, str, Weight | None, int | None]]:
    """Creation modes (energy, kind, root, cartan axis) of the polarized module.

    Energy 0 holds the negative-root directions missing from h (plus paired
    Cartan axes when nothing is removed); every energy n >= 1 holds all
    p-directions at that Fourier mode.
    """
    excluded = cz.pair_set if cz is not None else frozenset()
    out: list[tuple[int, str, Weight | None, int | None]] = []
    for alpha in rs.positive_roots:
        if (0, tuple(alpha)) not in excluded:
            out.append((0, "root", -alpha, None))
    if cz is None:
        for j in range(rs.rank // 2):
            out.append((0, "cartan", None, 2 * j))
        if rs.rank % 2:
            out.append((0, "cartan", None, rs.rank - 1))
    for n in range(1, trunc + 1):
        for beta in rs.all_roots:
            if (-n, tuple(beta)) not in excluded:
                out.append((n, "root", beta, None))
        for s in range(rs.rank):
            out.append((n, "cartan", None, s))
    return out


class SpinorBasis:
    """Occupation basis of the truncated spinor module for p = Lg (-) h.

    With ``cz=None`` nothing is removed (the spinor module of the full loop
    algebra, vacuum weight rho); otherwise the isotropy directions of ``cz``
    are removed and the vacuum carries rho_G - rho_H at energy zero.
    """

    def __init__(self, rs: RootSystem, cz: CentralizerData | None, trunc: int,
                 max_dim: int = MAX_BASIS_DIM):
        if trunc < 0:
            raise ValueError("truncation must be nonnegative")
        self.rs = rs
        self.cz = cz
        self.trunc = trunc
        self.chev = ChevalleyBasis(rs)
        rank = rs.rank

        self._excluded = cz.pair_set if cz is not None else frozenset()
        self._positive_set = {tuple(a) for a in rs.positive_roots}
        self.rho_h = cz.rho_sigma if cz is not None else Weight.zero(rank)
        self.vacuum_weight = rs.rho - self.rho_h

        # orthonormal Cartan axes from the exact Gram matrix
        self.form_float = np.array([[float(x) for x in row] for row in rs.quadratic_form])
        chol = np.linalg.cholesky(self.form_float)
        self._cartan_axes = np.linalg.inv(chol)     # row s = axis x_s in fw coords
        self._cartan_expand = chol.T                # coeffs of h_w in the axes: chol.T @ w

        modes: list[Mode] = []
        self.aux_zero_mode = cz is None and rank % 2 == 1
        for energy, kind, root, cidx in mode_inventory(rs, cz, trunc):
            if kind == "root":
                modes.append(Mode(len(modes), energy, "root", root, None,
                                  root, 1 / self.chev.d(root)))
            else:
                modes.append(Mode(len(modes), energy, "cartan", None, cidx,
                                  Weight.zero(rank), Q(1)))
        self.modes = modes
        self._mode_by_key = {}
        for m in modes:
            if m.kind == "root":
                self._mode_by_key[("root", m.energy, tuple(m.root))] = m
            else:
                self._mode_by_key[("cartan", m.energy, m.cartan_index)] = m

        elements: list[tuple[int, ...]] = []

        def extend(start: int, occ: list[int], energy: int):
            elements.append(tuple(occ))
            if len(elements) > max_dim:
                raise MemoryError("spinor basis exceeds the configured dimension cap")
            for i in range(start, len(modes)):
                e = energy + modes[i].energy
                if e <= trunc:
                    occ.append(i)
                    extend(i + 1, occ, e)
                    occ.pop()

        extend(0, [], 0)

        decorated = []
        for occ in elements:
            w = self.vacuum_weight
            e = 0
            for i in occ:
                w = w + modes[i].weight
                e += modes[i].energy
            decorated.append((e, tuple(w), occ))
        decorated.sort()
        self.elements = [occ for _, _, occ in decorated]
        self.energies = [e for e, _, _ in decorated]
        self.weights = [Weight(w) for _, w, _ in decorated]
        self.parities = [len(occ) % 2 for occ in self.elements]
        self.index = {occ: i for i, occ in enumerate(self.elements)}
        self._op_cache: dict = {}

    @property
    def dim(self) -> int:
        return len(self.elements)

    def guard_indices(self, max_energy: int) -> list[int]:
        return [i for i, e in enumerate(self.energies) if e <= max_energy]

    def weight_multiset(self) -> dict[tuple[int, Weight, int], int]:
        """(energy, weight, parity) -> multiplicity over the truncated basis."""
        out: dict[tuple[int, Weight, int], int] = {}
        for e, w, p in zip(self.energies, self.weights, self.parities):
            key = (e, w, p)
            out[key] = out.get(key, 0) + 1
        return out

    def in_polarization(self, d: Direction) -> bool:
        if abs(d.energy) > self.trunc:
            return False
        if d.kind == "cartan":
            return d.energy != 0 or self.cz is None
        if self.cz is None:
            return True
        return (-d.energy, tuple(d.root)) not in self._excluded

    def p_direction_basis(self) -> list[tuple[Direction, Direction, float]]:
        """All directions of p within the cutoff, each with (dual direction, dual coefficient)."""
        out = []
        for m in self.modes:
            if m.kind == "root":
                g = float(m.pair_norm)
                v = root_direction(m.energy, m.root)
                out.append((v, root_direction(-m.energy, -m.root), 1.0 / g))
                vbar = root_direction(-m.energy, -m.root)
                out.append((vbar, root_direction(m.energy, m.root), 1.0 / g))
            else:
                axis = self._cartan_axes[m.cartan_index]
                if m.energy == 0:
                    if self.cz is None:
                        # self-dual zero-energy axes; the paired axis too
                        pass
                else:
                    v = Direction(m.energy, "cartan", cartan=tuple(axis))
                    out.append((v, Direction(-m.energy, "cartan", cartan=tuple(axis)), 1.0))
                    vbar = Direction(-m.energy, "cartan", cartan=tuple(axis))
                    out.append((vbar, Direction(m.energy, "cartan", cartan=tuple(axis)), 1.0))
        if self.cz is None:
            for s in range(self.rs.rank):
                axis = tuple(self._cartan_axes[s])
                v = Direction(0, "cartan", cartan=axis)
                out.append((v, v, 1.0))
        return out

    # -- elementary operators --------------------------------------------------

    def _raw_op(self, mode: Mode, create: bool) -> sp.csr_matrix:
        """Creation/annihilation with symmetric normalization sqrt(2 g)."""
        key = ("raw", mode.idx, create)
        cached = self._op_cache.get(key)
        if cached is not None:
            return cached
        amp = math.sqrt(2 * float(mode.pair_norm))
        rows, cols, vals = [], [], []
        for j, occ in enumerate(self.elements):
            present = mode.idx in occ
            if create and not present:
                new = tuple(sorted(occ + (mode.idx,)))
                tgt = self.index.get(new)
                if tgt is not None:
                    sign = (-1) ** sum(1 for t in occ if t < mode.idx)
                    rows.append(tgt)
                    cols.append(j)
                    vals.append(sign * amp)
            elif not create and present:
                new = tuple(t for t in occ if t != mode.idx)
                sign = (-1) ** sum(1 for t in new if t < mode.idx)
                rows.append(self.index[new])
                cols.append(j)
                vals.append(sign * amp)
        mat = sp.csr_matrix(
            (np.array(vals, dtype=complex), (rows, cols)), shape=(self.dim, self.dim)
        )
        self._op_cache[key] = mat
        return mat

    def _cartan_axis_op(self, energy: int, s: int) -> sp.csr_matrix:
        key = ("axis", energy, s)
        cached = self._op_cache.get(key)
        if cached is not None:
            return cached
        rank = self.rs.rank
        if energy > 0:
            mat = self._raw_op(self._mode_by_key[("cartan", energy, s)], create=True)
        elif energy < 0:
            mat = self._raw_op(self._mode_by_key[("cartan", -energy, s)], create=False)
        else:
            if self.cz is not None:
                raise ValueError("zero-energy Cartan directions lie in the isotropy algebra")
            npairs = rank // 2
            if s < 2 * npairs:
                m = self._mode_by_key[("cartan", 0, 2 * (s // 2))]
                b = self._raw_op(m, create=True)
                a = self._raw_op(m, create=False)
                mat = ((b + a) if s % 2 == 0 else 1j * (b - a)) / math.sqrt(2)
            else:
                m = self._mode_by_key[("cartan", 0, rank - 1)]
                b = self._raw_op(m, create=True)
                a = self._raw_op(m, create=False)
                mat = (b + a) / math.sqrt(2)
        mat = sp.csr_matrix(mat)
        self._op_cache[key] = mat
        return mat


def finite_spinor_module(rs: RootSystem, cz: CentralizerData) -> SpinorBasis:
    """Exterior algebra on the negative-root directions of g missing from h."""
    if cz.is_twisted:
        raise ValueError("finite spinor module needs an isotropy algebra inside g")
    return SpinorBasis(rs, cz, trunc=0)


def truncated_loop_spinor(
    rs: RootSystem, cz: CentralizerData | None, trunc: int, max_dim: int = MAX_BASIS_DIM
) -> SpinorBasis:
    """Occupation basis of the loop spinor module, truncated at total energy."""
    return SpinorBasis(rs, cz, trunc=trunc, max_dim=max_dim)


@dataclass
class OperatorMatrix:
    """Sparse operator over a labelled basis."""

    basis: object
    mat: sp.csr_matrix

    @property
    def shape(self):
        return self.mat.shape

    def dense(self) -> np.ndarray:
        return self.mat.toarray()

    def adjoint(self) -> "OperatorMatrix":
        return OperatorMatrix(self.basis, self.mat.conjugate().transpose().tocsr())

    def __add__(self, other):
        return OperatorMatrix(self.basis, (self.mat + other.mat).tocsr())

    def __sub__(self, other):
        return OperatorMatrix(self.basis, (self.mat - other.mat).tocsr())

    def __matmul__(self, other):
        return OperatorMatrix(self.basis, (self.mat @ other.mat).tocsr())

    def scale(self, c) -> "OperatorMatrix":
        return OperatorMatrix(self.basis, (self.mat * c).tocsr())

    def anticommutator(self, other) -> "OperatorMatrix":
        return OperatorMatrix(self.basis, (self.mat @ other.mat + other.mat @ self.mat).tocsr())

    def commutator(self, other) -> "OperatorMatrix":
        return OperatorMatrix(self.basis, (self.mat @ other.mat - other.mat @ self.mat).tocsr())

    def entries(self):
        coo = self.mat.tocoo()
        yield from zip(coo.row.tolist(), coo.col.tolist(), coo.data.tolist())

    def max_abs(self) -> float:
        return float(abs(self.mat).max()) if self.mat.nnz else 0.0

    def operator_norm(self) -> float:
        if self.shape[0] == 0:
            return 0.0
        return float(np.linalg.norm(self.dense(), ord=2))

    def max_abs_on_columns(self, cols) -> float:
        if not cols:
            return 0.0
        sub = self.mat.tocsc()[:, cols]
        return float(abs(sub).max()) if sub.nnz else 0.0


def zero_op(basis) -> OperatorMatrix:
    return OperatorMatrix(basis, sp.csr_matrix((basis.dim, basis.dim), dtype=complex))


def identity_op(basis) -> OperatorMatrix:
    return OperatorMatrix(basis, sp.identity(basis.dim, format="csr", dtype=complex))


def clifford_op(basis: SpinorBasis, d: Direction) -> OperatorMatrix:
    """Clifford action of a polarization direction on the occupation basis."""
    if abs(d.energy) > basis.trunc:
        raise ValueError("direction lies outside the energy truncation")
    if not basis.in_polarization(d):
        raise ValueError("direction lies in the isotropy algebra, not in p")
    key = ("cliff", d)
    cached = basis._op_cache.get(key)
    if cached is not None:
        return OperatorMatrix(basis, cached)
    if d.kind == "cartan":
        coeffs = basis._cartan_expand @ np.array(d.cartan)
        mat = sp.csr_matrix((basis.dim, basis.dim), dtype=complex)
        for s, c in enumerate(coeffs):
            if abs(c) > 1e-15:
                mat = mat + basis._cartan_axis_op(d.energy, s) * c
        mat = sp.csr_matrix(mat)
    else:
        alpha = d.root
        if d.energy > 0 or (d.energy == 0 and tuple(alpha) not in basis._positive_set):
            mode = basis._mode_by_key.get(("root", d.energy, tuple(alpha)))
            if mode is None:
                raise ValueError("direction is not a mode of this basis")
            mat = basis._raw_op(mode, create=True)
        else:
            mode = basis._mode_by_key.get(("root", -d.energy, tuple(-alpha)))
            if mode is None:
                raise ValueError("direction is not a mode of this basis")
            mat = basis._raw_op(mode, create=False)
    basis._op_cache[key] = mat
    return OperatorMatrix(basis, mat)


def pairing_b(basis: SpinorBasis, d1: Direction, d2: Direction) -> float:
    """Loop inner product B of two homogeneous directions."""
    if d1.energy + d2.energy != 0 or d1.kind != d2.kind:
        return 0.0
    if d1.kind == "root":
        if not any(d1.root + d2.root):
            return 1.0 / float(basis.chev.d(d1.root))
        return 0.0
    v1 = np.array(d1.cartan)
    v2 = np.array(d2.cartan)
    return float(v1 @ basis.form_float @ v2)


def cocycle(basis: SpinorBasis, d1: Direction, d2: Direction) -> float:
    """Central 2-cocycle: (Fourier exponent of d1) * B(d1, d2) = -energy(d1) * B."""
    return -d1.energy * pairing_b(basis, d1, d2)


def bracket_directions(basis: SpinorBasis, d1: Direction, d2: Direction
                       ) -> list[tuple[Direction, complex]]:
    """Loop-algebra bracket (central term omitted) as direction combinations."""
    rs = basis.rs
    e = d1.energy + d2.energy
    out: list[tuple[Direction, complex]] = []
    if d1.kind == "cartan" and d2.kind == "cartan":
        return out
    if d1.kind == "cartan" or d2.kind == "cartan":
        if d1.kind == "cartan":
            w, rdir, sgn = d1.cartan, d2, 1.0
        else:
            w, rdir, sgn = d2.cartan, d1, -1.0
        beta = np.array([float(c) for c in rdir.root])
        c = float(beta @ basis.form_float @ np.array(w))
        if abs(c) > 1e-15:
            out.append((root_direction(e, rdir.root), sgn * c))
        return out
    s = d1.root + d2.root
    if not any(s):
        out.append((cartan_direction(e, basis.chev.coroot_weight(d1.root)), 1.0 + 0j))
        return out
    if basis.chev.is_root(s):
        n = basis.chev.n(d1.root, d2.root)
        if n:
            out.append((root_direction(e, Weight(s)), complex(n)))
    return out


def project_to_p(basis: SpinorBasis, terms):
    """Drop components lying in the isotropy algebra or beyond the truncation."""
    return [(d, c) for d, c in terms if basis.in_polarization(d)]


def _normal_ordered_product(basis, d1, d2) -> OperatorMatrix:
    """:c(d1) c(d2): assembled so intermediate states never cross the cutoff.

    The only reordering needed is annihilation-then-creation across nonzero
    energies; the swapped product differs from the plain one exactly by the
    dropped contraction scalar.
    """
    c1 = clifford_op(basis, d1)
    c2 = clifford_op(basis, d2)
    if d1.energy < 0 < d2.energy:
        return OperatorMatrix(basis, (-(c2.mat @ c1.mat)).tocsr())
    return OperatorMatrix(basis, (c1.mat @ c2.mat).tocsr())


def ad_quadratic(basis: SpinorBasis, x: Direction) -> OperatorMatrix:
    """Normal-ordered quadratic spin action of a loop direction.

    (1/4) * sum over a basis v of p of :c([x, v]_p) c(v^dual):, with the scalar
    of zero-energy Cartan directions fixed so the vacuum carries weight
    rho_G - rho_H at energy zero.
    """
    if abs(x.energy) > basis.trunc:
        raise ValueError("direction lies outside the energy truncation")
    total = sp.csr_matrix((basis.dim, basis.dim), dtype=complex)
    for v, dual, dual_coeff in basis.p_direction_basis():
        br = project_to_p(basis, bracket_directions(basis, x, v))
        if not br:
            continue
        for d, coeff in br:
            term = _normal_ordered_product(basis, d, dual)
            total = total + term.mat * (coeff * dual_coeff / 4.0)
    op = OperatorMatrix(basis, sp.csr_matrix(total))
    if x.kind == "cartan" and x.energy == 0:
        vac = basis.index[()]
        target = float(np.array(x.cartan) @ basis.form_float
                       @ np.array([float(c) for c in basis.vacuum_weight]))
        current = op.mat[vac, vac]
        delta = target - current
        if abs(delta) > 1e-14:
            op = OperatorMatrix(
                basis, (op.mat + delta * sp.identity(basis.dim, dtype=complex)).tocsr()
            )
    return op
