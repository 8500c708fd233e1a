"""Exact root-system, Weyl-group and inner-product core for simple Lie algebras.

Weights are stored in fundamental-weight coordinates, so dominance is a sign
check and the pairing with the i-th simple coroot is just the i-th coordinate.
All arithmetic is over `fractions.Fraction`; nothing in this module touches
floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

Q = Fraction

_FAMILIES = "ABCDEFG"


class Weight(tuple):
    """A vector in fundamental-weight coordinates with exact entries."""

    def __new__(cls, coords: Iterable) -> "Weight":
        return super().__new__(cls, (Q(c) for c in coords))

    def __add__(self, other):
        return Weight(a + b for a, b in zip(self, other, strict=True))

    def __sub__(self, other):
        return Weight(a - b for a, b in zip(self, other, strict=True))

    def __neg__(self):
        return Weight(-a for a in self)

    def scale(self, c) -> "Weight":
        c = Q(c)
        return Weight(c * a for a in self)

    @property
    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self)

    @property
    def is_dominant(self) -> bool:
        return all(c >= 0 for c in self)

    @staticmethod
    def zero(rank: int) -> "Weight":
        return Weight([0] * rank)


@dataclass(frozen=True)
class WeylElement:
    """A Weyl-group element given as a word in simple reflections.

    The word need not be reduced; ``word[i]`` are 0-based simple-root indices
    and the element acts as ``s[word[0]] s[word[1]] ... s[word[-1]]``.
    """

    word: tuple[int, ...]

    @property
    def parity(self) -> int:
        return len(self.word) % 2

    @property
    def sign(self) -> int:
        return -1 if self.parity else 1

    def inverse(self) -> "WeylElement":
        return WeylElement(tuple(reversed(self.word)))

    def compose(self, other: "WeylElement") -> "WeylElement":
        """Return self * other (other acts first)."""
        return WeylElement(self.word + other.word)


def _cartan_matrix(family: str, rank: int) -> list[list[int]]:
    """Cartan matrix A[i][j] = <alpha_i, alpha_j^vee> in Bourbaki numbering."""
    a = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]

    def chain(pairs):
        for i, j in pairs:
            a[i][j] = -1
            a[j][i] = -1

    if family == "A":
        chain((i, i + 1) for i in range(rank - 1))
    elif family == "B":
        chain((i, i + 1) for i in range(rank - 1))
        a[rank - 2][rank - 1] = -2
    elif family == "C":
        chain((i, i + 1) for i in range(rank - 1))
        a[rank - 1][rank - 2] = -2
    elif family == "D":
        chain((i, i + 1) for i in range(rank - 2))
        chain([(rank - 3, rank - 1)])
    elif family == "E":
        # Bourbaki: node 2 attaches to node 4 (1-based); chain 1-3-4-5-...
        chain([(0, 2), (1, 3)])
        chain((i, i + 1) for i in range(2, rank - 1))
    elif family == "F":
        chain([(0, 1), (2, 3)])
        a[1][2] = -2
        a[2][1] = -1
    elif family == "G":
        a[0][1] = -1
        a[1][0] = -3
    return a


def _valid_type(family: str, rank: int) -> bool:
    if family == "A":
        return rank >= 1
    if family in ("B", "C"):
        return rank >= 2
    if family == "D":
        return rank >= 3
    if family == "E":
        return rank in (6, 7, 8)
    if family == "F":
        return rank == 4
    if family == "G":
        return rank == 2
    return False


def _invert_rational(mat: Sequence[Sequence[Q]]) -> list[list[Q]]:
    """Invert a square matrix by Gauss-Jordan elimination over the rationals."""
    n = len(mat)
    aug = [[Q(x) for x in row] + [Q(1) if i == j else Q(0) for j in range(n)]
           for i, row in enumerate(mat)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


@dataclass(frozen=True)
class RootSystem:
    """Root data of a simple Lie algebra, normalized so the highest root has norm^2 = 2."""

    family: str
    rank: int
    cartan_matrix: tuple[tuple[int, ...], ...]
    root_lengths: tuple[Q, ...]            # d_i = <alpha_i, alpha_i>/2, long roots = 1
    simple_roots: tuple[Weight, ...]
    fundamental_weights: tuple[Weight, ...]
    positive_roots: tuple[Weight, ...]
    positive_root_coeffs: tuple[tuple[int, ...], ...]  # simple-root coefficients
    highest_root: Weight
    rho: Weight
    quadratic_form: tuple[tuple[Q, ...], ...]
    dual_coxeter: int
    marks: tuple[int, ...]
    comarks: tuple[Q, ...]
    inverse_cartan_t: tuple[tuple[Q, ...], ...]
    _root_index: dict = field(repr=False, hash=False, compare=False, default_factory=dict)

    # -- basic linear algebra -------------------------------------------------

    def inner(self, lam: Sequence[Q], mu: Sequence[Q]) -> Q:
        if len(lam) != self.rank or len(mu) != self.rank:
            raise ValueError("coordinate length does not match rank")
        f = self.quadratic_form
        total = Q(0)
        for i, li in enumerate(lam):
            if li:
                row = f[i]
                total += li * sum(row[j] * mu[j] for j in range(self.rank) if mu[j])
        return total

    def norm2(self, lam: Sequence[Q]) -> Q:
        return self.inner(lam, lam)

    def reflect(self, i: int, lam: Weight) -> Weight:
        """Simple reflection s_i acting on a weight."""
        c = lam[i]
        if c == 0:
            return lam
        alpha = self.simple_roots[i]
        return Weight(a - c * b for a, b in zip(lam, alpha))

    def apply_weyl(self, w: WeylElement, lam: Weight) -> Weight:
        for i in reversed(w.word):
            lam = self.reflect(i, lam)
        return lam

    def coroot_pairing(self, lam: Sequence[Q], alpha: Weight) -> Q:
        """<lam, alpha^vee> = 2<lam, alpha>/<alpha, alpha>."""
        return 2 * self.inner(lam, alpha) / self.inner(alpha, alpha)

    def root_coefficients(self, lam: Weight) -> tuple[Q, ...]:
        """Coefficients of a weight in the simple-root basis (coords = A^T c)."""
        inv = self.inverse_cartan_t
        return tuple(sum(inv[i][j] * lam[j] for j in range(self.rank))
                     for i in range(self.rank))

    def in_root_lattice(self, lam: Weight) -> bool:
        return all(c.denominator == 1 for c in self.root_coefficients(lam))

    def level(self, lam: Sequence[Q]) -> Q:
        """Pairing <lam, highest_root> (the level constraint functional)."""
        return self.inner(lam, self.highest_root)

    def root_index(self, alpha: Weight) -> int | None:
        """Index into the signed root list, or None if not a root."""
        return self._root_index.get(tuple(alpha))

    @property
    def all_roots(self) -> tuple[Weight, ...]:
        return self.positive_roots + tuple(-a for a in self.positive_roots)

    @property
    def name(self) -> str:
        return f"{self.family}{self.rank}"


def build_root_system(family: str, rank: int) -> RootSystem:
    """Construct the full root datum for a simple type, or raise ValueError."""
    family = str(family).upper()
    if family not in _FAMILIES or not _valid_type(family, int(rank)):
        raise ValueError(f"not a valid simple type: {family}{rank}")
    rank = int(rank)
    a = _cartan_matrix(family, rank)

    # Symmetrizer d_i with d_i * a[i][j] = d_j * a[j][i], normalized max d = 1.
    d: list[Q | None] = [None] * rank
    d[0] = Q(1)
    todo = [0]
    while todo:
        i = todo.pop()
        for j in range(rank):
            if i != j and a[i][j] != 0 and d[j] is None:
                # A[i][j] d_j = A[j][i] d_i makes diag(d) A symmetric
                d[j] = d[i] * Q(a[j][i], a[i][j])
                todo.append(j)
    if any(x is None for x in d):
        raise ValueError(f"Dynkin diagram of {family}{rank} is not connected")
    top = max(d)
    d = [x / top for x in d]

    # Positive roots by the root-string recursion, in simple-root coefficients.
    def pairing_with_coroot(coeffs: tuple[int, ...], j: int) -> int:
        return sum(c * a[i][j] for i, c in enumerate(coeffs) if c)

    simple_coeffs = [tuple(1 if i == j else 0 for j in range(rank)) for i in range(rank)]
    roots = set(simple_coeffs)
    frontier = list(simple_coeffs)
    while frontier:
        new = []
        for beta in frontier:
            for i in range(rank):
                # p = length of the alpha_i string below beta
                p = 0
                probe = list(beta)
                while True:
                    probe[i] -= 1
                    if tuple(probe) not in roots:
                        break
                    p += 1
                if p - pairing_with_coroot(beta, i) > 0:
                    up = list(beta)
                    up[i] += 1
                    t = tuple(up)
                    if t not in roots:
                        roots.add(t)
                        new.append(t)
        frontier = new

    def height(c):
        return sum(c)

    pos_coeffs = sorted(roots, key=lambda c: (height(c), c))
    highest_coeffs = pos_coeffs[-1]
    if sum(1 for c in pos_coeffs if height(c) == height(highest_coeffs)) != 1:
        raise AssertionError("highest root is not unique")

    def to_fw(coeffs: Sequence[int]) -> Weight:
        return Weight(sum(coeffs[i] * a[i][j] for i in range(rank)) for j in range(rank))

    simple_roots = tuple(to_fw(c) for c in simple_coeffs)
    positive_roots = tuple(to_fw(c) for c in pos_coeffs)
    highest_root = to_fw(highest_coeffs)

    # Quadratic form F = A^{-1} D in fundamental-weight coordinates.
    ainv = _invert_rational([[Q(x) for x in row] for row in a])
    f = tuple(tuple(ainv[i][j] * d[j] for j in range(rank)) for i in range(rank))

    rho = Weight([1] * rank)
    half_sum = Weight.zero(rank)
    for r in positive_roots:
        half_sum = half_sum + r
    half_sum = half_sum.scale(Q(1, 2))
    if half_sum != rho:
        raise AssertionError("rho is not the half-sum of positive roots")

    def inner_f(x, y):
        return sum(x[i] * f[i][j] * y[j] for i in range(rank) for j in range(rank))

    if inner_f(highest_root, highest_root) != 2:
        raise AssertionError("highest root does not have norm^2 = 2")
    hdual = 1 + inner_f(rho, highest_root)
    if hdual.denominator != 1:
        raise AssertionError("dual Coxeter number is not an integer")

    marks = tuple(int(c) for c in highest_coeffs)
    comarks = tuple(Q(m) * d[i] for i, m in enumerate(marks))

    index = {}
    for k, w in enumerate(positive_roots):
        index[tuple(w)] = k
        index[tuple(-w)] = -1 - k

    at = [[Q(a[j][i]) for j in range(rank)] for i in range(rank)]
    inverse_cartan_t = tuple(tuple(row) for row in _invert_rational(at))

    return RootSystem(
        family=family,
        rank=rank,
        cartan_matrix=tuple(tuple(row) for row in a),
        root_lengths=tuple(d),
        simple_roots=simple_roots,
        fundamental_weights=tuple(
            Weight(1 if i == j else 0 for j in range(rank)) for i in range(rank)
        ),
        positive_roots=positive_roots,
        positive_root_coeffs=tuple(pos_coeffs),
        highest_root=highest_root,
        rho=rho,
        quadratic_form=f,
        dual_coxeter=int(hdual),
        marks=marks,
        comarks=comarks,
        inverse_cartan_t=inverse_cartan_t,
        _root_index=index,
    )


def inner_product(rs: RootSystem, lam: Weight, mu: Weight) -> Q:
    """Ad-invariant inner product with the highest root having norm^2 = 2."""
    return rs.inner(lam, mu)


def weyl_orbit(rs: RootSystem, lam: Weight) -> frozenset[Weight]:
    """Orbit of a weight under the full Weyl group (reflection closure)."""
    seen = {lam}
    frontier = [lam]
    while frontier:
        nxt = []
        for w in frontier:
            for i in range(rs.rank):
                r = rs.reflect(i, w)
                if r not in seen:
                    seen.add(r)
                    nxt.append(r)
        frontier = nxt
    return frozenset(seen)


def dominant_representative(rs: RootSystem, lam: Weight) -> tuple[Weight, WeylElement]:
    """Dominant weight in the orbit of lam plus a word w with w(lam) dominant.

    Deterministic: always reflects at the lowest-index negative coordinate.
    """
    word: list[int] = []
    cur = lam
    while True:
        neg = next((i for i, c in enumerate(cur) if c < 0), None)
        if neg is None:
            return cur, WeylElement(tuple(word))
        cur = rs.reflect(neg, cur)
        word.insert(0, neg)


@dataclass(frozen=True)
class AlcoveLocation:
    """Which closed-alcove inequalities hold with equality for a point."""

    status: str                       # "interior" | "face" | "outside"
    walls: tuple[str, ...]            # subset of "alpha_i" / "affine" met with equality

    @property
    def inside(self) -> bool:
        return self.status != "outside"


def alcove_membership(rs: RootSystem, xi: Weight) -> AlcoveLocation:
    """Locate xi relative to the fundamental alcove {xi dominant, <highest_root, xi> <= 1}."""
    walls = []
    for i in range(rs.rank):
        v = rs.inner(xi, rs.simple_roots[i])
        if v < 0:
            return AlcoveLocation("outside", ())
        if v == 0:
            walls.append(f"alpha_{i + 1}")
    lvl = rs.level(xi)
    if lvl > 1:
        return AlcoveLocation("outside", ())
    if lvl == 1:
        walls.append("affine")
    if walls:
        return AlcoveLocation("face", tuple(walls))
    return AlcoveLocation("interior", ())


@dataclass(frozen=True)
class CentralizerData:
    """Root data of the loop-group isotropy algebra at a point of the alcove.

    Each root is a pair (n, alpha): the isotropy algebra contains the loop
    direction with Fourier exponent n = -<alpha, xi> in the alpha root space.
    A pair is positive when n > 0, or n = 0 and alpha is a positive root of
    the ambient algebra.  rho_sigma is half the sum of the alpha-components of
    the positive pairs.
    """

    rs: RootSystem
    xi: Weight
    pairs: tuple[tuple[int, Weight], ...]
    positive_pairs: tuple[tuple[int, Weight], ...]
    rho_sigma: Weight

    @property
    def is_twisted(self) -> bool:
        return any(n != 0 for n, _ in self.pairs)

    @property
    def pair_set(self) -> frozenset:
        return frozenset((n, tuple(a)) for n, a in self.pairs)

    @property
    def finite_positive_roots(self) -> tuple[Weight, ...]:
        """Positive roots at Fourier exponent zero (the untwisted part)."""
        return tuple(a for n, a in self.positive_pairs if n == 0)

    def simple_pairs(self) -> tuple[tuple[int, Weight], ...]:
        """Indecomposable positive pairs (simple roots of the isotropy algebra)."""
        pos = list(self.positive_pairs)
        keys = {(n, tuple(a)) for n, a in pos}
        out = []
        for n, a in pos:
            decomposable = False
            for n1, a1 in pos:
                n2 = n - n1
                a2 = a - a1
                if (n1, tuple(a1)) != (n, tuple(a)) and (n2, tuple(a2)) in keys:
                    decomposable = True
                    break
            if not decomposable:
                out.append((n, a))
        return tuple(out)

    def describe(self) -> str:
        if not self.pairs:
            return "maximal torus"
        if not self.is_twisted and len(self.pairs) == 2 * len(self.rs.positive_roots):
            return "full group"
        return f"{len(self.pairs)} root pairs" + (" (twisted)" if self.is_twisted else "")


def centralizer_root_data(rs: RootSystem, xi: Weight) -> CentralizerData:
    """Roots (n, alpha) with n = -<alpha, xi> integral, for xi in the closed alcove."""
    loc = alcove_membership(rs, xi)
    if loc.status == "outside":
        raise ValueError("point lies outside the closed fundamental alcove")
    pairs = []
    for alpha in rs.all_roots:
        v = rs.inner(alpha, xi)
        if v.denominator == 1:
            pairs.append((-int(v), alpha))
    pos_set = set(rs.positive_roots)
    positive = [(n, a) for n, a in pairs if n > 0 or (n == 0 and a in pos_set)]
    rho_sigma = Weight.zero(rs.rank)
    for _, a in positive:
        rho_sigma = rho_sigma + a
    rho_sigma = rho_sigma.scale(Q(1, 2))
    return CentralizerData(
        rs=rs,
        xi=xi,
        pairs=tuple(pairs),
        positive_pairs=tuple(positive),
        rho_sigma=rho_sigma,
    )
