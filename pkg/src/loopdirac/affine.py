"""Affine weight arithmetic: energy/level bookkeeping, affine Weyl action, alcoves.

An affine weight (m, lam, k) has energy m, finite part lam and level k.  The
pairing is <lam1, lam2> - m1*k2 - m2*k1; translations shift the energy so the
pairing is preserved.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .rootsys import Q, RootSystem, Weight, WeylElement, dominant_representative

MAX_REDUCTION_SWEEPS = 10000


@dataclass(frozen=True)
class AffineWeight:
    m: Q
    lam: Weight
    k: Q

    def __post_init__(self):
        object.__setattr__(self, "m", Q(self.m))
        object.__setattr__(self, "k", Q(self.k))

    def __add__(self, other: "AffineWeight") -> "AffineWeight":
        return AffineWeight(self.m + other.m, self.lam + other.lam, self.k + other.k)

    def __sub__(self, other: "AffineWeight") -> "AffineWeight":
        return AffineWeight(self.m - other.m, self.lam - other.lam, self.k - other.k)

    def scale(self, c) -> "AffineWeight":
        c = Q(c)
        return AffineWeight(c * self.m, self.lam.scale(c), c * self.k)


@dataclass(frozen=True)
class AffineWeylElement:
    """Pair (w, z) acting as a |-> translate(z, w . a); z lies in the root lattice."""

    w: WeylElement
    z: Weight

    def compose(self, rs: RootSystem, other: "AffineWeylElement") -> "AffineWeylElement":
        """(w1,z1)(w2,z2) = (w1 w2, z1 + w1(z2))."""
        return AffineWeylElement(
            self.w.compose(other.w), self.z + rs.apply_weyl(self.w, other.z)
        )

    def inverse(self, rs: RootSystem) -> "AffineWeylElement":
        wi = self.w.inverse()
        return AffineWeylElement(wi, -rs.apply_weyl(wi, self.z))

    @staticmethod
    def identity(rank: int) -> "AffineWeylElement":
        return AffineWeylElement(WeylElement(()), Weight.zero(rank))


def rho_affine(rs: RootSystem) -> AffineWeight:
    """(0, rho, dual Coxeter number), the spin-module highest weight."""
    return AffineWeight(0, rs.rho, rs.dual_coxeter)


def affine_inner_product(rs: RootSystem, a: AffineWeight, b: AffineWeight) -> Q:
    if len(a.lam) != rs.rank or len(b.lam) != rs.rank:
        raise ValueError("rank mismatch")
    return rs.inner(a.lam, b.lam) - a.m * b.k - b.m * a.k


def affine_norm2(rs: RootSystem, a: AffineWeight) -> Q:
    return affine_inner_product(rs, a, a)


def translate(rs: RootSystem, z: Weight, a: AffineWeight) -> AffineWeight:
    """Translation part of the affine Weyl action: energy picks up <lam,z> + k|z|^2/2."""
    if not rs.in_root_lattice(z):
        raise ValueError("translation vector is not in the root lattice")
    m = a.m + rs.inner(a.lam, z) + a.k * rs.norm2(z) / 2
    return AffineWeight(m, a.lam + z.scale(a.k), a.k)


def affine_weyl_apply(rs: RootSystem, g: AffineWeylElement, a: AffineWeight) -> AffineWeight:
    finite = AffineWeight(a.m, rs.apply_weyl(g.w, a.lam), a.k)
    return translate(rs, g.z, finite)


def level_k_alcove(rs: RootSystem, k: int) -> list[Weight]:
    """Dominant integral weights with <lam, highest_root> <= k, in lex order.

    This ordering fixes the coordinate layout of index vectors at level k.
    """
    if k < 0:
        raise ValueError("level must be nonnegative")
    comarks = rs.comarks
    out = []

    def rec(prefix, used):
        i = len(prefix)
        if i == rs.rank:
            out.append(Weight(prefix))
            return
        c = comarks[i]
        top = int((k - used) / c)
        for v in range(top + 1):
            rec(prefix + [v], used + c * v)

    rec([], Q(0))
    return sorted(out)


def _highest_root_reflection(rs: RootSystem) -> WeylElement:
    """A word for the reflection in the highest root."""
    # Walk the highest root down to a simple root, tracking the conjugator:
    # reflecting at any j with <cur, alpha_j^vee> > 0 strictly reduces height.
    word: list[int] = []
    cur = rs.highest_root
    while cur not in rs.simple_roots:
        j = next(j for j, c in enumerate(cur) if c > 0)
        cur = rs.reflect(j, cur)
        word.append(j)
    i = rs.simple_roots.index(cur)
    # highest_root = W(alpha_i) with W = s_{word[0]} ... s_{word[-1]}
    return WeylElement(tuple(word) + (i,) + tuple(reversed(word)))


def affine_dominant_representative(
    rs: RootSystem, a: AffineWeight
) -> tuple[AffineWeight, AffineWeylElement]:
    """Reduce to the level-k alcove by alternating dominance and affine-wall sweeps."""
    if a.k <= 0:
        raise ValueError("reduction requires positive level")
    if not a.lam.is_integral:
        raise ValueError("reduction requires an integral finite part")
    g = AffineWeylElement.identity(rs.rank)
    r0_w = _highest_root_reflection(rs)
    cur = a
    for _ in range(MAX_REDUCTION_SWEEPS):
        if not cur.lam.is_dominant:
            dom, w = dominant_representative(rs, cur.lam)
            step = AffineWeylElement(w, Weight.zero(rs.rank))
        elif rs.level(cur.lam) > a.k:
            step = AffineWeylElement(r0_w, rs.highest_root)
        else:
            return cur, g
        cur = affine_weyl_apply(rs, step, cur)
        g = step.compose(rs, g)
    raise RuntimeError(
        f"alcove reduction did not terminate within {MAX_REDUCTION_SWEEPS} sweeps"
    )
