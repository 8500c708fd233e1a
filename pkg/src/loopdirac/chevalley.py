"""Chevalley basis structure constants for the complexified simple Lie algebras.

Elements are stored as (Cartan part, root part): the Cartan part is the weight
w labelling h_w (acting on a weight mu by <mu, w>), the root part maps a root
to its coefficient.  Signs follow the usual construction: for each non-simple
positive root the decomposition with smallest first summand gets N = p + 1 > 0
and every other constant is propagated through the Jacobi relations, so that
[e_a, e_{-a}] = h_{a^vee} and N_{-a,-b} = -N_{a,b} hold throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .rootsys import Q, RootSystem, Weight


@dataclass(frozen=True)
class LieElement:
    """Element of the complexified algebra: h-part label plus root coefficients."""

    h: Weight
    e: tuple[tuple[tuple, complex], ...]   # ((root coords), coefficient)

    def as_dict(self):
        return dict(self.e)


def _elem(rank: int, h: Weight | None = None, e: dict | None = None) -> LieElement:
    h = h if h is not None else Weight.zero(rank)
    items = tuple(sorted((k, v) for k, v in (e or {}).items() if v != 0))
    return LieElement(h, items)


class ChevalleyBasis:
    """Bracket and invariant-form tables over a fixed root system."""

    def __init__(self, rs: RootSystem):
        self.rs = rs
        self._pos_index = {tuple(a): i for i, a in enumerate(rs.positive_roots)}
        self._roots = {tuple(a) for a in rs.all_roots}
        self._special: dict[tuple, Q] = {}
        self._memo: dict[tuple, Q] = {}
        self._build_special_pairs()

    # -- root helpers ---------------------------------------------------------

    def is_root(self, w: Weight) -> bool:
        return tuple(w) in self._roots

    def d(self, alpha: Weight) -> Q:
        """Half the squared length <alpha, alpha>/2."""
        return self.rs.norm2(alpha) / 2

    def coroot_weight(self, alpha: Weight) -> Weight:
        """Weight label of h_alpha = alpha^vee under the form identification."""
        return alpha.scale(1 / self.d(alpha))

    def _string_down(self, beta: Weight, alpha: Weight) -> int:
        """p = max j with beta - j*alpha a root."""
        p = 0
        cur = beta - alpha
        while self.is_root(cur):
            p += 1
            cur = cur - alpha
        return p

    # -- structure constants --------------------------------------------------

    def _build_special_pairs(self):
        rs = self.rs
        pos = list(rs.positive_roots)
        idx = self._pos_index
        by_height = sorted(
            (g for g in pos if g not in rs.simple_roots),
            key=lambda g: sum(rs.positive_root_coeffs[idx[tuple(g)]]),
        )
        for gamma in by_height:
            decomps = []
            for a in pos:
                b = gamma - a
                tb = tuple(b)
                if tb in idx and idx[tuple(a)] < idx[tb]:
                    decomps.append((a, b))
            decomps.sort(key=lambda ab: idx[tuple(ab[0])])
            a0, b0 = decomps[0]
            self._special[(tuple(a0), tuple(b0))] = Q(self._string_down(b0, a0) + 1)
            for a, b in decomps[1:]:
                # Jacobi on (a0, b0, -a) paired against e_{-b}:
                #   N(b0,-a) N(a0, b0-a) + N(-a,a0) N(b0, a0-a) + N(a0,b0) N(-a, gamma) = 0
                # and N(-a, gamma) = <b,b>/<gamma,gamma> * N(a, b).
                t = self.n(b0, -a) * self.n(a0, b0 - a) + self.n(-a, a0) * self.n(b0, a0 - a)
                val = -t * self.rs.norm2(gamma) / (
                    self.rs.norm2(b) * self._special[(tuple(a0), tuple(b0))]
                )
                if val.denominator != 1:
                    raise AssertionError("non-integral structure constant")
                self._special[(tuple(a), tuple(b))] = val

    def n(self, a: Weight, b: Weight) -> Q:
        """Constant N_{a,b} with [e_a, e_b] = N_{a,b} e_{a+b}, 0 if a+b is not a root."""
        if not self.is_root(a) or not self.is_root(b):
            return Q(0)
        s = a + b
        if not self.is_root(s) or not any(s):
            return Q(0)
        key = (tuple(a), tuple(b))
        if key in self._memo:
            return self._memo[key]
        apos = tuple(a) in self._pos_index
        bpos = tuple(b) in self._pos_index
        if apos and bpos:
            ia, ib = self._pos_index[tuple(a)], self._pos_index[tuple(b)]
            val = self._special[(tuple(a), tuple(b))] if ia < ib else -self._special[(tuple(b), tuple(a))]
        elif not apos and not bpos:
            val = -self.n(-a, -b)
        elif apos and not bpos:
            if tuple(s) in self._pos_index:
                theta = -s
                val = self.rs.norm2(s) * self.n(b, theta) / self.rs.norm2(a)
            else:
                theta = -s
                val = self.rs.norm2(s) * self.n(theta, a) / self.rs.norm2(b)
        else:
            val = -self.n(b, a)
        if val.denominator != 1:
            raise AssertionError("non-integral structure constant")
        self._memo[key] = val
        return val

    # -- algebra operations ---------------------------------------------------

    def zero(self) -> LieElement:
        return _elem(self.rs.rank)

    def cartan(self, w: Weight) -> LieElement:
        return _elem(self.rs.rank, h=w)

    def root_vector(self, alpha: Weight, coeff=1) -> LieElement:
        return _elem(self.rs.rank, e={tuple(alpha): coeff})

    def add(self, x: LieElement, y: LieElement, cx=1, cy=1) -> LieElement:
        e = {}
        for k, v in x.e:
            e[k] = e.get(k, 0) + cx * v
        for k, v in y.e:
            e[k] = e.get(k, 0) + cy * v
        h = Weight(cx * a + cy * b for a, b in zip(x.h, y.h))
        return _elem(self.rs.rank, h=h, e=e)

    def bracket(self, x: LieElement, y: LieElement) -> LieElement:
        rs = self.rs
        h = Weight.zero(rs.rank)
        e: dict = {}

        def add_e(root_t, c):
            if c != 0:
                e[root_t] = e.get(root_t, 0) + c

        # [h, e] and [e, h]
        for root_t, c in y.e:
            v = rs.inner(Weight(root_t), x.h)
            if v:
                add_e(root_t, v * c)
        for root_t, c in x.e:
            v = rs.inner(Weight(root_t), y.h)
            if v:
                add_e(root_t, -v * c)
        # [e, e]
        for ra, ca in x.e:
            wa = Weight(ra)
            for rb, cb in y.e:
                wb = Weight(rb)
                s = wa + wb
                if not any(s):
                    h = h + self.coroot_weight(wa).scale(ca * cb)
                else:
                    nconst = self.n(wa, wb)
                    if nconst:
                        add_e(tuple(s), ca * cb * nconst)
        return _elem(rs.rank, h=h, e=e)

    def form(self, x: LieElement, y: LieElement) -> Q | complex:
        """Ad-invariant form: <e_a, e_{-a}> = 2/<a,a>, <h_w, h_v> = <w, v>."""
        total = self.rs.inner(x.h, y.h)
        ye = dict(y.e)
        for ra, ca in x.e:
            cb = ye.get(tuple(-Weight(ra)))
            if cb:
                total = total + ca * cb / self.d(Weight(ra))
        return total
