"""Explicit matrices for finite-dimensional irreducible highest-weight modules.

Basis vectors are words in the simple lowering operators applied to a highest
weight vector; the contravariant form is evaluated exactly by commuting raising
operators through the words, and an independent basis per weight space is
extracted from the exact Gram matrix.  Operator matrices are produced both in
the exact word basis and in the orthonormalized basis (float), in which the
raising and lowering matrices of each root are mutual adjoints.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .chevalley import ChevalleyBasis
from .repthy import irrep_weights
from .rootsys import Q, RootSystem, Weight

Word = tuple[int, ...]
Vector = dict[Word, Q]


class HighestWeightModule:
    """Irreducible module with matrices for every root vector and Cartan label."""

    def __init__(self, rs: RootSystem, lam: Weight, chev: ChevalleyBasis | None = None):
        if not (lam.is_integral and lam.is_dominant):
            raise ValueError("highest weight must be dominant integral")
        self.rs = rs
        self.lam = lam
        self.chev = chev or ChevalleyBasis(rs)
        self._sp_cache: dict[tuple[Word, Word], Q] = {}

        char = irrep_weights(rs, lam)
        weights = sorted(char.entries, key=lambda w: (rs.inner(lam - w, rs.rho), tuple(w)))
        self.weight_order = weights
        self.mults = {w: char.entries[w] for w in weights}

        # basis words per weight space, highest weight first
        self.basis: dict[Weight, list[Word]] = {}
        self.gram: dict[Weight, list[list[Q]]] = {}
        for w in weights:
            if w == lam:
                self.basis[w] = [()]
                self.gram[w] = [[Q(1)]]
                continue
            cands: list[Word] = []
            for i in range(rs.rank):
                up = w + rs.simple_roots[i]
                for word in self.basis.get(up, ()):
                    cands.append((i,) + word)
            chosen: list[Word] = []
            rows: list[list[Q]] = []
            for cand in cands:
                if len(chosen) == self.mults[w]:
                    break
                trial = chosen + [cand]
                g = [row + [self._sp(a, cand)] for row, a in zip(rows, chosen)]
                g.append([self._sp(cand, a) for a in chosen] + [self._sp(cand, cand)])
                if _rank_rational(g) == len(trial):
                    chosen = trial
                    rows = g
            if len(chosen) != self.mults[w]:
                raise AssertionError("weight space dimension disagrees with the character")
            self.basis[w] = chosen
            self.gram[w] = rows

        self.dim = sum(self.mults.values())
        self.offset: dict[Weight, int] = {}
        pos = 0
        for w in weights:
            self.offset[w] = pos
            pos += self.mults[w]
        self.index_weights = []
        for w in weights:
            self.index_weights.extend([w] * self.mults[w])

        # orthonormalizing transforms per weight space: exact power-of-two
        # rescaling keeps the Gram entries in float range before the Cholesky
        self._chol: dict[Weight, np.ndarray] = {}
        self._scales: dict[Weight, list[Q]] = {}
        for w in weights:
            g = self.gram[w]
            scales = []
            for i in range(len(g)):
                # s_i ~ sqrt(G_ii) as a power of two, exact
                e = g[i][i].numerator.bit_length() - g[i][i].denominator.bit_length()
                scales.append(Q(2) ** (e // 2))
            self._scales[w] = scales
            gs = np.array([
                [float(g[i][j] / (scales[i] * scales[j])) for j in range(len(g))]
                for i in range(len(g))
            ])
            self._chol[w] = np.linalg.cholesky(gs)

        self._op_cache: dict = {}

    # -- contravariant form ----------------------------------------------------

    def _weight_of(self, word: Word) -> Weight:
        w = self.lam
        for i in word:
            w = w - self.rs.simple_roots[i]
        return w

    def _e_apply(self, i: int, word: Word) -> Vector:
        """Raising operator on a word vector, as a combination of shorter words."""
        if not word:
            return {}
        j, rest = word[0], word[1:]
        out: Vector = {}
        for sub, c in self._e_apply(i, rest).items():
            key = (j,) + sub
            out[key] = out.get(key, Q(0)) + c
        if i == j:
            c = self._weight_of(rest)[i]
            if c:
                out[rest] = out.get(rest, Q(0)) + c
        return {k: v for k, v in out.items() if v}

    def _sp(self, w1: Word, w2: Word) -> Q:
        """Contravariant pairing of two lowering words."""
        if self._weight_of(w1) != self._weight_of(w2):
            return Q(0)
        key = (w1, w2)
        if key in self._sp_cache:
            return self._sp_cache[key]
        if not w1:
            val = Q(1) if not w2 else Q(0)
        else:
            i, rest = w1[0], w1[1:]
            val = Q(0)
            for sub, c in self._e_apply(i, w2).items():
                val += c * self._sp(rest, sub)
        self._sp_cache[key] = val
        return val

    def _coords(self, weight: Weight, vec: Vector) -> list[Q]:
        """Coordinates of a word combination in the chosen basis of its weight space."""
        if weight not in self.basis:
            if vec:
                raise AssertionError("vector lies outside the module weights")
            return []
        b = self.basis[weight]
        rhs = []
        for bw in b:
            total = Q(0)
            for word, c in vec.items():
                if c:
                    total += c * self._sp(bw, word)
            rhs.append(total)
        return _solve_rational_system(self.gram[weight], rhs)

    # -- exact operator blocks ---------------------------------------------------

    def _op_blocks(self, shift: Weight, action) -> dict[Weight, list[list[Q]]]:
        """Blocks of an operator mapping weight w to w + shift; action(word) -> Vector."""
        blocks = {}
        for w in self.weight_order:
            tgt = w + shift
            if tgt not in self.basis:
                continue
            cols = []
            for word in self.basis[w]:
                cols.append(self._coords(tgt, action(word)))
            blocks[w] = [[cols[c][r] for c in range(len(cols))]
                         for r in range(self.mults[tgt])]
        return blocks

    def lowering_blocks(self, i: int):
        return self._op_blocks(-self.rs.simple_roots[i], lambda word: {(i,) + word: Q(1)})

    def raising_blocks(self, i: int):
        return self._op_blocks(self.rs.simple_roots[i], lambda word: self._e_apply(i, word))

    # -- float matrices in the orthonormal basis ---------------------------------

    def _global_from_blocks(self, shift: Weight, blocks) -> np.ndarray:
        m = np.zeros((self.dim, self.dim))
        for w, blk in blocks.items():
            tgt = w + shift
            if not blk or not blk[0]:
                continue
            st, ss = self._scales[tgt], self._scales[w]
            raw = np.array([
                [float(x * st[i] / ss[j]) for j, x in enumerate(row)]
                for i, row in enumerate(blk)
            ])
            lsrc = self._chol[w]
            ltgt = self._chol[tgt]
            # orthonormal-basis block: L_tgt^T raw L_src^{-T} (in the rescaled basis)
            onb = ltgt.T @ np.linalg.solve(lsrc, raw.T).T
            r0, c0 = self.offset[tgt], self.offset[w]
            m[r0:r0 + onb.shape[0], c0:c0 + onb.shape[1]] = onb
        return m

    def matrix_e(self, i: int) -> np.ndarray:
        key = ("e", i)
        if key not in self._op_cache:
            self._op_cache[key] = self._global_from_blocks(
                self.rs.simple_roots[i], self.raising_blocks(i)
            )
        return self._op_cache[key]

    def matrix_f(self, i: int) -> np.ndarray:
        key = ("f", i)
        if key not in self._op_cache:
            self._op_cache[key] = self._global_from_blocks(
                -self.rs.simple_roots[i], self.lowering_blocks(i)
            )
        return self._op_cache[key]

    def matrix_cartan(self, w) -> np.ndarray:
        """Diagonal action of the Cartan element labelled by w (float coordinates allowed)."""
        f = np.array([[float(x) for x in row] for row in self.rs.quadratic_form])
        wv = f @ np.array([float(c) for c in w])
        vec = np.array([float(sum(float(c) * x for c, x in zip(mu, wv)))
                        for mu in self.index_weights])
        return np.diag(vec)

    def matrix_root(self, alpha: Weight) -> np.ndarray:
        """Matrix of the Chevalley root vector e_alpha, built by bracket chains."""
        key = ("root", tuple(alpha))
        if key in self._op_cache:
            return self._op_cache[key]
        rs, chev = self.rs, self.chev
        pos = {tuple(a) for a in rs.positive_roots}
        if tuple(alpha) in pos:
            if alpha in rs.simple_roots:
                mat = self.matrix_e(rs.simple_roots.index(alpha))
            else:
                a0, b0 = _extraspecial_pair(rs, alpha)
                n = chev.n(a0, b0)
                ma, mb = self.matrix_root(a0), self.matrix_root(b0)
                mat = (ma @ mb - mb @ ma) / float(n)
        else:
            neg = -alpha
            if neg in rs.simple_roots:
                mat = self.matrix_f(rs.simple_roots.index(neg))
            else:
                a0, b0 = _extraspecial_pair(rs, neg)
                n = chev.n(-a0, -b0)
                ma, mb = self.matrix_root(-a0), self.matrix_root(-b0)
                mat = (ma @ mb - mb @ ma) / float(n)
        self._op_cache[key] = mat
        return mat


def _extraspecial_pair(rs: RootSystem, gamma: Weight):
    """The decomposition gamma = a + b (both positive) with minimal first index."""
    idx = {tuple(a): i for i, a in enumerate(rs.positive_roots)}
    best = None
    for a in rs.positive_roots:
        b = gamma - a
        tb = tuple(b)
        if tb in idx and idx[tuple(a)] < idx[tb]:
            if best is None or idx[tuple(a)] < idx[tuple(best[0])]:
                best = (a, b)
    if best is None:
        raise ValueError("weight is not a decomposable positive root")
    return best


def _rank_rational(g) -> int:
    m = [row[:] for row in g]
    rows, cols = len(m), len(m[0]) if m else 0
    rank = 0
    for c in range(cols):
        piv = next((r for r in range(rank, rows) if m[r][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = 1 / m[rank][c]
        m[rank] = [x * inv for x in m[rank]]
        for r in range(rows):
            if r != rank and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


def _solve_rational_system(g, rhs):
    n = len(g)
    aug = [[Q(x) for x in row] + [Q(rhs[i])] for i, row in enumerate(g)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [aug[i][n] for i in range(n)]
