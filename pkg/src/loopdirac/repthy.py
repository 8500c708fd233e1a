"""Characters and multiplicities.

Finite-dimensional weight multiplicities via Freudenthal's recursion, branching
to equal-rank subalgebras via signed dominant projection, and energy-graded
weight multiplicities of level-k highest weight modules via the affine version
of the same recursion, truncated at a chosen energy.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .rootsys import CentralizerData, Q, RootSystem, Weight


@dataclass
class WeightMultiset:
    """Map from weights to positive multiplicities."""

    entries: dict[Weight, int] = field(default_factory=dict)

    def mass(self) -> int:
        return sum(self.entries.values())

    def get(self, w: Weight) -> int:
        return self.entries.get(w, 0)

    def items(self):
        return self.entries.items()


@dataclass
class AffineWeightMultiset:
    """Energy-graded multiplicities (n, mu) -> mult of a level-k module, n <= truncation."""

    entries: dict[tuple[int, Weight], int]
    level: int
    truncation: int

    def layer(self, n: int) -> dict[Weight, int]:
        return {mu: m for (e, mu), m in self.entries.items() if e == n}

    def get(self, n: int, mu: Weight) -> int:
        return self.entries.get((n, mu), 0)

    def mass(self) -> int:
        return sum(self.entries.values())


class EqualRankSubsystem:
    """A root subsystem of full torus rank, with its own dominance and Weyl group."""

    def __init__(self, rs: RootSystem, positive_roots: tuple[Weight, ...]):
        self.rs = rs
        self.positive_roots = tuple(positive_roots)
        self.rho = Weight.zero(rs.rank)
        for a in self.positive_roots:
            self.rho = self.rho + a
        self.rho = self.rho.scale(Q(1, 2))
        pos = set(map(tuple, self.positive_roots))
        simple = []
        for a in self.positive_roots:
            if not any(tuple(a - b) in pos for b in self.positive_roots if b != a):
                simple.append(a)
        self.simple_roots = tuple(simple)

    @classmethod
    def full(cls, rs: RootSystem) -> "EqualRankSubsystem":
        return cls(rs, rs.positive_roots)

    @classmethod
    def torus(cls, rs: RootSystem) -> "EqualRankSubsystem":
        return cls(rs, ())

    @classmethod
    def from_centralizer(cls, cz: CentralizerData) -> "EqualRankSubsystem":
        if cz.is_twisted:
            raise ValueError(
                "centralizer has nonzero Fourier exponents; finite branching does not apply"
            )
        return cls(cz.rs, cz.finite_positive_roots)

    def pairing(self, mu: Weight, alpha: Weight) -> Q:
        return self.rs.coroot_pairing(mu, alpha)

    def reflect(self, mu: Weight, alpha: Weight) -> Weight:
        return mu - alpha.scale(self.pairing(mu, alpha))

    def is_dominant(self, mu: Weight) -> bool:
        return all(self.pairing(mu, a) >= 0 for a in self.simple_roots)

    def dominant_projection(self, mu: Weight) -> tuple[Weight, int, bool]:
        """Return (dominant representative, reflection sign, hit_wall)."""
        sign = 1
        cur = mu
        for _ in range(100000):
            for a in self.simple_roots:
                p = self.pairing(cur, a)
                if p == 0:
                    return cur, sign, True
                if p < 0:
                    cur = cur - a.scale(p)
                    sign = -sign
                    break
            else:
                return cur, sign, False
        raise RuntimeError("dominant projection did not terminate")

    def orbit(self, mu: Weight) -> frozenset[Weight]:
        seen = {mu}
        frontier = [mu]
        while frontier:
            nxt = []
            for w in frontier:
                for a in self.simple_roots:
                    r = self.reflect(w, a)
                    if r not in seen:
                        seen.add(r)
                        nxt.append(r)
            frontier = nxt
        return frozenset(seen)

    def weyl_dim(self, lam: Weight) -> int:
        num = Q(1)
        for a in self.positive_roots:
            num *= self.rs.inner(lam + self.rho, a) / self.rs.inner(self.rho, a)
        if num.denominator != 1:
            raise AssertionError("Weyl dimension is not an integer")
        return int(num)

    def dominant_multiplicities(self, lam: Weight) -> dict[Weight, int]:
        """Freudenthal recursion on the dominant weights of the irreducible lam-module."""
        if not self.is_dominant(lam):
            raise ValueError("highest weight is not dominant for the subsystem")
        rs = self.rs
        rho = self.rho
        top = rs.norm2(lam + rho)
        ball = lattice_ball(rs, rho, top, lam)
        dom = [w for w in ball if self.is_dominant(w)]
        dom.sort(key=lambda w: rs.inner(lam - w, rho))
        mult: dict[Weight, int] = {}

        def lookup(w: Weight) -> int:
            d, _, _ = self.dominant_projection(w)
            return mult.get(d, 0)

        for w in dom:
            if w == lam:
                mult[w] = 1
                continue
            denom = top - rs.norm2(w + rho)
            if denom <= 0:
                continue
            s = Q(0)
            for a in self.positive_roots:
                t = 1
                while True:
                    v = w + a.scale(t)
                    if rs.norm2(v + rho) > top:
                        break
                    m = lookup(v)
                    if m:
                        s += m * rs.inner(v, a)
                    t += 1
            val = 2 * s / denom
            if val.denominator != 1 or val < 0:
                raise AssertionError("Freudenthal recursion produced a bad multiplicity")
            if val:
                mult[w] = int(val)
        return mult

    def irrep_character(self, lam: Weight) -> WeightMultiset:
        dom = self.dominant_multiplicities(lam)
        entries: dict[Weight, int] = {}
        for w, m in dom.items():
            for v in self.orbit(w):
                entries[v] = m
        return WeightMultiset(entries)


def weyl_dim(rs: RootSystem, lam: Weight) -> int:
    """Dimension of the irreducible with highest weight lam (Weyl product formula)."""
    if not (lam.is_integral and lam.is_dominant):
        raise ValueError("highest weight must be dominant integral")
    return EqualRankSubsystem.full(rs).weyl_dim(lam)


def irrep_weights(rs: RootSystem, lam: Weight) -> WeightMultiset:
    """All weights of the irreducible lam-module with multiplicities."""
    if not (lam.is_integral and lam.is_dominant):
        raise ValueError("highest weight must be dominant integral")
    ch = EqualRankSubsystem.full(rs).irrep_character(lam)
    if ch.mass() != weyl_dim(rs, lam):
        raise AssertionError("character mass disagrees with the Weyl dimension")
    return ch


def branch_equal_rank(
    rs: RootSystem,
    cz: CentralizerData | EqualRankSubsystem,
    multiset: WeightMultiset | dict,
    check: bool = True,
) -> dict[Weight, int]:
    """Decompose a torus character into isotypic multiplicities of an equal-rank subalgebra.

    Each weight mu contributes sign(w) at the label w(mu + rho_H) - rho_H, where
    w is the unique element making mu + rho_H strictly dominant; weights landing
    on a wall of the subalgebra contribute nothing.  With ``check`` the result
    must be a genuine (nonnegative) decomposition.
    """
    sub = cz if isinstance(cz, EqualRankSubsystem) else EqualRankSubsystem.from_centralizer(cz)
    entries = multiset.entries if isinstance(multiset, WeightMultiset) else multiset
    out: dict[Weight, int] = {}
    for mu, c in entries.items():
        y = mu + sub.rho
        dom, sign, wall = sub.dominant_projection(y)
        if wall:
            continue
        label = dom - sub.rho
        out[label] = out.get(label, 0) + sign * c
    out = {k: v for k, v in out.items() if v != 0}
    if check and any(v < 0 for v in out.values()):
        raise ValueError("multiset is not a nonnegative combination of subalgebra characters")
    return out


# -- lattice enumeration --------------------------------------------------------


def lattice_ball(rs: RootSystem, shift: Weight, bound: Q, rep: Weight) -> list[Weight]:
    """All mu = rep (mod root lattice) with <mu+shift, mu+shift> <= bound.

    Exact recursive box search over root-lattice coefficients using an LDL^T
    split of the root Gram matrix.
    """
    rank = rs.rank
    alphas = rs.simple_roots
    g = [[rs.inner(alphas[i], alphas[j]) for j in range(rank)] for i in range(rank)]
    low = [[Q(0)] * rank for _ in range(rank)]
    d = [Q(0)] * rank
    for j in range(rank):
        d[j] = g[j][j] - sum(low[j][t] ** 2 * d[t] for t in range(j))
        low[j][j] = Q(1)
        for i in range(j + 1, rank):
            low[i][j] = (g[i][j] - sum(low[i][t] * low[j][t] * d[t] for t in range(j))) / d[j]
    if any(x <= 0 for x in d):
        raise AssertionError("root Gram matrix must be positive definite")

    v0 = rep + shift
    b = [rs.inner(v0, a) for a in alphas]
    # critical point c* of q(c) = |v0 - sum c_i alpha_i|^2 solves G c = b
    cstar = _solve_rational(g, b)
    qmin = rs.norm2(v0) - sum(bi * ci for bi, ci in zip(b, cstar))
    out: list[Weight] = []
    if qmin > bound:
        return out
    ystar = [cstar[j] + sum(low[t][j] * cstar[t] for t in range(j + 1, rank)) for j in range(rank)]

    cs = [0] * rank

    def rec(j: int, rem: Q):
        if j < 0:
            mu = v0
            for i, ci in enumerate(cs):
                if ci:
                    mu = mu - alphas[i].scale(ci)
            out.append(mu - shift)
            return
        off = sum(low[t][j] * cs[t] for t in range(j + 1, rank))
        center = ystar[j] - off
        lim = rem / d[j]
        half = math.isqrt(int(lim)) + 2
        lo = math.floor(center) - half
        hi = math.ceil(center) + half
        for cj in range(lo, hi + 1):
            used = d[j] * (cj - center) ** 2
            if used <= rem:
                cs[j] = cj
                rec(j - 1, rem - used)
        cs[j] = 0

    rec(rank - 1, bound - qmin)
    return sorted(out)


def _solve_rational(g, b):
    n = len(g)
    aug = [[Q(x) for x in row] + [Q(b[i])] for i, row in enumerate(g)]
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


# -- energy-graded multiplicities ------------------------------------------------


def _cache_path(rs: RootSystem, lam: Weight, k: int, trunc: int) -> Path | None:
    root = os.environ.get("LOOPDIRAC_CACHE")
    if not root:
        return None
    tag = "_".join(str(int(c)) for c in lam)
    return Path(root) / f"affmult_{rs.family}{rs.rank}_k{k}_N{trunc}_lam{tag}.json"


def affine_weight_multiplicities(
    rs: RootSystem, lam: Weight, k: int, trunc: int
) -> AffineWeightMultiset:
    """Weight multiplicities of the level-k module with lowest energy layer lam.

    Layer 0 is the finite irreducible character of lam; deeper layers follow
    the affine Freudenthal recursion, which only ever consults layers at lower
    energy (or higher weights at the same energy), so a truncation at ``trunc``
    is self-contained.  Results are cached on disk when LOOPDIRAC_CACHE is set.
    """
    if k < 0 or trunc < 0:
        raise ValueError("level and truncation must be nonnegative")
    cache = _cache_path(rs, lam, k, trunc) if lam.is_integral else None
    if cache is not None and cache.exists():
        data = json.loads(cache.read_text())
        entries = {(n, Weight(mu)): m for n, mu, m in data}
        return AffineWeightMultiset(entries=entries, level=k, truncation=trunc)
    if not (lam.is_integral and lam.is_dominant):
        raise ValueError("highest weight must be dominant integral")
    if rs.level(lam) > k:
        raise ValueError(f"no positive energy representation: <lam, highest_root> > {k}")
    rank = rs.rank
    hv = rs.dual_coxeter
    kk = k + hv

    # integer scaling: D * <x, y> is integral for integral x, y
    dscale = 1
    for row in rs.quadratic_form:
        for x in row:
            dscale = dscale * x.denominator // math.gcd(dscale, x.denominator)

    fw_scaled = [
        [int(dscale * rs.quadratic_form[i][j]) for j in range(rank)] for i in range(rank)
    ]

    def pair_scaled(u: tuple, v: tuple) -> int:
        total = 0
        for i, ui in enumerate(u):
            if ui:
                row = fw_scaled[i]
                total += ui * sum(row[j] * v[j] for j in range(rank) if v[j])
        return total

    rho = tuple(1 for _ in range(rank))
    lam_i = tuple(int(c) for c in lam)
    top_scaled = pair_scaled(
        tuple(a + b for a, b in zip(lam_i, rho)), tuple(a + b for a, b in zip(lam_i, rho))
    )

    roots_i = [tuple(int(c) for c in a) for a in rs.all_roots]
    pos_roots_i = [tuple(int(c) for c in a) for a in rs.positive_roots]

    # candidate weights per layer, largest ball first
    def layer_bound_scaled(n: int) -> int:
        return top_scaled + 2 * n * kk * dscale

    ball = lattice_ball(
        rs, rs.rho, Q(layer_bound_scaled(trunc), dscale), lam
    )
    ball_i = [tuple(int(c) for c in w) for w in ball]
    norms = {
        w: pair_scaled(tuple(a + b for a, b in zip(w, rho)), tuple(a + b for a, b in zip(w, rho)))
        for w in ball_i
    }
    # order within a layer: weights closer to the top (smaller lam - mu) first
    depth = {w: pair_scaled(tuple(l - x for l, x in zip(lam_i, w)), rho) for w in ball_i}

    mult: dict[tuple[int, tuple], int] = {}

    def get(n: int, w: tuple) -> int:
        return mult.get((n, w), 0)

    for n in range(trunc + 1):
        bnd = layer_bound_scaled(n)
        cands = [w for w in ball_i if norms[w] <= bnd]
        cands.sort(key=lambda w: depth[w])
        for w in cands:
            if n == 0 and w == lam_i:
                mult[(0, w)] = 1
                continue
            denom_scaled = top_scaled - norms[w] + 2 * n * kk * dscale
            if denom_scaled <= 0:
                continue
            total = 0
            # energy-preserving contributions along positive finite roots
            for beta in pos_roots_i:
                wb = pair_scaled(w, beta)
                wrb = pair_scaled(tuple(a + b for a, b in zip(w, rho)), beta)
                bb = pair_scaled(beta, beta)
                t = 1
                while True:
                    v = tuple(a + t * c for a, c in zip(w, beta))
                    nv = norms.get(v)
                    if nv is not None and nv <= bnd:
                        m = get(n, v)
                        if m:
                            total += m * (wb + t * bb)
                    elif wrb + t * bb > 0:
                        # |w + t*beta + rho|^2 is convex in t and now climbing
                        break
                    t += 1
            # energy-lowering contributions: real roots and rank copies of the
            # imaginary root at each positive Fourier depth
            for ell in range(1, n + 1):
                for beta in roots_i:
                    wb = pair_scaled(w, beta)
                    bb = pair_scaled(beta, beta)
                    tmax = n // ell
                    for t in range(1, tmax + 1):
                        v = tuple(a + t * c for a, c in zip(w, beta))
                        nv = norms.get(v)
                        if nv is None or nv > layer_bound_scaled(n - t * ell):
                            continue
                        m = get(n - t * ell, v)
                        if m:
                            total += m * (wb + t * bb + ell * k * dscale)
                for t in range(1, n // ell + 1):
                    m = get(n - t * ell, w)
                    if m:
                        total += m * rank * (ell * k * dscale)
            num = 2 * total
            if num:
                if num % denom_scaled:
                    raise AssertionError("affine Freudenthal produced a non-integer")
                val = num // denom_scaled
                if val < 0:
                    raise AssertionError("affine Freudenthal produced a negative multiplicity")
                if val:
                    mult[(n, w)] = val

    entries = {(n, Weight(w)): m for (n, w), m in mult.items() if m}
    if cache is not None:
        cache.parent.mkdir(parents=True, exist_ok=True)
        payload = sorted((n, [int(c) for c in w], m) for (n, w), m in entries.items())
        cache.write_text(json.dumps(payload))
    return AffineWeightMultiset(entries=entries, level=k, truncation=trunc)
