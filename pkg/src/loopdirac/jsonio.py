"""Deterministic JSON serialization: exact rationals as "p/q", floats at 12 digits."""

from __future__ import annotations

import json
from fractions import Fraction

from .affine import AffineWeight
from .rootsys import RootSystem, Weight


def rational_str(x) -> str:
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"


def parse_rational(s: str) -> Fraction:
    return Fraction(s)


def weight_json(w: Weight) -> list[str]:
    return [rational_str(c) for c in w]


def weight_from_json(coords) -> Weight:
    return Weight([Fraction(str(c)) for c in coords])


def weight_int_json(w: Weight) -> list[int]:
    if not w.is_integral:
        raise ValueError("weight is not integral")
    return [int(c) for c in w]


def affine_weight_json(a: AffineWeight) -> dict:
    return {"m": rational_str(a.m), "lam": weight_json(a.lam), "k": rational_str(a.k)}


def affine_weight_from_json(d) -> AffineWeight:
    return AffineWeight(Fraction(d["m"]), weight_from_json(d["lam"]), Fraction(d["k"]))


def root_system_json(rs: RootSystem) -> dict:
    return {
        "family": rs.family,
        "rank": rs.rank,
        "cartan_matrix": [list(row) for row in rs.cartan_matrix],
        "simple_roots": [weight_json(a) for a in rs.simple_roots],
        "positive_roots": [weight_json(a) for a in rs.positive_roots],
        "highest_root": weight_json(rs.highest_root),
        "rho": weight_json(rs.rho),
        "quadratic_form": [[rational_str(x) for x in row] for row in rs.quadratic_form],
        "dual_coxeter": rs.dual_coxeter,
        "marks": list(rs.marks),
        "comarks": [rational_str(c) for c in rs.comarks],
    }


def float12(x: float) -> float:
    return float(f"{float(x):.12g}")


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ": "), indent=1)
