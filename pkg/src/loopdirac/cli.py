"""Command-line front end.

Every subcommand emits either a table or deterministic JSON.  Exit codes:
0 success, 2 invalid usage or domain error, 3 energy cutoff too small (the
required minimum is printed), 4 numerical ambiguity or convention flags.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from fractions import Fraction

import click

from . import jsonio
from .affine import level_k_alcove
from .dirac import (
    IsotypyConventionError,
    TruncationError,
    affine_isotypic_spectrum,
    dirac_kernel_finite,
    geometric_dirac_block,
    quantize_conjugacy_class,
    relative_cubic_dirac_matrix,
    spinor_cubic_term,
    verify_kostant_square,
)
from .repthy import affine_weight_multiplicities, irrep_weights
from .rootsys import Weight, alcove_membership, build_root_system, centralizer_root_data
from .spinor import truncated_loop_spinor

EXIT_USAGE = 2
EXIT_TRUNCATION = 3
EXIT_AMBIGUITY = 4


@dataclass
class RunConfig:
    family: str
    rank: int
    trunc: int = 6
    tolerance: float = 1e-8
    fmt: str = "table"
    cap: int = 20000
    seed: int = 0


def _parse_weight(rank: int, text: str) -> Weight:
    parts = [p for p in text.replace(",", " ").split() if p]
    if len(parts) != rank:
        raise ValueError(f"expected {rank} coordinates, got {len(parts)}")
    return Weight([Fraction(p) for p in parts])


def _emit(cfg: RunConfig, payload: dict, table_lines):
    if cfg.fmt == "json":
        click.echo(jsonio.dumps(payload))
    else:
        for line in table_lines:
            click.echo(line)


def _dump_matrix(op, path: str):
    with open(path, "w") as fh:
        for r, c, v in op.entries():
            fh.write(f"{r} {c} {v.real:.17g} {v.imag:.17g}\n")


common = [
    click.option("--format", "fmt", type=click.Choice(["table", "json"]), default="table"),
    click.option("--json", "as_json", is_flag=True, help="shorthand for --format json"),
    click.option("-N", "--trunc", type=int, default=6, show_default=True,
                 help="energy cutoff for loop-algebra computations"),
    click.option("--tolerance", type=float, default=1e-8, show_default=True),
    click.option("--cap", type=int, default=20000, show_default=True,
                 help="matrix dimension cap"),
    click.option("--seed", type=int, default=0, show_default=True),
]


def with_common(f):
    for opt in reversed(common):
        f = opt(f)
    return f


def make_config(family, rank, fmt, as_json, trunc, tolerance, cap, seed) -> RunConfig:
    if trunc < 0 or cap <= 0:
        raise ValueError("cutoff must be nonnegative and cap positive")
    return RunConfig(
        family=family, rank=rank, trunc=trunc, tolerance=tolerance,
        fmt="json" if as_json else fmt, cap=cap, seed=seed,
    )


@click.group()
def main():
    """Affine weight arithmetic, cubic Dirac operators and quantization indices."""


def _run(fn):
    try:
        fn()
    except TruncationError as exc:
        click.echo(f"error: {exc} (rerun with -N {exc.required})", err=True)
        sys.exit(EXIT_TRUNCATION)
    except IsotypyConventionError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_AMBIGUITY)
    except (ValueError, MemoryError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_USAGE)


@main.command()
@click.argument("family")
@click.argument("rank", type=int)
@with_common
def rootdata(family, rank, **kw):
    """Roots, highest root, rho, dual Coxeter number and alcove data."""
    def go():
        cfg = make_config(family, rank, **kw)
        rs = build_root_system(cfg.family, cfg.rank)
        payload = jsonio.root_system_json(rs)
        lines = [
            f"root system {rs.name}",
            f"dual Coxeter number: {rs.dual_coxeter}",
            f"positive roots ({len(rs.positive_roots)}):",
        ]
        lines += ["  " + " ".join(jsonio.rational_str(c) for c in a) for a in rs.positive_roots]
        lines.append("highest root: " + " ".join(jsonio.rational_str(c) for c in rs.highest_root))
        lines.append("rho: " + " ".join(jsonio.rational_str(c) for c in rs.rho))
        lines.append("alcove: dominant xi with <highest_root, xi> <= 1")
        _emit(cfg, payload, lines)
    _run(go)


@main.command()
@click.argument("family")
@click.argument("rank", type=int)
@click.option("--level", "-k", type=int, required=True)
@with_common
def alcove(family, rank, level, **kw):
    """Weights of the level-k alcove in index order."""
    def go():
        cfg = make_config(family, rank, **kw)
        rs = build_root_system(cfg.family, cfg.rank)
        weights = level_k_alcove(rs, level)
        payload = {
            "family": rs.family, "rank": rs.rank, "level": level,
            "weights": [jsonio.weight_int_json(w) for w in weights],
        }
        lines = [f"level-{level} alcove of {rs.name}: {len(weights)} weights"]
        lines += ["  " + " ".join(str(int(c)) for c in w) for w in weights]
        _emit(cfg, payload, lines)
    _run(go)


@main.command()
@click.argument("family")
@click.argument("rank", type=int)
@click.option("--level", "-k", type=int, required=True)
@click.option("--eta", required=True, help="class label, comma-separated coordinates")
@with_common
def quantize(family, rank, level, eta, **kw):
    """Quantization index of the conjugacy class through eta / level."""
    def go():
        cfg = make_config(family, rank, **kw)
        rs = build_root_system(cfg.family, cfg.rank)
        eta_w = _parse_weight(rs.rank, eta)
        iv, evidence = quantize_conjugacy_class(rs, level, eta_w, cfg.trunc, with_evidence=True)
        payload = {
            "family": rs.family, "rank": rs.rank, "level": level,
            "eta": jsonio.weight_int_json(eta_w),
            "trunc": cfg.trunc,
            "alcove": [jsonio.weight_int_json(w) for w in iv.alcove],
            "index": iv.entries,
            "flags": iv.flags,
            "kernel_components": {
                ",".join(str(int(c)) for c in lam): [
                    {
                        "n": c.energy,
                        "nu": jsonio.weight_json(c.nu),
                        "m_even": c.mult_even,
                        "m_odd": c.mult_odd,
                        "d2": jsonio.rational_str(c.dirac_square),
                    }
                    for c in comps
                ]
                for lam, comps in evidence.items()
            },
        }
        lines = [f"index over level-{level} alcove of {rs.name}:"]
        for w, m in zip(iv.alcove, iv.entries):
            lines.append(f"  {' '.join(str(int(c)) for c in w)} : {m}")
        for fl in iv.flags:
            lines.append(f"  flag: {fl}")
        _emit(cfg, payload, lines)
        if iv.flags:
            sys.exit(EXIT_AMBIGUITY)
    _run(go)


@main.command("dirac-square")
@click.argument("family")
@click.argument("rank", type=int)
@click.option("--xi", required=True, help="alcove point fixing the isotropy algebra")
@click.option("--lam", required=True, help="highest weight")
@click.option("--dump-matrix", "dump", default=None, type=click.Path())
@with_common
def dirac_square(family, rank, xi, lam, dump, **kw):
    """Verify the square formula of the relative operator at one highest weight."""
    def go():
        cfg = make_config(family, rank, **kw)
        rs = build_root_system(cfg.family, cfg.rank)
        xi_w = _parse_weight(rs.rank, xi)
        lam_w = _parse_weight(rs.rank, lam)
        cz = centralizer_root_data(rs, xi_w)
        rep = verify_kostant_square(rs, cz, lam_w, cap=cfg.cap)
        if dump:
            _dump_matrix(relative_cubic_dirac_matrix(rs, cz, lam_w, cap=cfg.cap), dump)
        payload = {
            "family": rs.family, "rank": rs.rank,
            "lam": jsonio.weight_int_json(lam_w),
            "xi": jsonio.weight_json(xi_w),
            "dim": rep.dim,
            "max_deviation": jsonio.float12(rep.max_deviation),
            "counts_match": rep.ok,
            "components": [
                {"nu": jsonio.weight_json(nu), "mult": m, "d2": jsonio.rational_str(v)}
                for nu, m, v in rep.components
            ],
        }
        lines = [
            f"square formula on dim {rep.dim}: max deviation {rep.max_deviation:.3e}",
            f"eigenvalues {rep.eigenvalue_count}, predicted {rep.predicted_count}",
        ]
        _emit(cfg, payload, lines)
        if not rep.ok or rep.max_deviation > cfg.tolerance:
            sys.exit(EXIT_AMBIGUITY)
    _run(go)


@main.command("dirac-kernel")
@click.argument("family")
@click.argument("rank", type=int)
@click.option("--xi", required=True)
@click.option("--lam", required=True)
@with_common
def dirac_kernel(family, rank, xi, lam, **kw):
    """Signed kernel of the relative operator, by isotropy label."""
    def go():
        cfg = make_config(family, rank, **kw)
        rs = build_root_system(cfg.family, cfg.rank)
        cz = centralizer_root_data(rs, _parse_weight(rs.rank, xi))
        lam_w = _parse_weight(rs.rank, lam)
        labels, flags = dirac_kernel_finite(rs, cz, lam_w, cap=cfg.cap)
        payload = {
            "family": rs.family, "rank": rs.rank,
            "lam": jsonio.weight_int_json(lam_w),
            "kernel": [
                {"nu": jsonio.weight_json(nu), "signed_mult": m}
                for nu, m in sorted(labels.items())
            ],
            "flags": flags,
        }
        lines = [f"kernel labels for lam = {lam}:"]
        for nu, m in sorted(labels.items()):
            lines.append(f"  {' '.join(jsonio.rational_str(c) for c in nu)} : {m:+d}")
        for fl in flags:
            lines.append(f"  flag: {fl}")
        _emit(cfg, payload, lines)
        if flags:
            sys.exit(EXIT_AMBIGUITY)
    _run(go)


@main.command()
@click.argument("family")
@click.argument("rank", type=int)
@click.option("--lam", required=True)
@click.option("--level", "-k", type=int, default=None,
              help="with a level, energy-graded multiplicities up to the cutoff")
@with_common
def character(family, rank, lam, level, **kw):
    """Weight multiplicities of a finite or energy-graded module."""
    def go():
        cfg = make_config(family, rank, **kw)
        rs = build_root_system(cfg.family, cfg.rank)
        lam_w = _parse_weight(rs.rank, lam)
        if level is None:
            ch = irrep_weights(rs, lam_w)
            rows = [{"n": 0, "mu": jsonio.weight_int_json(w), "mult": m}
                    for w, m in sorted(ch.items())]
        else:
            ch = affine_weight_multiplicities(rs, lam_w, level, cfg.trunc)
            rows = [{"n": n, "mu": jsonio.weight_int_json(w), "mult": m}
                    for (n, w), m in sorted(ch.entries.items())]
        payload = {
            "family": rs.family, "rank": rs.rank,
            "lam": jsonio.weight_int_json(lam_w),
            "level": level, "trunc": cfg.trunc if level is not None else 0,
            "entries": rows,
        }
        lines = [f"{len(rows)} weight entries:"]
        for r in rows:
            lines.append(f"  n={r['n']} mu={' '.join(map(str, r['mu']))} mult={r['mult']}")
        _emit(cfg, payload, lines)
    _run(go)


@main.command("spinor")
@click.argument("family")
@click.argument("rank", type=int)
@click.option("--xi", default=None, help="isotropy point; omit for the full loop algebra")
@click.option("--dump-matrix", "dump", default=None, type=click.Path(),
              help="write a sample Clifford operator in 'row col re im' lines")
@with_common
def spinor_cmd(family, rank, xi, dump, **kw):
    """Spinor basis layout and an anticommutator spot check."""
    def go():
        cfg = make_config(family, rank, **kw)
        rs = build_root_system(cfg.family, cfg.rank)
        cz = centralizer_root_data(rs, _parse_weight(rs.rank, xi)) if xi else None
        basis = truncated_loop_spinor(rs, cz, cfg.trunc, max_dim=cfg.cap)
        from .spinor import clifford_op, identity_op, pairing_b, root_direction

        layer = {}
        for e in basis.energies:
            layer[e] = layer.get(e, 0) + 1
        alpha = rs.positive_roots[0]
        d = root_direction(0, -alpha)
        car_dev = 0.0
        if basis.in_polarization(d):
            c = clifford_op(basis, d)
            dd = root_direction(0, alpha)
            cc = clifford_op(basis, dd)
            ac = c.anticommutator(cc)
            expect = 2 * pairing_b(basis, d, dd)
            car_dev = (ac - identity_op(basis).scale(expect)).max_abs()
            if dump:
                _dump_matrix(c, dump)
        payload = {
            "family": rs.family, "rank": rs.rank, "trunc": cfg.trunc,
            "dim": basis.dim,
            "vacuum_weight": jsonio.weight_json(basis.vacuum_weight),
            "layer_dims": {str(k): v for k, v in sorted(layer.items())},
            "car_spot_check": jsonio.float12(car_dev),
        }
        lines = [
            f"spinor basis dim {basis.dim} at cutoff {cfg.trunc}",
            "vacuum weight: " + " ".join(jsonio.rational_str(c) for c in basis.vacuum_weight),
            "layer dims: " + ", ".join(f"{k}:{v}" for k, v in sorted(layer.items())),
            f"anticommutator spot check deviation: {car_dev:.3e}",
        ]
        _emit(cfg, payload, lines)
        if car_dev > cfg.tolerance:
            sys.exit(EXIT_AMBIGUITY)
    _run(go)


@main.command("geo-alg-gap")
@click.argument("family")
@click.argument("rank", type=int)
@click.option("--xi", required=True)
@click.option("--lams", required=True, help="semicolon-separated highest weights")
@with_common
def geo_alg_gap(family, rank, xi, lams, **kw):
    """Operator norm of (cubic minus spin-connection) Dirac operators across weights."""
    def go():
        cfg = make_config(family, rank, **kw)
        rs = build_root_system(cfg.family, cfg.rank)
        cz = centralizer_root_data(rs, _parse_weight(rs.rank, xi))
        lam_ws = [_parse_weight(rs.rank, t) for t in lams.split(";")]
        gaps = []
        for lw in lam_ws:
            gap = (relative_cubic_dirac_matrix(rs, cz, lw, cap=cfg.cap)
                   - geometric_dirac_block(rs, cz, lw, cap=cfg.cap)).operator_norm()
            gaps.append(gap)
        const = spinor_cubic_term(rs, cz).operator_norm()
        spread = max(gaps) - min(gaps) if gaps else 0.0
        payload = {
            "family": rs.family, "rank": rs.rank,
            "xi": jsonio.weight_json(_parse_weight(rs.rank, xi)),
            "lams": [jsonio.weight_int_json(w) for w in lam_ws],
            "gaps": [jsonio.float12(g) for g in gaps],
            "constant_element_norm": jsonio.float12(const),
            "spread": jsonio.float12(spread),
        }
        lines = [f"gap norms: {gaps}", f"constant element norm: {const}",
                 f"spread: {spread:.3e}"]
        _emit(cfg, payload, lines)
        if spread > 1e-9 or (gaps and abs(gaps[0] - const) > 1e-9):
            sys.exit(EXIT_AMBIGUITY)
    _run(go)


if __name__ == "__main__":
    main()
