"""Experiment runner: each command reproduces one headline computation.

Commands

  asymptotics   lambda sweep of the normalized second terms of the
                Neumann/Dirichlet bracketing counts, CSV + gnuplot data
                with the closed-form reference constants
  brackets      one BracketReport row for a single lambda
  tail          truncation-depth table M(lambda) with tail areas
  essential     singular-sequence decay table
  skeleton      room skeleton geometry as JSON + polyline dump
  sl-spectrum   per-edge eigenvalues of the weighted skeleton operator
  oracle        finite-difference spectra and the sandwich report

Configuration comes from flags or a key=value file (flags win).  Exit
codes: 0 ok, 1 a requested check failed, 2 bad configuration.  The env
var RP_THREADS caps sweep parallelism (default 1, fully serial and
byte-deterministic output either way).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import bracketing, fd_oracle, singular, skeleton, skeleton_operator, tail
from .domain import build_geometric

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2


def _max_workers() -> int:
    try:
        return max(1, int(os.environ.get("RP_THREADS", "1")))
    except ValueError:
        return 1


def _sweep(fn, values):
    workers = _max_workers()
    if workers == 1:
        return [fn(v) for v in values]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, values))


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _svg_lines(path: Path, series: dict[str, list[tuple[float, float]]],
               title: str) -> None:
    """Minimal self-contained SVG line plot (log-x)."""
    W, H, pad = 720, 420, 50
    xs = [p[0] for pts in series.values() for p in pts]
    ys = [p[1] for pts in series.values() for p in pts]
    lx = [math.log10(x) for x in xs]
    x0, x1 = min(lx), max(lx)
    y0, y1 = min(ys), max(ys)
    if y1 - y0 < 1e-12:
        y0, y1 = y0 - 1.0, y1 + 1.0

    def sx(x):
        return pad + (math.log10(x) - x0) / (x1 - x0) * (W - 2 * pad)

    def sy(y):
        return H - pad - (y - y0) / (y1 - y0) * (H - 2 * pad)

    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"]
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}">',
             f'<rect width="{W}" height="{H}" fill="white"/>',
             f'<text x="{W/2}" y="20" text-anchor="middle" font-size="14">{title}</text>']
    for i, (name, pts) in enumerate(series.items()):
        d = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in pts)
        c = colors[i % len(colors)]
        parts.append(f'<polyline points="{d}" fill="none" stroke="{c}" stroke-width="1.5"/>')
        parts.append(f'<text x="{pad}" y="{pad + 14 * i}" fill="{c}" font-size="12">{name}</text>')
    parts.append("</svg>")
    _write(path, "\n".join(parts))


# ---------------------------------------------------------------------------
# commands

def cmd_asymptotics(args) -> int:
    dom = build_geometric(args.C, args.alpha, args.k, args.pieces)
    policy = tail.TailPolicy(args.tail_c)
    if args.points < 1:
        raise ConfigError("points must be >= 1")
    lams = np.logspace(math.log10(args.lmin), math.log10(args.lmax), args.points)
    c1, c2, cd = bracketing.second_term_constants(dom.params)

    def one(lam):
        M = tail.min_M_for_lambda(dom, lam, policy)
        rows = []
        for bc in ("neumann", "dirichlet"):
            rows.append(bracketing.assemble_bounds(dom, bc, M, lam))
        return rows

    results = _sweep(one, lams)
    lines = ["lambda,M,bc,lower,upper,weyl,norm_lower,norm_upper"]
    gnuplot = ["# lambda norm_lower_N norm_upper_N norm_lower_D norm_upper_D "
               f"# refs C1={c1:.12g} C2={c2:.12g} CD={cd:.12g}"]
    series = {"neumann lower": [], "neumann upper": [],
              "dirichlet lower": [], "dirichlet upper": []}
    for lam, rows in zip(lams, results):
        for rep in rows:
            lines.append(f"{rep.lam:.10g},{rep.M},{rep.bc},{rep.lower_count},"
                         f"{rep.upper_count},{rep.weyl:.10g},"
                         f"{rep.normalized_lower:.10g},{rep.normalized_upper:.10g}")
        n, d = rows
        gnuplot.append(f"{lam:.10g} {n.normalized_lower:.10g} {n.normalized_upper:.10g} "
                       f"{d.normalized_lower:.10g} {d.normalized_upper:.10g}")
        series["neumann lower"].append((lam, n.normalized_lower))
        series["neumann upper"].append((lam, n.normalized_upper))
        series["dirichlet lower"].append((lam, d.normalized_lower))
        series["dirichlet upper"].append((lam, d.normalized_upper))
    out = Path(args.output)
    _write(out, "\n".join(lines) + "\n")
    _write(out.with_suffix(".dat"), "\n".join(gnuplot) + "\n")
    if args.svg:
        _svg_lines(out.with_suffix(".svg"), series,
                   "normalized second terms of the bracketing counts")
    print(f"wrote {out} ({len(lams)} lambdas)")
    return EXIT_OK


def cmd_brackets(args) -> int:
    dom = build_geometric(args.C, args.alpha, args.k, args.pieces)
    M = args.M or tail.min_M_for_lambda(dom, args.lam, tail.TailPolicy(args.tail_c))
    print("lambda,M,bc,lower,upper,weyl,norm_lower,norm_upper")
    for bc in ("neumann", "dirichlet"):
        rep = bracketing.assemble_bounds(dom, bc, M, args.lam, scope=args.scope)
        print(f"{rep.lam:.10g},{rep.M},{rep.bc},{rep.lower_count},{rep.upper_count},"
              f"{rep.weyl:.10g},{rep.normalized_lower:.10g},{rep.normalized_upper:.10g}")
    return EXIT_OK


def cmd_tail(args) -> int:
    dom = build_geometric(args.C, args.alpha, args.k, args.pieces)
    lines = ["lambda,M,tail_area,product,poincare_bound"]
    for c in (0.5, args.tail_c, 2.0):
        policy = tail.TailPolicy(c)
        for lam in np.logspace(math.log10(args.lmin), math.log10(args.lmax), args.points):
            r = tail.tail_report(dom, lam, policy)
            lines.append(f"{lam:.10g},{r['M']},{r['tail_area']:.10g},"
                         f"{r['product']:.10g},{r['poincare_bound']:.10g}")
    text = "\n".join(lines) + "\n"
    if args.output:
        _write(Path(args.output), text)
        print(f"wrote {args.output}")
    else:
        print(text, end="")
    return EXIT_OK


def cmd_essential(args) -> int:
    dom = build_geometric(args.C, args.alpha, args.k, args.pieces)
    js = range(args.jmin, args.jmax + 1)
    lines = ["j,norm_phi,norm_phi_prime,rayleigh"]
    for j, np_, npp, ray in singular.decay_table(dom, js):
        lines.append(f"{int(j)},{np_:.12g},{npp:.12g},{ray:.12g}")
    slope = singular.fitted_decay_slope(dom, js)
    lines.append(f"# fitted log-slope {slope:.12g}; "
                 f"reference {(args.alpha - 3.0) * math.log(args.C):.12g}")
    text = "\n".join(lines) + "\n"
    if args.output:
        _write(Path(args.output), text)
        print(f"wrote {args.output}")
    else:
        print(text, end="")
    return EXIT_OK


def cmd_skeleton(args) -> int:
    edges = skeleton.build_room_skeleton(args.height, args.delta, args.delta2
                                         if args.delta2 is not None else args.delta)
    out = Path(args.output)
    _write(out, skeleton.skeleton_to_json(edges))
    _write(out.with_suffix(".dat"), skeleton.skeleton_polylines(edges))
    print(f"wrote {out} ({len(edges)} edges)")
    return EXIT_OK


def cmd_sl_spectrum(args) -> int:
    edges = skeleton.build_room_skeleton(args.height, args.delta, args.delta2
                                         if args.delta2 is not None else args.delta)
    lines = ["edge_id,group,eigen_index,value,n_grid"]
    for e in edges:
        if e.singular:
            continue
        sys_ = skeleton_operator.assemble_sl(e, args.grid)
        vals = skeleton_operator.sl_eigenvalues(sys_, args.count)
        for i, v in enumerate(vals):
            lines.append(f"{e.edge_id},{e.group.value},{i},{v:.12g},{args.grid}")
    text = "\n".join(lines) + "\n"
    if args.output:
        _write(Path(args.output), text)
        print(f"wrote {args.output}")
    else:
        print(text, end="")
    return EXIT_OK


def cmd_oracle(args) -> int:
    dom = build_geometric(args.C, args.alpha, args.k, args.pieces)
    grids = [int(g) for g in args.grids.split(",")]
    lines = ["bc,index,eigenvalue,grid_n"]
    for bc in ("neumann", "dirichlet"):
        s = fd_oracle.fd_eigenvalues(
            fd_oracle.rasterize(dom, args.M, max(grids)), bc, args.count,
            symmetry=True)
        for i, v in enumerate(s.eigenvalues):
            lines.append(f"{bc},{i},{v:.12g},{s.grid_n}")
    _write(Path(args.output), "\n".join(lines) + "\n")
    neu, _ = fd_oracle.richardson_eigenvalues(dom, args.M, "neumann",
                                              args.count, grids)
    lams = 0.5 * (neu[1:-1] + neu[2:])  # generic gap midpoints
    report = fd_oracle.sandwich_check(dom, args.M, lams, grids, args.count)
    _write(Path(args.output).with_suffix(".json"), json.dumps(report, indent=2))
    print(f"wrote {args.output}; sandwich all_ok={report['all_ok']}")
    return EXIT_OK if report["all_ok"] else EXIT_CHECK_FAILED


def emit_report(checks: list[dict]) -> tuple[str, str, int]:
    """Pass/fail table plus machine-readable JSON for a list of checks.

    Each check is {name, value, tolerance, ok}; returns (text, json, exit).
    """
    width = max(len(c["name"]) for c in checks) if checks else 4
    rows = [f"{'check':<{width}}  {'value':>14}  {'tolerance':>12}  status"]
    for c in checks:
        rows.append(f"{c['name']:<{width}}  {c['value']:>14.6g}  "
                    f"{c['tolerance']:>12.6g}  {'pass' if c['ok'] else 'FAIL'}")
    ok = all(c["ok"] for c in checks)
    rows.append(f"{'all checks pass' if ok else 'SOME CHECKS FAILED'}")
    return ("\n".join(rows) + "\n", json.dumps({"checks": checks, "ok": ok}, indent=2),
            EXIT_OK if ok else EXIT_CHECK_FAILED)


# ---------------------------------------------------------------------------
# argument plumbing

class ConfigError(Exception):
    pass


def _add_domain_args(p, pieces_default=24):
    p.add_argument("--C", dest="C", type=float, default=0.5,
                   help="successive size ratio of the geometric family")
    p.add_argument("--alpha", type=float, default=2.0,
                   help="passage thinning exponent")
    p.add_argument("--k", type=float, default=1 / 16,
                   help="passage width coefficient")
    p.add_argument("--pieces", type=int, default=pieces_default)
    p.add_argument("--tail-c", type=float, default=1.0,
                   help="tail Poincare policy coefficient")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rplaplace",
                                 description=__doc__.split("\n\n")[0])
    ap.add_argument("--config", help="key=value file; command-line flags win")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("asymptotics", help="second-term lambda sweep")
    _add_domain_args(p, pieces_default=30)
    p.add_argument("--lmin", type=float, default=1e3)
    p.add_argument("--lmax", type=float, default=1e7)
    p.add_argument("--points", type=int, default=40)
    p.add_argument("--svg", action="store_true")
    p.add_argument("--output", default="asymptotics.csv")
    p.set_defaults(fn=cmd_asymptotics)

    p = sub.add_parser("brackets", help="single-lambda bracket report")
    _add_domain_args(p)
    p.add_argument("--lam", type=float, required=True)
    p.add_argument("--M", type=int, default=None)
    p.add_argument("--scope", choices=("omega_2M", "omega_full"),
                   default="omega_2M")
    p.set_defaults(fn=cmd_brackets)

    p = sub.add_parser("tail", help="truncation depth table")
    _add_domain_args(p)
    p.add_argument("--lmin", type=float, default=1e2)
    p.add_argument("--lmax", type=float, default=1e6)
    p.add_argument("--points", type=int, default=17)
    p.add_argument("--output", default=None)
    p.set_defaults(fn=cmd_tail)

    p = sub.add_parser("essential", help="singular-sequence decay table")
    _add_domain_args(p)
    p.add_argument("--jmin", type=int, default=2)
    p.add_argument("--jmax", type=int, default=6)
    p.add_argument("--output", default=None)
    p.set_defaults(fn=cmd_essential)

    p = sub.add_parser("skeleton", help="room skeleton geometry")
    p.add_argument("--h", dest="height", type=float, default=1.0)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--delta2", type=float, default=None,
                   help="right mouth height (defaults to --delta)")
    p.add_argument("--output", default="skeleton.json")
    p.set_defaults(fn=cmd_skeleton)

    p = sub.add_parser("sl-spectrum", help="weighted operator spectra per edge")
    p.add_argument("--h", dest="height", type=float, default=1.0)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--delta2", type=float, default=None)
    p.add_argument("--grid", type=int, default=512)
    p.add_argument("--count", type=int, default=6)
    p.add_argument("--output", default=None)
    p.set_defaults(fn=cmd_sl_spectrum)

    p = sub.add_parser("oracle", help="FD spectra and sandwich report")
    _add_domain_args(p)
    p.add_argument("--M", type=int, default=1)
    p.add_argument("--grids", default="64,128,256",
                   help="comma-separated n_per_unit refinement ladder")
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--output", default="oracle.csv")
    p.set_defaults(fn=cmd_oracle)
    return ap


def _apply_config_file(argv: list[str]) -> list[str]:
    """Expand key=value pairs from --config into trailing flags (flags win)."""
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    if i + 1 >= len(argv):
        raise ConfigError("--config needs a file path")
    path = Path(argv[i + 1])
    rest = argv[:i] + argv[i + 2:]
    if not path.exists():
        raise ConfigError(f"config file {path} not found")
    extra = []
    for line in path.read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition("=")
        flag = "--" + key.strip().replace("_", "-")
        if flag not in rest:
            extra += [flag, value.strip()]
    return rest + extra


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv = _apply_config_file(argv)
        args = build_parser().parse_args(argv)
        return args.fn(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())
