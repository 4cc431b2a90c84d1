"""Command-line interface.

    ncho enclose --sector +1 --alpha 1 --beta 2 --n 0 --N 10
    ncho spectrum --alpha 1 --beta 2 --count 8
    ncho curve --sector +1 --n 0 --alpha-range 1:3:5 --beta-range 2:2:1 --format tsv-plot -o c.tsv
    ncho gap --alpha 1 --beta 2 [--n 0 --branch 1]
    ncho groundstate --alpha 1 --beta 2
    ncho verify --alpha 1 --beta 2 --iw07 5 --positivity-N 200
    ncho repro --example 6.2

Exit codes: 0 success, 2 configuration error, 3 not certifiable,
4 I/O error, 5 eigenvalue index out of range.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from dataclasses import dataclass, field
from typing import Any

from . import analysis
from .eigensolve import IndexOutOfRange, NoConvergence
from .enclosure import DEFAULT_N_MAX, NotCertifiable, enclose, enclose_auto, lambda_cap
from .gapcert import DEFAULT_N0, a_sequence, gap_lower_bound
from .jacobi import SECTORS, Branch, NchoParams, Parity, SectorId
from .output import dumps_json, emit_plot_data, envelope, plot_rows, resolve_output, rows_to_csv

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NOT_CERTIFIABLE = 3
EXIT_IO = 4
EXIT_INDEX = 5

COMMANDS = ("enclose", "spectrum", "curve", "gap", "verify", "groundstate", "repro")

# worked example alpha=1, beta=2, N=10, sector +1: target intervals for n = 0, 1, 2
REPRO_TARGETS = {0: (0.36691785, 0.36691786), 1: (2.43291, 2.43292), 2: (4.714, 4.717)}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    sector: SectorId | None = None
    params: NchoParams | None = None
    grid: list[NchoParams] = field(default_factory=list)
    n: int | None = None
    count: int | None = None
    N: int | None = None
    N_max: int = DEFAULT_N_MAX
    width_goal: float = 1e-8
    tol: float = 1e-12
    n0: int = DEFAULT_N0
    branch: Branch | None = None
    iw07_max: int = 5
    positivity_N: int = 200
    example: str = "6.2"
    workers: int = 1
    fmt: str = "json"
    output: str | None = None
    warnings: list[str] = field(default_factory=list)

    def echo(self) -> dict:
        out = {"command": self.command, "format": self.fmt}
        for key in ("sector", "params", "n", "count", "N", "branch", "example"):
            val = getattr(self, key)
            if val is not None:
                out[key] = val
        if self.grid:
            out["grid"] = self.grid
        if self.command in ("enclose", "spectrum", "curve", "gap", "verify", "groundstate"):
            out.update(width_goal=self.width_goal, N_max=self.N_max)
        if self.command == "enclose":
            out["tol"] = self.tol
        if self.command == "gap":
            out["n0"] = self.n0
        if self.command == "verify":
            out.update(iw07_max=self.iw07_max, positivity_N=self.positivity_N)
        return out


def _range(text: str) -> list[float]:
    try:
        lo, hi, steps = text.split(":")
        lo, hi, steps = float(lo), float(hi), int(steps)
    except ValueError:
        raise ConfigError(f"range must look like lo:hi:steps, got {text!r}") from None
    if steps < 1 or not (math.isfinite(lo) and math.isfinite(hi)):
        raise ConfigError(f"bad range {text!r}")
    if steps == 1:
        return [lo]
    return [lo + (hi - lo) * i / (steps - 1) for i in range(steps)]


def _points(text: str) -> list[tuple[float, float]]:
    pts = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            a, b = (float(x) for x in chunk.split(","))
        except ValueError:
            raise ConfigError(f"point must look like alpha,beta; got {chunk!r}") from None
        pts.append((a, b))
    return pts


def _params(a: float, b: float) -> NchoParams:
    try:
        return NchoParams(a, b)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ncho", description="Certified spectra of non-commutative harmonic oscillators")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, params=True, grid=False):
        if params:
            p.add_argument("--alpha", type=float)
            p.add_argument("--beta", type=float)
        if grid:
            p.add_argument("--points", help="explicit grid 'a1,b1;a2,b2;...'")
            p.add_argument("--alpha-range", help="lo:hi:steps")
            p.add_argument("--beta-range", help="lo:hi:steps")
        p.add_argument("--format", dest="fmt", choices=("json", "csv", "tsv-plot"), default="json")
        p.add_argument("-o", "--output", help="output file (relative paths resolve against $NCHO_OUTPUT_DIR)")

    def sizing(p):
        p.add_argument("--width-goal", type=float, default=1e-8)
        p.add_argument("--N-max", dest="N_max", type=int, default=DEFAULT_N_MAX)

    p = sub.add_parser("enclose", help="enclosure of one sector eigenvalue")
    common(p)
    p.add_argument("--sector", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--N", dest="N", type=int, help="fixed truncation size; omit for automatic growth")
    p.add_argument("--tol", type=float, default=1e-12)
    sizing(p)

    p = sub.add_parser("spectrum", help="lowest eigenvalues of Q merged over sectors")
    common(p)
    p.add_argument("--count", type=int, default=8)
    sizing(p)

    p = sub.add_parser("curve", help="trace one sector eigenvalue over a parameter grid")
    common(p, params=False, grid=True)
    p.add_argument("--sector", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    sizing(p)

    p = sub.add_parser("gap", help="odd/even gap constant and optional crossing report")
    common(p, grid=True)
    p.add_argument("--n", type=int, help="eigenvalue index for the crossing report")
    p.add_argument("--branch", type=int, choices=(1, 2))
    p.add_argument("--n0", type=int, default=DEFAULT_N0)
    sizing(p)

    p = sub.add_parser("groundstate", help="evenness and simplicity of the lowest eigenvalue")
    common(p)
    sizing(p)

    p = sub.add_parser("verify", help="structural checks at one or more parameter points")
    common(p, grid=True)
    p.add_argument("--iw07", dest="iw07_max", type=int, default=5, help="check band inequality for n = 1..K")
    p.add_argument("--positivity-N", dest="positivity_N", type=int, default=200)
    sizing(p)

    p = sub.add_parser("repro", help="reproduce the alpha=1, beta=2, N=10 worked example")
    p.add_argument("--example", default="6.2")
    p.add_argument("--format", dest="fmt", choices=("table", "json"), default="table")
    p.add_argument("-o", "--output")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Validate parsed arguments; raises ConfigError before any computation."""
    cfg = RunConfig(command=args.command, fmt=args.fmt, output=args.output)
    for key in ("n", "count", "N", "N_max", "width_goal", "tol", "n0", "iw07_max",
                "positivity_N", "workers", "example"):
        if hasattr(args, key) and getattr(args, key) is not None:
            setattr(cfg, key, getattr(args, key))
    if getattr(args, "sector", None) is not None:
        try:
            cfg.sector = SectorId.parse(args.sector)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    if getattr(args, "branch", None) is not None:
        cfg.branch = Branch(args.branch)

    if cfg.command == "repro":
        if cfg.example != "6.2":
            raise ConfigError(f"unknown example {cfg.example!r}; available: 6.2")
        return cfg

    if cfg.n is not None and cfg.n < 0:
        raise ConfigError("--n must be nonnegative")
    if cfg.N is not None and cfg.N < 0:
        raise ConfigError("--N must be nonnegative")
    if cfg.N_max < 1:
        raise ConfigError("--N-max must be positive")
    if not (cfg.width_goal > 0 and math.isfinite(cfg.width_goal)):
        raise ConfigError("--width-goal must be positive")
    if not cfg.tol > 0:
        raise ConfigError("--tol must be positive")
    if cfg.n0 < 1:
        raise ConfigError("--n0 must be positive")
    if cfg.workers < 1:
        raise ConfigError("--workers must be positive")
    if cfg.count is not None and cfg.count < 1:
        raise ConfigError("--count must be positive")
    if cfg.iw07_max < 0:
        raise ConfigError("--iw07 must be nonnegative")
    if cfg.positivity_N < 2:
        raise ConfigError("--positivity-N must be at least 2")
    if cfg.fmt == "tsv-plot" and cfg.command != "curve":
        raise ConfigError("tsv-plot output is only available for the curve command")
    if cfg.fmt == "tsv-plot" and not cfg.output:
        raise ConfigError("tsv-plot output needs --output")

    raw: list[tuple[float, float]] = []
    if getattr(args, "points", None):
        raw += _points(args.points)
    if getattr(args, "alpha_range", None) or getattr(args, "beta_range", None):
        if not (args.alpha_range and args.beta_range):
            raise ConfigError("--alpha-range and --beta-range must be given together")
        raw += [(a, b) for a in _range(args.alpha_range) for b in _range(args.beta_range)]
    single = getattr(args, "alpha", None), getattr(args, "beta", None)
    if single != (None, None):
        if None in single:
            raise ConfigError("--alpha and --beta must be given together")
        cfg.params = _params(*single)
    for a, b in raw:
        try:
            cfg.grid.append(NchoParams(a, b))
        except ValueError as exc:
            cfg.warnings.append(f"skipped grid point ({a!r}, {b!r}): {exc}")

    if cfg.command == "curve":
        if not cfg.grid:
            raise ConfigError("curve needs a nonempty grid of valid points")
    elif cfg.command in ("gap", "verify"):
        if cfg.params is None and not cfg.grid:
            raise ConfigError(f"{cfg.command} needs --alpha/--beta or a grid")
    elif cfg.params is None:
        raise ConfigError(f"{cfg.command} needs --alpha and --beta")
    if cfg.command == "enclose" and cfg.N is not None and cfg.n > cfg.N:
        raise IndexOutOfRange(f"eigenvalue index {cfg.n} exceeds truncation size N={cfg.N}")
    if cfg.command == "gap" and cfg.n is None and cfg.branch is not None:
        raise ConfigError("--branch needs --n")
    return cfg


def _grid_of(cfg: RunConfig) -> list[NchoParams]:
    return ([cfg.params] if cfg.params is not None else []) + cfg.grid


def _enclosure_row(e) -> dict:
    return {"sector": str(e.sector), "n": e.n, "lower": e.lower, "upper": e.upper,
            "midpoint": e.mid, "width": e.width, "N": e.N, "cap": e.cap,
            "certified": e.certified, "bisection_tol": e.bisection_tol}


def _run_enclose(cfg):
    if cfg.N is not None:
        e = enclose(cfg.sector, cfg.params, cfg.n, cfg.N, cfg.tol)
    else:
        e = enclose_auto(cfg.sector, cfg.params, cfg.n, cfg.width_goal, cfg.N_max)
    return {"alpha": cfg.params.alpha, "beta": cfg.params.beta, **_enclosure_row(e)}, [_enclosure_row(e)]


def _run_spectrum(cfg):
    lines = analysis.merged_spectrum(cfg.params, cfg.count or 8, cfg.width_goal, cfg.N_max)
    rows = [{"global_rank": l.global_rank, "sector": str(l.sector), "sector_index": l.sector_index,
             "lower": l.value_lower, "upper": l.value_upper, "midpoint": l.mid, "overlap": l.overlap}
            for l in lines]
    return {"alpha": cfg.params.alpha, "beta": cfg.params.beta, "lines": rows}, rows


def _run_curve(cfg):
    trace = analysis.trace_curve(cfg.sector, cfg.n, cfg.grid, cfg.width_goal, cfg.N_max, cfg.workers)
    for p in trace.dropped:
        cfg.warnings.append(f"uncertified point dropped: alpha={p.alpha!r}, beta={p.beta!r}")
    if cfg.fmt == "tsv-plot":
        if not trace.points:
            raise NotCertifiable("no certified points on the grid")
        emit_plot_data(trace.points, cfg.output)
    rows = [{"alpha": pt.params.alpha, "beta": pt.params.beta, **_enclosure_row(pt.enclosure)}
            for pt in trace.points]
    payload = {"sector": str(cfg.sector), "n": cfg.n, "points": rows,
               "dropped": [{"alpha": p.alpha, "beta": p.beta} for p in trace.dropped]}
    return payload, rows


def _run_gap(cfg):
    certs = []
    for p in _grid_of(cfg):
        c = gap_lower_bound(p, cfg.n0)
        certs.append({"alpha": p.alpha, "beta": p.beta, "delta": c.delta_value,
                      "delta_operator_bound": c.operator_bound, "in_region": c.in_region,
                      "n0": c.n0, "a_tail": c.a_tail, "f_norm_bound": c.f_norm_bound})
    seq = a_sequence(cfg.n0)
    payload: dict[str, Any] = {"certificates": certs, "a_head": seq[:4]}
    if len(certs) == 1:
        payload.update(certs[0])
    rows = certs
    if cfg.n is not None:
        branches = [cfg.branch] if cfg.branch else [Branch.ONE, Branch.TWO]
        crossing = []
        for br in branches:
            for r in analysis.crossing_report(br, cfg.n, _grid_of(cfg), cfg.width_goal, cfg.N_max):
                crossing.append({
                    "alpha": r.params.alpha, "beta": r.params.beta, "branch": br.value, "n": cfg.n,
                    "gap_lower": r.gap_interval.lower if r.gap_interval else None,
                    "gap_upper": r.gap_interval.upper if r.gap_interval else None,
                    "certified_no_crossing": r.certified_no_crossing,
                    "delta": r.delta, "in_region": r.in_region})
        payload["crossing"] = crossing
        rows = crossing
    return payload, rows


def _ground_row(p, r):
    return {"alpha": p.alpha, "beta": p.beta,
            "E_plus_lower": r.E_plus.lower, "E_plus_upper": r.E_plus.upper,
            "E_minus_lower": r.E_minus.lower, "E_minus_upper": r.E_minus.upper,
            "even": r.even, "simple": r.simple}


def _run_groundstate(cfg):
    r = analysis.ground_state_report(cfg.params, cfg.width_goal, cfg.N_max)
    row = _ground_row(cfg.params, r)
    return row, [row]


def _run_verify(cfg):
    rows = []
    for p in _grid_of(cfg):
        gs = analysis.ground_state_report(p, cfg.width_goal, cfg.N_max)
        rows.append({"alpha": p.alpha, "beta": p.beta, "check": "ground_even", "passed": gs.even})
        expect_simple = not p.degenerate
        rows.append({"alpha": p.alpha, "beta": p.beta, "check": "ground_simple" if expect_simple else "ground_branch_degenerate",
                     "passed": gs.simple if expect_simple else not gs.simple})
        for n in range(1, cfg.iw07_max + 1):
            rows.append({"alpha": p.alpha, "beta": p.beta, "check": f"iw07_n{n}",
                         "passed": analysis.iw07_check(p, n, cfg.width_goal, cfg.N_max)})
        for s in SECTORS:
            rows.append({"alpha": p.alpha, "beta": p.beta, "check": f"positivity_{s}",
                         "passed": analysis.positivity_check(s, p, cfg.positivity_N)})
    return {"checks": rows, "all_passed": all(r["passed"] for r in rows)}, rows


def repro_rows() -> list[dict]:
    params = NchoParams(1.0, 2.0)
    sector = SectorId(Parity.PLUS, Branch.ONE)
    rows = []
    for n in range(4):
        e = enclose(sector, params, n, 10, 1e-12)
        tgt = REPRO_TARGETS.get(n)
        first_inside = None
        if tgt is not None:
            for N in range(10, 81):
                f = enclose(sector, params, n, N, 1e-12)
                if f.certified and tgt[0] <= f.lower and f.upper <= tgt[1]:
                    first_inside = N
                    break
        rows.append({
            "n": n, "N": 10, "cap": lambda_cap(sector, params, 10), "lower": e.lower, "upper": e.upper,
            "certified": e.certified,
            "target_lower": tgt[0] if tgt else None, "target_upper": tgt[1] if tgt else None,
            "inside_target": bool(tgt) and e.certified and tgt[0] <= e.lower and e.upper <= tgt[1],
            "first_N_inside_target": first_inside,
        })
    return rows


def repro_table(rows: list[dict]) -> str:
    head = f"{'n':>2} {'N':>3} {'cap':>6} {'lower':>12} {'upper':>12} {'certified':>9} {'target':>25} {'inside':>6} {'N_inside':>8}"
    out = ["alpha=1 beta=2 sector=+1 N=10", head]
    for r in rows:
        tgt = (f"[{r['target_lower']:.9g}, {r['target_upper']:.9g}]"
               if r["target_lower"] is not None else "-")
        nin = str(r["first_N_inside_target"]) if r["first_N_inside_target"] is not None else "-"
        out.append(f"{r['n']:>2} {r['N']:>3} {r['cap']:>6.9g} {r['lower']:>12.9f} {r['upper']:>12.9f} "
                   f"{'yes' if r['certified'] else 'REFUSED':>9} {tgt:>25} "
                   f"{'yes' if r['inside_target'] else 'no':>6} {nin:>8}")
    return "\n".join(out) + "\n"


_RUNNERS = {
    "enclose": _run_enclose, "spectrum": _run_spectrum, "curve": _run_curve, "gap": _run_gap,
    "groundstate": _run_groundstate, "verify": _run_verify,
}


def run(cfg: RunConfig) -> tuple[str, dict | None]:
    """Execute a validated config; returns the text to emit and the JSON envelope (if any)."""
    if cfg.command == "repro":
        rows = repro_rows()
        if cfg.fmt == "table":
            return repro_table(rows), None
        doc = envelope("repro", cfg.echo(), {"rows": rows}, cfg.warnings)
        return dumps_json(doc), doc
    payload, rows = _RUNNERS[cfg.command](cfg)
    doc = envelope(cfg.command, cfg.echo(), payload, cfg.warnings)
    if cfg.fmt == "csv":
        return rows_to_csv(rows), doc
    if cfg.fmt == "tsv-plot":
        return "", doc
    return dumps_json(doc), doc


def _error(code: int, kind: str, msg: str) -> int:
    import json
    sys.stdout.write(json.dumps({"error": kind, "message": msg, "exit_code": code}) + "\n")
    return code


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        cfg = config_from_args(args)
        for w in cfg.warnings:
            logging.getLogger("ncho").warning(w)
        text, _ = run(cfg)
        if cfg.output and cfg.fmt != "tsv-plot":
            resolve_output(cfg.output).write_text(text)
        elif text:
            sys.stdout.write(text)
    except ConfigError as exc:
        return _error(EXIT_CONFIG, "ConfigError", str(exc))
    except IndexOutOfRange as exc:
        return _error(EXIT_INDEX, "IndexOutOfRange", str(exc))
    except (NotCertifiable, NoConvergence) as exc:
        return _error(EXIT_NOT_CERTIFIABLE, type(exc).__name__, str(exc))
    except OSError as exc:
        return _error(EXIT_IO, "IoError", str(exc))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
