"""
Command-line surface: roots, auto3 and curv.

    python app.py roots G2
    python app.py auto3 F4 --all
    python app.py auto3 C4 A3III 1 --format json
    python app.py curv cp3-sp --starts 64 --seed 42 --out report.json
"""
import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from config import (CURV_FLAT_BUDGET, CURV_MAX_ITER, CURV_SCALE, CURV_SEED, CURV_STARTS, CURV_TOL,
                    CURV_WORKERS, LOG_LEVEL)
from curvature import MetricSpec, PinchConfig, pinch
from errors import InvalidInputError
from exactmath import parse_fraction
from rootsys import DynkinType, build_root_system
from threesym import Auto3Spec, build_algebra, build_auto3, build_space, enumerate_order3

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARTIAL = 3

FORMATS = ("table", "json", "csv")


@dataclass
class RunConfig:
    command: str
    target: str
    spec: List[str] = field(default_factory=list)
    all_specs: bool = False
    dedup: bool = False
    scale: Fraction = field(default_factory=lambda: parse_fraction(CURV_SCALE))
    seed: int = CURV_SEED
    starts: int = CURV_STARTS
    max_iter: int = CURV_MAX_ITER
    tol: float = CURV_TOL
    flat_budget: int = CURV_FLAT_BUDGET
    workers: int = CURV_WORKERS
    fmt: str = "table"
    out: Optional[str] = None


def _fraction_arg(text: str) -> Fraction:
    try:
        value = parse_fraction(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))
    if value <= 0:
        raise argparse.ArgumentTypeError(f"scale must be positive, got {text}")
    return value


def _tolerance_arg(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"tolerance must be a number, got {text}")
    if not value > 0:
        raise argparse.ArgumentTypeError(f"tolerance must be positive, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    output = argparse.ArgumentParser(add_help=False)
    output.add_argument("--format", dest="fmt", choices=FORMATS, default="table", help="output format")
    output.add_argument("--out", default=None, help="write the report to this path instead of stdout")

    parser = argparse.ArgumentParser(prog="liecurv", description="Root systems, 3-symmetric spaces and "
                                     "sectional curvature of normal homogeneous metrics")
    sub = parser.add_subparsers(dest="command", required=True)

    roots = sub.add_parser("roots", parents=[output], help="root system report")
    roots.add_argument("type", help="Dynkin type, e.g. G2, C3, F4")

    auto3 = sub.add_parser("auto3", parents=[output], help="order-3 inner automorphisms and their isotropy")
    auto3.add_argument("type", help="Dynkin type")
    auto3.add_argument("spec", nargs="*", help="KIND i [j], e.g. A3III 1")
    auto3.add_argument("--all", dest="all_specs", action="store_true", help="enumerate every admissible spec")
    auto3.add_argument("--dedup", action="store_true", help="one spec per diagram-symmetry orbit")

    curv = sub.add_parser("curv", parents=[output], help="curvature report of a 3-symmetric space")
    curv.add_argument("space", help="preset (cp3-sp, cp5-sp, cp3-su, s6, f6) or TYPE:KIND:i[:j]")
    curv.add_argument("--scale", type=_fraction_arg, default=parse_fraction(CURV_SCALE), help="metric -c B, as p/q")
    curv.add_argument("--seed", type=int, default=CURV_SEED)
    curv.add_argument("--starts", type=int, default=CURV_STARTS)
    curv.add_argument("--max-iter", dest="max_iter", type=int, default=CURV_MAX_ITER)
    curv.add_argument("--tol", type=_tolerance_arg, default=CURV_TOL, help="gradient norm, relative to max(1, |K|)")
    curv.add_argument("--flat-budget", dest="flat_budget", type=int, default=CURV_FLAT_BUDGET)
    curv.add_argument("--workers", type=int, default=CURV_WORKERS)
    return parser


def _to_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command, target=getattr(args, "type", None) or getattr(args, "space", ""),
                    fmt=args.fmt, out=args.out)
    if args.command == "auto3":
        cfg.spec, cfg.all_specs, cfg.dedup = list(args.spec), args.all_specs, args.dedup
    if args.command == "curv":
        cfg.scale, cfg.seed, cfg.starts = args.scale, args.seed, args.starts
        cfg.max_iter, cfg.tol = args.max_iter, args.tol
        cfg.flat_budget, cfg.workers = args.flat_budget, args.workers
    return cfg


def _csv_text(rows: Sequence[Sequence]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerows(rows)
    return buffer.getvalue()


def _render(cfg: RunConfig, payload: dict, table: List[str], rows: List[Sequence]) -> str:
    if cfg.fmt == "json":
        return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
    if cfg.fmt == "csv":
        return _csv_text(rows)
    return "\n".join(table) + "\n"


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out:
        Path(cfg.out).write_text(text, encoding="utf-8")
        logger.info(f"✅ Report written to {cfg.out}")
    else:
        sys.stdout.write(text)


def cmd_roots(cfg: RunConfig) -> Tuple[dict, List[str], List[Sequence]]:
    """Simple and positive roots, gram matrix, maximal root and marks"""
    rs = build_root_system(DynkinType.parse(cfg.target))
    payload = rs.to_dict()
    table = [
        f"Root system {payload['type']} (rank {payload['rank']}, {len(payload['positive'])} positive roots)",
        f"maximal root: {rs.maximal_root.label()}  marks: {tuple(payload['marks'])}  "
        f"dual Coxeter number: {payload['dual_coxeter_number']}",
        "",
        "gram (Killing-normalized):",
    ]
    table += ["  " + "  ".join(f"{x:>8}" for x in row) for row in payload["gram"]]
    table += ["", f"{'#':>4}  {'height':>6}  {'coords':<24}  root"]
    for k, root in enumerate(payload["positive"], start=1):
        table.append(f"{k:>4}  {root['height']:>6}  {str(tuple(root['coords'])):<24}  {root['label']}")
    rows = [["index", "height", "label", "coords"]]
    rows += [[k, r["height"], r["label"], " ".join(map(str, r["coords"]))]
             for k, r in enumerate(payload["positive"], start=1)]
    return payload, table, rows


def cmd_auto3(cfg: RunConfig) -> Tuple[dict, List[str], List[Sequence]]:
    """Pi(H), Delta+(H), isotropy type, dim m and the a(H) histogram per spec"""
    dtype = DynkinType.parse(cfg.target)
    rs = build_root_system(dtype)
    if cfg.all_specs:
        specs = enumerate_order3(rs, dedup=cfg.dedup)
    elif cfg.spec:
        specs = [Auto3Spec.parse(cfg.spec[0], *cfg.spec[1:])]
    else:
        raise InvalidInputError("auto3 needs KIND i [j] or --all")
    alg = build_algebra(dtype)
    spaces = [build_auto3(alg, spec).to_dict() for spec in specs]
    payload = {"type": str(dtype), "dedup": cfg.dedup, "spaces": spaces}

    table = [f"Order-3 automorphisms of {dtype} (marks {rs.marks})", ""]
    table.append(f"{'spec':<14}{'isotropy':<22}{'compact':<24}{'dim m':>6}  Pi(H) / a(H)")
    rows = [["spec", "isotropy", "compact", "dim_m", "piH", "alphaH"]]
    for space in spaces:
        spec = f"{space['spec']['kind']}:{':'.join(map(str, space['spec']['indices']))}"
        pi = " ".join("[" + ",".join(map(str, c)) + "]" for c in space["piH"]) or "-"
        hist = " ".join(f"{k}x{v}" for k, v in space["alphaH"].items())
        table.append(f"{spec:<14}{space['isotropy']:<22}{space['isotropy_compact']:<24}{space['dim_m']:>6}  {pi}")
        table.append(f"{'':<66}  a(H): {hist}")
        rows.append([spec, space["isotropy"], space["isotropy_compact"], space["dim_m"], pi, hist])
    if not spaces:
        table.append("(no inner automorphism of order 3 is allowed by the marks)")
    return payload, table, rows


def cmd_curv(cfg: RunConfig) -> Tuple[dict, List[str], List[Sequence], int]:
    """Basis table, pinching, flat-plane search and Ricci for one space"""
    space = build_space(cfg.target)
    pinch_cfg = PinchConfig(starts=cfg.starts, seed=cfg.seed, max_iter=cfg.max_iter, tol=cfg.tol,
                            flat_budget=cfg.flat_budget, workers=cfg.workers, metric=MetricSpec(cfg.scale))
    report = pinch(space, pinch_cfg)
    payload = report.to_dict()
    payload["isotropy"] = space.isotropy.label()
    payload["dim_m"] = space.dim_m

    table = [
        f"Space {payload['space']} ({payload['isotropy']}, dim m = {payload['dim_m']}), scale {payload['scale']}",
        f"kmin  = {payload['kmin']!r}",
        f"kmax  = {payload['kmax']!r}",
        f"delta = {payload['delta']!r}",
        f"basis pairs: min {payload['basis_kmin']}, max {payload['basis_kmax']}",
        f"flat witness: {'found' if payload['flat_witness'] else 'none'}",
        f"einstein defect = {payload['einstein_defect']!r}",
        f"starts {payload['starts']} (seed {payload['seed']}), converged {payload['converged_starts']}",
        "",
        f"argmin X = {payload['argmin'][0]!r}",
        f"argmin Y = {payload['argmin'][1]!r}",
        f"argmax X = {payload['argmax'][0]!r}",
        f"argmax Y = {payload['argmax'][1]!r}",
    ]
    if payload["flat_witness"]:
        table += [f"flat X = {payload['flat_witness'][0]!r}", f"flat Y = {payload['flat_witness'][1]!r}"]
    table += ["", f"{'i':>3} {'j':>3}  {'X':<18}{'Y':<18}K"]
    table += [f"{e['i']:>3} {e['j']:>3}  {e['x']:<18}{e['y']:<18}{e['k']}" for e in payload["basis_table"]]

    rows = [["key", "value"]]
    rows += [[key, payload[key]] for key in ("space", "scale", "kmin", "kmax", "delta", "basis_kmin",
                                             "basis_kmax", "einstein_defect", "starts", "seed", "converged_starts")]
    rows += [["flat_witness", "found" if payload["flat_witness"] else "none"], []]
    rows += [["i", "j", "x", "y", "k"]]
    rows += [[e["i"], e["j"], e["x"], e["y"], e["k"]] for e in payload["basis_table"]]
    code = EXIT_PARTIAL if report.failed_starts else EXIT_OK
    return payload, table, rows, code


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, run one command and return the exit code"""
    logging.basicConfig(level=getattr(logging, LOG_LEVEL.upper(), logging.WARNING),
                        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    cfg = _to_config(args)
    try:
        if cfg.command == "roots":
            payload, table, rows = cmd_roots(cfg)
            code = EXIT_OK
        elif cfg.command == "auto3":
            payload, table, rows = cmd_auto3(cfg)
            code = EXIT_OK
        else:
            payload, table, rows, code = cmd_curv(cfg)
    except ValueError as e:
        # InvalidInputError and parse failures
        logger.error(f"❌ {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    try:
        _emit(cfg, _render(cfg, payload, table, rows))
    except OSError as e:
        logger.error(f"❌ Cannot write report to {cfg.out}: {e}")
        print(f"error: cannot write {cfg.out}: {e}", file=sys.stderr)
        return EXIT_USAGE
    if code == EXIT_PARTIAL:
        logger.warning("⚠️ Some optimizer starts did not converge; report written with best values")
    return code


if __name__ == "__main__":
    sys.exit(main())
