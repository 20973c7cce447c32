"""Command-line front end.

Subcommands::

    measures   t, reliability, hazard, mrl, rhr of the series system
    errors     relative errors of the four measures plus an asymptote footer
    signs      OA/UA verdict per measure (one model or --all)
    crossings  zero crossing (or --extremum) of one error curve
    verify     closed forms against the numerical oracles

Exit codes: 0 ok, 2 invalid input, 3 solver failure, 4 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence

from .errors import asymptote, classify_sign, find_crossing, find_extremum, relative_error
from .exceptions import DomainError, SolverError
from .measures import MeasureKind, measure
from .models import (
    MODELS,
    PARAM_FIELDS,
    BlockBasu,
    Cowan,
    Freund,
    GumbelI,
    GumbelII,
    GumbelIII,
    Independent,
    MarshallOlkin,
    ModelParams,
    Sarkar,
    from_dict,
    to_dict,
)
from .oracle import linear_grid, random_params, verify_model

EXIT_OK, EXIT_DOMAIN, EXIT_SOLVER, EXIT_VERIFY = 0, 2, 3, 4

REPRESENTATIVE: List[ModelParams] = [
    Independent(1.0, 1.0),
    GumbelI(1.0, 1.0, 1.0),
    GumbelII(1.0, 1.0, 0.5),
    GumbelIII(1.0, 1.0, 2.0),
    Freund(1.0, 1.0, 0.3, 0.7),
    MarshallOlkin(1.0, 1.0, 1.0),
    BlockBasu(1.0, 1.0, 1.0),
    Cowan(1.0, 1.0, math.pi / 2),
    Sarkar(1.0, 1.0, 1.0),
]

COLUMNS = [k.value for k in MeasureKind]


@dataclass(frozen=True)
class RunConfig:
    model: Optional[ModelParams]
    t_min: float
    t_max: float
    steps: int
    output: Optional[str] = None
    fmt: str = "csv"

    def __post_init__(self):
        if not self.t_min < self.t_max:
            raise DomainError(f"need t_min < t_max, got {self.t_min} and {self.t_max}")
        if self.steps < 2:
            raise DomainError(f"need at least 2 steps, got {self.steps}")
        if self.t_min < 0:
            raise DomainError("times must be >= 0")

    def times(self) -> List[float]:
        return linear_grid(self.t_min, self.t_max, self.steps)


def _fmt(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, float):
        return format(v + 0.0, ".17g")  # + 0.0 folds -0.0 into 0
    return str(v)


def _jsonable(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def _parse_range(text: str, n: int, what: str) -> List[float]:
    parts = text.split(":")
    if len(parts) != n:
        raise DomainError(f"{what} must look like {':'.join(['X'] * n)}, got {text!r}")
    try:
        return [float(p) for p in parts]
    except ValueError:
        raise DomainError(f"{what} has a non-numeric part: {text!r}") from None


def _parse_grid(text: str):
    lo, hi, steps = _parse_range(text, 3, "--t/--grid")
    if steps != int(steps):
        raise DomainError(f"step count must be an integer, got {steps}")
    return lo, hi, int(steps)


def _model_from_args(args) -> Optional[ModelParams]:
    if args.config:
        try:
            with open(args.config) as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise DomainError(f"cannot read config {args.config}: {exc}") from None
        return from_dict(doc)
    if args.model is None:
        return None
    doc = {"model": args.model}
    for name in PARAM_FIELDS:
        value = getattr(args, name)
        if value is not None:
            doc[name] = value
    return from_dict(doc)


def _run_config(args) -> RunConfig:
    t_min, t_max, steps = _parse_grid(args.t)
    return RunConfig(_model_from_args(args), t_min, t_max, steps, args.output, args.format)


def _require_model(cfg: RunConfig) -> ModelParams:
    if cfg.model is None:
        raise DomainError("a model is required: use --model with parameters or --config")
    return cfg.model


def _safe(fn, *a) -> float:
    try:
        return fn(*a)
    except DomainError:
        return math.nan


def _emit(cfg: RunConfig, header: Sequence[str], rows: List[list], payload) -> str:
    if cfg.fmt == "json":
        text = json.dumps(_jsonable(payload), indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
        text = buf.getvalue()
    if cfg.output:
        with open(cfg.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return text


def _abscissa(args, t: float) -> float:
    return math.exp(-t) if getattr(args, "abscissa", "t") == "x" else t


def cmd_measures(args) -> int:
    cfg = _run_config(args)
    model = _require_model(cfg)
    x_name = args.abscissa
    rows = []
    for t in cfg.times():
        rows.append([_abscissa(args, t)] + [_safe(measure, model, k, t) for k in MeasureKind])
    payload = {"model": to_dict(model), "columns": [x_name] + COLUMNS, "rows": rows}
    _emit(cfg, [x_name] + COLUMNS, rows, payload)
    return EXIT_OK


def cmd_errors(args) -> int:
    cfg = _run_config(args)
    model = _require_model(cfg)
    kinds = [MeasureKind.parse(args.kind)] if args.kind else list(MeasureKind)
    x_name = args.abscissa
    header = [x_name] + [k.value for k in kinds]
    rows = []
    for t in cfg.times():
        rows.append([_abscissa(args, t)] + [_safe(relative_error, model, k, t) for k in kinds])
    limits = [asymptote(model, k) for k in kinds]
    payload = {
        "model": to_dict(model),
        "columns": header,
        "rows": rows,
        "asymptote": {k.value: v for k, v in zip(kinds, limits)},
    }
    _emit(cfg, header, rows + [["asymptote"] + limits], payload)
    return EXIT_OK


def cmd_signs(args) -> int:
    cfg = _run_config(args)
    models = REPRESENTATIVE if args.all else [_require_model(cfg)]
    rows, payload = [], []
    for model in models:
        verdicts = [classify_sign(model, k) for k in MeasureKind]
        rows.append([model.name] + [v.label() for v in verdicts])
        payload.append(
            {"model": to_dict(model), **{k.value: v.to_dict() for k, v in zip(MeasureKind, verdicts)}}
        )
    _emit(cfg, ["model"] + COLUMNS, rows, payload)
    return EXIT_OK


def cmd_crossings(args) -> int:
    cfg = _run_config(args)
    model = _require_model(cfg)
    if not args.kind:
        raise DomainError("crossings needs --kind")
    kind = MeasureKind.parse(args.kind)
    bracket = tuple(_parse_range(args.bracket, 2, "--bracket")) if args.bracket else None
    if args.extremum:
        what, report = "extremum", find_extremum(model, kind, bracket)
    else:
        what, report = "crossing", find_crossing(model, kind, bracket)
    header = ["model", "kind", "type", "t", "value", "bracket_lo", "bracket_hi", "iterations", "residual"]
    row = [
        model.name,
        kind.value,
        what,
        report.t_root,
        report.value_at_root,
        report.bracket[0],
        report.bracket[1],
        report.iterations,
        report.residual,
    ]
    payload = {"model": to_dict(model), "kind": kind.value, "type": what, **report.to_dict()}
    _emit(cfg, header, [row], payload)
    return EXIT_OK


def _verify_one(item):
    model, grid = item
    return verify_model(model, grid)


def cmd_verify(args) -> int:
    t_min, t_max, steps = _parse_grid(args.grid)
    cfg = RunConfig(_model_from_args(args), t_min, t_max, steps, args.output, args.format)
    if cfg.t_min <= 0:
        raise DomainError("verification grid must start above 0 (the RHR is singular at 0)")
    grid = cfg.times()
    if args.all:
        models = list(REPRESENTATIVE)
        rng = random.Random(args.seed)
        for cls in MODELS.values():
            models.extend(random_params(cls, rng) for _ in range(args.draws))
    else:
        models = [_require_model(cfg)]
    items = [(m, grid) for m in models]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_verify_one, items))
    else:
        results = [_verify_one(it) for it in items]
    reports = [r for batch in results for r in batch]
    header = ["model", "kind", "max_rel_dev", "worst_t", "tolerance", "passed"]
    rows = [
        [r.model.name, "diagonal" if r.kind is MeasureKind.RELIABILITY else r.kind.value,
         r.max_rel_dev, r.worst_t, r.tolerance, "yes" if r.passed else "no"]
        for r in reports
    ]
    _emit(cfg, header, rows, [r.to_dict() for r in reports])
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seriesrel",
        description="Series-system reliability measures and independence-assumption errors "
        "for bivariate exponential lifetime models.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", choices=list(MODELS))
    for name in PARAM_FIELDS:
        common.add_argument(f"--{name}", type=float)
    common.add_argument("--config", help="JSON model spec; overrides the model flags")
    common.add_argument("--t", default="0:5:101", metavar="MIN:MAX:STEPS")
    common.add_argument("--kind", choices=COLUMNS)
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--output", metavar="PATH")
    common.add_argument("--abscissa", choices=["t", "x"], default="t",
                        help="x plots against exp(-t)")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("measures", parents=[common]).set_defaults(func=cmd_measures)
    sub.add_parser("errors", parents=[common]).set_defaults(func=cmd_errors)
    p = sub.add_parser("signs", parents=[common])
    p.add_argument("--all", action="store_true", help="representative parameters of every model")
    p.set_defaults(func=cmd_signs)
    p = sub.add_parser("crossings", parents=[common])
    p.add_argument("--bracket", metavar="LO:HI")
    p.add_argument("--extremum", action="store_true")
    p.set_defaults(func=cmd_crossings)
    p = sub.add_parser("verify", parents=[common])
    p.add_argument("--all", action="store_true")
    p.add_argument("--grid", default="0.05:5:200", metavar="MIN:MAX:STEPS")
    p.add_argument("--draws", type=int, default=0, help="random parameter draws per model with --all")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
