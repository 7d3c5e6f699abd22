"""Command-line entry point.

    conflab run     --config CFG --out DIR [--seed-override N]
    conflab sweep   --config CFG --grid 0:1:0.1 --seeds 50 --out DIR
    conflab roc     SAMPLES.csv --out DIR [--criterion youden|min-error]
    conflab fitness REF.csv IMPL.csv --out DIR

Exit status: 0 success, 1 runtime failure, 2 invalid input.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import replace
from pathlib import Path

from .config import ConfigError, load_config
from .conformance import CATEGORIES
from .engine import run_scenario, sweep_argmin, sweep_shared_fraction
from .fitness import (
    PerformanceCurve,
    fidelity,
    fitness_decomposition,
    potential_fitness,
    realized_fitness,
)
from .sdt import DegeneratePopulationError, LabeledSample, optimal_cutoff, roc_curve

EXIT_OK, EXIT_RUNTIME, EXIT_INPUT = 0, 1, 2

PER_TICK_FIELDS = ("tick", "tasks_attempted", "tasks_succeeded", "ahead_of_time", "task_time") \
    + CATEGORIES
EVENT_FIELDS = ("tick", "kind", "category", "amount", "detail")
SWEEP_FIELDS = ("shared_fraction", "mean_total_cost", "mean_success_rate")
ROC_FIELDS = ("fpr", "tpr", "cutoff")
FITNESS_FIELDS = ("IF", "AF", "MF", "PF", "RF", "FI")


class InputError(Exception):
    pass


def fmt(x) -> str:
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return format(x, ".12g")
    return str(x)


def _json_num(x):
    if isinstance(x, float):
        if not math.isfinite(x):
            return fmt(x)
        return float(format(x, ".12g"))
    if isinstance(x, dict):
        return {k: _json_num(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_json_num(v) for v in x]
    return x


def write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])


def write_json(path: Path, doc) -> None:
    path.write_text(json.dumps(_json_num(doc), indent=2, sort_keys=True) + "\n")


def _out_dir(path) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load(args):
    path = Path(args.config)
    if not path.is_file():
        raise InputError(f"config file not found: {path}")
    try:
        cfg = load_config(path)
    except ConfigError as exc:
        raise InputError("invalid config:\n  " + "\n  ".join(exc.errors)) from None
    if args.seed_override is not None:
        cfg = replace(cfg, seed=args.seed_override)
    return cfg


def cmd_run(args) -> int:
    cfg = _load(args)
    result = run_scenario(cfg)
    out = _out_dir(args.out)
    rows = []
    for rec in result.per_tick:
        led = rec.ledger
        rows.append([rec.tick, rec.tasks_attempted, rec.tasks_succeeded,
                     led.ahead_of_time, led.task_time] + [led.get(c) for c in CATEGORIES])
    write_csv(out / "per_tick.csv", PER_TICK_FIELDS, rows)
    write_csv(out / "events.csv", EVENT_FIELDS, result.event_log)
    totals = result.totals
    write_json(out / "summary.json", {
        "seed": cfg.seed,
        "config": cfg.to_dict(),
        "totals": {
            "ahead_of_time": totals.ahead_of_time,
            "task_time": totals.task_time,
            "total_cost": totals.total,
            "breakdown": {c: totals.get(c) for c in CATEGORIES},
        },
        "tasks_attempted": result.tasks_attempted,
        "tasks_succeeded": result.tasks_succeeded,
        "success_rate": result.success_rate,
        "standard_version": result.standard_version,
        "final_divergence": list(result.final_divergence),
    })
    return EXIT_OK


def parse_grid(spec: str):
    parts = spec.split(":")
    if len(parts) != 3:
        raise InputError(f"grid must be start:stop:step, got {spec!r}")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        raise InputError(f"grid values must be numbers, got {spec!r}") from None
    if not (0.0 <= start <= stop <= 1.0) or not step > 0:
        raise InputError(f"grid must satisfy 0 <= start <= stop <= 1 and step > 0, got {spec!r}")
    n = int(math.floor((stop - start) / step + 1e-9))
    return [round(start + i * step, 12) for i in range(n + 1)]


def cmd_sweep(args) -> int:
    cfg = _load(args)
    grid = parse_grid(args.grid)
    if args.seeds < 1:
        raise InputError("--seeds must be >= 1")
    points = sweep_shared_fraction(cfg, grid, args.seeds)
    out = _out_dir(args.out)
    write_csv(out / "sweep.csv", SWEEP_FIELDS, points)
    best = sweep_argmin(points)
    write_json(out / "summary.json", {
        "seed": cfg.seed,
        "seeds_per_point": args.seeds,
        "grid": grid,
        "config": cfg.to_dict(),
        "argmin": dict(zip(SWEEP_FIELDS, best)),
    })
    return EXIT_OK


def _read_rows(path, required):
    path = Path(path)
    if not path.is_file():
        raise InputError(f"file not found: {path}")
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise InputError(f"{path}: empty file")
        header = [h.strip() for h in header]
        missing = [c for c in required if c not in header]
        if missing:
            raise InputError(f"{path}: missing column(s) {', '.join(missing)}")
        idx = [header.index(c) for c in required]
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise InputError(f"{path}: row {lineno}: expected {len(header)} fields")
            yield lineno, [row[i].strip() for i in idx]


def _number(path, lineno, name, text):
    try:
        v = float(text)
    except ValueError:
        raise InputError(f"{path}: row {lineno}: {name} is not a number: {text!r}") from None
    if not math.isfinite(v):
        raise InputError(f"{path}: row {lineno}: {name} must be finite")
    return v


def read_samples(path):
    samples = []
    for lineno, (marker, suitable) in _read_rows(path, ("marker", "suitable")):
        m = _number(path, lineno, "marker", marker)
        if suitable not in ("0", "1"):
            raise InputError(f"{path}: row {lineno}: suitable must be 0 or 1, got {suitable!r}")
        samples.append(LabeledSample(m, suitable == "1"))
    if not samples:
        raise InputError(f"{path}: no samples")
    return samples


def read_curve(path) -> PerformanceCurve:
    segs = []
    for lineno, fields in _read_rows(path, ("bin_start", "bin_end", "probability")):
        start, end, p = (_number(path, lineno, n, t)
                         for n, t in zip(("bin_start", "bin_end", "probability"), fields))
        if not 0.0 <= p <= 1.0:
            raise InputError(f"{path}: row {lineno}: probability {p} outside [0, 1]")
        segs.append((start, end, p))
    if not segs:
        raise InputError(f"{path}: no curve rows")
    try:
        return PerformanceCurve((segs[0][0], segs[-1][1]), tuple(segs))
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None


def cmd_roc(args) -> int:
    samples = read_samples(args.samples)
    try:
        curve = roc_curve(samples)
    except DegeneratePopulationError as exc:
        raise InputError(f"degenerate population: {exc}") from None
    criterion = args.criterion.replace("-", "_")
    cutoff = optimal_cutoff(curve, criterion, args.cost_ratio)
    out = _out_dir(args.out)
    write_csv(out / "roc.csv", ROC_FIELDS, curve.points)
    write_json(out / "summary.json", {
        "auc": curve.auc,
        "criterion": args.criterion,
        "cost_ratio": args.cost_ratio,
        "optimal_cutoff": cutoff,
        "n_suitable": curve.n_pos,
        "n_unsuitable": curve.n_neg,
    })
    return EXIT_OK


def cmd_fitness(args) -> int:
    ref = read_curve(args.reference)
    imp = read_curve(args.implemented)
    if ref.domain != imp.domain:
        raise InputError(f"curve domains differ: {ref.domain} vs {imp.domain}")
    d = fitness_decomposition(ref, imp)
    values = (d.intrinsic_if, d.additional_af, d.missing_mf,
              potential_fitness(d), realized_fitness(d), fidelity(d))
    out = _out_dir(args.out)
    write_csv(out / "fitness.csv", FITNESS_FIELDS, [values])
    write_json(out / "summary.json", dict(zip(FITNESS_FIELDS, values)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="conflab", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate one scenario")
    run.add_argument("--config", required=True)
    run.add_argument("--out", required=True)
    run.add_argument("--seed-override", type=int)
    run.set_defaults(func=cmd_run)

    sweep = sub.add_parser("sweep", help="sweep shared_fraction and report mean cost")
    sweep.add_argument("--config", required=True)
    sweep.add_argument("--out", required=True)
    sweep.add_argument("--grid", default="0:1:0.1")
    sweep.add_argument("--seeds", type=int, default=10)
    sweep.add_argument("--seed-override", type=int)
    sweep.set_defaults(func=cmd_sweep)

    roc = sub.add_parser("roc", help="ROC, AUC and cut-off from a marker,suitable CSV")
    roc.add_argument("samples")
    roc.add_argument("--out", required=True)
    roc.add_argument("--criterion", choices=("youden", "min-error"), default="youden")
    roc.add_argument("--cost-ratio", type=float, default=1.0,
                     help="false-positive weight relative to a false negative (min-error)")
    roc.set_defaults(func=cmd_roc)

    fit = sub.add_parser("fitness", help="IF/AF/MF/PF/RF/FI from two step-curve CSVs")
    fit.add_argument("reference")
    fit.add_argument("implemented")
    fit.add_argument("--out", required=True)
    fit.set_defaults(func=cmd_fitness)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InputError as exc:
        print(f"conflab: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"conflab: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except Exception as exc:  # noqa: BLE001 - the exit-code contract covers everything else
        print(f"conflab: runtime error: {exc!r}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
