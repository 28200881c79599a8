"""Command-line entry point: ``purifier {generate,screen,detect,evaluate,ablate}``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .. import __version__
from .._parallel import resolve_threads
from ..core import PurifiedSet, Role
from ..datagen import generate
from ..detect import run_stage2
from ..errors import ConfigError, PurifierError
from ..metrics import auroc, contamination_rate, purity_breakdown
from ..screening import run_stage1
from . import io
from .config import RunConfig, load_config
from .svg import retained_counts_chart
from .sweep import run_sweep


def load_datasets(cfg: RunConfig, need_test: bool = False):
    if cfg.synthetic is not None:
        return generate(cfg.synthetic)
    train = io.read_dataset(cfg.resolve(cfg.train_path), Role.TRAIN)
    test = None
    if cfg.test_path is not None:
        test = io.read_dataset(cfg.resolve(cfg.test_path), Role.TEST)
    elif need_test:
        raise ConfigError("dataset.test_path: required for this command")
    return train, test


def _pure_from_stage1(doc: dict, where) -> PurifiedSet:
    try:
        return PurifiedSet(doc["retained_ids"], float(doc["tau"]), float(doc["t"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: not a screen result ({exc})") from None


def cmd_generate(cfg: RunConfig, out: Path, args) -> list[Path]:
    if cfg.synthetic is None:
        raise ConfigError("dataset.synthetic: generate needs a synthetic section")
    train, test = generate(cfg.synthetic)
    return [
        io.write_dataset(train, out / "train.csv"),
        io.write_dataset(test, out / "test.csv"),
        io.write_json(
            {
                "command": "generate",
                "config": cfg.to_dict(),
                "n_train": train.n,
                "n_train_anomalous": int((train.labels == 1).sum()),
                "n_test": test.n,
                "n_test_anomalous": int((test.labels == 1).sum()),
            },
            out / "generate.json",
        ),
    ]


def screen(cfg: RunConfig, train, threads):
    return run_stage1(
        train, cfg.k, cfg.t, cfg.stage1_scorer, cfg.master_seed,
        exclude_native=cfg.exclude_native, normalize=cfg.normalize, threads=threads,
    )


def cmd_screen(cfg: RunConfig, out: Path, args) -> list[Path]:
    train, _ = load_datasets(cfg)
    r = screen(cfg, train, args.threads)
    doc = {
        "command": "screen",
        "config": cfg.to_dict(),
        "k": r.plan.k,
        "t": r.pure.t,
        "tau": r.pure.tau,
        "retained_ids": r.pure.retained_ids,
        "plan": {"k": r.plan.k, "seed": r.plan.seed, "assignment": r.plan.assignment},
        "train_ids": train.ids,
        "consensus": r.consensus.scores,
        "score_matrix": r.matrix.values,
        "per_model": [{"retained_ids": p.retained_ids, "tau": p.tau} for p in r.per_model_pure],
    }
    return [
        io.write_json(doc, out / "stage1.json"),
        io.write_dataset(train.select_ids(r.pure.retained_ids), out / "purified.csv"),
    ]


def cmd_detect(cfg: RunConfig, out: Path, args) -> list[Path]:
    train, test = load_datasets(cfg, need_test=True)
    if cfg.pure_path is not None:
        where = cfg.resolve(cfg.pure_path)
        pure = _pure_from_stage1(io.read_json(where), where)
    else:
        pure = screen(cfg, train, args.threads).pure
    res = run_stage2(train, pure, test, cfg.stage2_scorer, cfg.master_seed, threads=args.threads)
    doc = {
        "command": "detect",
        "config": cfg.to_dict(),
        "final_model_summary": res.final_model_summary,
        "trainset_id_list": res.trainset_id_list,
        "test_ids": test.ids,
        "test_scores": res.test_scores,
    }
    return [io.write_json(doc, out / "detection.json")]


def cmd_evaluate(cfg: RunConfig, out: Path, args) -> list[Path]:
    if not args.results:
        raise ConfigError("evaluate: give at least one result file")
    train, test = load_datasets(cfg)
    evaluated = []
    for path in args.results:
        doc = io.read_json(path)
        kind = doc.get("command")
        entry = {"file": Path(path).name, "command": kind}
        if kind == "screen":
            pure = _pure_from_stage1(doc, path)
            entry["contamination_rate"] = contamination_rate(pure, train)
            entry["breakdown"] = purity_breakdown(pure, train).to_dict()
            entry["per_model_breakdown"] = [
                purity_breakdown(_pure_from_stage1({**p, "t": pure.t}, path), train).to_dict()
                for p in doc.get("per_model", [])
            ]
        elif kind == "detect":
            if test is None:
                raise ConfigError("dataset.test_path: required to evaluate a detection result")
            if doc.get("test_ids") != test.ids.tolist():
                raise ConfigError(f"{path}: test ids do not match the configured test set")
            entry["auroc"] = auroc(test.labels, doc["test_scores"])
            entry["fitted_size"] = doc["final_model_summary"]["fitted_size"]
            entry["contamination_rate"] = contamination_rate(doc["trainset_id_list"], train)
        else:
            raise ConfigError(f"{path}: unrecognised result (command={kind!r})")
        evaluated.append(entry)
    return [io.write_json({"command": "evaluate", "results": evaluated}, out / "metrics.json")]


def cmd_ablate(cfg: RunConfig, out: Path, args) -> list[Path]:
    report = run_sweep(cfg, threads=args.threads)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "sweep.csv"
    csv_path.write_bytes(report.to_csv().encode("utf-8"))
    cells = report.summary()
    written = [
        csv_path,
        io.write_json(
            {"command": "ablate", "config": cfg.to_dict(), "n_rows": len(report), "cells": cells},
            out / "summary.json",
        ),
    ]
    if args.emit_svg:
        for alpha in sorted({c["alpha"] for c in cells}):
            p = out / f"retained_alpha_{alpha:g}.svg"
            p.write_bytes(retained_counts_chart(alpha, cells).encode("utf-8"))
            written.append(p)
    return written


COMMANDS = {
    "generate": cmd_generate,
    "screen": cmd_screen,
    "detect": cmd_detect,
    "evaluate": cmd_evaluate,
    "ablate": cmd_ablate,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="purifier", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON run configuration")
        p.add_argument("--out", help="output directory (default: config output_dir)")
        p.add_argument("--seed", type=int, help="override master/dataset/sweep seed")
        p.add_argument("--threads", type=int, default=None,
                       help="worker threads, 0 = auto (default: $PURIFIER_THREADS or 1)")
        if name == "ablate":
            p.add_argument("--emit-svg", action="store_true", help="also write SVG line charts")
        if name == "evaluate":
            p.add_argument("results", nargs="*", help="stage1.json / detection.json files")
    return parser


def _fail(exc: PurifierError) -> int:
    print(json.dumps({"error": exc.category, "message": str(exc)}), file=sys.stderr)
    return exc.exit_code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.threads = resolve_threads(args.threads)
    except ValueError as exc:
        return _fail(ConfigError(f"--threads: {exc}"))
    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            if not (0 <= args.seed < 2**64):
                raise ConfigError(f"--seed: must be an unsigned 64-bit integer, got {args.seed}")
            cfg = cfg.with_seed(args.seed)
        out = Path(args.out) if args.out else Path(cfg.output_dir)
        for path in COMMANDS[args.command](cfg, out, args):
            print(path)
    except PurifierError as exc:
        return _fail(exc)
    return 0


if __name__ == "__main__":
    sys.exit(main())
