"""Command-line entry point: `artlab run --config cfg.yaml [...]`."""

import argparse
import sys

from .config import ExperimentConfig, apply_overrides
from .report import emit_ablation_report, emit_report
from .runner import run_ablation, run_experiment


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="artlab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment or ablation sweep")
    run.add_argument("--config", required=True, help="YAML experiment config")
    run.add_argument("--out-dir", default="results", help="output directory")
    run.add_argument("--methods", help="comma-separated method subset")
    run.add_argument("--seeds", help="comma-separated seed subset")
    run.add_argument(
        "--ablation",
        help="ablation variable (blending_constant, boost_frequency, model_width, imbalance_ratio)",
    )
    run.add_argument("--format", choices=("csv", "markdown", "both"), default="both")
    run.add_argument(
        "overrides",
        nargs="*",
        help="dotted key=value config overrides, e.g. trainer.lr_max=0.001",
    )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = ExperimentConfig.from_yaml(args.config)
    if args.methods:
        cfg.methods = args.methods.split(",")
    if args.seeds:
        cfg.seeds = [int(s) for s in args.seeds.split(",")]
    if args.ablation:
        cfg.ablation = {**cfg.ablation, "variable": args.ablation}
    apply_overrides(cfg, args.overrides)

    if args.ablation or (cfg.ablation and cfg.ablation.get("variable")):
        variable = cfg.ablation["variable"]
        print(f"running {variable} ablation on {cfg.dataset} ...")
        results = run_ablation(cfg)
        files = emit_ablation_report(results, variable, args.out_dir)
    else:
        print(f"running {len(cfg.methods)} methods x {len(cfg.seeds)} seeds on {cfg.dataset} ...")
        report = run_experiment(cfg)
        failed = [c for c in report.cells if not c.ok]
        for c in failed:
            print(f"  FAILED {c.method} seed {c.seed}: {c.error}", file=sys.stderr)
        files = emit_report(report, args.out_dir, fmt=args.format, histories=cfg.emit_histories)
        for m in report.methods:
            mean, std = report.aggregates[m]["macro_f1"]
            print(f"  {m:>16s}  macro-F1 {mean:.4f} ± {std:.4f}")
    print(f"wrote {len(files)} files to {args.out_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
