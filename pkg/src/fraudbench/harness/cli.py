"""Command-line interface.

Subcommands: encode-pca, rebalance, synth, benchmark, sweep-dims,
noise-study, project3d.  Exit codes: 0 success, 1 contract/config error,
2 numerical failure.
"""

from __future__ import annotations

import argparse
import sys

from fraudbench.datasets import adjust_fraud_rate, load_csv, make_synthetic, write_csv
from fraudbench.errors import ContractError, FraudBenchError, NumericalError
from fraudbench.harness.config import parse_config
from fraudbench.harness.runner import (
    emit_projection,
    noise_study,
    run_benchmark,
    sweep_dimensions,
    top_f1_curve,
    write_curve,
    write_evr,
    write_report,
)
from fraudbench.matrixcore import RandomSource
from fraudbench.pca import fit_pca, transform


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; 2 is reserved for numerical failures
    def error(self, message):
        raise ContractError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fraudbench", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("encode-pca", help="write a PCA-obfuscated copy of a CSV dataset")
    p.add_argument("--input", required=True)
    p.add_argument("--components", required=True, type=int)
    p.add_argument("--output", required=True)
    p.add_argument("--label-column", default="Class")

    p = sub.add_parser("rebalance", help="lower a dataset's fraud rate by removing frauds")
    p.add_argument("--input", required=True)
    p.add_argument("--fraud-rate", required=True, type=float)
    p.add_argument("--seed", required=True, type=int)
    p.add_argument("--output", required=True)
    p.add_argument("--label-column", default="Class")

    p = sub.add_parser("synth", help="generate a synthetic two-class dataset")
    p.add_argument("--normals", required=True, type=int)
    p.add_argument("--frauds", required=True, type=int)
    p.add_argument("--dims", required=True, type=int)
    p.add_argument("--separation", required=True, type=float)
    p.add_argument("--seed", required=True, type=int)
    p.add_argument("--output", required=True)

    p = sub.add_parser("benchmark", help="run a configured experiment grid")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("sweep-dims", help="benchmark across PCA component counts")
    p.add_argument("--config", required=True)
    p.add_argument("--min-k", required=True, type=int)
    p.add_argument("--max-k", required=True, type=int)
    p.add_argument("--out", required=True)

    p = sub.add_parser("noise-study", help="benchmark across annotation flip rates")
    p.add_argument("--config", required=True)
    p.add_argument("--flip-rates", required=True,
                   help="comma-separated symmetric flip rates, e.g. 0,0.05,0.1")
    p.add_argument("--out", required=True)

    p = sub.add_parser("project3d", help="emit leading principal coordinates for plotting")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--components", type=int, default=3)
    p.add_argument("--label-column", default="Class")

    return parser


def _cmd_encode_pca(args):
    data = load_csv(args.input, args.label_column)
    model = fit_pca(data, args.components)
    write_csv(transform(model, data), args.output, args.label_column)
    print(f"wrote {args.output}: {data.n} rows x {args.components} components")


def _cmd_rebalance(args):
    data = load_csv(args.input, args.label_column)
    out = adjust_fraud_rate(data, args.fraud_rate, RandomSource(args.seed))
    write_csv(out, args.output, args.label_column)
    normals, frauds = out.class_counts()
    print(f"wrote {args.output}: {normals} normals, {frauds} frauds "
          f"(rate {out.fraud_rate:.4%})")


def _cmd_synth(args):
    data = make_synthetic(
        args.normals, args.frauds, args.dims, args.separation, RandomSource(args.seed)
    )
    write_csv(data, args.output)
    print(f"wrote {args.output}: {data.n} rows x {data.dims} features")


def _cmd_benchmark(args):
    cfg = parse_config(args.config)
    records = run_benchmark(cfg)
    write_report(records, args.out)
    print(f"wrote {args.out}: {len(records)} records")


def _cmd_sweep_dims(args):
    cfg = parse_config(args.config)
    records, evr_rows = sweep_dimensions(cfg, args.min_k, args.max_k)
    write_report(records, args.out)
    write_evr(evr_rows, args.out + ".evr.csv")
    write_curve(top_f1_curve(records), args.out + ".curve.csv")
    print(f"wrote {args.out}: {len(records)} records "
          f"(+ {args.out}.evr.csv, {args.out}.curve.csv)")


def _cmd_noise_study(args):
    cfg = parse_config(args.config)
    try:
        rates = [float(tok) for tok in args.flip_rates.split(",") if tok.strip()]
    except ValueError:
        raise ContractError(f"--flip-rates must be comma-separated numbers, "
                            f"got {args.flip_rates!r}") from None
    if not rates:
        raise ContractError("--flip-rates must name at least one rate")
    records, summary = noise_study(cfg, rates)
    write_report(records, args.out)
    print(f"wrote {args.out}: {len(records)} records")
    for line in summary:
        print(line)


def _cmd_project3d(args):
    data = load_csv(args.input, args.label_column)
    emit_projection(data, args.components, args.output)
    print(f"wrote {args.output}: {data.n} rows x {args.components} coordinates")


_COMMANDS = {
    "encode-pca": _cmd_encode_pca,
    "rebalance": _cmd_rebalance,
    "synth": _cmd_synth,
    "benchmark": _cmd_benchmark,
    "sweep-dims": _cmd_sweep_dims,
    "noise-study": _cmd_noise_study,
    "project3d": _cmd_project3d,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _COMMANDS[args.command](args)
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except ContractError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FraudBenchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
