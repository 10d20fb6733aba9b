"""Command-line interface.

Subcommands: generate (sample a preset model to an edge list), fit
(estimate one family's parameters), test (goodness-of-fit p-value),
select-k (sequential community count), and simulate (config-driven
Monte Carlo experiments). Exit codes: 0 success, 2 configuration error,
3 missing dataset file.
"""

import argparse
import csv
import json
import sys
from dataclasses import asdict

from . import __version__
from .datasets import DatasetMissingError, load_dataset
from .estimators import FitError, make_estimator
from .experiments import (
    ConfigError,
    emit,
    format_candidate,
    parse_config_file,
    run_kest,
    run_null_qq,
    run_power,
    run_real,
    run_size,
)
from .gof import gof_test, select_k
from .graph import load_edge_list, save_edge_list, summarize
from .models import build_probability_matrix, model_to_dict, preset, sample_adjacency
from .numerics import derive_stream

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATASET = 3


def _write_output(payload, out):
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_graph(args):
    if getattr(args, "dataset", None):
        return load_dataset(args.dataset, data_dir=args.data_dir)
    if not args.input:
        raise ConfigError("provide --input FILE or --dataset NAME")
    return load_edge_list(args.input, indexing=args.indexing)


def _parse_params(pairs):
    params = {}
    for pair in pairs or []:
        if "=" not in pair:
            raise ConfigError(f"--param expects key=value, got {pair!r}")
        key, value = pair.split("=", 1)
        try:
            params[key] = int(value)
        except ValueError:
            try:
                params[key] = float(value)
            except ValueError:
                params[key] = value
    return params


def _cmd_generate(args):
    params = _parse_params(args.param)
    stream = derive_stream(args.seed, f"generate|{args.preset}", 0)
    model = preset(args.preset, args.n, random_state=stream.child("truth"), **params)
    P = build_probability_matrix(model)
    A = sample_adjacency(P, stream.child("sample"))
    save_edge_list(A, args.out, indexing="one-based")
    sidecar = {
        "preset": args.preset,
        "n": args.n,
        "params": params,
        "seed": args.seed,
        "model": model_to_dict(model),
        "summary": asdict(summarize(A)),
    }
    with open(args.out + ".json", "w", encoding="utf-8") as fh:
        json.dump(sidecar, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {args.out} and {args.out}.json")
    return EXIT_OK


def _candidate_from_args(args):
    return make_estimator(
        args.model, n_communities=args.k, n_dims=args.d,
        signature=tuple(args.signature) if args.signature else None,
    )


def _cmd_fit(args):
    A = _load_graph(args)
    est = _candidate_from_args(args)
    stream = derive_stream(args.seed, f"fit|{args.model}", 0)
    if "random_state" in est.get_params():
        est.set_params(random_state=stream)
    try:
        fitted = est.fit(A)
    except FitError as err:
        _write_output({"error": str(err), "decision": "untestable"}, args.out)
        return EXIT_OK
    _write_output(fitted.describe(), args.out)
    return EXIT_OK


def _cmd_test(args):
    A = _load_graph(args)
    est = _candidate_from_args(args)
    stream = derive_stream(args.seed, f"test|{args.model}", 0)
    try:
        result = gof_test(A, est, alpha=args.alpha, random_state=stream,
                          keep_residuals=False)
    except FitError as err:
        _write_output({"error": str(err), "decision": "untestable"}, args.out)
        return EXIT_OK
    _write_output(result.to_dict(), args.out)
    return EXIT_OK


def _cmd_select_k(args):
    A = _load_graph(args)
    stream = derive_stream(args.seed, "select-k", 0)
    result = select_k(A, k_max=args.kmax, alpha=args.alpha, random_state=stream)
    _write_output(result.to_dict(), args.out)
    return EXIT_OK


def _cmd_simulate(args):
    config = parse_config_file(args.config)
    if args.experiment and args.experiment != config.kind:
        raise ConfigError(
            f"--experiment {args.experiment} does not match config "
            f"experiment {config.kind}"
        )
    if args.seed is not None:
        config.base_seed = args.seed
    if args.reps is not None:
        config.reps = args.reps
    if args.jobs is not None:
        config.jobs = args.jobs

    if config.kind == "null":
        report = run_null_qq(config)
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(f"# ks_distance = {report['ks_distance']:.6f}\n")
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(["statistic", "normal_quantile"])
                for s, q in zip(report["statistics"], report["normal_quantiles"]):
                    writer.writerow([f"{s:.6f}", f"{q:.6f}"])
        _write_output({k: v for k, v in report.items()
                       if k not in ("statistics", "normal_quantiles")}, None)
        return EXIT_OK
    if config.kind == "real":
        report = run_real(
            config.datasets,
            [format_candidate(c) for c in config.candidates]
            or ["er", "beta", "sbm", "dcsbm", "lsm"],
            alpha=config.alpha,
            data_dir=config.data_dir,
            base_seed=config.base_seed,
        )
        _write_output(report, args.out)
        if not report["rows"] and report["skipped"]:
            return EXIT_DATASET
        return EXIT_OK

    runner = {"size": run_size, "power": run_power, "kest": run_kest}[config.kind]
    table = runner(config)
    if args.out:
        emit(table, args.format, args.out)
        print(f"wrote {args.out}")
    else:
        emit_stream = sys.stdout
        if args.format == "json":
            emit_stream.write(table.to_json())
        else:
            table.to_csv(emit_stream)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="netgof",
        description="Spectral goodness-of-fit testing for random-graph models",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="sample a preset model to an edge list")
    gen.add_argument("--preset", required=True)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--param", action="append", metavar="KEY=VALUE")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True)
    gen.set_defaults(func=_cmd_generate)

    def add_graph_args(p):
        p.add_argument("--input", default=None, help="edge-list file")
        p.add_argument("--dataset", default=None, help="named dataset")
        p.add_argument("--data-dir", default=None, help="directory with dataset files")
        p.add_argument("--indexing", default="one-based",
                       choices=["one-based", "zero-based"])
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None, help="write JSON here (default stdout)")

    fit = sub.add_parser("fit", help="fit one model family")
    add_graph_args(fit)
    fit.add_argument("--model", required=True,
                     choices=["er", "beta", "sbm", "dcsbm", "dcmm", "lsm"])
    fit.add_argument("--k", type=int, default=None, help="community count")
    fit.add_argument("--d", type=int, default=None, help="latent dimension")
    fit.add_argument("--signature", type=int, nargs=2, default=None,
                     metavar=("A", "B"))
    fit.set_defaults(func=_cmd_fit)

    test = sub.add_parser("test", help="goodness-of-fit test for one candidate")
    add_graph_args(test)
    test.add_argument("--model", required=True,
                      choices=["er", "beta", "sbm", "dcsbm", "dcmm", "lsm"])
    test.add_argument("--k", type=int, default=None)
    test.add_argument("--d", type=int, default=None)
    test.add_argument("--signature", type=int, nargs=2, default=None,
                      metavar=("A", "B"))
    test.add_argument("--alpha", type=float, default=0.05)
    test.add_argument("--format", default="json", choices=["json"])
    test.set_defaults(func=_cmd_test)

    sel = sub.add_parser("select-k", help="sequential community-count estimate")
    add_graph_args(sel)
    sel.add_argument("--kmax", type=int, default=10)
    sel.add_argument("--alpha", type=float, default=0.001)
    sel.set_defaults(func=_cmd_select_k)

    sim = sub.add_parser("simulate", help="run a configured experiment")
    sim.add_argument("--experiment", default=None,
                     choices=["null", "size", "power", "kest", "real"])
    sim.add_argument("--config", required=True)
    sim.add_argument("--seed", type=int, default=None)
    sim.add_argument("--reps", type=int, default=None)
    sim.add_argument("--jobs", type=int, default=None)
    sim.add_argument("--out", default=None)
    sim.add_argument("--format", default="csv", choices=["csv", "json"])
    sim.set_defaults(func=_cmd_simulate)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as err:
        print(f"configuration error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except DatasetMissingError as err:
        print(f"dataset missing: {err}", file=sys.stderr)
        return EXIT_DATASET
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
