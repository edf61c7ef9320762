"""Command line front end.

Subcommands: construct, train, decode, bench, list-bench, ablation, plot.
Every experiment subcommand accepts ``--config FILE`` (flat key = value
pairs); explicit command-line flags override file values.  Exit codes:
0 success, 2 configuration error, 3 data error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .codes import CodeConstructionError, code_from_name
from .harness import (
    ConfigError,
    DataError,
    ExperimentConfig,
    emit_curve,
    load_config_file,
    load_weights,
    read_csv,
    run_experiment,
    save_weights,
    write_csv,
)
from .train import TrainConfig, TrainingDiverged, graph_for, train
from .decoder import boost, hard_decision


def _floats(text: str) -> tuple:
    return tuple(float(v) for v in text.split(","))


def _ints(text: str) -> tuple:
    return tuple(int(v) for v in text.split(","))


def _merge_config(args, casts: dict) -> dict:
    """File values fill in whatever the command line left at None."""
    merged = {}
    file_values = load_config_file(args.config) if getattr(args, "config", None) else {}
    for key, cast in casts.items():
        cli_value = getattr(args, key, None)
        if cli_value is not None:
            merged[key] = cli_value
        elif key in file_values:
            try:
                merged[key] = cast(file_values[key])
            except ValueError as exc:
                raise ConfigError(f"config key {key}: {exc}") from exc
    return merged


def _cmd_construct(args) -> int:
    code = code_from_name(args.code)
    u = int(code.H_cyc[:, 0].sum())
    print(f"{code.name}: n={code.n} k={code.k} rate={code.rate:.3f}")
    print(f"  kind parameter: {'delta' if code.kind == 'BCH' else 'r'}={code.param}")
    print(f"  g coefficients (g_0..g_{code.n - code.k}): {code.g.coeffs()}")
    print(f"  h coefficients (h_0..h_{code.k}): {code.h.coeffs()}")
    print(f"  G: {code.G.shape}, H_std: {code.H_std.shape}, H_cyc: {code.H_cyc.shape}, u={u}")
    if args.show_matrix:
        for row in code.H_cyc:
            print("  " + "".join(str(int(v)) for v in row))
    return 0


def _cmd_train(args) -> int:
    merged = _merge_config(args, {
        "variant": str, "matrix": str, "t": int, "steps": int,
        "learning_rate": float, "seed": int, "samples_per_snr": int,
        "snr_grid": _floats,
    })
    variant = merged.get("variant", "cyclic")
    cfg = TrainConfig(
        t=merged.get("t", 5),
        steps=merged.get("steps", 2000),
        learning_rate=merged.get("learning_rate", 1e-3),
        seed=merged.get("seed", 0),
        samples_per_snr=merged.get("samples_per_snr", 20),
        snr_grid_db=merged.get("snr_grid", (1, 2, 3, 4, 5, 6, 7, 8)),
        matrix=merged.get("matrix"),
        trace_path=args.trace,
    )
    code = code_from_name(args.code)
    try:
        result = train(code, variant, cfg)
    except TrainingDiverged as exc:
        raise DataError(str(exc)) from exc
    matrix = cfg.matrix or ("cyclic" if variant == "cyclic" else "std")
    save_weights(args.out, result.weights, code.name, matrix)
    print(f"trained {variant}/{matrix} on {code.name}: "
          f"{result.weights.num_parameters} weights, "
          f"final loss {result.losses[-1]:.5f} -> {args.out}")
    return 0


def _experiment_config(args) -> ExperimentConfig:
    merged = _merge_config(args, {
        "decoder": str, "matrix": str, "t": int, "boost_count": int,
        "list_size": int, "snr_grid": _floats, "samples": int, "seed": int,
        "weights": str, "batch": int, "extension_seed": int,
    })
    return ExperimentConfig(
        code=args.code,
        decoder=merged.get("decoder", "vanilla"),
        matrix=merged.get("matrix"),
        t=merged.get("t", 5),
        boost_count=merged.get("boost_count", 0),
        list_size=merged.get("list_size", 1),
        snr_grid_db=merged.get("snr_grid", (4.0, 5.0, 6.0)),
        samples=merged.get("samples", 100_000),
        seed=merged.get("seed", 0),
        weights_path=merged.get("weights"),
        all_zero=not args.random_codewords,
        batch=merged.get("batch", 2000),
        extension_seed=merged.get("extension_seed", 0),
        csv_path=args.out,
    )


def _cmd_bench(args) -> int:
    config = _experiment_config(args)
    result = run_experiment(config)
    for row in result.rows:
        print(f"{row.code} {row.decoder}/{row.matrix} B={row.B} ell={row.ell} "
              f"SNR {row.snr_db:g}: BER {row.ber:.3e} (-ln {row.neg_ln_ber:.2f}) "
              f"FER {row.fer:.3e} [{row.seconds:.1f}s]")
    if args.plot:
        emit_curve(result.rows, args.out, args.plot)
    return 0


def _cmd_list_bench(args) -> int:
    merged = _merge_config(args, {
        "ell_list": _ints, "snr_grid": _floats, "samples": int,
        "boost_count": int, "seed": int, "t": int, "decoder": str,
        "weights": str, "batch": int,
    })
    rows = []
    for ell in merged.get("ell_list", (1, 2, 4, 8)):
        config = ExperimentConfig(
            code=args.code,
            decoder=merged.get("decoder", "cyclic"),
            t=merged.get("t", 5),
            boost_count=merged.get("boost_count", 0),
            list_size=ell,
            snr_grid_db=merged.get("snr_grid", (5.0,)),
            samples=merged.get("samples", 10_000),
            seed=merged.get("seed", 0),
            weights_path=merged.get("weights"),
            all_zero=args.all_zero,
            batch=merged.get("batch", 2000),
        )
        result = run_experiment(config)
        rows.extend(result.rows)
        for row in result.rows:
            print(f"ell={row.ell} SNR {row.snr_db:g}: FER {row.fer:.3e} "
                  f"(-ln {row.neg_ln_fer:.2f}) [{row.seconds:.1f}s]")
    write_csv(rows, args.out)
    if args.plot:
        emit_curve(rows, args.out, args.plot, metric="fer")
    return 0


def _cmd_ablation(args) -> int:
    """Matrix-shape ablation: FF on std/random-extended/cyclic, plus shared."""
    import os

    merged = _merge_config(args, {
        "steps": int, "samples": int, "snr_grid": _floats, "seed": int, "t": int,
    })
    steps = merged.get("steps", 2000)
    samples = merged.get("samples", 100_000)
    snr_grid = merged.get("snr_grid", (5.0,))
    seed = merged.get("seed", 0)
    t = merged.get("t", 5)
    os.makedirs(args.outdir, exist_ok=True)
    code = code_from_name(args.code)

    runs = [
        ("ff", "std"),
        ("ff", "random-extended"),
        ("ff", "cyclic"),
        ("cyclic", "cyclic"),
    ]
    rows = []
    for variant, matrix in runs:
        cfg = TrainConfig(steps=steps, seed=seed, t=t, matrix=matrix)
        print(f"training {variant}/{matrix} ({steps} steps)...")
        result = train(code, variant, cfg)
        wpath = os.path.join(args.outdir, f"{variant}-{matrix}.json")
        save_weights(wpath, result.weights, code.name, matrix)
        econfig = ExperimentConfig(
            code=args.code, decoder=variant, matrix=matrix, t=t,
            snr_grid_db=snr_grid, samples=samples, seed=seed,
            weights_path=wpath,
        )
        for row in run_experiment(econfig).rows:
            rows.append(row)
            print(f"  {variant}/{matrix} SNR {row.snr_db:g}: "
                  f"-ln BER {row.neg_ln_ber:.2f}")
    out_csv = os.path.join(args.outdir, "ablation.csv")
    write_csv(rows, out_csv)
    print(f"wrote {out_csv}")
    return 0


def _cmd_decode(args) -> int:
    code = code_from_name(args.code)
    if args.llr:
        llr = np.asarray(_floats(args.llr))
    elif args.llr_file:
        llr = np.loadtxt(args.llr_file, delimiter=",", ndmin=1)
    else:
        raise ConfigError("decode needs --llr or --llr-file")
    if llr.shape != (code.n,):
        raise ConfigError(f"expected {code.n} LLR values, got {llr.shape}")
    if args.weights:
        weights, meta = load_weights(args.weights)
        matrix = meta.get("matrix", "cyclic")
        graph = graph_for(code, weights.variant, matrix)
        out = boost(graph, weights, llr, weights.t, args.boost_count)
    else:
        graph = graph_for(code, "vanilla", args.matrix)
        out = boost(graph, None, llr, args.t, args.boost_count)
    bits = hard_decision(out)
    print("".join(str(int(b)) for b in bits))
    print(f"codeword: {code.is_codeword(bits)}", file=sys.stderr)
    return 0


def _cmd_plot(args) -> int:
    rows = []
    for path in args.csvs:
        rows.extend(read_csv(path))
    emit_curve(rows, args.out + ".csv" if not args.out.endswith(".csv") else args.out,
               args.out if not args.out.endswith(".csv") else None,
               metric=args.metric)
    # emit_curve wrote the merged CSV next to the figure
    print(f"wrote {args.out}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cycbp",
        description="Cyclically equivariant neural BP decoders for cyclic codes",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a code and print its parameters")
    p.add_argument("code", help='e.g. "BCH(63,36)" or "PRM(63,22)"')
    p.add_argument("--show-matrix", action="store_true")
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("train", help="train a weight bank")
    p.add_argument("code")
    p.add_argument("--variant", choices=("cyclic", "ff"))
    p.add_argument("--matrix", choices=("std", "cyclic", "random-extended"))
    p.add_argument("--t", type=int)
    p.add_argument("--steps", type=int)
    p.add_argument("--learning-rate", dest="learning_rate", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--samples-per-snr", dest="samples_per_snr", type=int)
    p.add_argument("--snr-grid", dest="snr_grid", type=_floats)
    p.add_argument("--trace", help="write per-step loss CSV here")
    p.add_argument("--config")
    p.add_argument("-o", "--out", required=True, help="weight file to write")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("bench", help="Monte-Carlo BER/FER over an SNR grid")
    p.add_argument("code")
    p.add_argument("--decoder", choices=("vanilla", "ff", "cyclic"))
    p.add_argument("--matrix", choices=("std", "cyclic", "random-extended"))
    p.add_argument("--weights")
    p.add_argument("--t", type=int)
    p.add_argument("--boost-count", "-B", dest="boost_count", type=int)
    p.add_argument("--list-size", dest="list_size", type=int)
    p.add_argument("--snr-grid", dest="snr_grid", type=_floats)
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--batch", type=int)
    p.add_argument("--extension-seed", dest="extension_seed", type=int)
    p.add_argument("--random-codewords", action="store_true",
                   help="transmit random codewords instead of the all-zero word")
    p.add_argument("--plot", help="optional figure path (.svg/.png/.pdf)")
    p.add_argument("--config")
    p.add_argument("-o", "--out", required=True, help="results CSV path")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("list-bench", help="list-decoding FER sweep over list sizes")
    p.add_argument("code")
    p.add_argument("--decoder", choices=("vanilla", "ff", "cyclic"))
    p.add_argument("--weights")
    p.add_argument("--ell-list", dest="ell_list", type=_ints)
    p.add_argument("--snr-grid", dest="snr_grid", type=_floats)
    p.add_argument("--samples", type=int)
    p.add_argument("--boost-count", "-B", dest="boost_count", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--batch", type=int)
    p.add_argument("--all-zero", action="store_true",
                   help="transmit the all-zero word (default: random "
                        "codewords; the step-4 zero fallback biases all-zero "
                        "FER measurements)")
    p.add_argument("--plot")
    p.add_argument("--config")
    p.add_argument("-o", "--out", required=True)
    p.set_defaults(func=_cmd_list_bench)

    p = sub.add_parser("ablation", help="parity-matrix ablation (train + bench)")
    p.add_argument("code")
    p.add_argument("--steps", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--snr-grid", dest="snr_grid", type=_floats)
    p.add_argument("--seed", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--config")
    p.add_argument("-o", "--outdir", required=True)
    p.set_defaults(func=_cmd_ablation)

    p = sub.add_parser("decode", help="decode one LLR vector")
    p.add_argument("code")
    p.add_argument("--weights")
    p.add_argument("--matrix", choices=("std", "cyclic", "random-extended"))
    p.add_argument("--t", type=int, default=5)
    p.add_argument("--boost-count", "-B", dest="boost_count", type=int, default=0)
    p.add_argument("--llr", help="comma-separated LLR values")
    p.add_argument("--llr-file", help="file with comma-separated LLR values")
    p.set_defaults(func=_cmd_decode)

    p = sub.add_parser("plot", help="plot one or more result CSVs")
    p.add_argument("csvs", nargs="+")
    p.add_argument("--metric", choices=("ber", "fer"), default="ber")
    p.add_argument("-o", "--out", required=True)
    p.set_defaults(func=_cmd_plot)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, CodeConstructionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DataError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
