"""Monte-Carlo BER/FER experiments, weight persistence, CSV and plots.

Runs are split into fixed-size sample streams, each with an RNG keyed on
(seed, snr index, stream index), so results are reproducible regardless of
how streams would be scheduled and identical noise is reused across
configurations that share a seed (e.g. the list sizes of a list-decoding
sweep).  The CSV schema is fixed:

    code,decoder,matrix,t,B,ell,snr_db,samples,bit_errors,frame_errors,
    ber,fer,neg_ln_ber,neg_ln_fer,ci_lo,ci_hi,seconds

ci_lo/ci_hi is a 95% Wilson interval on BER.  All numeric fields except
`seconds` are deterministic for a fixed (config, seed).
"""

from __future__ import annotations

import csv
import json
import math
import time
from dataclasses import dataclass, field, asdict

import numpy as np

from .channel import sample_llrs, snr_to_sigma
from .codes import CodeConstructionError, CyclicCode, code_from_name
from .decoder import WeightBank, boost, hard_decision
from .listdec import build_affine_set, list_decode
from .tanner import TannerGraph
from .train import default_matrix, graph_for

WEIGHT_FORMAT_VERSION = 1

CSV_FIELDS = [
    "code", "decoder", "matrix", "t", "B", "ell", "snr_db", "samples",
    "bit_errors", "frame_errors", "ber", "fer", "neg_ln_ber", "neg_ln_fer",
    "ci_lo", "ci_hi", "seconds",
]


class ConfigError(ValueError):
    """Invalid experiment configuration (CLI exit code 2)."""


class DataError(RuntimeError):
    """Missing/corrupt/mismatched data such as weight files (exit code 3)."""


@dataclass
class ExperimentConfig:
    code: str = ""
    decoder: str = "vanilla"          # vanilla | ff | cyclic
    matrix: str | None = None         # std | cyclic | random-extended
    t: int = 5
    boost_count: int = 0              # B: extra decoding passes
    list_size: int = 1                # ell
    snr_grid_db: tuple = (4.0, 5.0, 6.0)
    samples: int = 100_000
    seed: int = 0
    weights_path: str | None = None
    all_zero: bool = True             # transmit all-zero vs random codewords
    batch: int = 2000
    extension_seed: int = 0           # for the random-extended matrix
    csv_path: str | None = None


@dataclass
class ResultRow:
    code: str
    decoder: str
    matrix: str
    t: int
    B: int
    ell: int
    snr_db: float
    samples: int
    bit_errors: int
    frame_errors: int
    ber: float
    fer: float
    neg_ln_ber: float
    neg_ln_fer: float
    ci_lo: float
    ci_hi: float
    seconds: float


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    rows: list = field(default_factory=list)


def wilson_interval(errors: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    """95% (by default) Wilson score interval for a binomial proportion."""
    if trials <= 0:
        return (0.0, 1.0)
    p = errors / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (p + z2 / (2 * trials)) / denom
    half = z * math.sqrt(p * (1.0 - p) / trials + z2 / (4 * trials * trials)) / denom
    return (max(0.0, center - half), min(1.0, center + half))


def _neg_ln(x: float) -> float:
    return math.inf if x <= 0 else -math.log(x)


def _resolved_matrix(decoder: str, matrix: str | None) -> str:
    return default_matrix(decoder) if matrix is None else matrix


def _stream_rng(seed: int, snr_idx: int, stream: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, snr_idx, stream]))


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Measure BER/FER over the configured SNR grid; optionally write CSV."""
    if config.samples < 1:
        raise ConfigError("sample count must be >= 1")
    if config.decoder not in ("vanilla", "ff", "cyclic"):
        raise ConfigError(f"unknown decoder variant {config.decoder!r}")
    if config.boost_count < 0:
        raise ConfigError("boost count must be >= 0")
    try:
        code = code_from_name(config.code)
    except CodeConstructionError as exc:
        raise ConfigError(str(exc)) from exc
    if not 1 <= config.list_size <= code.n + 1:
        raise ConfigError(f"list size must lie in [1, {code.n + 1}]")

    matrix = _resolved_matrix(config.decoder, config.matrix)
    graph = graph_for(code, config.decoder, matrix, config.extension_seed)

    weights = None
    if config.decoder != "vanilla":
        if not config.weights_path:
            raise ConfigError(f"decoder {config.decoder!r} needs a weight file")
        weights, meta = load_weights(config.weights_path)
        validate_weights(weights, meta, code, graph, config.decoder, matrix,
                         config.t, config.extension_seed)

    perm_set = build_affine_set(code.field) if config.list_size > 1 else None

    def decode_block(llr):
        return boost(graph, weights, llr, config.t, config.boost_count)

    result = ExperimentResult(config)
    for snr_idx, snr_db in enumerate(config.snr_grid_db):
        t0 = time.perf_counter()
        bit_errors = 0
        frame_errors = 0
        done = 0
        stream = 0
        while done < config.samples:
            count = min(config.batch, config.samples - done)
            rng = _stream_rng(config.seed, snr_idx, stream)
            if config.all_zero:
                codewords = np.zeros((count, code.n), dtype=np.uint8)
            else:
                codewords = code.random_codewords(count, rng)
            llr = sample_llrs(codewords, snr_db, code.rate, rng)
            if config.list_size == 1:
                bits = hard_decision(decode_block(llr))
            else:
                bits = list_decode(code, perm_set, llr, config.list_size,
                                   decode_block)
            wrong = bits != codewords
            bit_errors += int(wrong.sum())
            frame_errors += int(wrong.any(axis=1).sum())
            done += count
            stream += 1
        seconds = time.perf_counter() - t0
        ber = bit_errors / (config.samples * code.n)
        fer = frame_errors / config.samples
        lo, hi = wilson_interval(bit_errors, config.samples * code.n)
        result.rows.append(ResultRow(
            code=code.name, decoder=config.decoder, matrix=matrix,
            t=config.t, B=config.boost_count, ell=config.list_size,
            snr_db=float(snr_db), samples=config.samples,
            bit_errors=bit_errors, frame_errors=frame_errors,
            ber=ber, fer=fer, neg_ln_ber=_neg_ln(ber), neg_ln_fer=_neg_ln(fer),
            ci_lo=lo, ci_hi=hi, seconds=round(seconds, 3),
        ))

    if config.csv_path:
        write_csv(result.rows, config.csv_path)
    return result


# ---------------------------------------------------------------------------
# weight persistence
# ---------------------------------------------------------------------------


def save_weights(path: str, bank: WeightBank, code_name: str, matrix: str,
                 extension_seed: int = 0) -> None:
    """Versioned JSON weight file; float repr round-trips bit-exactly."""
    doc = {
        "format_version": WEIGHT_FORMAT_VERSION,
        "code": code_name,
        "variant": bank.variant,
        "t": bank.t,
        "matrix": matrix,
        "extension_seed": extension_seed,
        "w_in": bank.w_in.tolist(),
        "w_llr": bank.w_llr.tolist(),
        "w_out": bank.w_out.tolist(),
    }
    if bank.variant == "cyclic":
        doc["u"] = bank.u
    else:
        doc["n_edges"] = bank.n_edges
        doc["n_pairs"] = bank.n_pairs
    with open(path, "w") as fh:
        json.dump(doc, fh)


def load_weights(path: str) -> tuple[WeightBank, dict]:
    """Read a weight file; returns (bank, metadata)."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except FileNotFoundError as exc:
        raise DataError(f"weight file {path!r} not found") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"weight file {path!r} is corrupt: {exc}") from exc
    version = doc.get("format_version")
    if version != WEIGHT_FORMAT_VERSION:
        raise DataError(
            f"weight file {path!r} has format version {version}, "
            f"expected {WEIGHT_FORMAT_VERSION}"
        )
    try:
        variant = doc["variant"]
        bank = WeightBank(
            variant, int(doc["t"]),
            np.asarray(doc["w_in"], dtype=np.float64),
            np.asarray(doc["w_llr"], dtype=np.float64),
            np.asarray(doc["w_out"], dtype=np.float64),
        )
    except (KeyError, ValueError) as exc:
        raise DataError(f"weight file {path!r} is malformed: {exc}") from exc
    if variant == "cyclic" and bank.u != doc.get("u"):
        raise DataError(f"weight file {path!r}: array shapes disagree with u field")
    return bank, doc


def validate_weights(bank: WeightBank, meta: dict, code: CyclicCode,
                     graph: TannerGraph, decoder: str, matrix: str,
                     t: int, extension_seed: int = 0) -> None:
    """Reject weight banks that do not match the experiment being run."""
    if bank.variant != decoder:
        raise DataError(f"weight file is for variant {bank.variant!r}, run uses {decoder!r}")
    if meta.get("code") != code.name:
        raise DataError(f"weight file is for {meta.get('code')}, run uses {code.name}")
    if bank.t != t:
        raise DataError(f"weight file has t={bank.t}, run uses t={t}")
    if meta.get("matrix") != matrix:
        raise DataError(f"weight file is for matrix {meta.get('matrix')!r}, run uses {matrix!r}")
    if bank.variant == "cyclic":
        if bank.u != graph.u:
            raise DataError(f"weight file has u={bank.u}, graph has u={graph.u}")
    else:
        if bank.n_edges != graph.n_edges:
            raise DataError(
                f"weight file has {bank.n_edges} edges, graph has {graph.n_edges}"
            )
        if matrix == "random-extended" and meta.get("extension_seed") != extension_seed:
            raise DataError("weight file was trained on a different extension seed")


# ---------------------------------------------------------------------------
# CSV / plots
# ---------------------------------------------------------------------------


def write_csv(rows, path: str) -> None:
    """Write result rows in the fixed schema (header always present)."""
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_FIELDS)
        writer.writeheader()
        for row in rows:
            rec = asdict(row) if not isinstance(row, dict) else dict(row)
            writer.writerow({k: _csv_cell(rec[k]) for k in CSV_FIELDS})


def _csv_cell(value):
    if isinstance(value, float):
        return repr(value)
    return value


def read_csv(path: str) -> list[dict]:
    with open(path) as fh:
        return [dict(row) for row in csv.DictReader(fh)]


def emit_curve(rows, csv_path: str, plot_path: str | None = None,
               metric: str = "ber"):
    """CSV always; optional log-scale error-rate plot over SNR.

    Rows may mix decoder configurations; each (code, decoder, matrix, B,
    ell) combination becomes one line in the plot.
    """
    write_csv(rows, csv_path)
    if not plot_path:
        return csv_path
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    groups: dict[tuple, list] = {}
    for row in rows:
        rec = asdict(row) if not isinstance(row, dict) else row
        key = (rec["code"], rec["decoder"], rec["matrix"], rec["B"], rec["ell"])
        groups.setdefault(key, []).append(rec)

    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    for (code_name, dec, matrix, b_count, ell), recs in sorted(groups.items()):
        recs = sorted(recs, key=lambda r: float(r["snr_db"]))
        xs = [float(r["snr_db"]) for r in recs]
        ys = [max(float(r[metric]), 1e-12) for r in recs]
        label = f"{code_name} {dec}/{matrix}"
        if int(b_count):
            label += f" B={b_count}"
        if int(ell) > 1:
            label += f" ell={ell}"
        ax.semilogy(xs, ys, marker="o", label=label)
    ax.set_xlabel("SNR (dB)")
    ax.set_ylabel(metric.upper())
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(plot_path)
    plt.close(fig)
    return plot_path


def load_config_file(path: str) -> dict:
    """Flat `key = value` config file; '#' starts a comment."""
    out = {}
    try:
        with open(path) as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected key = value")
                key, value = line.split("=", 1)
                out[key.strip()] = value.strip()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}") from exc
    return out
