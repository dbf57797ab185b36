"""Command-line interface: compress / decompress / analyze / bench.

Exit codes (stable contract):
    0  success
    2  usage, bad flags, invalid spec, or a predictor the registry refuses
    3  I/O error (unreadable input, unwritable output, empty corpus)
    4  remote logit server unavailable
    5  digest mismatch or corrupt/truncated container
    6  external baseline tool failed its round-trip

Values from a ``--config`` TOML file override command-line flags; the
container header always overrides both during decompression.  No command
leaves a partial output file behind: writes go to a temp file that is
renamed onto the target only on success.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from . import analysis, bench
from .container import PredictorRegistry, compress, decompress, parse_container
from .errors import (
    BadContainer,
    DigestMismatch,
    EmptyCorpus,
    ExternalToolFailure,
    InternalVerificationError,
    PpressError,
    RemoteProtocolViolation,
    RemoteUnavailable,
    SourceExhausted,
    SpecError,
    UnknownPredictor,
)
from .predictors import parse_predictor_spec

log = logging.getLogger("ppress")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_REMOTE = 4
EXIT_DIGEST = 5
EXIT_EXTERNAL = 6

ENDPOINT_ENV = "PPRESS_ENDPOINT"


def _exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, (RemoteUnavailable, RemoteProtocolViolation)):
        return EXIT_REMOTE
    if isinstance(exc, (DigestMismatch, SourceExhausted, BadContainer,
                        InternalVerificationError)):
        return EXIT_DIGEST
    if isinstance(exc, ExternalToolFailure):
        return EXIT_EXTERNAL
    if isinstance(exc, (SpecError, UnknownPredictor, ValueError)):
        return EXIT_USAGE
    if isinstance(exc, (EmptyCorpus, OSError)):
        return EXIT_IO
    return 1


def _atomic_write(path: Path, data: bytes) -> None:
    tmp = path.with_name(path.name + f".tmp-{os.getpid()}")
    try:
        tmp.write_bytes(data)
        os.replace(tmp, path)
    except BaseException:
        tmp.unlink(missing_ok=True)
        raise


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        return tomllib.loads(Path(path).read_text())
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise SpecError(f"cannot load config {path}: {exc}")


def _endpoint(args, config: dict) -> str | None:
    return config.get("endpoint") or getattr(args, "endpoint", None) \
        or os.environ.get(ENDPOINT_ENV)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ppress",
        description="Prediction-driven lossless text compression toolkit.",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="-v for progress, -vv for a log line per chunk")
    sub = parser.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("compress", help="compress a file into a container")
    pc.add_argument("input", type=Path, help="file to compress")
    pc.add_argument("output", type=Path, help="container file to write")
    pc.add_argument("--predictor", action="append", default=None,
                    metavar="SPEC",
                    help="uniform | orderk:K | remote:HOST:PORT,MODEL "
                         "(default orderk:4; may be given once)")
    pc.add_argument("--chunk", type=int, default=0, metavar="N",
                    help="symbols per chunk, 0 = unchunked (default 0)")
    pc.add_argument("--timeout", type=float, default=30.0,
                    help="remote call timeout in seconds")
    pc.add_argument("--config", default=None, metavar="FILE",
                    help="TOML config whose values override these flags")

    pd = sub.add_parser("decompress", help="reconstruct the original file")
    pd.add_argument("input", type=Path, help="container file")
    pd.add_argument("output", type=Path, help="file to write")
    pd.add_argument("--predictor", action="append", default=None, metavar="SPEC",
                    help="ignored: the container header is authoritative")
    pd.add_argument("--endpoint", default=None, metavar="HOST:PORT",
                    help=f"logit server for remote containers "
                         f"(or ${ENDPOINT_ENV})")
    pd.add_argument("--timeout", type=float, default=30.0)
    pd.add_argument("--config", default=None, metavar="FILE")

    pa = sub.add_parser("analyze", help="corpus statistics reports")
    pa.add_argument("paths", nargs="+", type=Path, help="corpus files")
    pa.add_argument("--ngram", default=None, metavar="RANGE",
                    help="n-gram profile orders, e.g. '1..4' or '2' or '1,3'")
    pa.add_argument("--entropy", default=None, metavar="LIST",
                    help="comma list from: char,subword,word")
    pa.add_argument("--mi", action="store_true",
                    help="mutual information between adjacent words")
    pa.add_argument("--merges", type=int, default=analysis.DEFAULT_MERGES,
                    help="pair-merge vocabulary size for subword entropy")
    pa.add_argument("--out-dir", type=Path, default=None,
                    help="also write records, tables, and figures here")
    pa.add_argument("--config", default=None, metavar="FILE")

    pb = sub.add_parser("bench", help="run a benchmark experiment spec")
    pb.add_argument("spec", type=Path, help="TOML experiment spec")
    pb.add_argument("--out-dir", type=Path, default=None,
                    help="override the spec's output directory")
    pb.add_argument("--ablate", action="append", default=[],
                    choices=list(bench.AXES),
                    help="also run an ablation grid over this axis")
    return parser


def _resolve_predictor_flag(args, config: dict) -> str:
    flags = args.predictor or []
    if len(flags) > 1:
        raise SpecError(f"--predictor given {len(flags)} times; options are "
                        "mutually exclusive")
    spec = config.get("predictor") or (flags[0] if flags else "orderk:4")
    return spec


def cmd_compress(args) -> int:
    config = _load_config(args.config)
    spec = _resolve_predictor_flag(args, config)
    chunk = int(config.get("chunk", args.chunk))
    timeout = float(config.get("timeout", args.timeout))
    data = args.input.read_bytes()
    endpoint = _endpoint(args, config)
    predictor = parse_predictor_spec(spec, endpoint_fallback=endpoint,
                                     timeout=timeout)
    container = compress(
        data, predictor, chunk_size=chunk,
        on_fallback=lambda msg: log.warning("%s", msg),
        on_chunk=(lambda i, n: log.debug("chunk %d/%d", i, n))
        if args.verbose >= 2 else None,
    )
    blob = container.to_bytes()
    _atomic_write(args.output, blob)
    ratio = len(data) / len(blob) if blob else 0.0
    print(f"{args.input}: {len(data)} -> {len(blob)} bytes, ratio {ratio:.2f}")
    return EXIT_OK


def cmd_decompress(args) -> int:
    config = _load_config(args.config)
    if args.predictor:
        log.warning("--predictor is ignored: the container header is "
                    "authoritative for decoding")
    blob = args.input.read_bytes()
    registry = PredictorRegistry.default(
        endpoint=_endpoint(args, config),
        timeout=float(config.get("timeout", args.timeout)),
    )
    data = decompress(blob, registry)
    _atomic_write(args.output, data)
    print(f"{args.input}: restored {len(data)} bytes")
    return EXIT_OK


def _parse_ngram_range(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(part) for part in text.split(",")]


def cmd_analyze(args) -> int:
    config = _load_config(args.config)
    ngram_spec = config.get("ngram", args.ngram)
    entropy_spec = config.get("entropy", args.entropy)
    want_mi = bool(config.get("mi", args.mi))
    if not ngram_spec and not entropy_spec and not want_mi:
        ngram_spec, entropy_spec, want_mi = "1..4", "char,word", True

    files: list[Path] = []
    for path in args.paths:
        if path.is_dir():
            files.extend(sorted(p for p in path.iterdir() if p.is_file()))
        else:
            files.append(path)

    records = []
    lines = []
    for path in files:
        data = path.read_bytes()
        lines.append(f"# {path}")
        if ngram_spec:
            for n in _parse_ngram_range(str(ngram_spec)):
                prof = analysis.ngram_profile(data, n)
                rec = prof.as_record()
                rec["file"] = str(path)
                records.append(rec)
                lines.append(
                    f"  {n}-gram: {prof.total_grams} grams, "
                    f"top-10 mass {prof.top10_mass_percent:.2f}%"
                )
        if entropy_spec:
            for gran in str(entropy_spec).split(","):
                gran = gran.strip()
                rep = analysis.entropy_report(data, gran, merges=args.merges)
                rec = rep.as_record()
                rec["file"] = str(path)
                records.append(rec)
                lines.append(
                    f"  entropy[{gran}]: {rep.h_token:.4f} bits/token, "
                    f"{rep.l_avg:.3f} bytes/token, {rep.h_byte:.4f} bits/byte"
                )
        if want_mi:
            rep = analysis.mutual_information(data)
            rec = rep.as_record()
            rec["file"] = str(path)
            records.append(rec)
            lines.append(f"  mutual information: {rep.mi_bits:.4f} bits "
                         f"({rep.pair_count} pairs)")

    for rec in records:
        print(json.dumps(rec, sort_keys=True))
    print("\n".join(lines), file=sys.stderr)

    if args.out_dir:
        args.out_dir.mkdir(parents=True, exist_ok=True)
        payload = "".join(json.dumps(r, sort_keys=True) + "\n" for r in records)
        _atomic_write(args.out_dir / "analysis.jsonl", payload.encode())
        _atomic_write(args.out_dir / "analysis.txt", "\n".join(lines).encode() + b"\n")
        _render_ngram_figure(records, args.out_dir / "ngram_mass.png")
    return EXIT_OK


def _render_ngram_figure(records, path: Path) -> None:
    points = {}
    for rec in records:
        if rec.get("kind") == "ngram_profile":
            points.setdefault(rec["file"], []).append(
                (rec["n"], rec["top10_mass_percent"])
            )
    if not points:
        return
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for fname, series in sorted(points.items()):
        series.sort()
        ax.plot([n for n, _ in series], [m for _, m in series],
                marker="o", label=Path(fname).name)
    ax.set_xlabel("n-gram order")
    ax.set_ylabel("top-10 mass (%)")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)


def cmd_bench(args) -> int:
    spec = bench.ExperimentSpec.from_toml(args.spec)
    if args.out_dir:
        spec = bench.ExperimentSpec(
            corpora=spec.corpora, compressors=spec.compressors,
            chunk_sizes=spec.chunk_sizes, orders=spec.orders,
            scales=spec.scales, repetitions=spec.repetitions,
            output_dir=args.out_dir,
        )
    rows = bench.run_experiment(spec)
    grids = {axis: bench.ablation_grid(spec, axis) for axis in args.ablate}
    paths = bench.emit_report(rows, spec.output_dir, grids=grids)
    print(f"report written to {paths['report']}")
    failed_external = [r for r in rows
                       if r.external and not r.lossless_verified
                       and not r.note.startswith("tool not found")]
    if failed_external:
        for r in failed_external:
            log.error("external row failed: %s/%s: %s",
                      r.corpus_id, r.compressor_id, r.note)
        return EXIT_EXTERNAL
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=(logging.DEBUG if args.verbose >= 2
               else logging.INFO if args.verbose else logging.WARNING),
        format="%(levelname)s %(message)s",
    )
    handlers = {
        "compress": cmd_compress,
        "decompress": cmd_decompress,
        "analyze": cmd_analyze,
        "bench": cmd_bench,
    }
    try:
        return handlers[args.command](args)
    except PpressError as exc:
        log.error("%s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return _exit_code_for(exc)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
