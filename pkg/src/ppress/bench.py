"""Benchmark harness: runs compressors over corpora and renders reports.

Internal compressors go through the container pipeline with a fresh
predictor per row and are verified by full decompression; external
baselines run as subprocess command templates (never linked in) and must
declare a decompress command so losslessness can be byte-compared.  A row
enters the ratio tables only after its round-trip verified; everything else
lands in the quarantine section with a recorded reason.

Determinism: rows from internal compressors are identical across reruns
except for the wall-clock column; external tools are exempted and flagged
as such in the report.
"""

from __future__ import annotations

import hashlib
import json
import subprocess
import sys
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from . import corpora as corpora_mod
from .container import PredictorRegistry, compress, decompress
from .errors import ExternalToolFailure, InternalVerificationError, SpecError
from .predictors import parse_predictor_spec

DEFAULT_CHUNK_GRID = (16, 32, 64, 128, 256)
DEFAULT_ORDER_GRID = (0, 1, 2, 4, 8)
DEFAULT_SCALE_GRID = (1, 4, 16)

AXES = ("chunk_size", "predictor_order", "corpus_scale")


@dataclass(frozen=True)
class CorpusSpec:
    id: str
    path: Optional[Path] = None
    family: Optional[str] = None  # generator family, enables corpus_scale
    natural_language: bool = False
    sha256: Optional[str] = None

    def load(self) -> bytes:
        if self.path is not None:
            try:
                data = Path(self.path).read_bytes()
            except OSError as exc:
                raise SpecError(f"corpus {self.id!r}: cannot read {self.path}: {exc}")
        elif self.family is not None:
            data = corpora_mod.generate(self.family, seed=0).encode("utf-8")
        else:
            raise SpecError(f"corpus {self.id!r} has neither path nor family")
        if self.sha256 is not None:
            got = hashlib.sha256(data).hexdigest()
            if got != self.sha256:
                raise SpecError(
                    f"corpus {self.id!r} digest {got} does not match pinned {self.sha256}"
                )
        return data


@dataclass(frozen=True)
class InternalCompressor:
    id: str
    predictor: str  # parse_predictor_spec syntax
    chunk_size: int = 0


@dataclass(frozen=True)
class ExternalCompressor:
    id: str
    compress_argv: tuple[str, ...]
    decompress_argv: tuple[str, ...]


@dataclass(frozen=True)
class ExperimentSpec:
    corpora: tuple[CorpusSpec, ...]
    compressors: tuple[object, ...]
    chunk_sizes: tuple[int, ...] = DEFAULT_CHUNK_GRID
    orders: tuple[int, ...] = DEFAULT_ORDER_GRID
    scales: tuple[int, ...] = DEFAULT_SCALE_GRID
    repetitions: int = 1
    output_dir: Path = Path("bench-results")

    def validate(self) -> None:
        if not self.corpora:
            raise SpecError("experiment spec lists no corpora")
        if not self.compressors:
            raise SpecError("experiment spec lists no compressors")
        seen = set()
        for c in self.corpora:
            if c.id in seen:
                raise SpecError(f"duplicate corpus id {c.id!r}")
            seen.add(c.id)
        for comp in self.compressors:
            if isinstance(comp, ExternalCompressor):
                if not comp.compress_argv or not comp.decompress_argv:
                    raise SpecError(
                        f"external compressor {comp.id!r} must declare both "
                        "compress and decompress commands (losslessness check)"
                    )
        if self.repetitions < 1:
            raise SpecError("repetitions must be >= 1")

    @classmethod
    def from_toml(cls, path: Path) -> "ExperimentSpec":
        try:
            raw = tomllib.loads(Path(path).read_text())
        except (OSError, tomllib.TOMLDecodeError) as exc:
            raise SpecError(f"cannot load spec {path}: {exc}")
        base = Path(path).resolve().parent
        corpora = []
        for entry in raw.get("corpus", []):
            p = entry.get("path")
            corpora.append(CorpusSpec(
                id=entry["id"],
                path=(base / p if p else None),
                family=entry.get("family"),
                natural_language=bool(entry.get("natural_language", False)),
                sha256=entry.get("sha256"),
            ))
        comps: list[object] = []
        for entry in raw.get("compressor", []):
            if "predictor" in entry:
                comps.append(InternalCompressor(
                    id=entry["id"],
                    predictor=entry["predictor"],
                    chunk_size=int(entry.get("chunk_size", 0)),
                ))
            else:
                comps.append(ExternalCompressor(
                    id=entry["id"],
                    compress_argv=tuple(entry.get("compress", ())),
                    decompress_argv=tuple(entry.get("decompress", ())),
                ))
        spec = cls(
            corpora=tuple(corpora),
            compressors=tuple(comps),
            chunk_sizes=tuple(raw.get("chunk_sizes", DEFAULT_CHUNK_GRID)),
            orders=tuple(raw.get("orders", DEFAULT_ORDER_GRID)),
            scales=tuple(raw.get("scales", DEFAULT_SCALE_GRID)),
            repetitions=int(raw.get("repetitions", 1)),
            output_dir=base / raw.get("output_dir", "bench-results"),
        )
        spec.validate()
        return spec


@dataclass(frozen=True)
class ResultRow:
    corpus_id: str
    compressor_id: str
    original_bytes: int
    compressed_bytes: int
    payload_bytes: int
    ratio: float
    payload_ratio: float
    seconds: float
    lossless_verified: bool
    external: bool = False
    note: str = ""
    axis_value: Optional[int] = None

    def identity(self) -> tuple:
        """Row identity for determinism checks: everything but wall-clock."""
        return (self.corpus_id, self.compressor_id, self.original_bytes,
                self.compressed_bytes, self.payload_bytes, self.lossless_verified,
                self.external, self.note, self.axis_value)

    def as_record(self) -> dict:
        rec = {
            "format": 1,
            "corpus": self.corpus_id,
            "compressor": self.compressor_id,
            "original_bytes": self.original_bytes,
            "compressed_bytes": self.compressed_bytes,
            "payload_bytes": self.payload_bytes,
            "ratio": round(self.ratio, 6),
            "payload_ratio": round(self.payload_ratio, 6),
            "seconds": round(self.seconds, 4),
            "lossless_verified": self.lossless_verified,
            "external": self.external,
        }
        if self.note:
            rec["note"] = self.note
        if self.axis_value is not None:
            rec["axis_value"] = self.axis_value
        return rec


def _run_internal(corpus: CorpusSpec, data: bytes, comp: InternalCompressor,
                  chunk_override: Optional[int] = None,
                  axis_value: Optional[int] = None) -> ResultRow:
    chunk = comp.chunk_size if chunk_override is None else chunk_override
    predictor = parse_predictor_spec(comp.predictor)
    start = time.perf_counter()
    container = compress(data, predictor, chunk_size=chunk)
    seconds = time.perf_counter() - start
    blob = container.to_bytes()
    restored = decompress(blob, PredictorRegistry.default())
    if restored != data:
        raise InternalVerificationError(
            f"internal compressor {comp.id!r} failed round-trip on corpus "
            f"{corpus.id!r} (chunk_size={chunk})"
        )
    payload = container.payload_bytes
    return ResultRow(
        corpus_id=corpus.id,
        compressor_id=comp.id,
        original_bytes=len(data),
        compressed_bytes=len(blob),
        payload_bytes=payload,
        ratio=len(data) / len(blob),
        payload_ratio=len(data) / payload if payload else 0.0,
        seconds=seconds,
        lossless_verified=True,
        external=False,
        axis_value=axis_value,
    )


def _run_argv(argv: Sequence[str], input_path: Path, out_path: Path) -> bytes:
    argv = [a.replace("{input}", str(input_path)).replace("{output}", str(out_path))
            for a in argv]
    uses_output = any("{output}" in a for a in argv) or out_path.exists()
    proc = subprocess.run(argv, stdout=subprocess.PIPE, stderr=subprocess.PIPE)
    if proc.returncode != 0:
        raise ExternalToolFailure(
            f"{argv[0]} exited {proc.returncode}: {proc.stderr.decode(errors='replace')[:200]}"
        )
    if out_path.exists():
        return out_path.read_bytes()
    return proc.stdout


def _run_external(corpus: CorpusSpec, data: bytes, comp: ExternalCompressor) -> ResultRow:
    def skipped(reason: str) -> ResultRow:
        return ResultRow(
            corpus_id=corpus.id, compressor_id=comp.id,
            original_bytes=len(data), compressed_bytes=0, payload_bytes=0,
            ratio=0.0, payload_ratio=0.0, seconds=0.0,
            lossless_verified=False, external=True, note=reason,
        )

    with tempfile.TemporaryDirectory(prefix="ppress-bench-") as tmp:
        tmp_path = Path(tmp)
        src = tmp_path / "input.bin"
        src.write_bytes(data)
        try:
            start = time.perf_counter()
            compressed = _run_argv(comp.compress_argv, src, tmp_path / "out.bin")
            seconds = time.perf_counter() - start
        except FileNotFoundError as exc:
            return skipped(f"tool not found: {exc.filename}")
        except ExternalToolFailure as exc:
            return skipped(f"compress failed: {exc}")
        cfile = tmp_path / "compressed.bin"
        cfile.write_bytes(compressed)
        try:
            restored = _run_argv(comp.decompress_argv, cfile, tmp_path / "restored.bin")
        except FileNotFoundError as exc:
            return skipped(f"tool not found: {exc.filename}")
        except ExternalToolFailure as exc:
            return skipped(f"decompress failed: {exc}")
        if restored != data:
            return skipped("round-trip mismatch: output differs from input")
    return ResultRow(
        corpus_id=corpus.id, compressor_id=comp.id,
        original_bytes=len(data), compressed_bytes=len(compressed),
        payload_bytes=len(compressed),
        ratio=len(data) / len(compressed),
        payload_ratio=len(data) / len(compressed),
        seconds=seconds, lossless_verified=True, external=True,
    )


def run_experiment(spec: ExperimentSpec) -> list[ResultRow]:
    """One row per corpus x compressor x repetition, every row verified."""
    spec.validate()
    rows = []
    for corpus in spec.corpora:
        data = corpus.load()
        for comp in spec.compressors:
            for _ in range(spec.repetitions):
                if isinstance(comp, InternalCompressor):
                    rows.append(_run_internal(corpus, data, comp))
                else:
                    rows.append(_run_external(corpus, data, comp))
    return rows


def ablation_grid(spec: ExperimentSpec, axis: str) -> list[ResultRow]:
    """Sweep one axis over every corpus; internal compressors only."""
    spec.validate()
    if axis not in AXES:
        raise SpecError(f"unknown ablation axis {axis!r}; known: {', '.join(AXES)}")
    internals = [c for c in spec.compressors if isinstance(c, InternalCompressor)]
    if not internals:
        raise SpecError("ablation needs at least one internal compressor")
    rows = []
    if axis == "chunk_size":
        for corpus in spec.corpora:
            data = corpus.load()
            for comp in internals:
                for chunk in spec.chunk_sizes:
                    rows.append(_run_internal(corpus, data, comp,
                                              chunk_override=chunk,
                                              axis_value=chunk))
    elif axis == "predictor_order":
        for corpus in spec.corpora:
            data = corpus.load()
            for order in spec.orders:
                comp = InternalCompressor(id="orderk",
                                          predictor=f"orderk:{order}")
                rows.append(_run_internal(corpus, data, comp, axis_value=order))
    else:  # corpus_scale
        for corpus in spec.corpora:
            if corpus.family is None:
                rows.append(ResultRow(
                    corpus_id=corpus.id, compressor_id="-",
                    original_bytes=0, compressed_bytes=0, payload_bytes=0,
                    ratio=0.0, payload_ratio=0.0, seconds=0.0,
                    lossless_verified=False, external=False,
                    note="corpus_scale needs a generator family for this corpus",
                ))
                continue
            base = len(corpus.load())
            for scale in spec.scales:
                text = corpora_mod.generate(
                    corpus.family, seed=100 + scale, target_bytes=base * scale
                ).encode("utf-8")
                scaled = CorpusSpec(id=corpus.id, family=corpus.family)
                for comp in internals:
                    rows.append(_run_internal(scaled, text, comp, axis_value=scale))
    return rows


def monotonicity_verdicts(grid: list[ResultRow]) -> list[str]:
    """Human-readable verdict per (corpus, compressor) series in a grid."""
    verdicts = []
    series = sorted({(r.corpus_id, r.compressor_id) for r in grid
                     if r.lossless_verified})
    for corpus_id, comp_id in series:
        points = sorted(
            (r.axis_value, r.ratio) for r in grid
            if r.corpus_id == corpus_id and r.compressor_id == comp_id
            and r.lossless_verified and r.axis_value is not None
        )
        ratios = [p[1] for p in points]
        mono = all(a <= b + 1e-12 for a, b in zip(ratios, ratios[1:]))
        verdicts.append(
            f"{corpus_id}/{comp_id}: "
            + ("non-decreasing" if mono else "NOT monotone")
            + " [" + ", ".join(f"{v}:{r:.2f}" for v, r in points) + "]"
        )
    return verdicts


def _table(rows: list[ResultRow], headers: list[str], fields) -> list[str]:
    cells = [headers] + [[str(f(r)) for f in fields] for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(headers))]
    lines = []
    for i, row in enumerate(cells):
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
    return lines


def emit_report(
    rows: list[ResultRow],
    out_dir: Path,
    grids: Optional[dict[str, list[ResultRow]]] = None,
    with_figures: bool = True,
) -> dict[str, Path]:
    """Write results.jsonl, report.txt, and figures; returns the paths.

    Byte-identical output for identical inputs: rows are sorted, floats are
    rendered at fixed precision, and nothing but row contents enters the
    text files.
    """
    if not rows and not grids:
        raise SpecError("nothing to report: no rows")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    grids = grids or {}

    sort_key = lambda r: (r.corpus_id, r.compressor_id, r.axis_value or 0)
    rows = sorted(rows, key=sort_key)

    jsonl = out_dir / "results.jsonl"
    with jsonl.open("w") as fh:
        for r in rows:
            fh.write(json.dumps(r.as_record(), sort_keys=True) + "\n")
        for axis, grid in sorted(grids.items()):
            for r in sorted(grid, key=sort_key):
                rec = r.as_record()
                rec["axis"] = axis
                fh.write(json.dumps(rec, sort_keys=True) + "\n")

    verified = [r for r in rows if r.lossless_verified]
    quarantined = [r for r in rows if not r.lossless_verified]

    lines = ["ppress benchmark report (format 1)", "=" * 34, ""]
    if verified:
        lines.append("Verified ratios (original / compressed, 2 decimals):")
        lines += _table(
            verified,
            ["corpus", "compressor", "orig_bytes", "comp_bytes",
             "ratio", "payload_ratio", "seconds*"],
            [lambda r: r.corpus_id, lambda r: r.compressor_id,
             lambda r: r.original_bytes, lambda r: r.compressed_bytes,
             lambda r: f"{r.ratio:.2f}", lambda r: f"{r.payload_ratio:.2f}",
             lambda r: f"{r.seconds:.3f}"],
        )
        lines.append("* wall-clock; excluded from run-to-run determinism")
    lines.append("")
    lines.append("Quarantine (unverified rows, excluded from all ratio tables):")
    if quarantined:
        for r in quarantined:
            lines.append(f"  - {r.corpus_id} / {r.compressor_id}: {r.note or 'unverified'}")
    else:
        lines.append("  (none)")
    for axis, grid in sorted(grids.items()):
        lines.append("")
        lines.append(f"Ablation: {axis}")
        for verdict in monotonicity_verdicts(grid):
            lines.append(f"  {verdict}")
    lines.append("")
    report = out_dir / "report.txt"
    report.write_text("\n".join(lines))

    paths = {"results": jsonl, "report": report}
    if with_figures:
        from . import figures
        fig_dir = out_dir / "figures"
        fig_dir.mkdir(exist_ok=True)
        if verified:
            p = fig_dir / "ratios.png"
            figures.render_ratio_bars(verified, p)
            paths["ratios_figure"] = p
        for axis, grid in sorted(grids.items()):
            p = fig_dir / f"ablation_{axis}.png"
            figures.render_ablation_lines(
                [r for r in grid if r.lossless_verified], axis, p
            )
            paths[f"ablation_{axis}_figure"] = p
    return paths


def default_spec(corpus_dir: Path, output_dir: Path,
                 include_external: bool = True) -> ExperimentSpec:
    """The standard suite: all sample corpora, internal ladder + gzip/xz."""
    corpora_specs = []
    for name, (_, natural) in corpora_mod.CATEGORIES.items():
        path = Path(corpus_dir) / f"{name}.txt"
        if path.exists():
            corpora_specs.append(CorpusSpec(
                id=name, path=path, family=name, natural_language=natural,
            ))
    comps: list[object] = [
        InternalCompressor("uniform", "uniform"),
        InternalCompressor("flat-entropy", "orderk:0"),
        InternalCompressor("orderk4", "orderk:4"),
    ]
    if include_external:
        comps += [
            ExternalCompressor("gzip-9",
                               ("gzip", "-9", "-c", "{input}"),
                               ("gzip", "-d", "-c", "{input}")),
            ExternalCompressor("xz-9",
                               ("xz", "-9", "-c", "{input}"),
                               ("xz", "-d", "-c", "{input}")),
        ]
    return ExperimentSpec(
        corpora=tuple(corpora_specs),
        compressors=tuple(comps),
        output_dir=Path(output_dir),
    )
