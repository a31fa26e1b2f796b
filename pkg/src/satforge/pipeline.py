"""Batch production: record generation, dataset export, and throughput
measurement.

Record i of a run is generated entirely from random stream (seed, i), so a
dataset is reproducible from (config, seed) alone, any record can be
regenerated in isolation, and parallel workers partition the stream space
without coordination. Output order is always stream order.

Packed file layout (little-endian throughout):

    magic   "SATF"
    u32     version = 1
    u32     record count
    per record:
        u32 n, u32 m, u8 label (0=UNSAT, 1=SAT), u8 option id, u16 reserved
        m*n int8 cells, row-major
"""

from __future__ import annotations

import json
import struct
import time
from dataclasses import dataclass, replace
from multiprocessing import Pool
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from .core import DenseEncoding, Label, from_dense, to_dense
from .dimacs import serialize_dimacs
from .errors import ConfigError, SatforgeError
from .mix import (
    OPTION_IDS,
    GeneratorMixConfig,
    config_hash,
    draw_plan,
    execute_plan,
)
from .rng import RngState

MAGIC = b"SATF"
VERSION = 1
_HEADER = struct.Struct("<4sII")
_RECORD_HEADER = struct.Struct("<IIBBH")


@dataclass(frozen=True, slots=True)
class DatasetRecord:
    encoding: DenseEncoding
    label: Label
    option_id: int
    seed: int
    stream: int

    @property
    def n(self) -> int:
        return self.encoding.cols

    @property
    def m(self) -> int:
        return self.encoding.rows


@dataclass(frozen=True, slots=True)
class PackedEntry:
    """One record as read back from a packed file."""

    encoding: DenseEncoding
    label: Label
    option_id: int


@dataclass(frozen=True, slots=True)
class BatchSpec:
    """Shape caps and padding geometry for fixed-shape batching."""

    batch_size: int = 64
    max_vars: int = 0  # 0 = no cap
    max_clauses: int = 0
    orientation: str = "rows"

    def admits(self, n: int, m: int) -> bool:
        if self.max_vars and n > self.max_vars:
            return False
        if self.max_clauses and m > self.max_clauses:
            return False
        return True


@dataclass(frozen=True, slots=True)
class DatasetManifest:
    format: str
    count: int
    skipped: int
    seed: int
    config_hash: str

    def to_dict(self) -> dict:
        return {
            "format": self.format,
            "count": self.count,
            "skipped": self.skipped,
            "seed": self.seed,
            "config_hash": self.config_hash,
        }


def make_record(mix: GeneratorMixConfig, seed: int, stream: int) -> DatasetRecord:
    """Generate the one record that stream index ``stream`` defines."""
    rng = RngState(seed, stream)
    plan = draw_plan(mix, rng)
    problem = execute_plan(mix, plan, rng)
    return DatasetRecord(
        to_dense(problem.cnf),
        problem.label,
        OPTION_IDS[plan.option],
        seed,
        stream,
    )


def _record_chunk(args: tuple) -> list[DatasetRecord]:
    mix, seed, start, stop = args
    return [make_record(mix, seed, i) for i in range(start, stop)]


def generate_records(
    mix: GeneratorMixConfig,
    count: int,
    seed: int | None = None,
    workers: int = 1,
    start: int = 0,
) -> Iterator[DatasetRecord]:
    """Yield ``count`` records in stream order; ``workers`` only changes how
    the work is scheduled, never the output."""
    if seed is None:
        seed = mix.seed
    if count < 0:
        raise ValueError("count must be >= 0")
    if workers <= 1 or count < 2 * workers:
        for i in range(start, start + count):
            yield make_record(mix, seed, i)
        return
    chunk = max(16, count // (workers * 8))
    spans = [
        (mix, seed, lo, min(lo + chunk, start + count))
        for lo in range(start, start + count, chunk)
    ]
    with Pool(workers) as pool:
        for batch in pool.imap(_record_chunk, spans):
            yield from batch


def write_packed(
    records: Iterable[DatasetRecord | PackedEntry],
    path: str | Path,
    caps: BatchSpec | None = None,
) -> tuple[int, int]:
    """Write records to one packed file; returns (written, skipped)."""
    written = 0
    skipped = 0
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, 0))
        for rec in records:
            enc = rec.encoding
            if caps is not None and not caps.admits(enc.cols, enc.rows):
                skipped += 1
                continue
            fh.write(
                _RECORD_HEADER.pack(
                    enc.cols, enc.rows, rec.label.value, rec.option_id, 0
                )
            )
            fh.write(enc.cells.tobytes())
            written += 1
        fh.seek(0)
        fh.write(_HEADER.pack(MAGIC, VERSION, written))
    return written, skipped


def read_packed(path: str | Path) -> list[PackedEntry]:
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise SatforgeError(f"{path}: truncated packed file")
    magic, version, count = _HEADER.unpack_from(raw, 0)
    if magic != MAGIC:
        raise SatforgeError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise SatforgeError(f"{path}: unsupported version {version}")
    offset = _HEADER.size
    entries = []
    for _ in range(count):
        if offset + _RECORD_HEADER.size > len(raw):
            raise SatforgeError(f"{path}: truncated record header")
        n, m, label, option_id, _reserved = _RECORD_HEADER.unpack_from(raw, offset)
        offset += _RECORD_HEADER.size
        size = n * m
        if offset + size > len(raw):
            raise SatforgeError(f"{path}: truncated record payload")
        cells = np.frombuffer(raw, dtype=np.int8, count=size, offset=offset)
        offset += size
        entries.append(
            PackedEntry(
                DenseEncoding(cells.reshape(m, n).copy()),
                Label(label),
                option_id,
            )
        )
    return entries


def export_dataset(
    records: Iterable[DatasetRecord],
    path: str | Path,
    format: str = "dimacs-dir",
    *,
    seed: int = 0,
    mix: GeneratorMixConfig | None = None,
    caps: BatchSpec | None = None,
) -> DatasetManifest:
    """Write records plus a manifest; ``dimacs-dir`` lays out one .cnf per
    record with a labels.tsv, ``packed`` writes the binary file."""
    cfg_hash = config_hash(mix) if mix is not None else ""
    path = Path(path)
    if format == "packed":
        written, skipped = write_packed(records, path, caps)
        manifest = DatasetManifest("packed", written, skipped, seed, cfg_hash)
        manifest_path = path.with_name(path.name + ".manifest.json")
    elif format == "dimacs-dir":
        path.mkdir(parents=True, exist_ok=True)
        written = 0
        skipped = 0
        label_lines = []
        for rec in records:
            enc = rec.encoding
            if caps is not None and not caps.admits(enc.cols, enc.rows):
                skipped += 1
                continue
            name = f"problem_{rec.stream:06d}.cnf"
            (path / name).write_text(
                serialize_dimacs(from_dense(enc)), encoding="ascii"
            )
            label_lines.append(
                f"{name}\t{rec.label.name}\t{enc.cols}\t{enc.rows}\n"
            )
            written += 1
        (path / "labels.tsv").write_text("".join(label_lines), encoding="ascii")
        manifest = DatasetManifest("dimacs-dir", written, skipped, seed, cfg_hash)
        manifest_path = path / "manifest.json"
    else:
        raise ConfigError(f"unknown export format {format!r}")
    manifest_path.write_text(
        json.dumps(manifest.to_dict(), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    return manifest


def read_labels_tsv(path: str | Path) -> list[tuple[str, Label, int, int]]:
    rows = []
    for lineno, line in enumerate(
        Path(path).read_text(encoding="ascii").splitlines(), start=1
    ):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 4:
            raise SatforgeError(f"{path}:{lineno}: expected 4 tab-separated fields")
        name, label, n, m = parts
        rows.append((name, Label[label], int(n), int(m)))
    return rows


# -- throughput ---------------------------------------------------------------

REFERENCE_ROWS = (
    {"variables": 15, "problems_per_sec": 530.0, "hardware": "reference GPU figure, not this machine"},
    {"variables": 1500, "problems_per_sec": 128.0, "hardware": "reference GPU figure, not this machine"},
)


@dataclass(frozen=True, slots=True)
class BenchReport:
    n: int
    m: int
    duration: float
    problems: int
    cells: int
    elapsed: float
    workers: int

    @property
    def problems_per_sec(self) -> float:
        return self.problems / self.elapsed if self.elapsed > 0 else 0.0

    @property
    def cells_per_sec(self) -> float:
        return self.cells / self.elapsed if self.elapsed > 0 else 0.0

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "requested_duration_sec": self.duration,
            "elapsed_sec": self.elapsed,
            "workers": self.workers,
            "problems": self.problems,
            "cells": self.cells,
            "problems_per_sec": self.problems_per_sec,
            "cells_per_sec": self.cells_per_sec,
            "reference": list(REFERENCE_ROWS),
        }


def _bench_loop(
    mix: GeneratorMixConfig,
    n: int,
    m: int,
    duration: float,
    seed: int,
    stream_start: int,
    stream_step: int,
) -> tuple[int, int]:
    problems = 0
    cells = 0
    stream = stream_start
    t0 = time.perf_counter()
    while time.perf_counter() - t0 < duration:
        rng = RngState(seed, stream)
        plan = draw_plan(mix, rng)
        plan = replace(plan, n=n, m=m)
        execute_plan(mix, plan, rng)
        problems += 1
        cells += n * m
        stream += stream_step
    return problems, cells


def _bench_worker(args: tuple) -> tuple[int, int]:
    return _bench_loop(*args)


def benchmark_throughput(
    mix: GeneratorMixConfig,
    n: int,
    m: int,
    duration: float,
    workers: int = 1,
    seed: int = 0,
) -> BenchReport:
    """Generate (without exporting) at a fixed problem shape for roughly
    ``duration`` seconds and report the rates."""
    mix = replace(mix, record_trace=False)
    if duration <= 0:
        return BenchReport(n, m, duration, 0, 0, 0.0, workers)
    t0 = time.perf_counter()
    if workers <= 1:
        problems, cells = _bench_loop(mix, n, m, duration, seed, 0, 1)
    else:
        jobs = [
            (mix, n, m, duration, seed, w, workers) for w in range(workers)
        ]
        with Pool(workers) as pool:
            results = pool.map(_bench_worker, jobs)
        problems = sum(r[0] for r in results)
        cells = sum(r[1] for r in results)
    elapsed = time.perf_counter() - t0
    return BenchReport(n, m, duration, problems, cells, elapsed, workers)
