"""Readers for the generator pipeline's dataset formats.

Two on-disk layouts are understood, exactly as the pipeline writes them:

* packed: magic ``SATF``, u32 version=1, u32 count, then per record
  u32 n, u32 m, u8 label (0=UNSAT, 1=SAT), u8 option id, u16 reserved,
  followed by m*n int8 cells row-major (little-endian throughout);
* dimacs-dir: one DIMACS .cnf per problem plus ``labels.tsv`` lines of
  ``filename<TAB>label<TAB>n<TAB>m``.

A problem becomes a token sequence by taking the rows of its cell matrix
(clauses as tokens) or the columns (variables as tokens), zero-padding each
token to a fixed width and each sequence to the batch length, with a
validity mask marking the real tokens.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch

_HEADER = struct.Struct("<4sII")
_RECORD = struct.Struct("<IIBBH")
MAGIC = b"SATF"


@dataclass
class Problem:
    cells: np.ndarray  # (m, n) int8 over {-1, 0, +1}
    label: int  # 1 = SAT, 0 = UNSAT


def read_packed(path: str | Path) -> list[Problem]:
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise ValueError(f"{path}: truncated header")
    magic, version, count = _HEADER.unpack_from(raw, 0)
    if magic != MAGIC or version != 1:
        raise ValueError(f"{path}: not a version-1 packed dataset")
    problems = []
    offset = _HEADER.size
    for _ in range(count):
        n, m, label, _option, _reserved = _RECORD.unpack_from(raw, offset)
        offset += _RECORD.size
        cells = np.frombuffer(raw, dtype=np.int8, count=m * n, offset=offset)
        offset += m * n
        problems.append(Problem(cells.reshape(m, n).copy(), int(label)))
    return problems


def parse_dimacs_cells(text: str) -> np.ndarray:
    """DIMACS text to the (m, n) cell matrix."""
    num_vars = 0
    clauses: list[list[int]] = []
    current: list[int] = []
    seen_header = False
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"bad DIMACS header: {line!r}")
            num_vars = int(parts[2])
            seen_header = True
            continue
        if not seen_header:
            raise ValueError("clause data before DIMACS header")
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(current)
                current = []
            else:
                current.append(lit)
    if current:
        raise ValueError("unterminated clause")
    cells = np.zeros((len(clauses), num_vars), dtype=np.int8)
    for i, clause in enumerate(clauses):
        for lit in clause:
            cells[i, abs(lit) - 1] = 1 if lit > 0 else -1
    return cells


def read_dimacs_dir(path: str | Path) -> list[Problem]:
    path = Path(path)
    problems = []
    for line in (path / "labels.tsv").read_text().splitlines():
        if not line.strip():
            continue
        name, label, _n, _m = line.split("\t")
        cells = parse_dimacs_cells((path / name).read_text())
        problems.append(Problem(cells, 1 if label == "SAT" else 0))
    return problems


def load_problems(path: str | Path) -> list[Problem]:
    path = Path(path)
    if path.is_dir():
        return read_dimacs_dir(path)
    return read_packed(path)


@dataclass
class TokenBatch:
    """Fixed-shape batch: zero-padded tokens with a validity mask."""

    tokens: torch.Tensor  # (B, L, token_width) float
    mask: torch.Tensor  # (B, L) bool, True where the token is real
    labels: torch.Tensor  # (B,) float in {0, 1}


def problem_tokens(problem: Problem, orientation: str = "rows") -> np.ndarray:
    if orientation == "rows":
        return problem.cells
    if orientation == "columns":
        return np.ascontiguousarray(problem.cells.T)
    raise ValueError(f"orientation must be 'rows' or 'columns', got {orientation!r}")


def make_batch(
    problems: list[Problem],
    token_width: int,
    orientation: str = "rows",
    dtype: torch.dtype = torch.float32,
) -> TokenBatch:
    """Pad a group of problems to a common shape.

    Tokens narrower than ``token_width`` are zero-extended; sequences shorter
    than the longest in the group get all-zero padding tokens masked out.
    """
    seqs = [problem_tokens(p, orientation) for p in problems]
    widths = [s.shape[1] for s in seqs]
    if max(widths, default=0) > token_width:
        raise ValueError(
            f"problem token width {max(widths)} exceeds model width {token_width}"
        )
    length = max((s.shape[0] for s in seqs), default=0)
    batch = np.zeros((len(seqs), length, token_width), dtype=np.float32)
    mask = np.zeros((len(seqs), length), dtype=bool)
    for i, seq in enumerate(seqs):
        m, w = seq.shape
        batch[i, :m, :w] = seq
        mask[i, :m] = True
    labels = np.array([p.label for p in problems], dtype=np.float32)
    return TokenBatch(
        torch.from_numpy(batch).to(dtype),
        torch.from_numpy(mask),
        torch.from_numpy(labels).to(dtype),
    )
