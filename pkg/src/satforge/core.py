"""CNF data model, evaluation semantics, and the dense matrix encoding.

A formula in conjunctive normal form over ``v`` variables with ``m`` clauses
is represented two ways:

* ``Cnf`` -- ordered clauses of ordered literals (what parsers and
  generators produce).
* ``DenseEncoding`` -- an ``m x v`` int8 grid over ``{-1, 0, +1}`` where cell
  ``(i, j)`` records how variable ``j+1`` occurs in clause ``i`` (+1
  positive, -1 negative, 0 absent). This is the canonical "one cell per
  variable" view: a clause never holds two literals over the same variable.

All values here are immutable after construction and safe to share between
workers.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable, Sequence

import numpy as np

if TYPE_CHECKING:
    from .unsatgen import BloomTrace

Assignment = tuple[bool, ...]


@dataclass(frozen=True, slots=True)
class Literal:
    """A variable occurrence: ``variable`` is 1-based, ``positive`` its sign."""

    variable: int
    positive: bool

    def __post_init__(self) -> None:
        if self.variable < 1:
            raise ValueError(f"variable index must be >= 1, got {self.variable}")

    @classmethod
    def from_int(cls, lit: int) -> Literal:
        if lit == 0:
            raise ValueError("0 is not a literal")
        return cls(abs(lit), lit > 0)

    def to_int(self) -> int:
        return self.variable if self.positive else -self.variable

    def negated(self) -> Literal:
        return Literal(self.variable, not self.positive)

    def agrees(self, alpha: Sequence[bool]) -> bool:
        return alpha[self.variable - 1] == self.positive


@dataclass(frozen=True, slots=True)
class Clause:
    """A disjunction of literals over pairwise-distinct variables."""

    literals: tuple[Literal, ...]

    def __post_init__(self) -> None:
        seen = set()
        for lit in self.literals:
            if lit.variable in seen:
                raise ValueError(f"variable {lit.variable} occurs twice in clause")
            seen.add(lit.variable)

    @classmethod
    def from_ints(cls, lits: Iterable[int]) -> Clause:
        return cls(tuple(Literal.from_int(l) for l in lits))

    def to_ints(self) -> tuple[int, ...]:
        return tuple(lit.to_int() for lit in self.literals)

    def __len__(self) -> int:
        return len(self.literals)

    def variables(self) -> frozenset[int]:
        return frozenset(lit.variable for lit in self.literals)


@dataclass(frozen=True, slots=True)
class Cnf:
    """A conjunction of clauses over variables ``1..num_vars``."""

    num_vars: int
    clauses: tuple[Clause, ...]

    def __post_init__(self) -> None:
        if self.num_vars < 0:
            raise ValueError("num_vars must be >= 0")
        for clause in self.clauses:
            for lit in clause.literals:
                if lit.variable > self.num_vars:
                    raise ValueError(
                        f"literal over variable {lit.variable} exceeds "
                        f"num_vars={self.num_vars}"
                    )

    @classmethod
    def from_int_clauses(cls, num_vars: int, clauses: Iterable[Iterable[int]]) -> Cnf:
        return cls(num_vars, tuple(Clause.from_ints(c) for c in clauses))

    def to_int_clauses(self) -> list[list[int]]:
        return [list(c.to_ints()) for c in self.clauses]

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)


class Label(enum.Enum):
    UNSAT = 0
    SAT = 1


@dataclass(frozen=True, slots=True)
class LabeledProblem:
    """A formula with its ground-truth label and the evidence behind it.

    For SAT the witness is the satisfying assignment the generator built the
    formula around; for UNSAT it is the bloom trace that replays the
    unsatisfiable core (or None when trace recording is disabled).
    """

    cnf: Cnf
    label: Label
    witness: "Assignment | BloomTrace | None" = field(default=None)


def evaluate(cnf: Cnf, alpha: Sequence[bool]) -> bool:
    """Evaluate ``cnf`` under ``alpha``.

    The empty conjunction is true; any empty clause makes the formula false.
    """
    if len(alpha) != cnf.num_vars:
        raise ValueError(
            f"assignment length {len(alpha)} != num_vars {cnf.num_vars}"
        )
    for clause in cnf.clauses:
        if not any(lit.agrees(alpha) for lit in clause.literals):
            return False
    return True


@dataclass(frozen=True)
class DenseEncoding:
    """The ``m x v`` matrix view of a CNF, cells in ``{-1, 0, +1}`` (int8)."""

    cells: np.ndarray

    def __post_init__(self) -> None:
        cells = np.asarray(self.cells, dtype=np.int8)
        if cells.ndim != 2:
            raise ValueError(f"cells must be 2-D, got shape {cells.shape}")
        cells = np.ascontiguousarray(cells)
        cells.setflags(write=False)
        object.__setattr__(self, "cells", cells)

    @property
    def rows(self) -> int:
        return self.cells.shape[0]

    @property
    def cols(self) -> int:
        return self.cells.shape[1]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DenseEncoding):
            return NotImplemented
        return self.cells.shape == other.cells.shape and bool(
            np.array_equal(self.cells, other.cells)
        )

    def __hash__(self) -> int:
        return hash((self.cells.shape, self.cells.tobytes()))


def to_dense(cnf: Cnf) -> DenseEncoding:
    cells = np.zeros((cnf.num_clauses, cnf.num_vars), dtype=np.int8)
    for i, clause in enumerate(cnf.clauses):
        for lit in clause.literals:
            cells[i, lit.variable - 1] = 1 if lit.positive else -1
    return DenseEncoding(cells)


def from_dense(enc: DenseEncoding) -> Cnf:
    """Rebuild a Cnf from its matrix; literals come out variable-ordered."""
    cells = enc.cells
    bad = (cells < -1) | (cells > 1)
    if bad.any():
        i, j = np.argwhere(bad)[0]
        raise ValueError(
            f"cell ({i}, {j}) = {cells[i, j]} outside {{-1, 0, +1}}"
        )
    clauses = []
    for row in cells:
        nonzero = np.nonzero(row)[0]
        clauses.append(
            Clause(tuple(Literal(int(j) + 1, row[j] > 0) for j in nonzero))
        )
    return Cnf(enc.cols, tuple(clauses))


def tokenize(enc: DenseEncoding, orientation: str = "rows") -> np.ndarray:
    """View the encoding as a token sequence.

    ``rows`` yields m vectors of length v (one per clause); ``columns``
    yields v vectors of length m (the transposed view, one per variable).
    """
    if orientation == "rows":
        return enc.cells
    if orientation == "columns":
        return np.ascontiguousarray(enc.cells.T)
    raise ValueError(f"orientation must be 'rows' or 'columns', got {orientation!r}")
