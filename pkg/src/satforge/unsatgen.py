"""Provably-unsatisfiable formula generation by backward resolution blooming.

Starting from complementary unit-clause pairs (trivially contradictory), the
generator repeatedly runs resolution backwards: a clause c splits into two
children that resolve back to c on a fresh "cut" variable, one child taking
the cut positively and one negatively. Each existing literal of c is carried
to the positive child, the negative child, or both, per a three-way "bloom"
choice. Every step preserves unsatisfiability (the children jointly imply
the parent), and once the core is grown the formula is padded with random
clauses up to the requested size -- conjoining anything onto an
unsatisfiable core keeps it unsatisfiable.

Internally clauses are kept as signed int8 rows of the dense encoding, which
makes the carry/cut bookkeeping cheap; object clauses are materialized once
at the end.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Assignment, Clause, Cnf, Label, LabeledProblem, Literal
from .dist import (
    Bernoulli,
    BloomWeights,
    DistributionSpec,
    NormalClipped,
    UniformIndex,
    sample_bloom_choices,
    sample_index_among,
    sample_var_index,
    sample_clause_width,
    sample_polarities,
    sample_unique_indices,
    sample_bias_seq,
)
from .errors import ConfigError
from .rng import RngState
from .satgen import SatGenConfig, random_cnf


@dataclass(frozen=True, slots=True)
class UnsatGenConfig:
    n: int
    m: int
    init_size: int = 1
    depth: int | None = 3  # None = bloom until the size or full-clause guard trips
    down_clause: Bernoulli = Bernoulli(0.5)
    vars: DistributionSpec = UniformIndex()
    lits_clause: DistributionSpec = NormalClipped(4.5, 1.0)
    polarities: Bernoulli = Bernoulli(0.5)
    bloom: DistributionSpec = BloomWeights(0.48, 0.48, 0.02)
    record_trace: bool = True

    def __post_init__(self) -> None:
        if self.n < 1 or self.m < 1:
            raise ConfigError(f"need n >= 1 and m >= 1, got n={self.n}, m={self.m}")
        if self.init_size < 1:
            raise ConfigError(f"init_size must be >= 1, got {self.init_size}")
        if 2 * self.init_size > self.m:
            raise ConfigError(
                f"2 * init_size = {2 * self.init_size} exceeds m = {self.m}"
            )
        if self.depth is not None and self.depth < 0:
            raise ConfigError(f"depth must be >= 0 or None, got {self.depth}")


@dataclass(frozen=True, slots=True)
class BloomStep:
    """One loop iteration: which clauses bloomed, and how each split."""

    selected: tuple[int, ...]  # indices into the clause list before the step
    cut_vars: tuple[int, ...]  # fresh variable per selected clause
    carries: tuple[tuple[int, ...], ...]  # choice in {0,1,2} per used variable


@dataclass(frozen=True, slots=True)
class BloomTrace:
    """Replayable witness of how the unsatisfiable core was grown."""

    num_vars: int
    init_vars: tuple[int, ...]
    steps: tuple[BloomStep, ...]
    core_size: int
    tail_witness: Assignment | None = None


def _row_to_clause(row: np.ndarray) -> Clause:
    nonzero = np.flatnonzero(row)
    return Clause(tuple(Literal(int(j) + 1, row[j] > 0) for j in nonzero))


def _clause_to_row(clause: Clause, n: int) -> np.ndarray:
    row = np.zeros(n, dtype=np.int8)
    for lit in clause.literals:
        row[lit.variable - 1] = 1 if lit.positive else -1
    return row


def _bloom_rows(
    rows: list[np.ndarray],
    vars_spec: DistributionSpec,
    bloom: DistributionSpec,
    rng: RngState,
) -> tuple[list[np.ndarray], tuple[int, ...], tuple[tuple[int, ...], ...]]:
    """Split every row into its two children; returns the new rows plus the
    cut variables and carry choices that were drawn (for the trace)."""
    children: list[np.ndarray] = []
    cuts: list[int] = []
    carries: list[tuple[int, ...]] = []
    for row in rows:
        available = np.flatnonzero(row == 0) + 1
        if len(available) == 0:
            raise ValueError("cannot bloom a full clause (all variables used)")
        cut = sample_index_among(vars_spec, available, rng)
        used = np.flatnonzero(row)
        choices = sample_bloom_choices(bloom, len(used), rng)
        pos_child = row.copy()
        pos_child[used[choices == 1]] = 0
        pos_child[cut - 1] = 1
        neg_child = row.copy()
        neg_child[used[choices == 0]] = 0
        neg_child[cut - 1] = -1
        children.append(pos_child)
        children.append(neg_child)
        cuts.append(cut)
        carries.append(tuple(int(c) for c in choices))
    return children, tuple(cuts), tuple(carries)


def res_search(
    prob: Cnf,
    vars_spec: DistributionSpec,
    bloom: DistributionSpec,
    rng: RngState,
) -> Cnf:
    """One parallel backward-resolution step over every clause of ``prob``.

    Requires every clause to have at least one unused variable. The output
    has exactly twice as many clauses, children adjacent, positive-cut child
    first; each child pair implies its parent clause.
    """
    rows = [_clause_to_row(c, prob.num_vars) for c in prob.clauses]
    children, _, _ = _bloom_rows(rows, vars_spec, bloom, rng)
    return Cnf(prob.num_vars, tuple(_row_to_clause(r) for r in children))


def _grow_core(
    cfg: UnsatGenConfig, rng: RngState
) -> tuple[list[np.ndarray], tuple[int, ...], list[BloomStep]]:
    rows: list[np.ndarray] = []
    widths: list[int] = []
    init_vars: list[int] = []
    for _ in range(cfg.init_size):
        j = sample_var_index(cfg.vars, cfg.n, rng)
        init_vars.append(j)
        pos = np.zeros(cfg.n, dtype=np.int8)
        pos[j - 1] = 1
        neg = np.zeros(cfg.n, dtype=np.int8)
        neg[j - 1] = -1
        rows.append(pos)
        rows.append(neg)
        widths.extend((1, 1))

    steps: list[BloomStep] = []
    iteration = 0
    while cfg.depth is None or iteration < cfg.depth:
        if 2 * len(rows) > cfg.m or max(widths) >= cfg.n:
            break
        while True:
            mask = rng.gen.random(len(rows)) < cfg.down_clause.p
            if mask.any():
                break
        selected = np.flatnonzero(mask)
        sub = [rows[i] for i in selected]
        rest = [rows[i] for i in np.flatnonzero(~mask)]
        rest_widths = [widths[i] for i in np.flatnonzero(~mask)]
        children, cuts, carries = _bloom_rows(sub, cfg.vars, cfg.bloom, rng)
        rows = children + rest
        widths = [int(np.count_nonzero(r)) for r in children] + rest_widths
        steps.append(
            BloomStep(tuple(int(i) for i in selected), cuts, carries)
        )
        iteration += 1
    return rows, tuple(init_vars), steps


def generate_unsat(cfg: UnsatGenConfig, rng: RngState) -> LabeledProblem:
    """Generate an unsatisfiable formula of exactly ``cfg.m`` clauses, padded
    with unconstrained random clauses beyond the bloomed core."""
    rows, init_vars, steps = _grow_core(cfg, rng)
    core_size = len(rows)
    needed = cfg.m - core_size
    clauses = [_row_to_clause(r) for r in rows]
    if needed > 0:
        tail = random_cnf(
            cfg.n, needed, cfg.vars, cfg.lits_clause, cfg.polarities, rng
        )
        clauses.extend(tail.clauses)
    cnf = Cnf(cfg.n, tuple(clauses))
    trace = None
    if cfg.record_trace:
        trace = BloomTrace(cfg.n, init_vars, tuple(steps), core_size)
    return LabeledProblem(cnf, Label.UNSAT, trace)


def unsat_with_sat_tail(
    cfg: UnsatGenConfig, sat_cfg: SatGenConfig, rng: RngState
) -> LabeledProblem:
    """Like :func:`generate_unsat` but the padding clauses come from the
    satisfiable generator's clause process, so the padding alone satisfies a
    hidden assignment (recorded on the trace)."""
    if sat_cfg.n != cfg.n:
        raise ConfigError(
            f"tail config is over n={sat_cfg.n} but core is over n={cfg.n}"
        )
    rows, init_vars, steps = _grow_core(cfg, rng)
    core_size = len(rows)
    needed = cfg.m - core_size
    clauses = [_row_to_clause(r) for r in rows]
    polarity = sample_polarities(sat_cfg.polarities, cfg.n, rng)
    hidden: Assignment = tuple(bool(p == 1) for p in polarity)
    for _ in range(max(0, needed)):
        width = sample_clause_width(sat_cfg.lits_clause, cfg.n, rng)
        var_indices = sample_unique_indices(sat_cfg.vars, cfg.n, width, rng)
        seq = sample_bias_seq(sat_cfg.polarity_bias, width, rng)
        clauses.append(
            Clause(
                tuple(
                    Literal(v, hidden[v - 1] == bool(seq[j]))
                    for j, v in enumerate(var_indices)
                )
            )
        )
    cnf = Cnf(cfg.n, tuple(clauses))
    trace = None
    if cfg.record_trace:
        trace = BloomTrace(cfg.n, init_vars, tuple(steps), core_size, hidden)
    return LabeledProblem(cnf, Label.UNSAT, trace)


def replay_trace(trace: BloomTrace) -> Cnf:
    """Reconstruct the unsatisfiable core a trace describes."""
    rows: list[np.ndarray] = []
    for j in trace.init_vars:
        pos = np.zeros(trace.num_vars, dtype=np.int8)
        pos[j - 1] = 1
        neg = np.zeros(trace.num_vars, dtype=np.int8)
        neg[j - 1] = -1
        rows.append(pos)
        rows.append(neg)
    for step in trace.steps:
        selected = set(step.selected)
        sub = [rows[i] for i in step.selected]
        rest = [rows[i] for i in range(len(rows)) if i not in selected]
        children: list[np.ndarray] = []
        for row, cut, carry in zip(sub, step.cut_vars, step.carries):
            used = np.flatnonzero(row)
            choices = np.asarray(carry, dtype=np.int8)
            pos_child = row.copy()
            pos_child[used[choices == 1]] = 0
            pos_child[cut - 1] = 1
            neg_child = row.copy()
            neg_child[used[choices == 0]] = 0
            neg_child[cut - 1] = -1
            children.append(pos_child)
            children.append(neg_child)
        rows = children + rest
    return Cnf(trace.num_vars, tuple(_row_to_clause(r) for r in rows))
