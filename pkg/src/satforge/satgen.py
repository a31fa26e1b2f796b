"""Provably-satisfiable formula generation.

The generator fixes a hidden assignment first, then builds every clause so
that at least one of its literals agrees with it: each clause draws a
nonzero 0/1 bias sequence (one per clause) and literal j agrees with the
assignment exactly where the sequence holds a 1. The hidden assignment is
returned as the witness.

The cover transformations re-polarize an existing formula onto a chosen
assignment without touching its literal incidence structure (which
variables appear in which clauses).
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import Assignment, Clause, Cnf, Label, LabeledProblem, Literal
from .dist import (
    Bernoulli,
    DistributionSpec,
    NormalClipped,
    UniformIndex,
    UniformNonZeroBias,
    sample_bias_seq,
    sample_clause_width,
    sample_polarities,
    sample_unique_indices,
)
from .errors import ConfigError
from .rng import RngState


@dataclass(frozen=True, slots=True)
class SatGenConfig:
    n: int
    m: int
    vars: DistributionSpec = UniformIndex()
    lits_clause: DistributionSpec = NormalClipped(4.5, 1.0)
    polarities: Bernoulli = Bernoulli(0.5)
    polarity_bias: DistributionSpec = UniformNonZeroBias()

    def __post_init__(self) -> None:
        if self.n < 1 or self.m < 1:
            raise ConfigError(f"need n >= 1 and m >= 1, got n={self.n}, m={self.m}")


def _clause_for(
    var_indices: list[int], seq, witness: Assignment
) -> Clause:
    lits = tuple(
        Literal(v, witness[v - 1] == bool(seq[j]))
        for j, v in enumerate(var_indices)
    )
    return Clause(lits)


def generate_sat(cfg: SatGenConfig, rng: RngState) -> LabeledProblem:
    """Generate a formula guaranteed satisfiable, with its witness."""
    polarity = sample_polarities(cfg.polarities, cfg.n, rng)
    witness: Assignment = tuple(bool(p == 1) for p in polarity)
    clauses = []
    for _ in range(cfg.m):
        width = sample_clause_width(cfg.lits_clause, cfg.n, rng)
        var_indices = sample_unique_indices(cfg.vars, cfg.n, width, rng)
        seq = sample_bias_seq(cfg.polarity_bias, width, rng)
        clauses.append(_clause_for(var_indices, seq, witness))
    cnf = Cnf(cfg.n, tuple(clauses))
    return LabeledProblem(cnf, Label.SAT, witness)


def random_cnf(
    n: int,
    m: int,
    vars: DistributionSpec,
    lits_clause: DistributionSpec,
    polarities: Bernoulli,
    rng: RngState,
) -> Cnf:
    """Unconstrained random formula: no label guarantee of any kind."""
    clauses = []
    for _ in range(m):
        width = sample_clause_width(lits_clause, n, rng)
        var_indices = sample_unique_indices(vars, n, width, rng)
        signs = sample_polarities(polarities, width, rng)
        clauses.append(
            Clause(
                tuple(
                    Literal(v, bool(s == 1))
                    for v, s in zip(var_indices, signs)
                )
            )
        )
    return Cnf(n, tuple(clauses))


def sat_cover(
    cnf: Cnf, alpha: Assignment, bias: DistributionSpec, rng: RngState
) -> Cnf:
    """Re-draw all polarities so ``alpha`` satisfies the formula, keeping the
    incidence structure: per clause a fresh nonzero bias sequence decides
    which literals agree with ``alpha``."""
    if len(alpha) != cnf.num_vars:
        raise ValueError(
            f"assignment length {len(alpha)} != num_vars {cnf.num_vars}"
        )
    covered = []
    for clause in cnf.clauses:
        if len(clause) == 0:
            raise ValueError("an empty clause admits no satisfiable cover")
        seq = sample_bias_seq(bias, len(clause), rng)
        lits = tuple(
            Literal(lit.variable, alpha[lit.variable - 1] == bool(seq[j]))
            for j, lit in enumerate(clause.literals)
        )
        covered.append(Clause(lits))
    return Cnf(cnf.num_vars, tuple(covered))


def biased_sat_cover(
    cnf: Cnf, alpha: Assignment, flip: bool, rng: RngState
) -> Cnf:
    """Pick one literal per clause and, if it disagrees with ``alpha``, invert
    it. With ``flip`` a compensating inversion of one other literal follows,
    chosen among literals sharing the repaired literal's new sign so the
    clause's positive/negative totals stay balanced (clauses of length 1, or
    with no such literal, cannot be balanced and skip or degrade gracefully).
    """
    if len(alpha) != cnf.num_vars:
        raise ValueError(
            f"assignment length {len(alpha)} != num_vars {cnf.num_vars}"
        )
    covered = []
    for clause in cnf.clauses:
        k = len(clause)
        if k == 0:
            raise ValueError("an empty clause admits no satisfiable cover")
        lits = list(clause.literals)
        pos = int(rng.gen.integers(k))
        chosen = lits[pos]
        if not chosen.agrees(alpha):
            repaired = chosen.negated()
            lits[pos] = repaired
            if flip and k >= 2:
                pool = [
                    q
                    for q in range(k)
                    if q != pos and lits[q].positive == repaired.positive
                ]
                if not pool:
                    pool = [q for q in range(k) if q != pos]
                other = pool[int(rng.gen.integers(len(pool)))]
                lits[other] = lits[other].negated()
        covered.append(Clause(tuple(lits)))
    return Cnf(cnf.num_vars, tuple(covered))
