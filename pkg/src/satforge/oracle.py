"""Independent ground truth: exhaustive satisfiability scan, truth-table
implication, resolution-step checking, and witness extraction from a
yes/no satisfiability oracle.

The exhaustive procedures enumerate assignments as integer codes (variable 1
on the most significant bit, so code order is lexicographic tuple order) and
evaluate whole blocks of codes against per-clause bitmasks at once.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from .core import Assignment, Clause, Cnf, Literal, evaluate
from .errors import CapacityError, OracleFaultError

BRUTE_FORCE_VAR_CAP = 26
IMPLICATION_VAR_CAP = 20

_BLOCK_BITS = 16


@dataclass(frozen=True, slots=True)
class OracleResult:
    satisfiable: bool
    witness: Assignment | None = None


def _clause_masks(cnf: Cnf) -> tuple[np.ndarray, np.ndarray]:
    """Per clause: bitmask of positive variables and of negative variables,
    variable j on bit (num_vars - j)."""
    v = cnf.num_vars
    pos = np.zeros(cnf.num_clauses, dtype=np.uint64)
    neg = np.zeros(cnf.num_clauses, dtype=np.uint64)
    for i, clause in enumerate(cnf.clauses):
        p = 0
        n = 0
        for lit in clause.literals:
            bit = 1 << (v - lit.variable)
            if lit.positive:
                p |= bit
            else:
                n |= bit
        pos[i] = p
        neg[i] = n
    return pos, neg


def _satisfying_codes(
    codes: np.ndarray, pos: np.ndarray, neg: np.ndarray
) -> np.ndarray:
    """Boolean mask over ``codes``: which assignments satisfy every clause."""
    ok = np.ones(len(codes), dtype=bool)
    for i in range(len(pos)):
        falsified = ((codes & pos[i]) == 0) & ((codes & neg[i]) == neg[i])
        ok &= ~falsified
        if i % 16 == 15 and not ok.any():
            break
    return ok


def _code_blocks(v: int) -> Iterator[np.ndarray]:
    total = 1 << v
    block = 1 << min(v, _BLOCK_BITS)
    for start in range(0, total, block):
        yield np.arange(start, start + block, dtype=np.uint64)


def _code_to_assignment(code: int, v: int) -> Assignment:
    return tuple(bool((code >> (v - j)) & 1) for j in range(1, v + 1))


def brute_force_sat(cnf: Cnf) -> OracleResult:
    """Scan all 2**v assignments; returns the lexicographically first witness.

    Hard-capped at 26 variables.
    """
    v = cnf.num_vars
    if v > BRUTE_FORCE_VAR_CAP:
        raise CapacityError(
            f"{v} variables exceed the exhaustive-scan cap of {BRUTE_FORCE_VAR_CAP}"
        )
    if any(len(c) == 0 for c in cnf.clauses):
        return OracleResult(False)
    if cnf.num_clauses == 0:
        return OracleResult(True, tuple([False] * v))
    pos, neg = _clause_masks(cnf)
    for codes in _code_blocks(v):
        ok = _satisfying_codes(codes, pos, neg)
        if ok.any():
            first = int(codes[int(np.argmax(ok))])
            return OracleResult(True, _code_to_assignment(first, v))
    return OracleResult(False)


def check_implication(f: Cnf, g: Cnf) -> bool:
    """True iff every assignment satisfying ``f`` satisfies ``g`` (full scan
    over the shared variable space)."""
    if f.num_vars != g.num_vars:
        raise ValueError(
            f"formulas share no variable space: {f.num_vars} vs {g.num_vars}"
        )
    v = f.num_vars
    if v > IMPLICATION_VAR_CAP:
        raise CapacityError(
            f"{v} variables exceed the implication-scan cap of {IMPLICATION_VAR_CAP}"
        )
    if any(len(c) == 0 for c in f.clauses):
        return True  # f unsatisfiable: implication holds vacuously
    pos_f, neg_f = _clause_masks(f)
    pos_g, neg_g = _clause_masks(g)
    for codes in _code_blocks(v):
        sat_f = _satisfying_codes(codes, pos_f, neg_f)
        if not sat_f.any():
            continue
        sat_g = _satisfying_codes(codes, pos_g, neg_g)
        if (sat_f & ~sat_g).any():
            return False
    return True


def resolution_step_check(
    c1: Clause, c2: Clause, pivot: int, resolvent: Clause
) -> bool:
    """Check one resolution inference: the resolvent must be exactly the
    union of the two clauses' literals minus both pivot literals."""
    lits1 = {lit.to_int() for lit in c1.literals}
    lits2 = {lit.to_int() for lit in c2.literals}
    if not (
        (pivot in lits1 and -pivot in lits2)
        or (pivot in lits2 and -pivot in lits1)
    ):
        raise ValueError(
            f"pivot {pivot} does not occur with complementary signs in c1/c2"
        )
    expected = (lits1 | lits2) - {pivot, -pivot}
    return {lit.to_int() for lit in resolvent.literals} == expected


def _substitute(cnf: Cnf, var: int, value: bool) -> Cnf:
    """Fix one variable: satisfied clauses drop out, falsified literals are
    removed (a clause losing all its literals stays as the empty clause)."""
    out = []
    for clause in cnf.clauses:
        kept: list[Literal] = []
        satisfied = False
        for lit in clause.literals:
            if lit.variable == var:
                if lit.positive == value:
                    satisfied = True
                    break
            else:
                kept.append(lit)
        if not satisfied:
            out.append(Clause(tuple(kept)))
    return Cnf(cnf.num_vars, tuple(out))


def extract_assignment(
    cnf: Cnf, oracle: Callable[[Cnf], bool]
) -> Assignment:
    """Turn a yes/no satisfiability oracle into a witness by self-reduction.

    One oracle probe per variable, in index order: variable k is fixed true
    iff it still occurs in the residual formula and the oracle accepts the
    residual with k set true. Variables with no remaining occurrences default
    to false. Exactly ``num_vars`` oracle calls are made.
    """
    residual = cnf
    values: list[bool] = []
    for k in range(1, cnf.num_vars + 1):
        occurs = any(
            lit.variable == k for c in residual.clauses for lit in c.literals
        )
        branch = _substitute(residual, k, True)
        accepted = oracle(branch)
        if not occurs:
            values.append(False)
        elif accepted:
            values.append(True)
            residual = branch
        else:
            values.append(False)
            residual = _substitute(residual, k, False)
    alpha = tuple(values)
    if not evaluate(cnf, alpha):
        if not oracle(cnf):
            raise ValueError("input formula is unsatisfiable per the oracle")
        raise OracleFaultError(
            "oracle accepted the formula but rejected both branches of some variable"
        )
    return alpha
