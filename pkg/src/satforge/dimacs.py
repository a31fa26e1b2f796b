"""DIMACS CNF reader/writer.

Accepts the standard layout: optional ``c`` comment lines, one
``p cnf <vars> <clauses>`` header, then whitespace-separated signed integers
with each clause terminated by ``0``. Clauses may span lines or share one.

Strict mode (default) checks the declared variable and clause counts against
the content; lenient mode tolerates both kinds of mismatch, as files in the
wild sometimes require, growing ``num_vars`` to the largest index seen.
"""

from __future__ import annotations

from .core import Clause, Cnf, Literal
from .errors import DimacsParseError


def parse_dimacs(text: str, strict: bool = True) -> Cnf:
    declared_vars: int | None = None
    declared_clauses: int | None = None
    header_line = 0
    clauses: list[Clause] = []
    current: list[Literal] = []
    current_vars: set[int] = set()
    max_var_seen = 0

    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("c"):
            continue
        if stripped.startswith("p"):
            if declared_vars is not None:
                raise DimacsParseError("duplicate header", lineno)
            fields = stripped.split()
            if len(fields) != 4 or fields[0] != "p" or fields[1] != "cnf":
                raise DimacsParseError(f"bad header {stripped!r}", lineno)
            try:
                declared_vars = int(fields[2])
                declared_clauses = int(fields[3])
            except ValueError:
                raise DimacsParseError(f"bad header {stripped!r}", lineno) from None
            if declared_vars < 0 or declared_clauses < 0:
                raise DimacsParseError("negative count in header", lineno)
            header_line = lineno
            continue
        if declared_vars is None:
            raise DimacsParseError("clause data before 'p cnf' header", lineno)
        for tok in stripped.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsParseError(f"non-integer token {tok!r}", lineno) from None
            if lit == 0:
                clauses.append(Clause(tuple(current)))
                current = []
                current_vars = set()
                continue
            var = abs(lit)
            if strict and var > declared_vars:
                raise DimacsParseError(
                    f"literal {lit} out of declared range 1..{declared_vars}", lineno
                )
            if var in current_vars:
                raise DimacsParseError(
                    f"variable {var} repeated within a clause", lineno
                )
            current_vars.add(var)
            current.append(Literal(var, lit > 0))
            max_var_seen = max(max_var_seen, var)

    if declared_vars is None:
        raise DimacsParseError("missing 'p cnf' header", max(header_line, 1))
    if current:
        raise DimacsParseError("last clause not terminated by 0", lineno)
    if strict and len(clauses) != declared_clauses:
        raise DimacsParseError(
            f"declared {declared_clauses} clauses but found {len(clauses)}",
            header_line,
        )
    num_vars = declared_vars if strict else max(declared_vars, max_var_seen)
    return Cnf(num_vars, tuple(clauses))


def serialize_dimacs(cnf: Cnf) -> str:
    """Emit exactly one header line plus one line per clause."""
    lines = [f"p cnf {cnf.num_vars} {cnf.num_clauses}"]
    for clause in cnf.clauses:
        parts = [str(lit.to_int()) for lit in clause.literals]
        parts.append("0")
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"
