import pytest
from hypothesis import given, settings, strategies as st

from satforge import Clause, Cnf, DimacsParseError, parse_dimacs, serialize_dimacs
from satforge.rng import RngState
from satforge.satgen import SatGenConfig, generate_sat


def test_parse_basic():
    f = parse_dimacs("p cnf 2 1\n1 -2 0\n")
    assert f.num_vars == 2
    assert f.to_int_clauses() == [[1, -2]]


def test_serialize_zero_clause_formula():
    assert serialize_dimacs(Cnf(3, ())) == "p cnf 3 0\n"


def test_comments_and_blank_lines():
    text = "c a comment\n\nc another\np cnf 3 2\n1 2 3 0\nc inline\n-1 -3 0\n"
    f = parse_dimacs(text)
    assert f.to_int_clauses() == [[1, 2, 3], [-1, -3]]


def test_clause_spanning_lines_and_sharing_one():
    f = parse_dimacs("p cnf 3 3\n1 2\n3 0 -1 0\n2 -3 0\n")
    assert f.to_int_clauses() == [[1, 2, 3], [-1], [2, -3]]


def test_empty_clause_round_trips():
    f = Cnf(2, (Clause.from_ints([1]), Clause(())))
    assert parse_dimacs(serialize_dimacs(f)) == f


def test_missing_header():
    with pytest.raises(DimacsParseError):
        parse_dimacs("1 -2 0\n")
    with pytest.raises(DimacsParseError):
        parse_dimacs("")


def test_literal_out_of_declared_range():
    with pytest.raises(DimacsParseError) as err:
        parse_dimacs("p cnf 2 1\n1 -3 0\n")
    assert err.value.line == 2


def test_clause_count_mismatch_strict_vs_lenient():
    text = "p cnf 2 3\n1 0\n-2 0\n"
    with pytest.raises(DimacsParseError):
        parse_dimacs(text)
    f = parse_dimacs(text, strict=False)
    assert f.num_clauses == 2


def test_lenient_grows_num_vars():
    f = parse_dimacs("p cnf 2 1\n1 -4 0\n", strict=False)
    assert f.num_vars == 4


def test_unterminated_clause():
    with pytest.raises(DimacsParseError):
        parse_dimacs("p cnf 2 1\n1 -2\n")


def test_repeated_variable_in_clause():
    with pytest.raises(DimacsParseError):
        parse_dimacs("p cnf 2 1\n1 -1 0\n")


def test_round_trip_generated_formulas():
    rng = RngState(55, 0)
    for _ in range(1000):
        n = int(rng.gen.integers(1, 21))
        m = int(rng.gen.integers(1, 2 * n + 1))
        f = generate_sat(SatGenConfig(n, m), rng).cnf
        assert parse_dimacs(serialize_dimacs(f)) == f


@st.composite
def cnf_values(draw):
    num_vars = draw(st.integers(min_value=0, max_value=8))
    clauses = []
    for _ in range(draw(st.integers(min_value=0, max_value=6))):
        if num_vars == 0:
            clauses.append([])
            continue
        width = draw(st.integers(min_value=0, max_value=num_vars))
        variables = draw(
            st.lists(
                st.integers(min_value=1, max_value=num_vars),
                min_size=width,
                max_size=width,
                unique=True,
            )
        )
        signs = draw(
            st.lists(st.booleans(), min_size=width, max_size=width)
        )
        clauses.append([v if s else -v for v, s in zip(variables, signs)])
    return Cnf.from_int_clauses(num_vars, clauses)


@given(cnf_values())
@settings(max_examples=200, deadline=None)
def test_round_trip_is_exact_identity(f):
    assert parse_dimacs(serialize_dimacs(f)) == f
