import numpy as np
import pytest

from satforge import (
    Bernoulli,
    Clause,
    Cnf,
    Label,
    UniformIndex,
    UniformNonZeroBias,
    evaluate,
    to_dense,
)
from satforge.errors import ConfigError
from satforge.rng import RngState
from satforge.satgen import (
    SatGenConfig,
    _clause_for,
    biased_sat_cover,
    generate_sat,
    random_cnf,
    sat_cover,
)


def incidence(cnf: Cnf) -> np.ndarray:
    return to_dense(cnf).cells != 0


class TestGenerateSat:
    def test_fully_degenerate_case(self):
        cfg = SatGenConfig(
            1, 1, lits_clause=UniformIndex(1, 1), polarities=Bernoulli(1.0)
        )
        prob = generate_sat(cfg, RngState(0, 0))
        assert prob.label is Label.SAT
        assert prob.witness == (True,)
        assert prob.cnf.to_int_clauses() == [[1]]

    def test_clause_construction_trace(self):
        # one clause over x1, x2 against witness (1, 1) with bias [1, 0]:
        # position 1 agrees (x1), position 2 disagrees (not x2)
        clause = _clause_for([1, 2], [1, 0], (True, True))
        assert clause.to_ints() == (1, -2)

    def test_shape(self):
        prob = generate_sat(SatGenConfig(12, 40), RngState(1, 0))
        assert prob.cnf.num_vars == 12
        assert prob.cnf.num_clauses == 40

    def test_witness_always_satisfies(self):
        rng = RngState(2, 0)
        for trial in range(2000):
            n = int(rng.gen.integers(1, 16))
            m = max(1, round(4.27 * n))
            prob = generate_sat(SatGenConfig(n, m), rng)
            assert evaluate(prob.cnf, prob.witness)

    def test_rejects_empty_shapes(self):
        with pytest.raises(ConfigError):
            SatGenConfig(0, 5)
        with pytest.raises(ConfigError):
            SatGenConfig(5, 0)


class TestRandomCnf:
    def test_shape_and_ranges(self):
        rng = RngState(3, 0)
        f = random_cnf(9, 33, UniformIndex(), UniformIndex(1, 4), Bernoulli(0.5), rng)
        assert f.num_vars == 9
        assert f.num_clauses == 33
        assert all(1 <= len(c) <= 4 for c in f.clauses)


def _random_inputs(count, max_vars, seed, min_width=1):
    rng = RngState(seed, 0)
    out = []
    for _ in range(count):
        n = int(rng.gen.integers(1, max_vars + 1))
        m = int(rng.gen.integers(1, 3 * n + 1))
        f = random_cnf(
            n, m, UniformIndex(), UniformIndex(min_width, max(min_width, 3)),
            Bernoulli(0.5), rng,
        )
        alpha = tuple(bool(b) for b in rng.gen.integers(0, 2, size=n))
        out.append((f, alpha, rng))
    return out


class TestSatCover:
    def test_unit_clause_is_forced(self):
        f = Cnf.from_int_clauses(1, [[-1]])
        covered = sat_cover(f, (True,), UniformNonZeroBias(), RngState(4, 0))
        assert covered.to_int_clauses() == [[1]]

    def test_empty_clause_rejected(self):
        f = Cnf(2, (Clause(()),))
        with pytest.raises(ValueError):
            sat_cover(f, (True, True), UniformNonZeroBias(), RngState(4, 1))

    def test_incidence_preserved_and_satisfied(self):
        for f, alpha, rng in _random_inputs(1000, 15, 5):
            covered = sat_cover(f, alpha, UniformNonZeroBias(), rng)
            assert np.array_equal(incidence(covered), incidence(f))
            assert evaluate(covered, alpha)


def _clause_change_analysis(before, after, alpha):
    """Classify one clause's transformation under the biased cover with flip.

    Returns (delta_positive, kind) where kind is 'none', 'unit', 'balanced',
    or 'unbalanced-corner'; asserts structural expectations along the way.
    """
    b, a = before.literals, after.literals
    changed = [j for j in range(len(b)) if b[j].positive != a[j].positive]
    delta = sum(
        (1 if a[j].positive else -1) - (1 if b[j].positive else -1) for j in changed
    )
    if not changed:
        return 0, "none"
    if len(changed) == 1:
        assert len(b) == 1, "lone flip without compensation must be a unit clause"
        return delta, "unit"
    assert len(changed) == 2, "at most the chosen literal and one companion change"
    if delta == 0:
        return 0, "balanced"
    # Unbalanced pairs may only happen when no companion with the repaired
    # literal's sign existed: every other input literal shares the chosen
    # literal's original sign.
    corner_possible = False
    for c in changed:
        if not a[c].agrees(alpha):
            continue  # the chosen literal agrees after repair
        others = [j for j in range(len(b)) if j != c]
        if all(b[j].positive == b[c].positive for j in others):
            corner_possible = True
    assert corner_possible, "unbalanced compensation despite a valid companion"
    return delta, "unbalanced-corner"


class TestBiasedSatCover:
    def test_already_agreeing_clause_untouched(self):
        f = Cnf.from_int_clauses(2, [[1, 2]])
        out = biased_sat_cover(f, (True, True), False, RngState(6, 0))
        assert out.to_int_clauses() == [[1, 2]]

    def test_forced_flip_pair(self):
        # (not x1 or x2) under alpha=(1, 0): whichever literal is chosen
        # disagrees, gets repaired, and the other is the only companion.
        f = Cnf.from_int_clauses(2, [[-1, 2]])
        out = biased_sat_cover(f, (True, False), True, RngState(6, 1))
        assert sorted(out.to_int_clauses()[0]) in ([-2, 1], [-1, 2])
        # positive literal count preserved at 1 either way
        assert sum(1 for lit in out.clauses[0].literals if lit.positive) == 1

    def test_incidence_and_satisfaction(self):
        for flip in (False, True):
            for f, alpha, rng in _random_inputs(500, 15, 7 + flip):
                out = biased_sat_cover(f, alpha, flip, rng)
                assert np.array_equal(incidence(out), incidence(f))
                assert evaluate(out, alpha)

    def test_flip_preserves_positive_counts_outside_corners(self):
        checked_formulas = 0
        balanced_formulas = 0
        for f, alpha, rng in _random_inputs(1000, 15, 8):
            out = biased_sat_cover(f, alpha, True, rng)
            kinds = set()
            total_delta = 0
            for before, after in zip(f.clauses, out.clauses):
                delta, kind = _clause_change_analysis(before, after, alpha)
                kinds.add(kind)
                total_delta += delta
            checked_formulas += 1
            if kinds <= {"none", "balanced"}:
                balanced_formulas += 1
                assert total_delta == 0
        assert checked_formulas == 1000
        assert balanced_formulas > 100  # the clean case must actually occur

    def test_without_flip_changes_at_most_one_literal_per_clause(self):
        for f, alpha, rng in _random_inputs(300, 10, 9):
            out = biased_sat_cover(f, alpha, False, rng)
            for before, after in zip(f.clauses, out.clauses):
                changed = [
                    j
                    for j in range(len(before))
                    if before.literals[j].positive != after.literals[j].positive
                ]
                assert len(changed) <= 1
