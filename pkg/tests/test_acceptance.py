"""Full-scale acceptance suite.

Each test covers one release criterion at its stated sample size and
tolerance and prints one PASS/FAIL line (run with ``pytest -s`` to watch).
The whole module takes a few minutes on a desktop CPU.
"""

import itertools

import pytest

from satforge import (
    Bernoulli,
    Cnf,
    Label,
    UniformIndex,
    UniformNonZeroBias,
    evaluate,
    parse_dimacs,
    serialize_dimacs,
    to_dense,
)
from satforge.cli import main as cli_main
from satforge.dist import ClauseRatioSpec, sample_clause_count
from satforge.mix import default_mix, sample_problem
from satforge.oracle import brute_force_sat, check_implication, extract_assignment
from satforge.pipeline import benchmark_throughput
from satforge.rng import RngState
from satforge.satgen import SatGenConfig, generate_sat, random_cnf
from satforge.unsatgen import UnsatGenConfig, generate_unsat, res_search, unsat_with_sat_tail

RATIO = ClauseRatioSpec(4.27, 1.0, 2.0, 11.0)


def report(name: str, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {name}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"{name}: {detail}"


def test_sat_soundness():
    """10,000 generated-SAT instances, n in [4, 20]: witness evaluation and
    exhaustive-scan agreement must both hold for every single one."""
    rng = RngState(0xACCE97, 0)
    failures = 0
    for _ in range(10_000):
        n = int(rng.gen.integers(4, 21))
        m = sample_clause_count(RATIO, n, rng)
        prob = generate_sat(SatGenConfig(n, m), rng)
        if not evaluate(prob.cnf, prob.witness):
            failures += 1
        elif not brute_force_sat(prob.cnf).satisfiable:
            failures += 1
    report("sat-soundness", failures == 0, f"{failures} failures in 10000")


def test_unsat_soundness():
    """2,000 bloomed + 500 sat-tail instances, n in [4, 20]: all must be
    unsatisfiable under the exhaustive scan."""
    rng = RngState(0xACCE97, 1)
    failures = 0
    for trial in range(2_000):
        n = int(rng.gen.integers(4, 21))
        m = sample_clause_count(RATIO, n, rng)
        deep = trial % 4 == 3
        cfg = UnsatGenConfig(
            n,
            m,
            init_size=int(rng.gen.integers(1, min(4, m // 2) + 1)),
            depth=None if deep else 3,
            down_clause=Bernoulli(1.0 if deep else 0.5),
            record_trace=False,
        )
        prob = generate_unsat(cfg, rng)
        if brute_force_sat(prob.cnf).satisfiable:
            failures += 1
    for _ in range(500):
        n = int(rng.gen.integers(4, 21))
        m = sample_clause_count(RATIO, n, rng)
        cfg = UnsatGenConfig(n, m, init_size=2, depth=3, record_trace=False)
        prob = unsat_with_sat_tail(cfg, SatGenConfig(n, m), rng)
        if brute_force_sat(prob.cnf).satisfiable:
            failures += 1
    report("unsat-soundness", failures == 0, f"{failures} failures in 2500")


def test_resolution_inversion():
    """1,000 backward-resolution steps, v <= 10: each child pair must imply
    its parent clause under a full truth-table scan."""
    rng = RngState(0xACCE97, 2)
    pairs = 0
    failures = 0
    for _ in range(1_000):
        n = int(rng.gen.integers(2, 11))
        m = int(rng.gen.integers(1, 7))
        prob = random_cnf(
            n, m, UniformIndex(), UniformIndex(1, n - 1), Bernoulli(0.5), rng
        )
        out = res_search(prob, UniformIndex(), default_mix().base.bloom, rng)
        for i, parent in enumerate(prob.clauses):
            pair = Cnf(n, (out.clauses[2 * i], out.clauses[2 * i + 1]))
            pairs += 1
            if not check_implication(pair, Cnf(n, (parent,))):
                failures += 1
    report(
        "resolution-inversion",
        failures == 0,
        f"{failures} of {pairs} child pairs failed to imply their parent",
    )


def _enumerate_two_clause_formulas():
    """All ordered pairs of 2-clauses over 3 variables, keyed by their dense
    encoding, split into satisfiable and unsatisfiable by exhaustive scan."""
    clauses = []
    for a, b in itertools.combinations((1, 2, 3), 2):
        for sa in (1, -1):
            for sb in (1, -1):
                clauses.append((a * sa, b * sb))
    sat_keys = set()
    unsat_keys = set()
    for c1 in clauses:
        for c2 in clauses:
            f = Cnf.from_int_clauses(3, [c1, c2])
            key = to_dense(f).cells.tobytes()
            if brute_force_sat(f).satisfiable:
                sat_keys.add(key)
            else:
                unsat_keys.add(key)
    return sat_keys, unsat_keys


def test_tiny_scale_support_equality():
    """Uniform everything at v=3, m=2, k=2: 200k samples must hit exactly the
    enumerated satisfiable formulas -- all of them, and nothing else."""
    sat_keys, unsat_keys = _enumerate_two_clause_formulas()
    cfg = SatGenConfig(
        3,
        2,
        vars=UniformIndex(),
        lits_clause=UniformIndex(2, 2),
        polarities=Bernoulli(0.5),
        polarity_bias=UniformNonZeroBias(),
    )
    rng = RngState(0xACCE97, 3)
    generated = set()
    for _ in range(200_000):
        prob = generate_sat(cfg, rng)
        generated.add(to_dense(prob.cnf).cells.tobytes())
    missed = sat_keys - generated
    extra = generated - sat_keys
    hit_unsat = generated & unsat_keys
    report(
        "tiny-scale-support",
        not missed and not extra and not hit_unsat,
        f"support {len(generated)}/{len(sat_keys)}, "
        f"missed={len(missed)}, outside={len(extra)}, unsat-hits={len(hit_unsat)}",
    )


def test_determinism_of_packed_mix(tmp_path):
    """gen-mix twice with one seed: byte-identical packed output."""
    f1 = tmp_path / "run1.satf"
    f2 = tmp_path / "run2.satf"
    argv = ["gen-mix", "--count", "1000", "--seed", "20260808"]
    assert cli_main(argv + ["--out", str(f1)]) == 0
    assert cli_main(argv + ["--out", str(f2)]) == 0
    same = f1.read_bytes() == f2.read_bytes()
    manifests_same = (
        tmp_path / "run1.satf.manifest.json"
    ).read_bytes() == (tmp_path / "run2.satf.manifest.json").read_bytes()
    report(
        "determinism",
        same and manifests_same,
        f"packed identical={same}, manifests identical={manifests_same}",
    )


def test_dimacs_round_trip():
    """1,000 mixed generated formulas: parse(serialize(F)) == F exactly."""
    mix = default_mix()
    failures = 0
    for i in range(1_000):
        f = sample_problem(mix, RngState(0xACCE97 + 4, i)).cnf
        if parse_dimacs(serialize_dimacs(f)) != f:
            failures += 1
    report("dimacs-round-trip", failures == 0, f"{failures} failures in 1000")


def test_oracle_self_reduction():
    """200 SAT instances, v <= 15: the extracted assignment satisfies the
    formula and consumes exactly v oracle calls."""
    rng = RngState(0xACCE97, 5)
    failures = 0
    for _ in range(200):
        n = int(rng.gen.integers(4, 16))
        m = sample_clause_count(RATIO, n, rng)
        prob = generate_sat(SatGenConfig(n, m), rng)
        calls = 0

        def oracle(f: Cnf) -> bool:
            nonlocal calls
            calls += 1
            return brute_force_sat(f).satisfiable

        alpha = extract_assignment(prob.cnf, oracle)
        if calls != n or not evaluate(prob.cnf, alpha):
            failures += 1
    report("oracle-self-reduction", failures == 0, f"{failures} failures in 200")


def test_throughput_benchmark():
    """The bench path must complete at both reference shapes, beat 100
    problems/sec at the small one, and record the scaling factor."""
    mix = default_mix(max_vars=1500)
    small = benchmark_throughput(mix, 15, 64, duration=2.0)
    large = benchmark_throughput(mix, 1500, 16_500, duration=6.0)
    slowdown = (
        small.problems_per_sec / large.problems_per_sec
        if large.problems_per_sec > 0
        else float("inf")
    )
    ok = (
        small.problems > 0
        and large.problems > 0
        and small.problems_per_sec > 100.0
    )
    report(
        "throughput-benchmark",
        ok,
        f"n=15: {small.problems_per_sec:.0f} p/s, "
        f"n=1500: {large.problems_per_sec:.2f} p/s "
        f"({large.cells_per_sec / 1e6:.0f}M cells/s), "
        f"slowdown x{slowdown:.1f} "
        f"(reference GPU rows: 530 and 128 p/s, not this hardware)",
    )
