"""Acceptance criteria 1-9. Each test records one PASS/FAIL line, printed in
the terminal summary and on stdout (visible with -s)."""
import random
import time
from functools import reduce

import pytest

from emltab.closure import extended_closure
from emltab.expansion import CutMode, cs_expansions, full_expansions
from emltab.formula import And, Kind, agents_of, classify, size, subformulas, to_text
from emltab.gen import GenParams, corpus, fixpoint_family
from emltab.oracle import brute_force_sat
from emltab.semantics import (
    check, extension, hintikka_from_tableau, pseudo_model_from_hintikka, verify_hintikka,
)
from emltab.tableau import run

from conftest import ACCEPTANCE_LINES, P, random_model

CORPUS_PARAMS = GenParams(max_depth=4, agents=("a", "b", "c"), atoms=("p", "q"), seed=2026)
CORPUS_SIZE = 500


def record(n: int, ok: bool, detail: str) -> None:
    line = f"CRITERION {n}: {'PASS' if ok else 'FAIL'} {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


@pytest.fixture(scope="module")
def acceptance_corpus():
    return corpus(CORPUS_PARAMS, CORPUS_SIZE)


@pytest.fixture(scope="module")
def corpus_runs(acceptance_corpus):
    runs = {}
    start = time.perf_counter()
    for mode in (CutMode.RESTRICTED, CutMode.UNRESTRICTED):
        runs[mode] = [run([f], mode) for f in acceptance_corpus]
    return runs, time.perf_counter() - start


def test_criterion_1_example1_replay():
    start = time.perf_counter()
    r = run([P("~D{a,c}C{a,b}p"), P("C{a,b}(p & q)")], CutMode.RESTRICTED)
    elapsed = time.perf_counter() - start
    rules = [x.rule for x in r.final.log]
    facts = {
        "unsat": not r.verdict.satisfiable,
        "initial states == 5": len(r.initial.states) == 5 and len(r.initial.alive) == 5,
        "E1 removals == 1": rules.count("E1") == 1,
        "E2 removals == 4": rules.count("E2") == 4,
        "final empty": not r.final.alive,
        "< 1 s": elapsed < 1.0,
    }
    ok = all(facts.values())
    record(1, ok, f"({elapsed * 1000:.1f} ms) " + ", ".join(k for k, v in facts.items() if not v))
    assert ok, facts


def test_criterion_2_cut_necessity():
    theta = [P("~D{a,b}p & ~D{a,c}~D{a}p")]
    start = time.perf_counter()
    results = {mode: run(theta, mode) for mode in CutMode}
    elapsed = time.perf_counter() - start
    facts = {}
    for mode in (CutMode.RESTRICTED, CutMode.UNRESTRICTED):
        r = results[mode]
        facts[f"{mode.value} unsat"] = not r.verdict.satisfiable
        facts[f"{mode.value} final graph has 3 states"] = len(r.final.alive) == 3
    facts["no-cut sat"] = results[CutMode.NO_CUT].verdict.satisfiable
    facts["< 1 s"] = elapsed < 1.0
    ok = all(facts.values())
    record(2, ok, f"({elapsed * 1000:.1f} ms) " + ", ".join(k for k, v in facts.items() if not v))
    assert ok, facts


def test_criterion_3_cut_restriction_counts():
    gamma = [P("C{a,b}D{a}p -> ~C{b,c}D{b}p")]
    unrestricted = len(cs_expansions(gamma, CutMode.UNRESTRICTED))
    restricted = len(cs_expansions(gamma, CutMode.RESTRICTED))
    ok = unrestricted == 35 and restricted == 8
    record(3, ok, f"unrestricted={unrestricted} (want 35), restricted={restricted} (want 8)")
    assert ok


def test_criterion_4_fixpoint_validity():
    slow, wrong = [], []
    for coalition in ("a", "ab", "abc"):
        for phi in ("p", "p & q", "D{a}p"):
            f = fixpoint_family(coalition, P(phi))
            start = time.perf_counter()
            sat = run([f]).verdict.satisfiable
            elapsed = time.perf_counter() - start
            if sat:
                wrong.append(to_text(f))
            if elapsed >= 1.0:
                slow.append(f"{to_text(f)} ({elapsed:.2f} s)")
    ok = not slow and not wrong
    record(4, ok, f"9 runs, sat={wrong or 0}, slow={slow or 0}")
    assert ok


def test_criterion_5_soundness_oracle(acceptance_corpus, corpus_runs):
    runs, elapsed = corpus_runs
    start = time.perf_counter()
    failures, sat = [], 0
    for f, r in zip(acceptance_corpus, runs[CutMode.RESTRICTED]):
        if not r.verdict.satisfiable:
            continue
        sat += 1
        h = hintikka_from_tableau(r.final, [f])
        rep = verify_hintikka(h)
        m = pseudo_model_from_hintikka(h, CORPUS_PARAMS.agents)
        w = sorted(r.final.alive).index(r.verdict.witness)
        if not rep.ok or not check(m, w, f):
            failures.append(to_text(f))
    total = elapsed + time.perf_counter() - start
    ok = not failures and total < 300
    record(5, ok, f"{sat} sat verdicts checked, {len(failures)} failures, {total:.1f} s")
    assert ok, failures[:5]


def test_criterion_6_brute_force_agreement(acceptance_corpus, corpus_runs):
    runs, _ = corpus_runs
    disagreements, found = [], 0
    for f, r in zip(acceptance_corpus, runs[CutMode.RESTRICTED]):
        if brute_force_sat(f, 3) is None:
            continue
        found += 1
        if not r.verdict.satisfiable:
            disagreements.append(to_text(f))
    ok = not disagreements
    record(6, ok, f"oracle found {found} models, {len(disagreements)} tableau disagreements")
    assert ok, disagreements[:5]


def test_criterion_7_mode_consistency(acceptance_corpus, corpus_runs):
    runs, _ = corpus_runs
    verdicts, counts = [], []
    for f, r, u in zip(acceptance_corpus, runs[CutMode.RESTRICTED], runs[CutMode.UNRESTRICTED]):
        if r.verdict.satisfiable != u.verdict.satisfiable:
            verdicts.append(to_text(f))
        if r.verdict.stats.states > u.verdict.stats.states:
            counts.append(f"{to_text(f)}: {r.verdict.stats.states} > {u.verdict.stats.states}")
    ok = not verdicts and not counts
    record(
        7, ok,
        f"{len(verdicts)} verdict disagreements, {len(counts)} formulas with "
        f"restricted states > unrestricted" + (f" [{'; '.join(counts)}]" if counts else ""),
    )
    assert ok, (verdicts, counts)


def _and(fs):
    return reduce(And, fs[1:], fs[0])


def test_criterion_8_decomposition_and_full_expansions():
    rng = random.Random(8)
    params = GenParams(max_depth=3, agents=("a", "b", "c"), atoms=("p", "q"), seed=88)
    failures = []
    for f in corpus(params, 200):
        m = random_model(rng, rng.randint(1, 4), params.agents, params.atoms)
        for g in subformulas(f) | set(extended_closure(f).formulas):
            c = classify(g)
            if c.kind not in (Kind.ALPHA, Kind.BETA):
                continue
            comps = [extension(m, h) for h in c.components]
            want = reduce(int.__and__ if c.kind is Kind.ALPHA else int.__or__, comps)
            if extension(m, g) != want:
                failures.append(f"decomposition of {to_text(g)}")
        rhs = 0
        for delta in full_expansions([f]):
            rhs |= extension(m, _and(sorted(delta, key=to_text)))
        if extension(m, f) != rhs:
            failures.append(f"FE disjunction of {to_text(f)}")
    ok = not failures
    record(8, ok, f"200 pairs, {len(failures)} failures")
    assert ok, failures[:5]


def test_criterion_9_closure_bound(acceptance_corpus):
    worst, violations = 0.0, []
    for f in acceptance_corpus:
        k = max(1, len(agents_of([f])))
        ecl = len(extended_closure(f))
        worst = max(worst, ecl / (k * size(f)))
        if ecl > 8 * k * size(f):
            violations.append(to_text(f))
    ok = not violations
    record(9, ok, f"{len(violations)} violations, max |ECL|/(k*|theta|) = {worst:.2f}")
    assert ok, violations[:5]
