import pytest

from emltab.closure import bits
from emltab.expansion import CutMode
from emltab.tableau import (
    Phase,
    build_pretableau,
    decide,
    eliminate_prestates,
    eliminate_states,
    new_pretableau,
    prestate_for,
    realization_marking,
    run,
)

from conftest import P, S

EXAMPLE1 = [P("~D{a,c}C{a,b}p"), P("C{a,b}(p & q)")]
CUT_EXAMPLE = [P("~D{a,b}p & ~D{a,c}~D{a}p")]


def labels(t, ids):
    return {t.index.decode(t.states[i]) for i in ids}


def state_by_label(t, fs):
    return t.state_ids[t.index.encode(fs)]


def test_example1_pretableau_shape():
    t = build_pretableau(EXAMPLE1)
    assert len(t.prestates) == 5
    assert len(t.states) == 5
    assert len(t.st(0)) == 3
    pre = {t.index.decode(lab) for lab in t.prestates}
    gamma2 = S("~C{a,b}p", "D{a}C{a,b}(p & q)", "D{a}C{a,b}p")
    gamma3 = S("~C{a,b}p", "D{a}C{a,b}(p & q)", "~D{a}C{a,b}p")
    assert gamma2 in pre and gamma3 in pre
    # the prestate reached from the state holding C{a,b}p has no expansion
    g2 = t.prestate_ids[t.index.encode(gamma2)]
    assert t.st(g2) == []


def test_dr_examples():
    t = new_pretableau(EXAMPLE1)
    ix = t.index
    chi = ix.position[P("~D{a,c}C{a,b}p")]
    delta2 = S(
        "p", "q", "p & q", "~C{a,b}p", "~D{a}C{a,b}p", "~D{a,c}C{a,b}p",
        "C{a,b}(p & q)", "D{a}C{a,b}(p & q)", "D{b}C{a,b}(p & q)",
    )
    got = ix.decode(prestate_for(ix, ix.encode(delta2), chi))
    assert got == S("~C{a,b}p", "D{a}C{a,b}(p & q)", "~D{a}C{a,b}p")


def test_dr_single_diamond():
    t = new_pretableau([P("~D{a}p")])
    ix = t.index
    got = prestate_for(ix, ix.encode(S("~D{a}p")), ix.position[P("~D{a}p")])
    assert ix.decode(got) == S("~p")


def test_sr_atom():
    t = build_pretableau([P("p")])
    assert len(t.prestates) == 1 and len(t.states) == 1
    assert t.st(0) == [0] and not t.solid


def test_cut_example_dead_prestates():
    t = build_pretableau(CUT_EXAMPLE)
    dead = {t.index.decode(t.prestates[i]) for i in range(len(t.prestates)) if not t.st(i)}
    assert S("~p", "D{a}p") in dead
    assert S("~~D{a}p", "~D{a}p") in dead


def test_section_example_pretableau_first_level():
    t = build_pretableau([P("~C{a,b}D{a}p")])
    assert len(t.st(0)) == 4


def test_example1_initial_tableau_edges():
    t = build_pretableau(EXAMPLE1)
    g = eliminate_prestates(t)
    assert g.phase is Phase.INITIAL and len(g.states) == 5
    ix = g.index
    chi_a = ix.position[P("~D{a}C{a,b}p")]
    d4 = state_by_label(t, S(
        "p", "q", "p & q", "~C{a,b}p", "~D{a}C{a,b}p",
        "C{a,b}(p & q)", "D{a}C{a,b}(p & q)", "D{b}C{a,b}(p & q)",
    ))
    d5 = state_by_label(t, S(
        "p", "q", "p & q", "~C{a,b}p", "~D{b}C{a,b}p",
        "C{a,b}(p & q)", "D{a}C{a,b}(p & q)", "D{b}C{a,b}(p & q)",
    ))
    assert sorted(g.successors(d4, chi_a)) == sorted([d4, d5])
    # every edge label is a diamond of its source
    for s, chi, _ in g.edges:
        assert g.states[s] >> chi & 1


def test_example1_elimination():
    r = run(EXAMPLE1)
    assert not r.verdict.satisfiable
    assert r.final.alive == set()
    rules = [x.rule for x in r.final.log]
    assert rules.count("E1") == 1 and rules.count("E2") == 4
    e1 = next(x for x in r.final.log if x.rule == "E1")
    assert P("C{a,b}p") in r.final.label(e1.state)
    assert all(x.eventuality == P("~C{a,b}p") for x in r.final.log if x.rule == "E2")


def test_example1_marking_is_empty():
    g = eliminate_prestates(build_pretableau(EXAMPLE1))
    xi = g.index.position[P("~C{a,b}p")]
    assert realization_marking(g, xi) == set()


def test_marking_along_chain():
    # ~C{a,b}p realized at a state that can reach ~p by an a-step
    g = eliminate_prestates(build_pretableau([P("~C{a,b}p & D{a}q")]))
    xi = g.index.position[P("~C{a,b}p")]
    marked = realization_marking(g, xi)
    notp = g.index.bit(P("~p"))
    assert {s for s in g.alive if g.states[s] & notp} <= marked
    chained = [s for s in marked if not g.states[s] & notp]
    assert chained
    for s in chained:
        assert any(t in marked for _, targets in g.out[s].items() for t in targets)


def test_cut_example_final_graph():
    for mode in (CutMode.RESTRICTED, CutMode.UNRESTRICTED):
        r = run(CUT_EXAMPLE, mode)
        assert not r.verdict.satisfiable
        assert labels(r.final, r.final.alive) == {
            S("~p", "~D{a}p"), S("~p"), S("~~D{a}p", "D{a}p", "p"),
        }
        live = r.final.live_edges()
        src = state_by_label(r.pretableau, S("~p", "~D{a}p"))
        dst = state_by_label(r.pretableau, S("~p"))
        assert [(s, t) for s, _, t in live] == [(src, dst)]


def test_cut_example_without_cuts_is_wrongly_open():
    v = decide(CUT_EXAMPLE, CutMode.NO_CUT)
    assert v.satisfiable and v.diagnostic


def test_decide_atom():
    for mode in CutMode:
        v = decide(P("p"), mode)
        assert v.satisfiable and v.witness_label == S("p")


def test_single_state_survives():
    r = run([P("p")])
    assert r.final.alive == {0} and r.final.log == []


def test_elimination_is_idempotent():
    for theta in (EXAMPLE1, CUT_EXAMPLE, [P("~C{a,b}p & D{a}q")]):
        final = run(theta).final
        again = eliminate_states(final)
        assert again.alive == final.alive
        assert len(again.log) == len(final.log)


def test_final_tableau_saturation():
    r = run([P("~C{a,b}~(p & D{b}q) & ~D{a}p")])
    g = r.final
    assert r.verdict.satisfiable
    for s in g.alive:
        for chi in bits(g.states[s] & g.index.diamond_mask):
            assert g.successors(s, chi)
        for xi in bits(g.states[s] & g.index.eventuality_mask):
            assert s in realization_marking(g, xi)


def test_timeout_raises():
    with pytest.raises(TimeoutError):
        run([P("~C{a,b,c}~(D{a,b}p & ~D{b,c}~C{a,c}q) & ~C{a,b}D{c}~C{b,c}p")], timeout=0)
