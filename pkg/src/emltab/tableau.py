"""The tableau procedure: construction, prestate elimination, state elimination.

Construction alternates two rules until nothing new appears:

* SR turns a prestate into its cut-saturated expansions (the *states*),
  linked by dashed edges;
* DR turns each diamond ``~D_A f`` of a state into a successor prestate,
  linked by a solid edge labelled with that diamond.

Prestate elimination then reroutes every solid edge to the states of its
target prestate, and state elimination repeatedly removes states with a
diamond lacking a successor (E1) or an unrealized eventuality (E2).
"""
from __future__ import annotations

import enum
import time
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Iterable

from .closure import ClosureIndex, bits, extended_closure
from .expansion import CutMode, Expander
from .formula import Formula


class Phase(enum.Enum):
    PRETABLEAU = "pretableau"
    INITIAL = "initial"
    FINAL = "final"


@dataclass(frozen=True)
class Removal:
    state: int
    rule: str  # "E1" or "E2"
    eventuality: Formula | None
    cycle: int


@dataclass
class Pretableau:
    index: ClosureIndex
    mode: CutMode
    expander: Expander
    inputs: int
    prestates: list[int] = field(default_factory=list)
    states: list[int] = field(default_factory=list)
    prestate_ids: dict[int, int] = field(default_factory=dict)
    state_ids: dict[int, int] = field(default_factory=dict)
    dashed: dict[int, list[int]] = field(default_factory=dict)  # prestate -> states
    solid: dict[tuple[int, int], int] = field(default_factory=dict)  # (state, chi) -> prestate

    phase = Phase.PRETABLEAU

    def add_prestate(self, label: int) -> tuple[int, bool]:
        pid = self.prestate_ids.get(label)
        if pid is not None:
            return pid, False
        pid = len(self.prestates)
        self.prestates.append(label)
        self.prestate_ids[label] = pid
        return pid, True

    def add_state(self, label: int) -> tuple[int, bool]:
        sid = self.state_ids.get(label)
        if sid is not None:
            return sid, False
        sid = len(self.states)
        self.states.append(label)
        self.state_ids[label] = sid
        return sid, True

    def st(self, prestate: int) -> list[int]:
        return self.dashed.get(prestate, [])


@dataclass
class StateGraph:
    """States and solid edges after prestate elimination.

    ``alive`` holds the states that survived elimination so far; the
    original state list is kept so removed states can still be shown.
    """

    index: ClosureIndex
    mode: CutMode
    inputs: int
    states: list[int]
    edges: list[tuple[int, int, int]]  # (source, chi position, target)
    alive: set[int]
    phase: Phase = Phase.INITIAL
    log: list[Removal] = field(default_factory=list)
    cycles: int = 0

    def __post_init__(self) -> None:
        self.out: dict[int, dict[int, list[int]]] = defaultdict(lambda: defaultdict(list))
        self.into: dict[int, list[tuple[int, int]]] = defaultdict(list)
        for s, chi, t in self.edges:
            self.out[s][chi].append(t)
            self.into[t].append((s, chi))

    def label(self, state: int) -> frozenset[Formula]:
        return self.index.decode(self.states[state])

    def live_edges(self) -> list[tuple[int, int, int]]:
        return [e for e in self.edges if e[0] in self.alive and e[2] in self.alive]

    def successors(self, state: int, chi: int) -> list[int]:
        return [t for t in self.out[state].get(chi, ()) if t in self.alive]

    def eventualities(self) -> list[int]:
        """Positions of eventualities occurring in any state, canonical order."""
        m = 0
        for lab in self.states:
            m |= lab & self.index.eventuality_mask
        return list(bits(m))

    def copy(self) -> "StateGraph":
        return StateGraph(
            self.index, self.mode, self.inputs, list(self.states), list(self.edges),
            set(self.alive), self.phase, list(self.log), self.cycles,
        )


@dataclass(frozen=True)
class Stats:
    prestates: int
    states: int
    first_level_states: int
    eliminated_e1: int
    eliminated_e2: int
    cycles: int
    ecl_size: int

    def as_dict(self) -> dict[str, int]:
        return dict(self.__dict__)


@dataclass(frozen=True)
class Verdict:
    satisfiable: bool
    witness: int | None
    witness_label: frozenset[Formula] | None
    stats: Stats
    mode: CutMode

    @property
    def status(self) -> str:
        return "sat" if self.satisfiable else "unsat"

    @property
    def diagnostic(self) -> bool:
        """True when produced in a mode that is known to be unsound."""
        return self.mode is CutMode.NO_CUT


# ---------------------------------------------------------------------------
# construction


def prestate_for(index: ClosureIndex, label: int, chi: int) -> int:
    """Label of the prestate created by DR for diamond ``chi`` of a state."""
    a = index.coalition[chi]
    out = index.negated_body[chi]
    coal = index.coalition
    for j in bits(label & index.dist_mask):
        if coal[j] <= a:
            out |= 1 << j
    for j in bits(label & index.diamond_mask):
        if j != chi and coal[j] <= a:
            out |= 1 << j
    for j in bits(label & index.eventuality_mask):
        if coal[j] & a:
            out |= 1 << j
    return out


def apply_sr(t: Pretableau, prestate: int) -> list[int]:
    """Expand a prestate; return ids of states created by this step."""
    created = []
    children = []
    for lab in t.expander.cs(t.prestates[prestate]):
        sid, new = t.add_state(lab)
        children.append(sid)
        if new:
            created.append(sid)
    t.dashed[prestate] = children
    return created


def apply_dr(t: Pretableau, state: int, chi: int) -> tuple[int, bool]:
    """Create (or reuse) the ``chi``-successor prestate of a state."""
    lab = prestate_for(t.index, t.states[state], chi)
    pid, new = t.add_prestate(lab)
    t.solid[(state, chi)] = pid
    return pid, new


def new_pretableau(
    theta: Iterable[Formula], mode: CutMode = CutMode.RESTRICTED
) -> Pretableau:
    theta = list(theta)
    index = extended_closure(theta)
    inputs = index.encode(theta)
    return Pretableau(index, mode, Expander(index, mode), inputs)


def build_pretableau(
    theta: Iterable[Formula],
    mode: CutMode = CutMode.RESTRICTED,
    deadline: float | None = None,
) -> Pretableau:
    t = new_pretableau(theta, mode)
    t.expander.deadline = deadline
    root, _ = t.add_prestate(t.inputs)
    prestates = deque([root])
    states: deque[int] = deque()
    while prestates or states:
        while prestates:
            states.extend(apply_sr(t, prestates.popleft()))
        while states:
            t.expander.check_deadline()
            sid = states.popleft()
            for chi in bits(t.states[sid] & t.index.diamond_mask):
                pid, new = apply_dr(t, sid, chi)
                if new:
                    prestates.append(pid)
    return t


# ---------------------------------------------------------------------------
# elimination


def eliminate_prestates(t: Pretableau) -> StateGraph:
    edges = set()
    for (s, chi), pid in t.solid.items():
        for d in t.st(pid):
            edges.add((s, chi, d))
    return StateGraph(
        t.index, t.mode, t.inputs, list(t.states), sorted(edges),
        set(range(len(t.states))),
    )


def realization_marking(g: StateGraph, xi: int) -> set[int]:
    """Live states at which the eventuality at position ``xi`` is realized."""
    ix = g.index
    coalition = ix.coalition[xi]
    target = ix.negated_body[xi]
    xi_bit = 1 << xi
    marked = {s for s in g.alive if g.states[s] & target}
    todo = deque(marked)
    while todo:
        t = todo.popleft()
        for s, chi in g.into[t]:
            if s in marked or s not in g.alive or not g.states[s] & xi_bit:
                continue
            a = ix.coalition[chi]
            if len(a) == 1 and a <= coalition:
                marked.add(s)
                todo.append(s)
    return marked


def _apply_e1(g: StateGraph, cycle: int) -> int:
    removed = 0
    changed = True
    ix = g.index
    while changed:
        changed = False
        for s in sorted(g.alive):
            for chi in bits(g.states[s] & ix.diamond_mask):
                if not g.successors(s, chi):
                    g.alive.discard(s)
                    g.log.append(Removal(s, "E1", None, cycle))
                    removed += 1
                    changed = True
                    break
    return removed


def eliminate_states(initial: StateGraph, deadline: float | None = None) -> StateGraph:
    """Run dovetailed E2/E1 cycles to a fixpoint; returns a new graph."""
    g = initial.copy()
    g.phase = Phase.FINAL
    events = g.eventualities()
    cycle = 0
    while True:
        cycle += 1
        removed = 0
        for xi in events:
            if deadline is not None and time.monotonic() > deadline:
                raise TimeoutError("tableau deadline exceeded")
            marked = realization_marking(g, xi)
            bit = 1 << xi
            batch = sorted(s for s in g.alive if g.states[s] & bit and s not in marked)
            for s in batch:
                g.alive.discard(s)
                g.log.append(Removal(s, "E2", g.index.formulas[xi], cycle))
            removed += len(batch)
            removed += _apply_e1(g, cycle)
        if not events:
            removed += _apply_e1(g, cycle)
        g.cycles = cycle
        if not removed:
            return g


@dataclass
class TableauRun:
    """Every phase of one run, plus the verdict."""

    pretableau: Pretableau
    initial: StateGraph
    final: StateGraph
    verdict: Verdict


def run(
    theta: Iterable[Formula],
    mode: CutMode = CutMode.RESTRICTED,
    timeout: float | None = None,
) -> TableauRun:
    """Run all three phases; ``timeout`` (seconds) raises ``TimeoutError``."""
    deadline = None if timeout is None else time.monotonic() + timeout
    pre = build_pretableau(theta, mode, deadline)
    initial = eliminate_prestates(pre)
    final = eliminate_states(initial, deadline)
    witness = next(
        (s for s in sorted(final.alive) if final.states[s] & pre.inputs == pre.inputs),
        None,
    )
    stats = Stats(
        prestates=len(pre.prestates),
        states=len(pre.states),
        first_level_states=len(pre.st(0)),
        eliminated_e1=sum(r.rule == "E1" for r in final.log),
        eliminated_e2=sum(r.rule == "E2" for r in final.log),
        cycles=final.cycles,
        ecl_size=len(pre.index),
    )
    verdict = Verdict(
        satisfiable=witness is not None,
        witness=witness,
        witness_label=None if witness is None else final.label(witness),
        stats=stats,
        mode=mode,
    )
    return TableauRun(pre, initial, final, verdict)


def decide(theta: Iterable[Formula] | Formula, mode: CutMode = CutMode.RESTRICTED) -> Verdict:
    if isinstance(theta, Formula):
        theta = [theta]
    return run(theta, mode).verdict
