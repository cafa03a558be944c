"""Finite Kripke structures, model checking and Hintikka structures.

Relations are stored as adjacency rows: ``rows[s]`` is an int whose bit
``t`` is set iff ``(s, t)`` is in the relation.  Extensions of formulas are
likewise ints over state indices.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .closure import extended_closure
from .formula import (
    And,
    Atom,
    Coalition,
    Common,
    Dist,
    Formula,
    Kind,
    Not,
    agents_of,
    atoms_of,
    classify,
    sorted_formulas,
)

Rows = tuple[int, ...]


class Flavor(enum.Enum):
    CMAEM = "cmaem"  # coalition relations are intersections of agent relations
    PSEUDO = "pseudo"  # explicit equivalences, larger coalition => smaller relation
    RAW = "raw"  # arbitrary explicit relations


class ModelError(ValueError):
    pass


def _closure_rows(rows: Sequence[int]) -> Rows:
    """Reflexive-transitive closure."""
    out = []
    for s in range(len(rows)):
        seen = 1 << s
        frontier = seen
        while frontier:
            nxt = 0
            f = frontier
            while f:
                low = f & -f
                nxt |= rows[low.bit_length() - 1]
                f ^= low
            frontier = nxt & ~seen
            seen |= nxt
        out.append(seen)
    return tuple(out)


def _equivalence_rows(n: int, pairs_rows: Sequence[int]) -> Rows:
    """Reflexive, symmetric, transitive closure of a relation."""
    sym = list(pairs_rows)
    for s in range(n):
        r = pairs_rows[s]
        t = 0
        while r:
            if r & 1:
                sym[t] |= 1 << s
            r >>= 1
            t += 1
    return _closure_rows(sym)


def partition_rows(n: int, blocks: Iterable[Iterable[int]]) -> Rows:
    rows = [0] * n
    for block in blocks:
        m = 0
        for s in block:
            m |= 1 << s
        for s in block:
            rows[s] = m
    return tuple(r or (1 << s) for s, r in enumerate(rows))


def rows_blocks(rows: Rows) -> list[list[int]]:
    """Equivalence classes of an equivalence relation given as rows."""
    seen = 0
    out = []
    for s, r in enumerate(rows):
        if seen >> s & 1:
            continue
        out.append([t for t in range(len(rows)) if r >> t & 1])
        seen |= r
    return out


@dataclass(frozen=True)
class KripkeStructure:
    states: tuple[str, ...]
    agents: tuple[str, ...]
    relations: Mapping[Coalition, Rows]
    valuation: tuple[frozenset[str], ...]
    flavor: Flavor = Flavor.CMAEM
    atoms: frozenset[str] = frozenset()
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        n = len(self.states)
        if len(self.valuation) != n:
            raise ModelError("valuation must list every state")
        for c, rows in self.relations.items():
            if len(rows) != n:
                raise ModelError(f"relation for {c!r} has the wrong size")
        vocab = frozenset(self.atoms).union(*self.valuation) if n else frozenset(self.atoms)
        object.__setattr__(self, "atoms", vocab)

    @property
    def size(self) -> int:
        return len(self.states)

    def state_index(self, name: str) -> int:
        try:
            return self.states.index(name)
        except ValueError:
            raise ModelError(f"unknown state {name!r}") from None

    def rel(self, coalition: Iterable[str]) -> Rows:
        """The relation R^D_A."""
        a = Coalition(coalition)
        key = ("D", a)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if self.flavor is Flavor.CMAEM:
            missing = a - set(self.agents)
            if missing:
                raise ModelError(f"unknown agent(s) {sorted(missing)}")
            n = self.size
            rows = [(1 << n) - 1] * n
            for ag in a:
                r = self.relations[Coalition.of(ag)]
                rows = [x & y for x, y in zip(rows, r)]
            out: Rows = tuple(rows)
        else:
            if not a <= set(self.agents):
                raise ModelError(f"unknown agent(s) {sorted(a - set(self.agents))}")
            out = tuple(self.relations.get(a, (0,) * self.size))
        self._cache[key] = out
        return out

    def common_rel(self, coalition: Iterable[str]) -> Rows:
        """The relation R^C_A: reflexive-transitive closure of all R^D_B, B within A."""
        a = Coalition(coalition)
        key = ("C", a)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        n = self.size
        union = [0] * n
        if self.flavor is Flavor.CMAEM:
            sources = [self.rel([ag]) for ag in a.members]
        else:
            self.rel(a)  # validates agents
            sources = [r for b, r in self.relations.items() if b <= a]
        for r in sources:
            union = [x | y for x, y in zip(union, r)]
        out = _closure_rows(union)
        self._cache[key] = out
        return out

    def all_states(self) -> int:
        return (1 << self.size) - 1


# ---------------------------------------------------------------------------
# model checking


def extension(m: KripkeStructure, f: Formula, memo: dict | None = None) -> int:
    """Bitmask of the states of ``m`` where ``f`` holds."""
    if memo is None:
        memo = {}
    hit = memo.get(f)
    if hit is not None:
        return hit
    if isinstance(f, Atom):
        if f.name not in m.atoms:
            raise ModelError(f"unknown atom {f.name!r}")
        out = 0
        for s, val in enumerate(m.valuation):
            if f.name in val:
                out |= 1 << s
    elif isinstance(f, Not):
        out = m.all_states() & ~extension(m, f.sub, memo)
    elif isinstance(f, And):
        out = extension(m, f.left, memo) & extension(m, f.right, memo)
    else:
        assert isinstance(f, (Dist, Common))
        rows = m.rel(f.coalition) if isinstance(f, Dist) else m.common_rel(f.coalition)
        body = extension(m, f.sub, memo)
        out = 0
        for s, r in enumerate(rows):
            if not r & ~body:
                out |= 1 << s
    memo[f] = out
    return out


def check(m: KripkeStructure, state: int | str, f: Formula) -> bool:
    s = m.state_index(state) if isinstance(state, str) else state
    return bool(extension(m, f) >> s & 1)


def a_reachable(m: KripkeStructure, state: int | str, coalition: Iterable[str]) -> set[int]:
    """States reachable from ``state`` by steps of single agents in the coalition."""
    s = m.state_index(state) if isinstance(state, str) else state
    rels = [m.rel([a]) for a in Coalition(coalition).members]
    seen = {s}
    todo = [s]
    while todo:
        u = todo.pop()
        for rows in rels:
            r = rows[u]
            t = 0
            while r:
                if r & 1 and t not in seen:
                    seen.add(t)
                    todo.append(t)
                r >>= 1
                t += 1
    return seen


# ---------------------------------------------------------------------------
# construction helpers


def cmaem(
    states: Sequence[str],
    partitions: Mapping[str, Iterable[Iterable[str]]],
    valuation: Mapping[str, Iterable[str]],
    atoms: Iterable[str] = (),
) -> KripkeStructure:
    """Build a proper model from per-agent partitions given by state names."""
    states = tuple(states)
    pos = {s: i for i, s in enumerate(states)}
    rels = {}
    for agent, blocks in partitions.items():
        idx_blocks = []
        seen: set[int] = set()
        for block in blocks:
            ids = [pos[s] if s in pos else _unknown_state(s) for s in block]
            if seen & set(ids):
                raise ModelError(f"agent {agent}: state listed twice")
            seen.update(ids)
            idx_blocks.append(ids)
        rels[Coalition.of(agent)] = partition_rows(len(states), idx_blocks)
    val = tuple(frozenset(valuation.get(s, ())) for s in states)
    return KripkeStructure(
        states, tuple(sorted(partitions)), rels, val, Flavor.CMAEM, frozenset(atoms)
    )


def _unknown_state(name: str) -> int:
    raise ModelError(f"unknown state {name!r}")


def is_equivalence(rows: Rows) -> bool:
    n = len(rows)
    for s in range(n):
        if not rows[s] >> s & 1:
            return False
        for t in range(n):
            if rows[s] >> t & 1:
                if not rows[t] >> s & 1 or rows[t] & ~rows[s]:
                    return False
    return True


def satisfies_monotonicity(m: KripkeStructure) -> bool:
    """Whether B within A implies R^D_A within R^D_B, over all stored coalitions."""
    coals = list(m.relations)
    for a in coals:
        ra = m.rel(a)
        for b in coals:
            if b <= a:
                rb = m.rel(b)
                if any(x & ~y for x, y in zip(ra, rb)):
                    return False
    return True


def nonempty_subsets(agents: Iterable[str]) -> list[Coalition]:
    agents = sorted(agents)
    return [
        Coalition(c) for k in range(1, len(agents) + 1) for c in combinations(agents, k)
    ]


# ---------------------------------------------------------------------------
# Hintikka structures


@dataclass(frozen=True)
class HintikkaStructure:
    frame: KripkeStructure  # RAW flavor; valuation taken from the labels
    labels: tuple[frozenset[Formula], ...]

    @property
    def size(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class HintikkaReport:
    failures: Mapping[str, str]  # condition -> first counterexample

    @property
    def ok(self) -> bool:
        return not self.failures

    def passed(self, condition: str) -> bool:
        return condition not in self.failures


def make_hintikka(
    states: Sequence[str],
    agents: Iterable[str],
    edges: Iterable[tuple[int, Coalition, int]],
    labels: Sequence[Iterable[Formula]],
) -> HintikkaStructure:
    n = len(states)
    rel: dict[Coalition, list[int]] = {}
    for s, c, t in edges:
        rel.setdefault(Coalition(c), [0] * n)[s] |= 1 << t
    labels = tuple(frozenset(l) for l in labels)
    val = tuple(frozenset(f.name for f in l if isinstance(f, Atom)) for l in labels)
    frame = KripkeStructure(
        tuple(states),
        tuple(sorted(set(agents))),
        {c: tuple(r) for c, r in rel.items()},
        val,
        Flavor.RAW,
        frozenset(atoms_of(f for l in labels for f in l)),
    )
    return HintikkaStructure(frame, labels)


def hintikka_from_tableau(final, theta: Iterable[Formula] = ()) -> HintikkaStructure:
    """Hintikka structure on the surviving states of a final tableau."""
    alive = sorted(final.alive)
    if not any(final.states[s] & final.inputs == final.inputs for s in alive):
        raise ModelError("tableau is closed")
    renum = {s: i for i, s in enumerate(alive)}
    ix = final.index
    edges = [
        (renum[s], ix.coalition[chi], renum[t]) for s, chi, t in final.live_edges()
    ]
    labels = [final.label(s) for s in alive]
    agents = agents_of(ix.formulas) | agents_of(theta)
    return make_hintikka([f"s{i}" for i in range(len(alive))], agents, edges, labels)


def verify_hintikka(h: HintikkaStructure) -> HintikkaReport:
    m = h.frame
    labels = h.labels
    fails: dict[str, str] = {}

    def fail(cond: str, msg: str) -> None:
        fails.setdefault(cond, msg)

    for s, lab in enumerate(labels):
        for f in lab:
            if isinstance(f, Not) and f.sub in lab:
                fail("CH1", f"{m.states[s]} holds both {f.sub} and {f}")
            c = classify(f)
            if c.kind is Kind.ALPHA and not set(c.components) <= lab:
                fail("CH1", f"{m.states[s]}: alpha {f} lacks components")
            if c.kind is Kind.BETA and not set(c.components) & lab:
                fail("CH1", f"{m.states[s]}: beta {f} has no component")
            if c.kind is Kind.DIAMOND:
                r = m.rel(c.coalition)[s]
                goal = Not(c.body)
                if not any(r >> t & 1 and goal in labels[t] for t in range(h.size)):
                    fail("CH2", f"{m.states[s]}: {f} has no successor with {goal}")
            if c.is_eventuality:
                r = m.common_rel(c.coalition)[s]
                goal = Not(c.body)
                if not any(r >> t & 1 and goal in labels[t] for t in range(h.size)):
                    fail("CH4", f"{m.states[s]}: {f} is never realized")
    for a, rows in m.relations.items():
        for s in range(h.size):
            for t in range(h.size):
                if not rows[s] >> t & 1:
                    continue
                ds = {f for f in labels[s] if isinstance(f, Dist) and f.coalition <= a}
                dt = {f for f in labels[t] if isinstance(f, Dist) and f.coalition <= a}
                if ds != dt:
                    diff = sorted_formulas(ds ^ dt)[0]
                    fail(
                        "CH3",
                        f"{diff} differs between {m.states[s]} and {m.states[t]} "
                        f"along {a!r}",
                    )
    return HintikkaReport(fails)


def pseudo_model_from_hintikka(
    h: HintikkaStructure, agents: Iterable[str] | None = None
) -> KripkeStructure:
    """Pseudo-model whose coalition relations are equivalence closures of the
    union of all Hintikka relations for superset coalitions."""
    m = h.frame
    sigma = sorted(set(agents) if agents is not None else set(m.agents))
    n = h.size
    rels = {}
    for a in nonempty_subsets(sigma):
        union = [0] * n
        for b, rows in m.relations.items():
            if a <= b:
                union = [x | y for x, y in zip(union, rows)]
        rels[a] = _equivalence_rows(n, union)
    return KripkeStructure(
        m.states, tuple(sigma), rels, m.valuation, Flavor.PSEUDO, m.atoms
    )


def hintikka_from_model(m: KripkeStructure, theta: Formula | Iterable[Formula]) -> HintikkaStructure:
    """Label each state with the extended-closure members true there."""
    ix = extended_closure(theta)
    memo: dict = {}
    labels = []
    for s in range(m.size):
        labels.append([f for f in ix.formulas if extension(m, f, memo) >> s & 1])
    agents = set(m.agents)
    edges = []
    for a in nonempty_subsets(agents):
        rows = m.rel(a)
        for s in range(m.size):
            for t in range(m.size):
                if rows[s] >> t & 1:
                    edges.append((s, a, t))
    return make_hintikka(list(m.states), agents, edges, labels)


# ---------------------------------------------------------------------------
# model files

_BLOCK = re.compile(r"\{([^{}]*)\}")


def parse_model(text: str) -> KripkeStructure:
    """Read the line-oriented model format (see :func:`format_model`)."""
    states: list[str] | None = None
    atoms: set[str] = set()
    agent_blocks: dict[str, list[list[str]]] = {}
    coalition_blocks: dict[Coalition, list[list[str]]] = {}
    val: dict[str, list[str]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        if not sep:
            raise ModelError(f"line {lineno}: expected 'keyword: ...'")
        words = head.split()
        key = words[0]
        try:
            if key == "states" and len(words) == 1:
                states = rest.split()
            elif key == "atoms" and len(words) == 1:
                atoms.update(rest.split())
            elif key == "agent" and len(words) == 2:
                agent_blocks[words[1]] = _blocks(rest)
            elif key == "coalition" and len(words) == 2:
                coalition_blocks[Coalition(words[1].split(","))] = _blocks(rest)
            elif key == "val" and len(words) == 2:
                val[words[1]] = rest.split()
            else:
                raise ModelError("unknown declaration")
        except ModelError as e:
            raise ModelError(f"line {lineno}: {e}") from None
    if states is None:
        raise ModelError("missing 'states:' line")
    if len(set(states)) != len(states):
        raise ModelError("duplicate state names")
    for s in val:
        if s not in states:
            raise ModelError(f"val for unknown state {s!r}")
    if not coalition_blocks:
        return cmaem(states, agent_blocks, val, atoms)
    pos = {s: i for i, s in enumerate(states)}
    rels = {}
    for a, blocks in agent_blocks.items():
        coalition_blocks.setdefault(Coalition.of(a), blocks)
    for c, blocks in coalition_blocks.items():
        ids = [[pos[s] if s in pos else _unknown_state(s) for s in b] for b in blocks]
        rels[c] = partition_rows(len(states), ids)
    agents = tuple(sorted(set().union(*coalition_blocks)))
    valuation = tuple(frozenset(val.get(s, ())) for s in states)
    return KripkeStructure(tuple(states), agents, rels, valuation, Flavor.PSEUDO, frozenset(atoms))


def _blocks(text: str) -> list[list[str]]:
    blocks = [b.split() for b in _BLOCK.findall(text)]
    if _BLOCK.sub("", text).strip():
        raise ModelError("partition must be a list of {...} blocks")
    return blocks


def format_model(m: KripkeStructure) -> str:
    lines = ["states: " + " ".join(m.states)]
    if m.atoms:
        lines.append("atoms: " + " ".join(sorted(m.atoms)))

    def blocks(rows: Rows) -> str:
        return " ".join(
            "{" + " ".join(m.states[s] for s in b) + "}" for b in rows_blocks(rows)
        )

    if m.flavor is Flavor.CMAEM:
        for a in m.agents:
            lines.append(f"agent {a}: {blocks(m.rel([a]))}")
    else:
        for c in sorted(m.relations, key=lambda c: (len(c), c.members)):
            rows = m.relations[c]
            if not is_equivalence(rows):
                raise ModelError("only equivalence relations can be written")
            if len(c) == 1:
                lines.append(f"agent {c.text()}: {blocks(rows)}")
            else:
                lines.append(f"coalition {c.text()}: {blocks(rows)}")
    for s, v in zip(m.states, m.valuation):
        if v:
            lines.append(f"val {s}: " + " ".join(sorted(v)))
    return "\n".join(lines) + "\n"
