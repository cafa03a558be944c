"""Seeded random formulas and named formula families."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .formula import (
    And,
    Atom,
    Coalition,
    Common,
    Dist,
    Formula,
    Not,
    conj,
    disj,
    iff,
    implies,
    knows,
)

DEFAULT_WEIGHTS = {
    "atom": 1.0,
    "not": 2.0,
    "and": 2.0,
    "or": 1.0,
    "implies": 0.5,
    "dist": 2.0,
    "common": 1.5,
}


@dataclass(frozen=True)
class GenParams:
    max_depth: int = 3
    agents: tuple[str, ...] = ("a", "b", "c")
    atoms: tuple[str, ...] = ("p", "q")
    weights: Mapping[str, float] = field(default_factory=lambda: dict(DEFAULT_WEIGHTS))
    seed: int = 0

    def __post_init__(self) -> None:
        if not self.agents or not self.atoms:
            raise ValueError("agents and atoms must be non-empty")
        if self.max_depth < 0:
            raise ValueError("max_depth must be non-negative")
        unknown = set(self.weights) - set(DEFAULT_WEIGHTS)
        if unknown:
            raise ValueError(f"unknown connective weights {sorted(unknown)}")


class FormulaGenerator:
    """Deterministic stream of random formulas for one parameter set."""

    def __init__(self, params: GenParams):
        self.params = params
        self.rng = random.Random(params.seed)
        names = [k for k, w in params.weights.items() if w > 0]
        self._names = names
        self._weights = [params.weights[k] for k in names]

    def coalition(self) -> Coalition:
        agents = self.params.agents
        k = self.rng.randint(1, len(agents))
        return Coalition(self.rng.sample(agents, k))

    def literal(self) -> Formula:
        p = Atom(self.rng.choice(self.params.atoms))
        return Not(p) if self.rng.random() < 0.5 else p

    def formula(self, depth: int | None = None) -> Formula:
        depth = self.params.max_depth if depth is None else depth
        if depth == 0:
            return self.literal()
        op = self.rng.choices(self._names, self._weights)[0]
        d = depth - 1
        if op == "atom":
            return self.literal()
        if op == "not":
            return Not(self.formula(d))
        if op == "and":
            return And(self.formula(d), self.formula(d))
        if op == "or":
            return disj(self.formula(d), self.formula(d))
        if op == "implies":
            return implies(self.formula(d), self.formula(d))
        if op == "dist":
            return Dist(self.coalition(), self.formula(d))
        return Common(self.coalition(), self.formula(d))

    def __iter__(self) -> Iterator[Formula]:
        while True:
            yield self.formula()


def gen_formula(params: GenParams) -> Formula:
    return FormulaGenerator(params).formula()


def corpus(params: GenParams, count: int) -> list[Formula]:
    g = FormulaGenerator(params)
    return [g.formula() for _ in range(count)]


def fixpoint_family(coalition: Iterable[str], phi: Formula) -> Formula:
    """Negation of the fixpoint law ``C_A f <-> f & (all a in A) D_a C_A f``;
    valid law, so every instance is unsatisfiable."""
    a = Coalition(coalition)
    c = Common(a, phi)
    unfolded = conj(phi, *(knows(ag, c) for ag in a.members))
    return Not(iff(c, unfolded))
