"""Closure, extended closure, and the bit-indexed formula table.

Label sets throughout the tableau engine are plain ``int`` bitmasks whose
bit ``i`` stands for ``index.formulas[i]``.  :class:`ClosureIndex` carries
the per-formula lookup tables (components, complements, coalitions) that
let the engine work on those masks directly.
"""
from __future__ import annotations

from functools import cached_property
from typing import Iterable, Iterator

from .formula import (
    And,
    Atom,
    Coalition,
    Common,
    Dist,
    Formula,
    Kind,
    Not,
    classify,
    sort_key,
    sorted_formulas,
    subformulas,
)


def _local_successors(f: Formula) -> list[Formula]:
    c = classify(f)
    out = list(c.components)
    if c.kind is Kind.DIAMOND:
        out.append(Not(c.body))
    return out


def closure(theta: Formula | Iterable[Formula]) -> frozenset[Formula]:
    """Least set containing ``theta``, closed under alpha/beta components
    and under ``~D_A f  =>  ~f``."""
    todo = [theta] if isinstance(theta, Formula) else list(theta)
    out: set[Formula] = set()
    while todo:
        f = todo.pop()
        if f in out:
            continue
        out.add(f)
        todo.extend(_local_successors(f))
    return frozenset(out)


def complement(f: Formula) -> Formula:
    """Signed complement: ``~g`` for positive ``g``, ``g`` for ``~g``."""
    return f.sub if isinstance(f, Not) else Not(f)


def _immediate_subformulas(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, Atom):
        return ()
    if isinstance(f, And):
        return (f.left, f.right)
    return (f.sub,)  # type: ignore[attr-defined]


def bits(mask: int) -> Iterator[int]:
    """Positions of the set bits of ``mask``, lowest first."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _mask(positions: Iterable[int]) -> int:
    m = 0
    for i in positions:
        m |= 1 << i
    return m


class ClosureIndex:
    """The extended closure of an input set, in canonical order.

    Besides the closure rules, the set is closed under signed complement and
    immediate subformulas, so every formula the tableau can produce (cut
    formulas, prestate bodies, both signs of every closure member) has a
    position.
    """

    def __init__(self, inputs: Iterable[Formula]):
        inputs = list(inputs)
        if not inputs:
            raise ValueError("extended closure of an empty set")
        self.inputs: tuple[Formula, ...] = tuple(inputs)
        seen: set[Formula] = set()
        todo = list(inputs)
        while todo:
            f = todo.pop()
            if f in seen:
                continue
            seen.add(f)
            todo.extend(_local_successors(f))
            todo.append(complement(f))
            todo.extend(_immediate_subformulas(f))
        self.formulas: tuple[Formula, ...] = tuple(sorted_formulas(seen))
        self.position: dict[Formula, int] = {f: i for i, f in enumerate(self.formulas)}
        self._build_tables()

    def __len__(self) -> int:
        return len(self.formulas)

    def __contains__(self, f: object) -> bool:
        return f in self.position

    def __iter__(self) -> Iterator[Formula]:
        return iter(self.formulas)

    # -- label encoding -------------------------------------------------

    def bit(self, f: Formula) -> int:
        return 1 << self.position[f]

    def encode(self, fs: Iterable[Formula]) -> int:
        m = 0
        for f in fs:
            m |= 1 << self.position[f]
        return m

    def decode(self, mask: int) -> frozenset[Formula]:
        return frozenset(self.formulas[i] for i in bits(mask))

    def decode_sorted(self, mask: int) -> list[Formula]:
        return [self.formulas[i] for i in bits(mask)]

    def format(self, mask: int) -> str:
        return "{" + ", ".join(str(f) for f in self.decode_sorted(mask)) + "}"

    # -- tables ---------------------------------------------------------

    def _build_tables(self) -> None:
        n = len(self.formulas)
        pos = self.position
        self.kind: list[Kind] = []
        self.components: list[int] = [0] * n  # alpha: all; beta: any-of
        self.component_list: list[tuple[int, ...]] = [()] * n
        self.conflicts: list[int] = [0] * n
        self.coalition: list[Coalition | None] = [None] * n
        self.negated_body: list[int] = [0] * n  # ~f for ~D_A f and ~C_A f
        self.negation: list[int] = [0] * n  # bit of literal ~f, 0 if absent
        alpha = beta = event = diamond = dist = common = 0
        for i, f in enumerate(self.formulas):
            c = classify(f)
            self.kind.append(c.kind)
            comp_bits = tuple(1 << pos[g] for g in c.components)
            self.component_list[i] = comp_bits
            self.components[i] = _mask(pos[g] for g in c.components)
            nf = Not(f)
            if nf in pos:
                self.negation[i] = 1 << pos[nf]
                self.conflicts[i] |= 1 << pos[nf]
            if isinstance(f, Not):
                self.conflicts[i] |= 1 << pos[f.sub]
            me = 1 << i
            if c.kind is Kind.ALPHA:
                alpha |= me
            elif c.kind is Kind.BETA:
                if c.is_eventuality:
                    event |= me
                    self.coalition[i] = c.coalition
                    self.negated_body[i] = 1 << pos[Not(c.body)]
                else:
                    beta |= me
            elif c.kind is Kind.DIAMOND:
                diamond |= me
                self.coalition[i] = c.coalition
                self.negated_body[i] = 1 << pos[Not(c.body)]
            if isinstance(f, Dist):
                dist |= me
                self.coalition[i] = f.coalition
            elif isinstance(f, Common):
                common |= me
                self.coalition[i] = f.coalition
        self.alpha_mask = alpha
        self.beta_mask = beta
        self.eventuality_mask = event
        self.diamond_mask = diamond
        self.dist_mask = dist
        self.common_mask = common

    @cached_property
    def modal_subformulas(self) -> list[tuple[int, ...]]:
        """For each position, the positions of its D/C subformulas (itself included)."""
        out = []
        for f in self.formulas:
            subs = [g for g in subformulas(f) if isinstance(g, (Dist, Common))]
            out.append(tuple(self.position[g] for g in sorted(subs, key=sort_key)))
        return out

    def is_inconsistent(self, mask: int) -> bool:
        """True iff ``mask`` holds some formula together with its negation."""
        conflicts = self.conflicts
        for i in bits(mask):
            if conflicts[i] & mask:
                return True
        return False

    def eventualities(self, mask: int) -> list[Formula]:
        return self.decode_sorted(mask & self.eventuality_mask)


def extended_closure(theta: Formula | Iterable[Formula]) -> ClosureIndex:
    return ClosureIndex([theta] if isinstance(theta, Formula) else theta)


__all__ = [
    "ClosureIndex",
    "bits",
    "closure",
    "complement",
    "extended_closure",
]
