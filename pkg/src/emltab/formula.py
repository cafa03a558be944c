"""Formula syntax for coalitional epistemic logic with common and distributed knowledge.

Formulas are immutable, hashable dataclasses over five constructors::

    Atom(p) | Not(f) | And(f, g) | Dist(A, f) | Common(A, f)

where ``A`` is a non-empty :class:`Coalition`.  Derived connectives
(``|``, ``->``, ``<->``, ``K{a}``) only exist as helper functions that
build core formulas.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Union

MAX_AGENTS = 32


class Coalition(frozenset):
    """A non-empty set of agent names."""

    def __new__(cls, members: Iterable[str] = ()):
        self = super().__new__(cls, members)
        if not self:
            raise ValueError("coalition must be non-empty")
        if len(self) > MAX_AGENTS:
            raise ValueError(f"coalition exceeds {MAX_AGENTS} agents")
        return self

    @classmethod
    def of(cls, *agents: str) -> "Coalition":
        return cls(agents)

    @property
    def members(self) -> tuple[str, ...]:
        return tuple(sorted(self))

    def text(self) -> str:
        return ",".join(self.members)

    def __repr__(self) -> str:
        return "{" + self.text() + "}"


def _combined_hash(*parts) -> int:
    return hash(parts)


@dataclass(frozen=True, eq=True, repr=False)
class Formula:
    def __str__(self) -> str:
        return to_text(self)

    def __repr__(self) -> str:
        return f"<{to_text(self)}>"

    def __hash__(self) -> int:
        return self._h  # type: ignore[attr-defined]


@dataclass(frozen=True, eq=True, repr=False)
class Atom(Formula):
    name: str
    _h: int = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_h", _combined_hash("atom", self.name))

    __hash__ = Formula.__hash__


@dataclass(frozen=True, eq=True, repr=False)
class Not(Formula):
    sub: Formula
    _h: int = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_h", _combined_hash("not", self.sub._h))

    __hash__ = Formula.__hash__


@dataclass(frozen=True, eq=True, repr=False)
class And(Formula):
    left: Formula
    right: Formula
    _h: int = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_h", _combined_hash("and", self.left._h, self.right._h))

    __hash__ = Formula.__hash__


@dataclass(frozen=True, eq=True, repr=False)
class Dist(Formula):
    """Distributed knowledge ``D_A f``; ``D{a}`` is individual knowledge."""

    coalition: Coalition
    sub: Formula
    _h: int = field(init=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.coalition, Coalition):
            object.__setattr__(self, "coalition", Coalition(self.coalition))
        object.__setattr__(
            self, "_h", _combined_hash("dist", self.coalition, self.sub._h)
        )

    __hash__ = Formula.__hash__


@dataclass(frozen=True, eq=True, repr=False)
class Common(Formula):
    """Common knowledge ``C_A f``."""

    coalition: Coalition
    sub: Formula
    _h: int = field(init=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.coalition, Coalition):
            object.__setattr__(self, "coalition", Coalition(self.coalition))
        object.__setattr__(
            self, "_h", _combined_hash("common", self.coalition, self.sub._h)
        )

    __hash__ = Formula.__hash__


Modal = Union[Dist, Common]

# ---------------------------------------------------------------------------
# derived connectives


def neg(f: Formula) -> Formula:
    """Negate ``f``, stripping an outer negation instead of stacking one."""
    return f.sub if isinstance(f, Not) else Not(f)


def conj(*fs: Formula) -> Formula:
    if not fs:
        raise ValueError("empty conjunction")
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out


def disj(f: Formula, g: Formula) -> Formula:
    return Not(And(neg(f), neg(g)))


def implies(f: Formula, g: Formula) -> Formula:
    return Not(And(f, neg(g)))


def iff(f: Formula, g: Formula) -> Formula:
    return And(implies(f, g), implies(g, f))


def knows(agent: str, f: Formula) -> Dist:
    return Dist(Coalition.of(agent), f)


def everybody_knows(coalition: Iterable[str], f: Formula) -> Formula:
    return conj(*(knows(a, f) for a in sorted(coalition)))


# ---------------------------------------------------------------------------
# structure


def size(f: Formula) -> int:
    """Number of AST nodes."""
    if isinstance(f, Atom):
        return 1
    if isinstance(f, And):
        return 1 + size(f.left) + size(f.right)
    return 1 + size(f.sub)  # type: ignore[attr-defined]


_TAGS = {Atom: 0, Not: 1, And: 2, Dist: 3, Common: 4}


@lru_cache(maxsize=None)
def sort_key(f: Formula) -> tuple:
    """Total canonical order: by size, then constructor, then children."""
    tag = _TAGS[type(f)]
    if isinstance(f, Atom):
        payload: tuple = (f.name,)
    elif isinstance(f, Not):
        payload = (sort_key(f.sub),)
    elif isinstance(f, And):
        payload = (sort_key(f.left), sort_key(f.right))
    else:
        payload = (f.coalition.members, sort_key(f.sub))
    return (size(f), tag, payload)


def sorted_formulas(fs: Iterable[Formula]) -> list[Formula]:
    return sorted(fs, key=sort_key)


def subformulas(f: Formula) -> set[Formula]:
    out: set[Formula] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if g in out:
            continue
        out.add(g)
        if isinstance(g, And):
            stack += [g.left, g.right]
        elif not isinstance(g, Atom):
            stack.append(g.sub)  # type: ignore[attr-defined]
    return out


def atoms_of(fs: Iterable[Formula]) -> set[str]:
    return {g.name for f in fs for g in subformulas(f) if isinstance(g, Atom)}


def agents_of(fs: Iterable[Formula]) -> set[str]:
    return {
        a
        for f in fs
        for g in subformulas(f)
        if isinstance(g, (Dist, Common))
        for a in g.coalition
    }


# ---------------------------------------------------------------------------
# alpha / beta classification


class Kind(enum.Enum):
    LITERAL = "literal"
    NEG_LITERAL = "neg_literal"
    ALPHA = "alpha"
    BETA = "beta"
    DIAMOND = "diamond"  # ~D_A f


@dataclass(frozen=True)
class Classified:
    kind: Kind
    components: tuple[Formula, ...] = ()
    coalition: Coalition | None = None
    body: Formula | None = None

    @property
    def is_eventuality(self) -> bool:
        return self.kind is Kind.BETA and self.coalition is not None


@lru_cache(maxsize=None)
def classify(f: Formula) -> Classified:
    """Sort a formula into literal / alpha / beta / diamond with its components."""
    if isinstance(f, Atom):
        return Classified(Kind.LITERAL)
    if isinstance(f, And):
        return Classified(Kind.ALPHA, (f.left, f.right))
    if isinstance(f, Dist):
        return Classified(Kind.ALPHA, (f, f.sub), f.coalition, f.sub)
    if isinstance(f, Common):
        comps = (f.sub,) + tuple(knows(a, f) for a in f.coalition.members)
        return Classified(Kind.ALPHA, comps, f.coalition, f.sub)
    g = f.sub  # type: ignore[attr-defined]
    if isinstance(g, Atom):
        return Classified(Kind.NEG_LITERAL)
    if isinstance(g, Not):
        return Classified(Kind.ALPHA, (g.sub,))
    if isinstance(g, And):
        return Classified(Kind.BETA, (Not(g.left), Not(g.right)))
    if isinstance(g, Dist):
        return Classified(Kind.DIAMOND, (), g.coalition, g.sub)
    comps = (Not(g.sub),) + tuple(Not(knows(a, g)) for a in g.coalition.members)
    return Classified(Kind.BETA, comps, g.coalition, g.sub)


def is_eventuality(f: Formula) -> bool:
    return isinstance(f, Not) and isinstance(f.sub, Common)


def is_diamond(f: Formula) -> bool:
    return isinstance(f, Not) and isinstance(f.sub, Dist)


# ---------------------------------------------------------------------------
# printing


def _unary_operand(f: Formula) -> str:
    s = to_text(f)
    return f"({s})" if isinstance(f, And) else s


def to_text(f: Formula) -> str:
    """Render ``f`` in the surface syntax accepted by :func:`emltab.parser.parse`."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Not):
        return "~" + _unary_operand(f.sub)
    if isinstance(f, And):
        right = to_text(f.right)
        if isinstance(f.right, And):
            right = f"({right})"
        return f"{to_text(f.left)} & {right}"
    op = "D" if isinstance(f, Dist) else "C"
    return f"{op}{{{f.coalition.text()}}}{_unary_operand(f.sub)}"
