"""Brute-force small-model search, independent of the tableau.

For each frame (one partition per agent, coalition relations taken as
intersections) every valuation is evaluated at once: a formula's extension
is a single int whose bit ``v * n + s`` says whether it holds at state ``s``
under valuation number ``v``.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Iterable

from .formula import And, Atom, Coalition, Common, Dist, Formula, Not, agents_of, atoms_of, conj
from .semantics import KripkeStructure, _closure_rows, check, cmaem, partition_rows

MAX_VALUATION_BITS = 16


@lru_cache(maxsize=None)
def set_partitions(n: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """All partitions of ``range(n)``, via restricted-growth strings."""
    out = []

    def grow(prefix: list[int], top: int) -> None:
        if len(prefix) == n:
            blocks: dict[int, list[int]] = {}
            for s, b in enumerate(prefix):
                blocks.setdefault(b, []).append(s)
            out.append(tuple(tuple(b) for b in blocks.values()))
            return
        for b in range(top + 2):
            grow(prefix + [b], max(top, b))

    if n:
        grow([0], 0)
    return tuple(out)


class _Layout:
    def __init__(self, n: int, atoms: list[str]):
        self.n = n
        k = len(atoms)
        self.valuations = 1 << (n * k)
        col0 = 0
        for v in range(self.valuations):
            col0 |= 1 << (v * n)
        self.cols = [col0 << s for s in range(n)]
        self.full = col0 * ((1 << n) - 1)
        self.atom_masks = {}
        for j, p in enumerate(atoms):
            m = 0
            for v in range(self.valuations):
                for s in range(n):
                    if v >> (s * k + j) & 1:
                        m |= 1 << (v * n + s)
            self.atom_masks[p] = m

    def box(self, rows: tuple[int, ...], ext: int) -> int:
        n, cols = self.n, self.cols
        out = 0
        for s in range(n):
            acc = cols[s]
            r = rows[s]
            for t in range(n):
                if r >> t & 1:
                    x = ext & cols[t]
                    acc &= x << (s - t) if s >= t else x >> (t - s)
            out |= acc
        return out


def _evaluate(f: Formula, layout: _Layout, rel, crel, memo: dict) -> int:
    hit = memo.get(f)
    if hit is not None:
        return hit
    if isinstance(f, Atom):
        out = layout.atom_masks[f.name]
    elif isinstance(f, Not):
        out = layout.full & ~_evaluate(f.sub, layout, rel, crel, memo)
    elif isinstance(f, And):
        out = _evaluate(f.left, layout, rel, crel, memo) & _evaluate(
            f.right, layout, rel, crel, memo
        )
    elif isinstance(f, Dist):
        out = layout.box(rel(f.coalition), _evaluate(f.sub, layout, rel, crel, memo))
    else:
        assert isinstance(f, Common)
        out = layout.box(crel(f.coalition), _evaluate(f.sub, layout, rel, crel, memo))
    memo[f] = out
    return out


def brute_force_sat(
    theta: Formula | Iterable[Formula], max_states: int = 3
) -> tuple[KripkeStructure, int] | None:
    """First model (fewest states, then frame, valuation, state) of ``theta``."""
    if max_states > 4:
        raise ValueError("brute-force search is limited to 4 states")
    fs = [theta] if isinstance(theta, Formula) else list(theta)
    target = conj(*fs)
    agents = sorted(agents_of(fs))
    atoms = sorted(atoms_of(fs))
    for n in range(1, max_states + 1):
        if n * len(atoms) > MAX_VALUATION_BITS:
            raise ValueError("too many atoms for brute-force search")
        layout = _Layout(n, atoms)
        for frame in product(set_partitions(n), repeat=len(agents)):
            agent_rows = {a: partition_rows(n, blocks) for a, blocks in zip(agents, frame)}
            cache: dict = {}

            def rel(c: Coalition, agent_rows=agent_rows, cache=cache):
                key = ("D", c)
                if key not in cache:
                    rows = [(1 << n) - 1] * n
                    for a in c:
                        rows = [x & y for x, y in zip(rows, agent_rows[a])]
                    cache[key] = tuple(rows)
                return cache[key]

            def crel(c: Coalition, agent_rows=agent_rows, cache=cache):
                key = ("C", c)
                if key not in cache:
                    union = [0] * n
                    for a in c:
                        union = [x | y for x, y in zip(union, agent_rows[a])]
                    cache[key] = _closure_rows(union)
                return cache[key]

            ext = _evaluate(target, layout, rel, crel, {})
            if ext:
                pos = (ext & -ext).bit_length() - 1
                v, s = divmod(pos, n)
                model = _build(n, agents, atoms, frame, v)
                if not check(model, s, target):
                    raise AssertionError("oracle disagrees with the model checker")
                return model, s
    return None


def _build(n: int, agents, atoms, frame, v: int) -> KripkeStructure:
    names = [f"s{i}" for i in range(n)]
    k = len(atoms)
    partitions = {
        a: [[names[s] for s in block] for block in blocks] for a, blocks in zip(agents, frame)
    }
    valuation = {
        names[s]: [p for j, p in enumerate(atoms) if v >> (s * k + j) & 1] for s in range(n)
    }
    return cmaem(names, partitions, valuation, atoms)
