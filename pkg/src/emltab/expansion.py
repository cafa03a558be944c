"""Full expansions, cut targets and cut-saturated expansions of label sets.

The worker functions operate on bitmask labels over a :class:`ClosureIndex`;
the module-level wrappers accept plain formula collections for convenience.
"""
from __future__ import annotations

import enum
import time
from typing import Iterable

from .closure import ClosureIndex, bits, extended_closure
from .formula import Coalition, Dist, Formula, Kind


class CutMode(enum.Enum):
    RESTRICTED = "restricted"
    UNRESTRICTED = "unrestricted"
    NO_CUT = "no-cut"

    @classmethod
    def parse(cls, text: str) -> "CutMode":
        for m in cls:
            if m.value == text or m.name.lower() == text.lower():
                return m
        raise ValueError(f"unknown cut mode {text!r}")


def _family_key(mask: int) -> tuple[int, ...]:
    return tuple(bits(mask))


class Expander:
    """Computes (cut-saturated) expansions of labels over one closure index.

    Results are memoized per label, so reusing one expander across a whole
    tableau construction is cheap.
    """

    def __init__(self, index: ClosureIndex, mode: CutMode = CutMode.RESTRICTED):
        self.index = index
        self.mode = mode
        self._cache: dict[tuple[int, bool], list[int]] = {}
        self._targets: dict[int, list[int]] = {}
        self.deadline: float | None = None  # time.monotonic() cutoff

    def check_deadline(self) -> None:
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise TimeoutError("tableau deadline exceeded")

    # -- cut conditions ---------------------------------------------------

    def cut_targets(self, label: int) -> list[int]:
        """Positions of D/C subformulas eligible for a cut in ``label``
        (decided ones included), largest formula first.

        Cutting on larger formulas first lets an eventuality introduced by a
        negative cut branch over all of its components before the smaller
        formulas inside it get decided.
        """
        hit = self._targets.get(label)
        if hit is not None:
            return hit
        ix = self.index
        targets: set[int] = set()
        if self.mode is CutMode.UNRESTRICTED:
            for i in bits(label):
                targets.update(ix.modal_subformulas[i])
        elif self.mode is CutMode.RESTRICTED:
            diamonds = [ix.coalition[i] for i in bits(label & ix.diamond_mask)]
            if diamonds:
                for i in bits(label):
                    self._restricted_from(i, diamonds, targets)
        out = sorted(targets, reverse=True)
        self._targets[label] = out
        return out

    def _restricted_from(
        self, i: int, diamonds: list[Coalition], targets: set[int]
    ) -> None:
        ix = self.index
        psi = ix.formulas[i]
        if isinstance(psi, Dist):
            boxy, b = True, psi.coalition
        elif (1 << i) & ix.diamond_mask:
            boxy, b = True, ix.coalition[i]
        elif (1 << i) & ix.eventuality_mask:
            boxy, b = False, ix.coalition[i]
        else:
            return
        assert b is not None
        for j in ix.modal_subformulas[i]:
            if j in targets:
                continue
            a = ix.coalition[j]
            assert a is not None
            is_d = isinstance(ix.formulas[j], Dist)
            for e in diamonds:
                if is_d:
                    ok = a <= e and (b <= e if boxy else bool(b & e))
                else:
                    ok = bool(a & e) and (b <= e if boxy else bool(b & e))
                if ok:
                    targets.add(j)
                    break

    def undecided_target(self, label: int) -> int | None:
        if self.mode is CutMode.NO_CUT:
            return None
        ix = self.index
        for j in self.cut_targets(label):
            if not (label >> j) & 1 and not label & ix.negation[j]:
                return j
        return None

    # -- expansion --------------------------------------------------------

    def full(self, gamma: int) -> list[int]:
        """Full expansions of ``gamma`` (no cuts)."""
        return self._expand(gamma, cuts=False)

    def cs(self, gamma: int) -> list[int]:
        """Cut-saturated expansions of ``gamma`` under this expander's mode."""
        return self._expand(gamma, cuts=self.mode is not CutMode.NO_CUT)

    def _expand(self, gamma: int, cuts: bool) -> list[int]:
        key = (gamma, cuts)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        ix = self.index
        results: set[int] = set()
        seen: set[tuple[int, int]] = set()
        work: list[tuple[int, int]] = [(gamma, 0)]
        steps = 0
        while work:
            steps += 1
            if not steps & 1023:
                self.check_deadline()
            item = work.pop()
            if item in seen:
                continue
            seen.add(item)
            label, done = item
            if ix.is_inconsistent(label):
                continue
            # 1. eventualities first, each handled once per branch
            pending = label & ix.eventuality_mask & ~done
            if pending:
                i = (pending & -pending).bit_length() - 1
                done |= 1 << i
                comps = ix.component_list[i]
                if not label & ix.components[i]:
                    work.extend((label | c, done) for c in comps)
                else:
                    work.append((label, done))
                    nb = ix.negated_body[i]
                    if not label & nb:
                        work.append((label | nb, done))
                continue
            # 2. alpha closure
            grown = label
            for j in bits(label & ix.alpha_mask):
                grown |= ix.components[j]
            if grown != label:
                work.append((grown, done))
                continue
            # 3. other beta formulas
            branched = False
            for j in bits(label & ix.beta_mask):
                if not label & ix.components[j]:
                    work.extend((label | c, done) for c in ix.component_list[j])
                    branched = True
                    break
            if branched:
                continue
            # 4. cuts
            if cuts:
                j = self.undecided_target(label)
                if j is not None:
                    work.append((label | (1 << j), done))
                    work.append((label | ix.negation[j], done))
                    continue
            results.add(label)
        out = sorted(results, key=_family_key)
        self._cache[key] = out
        return out

    def is_fully_expanded(self, label: int) -> bool:
        ix = self.index
        if ix.is_inconsistent(label):
            return False
        for j in bits(label):
            kind = ix.kind[j]
            if kind is Kind.ALPHA and ix.components[j] & ~label:
                return False
            if kind is Kind.BETA and not ix.components[j] & label:
                return False
        return True

    def is_cut_saturated(self, label: int) -> bool:
        return self.is_fully_expanded(label) and self.undecided_target(label) is None


# ---------------------------------------------------------------------------
# formula-level wrappers


def _prepare(gamma: Iterable[Formula], mode: CutMode) -> tuple[Expander, int]:
    gamma = list(gamma)
    ix = extended_closure(gamma)
    return Expander(ix, mode), ix.encode(gamma)


def full_expansions(gamma: Iterable[Formula]) -> list[frozenset[Formula]]:
    ex, mask = _prepare(gamma, CutMode.NO_CUT)
    return [ex.index.decode(m) for m in ex.full(mask)]


def cs_expansions(
    gamma: Iterable[Formula], mode: CutMode = CutMode.RESTRICTED
) -> list[frozenset[Formula]]:
    ex, mask = _prepare(gamma, mode)
    return [ex.index.decode(m) for m in ex.cs(mask)]


def cut_targets(
    phi: Iterable[Formula], mode: CutMode = CutMode.RESTRICTED
) -> set[Formula]:
    """Undecided cut formulas of the set ``phi``."""
    ex, mask = _prepare(phi, mode)
    if mode is CutMode.NO_CUT:
        return set()
    ix = ex.index
    return {
        ix.formulas[j]
        for j in ex.cut_targets(mask)
        if not (mask >> j) & 1 and not mask & ix.negation[j]
    }


__all__ = [
    "CutMode",
    "Expander",
    "cs_expansions",
    "cut_targets",
    "full_expansions",
]
