"""Benchmark runner: solve a corpus in several cut modes and tabulate results."""
from __future__ import annotations

import csv
import io
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

from .expansion import CutMode
from .formula import Formula
from .parser import parse
from .tableau import run

CSV_COLUMNS = (
    "formula",
    "mode",
    "verdict",
    "states",
    "eliminated_e1",
    "eliminated_e2",
    "ecl_size",
    "millis",
)
DEFAULT_TIMEOUT_MS = 10_000
TIMEOUT_ENV = "EMLTAB_TIMEOUT_MS"


def default_timeout_ms() -> int:
    raw = os.environ.get(TIMEOUT_ENV)
    if raw is None:
        return DEFAULT_TIMEOUT_MS
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{TIMEOUT_ENV} must be an integer, got {raw!r}") from None
    if value <= 0:
        raise ValueError(f"{TIMEOUT_ENV} must be positive")
    return value


@dataclass(frozen=True)
class BenchRecord:
    formula: str
    mode: str
    verdict: str  # sat | unsat | timeout
    states: int
    eliminated_e1: int
    eliminated_e2: int
    ecl_size: int
    millis: float
    first_level_states: int = 0


@dataclass(frozen=True)
class BenchReport:
    records: list[BenchRecord]
    disagreements: list[str]  # formulas where restricted and unrestricted differ

    def totals(self) -> dict[str, dict[str, float]]:
        out: dict[str, dict[str, float]] = {}
        for r in self.records:
            t = out.setdefault(
                r.mode, {"runs": 0, "sat": 0, "unsat": 0, "timeout": 0, "states": 0, "millis": 0.0}
            )
            t["runs"] += 1
            t[r.verdict] += 1
            t["states"] += r.states
            t["millis"] += r.millis
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.records:
            row = asdict(r)
            row["millis"] = f"{r.millis:.3f}"
            w.writerow([row[c] for c in CSV_COLUMNS])
        return buf.getvalue()

    def summary(self) -> str:
        lines = [f"{'mode':<14}{'runs':>6}{'sat':>6}{'unsat':>7}{'timeout':>9}{'states':>10}{'ms':>12}"]
        for mode, t in self.totals().items():
            lines.append(
                f"{mode:<14}{t['runs']:>6}{t['sat']:>6}{t['unsat']:>7}{t['timeout']:>9}"
                f"{t['states']:>10}{t['millis']:>12.1f}"
            )
        if self.disagreements:
            lines.append(f"BUG: {len(self.disagreements)} restricted/unrestricted disagreement(s):")
            lines.extend(f"  {f}" for f in self.disagreements)
        return "\n".join(lines)


def solve_one(text: str, mode: CutMode, timeout_ms: int) -> BenchRecord:
    f = parse(text)
    start = time.perf_counter()
    try:
        v = run([f], mode, timeout=timeout_ms / 1000).verdict
    except TimeoutError:
        millis = (time.perf_counter() - start) * 1000
        return BenchRecord(text, mode.value, "timeout", 0, 0, 0, 0, millis)
    millis = (time.perf_counter() - start) * 1000
    s = v.stats
    return BenchRecord(
        text, mode.value, v.status, s.states, s.eliminated_e1, s.eliminated_e2,
        s.ecl_size, millis, s.first_level_states,
    )


def _solve_task(args: tuple[str, str, int]) -> BenchRecord:
    text, mode, timeout_ms = args
    return solve_one(text, CutMode(mode), timeout_ms)


def run_bench(
    corpus: Iterable[Formula | str],
    modes: Sequence[CutMode] = (CutMode.RESTRICTED, CutMode.UNRESTRICTED),
    timeout_ms: int | None = None,
    workers: int = 1,
) -> BenchReport:
    timeout_ms = default_timeout_ms() if timeout_ms is None else timeout_ms
    texts = [f if isinstance(f, str) else str(f) for f in corpus]
    tasks = [(t, m.value, timeout_ms) for t in texts for m in modes]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(workers) as pool:
            records = list(pool.map(_solve_task, tasks))
    else:
        records = [_solve_task(t) for t in tasks]
    by_formula: dict[str, dict[str, str]] = {}
    for r in records:
        by_formula.setdefault(r.formula, {})[r.mode] = r.verdict
    disagreements = []
    for text, verdicts in by_formula.items():
        a = verdicts.get(CutMode.RESTRICTED.value)
        b = verdicts.get(CutMode.UNRESTRICTED.value)
        if a in ("sat", "unsat") and b in ("sat", "unsat") and a != b:
            disagreements.append(text)
    return BenchReport(records, disagreements)
