import random

from emltab.parser import parse
from emltab.semantics import cmaem

ACCEPTANCE_LINES: list[str] = []


def P(text):
    return parse(text)


def S(*texts):
    return frozenset(parse(t) for t in texts)


def random_model(rng: random.Random, n: int, agents, atoms):
    """Random proper model: a random partition per agent, random valuation."""
    names = [f"s{i}" for i in range(n)]
    partitions = {}
    for a in agents:
        blocks: dict[int, list[str]] = {}
        for s in names:
            blocks.setdefault(rng.randrange(n), []).append(s)
        partitions[a] = list(blocks.values())
    valuation = {s: [p for p in atoms if rng.random() < 0.5] for s in names}
    return cmaem(names, partitions, valuation, atoms)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
