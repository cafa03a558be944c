"""Graphviz export of tableau phases."""
from __future__ import annotations

from .tableau import Phase, Pretableau, StateGraph, TableauRun


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def pretableau_dot(t: Pretableau) -> str:
    ix = t.index
    out = ["digraph pretableau {", "  node [shape=box];"]
    for i, lab in enumerate(t.prestates):
        out.append(f"  G{i} [style=dashed, label={_quote(f'G{i} ' + ix.format(lab))}];")
    for i, lab in enumerate(t.states):
        out.append(f"  D{i} [label={_quote(f'D{i} ' + ix.format(lab))}];")
    for p, children in sorted(t.dashed.items()):
        for d in children:
            out.append(f"  G{p} -> D{d} [style=dashed];")
    for (s, chi), p in sorted(t.solid.items()):
        out.append(f"  D{s} -> G{p} [label={_quote(str(ix.formulas[chi]))}];")
    out.append("}")
    return "\n".join(out) + "\n"


def graph_dot(g: StateGraph, show_removed: bool = True) -> str:
    """Initial or final tableau; removed states are greyed out with their rule."""
    ix = g.index
    removed = {r.state: r for r in g.log}
    out = [f"digraph {g.phase.value} {{", "  node [shape=box];"]
    for i, lab in enumerate(g.states):
        text = f"D{i} " + ix.format(lab)
        if i in g.alive:
            out.append(f"  D{i} [label={_quote(text)}];")
        elif show_removed:
            r = removed[i]
            why = r.rule if r.eventuality is None else f"{r.rule}({r.eventuality})"
            out.append(
                f"  D{i} [color=grey, fontcolor=grey, label={_quote(text + ' ' + why)}];"
            )
    for s, chi, t in g.edges:
        live = s in g.alive and t in g.alive
        if not live and not show_removed:
            continue
        style = "" if live else ", color=grey, fontcolor=grey"
        out.append(f"  D{s} -> D{t} [label={_quote(str(ix.formulas[chi]))}{style}];")
    out.append("}")
    return "\n".join(out) + "\n"


def to_dot(r: TableauRun, phase: Phase | str) -> str:
    phase = Phase(phase)
    if phase is Phase.PRETABLEAU:
        return pretableau_dot(r.pretableau)
    if phase is Phase.INITIAL:
        return graph_dot(r.initial)
    return graph_dot(r.final)
