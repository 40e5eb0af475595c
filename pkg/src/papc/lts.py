"""Bounded breadth-first construction and export of transition systems.

Recursive definitions make most interesting state spaces infinite, so the
builder stops at configurable bounds and records which states it did not
expand.  States are deduplicated by structural equality only: two
configurations differing in identifier values are distinct states (the
least-unused identifier policy already canonicalizes generated identifiers).

Exports are byte-exact across runs: an ``aut``-style text form with one line
per edge, and a structured JSON form embedding full configuration texts.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import Literal

from .semantics import (
    DEFAULT_INTERRUPT_CAP,
    Label,
    all_steps,
    label_text,
    system_steps,
)
from .syntax import Definitions, EMPTY_DEFINITIONS, Term, format_term

__all__ = ["Bounds", "Lts", "LtsStats", "build", "stats", "export"]


@dataclass(frozen=True)
class Bounds:
    """Exploration limits; ``step_mode`` selects the transition relation union
    ("all") or the closed-system observable subset ("system")."""

    max_states: int = 10_000
    max_depth: int = 64
    step_mode: Literal["all", "system"] = "all"

    def __post_init__(self) -> None:
        if self.max_states < 1 or self.max_depth < 1:
            raise ValueError("bounds must be at least 1")
        if self.step_mode not in ("all", "system"):
            raise ValueError(f"unknown step mode {self.step_mode!r}")


@dataclass(frozen=True)
class Lts:
    """States (index 0 is the root), labelled edges, and the indices whose
    outgoing transitions were not fully expanded because a bound was hit."""

    states: tuple[Term, ...]
    edges: tuple[tuple[int, Label, str, int], ...]
    truncated: frozenset[int]
    bounds: Bounds


@dataclass(frozen=True)
class LtsStats:
    states: int
    h_edges: int
    i_edges: int
    cp_edges: int
    cc_edges: int
    truncated: int

    @property
    def edges(self) -> int:
        return self.h_edges + self.i_edges + self.cp_edges + self.cc_edges


def build(
    root: Term,
    defs: Definitions = EMPTY_DEFINITIONS,
    bounds: Bounds = Bounds(),
    *,
    interrupt_cap: int = DEFAULT_INTERRUPT_CAP,
) -> Lts:
    """Breadth-first exploration from ``root`` with structural deduplication.

    State numbering follows BFS discovery order over deterministically
    ordered transitions, so identical inputs build identical systems.
    """
    derive = system_steps if bounds.step_mode == "system" else all_steps
    states: list[Term] = [root]
    index: dict[Term, int] = {root: 0}
    depth: list[int] = [0]
    edges: list[tuple[int, Label, str, int]] = []
    truncated: set[int] = set()
    queue: deque[int] = deque([0])
    while queue:
        i = queue.popleft()
        if depth[i] >= bounds.max_depth:
            truncated.add(i)
            continue
        for t in derive(states[i], defs, interrupt_cap=interrupt_cap):
            j = index.get(t.target)
            if j is None:
                if len(states) >= bounds.max_states:
                    truncated.add(i)
                    continue
                j = len(states)
                states.append(t.target)
                index[t.target] = j
                depth.append(depth[i] + 1)
                queue.append(j)
            edges.append((i, t.label, t.relation, j))
    return Lts(tuple(states), tuple(edges), frozenset(truncated), bounds)


def stats(lts: Lts) -> LtsStats:
    counts = {"H": 0, "I": 0, "CP": 0, "CC": 0}
    for _, _, relation, _ in lts.edges:
        counts[relation] += 1
    return LtsStats(
        states=len(lts.states),
        h_edges=counts["H"],
        i_edges=counts["I"],
        cp_edges=counts["CP"],
        cc_edges=counts["CC"],
        truncated=len(lts.truncated),
    )


def _export_aut(lts: Lts) -> bytes:
    lines = [f"des (0, {len(lts.edges)}, {len(lts.states)})"]
    for src, label, _, dst in lts.edges:
        lines.append(f'({src},"{label_text(label)}",{dst})')
    return ("\n".join(lines) + "\n").encode("utf-8")


def _export_json(lts: Lts) -> bytes:
    doc = {
        "root": 0,
        "step_mode": lts.bounds.step_mode,
        "max_states": lts.bounds.max_states,
        "max_depth": lts.bounds.max_depth,
        "states": [format_term(s) for s in lts.states],
        "edges": [
            {
                "source": src,
                "relation": relation,
                "label": label_text(label),
                "target": dst,
            }
            for src, label, relation, dst in lts.edges
        ],
        "truncated": sorted(lts.truncated),
    }
    return (json.dumps(doc, indent=2, sort_keys=True) + "\n").encode("utf-8")


def export(lts: Lts, fmt: Literal["aut", "json"]) -> bytes:
    """Serialize the system; two builds from identical inputs export
    byte-identical results."""
    if fmt == "aut":
        return _export_aut(lts)
    if fmt == "json":
        return _export_json(lts)
    raise ValueError(f"unknown export format {fmt!r}")
