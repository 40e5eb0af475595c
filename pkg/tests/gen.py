"""Seeded random term generators shared by the property and acceptance suites."""

from __future__ import annotations

import random

from papc.parsing import parse_definitions
from papc.syntax import (
    Action,
    Const,
    FrozenConserve,
    FrozenConsume,
    NIL,
    Par,
    PrefixConserve,
    PrefixConsume,
    Sum,
    Term,
)

ACTION_NAMES = ("a", "b", "g")
CONSTANTS = ("C", "A", "B", "P")

# Definitions used wherever generated terms mention constants; P stays unbound
# on purpose (an inert product species).
STANDARD_DEFS = parse_definitions(
    "C := a.(C | C) + g:P;"
    "A := ~a.(A | A);"
    "B := ~g:0;"
)


def random_action(rng: random.Random) -> Action:
    return Action(rng.choice(ACTION_NAMES), rng.random() < 0.5)


def random_process(rng: random.Random, depth: int, constants: bool = True) -> Term:
    """A plain process of at most the given depth."""
    if depth <= 0 or rng.random() < 0.25:
        if constants and rng.random() < 0.3:
            return Const(rng.choice(CONSTANTS))
        return NIL
    pick = rng.randrange(4)
    if pick == 0:
        return PrefixConsume(random_action(rng), random_process(rng, depth - 1, constants))
    if pick == 1:
        return PrefixConserve(random_action(rng), random_process(rng, depth - 1, constants))
    if pick == 2:
        return Sum(random_process(rng, depth - 1, constants),
                   random_process(rng, depth - 1, constants))
    return Par(random_process(rng, depth - 1, constants),
               random_process(rng, depth - 1, constants))


def random_configuration(
    rng: random.Random,
    depth: int = 5,
    max_frozen: int = 4,
    distinct_ids: bool = True,
    constants: bool = True,
) -> Term:
    """A configuration with at most ``max_frozen`` running prefixes.

    ``distinct_ids=False`` occasionally reuses identifiers, which reachable
    configurations never exhibit but the grammar allows.
    """
    pool = list(range(1, max_frozen + 3))
    rng.shuffle(pool)
    budget = [rng.randint(0, max_frozen)]

    def fresh_ident() -> int:
        if distinct_ids:
            return pool.pop()
        return rng.randint(1, max_frozen + 1)

    def go(d: int) -> Term:
        if budget[0] > 0 and rng.random() < 0.35:
            budget[0] -= 1
            node = FrozenConsume if rng.random() < 0.5 else FrozenConserve
            return node(random_action(rng), fresh_ident(),
                        random_process(rng, max(d - 1, 0), constants))
        if d <= 0 or rng.random() < 0.2:
            return random_process(rng, 1, constants)
        if rng.random() < 0.5:
            return Sum(go(d - 1), go(d - 1))
        return Par(go(d - 1), go(d - 1))

    return go(depth)
