"""The engine must agree with the naive rule-by-rule transcription."""

import random

import pytest

import oracle
from gen import STANDARD_DEFS, random_configuration
from papc.semantics import (
    all_steps,
    conservative_completions,
    handshake_steps,
    interrupt_steps,
    preemptive_completions,
    system_steps,
)
from papc.syntax import format_term

RELATION_PAIRS = (
    ("handshake", handshake_steps, oracle.h_steps),
    ("interrupt", interrupt_steps, oracle.i_steps),
    ("preemptive", preemptive_completions, oracle.cp_steps),
    ("conservative", conservative_completions, oracle.cc_steps),
)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_engine_matches_oracle_on_random_configurations(seed):
    rng = random.Random(seed)
    for i in range(150):
        config = random_configuration(
            rng, depth=5, max_frozen=4, distinct_ids=(i % 3 != 0)
        )
        for name, engine_fn, oracle_fn in RELATION_PAIRS:
            got = oracle.engine_view(engine_fn(config, STANDARD_DEFS))
            want = oracle_fn(config, STANDARD_DEFS)
            assert got == want, f"{name} differs on {format_term(config)}"


def test_engine_matches_oracle_on_the_cell_system():
    for text in (
        "C | A | B",
        "[a#1].(C | C) + g:P | [~a#1].(A | A) | B",
        "[a#1].(C | C) + [g#2]:P | [~a#1].(A | A) | [~g#2]:0",
    ):
        from papc.parsing import parse_process

        config = parse_process(text)
        for name, engine_fn, oracle_fn in RELATION_PAIRS:
            got = oracle.engine_view(engine_fn(config, STANDARD_DEFS))
            want = oracle_fn(config, STANDARD_DEFS)
            assert got == want, f"{name} differs on {text}"


def test_system_filter_matches_oracle_union():
    rng = random.Random(7)
    for _ in range(60):
        config = random_configuration(rng, depth=4, max_frozen=3)
        union = oracle.engine_view(all_steps(config, STANDARD_DEFS))
        per_relation = set()
        for _, engine_fn, _ in RELATION_PAIRS:
            per_relation |= oracle.engine_view(engine_fn(config, STANDARD_DEFS))
        assert union == per_relation
        filtered = oracle.engine_view(system_steps(config, STANDARD_DEFS))
        assert filtered <= union
