"""Bounded state-space construction, statistics and exports."""

import pytest

from papc.lts import Bounds, build, export, stats
from papc.parsing import parse_definitions, parse_process
from papc.semantics import all_steps, label_text
from papc.syntax import format_term

DEFS = parse_definitions("C := a.(C | C) + g:P; A := ~a.(A | A); B := ~g:0;")
EMPTY = parse_definitions("")


def edge_set(lts):
    return {(format_term(lts.states[s]), label_text(label), format_term(lts.states[d]))
            for s, label, _, d in lts.edges}


def test_inert_root_builds_a_single_state():
    lts = build(parse_process("0"), EMPTY, Bounds(step_mode="system"))
    assert len(lts.states) == 1
    assert lts.edges == ()
    assert not lts.truncated


def test_single_prefix_state_space():
    # start, run, complete: three states plus rollback and idle self-loops
    lts = build(parse_process("a.0"), EMPTY, Bounds())
    s = stats(lts)
    assert s.states == 3
    assert s.h_edges == 1
    assert s.cp_edges == 1
    assert s.i_edges == 4  # one idle loop per state plus the rollback
    assert [format_term(c) for c in lts.states] == ["a.0", "[a#1].0", "0"]


def test_handshake_pair_round_trip_paths():
    root = parse_process("a.0 | ~a.0")
    lts = build(root, EMPTY, Bounds())
    assert not lts.truncated
    edges = edge_set(lts)
    # coupled start, coupled completion, and the paired rollback
    assert ("a.0 | ~a.0", "H 1 tau+", "[a#1].0 | [~a#1].0") in edges
    assert ("[a#1].0 | [~a#1].0", "CP 1 tau- {}", "0 | 0") in edges
    assert ("[a#1].0 | [~a#1].0", "I {1}", "a.0 | ~a.0") in edges
    # solo starts and their renamed interleavings widen the open-system space
    assert stats(lts).states == 15


def test_handshake_pair_observable_path_is_start_then_complete():
    lts = build(parse_process("a.0 | ~a.0"), EMPTY, Bounds(step_mode="system"))
    assert [format_term(s) for s in lts.states] == [
        "a.0 | ~a.0", "[a#1].0 | [~a#1].0", "0 | 0"
    ]
    assert edge_set(lts) == {
        ("a.0 | ~a.0", "H 1 tau+", "[a#1].0 | [~a#1].0"),
        ("[a#1].0 | [~a#1].0", "CP 1 tau- {}", "0 | 0"),
    }


def test_cell_system_contains_both_scenarios():
    lts = build(parse_process("C | A | B"), DEFS,
                Bounds(max_states=500, max_depth=3, step_mode="system"))
    edges = edge_set(lts)
    s1 = "[a#1].(C | C) + g:P | [~a#1].(A | A) | B"
    s2 = "[a#1].(C | C) + [g#2]:P | [~a#1].(A | A) | [~g#2]:0"
    assert ("C | A | B", "H 1 tau+", s1) in edges
    assert (s1, "H 2 tau+", s2) in edges
    assert (s2, "CP 1 tau- {}", "(C | C) | (A | A) | ~g:0") in edges
    assert (s2, "CP 2 tau- {}",
            "(([a#1].(C | C) + g:P | [~a#1].(A | A) | ~g:0) | P) | 0") in edges


def test_truncation_at_the_state_budget():
    lts = build(parse_process("C | A | B"), DEFS, Bounds(max_states=1, max_depth=3,
                                                         step_mode="system"))
    assert stats(lts).truncated == 1
    assert lts.truncated == {0}


def test_expanded_states_carry_their_full_step_sets():
    lts = build(parse_process("a.0 | ~a.0"), EMPTY, Bounds())
    by_source = {}
    for src, label, _, dst in lts.edges:
        by_source.setdefault(src, set()).add((label_text(label),
                                              format_term(lts.states[dst])))
    for i, state in enumerate(lts.states):
        if i in lts.truncated:
            continue
        want = {(label_text(t.label), format_term(t.target))
                for t in all_steps(state, EMPTY)}
        assert by_source.get(i, set()) == want


def test_exports_are_deterministic():
    def snapshot():
        lts = build(parse_process("C | A | B"), DEFS,
                    Bounds(max_states=60, max_depth=4))
        return export(lts, "aut"), export(lts, "json")

    first, second = snapshot(), snapshot()
    assert first == second


def test_aut_shape():
    lts = build(parse_process("0"), EMPTY, Bounds(step_mode="system"))
    assert export(lts, "aut") == b"des (0, 0, 1)\n"
    lts = build(parse_process("a.0"), EMPTY, Bounds())
    text = export(lts, "aut").decode()
    assert '(0,"H 1 a+",1)' in text.splitlines()
    assert text.startswith("des (0, ")


def test_json_export_embeds_configuration_texts():
    import json

    lts = build(parse_process("a.0"), EMPTY, Bounds())
    doc = json.loads(export(lts, "json"))
    assert doc["states"][0] == "a.0"
    assert doc["root"] == 0
    assert {e["relation"] for e in doc["edges"]} == {"H", "I", "CP"}


def test_system_mode_edges_are_a_subset_of_all_mode():
    bounds = Bounds(max_states=80, max_depth=4)
    full = build(parse_process("C | A | B"), DEFS, bounds)
    system = build(parse_process("C | A | B"), DEFS,
                   Bounds(max_states=80, max_depth=4, step_mode="system"))
    full_expanded = {format_term(s) for i, s in enumerate(full.states)
                     if i not in full.truncated}
    sys_expanded = {format_term(s) for i, s in enumerate(system.states)
                    if i not in system.truncated}
    full_edges = edge_set(full)
    for edge in edge_set(system):
        if edge[0] in full_expanded and edge[0] in sys_expanded:
            assert edge in full_edges


def test_raising_the_state_budget_is_monotone():
    small = build(parse_process("C | A | B"), DEFS, Bounds(max_states=10, max_depth=6))
    big = build(parse_process("C | A | B"), DEFS, Bounds(max_states=40, max_depth=6))
    assert list(big.states[: len(small.states)]) == list(small.states)
    assert edge_set(small) <= edge_set(big)


def test_bounds_validation():
    with pytest.raises(ValueError):
        Bounds(max_states=0)
    with pytest.raises(ValueError):
        Bounds(step_mode="everything")
