"""Derivation of the five transition relations over configurations.

The relations, and the transition label each one carries:

* ``H``  (handshake)     -- ``(l, a+)``: action ``a`` started with identifier
  ``l``.  A start at a prefix always picks identifier 1; the enclosing sum
  and parallel operators rename it to the least identifier unused in the
  whole composite whenever it collides with a sibling's running actions,
  which keeps reachable state spaces finite.  Two complementary starts in
  parallel components couple into a single tau handshake sharing one fresh
  identifier.
* ``I``  (interrupt)     -- a set of identifiers: every running prefix
  independently either rolls back to its re-startable form (contributing its
  identifier) or stays put.  The relation is total: terms without running
  prefixes have exactly the empty self-loop.
* ``CP`` (preemptive completion) -- ``(l, a-, N)``: the running action ``l``
  finished and consumed its host; ``N`` demands the interruption of the
  competing actions that died with it.  Sums discard the losing summand and
  demand its running actions; parallel siblings must interrupt at least the
  demanded actions they hold.  Coupled completions (preemptive/preemptive,
  conservative/conservative with nothing demanded, or mixed with the
  conservative side's demands covered) fuse into tau completions.
* ``CC`` (conservative completion) -- ``(l, a-, N, P)``: the running action
  finished, its prefix re-armed, and the continuation ``P`` rides in the
  label until a parallel composition can place it alongside.

Constants unfold through every relation except ``I``, where plain processes
(constants and the inert term included) keep the empty self-loop untouched.
All functions are pure; transition sets come back deterministically ordered.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Union

from .errors import CapExceeded, IdentifierCollision, UnguardedRecursion
from .syntax import (
    TAU,
    Action,
    Const,
    Definitions,
    EMPTY_DEFINITIONS,
    FrozenConserve,
    FrozenConsume,
    Par,
    PrefixConserve,
    PrefixConsume,
    Sum,
    Term,
    complement,
    format_action,
    format_term,
    frozen_prefix_count,
)

__all__ = [
    "DEFAULT_INTERRUPT_CAP",
    "Handshake",
    "Interrupt",
    "CompletePreemptive",
    "CompleteConservative",
    "Label",
    "Transition",
    "RELATIONS",
    "label_text",
    "label_sort_key",
    "transition_sort_key",
    "id_set",
    "actions_at",
    "rename_id",
    "fresh_id",
    "handshake_steps",
    "interrupt_steps",
    "preemptive_completions",
    "conservative_completions",
    "all_steps",
    "is_system_step",
    "system_steps",
]

# Interrupt choices multiply per running prefix, so enumeration is capped per
# parallel component; exceeding it raises instead of sampling.
DEFAULT_INTERRUPT_CAP = 16


# ---------------------------------------------------------------------------
# labels and transitions


@dataclass(frozen=True)
class Handshake:
    ident: int
    action: Action


@dataclass(frozen=True)
class Interrupt:
    idents: frozenset[int]


@dataclass(frozen=True)
class CompletePreemptive:
    ident: int
    action: Action
    demanded: frozenset[int]


@dataclass(frozen=True)
class CompleteConservative:
    ident: int
    action: Action
    demanded: frozenset[int]
    continuation: Term


Label = Union[Handshake, Interrupt, CompletePreemptive, CompleteConservative]

RELATIONS = ("H", "I", "CP", "CC")
_RELATION_OF = {
    Handshake: "H",
    Interrupt: "I",
    CompletePreemptive: "CP",
    CompleteConservative: "CC",
}
_RELATION_RANK = {tag: i for i, tag in enumerate(RELATIONS)}


@dataclass(frozen=True)
class Transition:
    source: Term
    label: Label
    target: Term

    @property
    def relation(self) -> str:
        return _RELATION_OF[type(self.label)]

    def __str__(self) -> str:
        return f"{label_text(self.label)} -> {format_term(self.target)}"


def _set_text(idents: Iterable[int]) -> str:
    return "{" + ",".join(str(i) for i in sorted(idents)) + "}"


def label_text(label: Label) -> str:
    """Deterministic one-line serialization used by exports and the CLI."""
    if isinstance(label, Handshake):
        return f"H {label.ident} {format_action(label.action)}+"
    if isinstance(label, Interrupt):
        return f"I {_set_text(label.idents)}"
    if isinstance(label, CompletePreemptive):
        return f"CP {label.ident} {format_action(label.action)}- {_set_text(label.demanded)}"
    if isinstance(label, CompleteConservative):
        return (
            f"CC {label.ident} {format_action(label.action)}- "
            f"{_set_text(label.demanded)} -> {format_term(label.continuation)}"
        )
    raise TypeError(f"not a label: {label!r}")


def _action_key(action: Action):
    if action.name is None:
        return (0, "", False)
    return (1, action.name, action.complemented)


def label_sort_key(label: Label):
    if isinstance(label, Handshake):
        return (label.ident, _action_key(label.action))
    if isinstance(label, Interrupt):
        return (tuple(sorted(label.idents)),)
    if isinstance(label, CompletePreemptive):
        return (label.ident, _action_key(label.action), tuple(sorted(label.demanded)))
    return (
        label.ident,
        _action_key(label.action),
        tuple(sorted(label.demanded)),
        format_term(label.continuation),
    )


def transition_sort_key(t: Transition):
    return (_RELATION_RANK[t.relation], label_sort_key(t.label), format_term(t.target))


# ---------------------------------------------------------------------------
# auxiliary functions over configurations


def id_set(config: Term) -> frozenset[int]:
    """Identifiers of the running actions in the configuration."""
    return config.ids


def actions_at(ident: int, config: Term) -> frozenset[Action]:
    """Actions currently running in the configuration under identifier ``ident``."""
    if isinstance(config, (FrozenConsume, FrozenConserve)):
        return frozenset((config.action,)) if config.ident == ident else frozenset()
    if isinstance(config, (Sum, Par)):
        return actions_at(ident, config.left) | actions_at(ident, config.right)
    return frozenset()


def rename_id(config: Term, old: int, new: int) -> Term:
    """Replace identifier ``old`` by ``new`` on every running prefix.

    ``new`` must not already identify a different running action.
    """
    if new != old and new in config.ids:
        raise IdentifierCollision(
            f"renaming {old} to {new} would collide in {format_term(config)}"
        )
    return _rename(config, old, new)


def _rename(config: Term, old: int, new: int) -> Term:
    if old not in config.ids:
        return config
    if isinstance(config, FrozenConsume):
        return FrozenConsume(config.action, new, config.cont)
    if isinstance(config, FrozenConserve):
        return FrozenConserve(config.action, new, config.cont)
    if isinstance(config, Sum):
        return Sum(_rename(config.left, old, new), _rename(config.right, old, new))
    if isinstance(config, Par):
        return Par(_rename(config.left, old, new), _rename(config.right, old, new))
    return config


def fresh_id(used: Iterable[int]) -> int:
    """The least positive identifier not in ``used``."""
    taken = set(used)
    i = 1
    while i in taken:
        i += 1
    return i


# ---------------------------------------------------------------------------
# handshake relation

_HStep = tuple[int, Action, Term]


def _h(config: Term, defs: Definitions, unfolding: frozenset[str]) -> set[_HStep]:
    if isinstance(config, PrefixConsume):
        return {(1, config.action, FrozenConsume(config.action, 1, config.cont))}
    if isinstance(config, PrefixConserve):
        return {(1, config.action, FrozenConserve(config.action, 1, config.cont))}
    if isinstance(config, Const):
        body = defs.get(config.name)
        if body is None:
            return set()
        if config.name in unfolding:
            raise UnguardedRecursion(
                f"constant {config.name!r} unfolds to itself without passing a prefix"
            )
        return _h(body, defs, unfolding | {config.name})
    if isinstance(config, (Sum, Par)):
        node = type(config)
        left, right = config.left, config.right
        used = left.ids | right.ids
        out: set[_HStep] = set()
        left_steps = _h(left, defs, unfolding)
        right_steps = _h(right, defs, unfolding)
        for ident, action, target in left_steps:
            if ident not in right.ids:
                out.add((ident, action, node(target, right)))
            else:
                fresh = fresh_id(used)
                out.add((fresh, action, node(rename_id(target, ident, fresh), right)))
        for ident, action, target in right_steps:
            if ident not in left.ids:
                out.add((ident, action, node(left, target)))
            else:
                fresh = fresh_id(used)
                out.add((fresh, action, node(left, rename_id(target, ident, fresh))))
        if isinstance(config, Par):
            # complementary starts couple into one tau start with a shared
            # identifier fresh for the whole composite
            for lid, laction, ltarget in left_steps:
                if laction.is_tau:
                    continue
                partner = complement(laction)
                for rid, raction, rtarget in right_steps:
                    if raction == partner:
                        fresh = fresh_id(used)
                        out.add((
                            fresh,
                            TAU,
                            Par(rename_id(ltarget, lid, fresh),
                                rename_id(rtarget, rid, fresh)),
                        ))
        return out
    return set()  # inert, running prefixes and unbound constants


# ---------------------------------------------------------------------------
# interrupt relation

_IStep = tuple[frozenset[int], Term]

_EMPTY: frozenset[int] = frozenset()


def _i(config: Term, cap: int) -> set[_IStep]:
    if isinstance(config, Par):
        out: set[_IStep] = set()
        for (lids, ltarget), (rids, rtarget) in itertools.product(
            _i(config.left, cap), _i(config.right, cap)
        ):
            out.add((lids | rids, Par(ltarget, rtarget)))
        return out
    count = frozen_prefix_count(config)
    if count > cap:
        raise CapExceeded(
            f"component {format_term(config)} has {count} running prefixes; "
            f"interrupt enumeration is capped at {cap}"
        )
    return _i_component(config)


def _i_component(config: Term) -> set[_IStep]:
    if not config.ids:
        return {(_EMPTY, config)}
    if isinstance(config, FrozenConsume):
        return {
            (frozenset((config.ident,)), PrefixConsume(config.action, config.cont)),
            (_EMPTY, config),
        }
    if isinstance(config, FrozenConserve):
        return {
            (frozenset((config.ident,)), PrefixConserve(config.action, config.cont)),
            (_EMPTY, config),
        }
    if isinstance(config, (Sum, Par)):
        node = type(config)
        out: set[_IStep] = set()
        for (lids, ltarget), (rids, rtarget) in itertools.product(
            _i_component(config.left), _i_component(config.right)
        ):
            out.add((lids | rids, node(ltarget, rtarget)))
        return out
    raise TypeError(f"not a configuration: {config!r}")


# ---------------------------------------------------------------------------
# completion relations

_CPStep = tuple[int, Action, frozenset[int], Term]
_CCStep = tuple[int, Action, frozenset[int], Term, Term]  # (l, a, N, continuation, target)


def _cc(config: Term, cap: int) -> set[_CCStep]:
    if not config.ids:
        return set()
    if isinstance(config, FrozenConserve):
        rearmed = PrefixConserve(config.action, config.cont)
        return {(config.ident, config.action, _EMPTY, config.cont, rearmed)}
    if isinstance(config, FrozenConsume):
        return set()
    if isinstance(config, Sum):
        out: set[_CCStep] = set()
        for ident, action, demanded, cont, target in _cc(config.left, cap):
            for interrupted, sibling in _i(config.right, cap):
                out.add((ident, action, demanded | interrupted, cont,
                         Sum(target, sibling)))
        for ident, action, demanded, cont, target in _cc(config.right, cap):
            for interrupted, sibling in _i(config.left, cap):
                out.add((ident, action, demanded | interrupted, cont,
                         Sum(sibling, target)))
        return out
    if isinstance(config, Par):
        out = set()
        for ident, action, demanded, cont, target in _cc(config.left, cap):
            out.add((ident, action, demanded, cont, Par(target, config.right)))
        for ident, action, demanded, cont, target in _cc(config.right, cap):
            out.add((ident, action, demanded, cont, Par(config.left, target)))
        return out
    return set()


def _cp(config: Term, cap: int) -> set[_CPStep]:
    if not config.ids:
        return set()
    if isinstance(config, FrozenConsume):
        return {(config.ident, config.action, _EMPTY, config.cont)}
    if isinstance(config, FrozenConserve):
        return set()
    if isinstance(config, Sum):
        out: set[_CPStep] = set()
        # the losing summand disappears and all its running actions are demanded
        for ident, action, demanded, target in _cp(config.left, cap):
            out.add((ident, action, demanded | config.right.ids, target))
        for ident, action, demanded, target in _cp(config.right, cap):
            out.add((ident, action, demanded | config.left.ids, target))
        return out
    if isinstance(config, Par):
        left, right = config.left, config.right
        cp_left, cp_right = _cp(left, cap), _cp(right, cap)
        cc_left, cc_right = _cc(left, cap), _cc(right, cap)
        i_left, i_right = _i(left, cap), _i(right, cap)
        out = set()
        # a completion on one side; the other side interrupts at least the
        # demanded actions it hosts, and demands satisfied inside vanish
        for ident, action, demanded, target in cp_left:
            required = right.ids & demanded
            for interrupted, sibling in i_right:
                if interrupted >= required:
                    visible = (demanded | interrupted) - (demanded & right.ids)
                    out.add((ident, action, visible, Par(target, sibling)))
        for ident, action, demanded, target in cp_right:
            required = left.ids & demanded
            for interrupted, sibling in i_left:
                if interrupted >= required:
                    visible = (demanded | interrupted) - (demanded & left.ids)
                    out.add((ident, action, visible, Par(sibling, target)))
        # coupled preemptive completions: shared demands cancel out
        for lident, laction, ldem, ltarget in cp_left:
            if laction.is_tau:
                continue
            partner = complement(laction)
            for rident, raction, rdem, rtarget in cp_right:
                if rident == lident and raction == partner:
                    out.add((lident, TAU, (ldem | rdem) - (ldem & rdem),
                             Par(ltarget, rtarget)))
        # coupled conservative completions with nothing demanded: both
        # continuations land in parallel at this level
        for lident, laction, ldem, lcont, ltarget in cc_left:
            if ldem:
                continue
            partner = complement(laction)
            for rident, raction, rdem, rcont, rtarget in cc_right:
                if rident == lident and raction == partner and not rdem:
                    out.add((lident, TAU, _EMPTY,
                             Par(Par(Par(ltarget, rtarget), lcont), rcont)))
        # mixed coupling: the conservative side's demands must all be covered
        # by the preemptive side's, and only the difference stays visible
        for lident, laction, ldem, lcont, ltarget in cc_left:
            partner = complement(laction)
            for rident, raction, rdem, rtarget in cp_right:
                if rident == lident and raction == partner and ldem <= rdem:
                    out.add((lident, TAU, rdem - ldem,
                             Par(Par(ltarget, rtarget), lcont)))
        for lident, laction, ldem, ltarget in cp_left:
            if laction.is_tau:
                continue
            partner = complement(laction)
            for rident, raction, rdem, rcont, rtarget in cc_right:
                if rident == lident and raction == partner and rdem <= ldem:
                    out.add((lident, TAU, ldem - rdem,
                             Par(Par(ltarget, rtarget), rcont)))
        return out
    return set()


# ---------------------------------------------------------------------------
# public operations


def _sorted_transitions(source: Term, labelled: Iterable[tuple[Label, Term]]) -> tuple[Transition, ...]:
    transitions = {Transition(source, label, target) for label, target in labelled}
    return tuple(sorted(transitions, key=transition_sort_key))


def handshake_steps(config: Term, defs: Definitions = EMPTY_DEFINITIONS) -> tuple[Transition, ...]:
    """Every start derivable from the configuration, coupled starts included."""
    steps = _h(config, defs, frozenset())
    return _sorted_transitions(
        config, ((Handshake(i, a), t) for i, a, t in steps)
    )


def interrupt_steps(
    config: Term,
    defs: Definitions = EMPTY_DEFINITIONS,
    *,
    interrupt_cap: int = DEFAULT_INTERRUPT_CAP,
) -> tuple[Transition, ...]:
    """Every rollback combination: one transition per subset of running prefixes."""
    del defs  # interruption never unfolds constants
    steps = _i(config, interrupt_cap)
    return _sorted_transitions(config, ((Interrupt(ids), t) for ids, t in steps))


def preemptive_completions(
    config: Term,
    defs: Definitions = EMPTY_DEFINITIONS,
    *,
    interrupt_cap: int = DEFAULT_INTERRUPT_CAP,
) -> tuple[Transition, ...]:
    """Every consuming completion, including coupled tau completions."""
    del defs  # completions fire on running prefixes only, never on constants
    steps = _cp(config, interrupt_cap)
    return _sorted_transitions(
        config, ((CompletePreemptive(i, a, n), t) for i, a, n, t in steps)
    )


def conservative_completions(
    config: Term,
    defs: Definitions = EMPTY_DEFINITIONS,
    *,
    interrupt_cap: int = DEFAULT_INTERRUPT_CAP,
) -> tuple[Transition, ...]:
    """Every re-arming completion, the continuation riding in the label."""
    del defs
    steps = _cc(config, interrupt_cap)
    return _sorted_transitions(
        config, ((CompleteConservative(i, a, n, c), t) for i, a, n, c, t in steps)
    )


def all_steps(
    config: Term,
    defs: Definitions = EMPTY_DEFINITIONS,
    *,
    interrupt_cap: int = DEFAULT_INTERRUPT_CAP,
) -> tuple[Transition, ...]:
    """The union of the four relations, deterministically ordered."""
    out = (
        handshake_steps(config, defs)
        + interrupt_steps(config, interrupt_cap=interrupt_cap)
        + preemptive_completions(config, interrupt_cap=interrupt_cap)
        + conservative_completions(config, interrupt_cap=interrupt_cap)
    )
    return tuple(sorted(set(out), key=transition_sort_key))


def is_system_step(t: Transition) -> bool:
    """A closed-system move: a tau start, or a tau completion demanding nothing."""
    if isinstance(t.label, Handshake):
        return t.label.action.is_tau
    if isinstance(t.label, CompletePreemptive):
        return t.label.action.is_tau and not t.label.demanded
    return False


def system_steps(
    config: Term,
    defs: Definitions = EMPTY_DEFINITIONS,
    *,
    interrupt_cap: int = DEFAULT_INTERRUPT_CAP,
) -> tuple[Transition, ...]:
    """The observable subset of ``all_steps`` for a closed system."""
    return tuple(t for t in all_steps(config, defs, interrupt_cap=interrupt_cap)
                 if is_system_step(t))
