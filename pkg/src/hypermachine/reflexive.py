"""Machines that edit their own rule table while running.

Edits are declared up front, attached to rules of the base machine: when the
rule for (state, symbols) fires, its attached action installs or replaces one
rule in the live table, after the write/move/state-change of the same step.
Everything an action may do is validated at construction time, so runs never
fail mid-flight and the table remains a deterministic partial function after
every edit.  Each run owns a private copy of the table; the machine itself is
immutable and shareable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .machine import (
    BudgetExhausted,
    Configuration,
    HaltedResultless,
    HaltedWithResult,
    InputError,
    Machine,
    MOVES,
    RuleBody,
    RuleKey,
    RunOutcome,
    StructureError,
    Symbols,
    initial_configuration,
    result_tape_index,
    run_bounded,
    trimmed_word,
)


@dataclass(frozen=True)
class InstallRule:
    """Add a rule for a pair that has none in the base table."""

    target_state: str
    target_symbols: Symbols
    next_state: str
    writes: Symbols
    moves: Symbols


@dataclass(frozen=True)
class ReplaceRule:
    """Overwrite the rule of a pair that already has one."""

    target_state: str
    target_symbols: Symbols
    next_state: str
    writes: Symbols
    moves: Symbols


EditAction = InstallRule | ReplaceRule


@dataclass(frozen=True)
class EditLog:
    entries: tuple[tuple[int, EditAction], ...]


@dataclass(frozen=True)
class ReflexiveMachine:
    base: Machine
    edits: Mapping[RuleKey, EditAction]

    def __post_init__(self) -> None:
        base = self.base
        declared = set(base.states)
        symbols = set(base.alphabet)
        install_targets = {
            (a.target_state, a.target_symbols)
            for a in self.edits.values()
            if isinstance(a, InstallRule)
        }
        for key, action in self.edits.items():
            if key not in base.rules:
                raise StructureError(f"edit attached to nonexistent rule {key!r}")
            target = (action.target_state, action.target_symbols)
            for q in (action.target_state, action.next_state):
                if q not in declared:
                    raise StructureError(f"edit references undeclared state {q!r}")
            if action.target_state in base.finals:
                raise StructureError(f"edit targets final state {action.target_state!r}")
            if not (
                len(action.target_symbols)
                == len(action.writes)
                == len(action.moves)
                == base.tape_count
            ):
                raise StructureError(f"edit for {target!r} has wrong arity")
            for sym in action.target_symbols + action.writes:
                if sym not in symbols:
                    raise StructureError(f"edit references unknown symbol {sym!r}")
            for move in action.moves:
                if move not in MOVES:
                    raise StructureError(f"edit has invalid move {move!r}")
            if isinstance(action, InstallRule) and target in base.rules:
                raise StructureError(f"install edit targets existing rule {target!r}")
            if isinstance(action, ReplaceRule) and target not in base.rules and target not in install_targets:
                raise StructureError(f"replace edit targets missing rule {target!r}")

    @property
    def rhs(self) -> Mapping[RuleKey, RuleBody]:
        return self.base.rules


def _action_rule(action: EditAction) -> tuple[RuleKey, RuleBody]:
    return (
        (action.target_state, action.target_symbols),
        (action.next_state, action.writes, action.moves),
    )


def _run(
    rm: ReflexiveMachine,
    input_word: str,
    budget: int,
    record: list[Configuration] | None,
    debug: bool = False,
) -> tuple[RunOutcome, EditLog]:
    if budget < 1:
        raise InputError(f"budget must be >= 1, got {budget}")
    base = rm.base
    config = initial_configuration(base, input_word)
    tapes = [dict(t) for t in config.tapes]
    heads = list(config.heads)
    state = base.start
    blank = base.blank
    live: dict[RuleKey, RuleBody] = dict(base.rules)
    log: list[tuple[int, EditAction]] = []
    steps = 0
    k = base.tape_count

    def snapshot() -> Configuration:
        return Configuration(state, tuple(dict(t) for t in tapes), tuple(heads), steps)

    if record is not None:
        record.append(snapshot())
    while True:
        if steps == budget:
            return BudgetExhausted(steps, snapshot()), EditLog(tuple(log))
        if state in base.finals:
            if base.finals[state]:
                word = trimmed_word(tapes[result_tape_index(base)], blank)
                return HaltedWithResult(word, steps), EditLog(tuple(log))
            return HaltedResultless(steps), EditLog(tuple(log))
        syms = tuple(t.get(h, blank) for t, h in zip(tapes, heads))
        rule = live.get((state, syms))
        if rule is None:
            return HaltedResultless(steps), EditLog(tuple(log))
        fired = (state, syms)
        state, writes, moves = rule
        for i in range(k):
            w = writes[i]
            h = heads[i]
            if w == blank:
                tapes[i].pop(h, None)
            else:
                tapes[i][h] = w
            heads[i] = h + (-1 if moves[i] == "L" else (1 if moves[i] == "R" else 0))
        steps += 1
        action = rm.edits.get(fired)
        if action is not None:
            key, body = _action_rule(action)
            live[key] = body
            log.append((steps, action))
            if debug:
                # the table is keyed, so it stays a partial function; check
                # that the fresh rule only references declared entities
                declared = set(base.states)
                alphabet = set(base.alphabet)
                assert key[0] in declared and body[0] in declared
                assert all(s in alphabet for s in key[1] + body[1])
        if record is not None:
            record.append(snapshot())


def reflexive_run(
    rm: ReflexiveMachine, input_word: str, budget: int, debug: bool = False
) -> tuple[RunOutcome, EditLog]:
    """Bounded run applying attached edits to a private copy of the table.

    With an empty edit map this is step-for-step identical to running the
    base machine.
    """
    return _run(rm, input_word, budget, record=None, debug=debug)


def reflexive_config_sequence(
    rm: ReflexiveMachine, input_word: str, budget: int
) -> tuple[list[Configuration], EditLog]:
    """The visited configurations (initial one included) plus the edit log."""
    record: list[Configuration] = []
    _, log = _run(rm, input_word, budget, record=record)
    return record, log


@dataclass(frozen=True)
class EfficiencyRow:
    word: str
    static_steps: int
    reflexive_steps: int
    same_result: bool


def compare_efficiency(
    static_m: Machine, rm: ReflexiveMachine, inputs: list[str], budget: int
) -> tuple[EfficiencyRow, ...]:
    """Step counts of a plain machine against a self-editing one, input by
    input; same_result compares result words only."""
    if set(static_m.input_alphabet) != set(rm.base.input_alphabet):
        raise InputError("machines do not share an input alphabet")
    rows = []
    for word in inputs:
        static_outcome = run_bounded(static_m, word, budget)
        reflexive_outcome, _ = reflexive_run(rm, word, budget)
        rows.append(
            EfficiencyRow(
                word=word,
                static_steps=static_outcome.steps,
                reflexive_steps=reflexive_outcome.steps,
                same_result=_result_word(static_outcome) == _result_word(reflexive_outcome),
            )
        )
    return tuple(rows)


def _result_word(outcome: RunOutcome) -> str | None:
    return outcome.result if isinstance(outcome, HaltedWithResult) else None
