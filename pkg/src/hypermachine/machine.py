"""Deterministic Turing machines over bi-infinite tapes, with bounded runs.

The model: a finite control (states plus a deterministic rule table), one or
more tapes unbounded in both directions, and one head per tape.  A rule maps
(state, scanned symbols) to (next state, written symbols, head moves).  A run
halts when the control reaches a final state or no rule applies; otherwise it
stops when the step budget is exhausted.  Final states are flagged as
result-bearing or resultless; only a result-bearing halt yields a result word.

Tapes are stored sparsely as {cell: symbol} with blank cells absent, so every
reachable configuration is finite and cheap to copy, compare, and replay.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator, Mapping

LEFT = "L"
RIGHT = "R"
STAY = "S"
MOVES = (LEFT, RIGHT, STAY)
BLANK = "_"

_DELTA = {LEFT: -1, RIGHT: 1, STAY: 0}

Symbols = tuple[str, ...]
RuleKey = tuple[str, Symbols]
RuleBody = tuple[str, Symbols, Symbols]


class HypermachineError(Exception):
    """Base class for every error raised by this package."""


class StructureError(HypermachineError):
    """A machine, configuration, or edit violates a structural invariant."""


class InputError(HypermachineError):
    """An input word or argument lies outside the declared domain."""


@dataclass(frozen=True, eq=True)
class Machine:
    """An immutable deterministic machine.

    ``rules`` maps (state, scanned-symbol tuple) to (next state, written
    symbols, moves); the tuple arity always equals ``tape_count``.  ``finals``
    maps each final state to True (result-bearing) or False (resultless).
    Machines are never mutated after construction and are safe to share.
    """

    name: str
    tape_count: int
    alphabet: Symbols  # includes blank
    blank: str
    states: tuple[str, ...]
    start: str
    finals: Mapping[str, bool]
    rules: Mapping[RuleKey, RuleBody]

    def __post_init__(self) -> None:
        if self.tape_count < 1:
            raise StructureError(f"tape_count must be >= 1, got {self.tape_count}")
        if len(set(self.states)) != len(self.states):
            raise StructureError("duplicate state names")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise StructureError("duplicate alphabet symbols")
        if self.blank not in self.alphabet:
            raise StructureError("blank symbol must be part of the alphabet")
        for sym in self.alphabet:
            if len(sym) != 1:
                raise StructureError(f"symbols must be single characters, got {sym!r}")
        declared = set(self.states)
        if self.start not in declared:
            raise StructureError(f"start state {self.start!r} is not declared")
        for q in self.finals:
            if q not in declared:
                raise StructureError(f"final state {q!r} is not declared")
        symbols = set(self.alphabet)
        for (state, syms), (nstate, writes, moves) in self.rules.items():
            if state not in declared or nstate not in declared:
                raise StructureError(f"rule ({state!r}, {syms!r}) references an undeclared state")
            if state in self.finals:
                raise StructureError(f"rule declared for final state {state!r}")
            if not (len(syms) == len(writes) == len(moves) == self.tape_count):
                raise StructureError(f"rule ({state!r}, {syms!r}) has wrong arity")
            for sym in syms + writes:
                if sym not in symbols:
                    raise StructureError(f"rule ({state!r}, {syms!r}) uses unknown symbol {sym!r}")
            for move in moves:
                if move not in MOVES:
                    raise StructureError(f"rule ({state!r}, {syms!r}) has invalid move {move!r}")

    @property
    def input_alphabet(self) -> Symbols:
        return tuple(sym for sym in self.alphabet if sym != self.blank)


def single_tape_machine(
    name: str,
    rules: Mapping[tuple[str, str], tuple[str, str, str]],
    finals: Mapping[str, bool] | None = None,
    start: str = "q0",
    alphabet: Symbols = ("0", "1"),
    extra_states: tuple[str, ...] = (),
) -> Machine:
    """Build a single-tape machine from scalar (state, symbol) rules."""
    finals = dict(finals or {})
    states: list[str] = [start]
    for (q, _), (nq, _, _) in rules.items():
        for s in (q, nq):
            if s not in states:
                states.append(s)
    for q in list(finals) + list(extra_states):
        if q not in states:
            states.append(q)
    return Machine(
        name=name,
        tape_count=1,
        alphabet=(BLANK,) + tuple(alphabet),
        blank=BLANK,
        states=tuple(states),
        start=start,
        finals=finals,
        rules={(q, (s,)): (nq, (w,), (m,)) for (q, s), (nq, w, m) in rules.items()},
    )


def multi_tape_machine(
    name: str,
    tape_count: int,
    rules: Mapping[RuleKey, RuleBody],
    finals: Mapping[str, bool] | None = None,
    start: str = "q0",
    alphabet: Symbols = ("0", "1"),
) -> Machine:
    """Build a multi-tape machine; rule keys carry one symbol per tape."""
    finals = dict(finals or {})
    states: list[str] = [start]
    for (q, _), (nq, _, _) in rules.items():
        for s in (q, nq):
            if s not in states:
                states.append(s)
    for q in finals:
        if q not in states:
            states.append(q)
    return Machine(
        name=name,
        tape_count=tape_count,
        alphabet=(BLANK,) + tuple(alphabet),
        blank=BLANK,
        states=tuple(states),
        start=start,
        finals=finals,
        rules=dict(rules),
    )


@dataclass
class Configuration:
    """A full instantaneous description: state, tapes, heads, step count."""

    state: str
    tapes: tuple[dict[int, str], ...]
    heads: tuple[int, ...]
    step: int = 0

    def copy(self) -> "Configuration":
        return Configuration(self.state, tuple(dict(t) for t in self.tapes), self.heads, self.step)


# --- step results ---------------------------------------------------------


@dataclass(frozen=True)
class NextConfig:
    config: Configuration


@dataclass(frozen=True)
class NoRule:
    pass


@dataclass(frozen=True)
class AtFinal:
    pass


NO_RULE = NoRule()
AT_FINAL = AtFinal()


# --- run outcomes ---------------------------------------------------------


@dataclass(frozen=True)
class HaltedWithResult:
    result: str
    steps: int


@dataclass(frozen=True)
class HaltedResultless:
    steps: int


@dataclass(frozen=True)
class BudgetExhausted:
    steps: int
    config: Configuration


RunOutcome = HaltedWithResult | HaltedResultless | BudgetExhausted


def outcomes_agree(a: RunOutcome, b: RunOutcome) -> bool:
    """Same variant and same result word; step counts are ignored."""
    if type(a) is not type(b):
        return False
    if isinstance(a, HaltedWithResult):
        return a.result == b.result
    return True


def trimmed_word(tape: Mapping[int, str], blank: str = BLANK) -> str:
    """Tape content between the outermost non-blank cells; all-blank -> ε.

    Interior blank cells, should a machine leave any, appear as the blank
    glyph so that distinct tapes never collapse to the same word.
    """
    if not tape:
        return ""
    lo = min(tape)
    hi = max(tape)
    return "".join(tape.get(i, blank) for i in range(lo, hi + 1))


def initial_configuration(machine: Machine, input_word: str) -> Configuration:
    """Input on tape 0 starting at cell 0, all heads at 0."""
    symbols = set(machine.alphabet)
    for ch in input_word:
        if ch == machine.blank:
            raise InputError("input words may not contain the blank symbol")
        if ch not in symbols:
            raise InputError(f"input symbol {ch!r} is not in the alphabet")
    tape0 = {i: ch for i, ch in enumerate(input_word)}
    tapes = (tape0,) + tuple({} for _ in range(machine.tape_count - 1))
    return Configuration(state=machine.start, tapes=tapes, heads=(0,) * machine.tape_count, step=0)


def step(machine: Machine, config: Configuration) -> NextConfig | NoRule | AtFinal:
    """Apply the unique matching rule once; pure with respect to ``config``."""
    if len(config.tapes) != machine.tape_count or len(config.heads) != machine.tape_count:
        raise StructureError("configuration tape/head arity does not match the machine")
    if config.state not in set(machine.states):
        raise StructureError(f"configuration state {config.state!r} is not declared")
    if config.state in machine.finals:
        return AT_FINAL
    syms = tuple(t.get(h, machine.blank) for t, h in zip(config.tapes, config.heads))
    rule = machine.rules.get((config.state, syms))
    if rule is None:
        return NO_RULE
    nstate, writes, moves = rule
    tapes = []
    heads = []
    for tape, head, w, m in zip(config.tapes, config.heads, writes, moves):
        new = dict(tape)
        if w == machine.blank:
            new.pop(head, None)
        else:
            new[head] = w
        tapes.append(new)
        heads.append(head + _DELTA[m])
    return NextConfig(Configuration(nstate, tuple(tapes), tuple(heads), config.step + 1))


def config_sequence(machine: Machine, input_word: str, budget: int) -> list[Configuration]:
    """The configurations visited by a bounded run, initial one included."""
    _check_budget(budget)
    config = initial_configuration(machine, input_word)
    seq = [config]
    while config.step < budget:
        nxt = step(machine, config)
        if not isinstance(nxt, NextConfig):
            break
        config = nxt.config
        seq.append(config)
    return seq


def _check_budget(budget: int) -> None:
    if budget < 1:
        raise InputError(f"budget must be >= 1, got {budget}")


_FINAL, _NORULE, _BUDGET = 0, 1, 2


def _compiled_rows(machine: Machine) -> dict[str, dict]:
    """Per-state rule rows for non-final states; a final state has no row."""
    rows: dict[str, dict] = {q: {} for q in machine.states if q not in machine.finals}
    single = machine.tape_count == 1
    for (state, syms), (nstate, writes, moves) in machine.rules.items():
        if single:
            rows[state][syms[0]] = (nstate, writes[0], writes[0] == machine.blank, _DELTA[moves[0]])
        else:
            rows[state][syms] = (nstate, writes, tuple(_DELTA[m] for m in moves))
    return rows


def _run_single(machine: Machine, tape: dict[int, str], budget: int):
    rows = _compiled_rows(machine)
    blank = machine.blank
    state = machine.start
    head = 0
    steps = 0
    row = rows.get(state)
    get = tape.get
    pop = tape.pop
    while steps < budget:
        if row is None:
            return _FINAL, state, head, steps
        rule = row.get(get(head, blank))
        if rule is None:
            return _NORULE, state, head, steps
        nstate, wsym, wblank, delta = rule
        if wblank:
            pop(head, None)
        else:
            tape[head] = wsym
        head += delta
        steps += 1
        if nstate is not state:
            state = nstate
            row = rows.get(state)
    return _BUDGET, state, head, steps


def _run_multi(machine: Machine, tapes: tuple[dict[int, str], ...], budget: int):
    rows = _compiled_rows(machine)
    blank = machine.blank
    state = machine.start
    heads = [0] * machine.tape_count
    steps = 0
    while steps < budget:
        row = rows.get(state)
        if row is None:
            return _FINAL, state, heads, steps
        syms = tuple(t.get(h, blank) for t, h in zip(tapes, heads))
        rule = row.get(syms)
        if rule is None:
            return _NORULE, state, heads, steps
        state, writes, deltas = rule
        for i in range(machine.tape_count):
            w = writes[i]
            h = heads[i]
            if w == blank:
                tapes[i].pop(h, None)
            else:
                tapes[i][h] = w
            heads[i] = h + deltas[i]
        steps += 1
    return _BUDGET, state, heads, steps


def result_tape_index(machine: Machine) -> int:
    """Single tape carries the result; multi-tape machines use the last tape."""
    return 0 if machine.tape_count == 1 else machine.tape_count - 1


def run_bounded(machine: Machine, input_word: str, budget: int) -> RunOutcome:
    """Run from the standard initial configuration for at most ``budget`` steps.

    Stopping is discovered by attempting to continue: a run that lands in a
    final state, or a stuck configuration, exactly on the last budgeted step
    reports BudgetExhausted, and counts as halted only under a strictly
    larger budget.  Larger budgets therefore refine, and never contradict,
    smaller ones.
    """
    _check_budget(budget)
    init = initial_configuration(machine, input_word)
    tapes = init.tapes
    if machine.tape_count == 1:
        kind, state, head, steps = _run_single(machine, tapes[0], budget)
        heads = (head,)
    else:
        kind, state, heads_list, steps = _run_multi(machine, tapes, budget)
        heads = tuple(heads_list)
    if kind == _BUDGET:
        return BudgetExhausted(steps, Configuration(state, tapes, heads, steps))
    if kind == _NORULE or not machine.finals[state]:
        return HaltedResultless(steps)
    return HaltedWithResult(trimmed_word(tapes[result_tape_index(machine)], machine.blank), steps)


class HaltProbe:
    """Incremental halting queries against a single machine run.

    ``halted_by(b)`` answers exactly as ``run_bounded(machine, word, b)``
    would, advancing a persistent simulation only as far as needed, so a
    sweep over growing budgets costs one pass instead of one run per budget.
    """

    def __init__(self, machine: Machine, input_word: str):
        self.machine = machine
        self._config = initial_configuration(machine, input_word)
        self._halt_step: int | None = None

    def _advance(self, budget: int) -> None:
        while self._halt_step is None and self._config.step < budget:
            nxt = step(self.machine, self._config)
            if isinstance(nxt, NextConfig):
                self._config = nxt.config
            else:
                self._halt_step = self._config.step
                break

    def halted_by(self, budget: int) -> bool:
        _check_budget(budget)
        self._advance(budget)
        # Halting is discovered by attempting the next step, so it needs a
        # budget strictly beyond the halt step.
        return self._halt_step is not None and self._halt_step < budget

    @property
    def halt_step(self) -> int | None:
        return self._halt_step


def words_over(alphabet: Symbols, max_length: int) -> Iterator[str]:
    """All words up to the given length in length-lexicographic order."""
    from itertools import product

    for length in range(max_length + 1):
        for chars in product(alphabet, repeat=length):
            yield "".join(chars)


@dataclass(frozen=True)
class EquivalentUpTo:
    max_input_length: int
    budget: int


@dataclass(frozen=True)
class Counterexample:
    word: str
    outcome1: RunOutcome
    outcome2: RunOutcome


def observational_equiv(
    m1: Machine, m2: Machine, max_input_length: int, budget: int
) -> EquivalentUpTo | Counterexample:
    """Compare bounded outcomes on every word up to the given length.

    The empty word is compared first; the reported counterexample is the
    earliest mismatch in length-lexicographic order.
    """
    if set(m1.input_alphabet) != set(m2.input_alphabet):
        raise InputError("machines do not share an input alphabet")
    for word in words_over(m1.input_alphabet, max_input_length):
        o1 = run_bounded(m1, word, budget)
        o2 = run_bounded(m2, word, budget)
        if not outcomes_agree(o1, o2):
            return Counterexample(word, o1, o2)
    return EquivalentUpTo(max_input_length, budget)
