"""Machines whose result is the output word once it stops changing.

A three-tape machine (input, working, output) is run under a step budget and
every change of the trimmed output-tape content is logged.  The result is the
current output word together with an honest epistemic status:

* ``CertifiedStable(Halted())``  - the run halted, nothing can change;
* ``CertifiedStable(cert)``      - the run provably never halts and the
  certificate implies the output can never change again;
* ``Provisional()``              - the budget ran out first; the current word
  may still be revised by a longer run.

Non-halting certificates are sound but deliberately incomplete: a full
decision procedure cannot exist.  Two finite, machine-checkable patterns are
recognised - an exact repeat of a (translation-normalised) configuration, and
a head running away over blank cells in a self-returning state.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .codec import (
    Description,
    UnsupportedMachineError,
    decode,
    index_word,
    nth_description,
    universal_run,
    word_index,
)
from .machine import (
    BudgetExhausted,
    HaltedWithResult,
    InputError,
    Machine,
    RunOutcome,
    STAY,
    initial_configuration,
    run_bounded,
    trimmed_word,
)

CandidateDecider = Callable[[Description, str], bool]


# --- certificates and statuses ---------------------------------------------


@dataclass(frozen=True)
class ConfigurationCycle:
    """Normalised configurations at first_repeat_step and first_repeat_step +
    period are identical, so the run is exactly periodic from there on."""

    period: int
    first_repeat_step: int


@dataclass(frozen=True)
class BlankRunaway:
    """From onset_step the machine sits in ``state`` forever: every head reads
    blank and either stays put or moves away from the non-blank extent, and
    the single applicable rule returns to ``state`` writing only blanks."""

    state: str
    direction: tuple[str, ...]
    onset_step: int


NonHaltingCertificate = ConfigurationCycle | BlankRunaway


@dataclass(frozen=True)
class Halted:
    pass


HALTED = Halted()


@dataclass(frozen=True)
class CertifiedStable:
    reason: Halted | NonHaltingCertificate


@dataclass(frozen=True)
class Provisional:
    pass


PROVISIONAL = Provisional()


@dataclass(frozen=True)
class ObservationLog:
    """Output snapshots at step 0 and at every step where the trimmed output
    changed; steps strictly increase and consecutive snapshots differ."""

    entries: tuple[tuple[int, str], ...]

    def output_at(self, step: int) -> str:
        current = self.entries[0][1]
        for at, word in self.entries:
            if at > step:
                break
            current = word
        return current


@dataclass(frozen=True)
class InductiveOutcome:
    current_output: str
    last_change_step: int
    steps_executed: int
    status: CertifiedStable | Provisional
    log: ObservationLog


# --- the observing engine ---------------------------------------------------

_CYCLE_CELL_CAP = 64  # configurations larger than this are not cycle-tracked


@dataclass
class _Observed:
    halted: bool
    halt_step: int
    result_bearing: bool
    result: str
    certificate: NonHaltingCertificate | None
    steps: int
    changes: list[tuple[int, str]]


def _normalized(state: str, tapes, heads) -> tuple:
    return (
        state,
        tuple(
            tuple(sorted((cell - head, sym) for cell, sym in tape.items()))
            for tape, head in zip(tapes, heads)
        ),
    )


def _runaway_direction_ok(move: str, tape: dict, head: int) -> bool:
    if move == STAY:
        return True
    if not tape:
        return True
    if move == "R":
        return head > max(tape)
    return head < min(tape)


def _observe(machine: Machine, input_word: str, budget: int, track_output: bool) -> _Observed:
    if budget < 1:
        raise InputError(f"budget must be >= 1, got {budget}")
    if machine.tape_count == 1:
        if track_output:
            raise UnsupportedMachineError("output tracking needs a 3-tape machine")
        return _observe_single(machine, input_word, budget)
    return _observe_multi(machine, input_word, budget, track_output)


def _observe_single(machine: Machine, input_word: str, budget: int) -> _Observed:
    config = initial_configuration(machine, input_word)
    tape = dict(config.tapes[0])
    head = 0
    state = machine.start
    blank = machine.blank
    finals = machine.finals
    # per-rule precomputation; the runaway flag marks a blank self-loop that
    # writes blank and moves, the only rule shape a runaway can repeat
    rows: dict[str, dict] = {}
    for (q, syms), (nq, writes, moves) in machine.rules.items():
        sym, w, m = syms[0], writes[0], moves[0]
        runaway = sym == blank and nq == q and w == blank and m != STAY
        rows.setdefault(q, {})[sym] = (nq, w, w == blank, -1 if m == "L" else (1 if m == "R" else 0), m, runaway)
    steps = 0
    seen: dict[tuple, int] = {}
    certificate: NonHaltingCertificate | None = None
    get = tape.get
    pop = tape.pop
    while True:
        if steps == budget:
            break
        if state in finals:
            bearing = finals[state]
            result = trimmed_word(tape, blank) if bearing else ""
            return _Observed(True, steps, bearing, result, None, steps, [])
        row = rows.get(state)
        rule = None if row is None else row.get(get(head, blank))
        if rule is None:
            return _Observed(True, steps, False, "", None, steps, [])
        nstate, wsym, wblank, delta, move, runaway = rule
        if runaway and (not tape or (head > max(tape) if move == "R" else head < min(tape))):
            certificate = BlankRunaway(state, (move,), steps)
            break
        if len(tape) <= _CYCLE_CELL_CAP:
            key = (state, tuple(sorted((cell - head, sym) for cell, sym in tape.items())))
            first = seen.get(key)
            if first is not None:
                certificate = ConfigurationCycle(steps - first, first)
                break
            seen[key] = steps
        if wblank:
            pop(head, None)
        else:
            tape[head] = wsym
        head += delta
        state = nstate
        steps += 1
    return _Observed(False, -1, False, "", certificate, steps, [])


def _observe_multi(machine: Machine, input_word: str, budget: int, track_output: bool) -> _Observed:
    config = initial_configuration(machine, input_word)
    tapes = [dict(t) for t in config.tapes]
    heads = list(config.heads)
    state = machine.start
    blank = machine.blank
    finals = machine.finals
    rules = machine.rules
    k = machine.tape_count
    out_idx = k - 1
    steps = 0
    changes: list[tuple[int, str]] = [(0, "")] if track_output else []
    current_out = ""
    seen: dict[tuple, int] = {}
    certificate: NonHaltingCertificate | None = None
    cells = sum(len(t) for t in tapes)

    while True:
        if steps == budget:
            break
        if state in finals:
            result = trimmed_word(tapes[out_idx], blank) if finals[state] else ""
            return _Observed(True, steps, finals[state], result, None, steps, changes)
        syms = tuple(t.get(h, blank) for t, h in zip(tapes, heads))
        rule = rules.get((state, syms))
        if rule is None:
            return _Observed(True, steps, False, "", None, steps, changes)
        nstate, writes, moves = rule
        if (
            nstate == state
            and all(s == blank for s in syms)
            and all(w == blank for w in writes)
            and any(m != STAY for m in moves)
            and all(_runaway_direction_ok(m, t, h) for m, t, h in zip(moves, tapes, heads))
        ):
            certificate = BlankRunaway(state, tuple(moves), steps)
            break
        if cells <= _CYCLE_CELL_CAP:
            key = _normalized(state, tapes, heads)
            first = seen.get(key)
            if first is not None:
                certificate = ConfigurationCycle(steps - first, first)
                break
            seen[key] = steps
        for i in range(k):
            w = writes[i]
            h = heads[i]
            tape = tapes[i]
            if w == blank:
                if tape.pop(h, None) is not None:
                    cells -= 1
            else:
                if h not in tape:
                    cells += 1
                tape[h] = w
            heads[i] = h + (-1 if moves[i] == "L" else (1 if moves[i] == "R" else 0))
        if track_output and writes[out_idx] != syms[out_idx]:
            word = trimmed_word(tapes[out_idx], blank)
            if word != current_out:
                current_out = word
                changes.append((steps + 1, word))
        state = nstate
        steps += 1

    return _Observed(False, -1, False, "", certificate, steps, changes)


# --- public operations ------------------------------------------------------


def inductive_run(machine: Machine, input_word: str, budget: int) -> InductiveOutcome:
    """Run a three-tape machine, logging output changes, until it halts, a
    non-halting certificate fires, or the budget runs out."""
    if machine.tape_count != 3:
        raise UnsupportedMachineError("inductive runs need a 3-tape machine (input, working, output)")
    obs = _observe(machine, input_word, budget, track_output=True)
    log = ObservationLog(tuple(obs.changes))
    last_step, current = log.entries[-1]
    if obs.halted:
        status: CertifiedStable | Provisional = CertifiedStable(HALTED)
    elif isinstance(obs.certificate, BlankRunaway):
        status = CertifiedStable(obs.certificate)
    elif isinstance(obs.certificate, ConfigurationCycle):
        # Output changes inside the repeating window recur forever; only a
        # change-free window certifies stability.
        if last_step <= obs.certificate.first_repeat_step:
            status = CertifiedStable(obs.certificate)
        else:
            status = PROVISIONAL
    else:
        status = PROVISIONAL
    return InductiveOutcome(current, last_step, obs.steps, status, log)


@dataclass(frozen=True)
class Certificate:
    certificate: NonHaltingCertificate


@dataclass(frozen=True)
class HaltsAt:
    steps: int


@dataclass(frozen=True)
class Unknown:
    pass


UNKNOWN = Unknown()


def certify_nonhalting(machine: Machine, input_word: str, budget: int) -> Certificate | HaltsAt | Unknown:
    """Sound, incomplete non-halting detection; never a false certificate."""
    obs = _observe(machine, input_word, budget, track_output=False)
    if obs.halted:
        return HaltsAt(obs.halt_step)
    if obs.certificate is not None:
        return Certificate(obs.certificate)
    return UNKNOWN


def halting_limit_decider(description: Description, input_word: str, budget: int) -> InductiveOutcome:
    """Limit-style halting decision: output 0 while the simulated machine
    runs, flipping to 1 exactly when it halts within the budget."""
    machine = decode(description)
    obs = _observe(machine, input_word, budget, track_output=False)
    if obs.halted:
        entries = ((0, "1"),) if obs.halt_step == 0 else ((0, "0"), (obs.halt_step, "1"))
        status: CertifiedStable | Provisional = CertifiedStable(HALTED)
    else:
        entries = ((0, "0"),)
        if obs.certificate is not None:
            status = CertifiedStable(obs.certificate)
        else:
            status = PROVISIONAL
    log = ObservationLog(entries)
    last_step, current = log.entries[-1]
    return InductiveOutcome(current, last_step, obs.steps, status, log)


# --- diagonalization --------------------------------------------------------


def _diagonal_bit(
    decider: CandidateDecider, description: Description, word: str, budget: int
) -> tuple[str, bool]:
    """The anti-diagonal bit for one (machine, word) pair.

    Returns (bit, tie_break): tie_break marks the fallback taken when the
    decider claimed a halt but the bounded simulation did not finish.
    """
    if not decider(description, word):
        return "0", False
    outcome = universal_run(description, word, budget)
    if isinstance(outcome, HaltedWithResult) and outcome.result == "1":
        return "0", False
    return "1", isinstance(outcome, BudgetExhausted)


def diagonalize(decider: CandidateDecider, input_word: str, budget: int) -> str:
    """Behave differently from machine T_n on input u_n wherever the decider
    is right: n is the input's word index, T_n the n-th enumerated machine."""
    n = word_index(input_word)
    return _diagonal_bit(decider, nth_description(n), input_word, budget)[0]


@dataclass(frozen=True)
class AuditRow:
    index: int
    word: str
    claims_halt: bool
    observed: RunOutcome
    diagonal: str
    contradiction: bool
    completed: bool
    tie_break: bool


@dataclass(frozen=True)
class AuditReport:
    rows: tuple[AuditRow, ...]
    truth_budget: int
    sim_budget: int

    @property
    def contradictions(self) -> tuple[AuditRow, ...]:
        return tuple(row for row in self.rows if row.contradiction)

    def to_tsv(self) -> str:
        lines = ["index\tword\tclaim\tobserved\tdiagonal\tcontradiction\tcompleted\ttie_break"]
        for row in self.rows:
            lines.append(
                "\t".join(
                    (
                        str(row.index),
                        row.word,
                        "halt" if row.claims_halt else "no-halt",
                        _outcome_field(row.observed),
                        row.diagonal,
                        "1" if row.contradiction else "0",
                        "1" if row.completed else "0",
                        "1" if row.tie_break else "0",
                    )
                )
            )
        return "".join(line + "\n" for line in lines)


def _outcome_field(outcome: RunOutcome) -> str:
    if isinstance(outcome, HaltedWithResult):
        return f"result:{outcome.result}@{outcome.steps}"
    if isinstance(outcome, BudgetExhausted):
        return f"running@{outcome.steps}"
    return f"resultless@{outcome.steps}"


def audit_decider(
    decider: CandidateDecider,
    machine_count: int,
    truth_budget: int,
    sim_budget: int,
    rows: Sequence[tuple[Description, str]] | None = None,
) -> AuditReport:
    """Convict a would-be halting decider by observation.

    A row is flagged when the decider's claim contradicts what a
    truth-budget run shows directly (claimed no-halt, observed halt), or
    when the anti-diagonal bit coincides with the machine's own observed
    result word.  By default row n pairs the n-th enumerated machine with
    the n-th word; an explicit (description, word) list may be audited
    instead.
    """
    if truth_budget < sim_budget:
        raise InputError("truth_budget must be at least sim_budget")
    if rows is None:
        if machine_count < 0:
            raise InputError("machine_count must be >= 0")
        pairs = [(nth_description(n), index_word(n)) for n in range(machine_count)]
    else:
        pairs = list(rows)
    out = []
    for n, (description, word) in enumerate(pairs):
        claim = bool(decider(description, word))
        observed = run_bounded(decode(description), word, truth_budget)
        diagonal, tie = _diagonal_bit(decider, description, word, sim_budget)
        truth_halted = not isinstance(observed, BudgetExhausted)
        contradiction = (not claim and truth_halted) or (
            isinstance(observed, HaltedWithResult) and diagonal == observed.result
        )
        completed = truth_halted and not tie
        out.append(AuditRow(n, word, claim, observed, diagonal, contradiction, completed, tie))
    return AuditReport(tuple(out), truth_budget, sim_budget)


# --- stock deciders ---------------------------------------------------------


def budget_decider(budget: int) -> CandidateDecider:
    """Claims a halt exactly when one occurs within ``budget`` steps."""

    def claims_halt(description: Description, word: str) -> bool:
        return not isinstance(universal_run(description, word, budget), BudgetExhausted)

    return claims_halt


def certified_decider(budget: int) -> CandidateDecider:
    """Budget-bounded observation backed by non-halting certificates; claims
    no-halt when neither a halt nor a certificate shows up."""

    def claims_halt(description: Description, word: str) -> bool:
        return isinstance(certify_nonhalting(decode(description), word, budget), HaltsAt)

    return claims_halt
