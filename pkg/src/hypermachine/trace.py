"""Byte-stable trace records and the sample-while-running watch mode."""

from __future__ import annotations

from dataclasses import dataclass

from .inductive import (
    BlankRunaway,
    CertifiedStable,
    ConfigurationCycle,
    Halted,
    InductiveOutcome,
    Provisional,
    inductive_run,
)
from .machine import Configuration, Machine, NextConfig, initial_configuration, step, trimmed_word


@dataclass(frozen=True)
class TraceRecord:
    step: int
    state: str
    heads: tuple[int, ...]
    tapes: tuple[str, ...]  # trimmed contents
    out: str | None = None  # output snapshot for inductive runs

    def render(self) -> str:
        parts = [f"step={self.step}", f"state={self.state}", f"head={self.heads[0]}", f"tape={self.tapes[0]}"]
        for i in range(1, len(self.heads)):
            parts.append(f"head{i + 1}={self.heads[i]}")
            parts.append(f"tape{i + 1}={self.tapes[i]}")
        if self.out is not None:
            parts.append(f"out={self.out}")
        return "\t".join(parts)


def record_of(machine: Machine, config: Configuration, with_output: bool = False) -> TraceRecord:
    tapes = tuple(trimmed_word(t, machine.blank) for t in config.tapes)
    return TraceRecord(
        step=config.step,
        state=config.state,
        heads=config.heads,
        tapes=tapes,
        out=tapes[-1] if with_output and machine.tape_count > 1 else None,
    )


def trace_run(machine: Machine, input_word: str, budget: int) -> list[TraceRecord]:
    """One record per visited configuration, the initial one included."""
    with_output = machine.tape_count == 3
    config = initial_configuration(machine, input_word)
    records = [record_of(machine, config, with_output)]
    while config.step < budget:
        nxt = step(machine, config)
        if not isinstance(nxt, NextConfig):
            break
        config = nxt.config
        records.append(record_of(machine, config, with_output))
    return records


def emit_trace(records: list[TraceRecord]) -> str:
    """Line-oriented rendering; an empty stream renders as empty output."""
    return "".join(record.render() + "\n" for record in records)


def render_window(config: Configuration, tape_index: int = 0, blank: str = "_") -> str:
    """Human-oriented tape window with the head cell bracketed."""
    tape = config.tapes[tape_index]
    head = config.heads[tape_index]
    cells = set(tape) | {head}
    lo, hi = min(cells), max(cells)
    out = []
    for i in range(lo, hi + 1):
        sym = tape.get(i, blank)
        out.append(f"[{sym}]" if i == head else sym)
    return "".join(out)


def describe_status(status: CertifiedStable | Provisional) -> str:
    if isinstance(status, Provisional):
        return "provisional"
    reason = status.reason
    if isinstance(reason, Halted):
        return "certified-halted"
    if isinstance(reason, ConfigurationCycle):
        return f"certified-nonhalting:cycle(period={reason.period},first_repeat={reason.first_repeat_step})"
    if isinstance(reason, BlankRunaway):
        direction = "".join(reason.direction)
        return f"certified-nonhalting:runaway(state={reason.state},direction={direction},onset={reason.onset_step})"
    raise AssertionError(f"unknown status {status!r}")


def summary_line(outcome: InductiveOutcome) -> str:
    return (
        f"summary\tsteps={outcome.steps_executed}\tout={outcome.current_output}"
        f"\tlast_change={outcome.last_change_step}\tstatus={describe_status(outcome.status)}"
    )


def watch(machine: Machine, input_word: str, interval: int, budget: int) -> tuple[list[str], InductiveOutcome]:
    """Run inductively, reporting the output every ``interval`` steps.

    The run ends at halt, certificate, or budget; a summary line always
    follows the snapshots, and is the only line when the run ends before the
    first sampling point.
    """
    from .machine import InputError

    if interval < 1:
        raise InputError("interval must be >= 1")
    outcome = inductive_run(machine, input_word, budget)
    lines = []
    at = interval
    while at <= outcome.steps_executed:
        status = describe_status(outcome.status) if at == outcome.steps_executed else "provisional"
        lines.append(f"step={at}\tout={outcome.log.output_at(at)}\tstatus={status}")
        at += interval
    lines.append(summary_line(outcome))
    return lines, outcome
