"""Self-editing machines: bisimulation with the base, the specializer pair,
and the efficiency harness."""

import pytest

from hypermachine.corpus import corpus_machine, encodable_corpus
from hypermachine.machine import (
    BudgetExhausted,
    HaltedWithResult,
    InputError,
    StructureError,
    config_sequence,
    run_bounded,
    single_tape_machine,
    words_over,
)
from hypermachine.reflexive import (
    EditLog,
    InstallRule,
    ReflexiveMachine,
    ReplaceRule,
    compare_efficiency,
    reflexive_config_sequence,
    reflexive_run,
)

INTERP = corpus_machine("interp")
SPECIALIZER = corpus_machine("specializer")


def test_no_edit_wrapper_is_bisimilar_to_its_base():
    for name, machine in encodable_corpus().items():
        wrapper = ReflexiveMachine(machine, {})
        for word in ("", "0", "01", "0011"):
            plain = config_sequence(machine, word, 60)
            mirrored, log = reflexive_config_sequence(wrapper, word, 60)
            assert mirrored == plain, (name, word)
            assert log == EditLog(())


def test_no_edit_outcomes_match_run_bounded():
    machine = corpus_machine("eraser")
    wrapper = ReflexiveMachine(machine, {})
    for word in words_over(("0", "1"), 4):
        outcome, _ = reflexive_run(wrapper, word, 200)
        assert outcome == run_bounded(machine, word, 200), word


def test_specializer_golden_step_counts():
    rows = compare_efficiency(INTERP, SPECIALIZER, ["0" * 4, "0" * 8, "0" * 16], 10_000)
    assert [(r.static_steps, r.reflexive_steps) for r in rows] == [(21, 9), (41, 13), (81, 21)]
    assert all(r.same_result for r in rows)
    assert all(r.reflexive_steps < r.static_steps for r in rows)
    gaps = [r.static_steps - r.reflexive_steps for r in rows]
    assert gaps == sorted(gaps) and len(set(gaps)) == len(gaps)


def test_specializer_result_and_edit_log():
    outcome, log = reflexive_run(SPECIALIZER, "0" * 8, 1000)
    assert outcome == HaltedWithResult("1" * 8, 13)
    assert len(log.entries) == 1
    at, action = log.entries[0]
    assert at == 5
    assert isinstance(action, ReplaceRule)
    assert action.target_state == "scan"
    assert action.next_state == "scan"


def test_edit_fires_every_time_its_rule_fires():
    # the specializer's edit rule fires only once: afterwards the replaced
    # dispatch rule short-circuits it
    _, log = reflexive_run(SPECIALIZER, "0" * 16, 1000)
    assert len(log.entries) == 1


def test_power_parity_with_the_static_machine():
    # same results on every short word, echoing equality of computing power
    for word in words_over(("0", "1"), 6):
        static = run_bounded(INTERP, word, 2000)
        dynamic, _ = reflexive_run(SPECIALIZER, word, 2000)
        assert type(static) is type(dynamic), word
        if isinstance(static, HaltedWithResult):
            assert static.result == dynamic.result, word


def test_compare_efficiency_degenerate_and_empty():
    machine = corpus_machine("flip")
    wrapper = ReflexiveMachine(machine, {})
    rows = compare_efficiency(machine, wrapper, ["0", "1", ""], 100)
    assert all(r.static_steps == r.reflexive_steps and r.same_result for r in rows)
    assert compare_efficiency(machine, wrapper, [], 100) == ()


def test_compare_efficiency_requires_shared_alphabet():
    zeros = single_tape_machine("z", {("q0", "0"): ("q0", "0", "R")}, alphabet=("0",))
    with pytest.raises(InputError):
        compare_efficiency(zeros, ReflexiveMachine(corpus_machine("flip"), {}), ["0"], 10)


def test_budget_exhaustion_carries_through():
    looper = corpus_machine("loop")
    outcome, _ = reflexive_run(ReflexiveMachine(looper, {}), "", 25)
    assert isinstance(outcome, BudgetExhausted)
    assert outcome.steps == 25


# --- construction-time validation -------------------------------------------


def _base():
    return single_tape_machine(
        "base",
        {("q0", "0"): ("q1", "0", "R"), ("q1", "0"): ("q0", "0", "L")},
    )


def test_install_must_target_a_ruleless_pair():
    base = _base()
    with pytest.raises(StructureError):
        ReflexiveMachine(
            base,
            {("q0", ("0",)): InstallRule("q1", ("0",), "q1", ("0",), ("R",))},
        )


def test_replace_must_target_an_existing_rule():
    base = _base()
    with pytest.raises(StructureError):
        ReflexiveMachine(
            base,
            {("q0", ("0",)): ReplaceRule("q1", ("1",), "q1", ("0",), ("R",))},
        )


def test_replace_may_target_an_installed_rule():
    base = _base()
    machine = ReflexiveMachine(
        base,
        {
            ("q0", ("0",)): InstallRule("q0", ("1",), "q0", ("1",), ("R",)),
            ("q1", ("0",)): ReplaceRule("q0", ("1",), "q1", ("1",), ("R",)),
        },
    )
    assert len(machine.edits) == 2


def test_edit_references_must_be_declared():
    base = _base()
    with pytest.raises(StructureError):
        ReflexiveMachine(base, {("q0", ("0",)): InstallRule("zz", ("0",), "q0", ("0",), ("R",))})
    with pytest.raises(StructureError):
        ReflexiveMachine(base, {("q0", ("0",)): InstallRule("q0", ("7",), "q0", ("0",), ("R",))})
    with pytest.raises(StructureError):
        ReflexiveMachine(base, {("q9", ("0",)): InstallRule("q0", ("1",), "q0", ("0",), ("R",))})


def test_edit_arity_must_match_the_tape_count():
    base = _base()
    with pytest.raises(StructureError):
        ReflexiveMachine(
            base,
            {("q0", ("0",)): InstallRule("q0", ("1", "1"), "q0", ("0", "0"), ("R", "R"))},
        )


def test_install_semantics_extend_the_live_table():
    # base halts on 1; the edit installs a rule for it after the first step
    base = single_tape_machine(
        "grow",
        {("q0", "0"): ("q1", "0", "R"), ("q1", "1"): ("q1", "1", "R")},
        finals={"qf": True},
        extra_states=("qf",),
    )
    machine = ReflexiveMachine(
        base,
        {("q0", ("0",)): InstallRule("q1", ("0",), "qf", ("0",), ("S",))},
    )
    # without the edit the base gets stuck on the second 0
    assert run_bounded(base, "00", 100).steps == 1
    outcome, log = reflexive_run(machine, "00", 100)
    assert outcome == HaltedWithResult("00", 2)
    assert [at for at, _ in log.entries] == [1]
