"""Binary machine descriptions, word numbering, enumeration, and simulation.

A single-tape machine over {0, 1, blank} is serialized as a self-delimiting
unary layout over the alphabet {0, 1}:

    description := 0^f 11 entry^f body
    entry       := 0^q 1 0^g 1          final state q, flag g (1 resultless,
                                        2 result-bearing); entries ascend by q
    body        := rule ("11" rule)*    possibly empty
    rule        := 0^i 1 0^j 1 0^k 1 0^l 1 0^m

with states numbered from 1 (the start state), symbol codes blank=1, "0"=2,
"1"=3, and move codes L=1, R=2, S=3.  Rules are listed in ascending
(state, symbol) order.  State numbering is canonical: breadth-first order of
first use from the start state, unreachable states appended in declaration
order.  A description is valid exactly when decoding it and re-encoding the
result reproduces the same bit string, so `encode O decode` is the identity
on valid descriptions and encoding is constant on renaming classes.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from .machine import (
    BLANK,
    HypermachineError,
    InputError,
    Machine,
    RunOutcome,
    run_bounded,
)

SYMBOL_CODES = {BLANK: 1, "0": 2, "1": 3}
CODE_SYMBOLS = {v: k for k, v in SYMBOL_CODES.items()}
MOVE_CODES = {"L": 1, "R": 2, "S": 3}
CODE_MOVES = {v: k for k, v in MOVE_CODES.items()}

ENCODABLE_ALPHABET = {BLANK, "0", "1"}


class InvalidEncoding(HypermachineError):
    """A bit string is not a valid machine description.

    ``position`` is the 0-based index of the first violation; for canonical-
    form violations it is the first index where re-encoding disagrees.
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"invalid encoding at bit {position}: {message}")
        self.position = position


class UnsupportedMachineError(HypermachineError):
    """The machine lies outside the encodable class."""


@dataclass(frozen=True)
class Description:
    bits: str

    def __post_init__(self) -> None:
        if any(ch not in "01" for ch in self.bits):
            raise InputError("descriptions are words over {0,1}")


# --- word numbering -------------------------------------------------------


def word_index(word: str) -> int:
    """Rank of a {0,1} word in length-lexicographic order (ε is 0)."""
    if any(ch not in "01" for ch in word):
        raise InputError("indexed words range over {0,1}")
    if not word:
        return 0
    return (1 << len(word)) - 1 + int(word, 2)


def index_word(index: int) -> str:
    """Inverse of word_index."""
    if index < 0:
        raise InputError("word indices are non-negative")
    length = (index + 1).bit_length() - 1
    if length == 0:
        return ""
    offset = index - ((1 << length) - 1)
    return format(offset, "b").zfill(length)


# --- encoding -------------------------------------------------------------


def canonical_state_order(machine: Machine) -> list[str]:
    """Breadth-first first-use order from the start; unreachable states follow
    in declaration order."""
    per_state: dict[str, list[tuple[int, str]]] = {}
    for (state, syms), (nstate, _, _) in machine.rules.items():
        per_state.setdefault(state, []).append((SYMBOL_CODES[syms[0]], nstate))
    order = [machine.start]
    seen = {machine.start}
    queue = [machine.start]
    while queue:
        q = queue.pop(0)
        for _, target in sorted(per_state.get(q, [])):
            if target not in seen:
                seen.add(target)
                order.append(target)
                queue.append(target)
    for q in machine.states:
        if q not in seen:
            order.append(q)
    return order


def _render(finals: list[tuple[int, int]], rules: list[tuple[int, int, int, int, int]]) -> str:
    parts = ["0" * len(finals), "11"]
    for q, g in finals:
        parts.append("0" * q + "1" + "0" * g + "1")
    for t, (i, j, k, l, m) in enumerate(rules):
        if t:
            parts.append("11")
        parts.append("0" * i + "1" + "0" * j + "1" + "0" * k + "1" + "0" * l + "1" + "0" * m)
    return "".join(parts)


def encode(machine: Machine) -> Description:
    """Canonical description of a single-tape machine over {0, 1, blank}."""
    if machine.tape_count != 1:
        raise UnsupportedMachineError("only single-tape machines are encodable")
    if not set(machine.alphabet) <= ENCODABLE_ALPHABET or machine.blank != BLANK:
        raise UnsupportedMachineError("only machines over the {0,1,_} alphabet are encodable")
    number = {q: n for n, q in enumerate(canonical_state_order(machine), start=1)}
    finals = sorted((number[q], 2 if bearing else 1) for q, bearing in machine.finals.items())
    rules = sorted(
        (
            number[state],
            SYMBOL_CODES[syms[0]],
            number[nstate],
            SYMBOL_CODES[writes[0]],
            MOVE_CODES[moves[0]],
        )
        for (state, syms), (nstate, writes, moves) in machine.rules.items()
    )
    return Description(_render(finals, rules))


# --- decoding -------------------------------------------------------------


class _Cursor:
    def __init__(self, bits: str):
        self.bits = bits
        self.pos = 0

    def zeros(self) -> int:
        start = self.pos
        while self.pos < len(self.bits) and self.bits[self.pos] == "0":
            self.pos += 1
        return self.pos - start

    def one(self, what: str) -> None:
        if self.pos >= len(self.bits) or self.bits[self.pos] != "1":
            raise InvalidEncoding(f"expected 1 terminating {what}", self.pos)
        self.pos += 1

    def exhausted(self) -> bool:
        return self.pos >= len(self.bits)


def _parse(bits: str) -> tuple[list[tuple[int, int]], list[tuple[int, int, int, int, int]]]:
    cur = _Cursor(bits)
    f = cur.zeros()
    cur.one("final count")
    cur.one("header")
    finals: list[tuple[int, int]] = []
    seen_finals: set[int] = set()
    for _ in range(f):
        at = cur.pos
        q = cur.zeros()
        if q == 0:
            raise InvalidEncoding("final state number must be positive", at)
        cur.one("final state")
        at = cur.pos
        g = cur.zeros()
        if g not in (1, 2):
            raise InvalidEncoding("final flag must be 1 or 2", at)
        cur.one("final flag")
        if q in seen_finals:
            raise InvalidEncoding(f"state {q} declared final twice", at)
        seen_finals.add(q)
        finals.append((q, g))
    rules: list[tuple[int, int, int, int, int]] = []
    keys: set[tuple[int, int]] = set()
    while not cur.exhausted():
        if rules:
            cur.one("rule joiner")
            cur.one("rule joiner")
            if cur.exhausted():
                raise InvalidEncoding("trailing rule joiner", cur.pos - 1)
        rule_at = cur.pos
        fields = []
        for name, hi in (("state", None), ("symbol", 3), ("state", None), ("symbol", 3), ("move", 3)):
            at = cur.pos
            value = cur.zeros()
            if value < 1 or (hi is not None and value > hi):
                raise InvalidEncoding(f"rule {name} field out of range", at)
            fields.append(value)
            if name != "move":
                cur.one(f"rule {name}")
        i, j, k, l, m = fields
        if (i, j) in keys:
            raise InvalidEncoding(f"duplicate rule for state {i}, symbol code {j}", rule_at)
        if i in seen_finals:
            raise InvalidEncoding(f"rule declared for final state {i}", rule_at)
        keys.add((i, j))
        rules.append((i, j, k, l, m))
    return finals, rules


def _machine_from_structure(
    finals: list[tuple[int, int]], rules: list[tuple[int, int, int, int, int]], name: str
) -> Machine:
    mentioned = [1]
    mentioned += [q for q, _ in finals]
    for i, _, k, _, _ in rules:
        mentioned += [i, k]
    n = max(mentioned)
    states = tuple(f"q{i}" for i in range(1, n + 1))
    return Machine(
        name=name,
        tape_count=1,
        alphabet=(BLANK, "0", "1"),
        blank=BLANK,
        states=states,
        start="q1",
        finals={f"q{q}": g == 2 for q, g in finals},
        rules={
            (f"q{i}", (CODE_SYMBOLS[j],)): (f"q{k}", (CODE_SYMBOLS[l],), (CODE_MOVES[m],))
            for i, j, k, l, m in rules
        },
    )


@lru_cache(maxsize=8192)
def _decode_bits(bits: str) -> Machine:
    finals, rules = _parse(bits)
    machine = _machine_from_structure(finals, rules, name="decoded")
    rebuilt = encode(machine).bits
    if rebuilt != bits:
        at = next((i for i, (a, b) in enumerate(zip(bits, rebuilt)) if a != b), min(len(bits), len(rebuilt)))
        raise InvalidEncoding("description is not in canonical form", at)
    return machine


def decode(description: Description) -> Machine:
    """The unique machine of a valid description, states named q1..qn.

    Descriptions that parse but are not in canonical form (wrong rule order,
    non-breadth-first state numbering, ...) are rejected, which keeps
    decode a two-sided inverse of encode on its whole domain.
    """
    return _decode_bits(description.bits)


# --- enumeration ----------------------------------------------------------


def _gen_finals(count: int, min_q: int, budget: int) -> Iterator[tuple[list[tuple[int, int]], int]]:
    """Ascending final entries with total bit cost at most ``budget``."""
    if count == 0:
        yield [], 0
        return
    # remaining entries need at least (min_q + t) + 1 + 2 bits each
    q = min_q
    while q + 3 + (count - 1) * (q + 4) <= budget:
        for g in (1, 2):
            cost = q + g + 2
            if cost > budget:
                continue
            for rest, rest_cost in _gen_finals(count - 1, q + 1, budget - cost):
                yield [(q, g)] + rest, cost + rest_cost
        q += 1


def _gen_rules(
    budget: int, prev: tuple[int, int], final_states: frozenset[int]
) -> Iterator[list[tuple[int, int, int, int, int]]]:
    """Rule lists in ascending (state, symbol) order costing exactly ``budget``
    bits including the 2-bit joiner before each rule after the first."""
    if budget == 0:
        yield []
        return
    if budget < 9:
        return
    pi, pj = prev
    for i in range(max(pi, 1), budget - 7):
        if i in final_states:
            continue
        for j in (1, 2, 3):
            if (i, j) <= (pi, pj):
                continue
            base = i + j + 4
            for m in (1, 2, 3):
                for l in (1, 2, 3):
                    for k in range(1, budget - base - l - m + 1):
                        cost = base + k + l + m
                        rest = budget - cost
                        rule = (i, j, k, l, m)
                        if rest == 0:
                            yield [rule]
                        elif rest >= 11:  # joiner + minimal rule
                            for tail in _gen_rules(rest - 2, (i, j), final_states):
                                yield [rule] + tail


def _numbering_canonical(
    finals: list[tuple[int, int]], rules: list[tuple[int, int, int, int, int]]
) -> bool:
    """True when state numbers follow breadth-first first-use order with any
    unreachable states occupying the tail in ascending order."""
    per_state: dict[int, list[tuple[int, int]]] = {}
    for i, j, k, _, _ in rules:
        per_state.setdefault(i, []).append((j, k))
    seen = {1}
    order = [1]
    queue = [1]
    while queue:
        s = queue.pop(0)
        for _, target in sorted(per_state.get(s, [])):
            if target not in seen:
                seen.add(target)
                order.append(target)
                queue.append(target)
    return all(s == idx + 1 for idx, s in enumerate(order))


def descriptions_of_length(length: int) -> list[str]:
    """All valid descriptions of exactly ``length`` bits, lexicographic order."""
    found = []
    f = 0
    while f + 2 <= length:
        body_budget = length - f - 2
        for finals, fcost in _gen_finals(f, 1, body_budget):
            final_states = frozenset(q for q, _ in finals)
            for rules in _gen_rules(body_budget - fcost, (0, 0), final_states):
                if _numbering_canonical(finals, rules):
                    found.append(_render(finals, rules))
        f += 1
    found.sort()
    return found


def iter_descriptions() -> Iterator[Description]:
    """Every valid description in length-lexicographic order."""
    length = 2
    while True:
        for bits in descriptions_of_length(length):
            yield Description(bits)
        length += 1


def enumerate_machines(count: int) -> list[Description]:
    """The first ``count`` valid descriptions in length-lexicographic order."""
    if count < 1:
        raise InputError("count must be >= 1")
    out = []
    for desc in iter_descriptions():
        out.append(desc)
        if len(out) == count:
            return out
    raise AssertionError("unreachable")


_NTH_CACHE: list[Description] = []
_NTH_SOURCE = iter_descriptions()


def nth_description(n: int) -> Description:
    """Element n (0-based) of the enumeration, cached across calls."""
    if n < 0:
        raise InputError("enumeration indices are non-negative")
    while len(_NTH_CACHE) <= n:
        _NTH_CACHE.append(next(_NTH_SOURCE))
    return _NTH_CACHE[n]


# --- universal simulation -------------------------------------------------


def universal_run(description: Description, input_word: str, budget: int) -> RunOutcome:
    """Simulate the described machine with step-faithful accounting.

    The outcome (variant, result word, and step count) is identical to
    running the decoded machine directly.
    """
    return run_bounded(decode(description), input_word, budget)
