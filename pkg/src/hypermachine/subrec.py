"""Finite automata as the weaker reference class, with exhaustive separation.

The separation harness enumerates every DFA over {0,1} up to a state bound,
in a fixed canonical order (start state first, breadth-first first-use
numbering of targets, so renamings are never revisited), and checks whether
any of them reproduces a labelled sample exactly.  A NoDfaMatches verdict is
a finite certificate: every DFA of that size disagrees with the sample
somewhere.  Nothing here claims the general theorem; every claim is checked
by exhaustion at desk scale.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .machine import HypermachineError, InputError

ALPHABET = ("0", "1")

SAFETY_CAP_ENV = "HYPERMACHINE_SAFETY_CAP"
DEFAULT_SAFETY_CAP = 10_000_000


class SearchSpaceError(HypermachineError):
    """The DFA space estimate exceeds the configured safety cap."""

    def __init__(self, estimate: int, cap: int):
        super().__init__(f"search space estimate {estimate} exceeds safety cap {cap}")
        self.estimate = estimate
        self.cap = cap


@dataclass(frozen=True)
class Dfa:
    states: tuple[str, ...]
    start: str
    accepting: frozenset[str]
    delta: Mapping[tuple[str, str], str]
    alphabet: tuple[str, ...] = ALPHABET

    def __post_init__(self) -> None:
        declared = set(self.states)
        if self.start not in declared:
            raise InputError(f"start state {self.start!r} is not declared")
        if not self.accepting <= declared:
            raise InputError("accepting states must be declared states")
        for q in self.states:
            for sym in self.alphabet:
                target = self.delta.get((q, sym))
                if target is None:
                    raise InputError(f"delta is not total: missing ({q!r}, {sym!r})")
                if target not in declared:
                    raise InputError(f"delta target {target!r} is not declared")


def dfa_run(dfa: Dfa, word: str) -> bool:
    state = dfa.start
    for ch in word:
        if ch not in dfa.alphabet:
            raise InputError(f"input symbol {ch!r} is not in the DFA alphabet")
        state = dfa.delta[(state, ch)]
    return state in dfa.accepting


@dataclass(frozen=True)
class Equivalent:
    pass


@dataclass(frozen=True)
class Counterexample:
    word: str


def dfa_equiv(d1: Dfa, d2: Dfa) -> Equivalent | Counterexample:
    """Exact decision via breadth-first search over the product automaton.

    The counterexample, if any, is a shortest distinguishing word and the
    lexicographically least among those.
    """
    if d1.alphabet != d2.alphabet:
        raise InputError("DFAs do not share an alphabet")
    from collections import deque

    queue = deque([(d1.start, d2.start, "")])
    visited = {(d1.start, d2.start)}
    while queue:
        s1, s2, word = queue.popleft()
        if (s1 in d1.accepting) != (s2 in d2.accepting):
            return Counterexample(word)
        for sym in d1.alphabet:
            pair = (d1.delta[(s1, sym)], d2.delta[(s2, sym)])
            if pair not in visited:
                visited.add(pair)
                queue.append((*pair, word + sym))
    return Equivalent()


# --- separation search ------------------------------------------------------


@dataclass(frozen=True)
class NoDfaMatches:
    pass


@dataclass(frozen=True)
class DfaFound:
    dfa: Dfa


@dataclass(frozen=True)
class SeparationReport:
    sample: tuple[tuple[str, int], ...]
    max_states: int
    dfas_searched: int
    witness: NoDfaMatches | DfaFound


def search_space_estimate(max_states: int) -> int:
    """Raw DFA count before canonical pruning: sum of n^(2n) * 2^n."""
    return sum(n ** (2 * n) * 2**n for n in range(1, max_states + 1))


def _safety_cap() -> int:
    raw = os.environ.get(SAFETY_CAP_ENV)
    if raw is None:
        return DEFAULT_SAFETY_CAP
    try:
        return int(raw)
    except ValueError as exc:
        raise InputError(f"{SAFETY_CAP_ENV} must be an integer, got {raw!r}") from exc


def _canonical_deltas(n: int) -> Iterator[tuple[int, ...]]:
    """Transition tables (flat, cell 2*state+bit) in first-use canonical
    numbering with every state mentioned, lexicographic order.  Renamings are
    never revisited; every language over fewer live states already appears at
    a smaller n."""
    cells = 2 * n
    table = [0] * cells

    def rec(idx: int, max_seen: int) -> Iterator[tuple[int, ...]]:
        if idx == cells:
            if max_seen == n - 1:
                yield tuple(table)
            return
        if (n - 1 - max_seen) > (cells - idx):
            return
        for target in range(min(max_seen + 1, n - 1) + 1):
            table[idx] = target
            yield from rec(idx + 1, max(max_seen, target))

    yield from rec(0, 0)


def _normalize_sample(sample: Mapping[str, int] | Iterable[tuple[str, int]]) -> tuple[tuple[str, int], ...]:
    items = sample.items() if isinstance(sample, Mapping) else sample
    out = []
    seen = set()
    for word, bit in items:
        if any(ch not in ALPHABET for ch in word):
            raise InputError(f"sample word {word!r} is not over {{0,1}}")
        if bit not in (0, 1):
            raise InputError(f"sample label for {word!r} must be 0 or 1")
        if word in seen:
            raise InputError(f"sample labels {word!r} twice")
        seen.add(word)
        out.append((word, bit))
    return tuple(sorted(out, key=lambda pair: (len(pair[0]), pair[0])))


def _forced_accepting(delta: tuple[int, ...], sample: tuple[tuple[str, int], ...]) -> frozenset[int] | None:
    """The accepting states a sample forces under this table, or None on
    conflict.  Unconstrained states stay rejecting, which picks the first
    matching DFA in canonical (ascending accepting-mask) order."""
    forced: dict[int, int] = {}
    for word, bit in sample:
        state = 0
        for ch in word:
            state = delta[2 * state + (ch == "1")]
        old = forced.setdefault(state, bit)
        if old != bit:
            return None
    return frozenset(state for state, bit in forced.items() if bit == 1)


def _build_dfa(n: int, delta: tuple[int, ...], accepting: frozenset[int]) -> Dfa:
    states = tuple(f"s{i}" for i in range(n))
    return Dfa(
        states=states,
        start="s0",
        accepting=frozenset(f"s{i}" for i in accepting),
        delta={
            (f"s{s}", sym): f"s{delta[2 * s + b]}"
            for s in range(n)
            for b, sym in enumerate(ALPHABET)
        },
    )


def separation_search(
    sample: Mapping[str, int] | Iterable[tuple[str, int]], max_states: int
) -> SeparationReport:
    """Exhaust all DFAs with up to max_states states against a labelled sample.

    dfas_searched counts every (table, accepting set) pair the search covers;
    accepting sets are resolved per table by constraint propagation, which
    decides all 2^n of them at once without changing the verdict or the
    canonical choice of witness.
    """
    if max_states < 1:
        raise InputError("max_states must be >= 1")
    cap = _safety_cap()
    estimate = search_space_estimate(max_states)
    if estimate > cap:
        raise SearchSpaceError(estimate, cap)
    normalized = _normalize_sample(sample)
    searched = 0
    for n in range(1, max_states + 1):
        for delta in _canonical_deltas(n):
            searched += 2**n
            accepting = _forced_accepting(delta, normalized)
            if accepting is not None:
                return SeparationReport(normalized, max_states, searched, DfaFound(_build_dfa(n, delta, accepting)))
    return SeparationReport(normalized, max_states, searched, NoDfaMatches())


# --- built-in samples -------------------------------------------------------


def sample_anbn(max_length: int, max_n: int | None = None) -> dict[str, int]:
    """Every word up to max_length labelled by membership in {0^n 1^n}."""
    from .machine import words_over

    def member(word: str) -> int:
        half = len(word) // 2
        return int(len(word) % 2 == 0 and word == "0" * half + "1" * half and (max_n is None or half <= max_n))

    return {word: member(word) for word in words_over(ALPHABET, max_length)}


def sample_parity(max_length: int) -> dict[str, int]:
    """Every word up to max_length labelled 1 iff it has an even count of 1s."""
    from .machine import words_over

    return {word: int(word.count("1") % 2 == 0) for word in words_over(ALPHABET, max_length)}


def sample_palindrome(max_length: int) -> dict[str, int]:
    from .machine import words_over

    return {word: int(word == word[::-1]) for word in words_over(ALPHABET, max_length)}


BUILTIN_SAMPLES = {
    "anbn": sample_anbn,
    "parity": sample_parity,
    "palindrome": sample_palindrome,
}
