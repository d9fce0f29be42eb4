"""Exact semantics of probabilistic finite automata.

States and letters are plain strings. A distribution is a ``dict`` mapping
state names to :class:`~fractions.Fraction` masses; zero entries are never
stored. Transition rows that are not given explicitly are identity
self-loops, so an automaton only stores the rows that move mass.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Sequence

Distribution = dict[str, Fraction]
Row = Mapping[str, Fraction]
Word = Sequence[str]

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)
THIRD = Fraction(1, 3)
TWO_THIRDS = Fraction(2, 3)

SIMPLE_VALUES = frozenset({ZERO, HALF, ONE})
THIRDS_VALUES = frozenset({ZERO, THIRD, TWO_THIRDS, ONE})


class AlphabetError(ValueError):
    """A word uses a letter that is not in the automaton's alphabet."""


class ProbTransition(NamedTuple):
    source: str
    letter: str


def _normalize_row(state: str, row: Mapping[str, object]) -> dict[str, Fraction] | None:
    out = {t: Fraction(v) for t, v in row.items() if Fraction(v) != 0}
    if out == {state: ONE}:
        return None
    return out


@dataclass(frozen=True)
class Pfa:
    """A probabilistic automaton ``(Q, A, (M_a), q0, F)``.

    ``transitions[a][s]`` is the row ``M_a(s, _)`` as a sparse mapping.
    Missing letters or rows mean identity. Rows are normalized on
    construction (zeros dropped, identity rows removed) so that two
    automata with the same semantics compare equal.
    """

    states: tuple[str, ...]
    alphabet: tuple[str, ...]
    transitions: dict[str, dict[str, dict[str, Fraction]]]
    initial: str
    accepting: frozenset[str] = field(default_factory=frozenset)

    __hash__ = None  # type: ignore[assignment]

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        norm: dict[str, dict[str, dict[str, Fraction]]] = {}
        for letter, rows in self.transitions.items():
            kept = {}
            for s, row in rows.items():
                r = _normalize_row(s, row)
                if r is not None:
                    kept[s] = r
            if kept:
                norm[letter] = kept
        object.__setattr__(self, "transitions", norm)

    @cached_property
    def _compiled(self) -> dict[str, dict[str, tuple[tuple[str, Fraction], ...]]]:
        return {
            a: {s: tuple(row.items()) for s, row in self.transitions.get(a, {}).items()}
            for a in self.alphabet
        }

    @cached_property
    def state_index(self) -> dict[str, int]:
        return {q: i for i, q in enumerate(self.states)}

    def row(self, letter: str, state: str) -> dict[str, Fraction]:
        """The row ``M_letter(state, _)``, with the identity default filled in."""
        if letter not in self._compiled:
            raise AlphabetError(f"letter {letter!r} is not in the alphabet")
        row = self.transitions.get(letter, {}).get(state)
        return dict(row) if row is not None else {state: ONE}

    def matrix(self, letter: str) -> list[list[Fraction]]:
        """Dense ``|Q| x |Q|`` matrix for ``letter`` (for small automata and oracles)."""
        n = len(self.states)
        idx = self.state_index
        m = [[ZERO] * n for _ in range(n)]
        for i, s in enumerate(self.states):
            for t, v in self.row(letter, s).items():
                m[i][idx[t]] += v
        return m

    def with_row(self, letter: str, state: str, row: Mapping[str, object]) -> Pfa:
        """Copy of this automaton with one row replaced."""
        trans = {a: {s: dict(r) for s, r in rows.items()} for a, rows in self.transitions.items()}
        trans.setdefault(letter, {})[state] = {t: Fraction(v) for t, v in row.items()}
        return Pfa(self.states, self.alphabet, trans, self.initial, self.accepting)


def dirac(state: str) -> Distribution:
    return {state: ONE}


def validate(p: Pfa) -> list[str]:
    """Return one description per violated well-formedness invariant."""
    problems = []
    known = set(p.states)
    letters = set(p.alphabet)
    if len(known) != len(p.states):
        problems.append("duplicate state names")
    if len(letters) != len(p.alphabet):
        problems.append("duplicate letters in alphabet")
    if not p.states:
        problems.append("automaton has no states")
    if p.initial not in known:
        problems.append(f"initial state {p.initial!r} is not a declared state")
    for q in sorted(p.accepting - known):
        problems.append(f"accepting state {q!r} is not a declared state")
    for a, rows in p.transitions.items():
        if a not in letters:
            problems.append(f"transitions for letter {a!r} which is not in the alphabet")
            continue
        for s, row in rows.items():
            where = f"(letter {a!r}, state {s!r})"
            if s not in known:
                problems.append(f"{where}: source state is not declared")
            for t, v in row.items():
                if t not in known:
                    problems.append(f"{where}: target {t!r} is not declared")
                if not 0 <= v <= 1:
                    problems.append(f"{where}: probability {v} outside [0,1]")
            total = sum(row.values(), ZERO)
            if total != 1:
                problems.append(f"{where}: row sum {total} != 1")
    return problems


def step(p: Pfa, d: Mapping[str, Fraction], a: str) -> Distribution:
    """Read one letter: ``d . a``."""
    try:
        rows = p._compiled[a]
    except KeyError:
        raise AlphabetError(f"letter {a!r} is not in the alphabet") from None
    out: Distribution = {}
    for s, m in d.items():
        row = rows.get(s)
        if row is None:
            out[s] = out.get(s, ZERO) + m
            continue
        for t, pr in row:
            out[t] = out.get(t, ZERO) + (m if pr == 1 else m * pr)
    return out


def run(p: Pfa, d: Mapping[str, Fraction], w: Iterable[str]) -> Distribution:
    out = dict(d)
    for a in w:
        out = step(p, out, a)
    return out


def mass(d: Mapping[str, Fraction], targets: Iterable[str]) -> Fraction:
    return sum((d.get(t, ZERO) for t in set(targets)), ZERO)


def reach_prob(p: Pfa, s: str, w: Iterable[str], targets: Iterable[str]) -> Fraction:
    return mass(run(p, dirac(s), w), targets)


def accept_prob(p: Pfa, w: Iterable[str]) -> Fraction:
    return reach_prob(p, p.initial, w, p.accepting)


def prob_transitions(p: Pfa) -> list[ProbTransition]:
    """Couples ``(s, a)`` whose row has an entry outside ``{0, 1}``."""
    found = [
        ProbTransition(s, a)
        for a, rows in p.transitions.items()
        for s, row in rows.items()
        if any(v not in (ZERO, ONE) for v in row.values())
    ]
    idx = p.state_index
    return sorted(found, key=lambda t: (idx.get(t.source, len(idx)), t.letter))


def _entries_within(p: Pfa, allowed: frozenset[Fraction]) -> bool:
    return all(
        v in allowed for rows in p.transitions.values() for row in rows.values() for v in row.values()
    )


def is_simple(p: Pfa) -> bool:
    return _entries_within(p, SIMPLE_VALUES)


def is_thirds(p: Pfa) -> bool:
    return _entries_within(p, THIRDS_VALUES)


def split_row(p: Pfa, letter: str, state: str) -> tuple[str, str]:
    """Targets ``(r, r')`` of a row that is deterministic (``r == r'``) or a two-way split.

    For a split, ``r`` is the target with the smaller probability; on a tie
    (a 1/2-1/2 row) it is the one declared first.
    """
    row = p.row(letter, state)
    if len(row) == 1:
        (r,) = row
        return r, r
    if len(row) != 2:
        raise ValueError(f"row (letter {letter!r}, state {state!r}) has {len(row)} targets; expected at most 2")
    idx = p.state_index
    (r0, v0), (r1, v1) = sorted(row.items(), key=lambda kv: (kv[1], idx.get(kv[0], 0)))
    return r0, r1


def frozen(d: Mapping[str, Fraction]) -> frozenset[tuple[str, Fraction]]:
    """Hashable exact key for a distribution."""
    return frozenset(d.items())


def fmt_decimal(x: Fraction) -> str:
    return f"{float(x):.6g}"
