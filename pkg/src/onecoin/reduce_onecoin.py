"""Simulation of a simple PFA by one with a single probabilistic transition.

Every transition ``(q, a)`` of the source is replaced by a small gadget
``check[a,q] . star . apply[a,q]``: ``check`` parks the thread of ``q`` in
``s_star``, the one coin ``star`` splits it between ``s0`` and ``s1``, and
``apply`` sends each half to a barred copy of the corresponding successor.
``merge`` then moves every barred state back to its original. Reading
``encode(w)`` in the target reproduces the acceptance probability of ``w``
in the source exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import gadgets as g
from .core import (
    HALF,
    ONE,
    Distribution,
    Pfa,
    accept_prob,
    dirac,
    is_simple,
    prob_transitions,
    run,
    split_row,
    step,
    validate,
)
from .dfa import SyntacticDfa


@dataclass(frozen=True)
class Morphism:
    """Letter-wise encoding; ``images[a]`` is the target word for source letter ``a``."""

    images: dict[str, tuple[str, ...]]

    __hash__ = None  # type: ignore[assignment]

    def __call__(self, w: Iterable[str]) -> tuple[str, ...]:
        return encode(self, w)


def encode(m: Morphism, w: Iterable[str]) -> tuple[str, ...]:
    out: list[str] = []
    for a in w:
        try:
            out.extend(m.images[a])
        except KeyError:
            raise ValueError(f"letter {a!r} is not in the morphism's domain") from None
    return tuple(out)


@dataclass(frozen=True)
class OneCoinReduction:
    source: Pfa
    target: Pfa
    morphism: Morphism

    __hash__ = None  # type: ignore[assignment]

    def encode(self, w: Iterable[str]) -> tuple[str, ...]:
        return encode(self.morphism, w)


def check_simple_source(a: Pfa) -> None:
    problems = validate(a)
    if problems:
        raise ValueError("invalid source automaton: " + "; ".join(problems))
    if not is_simple(a):
        for letter, rows in a.transitions.items():
            for s, row in rows.items():
                for t, v in row.items():
                    if v not in (0, HALF, ONE):
                        raise ValueError(
                            f"source is not simple: M_{letter}({s},{t}) = {v} is not in {{0, 1/2, 1}}"
                        )


def gadget_alphabet(a: Pfa, *extra: str) -> tuple[str, ...]:
    letters = [g.STAR, g.MERGE, *extra]
    for x in a.alphabet:
        for q in a.states:
            letters += [g.check(x, q), g.apply(x, q)]
    return tuple(letters)


def build_one_coin(a: Pfa) -> OneCoinReduction:
    check_simple_source(a)
    fresh = [g.S_STAR, g.S0, g.S1, *map(g.bar, a.states)]
    g.ensure_fresh(a.states, fresh, "state")
    states = (*a.states, *map(g.bar, a.states), g.S_STAR, g.S0, g.S1)
    alphabet = gadget_alphabet(a)

    trans: dict[str, dict[str, dict[str, Fraction]]] = {
        g.STAR: {g.S_STAR: {g.S0: HALF, g.S1: HALF}},
        g.MERGE: {g.bar(q): {q: ONE} for q in a.states},
    }
    for x in a.alphabet:
        for q in a.states:
            trans[g.check(x, q)] = {q: {g.S_STAR: ONE}}
            r0, r1 = split_row(a, x, q)
            if r0 == r1:
                trans[g.apply(x, q)] = {g.S0: {g.bar(r0): ONE}, g.S1: {g.bar(r0): ONE}}
            else:
                trans[g.apply(x, q)] = {g.S0: {g.bar(r0): ONE}, g.S1: {g.bar(r1): ONE}}

    target = Pfa(states, alphabet, trans, a.initial, a.accepting)
    return OneCoinReduction(a, target, one_coin_morphism(a.alphabet, a.states))


def one_coin_morphism(alphabet: Sequence[str], states: Sequence[str]) -> Morphism:
    """``a -> check[a,q0] star apply[a,q0] ... check[a,q_{n-1}] star apply[a,q_{n-1}] merge``."""
    return Morphism(
        {
            x: (*itertools.chain.from_iterable((g.check(x, q), g.STAR, g.apply(x, q)) for q in states), g.MERGE)
            for x in alphabet
        }
    )


def words_up_to(alphabet: Sequence[str], max_len: int) -> Iterable[tuple[str, ...]]:
    """All words of length <= max_len, shortest first, then in alphabet order."""
    for k in range(max_len + 1):
        yield from itertools.product(alphabet, repeat=k)


@dataclass
class OneCoinReport:
    words_checked: int = 0
    counterexamples: list[tuple[tuple[str, ...], Fraction, Fraction]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def __str__(self) -> str:
        if self.ok:
            return f"verified, {self.words_checked} words"
        w, src, tgt = self.counterexamples[0]
        return f"counterexample {'.'.join(w) or '(empty)'}: source {src}, target {tgt}"


def verify_one_coin(r: OneCoinReduction, max_len: int) -> OneCoinReport:
    """Compare source and target acceptance on every source word up to ``max_len``.

    Runs share prefixes: the target distribution of ``w.a`` is computed
    from that of ``w``.
    """
    report = OneCoinReport()
    src, tgt = r.source, r.target
    layer = {(): (dirac(src.initial), dirac(tgt.initial))}
    for k in range(max_len + 1):
        for w, (ds, dt) in layer.items():
            ps = sum((ds.get(q, 0) for q in src.accepting), Fraction(0))
            pt = sum((dt.get(q, 0) for q in tgt.accepting), Fraction(0))
            report.words_checked += 1
            if ps != pt:
                report.counterexamples.append((w, ps, pt))
        if k == max_len:
            break
        layer = {
            w + (x,): (step(src, ds, x), run(tgt, dt, r.morphism.images[x]))
            for w, (ds, dt) in layer.items()
            for x in src.alphabet
        }
    return report


def image_dfa(r: OneCoinReduction) -> SyntacticDfa:
    """DFA for the image language ``{encode(w) | w in A*}``."""
    return SyntacticDfa.from_blocks(r.morphism.images.values(), r.target.alphabet)


def infer_image_dfa(target: Pfa) -> SyntacticDfa:
    """Image-language DFA recovered from the alphabet of a reduced automaton.

    The source letters and state order are read off the ``check[a,q]``
    letters. An alphabet containing ``finish`` is taken to come from the
    value-preserving reduction (two stars per gadget, blocks closed by
    ``finish``); otherwise from the one-coin reduction.
    """
    from .reduce_value import build_syntactic_dfa

    letters: list[str] = []
    states: list[str] = []
    for x in target.alphabet:
        gl = g.parse_gadget_letter(x)
        if gl is not None and gl.kind == "check":
            if gl.letter not in letters:
                letters.append(gl.letter)
            if gl.state not in states:
                states.append(gl.state)
    if not letters:
        raise ValueError("alphabet has no check[a,q] letters; not a reduced automaton")
    if g.FINISH in target.alphabet:
        return build_syntactic_dfa(letters, states)
    return SyntacticDfa.from_blocks(one_coin_morphism(letters, states).images.values(), target.alphabet)


@dataclass(frozen=True)
class EscapeWitness:
    """An off-image word the target processes anyway.

    ``check[a,q]`` parks the thread in ``s_star``, after which the target has
    no memory of ``q``; ``apply[a,q']`` for another state ``q'`` is then
    applied to that thread as if it were in ``q'``.
    """

    word: tuple[str, ...]
    checked_state: str
    applied_state: str
    letter: str
    sstar_mass: Fraction
    accept_prob: Fraction
    final: Distribution

    __hash__ = None  # type: ignore[assignment]


def image_escape_witness(r: OneCoinReduction) -> EscapeWitness | None:
    src = r.source
    if len(src.states) < 2 or not prob_transitions(src):
        return None
    q0 = src.initial
    # prefer applying a probabilistic couple of some other state
    couples = [t for t in prob_transitions(src) if t.source != q0]
    if couples:
        q1, x = couples[0].source, couples[0].letter
    else:
        x = prob_transitions(src)[0].letter
        q1 = next(q for q in src.states if q != q0)
    prefix = (g.check(x, q0),)
    word = prefix + (g.STAR, g.apply(x, q1), g.MERGE)
    sstar_mass = run(r.target, dirac(r.target.initial), prefix).get(g.S_STAR, Fraction(0))
    final = run(r.target, dirac(r.target.initial), word)
    return EscapeWitness(word, q0, q1, x, sstar_mass, accept_prob(r.target, word), final)
