"""Value-1 preserving simulation with a single probabilistic transition.

The source must be in thirds form (every probabilistic row is a 1/3-2/3
split). Each transition is simulated by ``check[a,q] . star . star . apply[a,q]``;
the coin on ``s_star`` is ``1/2 s_star + 1/2 s0`` and ``star`` moves ``s0`` to
``s1``, so two stars leave 1/4 on ``s_star``, 1/4 on ``s0`` and 1/2 on ``s1``.
``apply`` sends ``s0`` to the 1/3-successor, ``s1`` to the 2/3-successor and
``s_star`` to ``wait``. Every simulated step therefore keeps 3/4 of the thread
and delays the rest until the next ``finish``, which restarts it from the
initial state. Threads that are accepting at ``finish`` enter a copy of the
syntactic DFA for ``{encode(w) . finish}*`` and survive only while the input
stays in that language.

Off-image inputs: any letter other than ``star`` on ``s_star`` goes to
``wait``, and a ``star`` on ``s1`` also goes to ``wait``. The second rule is
needed for the 3/4 cap on a single block; without it ``star^m`` would push
almost all of the mass into ``s1`` and through ``apply``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import gadgets as g
from .core import (
    HALF,
    ONE,
    ZERO,
    Distribution,
    Pfa,
    accept_prob,
    dirac,
    is_thirds,
    run,
    split_row,
    step,
    validate,
)
from .dfa import SyntacticDfa
from .reduce_onecoin import Morphism, encode, gadget_alphabet, words_up_to

THREE_QUARTERS = Fraction(3, 4)
LAMBDA_UNSUPPORTED = "general-lambda gadget is unspecified in the source construction; only lambda = 1 is supported"


@dataclass(frozen=True)
class ValueReduction:
    source: Pfa
    target: Pfa
    morphism: Morphism
    checker: SyntacticDfa

    __hash__ = None  # type: ignore[assignment]

    def encode(self, w: Iterable[str]) -> tuple[str, ...]:
        return encode(self.morphism, w)

    def block(self, w: Iterable[str], p: int = 1) -> tuple[str, ...]:
        """``(encode(w) . finish)^p``."""
        return (*self.encode(w), g.FINISH) * p


def value_morphism(alphabet: Sequence[str], states: Sequence[str]) -> Morphism:
    return Morphism(
        {
            x: (
                *itertools.chain.from_iterable((g.check(x, q), g.STAR, g.STAR, g.apply(x, q)) for q in states),
                g.MERGE,
            )
            for x in alphabet
        }
    )


def build_syntactic_dfa(alphabet: Sequence[str], states: Sequence[str]) -> SyntacticDfa:
    """DFA ``C`` for ``{encode(w) . finish | w in A*}*`` over the reduced alphabet."""
    if not states:
        raise ValueError("need at least one state")
    m = value_morphism(alphabet, states)
    b_alphabet = (g.STAR, g.MERGE, g.FINISH) + tuple(
        itertools.chain.from_iterable((g.check(x, q), g.apply(x, q)) for x in alphabet for q in states)
    )
    return SyntacticDfa.from_blocks(m.images.values(), b_alphabet, separator=g.FINISH)


def check_thirds_source(a: Pfa) -> None:
    problems = validate(a)
    if problems:
        raise ValueError("invalid source automaton: " + "; ".join(problems))
    if not is_thirds(a):
        raise ValueError("source is not in thirds form; apply build_thirds first")
    for x in a.alphabet:
        for q in a.states:
            split_row(a, x, q)


def build_value_preserving(a: Pfa, lam: Fraction | int = 1) -> ValueReduction:
    if Fraction(lam) != 1:
        raise NotImplementedError(LAMBDA_UNSUPPORTED)
    check_thirds_source(a)
    checker = build_syntactic_dfa(a.alphabet, a.states)
    fresh = [g.S_STAR, g.S0, g.S1, g.WAIT, g.BOTTOM, *map(g.bar, a.states), *checker.states]
    g.ensure_fresh(a.states, fresh, "state")
    alphabet = gadget_alphabet(a, g.FINISH)
    assert set(alphabet) == set(checker.alphabet)
    states = (*a.states, *map(g.bar, a.states), g.S_STAR, g.S0, g.S1, g.WAIT, g.BOTTOM, *checker.states)

    trans: dict[str, dict[str, dict[str, Fraction]]] = {x: {} for x in alphabet}
    for x in alphabet:
        if x not in (g.STAR, g.FINISH):
            trans[x][g.S_STAR] = {g.WAIT: ONE}
    trans[g.STAR][g.S_STAR] = {g.S_STAR: HALF, g.S0: HALF}
    trans[g.STAR][g.S0] = {g.S1: ONE}
    trans[g.STAR][g.S1] = {g.WAIT: ONE}
    for q in a.states:
        trans[g.MERGE][g.bar(q)] = {q: ONE}
    for x in a.alphabet:
        for q in a.states:
            trans[g.check(x, q)][q] = {g.S_STAR: ONE}
            low, high = split_row(a, x, q)
            rows = trans[g.apply(x, q)]
            rows[g.S0] = {g.bar(low): ONE}
            rows[g.S1] = {g.bar(high): ONE}

    s_c = checker.start
    finish = trans[g.FINISH]
    for s in states:
        if s in checker.states:
            continue
        if s == g.WAIT:
            finish[s] = {a.initial: ONE}
        elif s in a.accepting:
            finish[s] = {s_c: ONE}
        else:
            finish[s] = {g.BOTTOM: ONE}
    for c in checker.states:
        for x in alphabet:
            trans[x][c] = {checker.next(c, x): ONE}

    target = Pfa(states, alphabet, trans, a.initial, checker.accepting)
    return ValueReduction(a, target, value_morphism(a.alphabet, a.states), checker)


@dataclass
class Blocks:
    blocks: list[tuple[str, ...]]
    remainder: tuple[str, ...] | None = None

    @property
    def has_remainder(self) -> bool:
        return self.remainder is not None


def block_decompose(w: Iterable[str]) -> Blocks:
    """Split ``w = u1 . finish ... uk . finish [. rest]`` into finish-free blocks."""
    out, cur = [], []
    for x in w:
        if x == g.FINISH:
            out.append(tuple(cur))
            cur = []
        else:
            cur.append(x)
    return Blocks(out, tuple(cur) if cur else None)


def closed_form(prob: Fraction, k: int, p: int) -> Fraction:
    """``prob * (1 - (1 - (3/4)^k)^p)``."""
    return prob * (1 - (1 - THREE_QUARTERS**k) ** p)


@dataclass
class ValueReport:
    word: tuple[str, ...]
    source_prob: Fraction
    values: list[Fraction] = field(default_factory=list)
    expected: list[Fraction] = field(default_factory=list)

    @property
    def exact(self) -> bool:
        return self.values == self.expected

    @property
    def monotone(self) -> bool:
        return all(x <= y for x, y in zip(self.values, self.values[1:]))

    @property
    def bounded(self) -> bool:
        return all(v <= self.source_prob for v in self.values)

    @property
    def residuals(self) -> list[Fraction]:
        return [self.source_prob - v for v in self.values]

    @property
    def ok(self) -> bool:
        return self.exact and self.monotone and self.bounded


def verify_value_preserving(r: ValueReduction, w: Sequence[str], p_max: int) -> ValueReport:
    """Compare ``accept(target, (encode(w).finish)^p)`` with the geometric closed form, p = 1..p_max."""
    if p_max < 1:
        raise ValueError("p_max must be >= 1")
    w = tuple(w)
    report = ValueReport(w, accept_prob(r.source, w))
    one_block = r.block(w)
    d = dirac(r.target.initial)
    for p in range(1, p_max + 1):
        d = run(r.target, d, one_block)
        report.values.append(sum((d.get(c, ZERO) for c in r.target.accepting), ZERO))
        report.expected.append(closed_form(report.source_prob, len(w), p))
    return report


def per_letter_image(r: ValueReduction, d: Distribution, a: str) -> tuple[Distribution, Distribution]:
    """``(run of encode(a) from d, 3/4 * (d.a in the source) + 1/4 wait)``."""
    got = run(r.target, d, r.morphism.images[a])
    expected: Distribution = {}
    for s, m in step(r.source, d, a).items():
        expected[s] = m * THREE_QUARTERS
    total = sum(d.values(), ZERO)
    if total:
        expected[g.WAIT] = total / 4
    return got, expected


def simulates_a_transition(r: ValueReduction, u: Sequence[str]) -> bool:
    """Whether the initial thread enters a gadget while reading the finish-free block ``u``."""
    return any(x.startswith("check[") and g.parse_gadget_letter(x).state == r.source.initial for x in u)


def perturb(rng: random.Random, word: Sequence[str], letters: Sequence[str]) -> tuple[str, ...]:
    w = list(word)
    op = rng.randrange(5)
    i = rng.randrange(len(w)) if w else 0
    if op == 0 and w:
        del w[i]
    elif op == 1:
        w.insert(rng.randrange(len(w) + 1), rng.choice(letters))
    elif op == 2 and w:
        w[i] = rng.choice(letters)
    elif op == 3 and w:
        w.insert(i, w[i])
    elif len(w) >= 2:
        j = rng.randrange(len(w) - 1)
        w[j], w[j + 1] = w[j + 1], w[j]
    else:
        w.append(rng.choice(letters))
    return tuple(w)


@dataclass
class KeyObservationReport:
    image_words: int = 0
    perturbed_words: int = 0
    skipped: int = 0
    max_prob: Fraction = ZERO
    max_word: tuple[str, ...] = ()
    violations: list[tuple[tuple[str, ...], Fraction]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def attained(self) -> bool:
        return self.max_prob == THREE_QUARTERS


def key_observation_check(
    r: ValueReduction, max_block_words: int, perturbations: int = 100, seed: int = 0
) -> KeyObservationReport:
    """Check that single blocks ``u . finish`` are accepted with probability at most 3/4.

    ``u`` ranges over ``encode(w)`` for ``1 <= |w| <= max_block_words`` and over
    ``perturbations`` random edits of those blocks that leave the image
    language. Edits in which the initial thread never reaches a gadget are
    counted in ``skipped``: they simulate no transition and the cap does not
    apply to them.
    """
    if max_block_words < 1:
        raise ValueError("max_block_words must be >= 1")
    report = KeyObservationReport()
    tgt = r.target

    def record(u: tuple[str, ...]) -> None:
        pr = accept_prob(tgt, u + (g.FINISH,))
        if pr > report.max_prob or not report.max_word:
            report.max_prob, report.max_word = pr, u + (g.FINISH,)
        if pr > THREE_QUARTERS:
            report.violations.append((u + (g.FINISH,), pr))

    images = [r.encode(w) for w in words_up_to(r.source.alphabet, max_block_words) if w]
    for u in images:
        report.image_words += 1
        record(u)

    rng = random.Random(seed)
    letters = [x for x in tgt.alphabet if x != g.FINISH]
    attempts = 0
    while report.perturbed_words < perturbations and attempts < 50 * perturbations:
        attempts += 1
        u = rng.choice(images)
        for _ in range(rng.randint(1, 3)):
            u = perturb(rng, u, letters)
        if r.checker.accepts(u + (g.FINISH,)):
            continue
        if not simulates_a_transition(r, u):
            report.skipped += 1
            continue
        report.perturbed_words += 1
        record(u)
    return report


def decode_block(r: ValueReduction, u: Sequence[str]) -> tuple[str, ...] | None:
    """Inverse of the morphism on a finish-free block, or None if ``u`` is off-image."""
    by_first = {img[0]: (x, img) for x, img in r.morphism.images.items()}
    out, i = [], 0
    while i < len(u):
        hit = by_first.get(u[i])
        if hit is None or tuple(u[i : i + len(hit[1])]) != hit[1]:
            return None
        out.append(hit[0])
        i += len(hit[1])
    return tuple(out)


@dataclass
class Recovery:
    blocks: list[tuple[str, ...]]
    decoded: list[tuple[str, ...] | None]
    first_accepting: int | None
    ok: bool
    reason: str


def recover_source_word(r: ValueReduction, w: Sequence[str]) -> Recovery:
    """Decode the blocks of ``w`` and check the image discipline.

    ``first_accepting`` is the first block after whose ``finish`` some mass
    sits in the syntactic DFA. Every later block must decode; otherwise the
    recovery is rejected with the position at which the DFA leaves the
    language.
    """
    parts = block_decompose(w)
    decoded = [decode_block(r, u) for u in parts.blocks]
    c_states = set(r.checker.states)
    d = dirac(r.target.initial)
    first = None
    for i, u in enumerate(parts.blocks):
        d = run(r.target, d, (*u, g.FINISH))
        if first is None and any(s in c_states for s in d):
            first = i
    if first is None:
        return Recovery(parts.blocks, decoded, None, True, "no thread reached the syntactic check")
    for j in range(first + 1, len(parts.blocks)):
        if decoded[j] is None:
            u = parts.blocks[j] + (g.FINISH,)
            pos = r.checker.first_deviation(u)
            return Recovery(
                parts.blocks, decoded, first, False,
                f"block {j} leaves the image language at position {pos} (letter {u[pos]!r})",
            )
    if parts.has_remainder:
        return Recovery(parts.blocks, decoded, first, False, "trailing letters after the last finish")
    return Recovery(parts.blocks, decoded, first, True, "all blocks after the first accepting one decode")
