"""Bounded exploration of acceptance probabilities and randomized cross-checks.

The value and isolation problems are undecidable, so everything here is a
semi-test: it looks at all words up to a length bound and reports the best
witness it found, exactly.
"""

from __future__ import annotations

import random
import string
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Iterator, Sequence

from .core import HALF, ONE, ZERO, Distribution, Pfa, accept_prob, dirac, frozen, mass, step
from .dfa import SyntacticDfa
from .reduce_onecoin import build_one_coin, verify_one_coin, words_up_to
from .reduce_thirds import build_thirds, verify_thirds
from .reduce_value import build_value_preserving, verify_value_preserving


@dataclass(frozen=True)
class ValueEstimate:
    best_word: tuple[str, ...]
    best_prob: Fraction
    words_explored: int
    length_bound: int


@dataclass(frozen=True)
class IsolationReport:
    """Smallest ``|Pr(w) - lambda|`` over the explored words.

    A semi-test only: a positive gap says nothing about longer words.
    """

    lam: Fraction
    min_gap: Fraction
    witness: tuple[str, ...]
    length_bound: int


def explore(p: Pfa, max_len: int, restrict_to: SyntacticDfa | None = None) -> Iterator[tuple[tuple[str, ...], Distribution, bool]]:
    """Breadth-first search over words, one representative per reachable configuration.

    Yields ``(word, distribution, counts)`` where ``word`` is the shortest,
    then alphabetically first word reaching that configuration and
    ``counts`` is False for prefixes that are not in ``restrict_to``'s language.
    A configuration is the exact distribution, paired with the DFA state
    when restricted; words leading to a configuration already seen are
    pruned, since their continuations repeat those of the earlier word.
    """
    if max_len < 0:
        raise ValueError("max_len must be >= 0")
    start_c = restrict_to.start if restrict_to else None
    d0 = dirac(p.initial)
    seen = {(frozen(d0), start_c)}
    layer = [((), d0, start_c)]
    for k in range(max_len + 1):
        nxt = []
        for w, d, c in layer:
            yield w, d, restrict_to is None or c in restrict_to.accepting
            if k == max_len:
                continue
            for a in p.alphabet:
                c2 = restrict_to.next(c, a) if restrict_to else None
                if restrict_to and c2 == restrict_to.dead:
                    continue
                d2 = step(p, d, a)
                key = (frozen(d2), c2)
                if key not in seen:
                    seen.add(key)
                    nxt.append((w + (a,), d2, c2))
        layer = nxt


def estimate_value(p: Pfa, max_len: int, restrict_to: SyntacticDfa | None = None) -> ValueEstimate:
    best_w, best, n = None, ZERO, 0
    for w, d, counts in explore(p, max_len, restrict_to):
        n += 1
        if not counts:
            continue
        pr = mass(d, p.accepting)
        if best_w is None or pr > best:
            best_w, best = w, pr
    return ValueEstimate(best_w if best_w is not None else (), best, n, max_len)


def estimate_value_brute(p: Pfa, max_len: int, restrict_to: SyntacticDfa | None = None) -> ValueEstimate:
    """Reference search: evaluate every word independently, no sharing."""
    best_w, best, n = None, ZERO, 0
    for w in words_up_to(p.alphabet, max_len):
        n += 1
        if restrict_to is not None and not restrict_to.accepts(w):
            continue
        pr = accept_prob(p, w)
        if best_w is None or pr > best:
            best_w, best = w, pr
    return ValueEstimate(best_w if best_w is not None else (), best, n, max_len)


def isolation_probe(p: Pfa, lam: Fraction | int | str, max_len: int) -> IsolationReport:
    lam = Fraction(lam)
    if not 0 <= lam <= 1:
        raise ValueError(f"lambda = {lam} is outside [0, 1]")
    best_w, gap = (), None
    for w, d, _ in explore(p, max_len):
        g = abs(mass(d, p.accepting) - lam)
        if gap is None or g < gap:
            best_w, gap = w, g
    return IsolationReport(lam, gap, best_w, max_len)


def letter_names(k: int) -> list[str]:
    if k <= 26:
        return list(string.ascii_lowercase[:k])
    return [f"a{i}" for i in range(k)]


def random_simple_pfa(states: int, letters: int, seed: int, coin_rate: float = 0.35) -> Pfa:
    """Seeded random simple PFA with states ``q0..`` and letters ``a, b, ..``.

    Rows are deterministic or a fair split over two distinct states; at
    least one row is probabilistic whenever ``states > 1``, and at least
    one state is accepting.
    """
    if states < 1 or letters < 1:
        raise ValueError("need at least one state and one letter")
    rng = random.Random(seed)
    qs = [f"q{i}" for i in range(states)]
    alphabet = letter_names(letters)
    trans: dict[str, dict[str, dict[str, Fraction]]] = {}
    coins = 0
    for a in alphabet:
        rows = trans[a] = {}
        for q in qs:
            if states > 1 and rng.random() < coin_rate:
                r0, r1 = rng.sample(qs, 2)
                rows[q] = {r0: HALF, r1: HALF}
                coins += 1
            else:
                rows[q] = {rng.choice(qs): ONE}
    if states > 1 and coins == 0:
        a, q = rng.choice(alphabet), rng.choice(qs)
        r0, r1 = rng.sample(qs, 2)
        trans[a][q] = {r0: HALF, r1: HALF}
    accepting = {q for q in qs if rng.random() < 0.5} or {rng.choice(qs)}
    return Pfa(qs, alphabet, trans, qs[0], accepting)


@dataclass
class TrialResult:
    index: int
    source: Pfa
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


@dataclass
class SweepReport:
    trials: list[TrialResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(t.ok for t in self.trials)

    @property
    def failed(self) -> list[TrialResult]:
        return [t for t in self.trials if not t.ok]


Tamper = Callable[[int, str, Pfa], Pfa]


def _fmt_word(w: Sequence[str]) -> str:
    return ".".join(w) or "(empty)"


def equivalence_sweep(
    trials: int,
    states: int,
    letters: int,
    max_len: int,
    seed: int = 0,
    p_max: int = 3,
    value_max_len: int | None = None,
    tamper: Tamper | None = None,
) -> SweepReport:
    """Run all three reductions and their verifiers on random instances.

    Instance ``i`` has between 1 and ``states`` states and 1 to ``letters``
    letters. The value-preserving check is run on the thirds form, over
    thirds-alphabet words up to ``value_max_len`` (default ``min(max_len, 3)``).
    ``tamper(i, mode, target)`` may replace a reduction target before it is
    verified; mutation tests use it to inject faults.
    """
    rng = random.Random(seed)
    report = SweepReport()
    vlen = min(max_len, 3) if value_max_len is None else value_max_len
    for i in range(trials):
        src = random_simple_pfa(rng.randint(1, states), rng.randint(1, letters), rng.randrange(2**32))
        res = TrialResult(i, src)

        oc = build_one_coin(src)
        if tamper:
            oc = replace(oc, target=tamper(i, "one-coin", oc.target))
        rep = verify_one_coin(oc, max_len)
        for w, a, b in rep.counterexamples:
            res.failures.append(f"one-coin: {_fmt_word(w)} source {a} target {b}")

        th = build_thirds(src)
        if tamper:
            th = replace(th, target=tamper(i, "thirds", th.target))
        for w in words_up_to(src.alphabet, max_len):
            t = verify_thirds(th, w, p_max)
            if not t.ok:
                res.failures.append(f"thirds: {_fmt_word(w)} values {list(map(str, t.values))} source {t.source_prob}")

        val = build_value_preserving(th.target)
        if tamper:
            val = replace(val, target=tamper(i, "value", val.target))
        for w in words_up_to(th.target.alphabet, vlen):
            v = verify_value_preserving(val, w, p_max)
            if not v.ok:
                res.failures.append(f"value: {_fmt_word(w)} values {list(map(str, v.values))} expected {list(map(str, v.expected))}")
        report.trials.append(res)
    return report
