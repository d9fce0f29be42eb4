"""Replace fair coins by a ``sharp``-driven gadget using only 1/3 and 2/3.

For a probabilistic row ``M_a(q) = 1/2 r0 + 1/2 r1`` the letter ``a`` now
leads from ``q`` to a fresh entry state ``g``. One round of two ``sharp``
letters from ``g`` reaches ``r0`` with 2/9, ``r1`` with 2/9 and comes back to
``g`` with 5/9, so after ``p`` rounds each target holds
``(1 - (5/9)**p) / 2``.

Mass still inside a gadget when the next source letter arrives is sent to
an absorbing non-accepting ``sink``. Without it, unresolved mass would skip
that letter and could later be accepted, exceeding the source probability.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import gadgets as g
from .core import ONE, THIRD, TWO_THIRDS, Pfa, accept_prob, prob_transitions, split_row
from .reduce_onecoin import check_simple_source


@dataclass(frozen=True)
class ThirdsReduction:
    source: Pfa
    target: Pfa

    __hash__ = None  # type: ignore[assignment]

    def encode(self, w: Iterable[str], p: int) -> tuple[str, ...]:
        return encode_thirds(self, w, p)


def build_thirds(a: Pfa) -> ThirdsReduction:
    check_simple_source(a)
    g.ensure_fresh(a.alphabet, [g.SHARP], "letter")
    couples = prob_transitions(a)
    gadget_states = []
    for q, x in couples:
        gadget_states += [g.gadget_entry(q, x), g.gadget_low(q, x), g.gadget_high(q, x)]
    if couples:
        gadget_states.append(g.SINK)
    g.ensure_fresh(a.states, gadget_states, "state")

    trans = {x: {s: dict(row) for s, row in rows.items()} for x, rows in a.transitions.items()}
    sharp: dict[str, dict[str, Fraction]] = {}
    interior = [s for s in gadget_states if s != g.SINK]
    for q, x in couples:
        r0, r1 = split_row(a, x, q)
        entry, low, high = g.gadget_entry(q, x), g.gadget_low(q, x), g.gadget_high(q, x)
        trans[x][q] = {entry: ONE}
        sharp[entry] = {low: THIRD, high: TWO_THIRDS}
        sharp[low] = {entry: THIRD, r0: TWO_THIRDS}
        sharp[high] = {entry: TWO_THIRDS, r1: THIRD}
    for x in a.alphabet:
        rows = trans.setdefault(x, {})
        for s in interior:
            rows[s] = {g.SINK: ONE}
    trans[g.SHARP] = sharp

    target = Pfa(
        (*a.states, *gadget_states),
        (*a.alphabet, g.SHARP),
        trans,
        a.initial,
        a.accepting,
    )
    return ThirdsReduction(a, target)


def encode_thirds(r: ThirdsReduction, w: Iterable[str], p: int) -> tuple[str, ...]:
    """``a0 . sharp^p . a1 . sharp^p ... a_{k-1} . sharp^p``."""
    if p < 0:
        raise ValueError("p must be >= 0")
    out: list[str] = []
    for a in w:
        if a not in r.source.alphabet:
            raise ValueError(f"letter {a!r} is not in the source alphabet")
        out.append(a)
        out.extend([g.SHARP] * p)
    return tuple(out)


@dataclass
class ThirdsReport:
    """``values[p]`` is the target acceptance after ``p`` full rounds per letter."""

    word: tuple[str, ...]
    source_prob: Fraction
    values: list[Fraction] = field(default_factory=list)

    @property
    def monotone(self) -> bool:
        return all(x <= y for x, y in zip(self.values, self.values[1:]))

    @property
    def bounded(self) -> bool:
        return all(v <= self.source_prob for v in self.values)

    @property
    def residual(self) -> Fraction:
        return self.source_prob - self.values[-1]

    @property
    def ok(self) -> bool:
        return self.monotone and self.bounded


def verify_thirds(r: ThirdsReduction, w: Sequence[str], p_max: int) -> ThirdsReport:
    """Check monotone convergence from below towards the source probability.

    A round is two ``sharp`` letters, so round count ``p`` uses
    ``encode_thirds(w, 2 * p)``.
    """
    if p_max < 1:
        raise ValueError("p_max must be >= 1")
    w = tuple(w)
    report = ThirdsReport(w, accept_prob(r.source, w))
    for p in range(p_max + 1):
        report.values.append(accept_prob(r.target, encode_thirds(r, w, 2 * p)))
    return report
