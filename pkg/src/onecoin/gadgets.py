"""Names of the fresh letters and states introduced by the reductions.

Gadget letters and states are ordinary strings with a reserved spelling,
so reduced automata serialize and parse like any other automaton:

    check[a,q]  apply[a,q]  star  merge  finish  sharp
    bar[q]  s_star  s0  s1  wait  bot  c0 c1 ...  g[q,a]  h0[q,a]  h1[q,a]  sink
"""

from __future__ import annotations

from typing import Iterable, NamedTuple

STAR = "star"
MERGE = "merge"
FINISH = "finish"
SHARP = "sharp"

S_STAR = "s_star"
S0 = "s0"
S1 = "s1"
WAIT = "wait"
BOTTOM = "bot"
SINK = "sink"


def check(a: str, q: str) -> str:
    return f"check[{a},{q}]"


def apply(a: str, q: str) -> str:
    return f"apply[{a},{q}]"


def bar(q: str) -> str:
    return f"bar[{q}]"


def c_state(i: int) -> str:
    return f"c{i}"


def gadget_entry(q: str, a: str) -> str:
    return f"g[{q},{a}]"


def gadget_low(q: str, a: str) -> str:
    return f"h0[{q},{a}]"


def gadget_high(q: str, a: str) -> str:
    return f"h1[{q},{a}]"


class GadgetLetter(NamedTuple):
    kind: str
    letter: str | None = None
    state: str | None = None


def _split_top_level(inner: str) -> list[str]:
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(inner):
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append(inner[start:i])
            start = i + 1
    parts.append(inner[start:])
    return parts


def parse_gadget_letter(name: str) -> GadgetLetter | None:
    """Decode a reserved letter name, or return None for a plain letter."""
    if name in (STAR, MERGE, FINISH, SHARP):
        return GadgetLetter(name)
    for kind in ("check", "apply"):
        if name.startswith(kind + "[") and name.endswith("]"):
            parts = _split_top_level(name[len(kind) + 1 : -1])
            if len(parts) == 2 and all(parts):
                return GadgetLetter(kind, parts[0], parts[1])
    return None


def ensure_fresh(existing: Iterable[str], fresh: Iterable[str], what: str) -> None:
    clash = sorted(set(existing) & set(fresh))
    if clash:
        raise ValueError(f"{what} name(s) {', '.join(map(repr, clash))} are reserved by the construction; rename them")
