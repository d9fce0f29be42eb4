"""Line-oriented text format for automata.

    pfa
    states: q0 q1
    alphabet: a
    initial: q0
    accepting: q1
    trans a q0 -> 1/2 q0, 1/2 q1

``#`` starts a comment. Rows that are not listed are identity self-loops.
Names may contain brackets, and commas inside brackets, so gadget names
such as ``check[a,g[q0,b]]`` are single tokens.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .core import Pfa, validate

GRAMMAR = """\
pfa
states: <state> <state> ...
alphabet: <letter> <letter> ...
initial: <state>
accepting: <state> ...
trans <letter> <state> -> <prob> <state> [, <prob> <state> ...]

probabilities are N/D or integers; '#' starts a comment; rows not listed are
identity self-loops. Words on the command line are dot-separated letters.
"""

HEADERS = ("states", "alphabet", "initial", "accepting")
_PROB = re.compile(r"\d+(/\d+)?")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class PfaValidationError(ValueError):
    def __init__(self, violations: list[str]):
        super().__init__("invalid automaton:\n  " + "\n  ".join(violations))
        self.violations = violations


class _Cursor:
    def __init__(self, text: str, lineno: int):
        self.text = text
        self.pos = 0
        self.lineno = lineno

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.lineno, self.pos + 1)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def expect(self, literal: str) -> None:
        self.skip_ws()
        if not self.text.startswith(literal, self.pos):
            raise self.error(f"expected {literal!r}")
        self.pos += len(literal)

    def name(self, what: str) -> str:
        self.skip_ws()
        start, depth = self.pos, 0
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch == "[":
                depth += 1
            elif ch == "]":
                depth -= 1
                if depth < 0:
                    raise self.error("unbalanced ']'")
            elif ch.isspace() or (ch == "," and depth == 0):
                break
            elif ch in ".#":
                raise self.error(f"character {ch!r} is not allowed in names")
            self.pos += 1
        if depth:
            raise self.error("unbalanced '['")
        if self.pos == start:
            raise self.error(f"expected {what}")
        token = self.text[start : self.pos]
        if token == "->":
            self.pos = start
            raise self.error(f"expected {what}")
        return token

    def prob(self) -> Fraction:
        self.skip_ws()
        m = _PROB.match(self.text, self.pos)
        if not m:
            raise self.error("expected a probability N/D or an integer")
        num, _, den = m.group(0).partition("/")
        if den and int(den) == 0:
            raise self.error("zero denominator")
        self.pos = m.end()
        return Fraction(int(num), int(den or 1))


def _strip_comment(line: str) -> str:
    i = line.find("#")
    return line if i < 0 else line[:i]


def parse(text: str, check: bool = True) -> Pfa:
    """Parse a document; with ``check`` the result must also pass :func:`validate`."""
    header: dict[str, list[str]] = {}
    trans: dict[str, dict[str, dict[str, Fraction]]] = {}
    seen_magic = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        cur = _Cursor(line, lineno)
        if not seen_magic:
            if line.strip() != "pfa":
                cur.skip_ws()
                raise cur.error("document must start with 'pfa'")
            seen_magic = True
            continue
        cur.skip_ws()
        keyword = re.match(r"[a-z]+", line[cur.pos :])
        kw = keyword.group(0) if keyword else ""
        if kw in HEADERS:
            cur.pos += len(kw)
            cur.expect(":")
            if kw in header:
                raise ParseError(f"duplicate '{kw}:' line", lineno, 1)
            names = []
            while not cur.at_end():
                names.append(cur.name("a name"))
            header[kw] = names
        elif kw == "trans":
            cur.pos += len(kw)
            letter = cur.name("a letter")
            state = cur.name("a state")
            cur.expect("->")
            row: dict[str, Fraction] = {}
            while True:
                pr = cur.prob()
                cur.skip_ws()
                col = cur.pos + 1
                target = cur.name("a target state")
                if target in row:
                    raise ParseError(f"target {target!r} listed twice", lineno, col)
                row[target] = pr
                if cur.at_end():
                    break
                cur.expect(",")
            rows = trans.setdefault(letter, {})
            if state in rows:
                raise ParseError(f"second row for letter {letter!r}, state {state!r}", lineno, 1)
            rows[state] = row
        else:
            raise cur.error("expected 'states:', 'alphabet:', 'initial:', 'accepting:' or 'trans'")
    if not seen_magic:
        raise ParseError("empty document; expected 'pfa'", 1, 1)
    for kw in ("states", "alphabet", "initial"):
        if kw not in header:
            raise ParseError(f"missing '{kw}:' line", 1, 1)
    if len(header["initial"]) != 1:
        raise ParseError("'initial:' takes exactly one state", 1, 1)
    p = Pfa(header["states"], header["alphabet"], trans, header["initial"][0], header.get("accepting", []))
    if check:
        problems = validate(p)
        if problems:
            raise PfaValidationError(problems)
    return p


def serialize(p: Pfa) -> str:
    """Canonical text: declaration order throughout, identity rows omitted."""
    idx = p.state_index
    lines = [
        "pfa",
        "states: " + " ".join(p.states),
        "alphabet: " + " ".join(p.alphabet),
        f"initial: {p.initial}",
        "accepting: " + " ".join(q for q in p.states if q in p.accepting),
    ]
    lines[-1] = lines[-1].rstrip()
    for a in p.alphabet:
        rows = p.transitions.get(a, {})
        for s in sorted(rows, key=lambda q: idx.get(q, len(idx))):
            row = rows[s]
            targets = sorted(row, key=lambda q: idx.get(q, len(idx)))
            lines.append(f"trans {a} {s} -> " + ", ".join(f"{row[t]} {t}" for t in targets))
    return "\n".join(lines) + "\n"


def parse_word(text: str) -> tuple[str, ...]:
    """Dot-separated word; the empty string is the empty word."""
    text = text.strip()
    return tuple(text.split(".")) if text else ()


def format_word(w) -> str:
    return ".".join(w)
