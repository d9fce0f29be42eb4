"""Deterministic automata for block languages ``(B1 | ... | Bm)*`` and ``((B1 | ... | Bm)* sep)*``."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .gadgets import BOTTOM, c_state


@dataclass(frozen=True)
class SyntacticDfa:
    """Complete DFA; any transition not stored in ``delta`` goes to ``dead``."""

    alphabet: tuple[str, ...]
    states: tuple[str, ...]
    start: str
    accepting: frozenset[str]
    delta: dict[tuple[str, str], str]
    dead: str = BOTTOM

    __hash__ = None  # type: ignore[assignment]

    def next(self, state: str, letter: str) -> str:
        return self.delta.get((state, letter), self.dead)

    def run(self, word: Iterable[str], state: str | None = None) -> str:
        c = self.start if state is None else state
        for x in word:
            c = self.next(c, x)
        return c

    def accepts(self, word: Iterable[str]) -> bool:
        return self.run(word) in self.accepting

    def first_deviation(self, word: Sequence[str], state: str | None = None) -> int | None:
        """Index of the letter that sends the run to the dead state, if any."""
        c = self.start if state is None else state
        for i, x in enumerate(word):
            c = self.next(c, x)
            if c == self.dead:
                return i
        return None

    @classmethod
    def from_blocks(
        cls,
        blocks: Iterable[Sequence[str]],
        alphabet: Sequence[str],
        separator: str | None = None,
    ) -> SyntacticDfa:
        """Build the DFA for ``blocks*`` or, with a separator, ``(blocks* separator)*``.

        States are ``c0`` (start, the only accepting state), then a hub
        ``c1`` when a separator is used, then one state per proper prefix of
        the blocks (shared between blocks with a common prefix).
        """
        states = [c_state(0)]
        start = states[0]
        hub = start
        if separator is not None:
            hub = c_state(1)
            states.append(hub)
        delta: dict[tuple[str, str], str] = {}
        # prefix trie rooted at the hub; the start shares the hub's out-edges
        trie: dict[tuple[str, ...], str] = {(): hub}
        ends: set[tuple[str, ...]] = set()
        for block in blocks:
            block = tuple(block)
            if not block:
                continue
            for i in range(1, len(block)):
                pre = block[:i]
                if pre in ends:
                    raise ValueError(f"block {block} extends another block; language is not prefix-free")
                if pre not in trie:
                    trie[pre] = c_state(len(states))
                    states.append(trie[pre])
                    delta[(trie[block[: i - 1]], block[i - 1])] = trie[pre]
            if block in trie:
                raise ValueError(f"block {block} is a prefix of another block")
            src = trie[block[:-1]]
            if delta.get((src, block[-1]), hub) != hub:
                raise ValueError(f"block {block} conflicts with another block")
            delta[(src, block[-1])] = hub
            ends.add(block)
        if separator is not None:
            for (c, x), t in list(delta.items()):
                if c == hub:
                    delta[(start, x)] = t
            delta[(start, separator)] = start
            delta[(hub, separator)] = start
        if BOTTOM in states:
            raise ValueError("dead-state name collides with a block state")
        return cls(tuple(alphabet), tuple(states), start, frozenset({start}), delta)
