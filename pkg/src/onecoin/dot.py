"""Computation tree of a word, as a layered graph, rendered as DOT.

Layer ``i`` holds the states carrying mass after ``i`` letters. Threads that
reach the same state at the same depth are one node, so a node with two
incoming edges is a merge and a node with two outgoing edges is a branch
(a probabilistic transition).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .core import Pfa, dirac, step


@dataclass
class ThreadTree:
    word: tuple[str, ...]
    layers: list[list[str]]
    # (source state, depth, target state, probability); target is at depth + 1
    edges: list[tuple[str, int, str, Fraction]] = field(default_factory=list)

    def out_degree(self, state: str, depth: int) -> int:
        return sum(1 for s, d, _, _ in self.edges if (s, d) == (state, depth))

    def in_degree(self, state: str, depth: int) -> int:
        return sum(1 for _, d, t, _ in self.edges if (t, d + 1) == (state, depth))

    @property
    def branch_nodes(self) -> list[tuple[str, int]]:
        c = Counter((s, d) for s, d, _, _ in self.edges)
        return [k for k, v in c.items() if v >= 2]

    @property
    def merge_nodes(self) -> list[tuple[str, int]]:
        c = Counter((t, d + 1) for _, d, t, _ in self.edges)
        return [k for k, v in c.items() if v >= 2]


def thread_tree(p: Pfa, w: Sequence[str]) -> ThreadTree:
    w = tuple(w)
    order = p.state_index
    d = dirac(p.initial)
    tree = ThreadTree(w, [[p.initial]])
    for depth, a in enumerate(w):
        nxt = step(p, d, a)
        for s in tree.layers[-1]:
            for t, pr in sorted(p.row(a, s).items(), key=lambda kv: order[kv[0]]):
                tree.edges.append((s, depth, t, pr))
        tree.layers.append(sorted(nxt, key=order.__getitem__))
        d = nxt
    return tree


def node_id(state: str, depth: int) -> str:
    return f"s_{state}_{depth}"


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def render_thread_tree(p: Pfa, w: Sequence[str]) -> str:
    tree = thread_tree(p, w)
    branches = set(tree.branch_nodes)
    merges = set(tree.merge_nodes)
    out = ["digraph threads {", "  rankdir=LR;", "  node [shape=circle];"]
    for depth, layer in enumerate(tree.layers):
        label = "start" if depth == 0 else f"{depth}: {tree.word[depth - 1]}"
        out.append(f"  subgraph {_q(f'depth_{depth}')} {{")
        out.append("    rank=same;")
        out.append(f"    {_q(f'col_{depth}')} [shape=plaintext, label={_q(label)}];")
        for s in layer:
            attrs = [f"label={_q(s)}"]
            if (s, depth) in branches:
                attrs.append("shape=diamond")
            if (s, depth) in merges:
                attrs.append("peripheries=2")
            out.append(f"    {_q(node_id(s, depth))} [{', '.join(attrs)}];")
        out.append("  }")
    for depth in range(len(tree.layers) - 1):
        out.append(f"  {_q(f'col_{depth}')} -> {_q(f'col_{depth + 1}')} [style=invis];")
    for s, depth, t, pr in tree.edges:
        attrs = [f"label={_q(f'{tree.word[depth]} {pr}' if pr != 1 else tree.word[depth])}"]
        out.append(f"  {_q(node_id(s, depth))} -> {_q(node_id(t, depth + 1))} [{', '.join(attrs)}];")
    out.append("}")
    return "\n".join(out) + "\n"
