import itertools
from fractions import Fraction as F

import pytest

from onecoin.core import Pfa


def make_coin():
    """Fair coin on q0; q1 absorbing and accepting."""
    return Pfa(["q0", "q1"], ["a"], {"a": {"q0": {"q0": F(1, 2), "q1": F(1, 2)}}}, "q0", {"q1"})


def make_single_coin():
    """q0 --a--> 1/2 r0 + 1/2 r1; only r0 accepting."""
    return Pfa(["q0", "r0", "r1"], ["a"], {"a": {"q0": {"r0": F(1, 2), "r1": F(1, 2)}}}, "q0", {"r0"})


def make_det():
    """Deterministic automaton accepting a*: q0 --a--> q0, q0 --b--> q1 (sink)."""
    return Pfa(["q0", "q1"], ["a", "b"], {"b": {"q0": {"q1": 1}}}, "q0", {"q0"})


def make_resync():
    """Threads branch at the third letter and two of them meet again at the fifth."""
    h = F(1, 2)
    trans = {
        "a": {"q0": {"q1": 1}, "r": {"x": 1}, "s": {"y": h, "z": h}},
        "b": {"q1": {"q2": 1}, "q2": {"r": h, "s": h}, "x": {"q": 1}, "y": {"q": 1}, "z": {"t": 1}},
    }
    return Pfa(["q0", "q1", "q2", "r", "s", "x", "y", "z", "q", "t"], ["a", "b"], trans, "q0", {"q"})


@pytest.fixture
def coin():
    return make_coin()


@pytest.fixture
def single_coin():
    return make_single_coin()


@pytest.fixture
def det():
    return make_det()


@pytest.fixture
def resync():
    return make_resync()


def path_sum(p: Pfa, w, start=None, targets=None):
    """Oracle: sum of path weights over all state sequences, from dense matrices."""
    idx = p.state_index
    mats = {a: p.matrix(a) for a in set(w)}
    start = p.initial if start is None else start
    targets = p.accepting if targets is None else targets
    total = F(0)
    n = len(p.states)
    for path in itertools.product(range(n), repeat=len(w)):
        weight, cur = F(1), idx[start]
        for a, nxt in zip(w, path):
            weight *= mats[a][cur][nxt]
            if not weight:
                break
            cur = nxt
        if weight and p.states[cur] in targets:
            total += weight
    return total


def dense_run(p: Pfa, d, w):
    """Oracle: row vector times dense matrices."""
    vec = [d.get(q, F(0)) for q in p.states]
    for a in w:
        m = p.matrix(a)
        vec = [sum((vec[i] * m[i][j] for i in range(len(vec))), F(0)) for j in range(len(vec))]
    return {q: v for q, v in zip(p.states, vec) if v}


ACCEPTANCE_LINES: list[str] = []


def record_criterion(number: int, ok: bool, detail: str) -> None:
    """Remember one acceptance verdict; the terminal summary prints them all."""
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
