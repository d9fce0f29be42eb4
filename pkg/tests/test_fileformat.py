from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from onecoin.analysis import random_simple_pfa
from onecoin.core import Pfa
from onecoin.fileformat import ParseError, PfaValidationError, parse, parse_word, serialize
from onecoin.reduce_onecoin import build_one_coin
from onecoin.reduce_thirds import build_thirds
from onecoin.reduce_value import build_value_preserving

COIN = """\
pfa
# fair coin
states: q0 q1
alphabet: a
initial: q0
accepting: q1   # absorbing
trans a q0 -> 1/2 q0, 1/2 q1
"""


def test_minimal_document():
    p = parse("pfa\nstates: q\nalphabet: a\ninitial: q\n")
    assert p == Pfa(["q"], ["a"], {}, "q", set())
    assert p.row("a", "q") == {"q": 1}


def test_coin_document(coin):
    assert parse(COIN) == coin


def test_serialize_coin_is_canonical(coin):
    text = serialize(parse(COIN))
    assert text == (
        "pfa\nstates: q0 q1\nalphabet: a\ninitial: q0\naccepting: q1\n"
        "trans a q0 -> 1/2 q0, 1/2 q1\n"
    )
    assert parse(text) == coin


def test_identity_only_has_no_trans_lines():
    text = serialize(Pfa(["q0", "q1"], ["a", "b"], {"a": {"q0": {"q0": 1}}}, "q0", {"q0"}))
    assert "trans" not in text


def test_lowest_terms_and_integers():
    p = parse("pfa\nstates: x y\nalphabet: a\ninitial: x\ntrans a x -> 2/4 x, 2/4 y\ntrans a y -> 1 x\n")
    assert serialize(p).splitlines()[-2:] == ["trans a x -> 1/2 x, 1/2 y", "trans a y -> 1 x"]


def test_row_sum_error():
    with pytest.raises(PfaValidationError) as e:
        parse("pfa\nstates: q0 q1\nalphabet: a\ninitial: q0\ntrans a q0 -> 1/2 q0\n")
    assert e.value.violations == ["(letter 'a', state 'q0'): row sum 1/2 != 1"]
    assert parse("pfa\nstates: q0 q1\nalphabet: a\ninitial: q0\ntrans a q0 -> 1/2 q0\n", check=False)


@pytest.mark.parametrize(
    "text, line, col",
    [
        ("states: q\n", 1, 1),
        ("pfa\nstates q\n", 2, 8),
        ("pfa\nstates: q\nalphabet: a\ninitial: q\ntrans a q => 1 q\n", 5, 11),
        ("pfa\nstates: q\nalphabet: a\ninitial: q\ntrans a q -> x q\n", 5, 14),
        ("pfa\nstates: q\nalphabet: a\ninitial: q\ntrans a q -> 1/0 q\n", 5, 14),
        ("pfa\nstates: q\nalphabet: a\ninitial: q\ntrans a q -> 1/2 q, 1/2 q\n", 5, 25),
        ("pfa\nstates: q[\n", 2, 11),
        ("pfa\nbogus\n", 2, 1),
        ("pfa\nstates: q.r\n", 2, 10),
    ],
)
def test_syntax_errors_are_located(text, line, col):
    with pytest.raises(ParseError) as e:
        parse(text)
    assert (e.value.line, e.value.column) == (line, col)


def test_missing_and_duplicate_headers():
    with pytest.raises(ParseError, match="missing 'initial:'"):
        parse("pfa\nstates: q\nalphabet: a\n")
    with pytest.raises(ParseError, match="duplicate"):
        parse("pfa\nstates: q\nstates: q\n")
    with pytest.raises(ParseError, match="second row"):
        parse("pfa\nstates: q\nalphabet: a\ninitial: q\ntrans a q -> 1 q\ntrans a q -> 1 q\n")


def test_gadget_names_are_single_tokens():
    text = "pfa\nstates: g[q0,a] bar[g[q0,a]]\nalphabet: check[a,g[q0,a]]\ninitial: g[q0,a]\n" \
           "trans check[a,g[q0,a]] g[q0,a] -> 1/3 g[q0,a], 2/3 bar[g[q0,a]]\n"
    p = parse(text)
    assert p.row("check[a,g[q0,a]]", "g[q0,a]") == {"g[q0,a]": F(1, 3), "bar[g[q0,a]]": F(2, 3)}


def test_parse_word():
    assert parse_word("") == ()
    assert parse_word("a.b") == ("a", "b")
    assert parse_word("check[a,q0].star") == ("check[a,q0]", "star")


def test_reduced_one_coin_has_one_probabilistic_line(coin):
    text = serialize(build_one_coin(coin).target)
    prob_lines = [ln for ln in text.splitlines() if ln.startswith("trans") and "/" in ln]
    assert prob_lines == ["trans star s_star -> 1/2 s0, 1/2 s1"]


def _corpus():
    out = []
    for seed in range(6):
        p = random_simple_pfa(1 + seed % 3, 1 + seed % 2, seed)
        th = build_thirds(p)
        out += [p, build_one_coin(p).target, th.target, build_value_preserving(th.target).target]
    return out


@pytest.mark.parametrize("p", _corpus())
def test_round_trip_corpus(p):
    assert parse(serialize(p)) == p
    assert serialize(parse(serialize(p))) == serialize(p)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(1, 3), st.integers(0, 10**6))
def test_round_trip_random(n, k, seed):
    p = random_simple_pfa(n, k, seed)
    assert parse(serialize(p)) == p
