"""Command-line interface.

Exit codes: 0 success or verified, 1 counterexample or invalid automaton,
2 usage, parse or input errors.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .analysis import equivalence_sweep, estimate_value, isolation_probe
from .core import AlphabetError, Pfa, accept_prob, fmt_decimal, is_simple, is_thirds, prob_transitions, validate
from .dot import render_thread_tree
from .fileformat import GRAMMAR, ParseError, PfaValidationError, format_word, parse, parse_word, serialize
from .reduce_onecoin import build_one_coin, infer_image_dfa, verify_one_coin, words_up_to
from .reduce_thirds import build_thirds, verify_thirds
from .reduce_value import LAMBDA_UNSUPPORTED, build_value_preserving, verify_value_preserving

MODES = ("one-coin", "thirds", "value")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


class Output:
    def __init__(self, fmt: str, stream=None):
        self.kv = fmt == "kv"
        self.stream = stream or sys.stdout

    def emit(self, text: str, **pairs) -> None:
        if self.kv:
            for k, v in pairs.items():
                print(f"{k}={v}", file=self.stream)
        else:
            print(text, file=self.stream)


def _load(path: str, check: bool = True) -> Pfa:
    return parse(Path(path).read_text(encoding="utf-8"), check=check)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {text!r}") from None


def value_source(p: Pfa) -> Pfa:
    """Thirds-form input for the value reduction; simple automata are converted first."""
    if is_simple(p):
        return build_thirds(p).target
    if is_thirds(p):
        return p
    raise ValueError("automaton is neither simple nor in thirds form")


def _reduce(p: Pfa, mode: str, lam: Fraction = Fraction(1)):
    if mode == "one-coin":
        return build_one_coin(p)
    if mode == "thirds":
        return build_thirds(p)
    if lam != 1:
        raise NotImplementedError(LAMBDA_UNSUPPORTED)
    return build_value_preserving(value_source(p), lam)


def cmd_validate(args, out: Output) -> int:
    problems = validate(_load(args.file, check=False))
    text = "ok" if not problems else "\n".join(problems)
    out.emit(text, valid=str(not problems).lower(), violations=len(problems))
    if out.kv:
        for v in problems:
            out.emit("", violation=v)
    return 0 if not problems else 1


def cmd_accept(args, out: Output) -> int:
    p = _load(args.file)
    w = parse_word(args.word)
    pr = accept_prob(p, w)
    out.emit(f"{pr} ({fmt_decimal(pr)})", word=format_word(w), prob=pr, decimal=fmt_decimal(pr))
    return 0


def cmd_value(args, out: Output) -> int:
    p = _load(args.file)
    dfa = infer_image_dfa(p) if args.restrict_image else None
    est = estimate_value(p, args.max_len, dfa)
    out.emit(
        f"best {est.best_prob} ({fmt_decimal(est.best_prob)}) at '{format_word(est.best_word)}'; "
        f"{est.words_explored} words explored up to length {est.length_bound} (lower bound on the value)",
        best_prob=est.best_prob,
        decimal=fmt_decimal(est.best_prob),
        best_word=format_word(est.best_word),
        words_explored=est.words_explored,
        length_bound=est.length_bound,
    )
    return 0


def cmd_isolate(args, out: Output) -> int:
    p = _load(args.file)
    rep = isolation_probe(p, _fraction(args.lam), args.max_len)
    out.emit(
        f"min gap {rep.min_gap} ({fmt_decimal(rep.min_gap)}) to {rep.lam} at '{format_word(rep.witness)}' "
        f"over words up to length {rep.length_bound} (semi-test)",
        **{"lambda": rep.lam},
        min_gap=rep.min_gap,
        decimal=fmt_decimal(rep.min_gap),
        witness=format_word(rep.witness),
        length_bound=rep.length_bound,
        semi_test="true",
    )
    return 0


def cmd_reduce(args, out: Output) -> int:
    p = _load(args.file)
    r = _reduce(p, args.mode, _fraction(args.lam))
    text = serialize(r.target)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        out.emit(
            f"wrote {args.out}: {len(r.target.states)} states, {len(r.target.alphabet)} letters, "
            f"{len(prob_transitions(r.target))} probabilistic transition(s)",
            mode=args.mode,
            out=args.out,
            states=len(r.target.states),
            letters=len(r.target.alphabet),
            prob_transitions=len(prob_transitions(r.target)),
        )
    else:
        sys.stdout.write(text)
    return 0


def cmd_encode(args, out: Output) -> int:
    p = _load(args.file)
    r = _reduce(p, args.mode)
    w = parse_word(args.word)
    if args.mode == "one-coin":
        enc = r.encode(w)
    elif args.mode == "thirds":
        enc = r.encode(w, 2 if args.p is None else args.p)
    else:
        enc = r.block(w, 1 if args.p is None else args.p)
    out.emit(format_word(enc), word=format_word(enc), length=len(enc))
    return 0


def cmd_verify(args, out: Output) -> int:
    p = _load(args.file)
    r = _reduce(p, args.mode)
    if args.mode == "one-coin":
        rep = verify_one_coin(r, args.max_len)
        if rep.ok:
            out.emit(str(rep), verified="true", words=rep.words_checked)
            return 0
        w, a, b = rep.counterexamples[0]
        out.emit(str(rep), verified="false", words=rep.words_checked, counterexample=format_word(w),
                 source=a, target=b)
        return 1
    p_max = args.p_max or (8 if args.mode == "thirds" else 4)
    n, worst = 0, Fraction(0)
    alphabet = r.source.alphabet
    for w in words_up_to(alphabet, args.max_len):
        n += 1
        rep = verify_thirds(r, w, p_max) if args.mode == "thirds" else verify_value_preserving(r, w, p_max)
        residual = rep.residual if args.mode == "thirds" else rep.residuals[-1]
        worst = max(worst, residual)
        if not rep.ok:
            out.emit(
                f"counterexample {format_word(w) or '(empty)'}: values {', '.join(map(str, rep.values))}, "
                f"source {rep.source_prob}",
                verified="false", words=n, counterexample=format_word(w),
                values=",".join(map(str, rep.values)), source=rep.source_prob,
            )
            return 1
    out.emit(
        f"verified, {n} words, p up to {p_max}, largest residual {worst} ({fmt_decimal(worst)})",
        verified="true", words=n, p_max=p_max, max_residual=worst,
    )
    return 0


def cmd_sweep(args, out: Output) -> int:
    rep = equivalence_sweep(args.trials, args.states, args.letters, args.max_len, args.seed)
    failed = rep.failed
    lines = [f"{len(rep.trials)} trials, {len(failed)} failed"]
    for t in failed:
        lines += [f"trial {t.index}: {f}" for f in t.failures[:3]]
    out.emit("\n".join(lines), trials=len(rep.trials), failed=len(failed),
             failed_trials=",".join(str(t.index) for t in failed))
    return 0 if rep.ok else 1


def cmd_dot(args, out: Output) -> int:
    p = _load(args.file)
    sys.stdout.write(render_thread_tree(p, parse_word(args.word)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "kv"), default=argparse.SUPPRESS)

    parser = _Parser(prog="onecoin", description="Exact tools for simple probabilistic automata.", parents=[common])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help):
        sp = sub.add_parser(name, help=help, parents=[common])
        sp.set_defaults(func=func)
        return sp

    sp = add("validate", cmd_validate, "check well-formedness")
    sp.add_argument("file")
    sp = add("accept", cmd_accept, "exact acceptance probability of a word")
    sp.add_argument("file")
    sp.add_argument("--word", required=True)
    sp = add("value", cmd_value, "best acceptance over words up to a length")
    sp.add_argument("file")
    sp.add_argument("--max-len", type=int, required=True)
    sp.add_argument("--restrict-image", action="store_true",
                    help="only count words in the image language of a reduced automaton")
    sp = add("isolate", cmd_isolate, "closest acceptance to lambda over bounded words")
    sp.add_argument("file")
    sp.add_argument("--lambda", dest="lam", required=True)
    sp.add_argument("--max-len", type=int, required=True)
    sp = add("reduce", cmd_reduce, "build a reduced automaton")
    sp.add_argument("file")
    sp.add_argument("--mode", choices=MODES, required=True)
    sp.add_argument("--out")
    sp.add_argument("--lambda", dest="lam", default="1")
    sp = add("encode", cmd_encode, "encode a source word for a reduction")
    sp.add_argument("file")
    sp.add_argument("--mode", choices=MODES, required=True)
    sp.add_argument("--word", required=True)
    sp.add_argument("--p", type=int, help="sharps per letter (thirds) or block repetitions (value)")
    sp = add("verify", cmd_verify, "check a reduction on all words up to a length")
    sp.add_argument("file")
    sp.add_argument("--mode", choices=MODES, required=True)
    sp.add_argument("--max-len", type=int, required=True)
    sp.add_argument("--p-max", type=int)
    sp = add("sweep", cmd_sweep, "verify all reductions on random automata")
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument("--states", type=int, required=True)
    sp.add_argument("--letters", type=int, required=True)
    sp.add_argument("--max-len", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp = add("dot", cmd_dot, "DOT graph of the computation on a word")
    sp.add_argument("file")
    sp.add_argument("--word", required=True)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(f"usage error: {e}\n", file=sys.stderr)
        print(parser.format_usage(), file=sys.stderr)
        print("file grammar:\n" + GRAMMAR, file=sys.stderr)
        return 2
    out = Output(getattr(args, "format", "text"))
    try:
        return args.func(args, out)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    except (ParseError, PfaValidationError) as e:
        print(f"{args.file}: {e}", file=sys.stderr)
        return 2
    except NotImplementedError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (OSError, AlphabetError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
