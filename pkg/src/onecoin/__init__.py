"""Exact simple probabilistic automata and their one-coin simulations."""

from .analysis import equivalence_sweep, estimate_value, isolation_probe, random_simple_pfa
from .core import (
    AlphabetError,
    Pfa,
    ProbTransition,
    accept_prob,
    dirac,
    is_simple,
    is_thirds,
    prob_transitions,
    reach_prob,
    run,
    step,
    validate,
)
from .fileformat import parse, serialize
from .reduce_onecoin import build_one_coin, encode, image_escape_witness, verify_one_coin
from .reduce_thirds import build_thirds, encode_thirds, verify_thirds
from .reduce_value import (
    block_decompose,
    build_syntactic_dfa,
    build_value_preserving,
    key_observation_check,
    recover_source_word,
    verify_value_preserving,
)

__all__ = [
    "AlphabetError", "Pfa", "ProbTransition", "accept_prob", "dirac", "is_simple", "is_thirds",
    "prob_transitions", "reach_prob", "run", "step", "validate", "parse", "serialize",
    "build_one_coin", "encode", "image_escape_witness", "verify_one_coin",
    "build_thirds", "encode_thirds", "verify_thirds",
    "block_decompose", "build_syntactic_dfa", "build_value_preserving", "key_observation_check",
    "recover_source_word", "verify_value_preserving",
    "equivalence_sweep", "estimate_value", "isolation_probe", "random_simple_pfa",
]
