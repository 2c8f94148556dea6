"""The n-player parity game: a perfect entangled strategy, exact analysis of
classical strategies, and noise thresholds for imperfect apparatus."""

from .classical import (
    DeterministicStrategy,
    StrategyClass,
    StrategyMixture,
    apply_strategy,
    best_deterministic,
    binomial_sum_mod4,
    classify,
    conjecture_check,
    mixture_success,
    mixture_worst_case,
    proportion,
    set_size,
    table1_strategy,
    winning_count,
)
from .game import (
    BitString,
    DyadicRational,
    PromiseViolation,
    classical_bound,
    enumerate_questions,
    hamming_weight,
    is_winning,
    satisfies_promise,
)
from .harness import MatchConfig, MatchStats, exhaustive_verify, run_match, wilson_interval
from .noise import (
    NoiseModel,
    detector_to_flip,
    min_players_for_advantage,
    noisy_success,
    threshold,
)
from .quantum import (
    QuantumState,
    SingleQubitGate,
    analytic_sample,
    apply_single_qubit,
    build_ghz,
    measurement_distribution,
    oracle_answer_distribution,
)

__version__ = "0.1.0"

__all__ = [
    "BitString",
    "DeterministicStrategy",
    "DyadicRational",
    "MatchConfig",
    "MatchStats",
    "NoiseModel",
    "PromiseViolation",
    "QuantumState",
    "SingleQubitGate",
    "StrategyClass",
    "StrategyMixture",
    "analytic_sample",
    "apply_single_qubit",
    "apply_strategy",
    "best_deterministic",
    "binomial_sum_mod4",
    "build_ghz",
    "classical_bound",
    "classify",
    "conjecture_check",
    "detector_to_flip",
    "enumerate_questions",
    "exhaustive_verify",
    "hamming_weight",
    "is_winning",
    "measurement_distribution",
    "min_players_for_advantage",
    "mixture_success",
    "mixture_worst_case",
    "noisy_success",
    "oracle_answer_distribution",
    "proportion",
    "run_match",
    "satisfies_promise",
    "set_size",
    "table1_strategy",
    "threshold",
    "wilson_interval",
    "winning_count",
]
