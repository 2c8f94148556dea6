"""Acceptance criteria, one test each. The terminal summary prints a PASS/FAIL
line per test in this module (see conftest.py)."""

import math
import time
from fractions import Fraction

import numpy as np

from ghzgame import classical, noise, quantum
from ghzgame.classical import (
    DeterministicStrategy,
    StrategyClass,
    StrategyMixture,
    best_deterministic,
    conjecture_check,
)
from ghzgame.game import DyadicRational, classical_bound, enumerate_questions, is_winning, promise_masks
from ghzgame.harness import MatchConfig, run_match
from ghzgame.noise import NoiseModel


def _bound_literal(n):
    # 1/2 + 2**-ceil(n/2), written out independently of classical_bound
    return Fraction(1, 2) + Fraction(1, 2 ** math.ceil(n / 2))


def test_criterion_01_deterministic_optimum_equals_bound():
    start = time.perf_counter()
    for n in range(3, 11):
        best, _ = best_deterministic(n)
        assert isinstance(best, DyadicRational)
        assert best == classical_bound(n) == _bound_literal(n)
    for n in range(3, 9):
        raw = classical.raw_win_counts(n)
        k, flip = classical.classify_indices(n, np.arange(4**n))
        predicted = np.array(
            [classical.winning_count(n, StrategyClass(int(a), int(b))) for a, b in zip(k, flip)]
        )
        assert np.array_equal(raw, predicted)
        assert DyadicRational(int(raw.max()), n - 1) == _bound_literal(n)
    assert time.perf_counter() - start < 120


def test_criterion_02_mod4_binomial_closed_form():
    start = time.perf_counter()
    cases = 0
    for n in range(1, 65):
        for a in range(4):
            direct = sum(math.comb(n, i) for i in range(n + 1) if i % 4 == a)
            assert classical.binomial_sum_mod4(n, a) == direct, (n, a)
            cases += 1
    assert cases == 256
    assert time.perf_counter() - start < 1


def test_criterion_03_set_size_case_tables_match_enumeration():
    start = time.perf_counter()
    for n in range(3, 20):
        counts = classical.set_size_brute_force(n)
        assert counts.sum() == (n + 1) * 2 ** (n - 1)
        for k in range(n + 1):
            for a in (0, 1):
                for b in (0, 1):
                    assert classical.set_size(n, k, a, b) == counts[k, a, b], (n, k, a, b)
            assert classical.matched_count(n, k) == counts[k, 0, 0] + counts[k, 1, 1], (n, k)
    assert time.perf_counter() - start < 30


def test_criterion_04_constructed_strategy_reaches_bound():
    for n in range(3, 20):
        s = classical.table1_strategy(n)
        won = int(np.count_nonzero(_wins_for(s, promise_masks(n))))
        assert Fraction(won, 2 ** (n - 1)) == _bound_literal(n), n
        assert classical.proportion(s) == _bound_literal(n), n


def _wins_for(s, questions):
    # independent evaluation: y_i = out0 when x_i = 0 else out1
    x = questions
    y = (np.int64(s.mask0) & ~x) | (np.int64(s.mask1) & x)
    return (np.bitwise_count(y) % 2) == ((np.bitwise_count(x) // 2) % 2)


def test_criterion_05_quantum_strategy_always_wins():
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    for n in range(3, 17):
        questions = promise_masks(n)
        assert len(questions) == 2 ** (n - 1)
        answers = quantum.analytic_sample_packed(n, questions, rng, samples=100)
        target = (np.bitwise_count(questions) // 2) % 2
        assert np.all(np.bitwise_count(answers) % 2 == target[:, None]), n
    for n in range(3, 7):
        for x in enumerate_questions(n):
            oracle = quantum.oracle_answer_distribution(x)
            analytic = quantum.analytic_distribution(x)
            for y in set(oracle) | set(analytic):
                assert abs(oracle.get(y, 0.0) - analytic.get(y, 0.0)) <= 1e-12
            assert all(is_winning(x, y) for y in oracle)
    assert time.perf_counter() - start < 60


def test_criterion_06_noisy_success_and_thresholds():
    assert abs(noise.noisy_success(3, 0.9) - 0.756) <= 1e-12
    trials = 10**6
    stats = run_match(
        MatchConfig(n=3, strategy_kind="quantum_noisy", trials=trials, seed=6, noise=NoiseModel.bit_flip(0.9)),
        workers=8,
    )
    sigma = math.sqrt(0.756 * 0.244 / trials)
    assert abs(stats.win_rate - 0.756) <= 4 * sigma
    assert abs(noise.threshold(3) - 0.897) <= 5e-4
    assert abs(noise.threshold(5) - 0.879) <= 5e-4
    assert abs(noise.threshold(1000) - 0.853553) <= 1e-3


def test_criterion_07_detector_efficiency():
    q = 1 / math.sqrt(2)
    assert abs(noise.detector_to_flip(q) - (0.5 + math.sqrt(2) / 4)) <= 1e-12
    found = noise.min_players_for_advantage(noise.detector_to_flip(0.72), 400)
    assert found is not None and 3 <= found <= 400
    assert noise.min_players_for_advantage(noise.detector_to_flip(0.70), 400) is None


def test_criterion_08_optimal_mixture_is_flat():
    start = time.perf_counter()
    for method in ("dp", "enumerate"):
        for n in range(3, 11):
            report = conjecture_check(n, method=method)
            assert len(report.per_input) == 2 ** (n - 1)
            assert set(report.per_input.values()) == {_bound_literal(n)}, (method, n)
            assert report.counterexamples == []
    assert time.perf_counter() - start < 600


def _random_mixture(n, rng):
    size = int(rng.integers(1, 9))
    indices = rng.choice(4**n, size=size, replace=False)
    weights = rng.integers(1, 20, size=size)
    total = int(weights.sum())
    return StrategyMixture(
        tuple(DeterministicStrategy.from_index(int(i), n) for i in indices),
        tuple(Fraction(int(w), total) for w in weights),
    )


def test_criterion_09_mixtures_never_beat_deterministic():
    rng = np.random.default_rng(900)
    for n in (3, 4, 5, 6):
        best, _ = best_deterministic(n)
        for _ in range(100):
            assert classical.mixture_worst_case(_random_mixture(n, rng)) <= best.to_fraction()
    assert classical.mixture_worst_case(classical.optimal_mixture(3)) == _bound_literal(3)


def test_criterion_10_worker_count_does_not_change_output():
    configs = [
        MatchConfig(n=5, strategy_kind="quantum_noisy", trials=40_000, seed=10,
                    noise=NoiseModel.detector(0.8), per_input=True, record_no_fire=True),
        MatchConfig(n=4, strategy_kind="mixture", trials=30_000, seed=11, per_input=True),
    ]
    for cfg in configs:
        assert cfg.n_blocks > 1
        assert run_match(cfg, workers=1).to_json() == run_match(cfg, workers=8).to_json()
