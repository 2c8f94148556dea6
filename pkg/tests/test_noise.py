import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ghzgame.game import classical_bound
from ghzgame.noise import (
    ASYMPTOTIC_THRESHOLD,
    NoiseModel,
    beats_classical,
    detector_to_flip,
    min_players_for_advantage,
    noisy_success,
    noisy_success_binomial,
    rows_to_csv,
    threshold,
    threshold_rows,
)


@pytest.mark.parametrize("n", [3, 4, 7, 20])
def test_noisy_success_trivial_points(n):
    assert noisy_success(n, 1.0) == 1.0
    assert noisy_success(n, 0.5) == 0.5


def test_noisy_success_three_players():
    assert noisy_success(3, 0.9) == pytest.approx(0.756, abs=1e-12)
    assert noisy_success_binomial(3, 0.9) == pytest.approx(0.756, abs=1e-12)


@pytest.mark.parametrize("n", range(3, 41))
def test_closed_form_matches_even_error_sum(n):
    for p in np.round(np.arange(0, 1.0001, 0.1), 10):
        assert noisy_success(n, p) == pytest.approx(noisy_success_binomial(n, p), abs=1e-12)


@given(st.integers(3, 60), st.floats(0.5, 1.0), st.floats(0.5, 1.0))
def test_noisy_success_monotone_above_half(n, p1, p2):
    lo, hi = sorted((p1, p2))
    assert noisy_success(n, lo) <= noisy_success(n, hi)


def test_threshold_values():
    assert threshold(3) == pytest.approx(0.8968, abs=1e-4)
    assert threshold(5) == pytest.approx(0.8789, abs=1e-4)
    assert threshold(10**6) == pytest.approx(0.853553, abs=1e-6)
    assert ASYMPTOTIC_THRESHOLD == pytest.approx(0.5 + math.sqrt(2) / 4)


def test_threshold_decreasing_and_bounded():
    values = [threshold(n) for n in range(3, 2000)]
    assert all(a > b for a, b in zip(values, values[1:]))
    assert all(v > ASYMPTOTIC_THRESHOLD for v in values)


@pytest.mark.parametrize("n", range(3, 22, 2))
def test_threshold_characterizes_advantage_for_odd_n(n):
    bound = float(classical_bound(n))
    for p in np.round(np.arange(0, 1.0005, 0.001), 6):
        above = p > threshold(n)
        assert above == (noisy_success(n, p) > bound)
        assert above == beats_classical(n, p)


def _even_n_report():
    """Even n: where the exact crossover sits relative to the odd-n formula."""
    rows = []
    for n in range(4, 23, 2):
        grid = np.round(np.arange(0.5, 1.0005, 0.001), 6)
        first = next(p for p in grid if noisy_success(n, p) > float(classical_bound(n)))
        rows.append((n, first, threshold(n)))
    return rows


def test_even_n_crossover_is_reported_and_tends_to_limit():
    rows = _even_n_report()
    # even n: (2p-1)**n / 2 > 2**(-n/2) solves to p > 1/2 + 2**(1/n - 1/2) / 2
    for n, first, _ in rows:
        exact = 0.5 + 2 ** (1 / n - 0.5) / 2
        assert first == pytest.approx(exact, abs=1e-3)
        assert first > ASYMPTOTIC_THRESHOLD
    assert rows[-1][1] < rows[0][1]


def test_detector_to_flip():
    assert detector_to_flip(1.0) == 1.0
    assert detector_to_flip(0.8) == pytest.approx(0.9, abs=1e-15)
    assert detector_to_flip(1 / math.sqrt(2)) == pytest.approx(0.5 + math.sqrt(2) / 4, abs=1e-12)


def test_min_players_examples():
    assert min_players_for_advantage(0.95, 50) == 3
    assert min_players_for_advantage(0.84, 200) is None
    assert min_players_for_advantage(1.0, 50) == 3


def test_min_players_detector_range():
    assert min_players_for_advantage(detector_to_flip(0.72), 400) == 21
    assert min_players_for_advantage(detector_to_flip(0.70), 400) is None


def test_beats_classical_survives_tiny_excesses():
    # at n = 401 both excesses are far below double resolution near 1/2
    assert beats_classical(401, 0.86)
    assert not beats_classical(401, 0.85)


def test_noise_model_validation():
    assert NoiseModel.detector(0.8).effective_p == pytest.approx(0.9)
    assert NoiseModel.bit_flip(0.7).effective_p == 0.7
    with pytest.raises(ValueError):
        NoiseModel("bit_flip", q=0.5)
    with pytest.raises(ValueError):
        NoiseModel.bit_flip(1.5)
    with pytest.raises(ValueError):
        noisy_success(3, -0.1)
    with pytest.raises(ValueError):
        threshold(2)


def test_threshold_csv():
    text = rows_to_csv(threshold_rows([3, 5], [0.9]))
    lines = text.strip().splitlines()
    assert lines[0] == "n,e_n,bound,p_n@0.9"
    assert lines[1].startswith("3,0.89685")
    assert len(lines) == 3
