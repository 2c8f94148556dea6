"""In-process referee for Monte Carlo matches.

A match has the game's phase structure. At initialization the players agree on
everything they will ever share: an entangled resource, a strategy, or a
shared random choice of strategy. After separation each player is a callable
``player(shared_setup, own_bit, own_rng) -> bit`` and sees nothing else, so a
player has no way to learn another player's input.

Randomness is split into fixed blocks of ``BLOCK_SIZE`` trials. Each block
derives independent Philox streams from ``(seed, block index, role)``, with one
role for the referee, one for the shared setup and one per player. Results
therefore do not depend on how blocks are spread across worker processes.
"""

from __future__ import annotations

import json
import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Literal, Optional, Union

import numpy as np

from . import classical, quantum
from .classical import DeterministicStrategy, StrategyMixture
from .game import (
    ENUMERATION_LIMIT,
    BitString,
    PromiseViolation,
    as_bits,
    check_players,
    enumerate_questions,
    hamming_weight,
    is_winning,
    promise_masks,
)
from .noise import NoiseModel, noisy_success

StrategyKind = Literal["quantum_perfect", "quantum_noisy", "deterministic", "mixture", "table1"]
STRATEGY_KINDS = ("quantum_perfect", "quantum_noisy", "deterministic", "mixture", "table1")
INPUT_MODES = ("uniform_promise", "fixed", "exhaustive")
BLOCK_SIZE = 4096
QUANTUM_VERIFY_LIMIT = 16

_ROLE_REFEREE = 0
_ROLE_SETUP = 1
_ROLE_PLAYER = 2


class PlayerRng:
    """A player's private randomness, buffered for speed."""

    def __init__(self, generator: np.random.Generator, chunk: int = 4096):
        self._gen = generator
        self._chunk = chunk
        self._buf = np.empty(0)
        self._pos = 0

    def random(self) -> float:
        if self._pos >= len(self._buf):
            self._buf = self._gen.random(self._chunk)
            self._pos = 0
        value = self._buf[self._pos]
        self._pos += 1
        return float(value)

    def bit(self) -> int:
        return int(self.random() < 0.5)


Player = Callable[[Any, int, PlayerRng], int]


@dataclass(frozen=True)
class MatchConfig:
    n: int
    strategy_kind: StrategyKind
    trials: int = 10_000
    seed: int = 0
    noise: Optional[NoiseModel] = None
    input_mode: Literal["uniform_promise", "fixed", "exhaustive"] = "uniform_promise"
    fixed_input: Optional[str] = None
    strategy: Optional[DeterministicStrategy] = None
    mixture: Optional[StrategyMixture] = None
    per_input: bool = False
    record_no_fire: bool = False

    def __post_init__(self) -> None:
        check_players(self.n)
        if self.strategy_kind not in STRATEGY_KINDS:
            raise ValueError(f"unknown strategy kind {self.strategy_kind!r}")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not 0 <= self.seed < 1 << 64:
            raise ValueError("seed must be a 64-bit unsigned value")
        if self.input_mode not in INPUT_MODES:
            raise ValueError(f"unknown input mode {self.input_mode!r}")
        if self.input_mode == "fixed":
            if self.fixed_input is None:
                raise ValueError("fixed input mode needs fixed_input")
            x = as_bits(self.fixed_input)
            if len(x) != self.n:
                raise ValueError(f"fixed input has {len(x)} bits, expected {self.n}")
            if hamming_weight(x) % 2:
                raise PromiseViolation(f"fixed input {x} has odd weight")
        elif self.fixed_input is not None:
            raise ValueError("fixed_input given but input_mode is not 'fixed'")
        if self.input_mode == "exhaustive":
            check_players(self.n, ENUMERATION_LIMIT)
        if (self.noise is not None) != (self.strategy_kind == "quantum_noisy"):
            raise ValueError("noise is required for quantum_noisy and not allowed otherwise")
        if (self.strategy is not None) != (self.strategy_kind == "deterministic"):
            raise ValueError("an explicit strategy is required for (and only for) kind deterministic")
        if self.strategy is not None and self.strategy.n != self.n:
            raise ValueError("strategy player count does not match n")
        if self.mixture is not None:
            if self.strategy_kind != "mixture":
                raise ValueError("mixture given for a non-mixture strategy kind")
            if self.mixture.n != self.n:
                raise ValueError("mixture player count does not match n")

    @property
    def n_blocks(self) -> int:
        return -(-self.trials // BLOCK_SIZE)

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "strategy_kind": self.strategy_kind,
            "trials": self.trials,
            "seed": self.seed,
            "noise": self.noise.as_dict() if self.noise else None,
            "input_mode": self.input_mode,
            "fixed_input": self.fixed_input,
            "strategy": str(self.strategy) if self.strategy else None,
        }


@dataclass
class MatchStats:
    trials: int
    wins: int
    win_rate: float
    ci_low: float
    ci_high: float
    per_input_breakdown: Optional[dict[str, dict[str, int]]] = None
    no_fire: Optional[int] = None
    config: dict = field(default_factory=dict)

    def to_json(self) -> str:
        doc = {
            "config": self.config,
            "trials": self.trials,
            "wins": self.wins,
            "win_rate": self.win_rate,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
        }
        if self.per_input_breakdown is not None:
            doc["per_input_breakdown"] = self.per_input_breakdown
        if self.no_fire is not None:
            doc["no_fire"] = self.no_fire
        return json.dumps(doc, sort_keys=True)


def wilson_interval(wins: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion, clamped to [0, 1]."""
    if trials < 1 or not 0 <= wins <= trials:
        raise ValueError(f"need 0 <= wins <= trials and trials >= 1, got {wins}/{trials}")
    if not 0 < confidence < 1:
        raise ValueError("confidence must be in (0, 1)")
    z = statistics.NormalDist().inv_cdf(0.5 + confidence / 2)
    phat = wins / trials
    denom = 1 + z * z / trials
    centre = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    low, high = max(0.0, centre - half), min(1.0, centre + half)
    # rounding can push an endpoint past phat at the extremes
    return min(low, phat), max(high, phat)


# ---------------------------------------------------------------------------
# players


def _quantum_player(index: int, noise: Optional[NoiseModel] = None) -> Player:
    keep = None if noise is None or noise.kind != "bit_flip" else noise.p
    fire = None if noise is None or noise.kind != "detector" else noise.q
    misses = [0]

    def player(shared_setup: quantum.GHZResource, own_bit: int, own_rng: PlayerRng) -> int:
        if fire is not None and own_rng.random() >= fire:
            # no detection: the qubit is lost; answer a fair coin
            misses[0] += 1
            return own_rng.bit()
        bit = shared_setup.measure(index, bool(own_bit))
        if keep is not None and own_rng.random() >= keep:
            bit ^= 1
        return bit

    player.misses = misses
    return player


def _code_player(code: tuple[int, int]) -> Player:
    def player(shared_setup: None, own_bit: int, own_rng: PlayerRng) -> int:
        return code[own_bit]

    return player


def _mixture_player(index: int) -> Player:
    def player(shared_setup: tuple, own_bit: int, own_rng: PlayerRng) -> int:
        return shared_setup[index][own_bit]

    return player


def make_players(cfg: MatchConfig) -> list[Player]:
    """Initialization phase: build one isolated callable per player."""
    kind = cfg.strategy_kind
    if kind in ("quantum_perfect", "quantum_noisy"):
        return [_quantum_player(i, cfg.noise) for i in range(cfg.n)]
    if kind == "deterministic":
        return [_code_player(c) for c in cfg.strategy.per_player]
    if kind == "table1":
        return [_code_player(c) for c in classical.table1_strategy(cfg.n).per_player]
    return [_mixture_player(i) for i in range(cfg.n)]


class _OptimalStrategySampler:
    """Uniform draws from every optimal deterministic strategy, by vectorized
    rejection over uniformly random codes. Yields per-player code pairs."""

    def __init__(self, n: int, rng: np.random.Generator, chunk: int = 4096):
        _, classes = classical.best_deterministic(n)
        self._ok = np.zeros((n + 1, 2), dtype=bool)
        for c in classes:
            self._ok[c.k, c.flip_parity] = True
        self._n, self._rng, self._chunk = n, rng, chunk
        self._pending: list = []

    def __call__(self) -> tuple:
        while not self._pending:
            codes = self._rng.integers(0, 4, size=(self._chunk, self._n))
            k = np.count_nonzero((codes == 1) | (codes == 2), axis=1)
            flip = np.count_nonzero(codes >= 2, axis=1) % 2
            accepted = codes[self._ok[k, flip]]
            self._pending = [tuple((c >> 1, c & 1) for c in row) for row in accepted.tolist()][::-1]
        return self._pending.pop()


def _setup_factory(cfg: MatchConfig, rng: np.random.Generator) -> Callable[[], Any]:
    kind = cfg.strategy_kind
    if kind in ("quantum_perfect", "quantum_noisy"):
        coins = PlayerRng(rng)
        return lambda: quantum.GHZResource(cfg.n, coins=coins.bit)
    if kind == "mixture":
        if cfg.mixture is not None:
            return lambda: cfg.mixture.sample(rng).per_player
        return _OptimalStrategySampler(cfg.n, rng)
    return lambda: None


# ---------------------------------------------------------------------------
# referee


def _block_streams(seed: int, block: int, n: int) -> list[np.random.Generator]:
    root = np.random.SeedSequence(entropy=seed, spawn_key=(block,))
    return [np.random.Generator(np.random.Philox(s)) for s in root.spawn(_ROLE_PLAYER + n)]


def _block_questions(cfg: MatchConfig, block: int, start: int, count: int, rng) -> np.ndarray:
    n = cfg.n
    if cfg.input_mode == "fixed":
        return np.full(count, as_bits(cfg.fixed_input).to_int(), dtype=np.int64)
    if cfg.input_mode == "exhaustive":
        questions = promise_masks(n)
        return questions[np.arange(start, start + count) % len(questions)]
    head = rng.integers(0, 1 << (n - 1), size=count, dtype=np.int64)
    return head | ((np.bitwise_count(head) & 1).astype(np.int64) << (n - 1))


def _run_block(cfg: MatchConfig, block: int) -> tuple[int, int, dict[int, list[int]], int]:
    start = block * BLOCK_SIZE
    count = min(BLOCK_SIZE, cfg.trials - start)
    streams = _block_streams(cfg.seed, block, cfg.n)
    players = make_players(cfg)
    player_rngs = [PlayerRng(g) for g in streams[_ROLE_PLAYER:]]
    new_setup = _setup_factory(cfg, streams[_ROLE_SETUP])
    questions = _block_questions(cfg, block, start, count, streams[_ROLE_REFEREE])
    track = cfg.per_input or cfg.input_mode != "uniform_promise"
    breakdown: dict[int, list[int]] = {}
    n = cfg.n
    wins = 0
    for xq in questions.tolist():
        shared = new_setup()
        answer = 0
        for i in range(n):
            answer ^= players[i](shared, (xq >> i) & 1, player_rngs[i])
        won = answer == ((xq.bit_count() >> 1) & 1)
        wins += won
        if track:
            cell = breakdown.setdefault(xq, [0, 0])
            cell[0] += won
            cell[1] += 1
    misses = sum(p.misses[0] for p in players if hasattr(p, "misses"))
    return wins, count, breakdown, misses


def _run_block_star(args):
    return _run_block(*args)


def run_match(cfg: MatchConfig, workers: int = 1) -> MatchStats:
    """Play ``cfg.trials`` independent rounds and aggregate the referee's scores."""
    jobs = [(cfg, b) for b in range(cfg.n_blocks)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_block_star, jobs))
    else:
        results = [_run_block(*job) for job in jobs]
    wins = sum(r[0] for r in results)
    trials = sum(r[1] for r in results)
    merged: dict[int, list[int]] = {}
    for _, _, part, _ in results:
        for xq, (w, t) in part.items():
            cell = merged.setdefault(xq, [0, 0])
            cell[0] += w
            cell[1] += t
    breakdown = None
    if cfg.per_input or cfg.input_mode != "uniform_promise":
        breakdown = {
            str(BitString.from_int(xq, cfg.n)): {"wins": w, "trials": t}
            for xq, (w, t) in sorted(merged.items(), key=lambda kv: str(BitString.from_int(kv[0], cfg.n)))
        }
    low, high = wilson_interval(wins, trials)
    no_fire = sum(r[3] for r in results) if cfg.record_no_fire else None
    return MatchStats(trials, wins, wins / trials, low, high, breakdown, no_fire, cfg.as_dict())


# ---------------------------------------------------------------------------
# exhaustive verification


@dataclass
class VerifyReport:
    n: int
    strategy_kind: str
    per_input: dict[BitString, Fraction | float]
    oracle_checked: bool = False

    @property
    def won_inputs(self) -> list[BitString]:
        return [x for x, p in self.per_input.items() if p == 1]

    @property
    def all_won(self) -> bool:
        return len(self.won_inputs) == len(self.per_input)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "strategy_kind": self.strategy_kind,
            "inputs": len(self.per_input),
            "inputs_won": len(self.won_inputs),
            "all_won": self.all_won,
            "oracle_checked": self.oracle_checked,
            "per_input": {str(x): str(p) for x, p in self.per_input.items()},
        }


def exhaustive_verify(
    n: int,
    strategy_kind: StrategyKind,
    noise: Optional[NoiseModel] = None,
    strategy: Optional[DeterministicStrategy] = None,
    mixture: Optional[StrategyMixture] = None,
    samples: int = 100,
    oracle: bool = False,
    seed: int = 0,
) -> VerifyReport:
    """Evaluate a strategy on every promise question.

    Deterministic strategies and mixtures get exact per-question success
    probabilities. The perfect quantum strategy is sampled ``samples`` times per
    question and reports 1 only if no sample loses; with ``oracle=True`` the
    state-vector distribution is also checked against the analytic one.
    """
    if strategy_kind not in STRATEGY_KINDS:
        raise ValueError(f"unknown strategy kind {strategy_kind!r}")
    if (noise is not None) != (strategy_kind == "quantum_noisy"):
        raise ValueError("noise is required for quantum_noisy and not allowed otherwise")
    per_input: dict[BitString, Union[Fraction, float]] = {}
    oracle_checked = False

    if strategy_kind == "quantum_perfect":
        check_players(n, QUANTUM_VERIFY_LIMIT)
        questions = promise_masks(n)
        answers = quantum.analytic_sample_packed(n, questions, np.random.default_rng(seed), samples)
        targets = (np.bitwise_count(questions) >> 1) & 1
        all_win = np.all((np.bitwise_count(answers) & 1) == targets[:, None], axis=1)
        for xq, ok in zip(questions.tolist(), all_win.tolist()):
            per_input[BitString.from_int(xq, n)] = Fraction(int(ok))
        if oracle:
            if n > quantum.ORACLE_LIMIT:
                raise ValueError(f"state-vector cross-check limited to n <= {quantum.ORACLE_LIMIT}")
            for x in per_input:
                dist = quantum.oracle_answer_distribution(x)
                ref = quantum.analytic_distribution(x)
                keys = set(dist) | set(ref)
                if any(abs(dist.get(y, 0.0) - ref.get(y, 0.0)) > quantum.ATOL for y in keys):
                    raise AssertionError(f"oracle disagrees with analytic distribution at {x}")
                if not all(is_winning(x, y) for y in dist):
                    per_input[x] = Fraction(0)
            oracle_checked = True
    elif strategy_kind == "quantum_noisy":
        check_players(n, ENUMERATION_LIMIT)
        p = noisy_success(n, noise.effective_p)
        per_input = {x: p for x in enumerate_questions(n)}
    elif strategy_kind in ("deterministic", "table1"):
        s = classical.table1_strategy(n) if strategy_kind == "table1" else strategy
        if s is None or s.n != n:
            raise ValueError("a deterministic strategy with n players is required")
        per_input = {
            x: Fraction(int(is_winning(x, classical.apply_strategy(s, x))))
            for x in enumerate_questions(n)
        }
    elif mixture is not None:
        per_input = {x: classical.mixture_success(mixture, x) for x in enumerate_questions(n)}
    else:
        per_input = dict(classical.conjecture_check(n).per_input)
    return VerifyReport(n, strategy_kind, per_input, oracle_checked)
