"""Exact analysis of classical strategies.

A deterministic strategy gives each player a two-bit code ``ab``: output ``a``
on input 0 and ``b`` on input 1. So ``00``/``11`` are the constant answers,
``01`` copies the input and ``10`` negates it. Up to reordering players, the
number of questions a strategy wins depends only on ``k`` (how many players use
``01`` or ``10``) and the parity of the count of ``10`` and ``11`` codes; that pair
is a :class:`StrategyClass`.

Everything counted here is exact: integers, :class:`DyadicRational` for
proportions and :class:`fractions.Fraction` for mixture probabilities.
"""

from __future__ import annotations

import bisect
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .game import (
    ENUMERATION_LIMIT,
    BitLike,
    BitString,
    DyadicRational,
    PromiseViolation,
    as_bits,
    check_players,
    enumerate_questions,
    hamming_weight,
    is_winning,
    promise_masks,
)

CODES = ("00", "01", "10", "11")
# raw 4**n sweeps are only an oracle; they get expensive quickly
RAW_ENUMERATION_LIMIT = 10
CONJECTURE_LIMIT = 14


@dataclass(frozen=True)
class DeterministicStrategy:
    per_player: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        pairs = tuple(tuple(p) for p in self.per_player)
        if not pairs:
            raise ValueError("strategy needs at least one player")
        for pair in pairs:
            if len(pair) != 2 or any(b not in (0, 1) for b in pair):
                raise ValueError(f"invalid per-player code {pair!r}")
        object.__setattr__(self, "per_player", pairs)

    @classmethod
    def from_codes(cls, codes: Iterable[str]) -> "DeterministicStrategy":
        pairs = []
        for code in codes:
            code = code.strip()
            if code not in CODES:
                raise ValueError(f"unknown strategy code {code!r}; expected one of {CODES}")
            pairs.append((int(code[0]), int(code[1])))
        return cls(tuple(pairs))

    @classmethod
    def parse(cls, text: str) -> "DeterministicStrategy":
        """Parse ``"11,11,11"`` (commas or whitespace between codes)."""
        return cls.from_codes(text.replace(",", " ").split())

    @classmethod
    def from_index(cls, index: int, n: int) -> "DeterministicStrategy":
        """Inverse of :meth:`index`: player ``i``'s code value sits at bits ``2i, 2i+1``."""
        if not 0 <= index < 1 << (2 * n):
            raise ValueError(f"strategy index {index} out of range for n={n}")
        codes = [(index >> (2 * i)) & 3 for i in range(n)]
        return cls(tuple((c >> 1, c & 1) for c in codes))

    @property
    def n(self) -> int:
        return len(self.per_player)

    @property
    def codes(self) -> tuple[str, ...]:
        return tuple(f"{a}{b}" for a, b in self.per_player)

    @property
    def mask0(self) -> int:
        return sum(a << i for i, (a, _) in enumerate(self.per_player))

    @property
    def mask1(self) -> int:
        return sum(b << i for i, (_, b) in enumerate(self.per_player))

    def index(self) -> int:
        return sum((2 * a + b) << (2 * i) for i, (a, b) in enumerate(self.per_player))

    def permuted(self, order: Sequence[int]) -> "DeterministicStrategy":
        if sorted(order) != list(range(self.n)):
            raise ValueError("order must be a permutation of player indices")
        return DeterministicStrategy(tuple(self.per_player[i] for i in order))

    def __str__(self) -> str:
        return ",".join(self.codes)


@dataclass(frozen=True, order=True)
class StrategyClass:
    k: int
    flip_parity: int

    def __post_init__(self) -> None:
        if self.k < 0 or self.flip_parity not in (0, 1):
            raise ValueError(f"invalid strategy class ({self.k}, {self.flip_parity})")

    def as_dict(self) -> dict:
        return {"k": self.k, "flip_parity": self.flip_parity}


@dataclass(frozen=True)
class StrategyMixture:
    """A shared random choice among deterministic strategies."""

    support: tuple[DeterministicStrategy, ...]
    weights: tuple[Fraction, ...] = field(default=())

    def __post_init__(self) -> None:
        support = tuple(self.support)
        weights = tuple(Fraction(w) for w in self.weights)
        if not support:
            raise ValueError("mixture needs a non-empty support")
        if len(weights) != len(support):
            raise ValueError("one weight per strategy required")
        if any(w <= 0 for w in weights):
            raise ValueError("weights must be positive")
        if sum(weights) != 1:
            raise ValueError(f"weights sum to {sum(weights)}, not 1")
        if len({s.n for s in support}) != 1:
            raise ValueError("all strategies must have the same number of players")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def uniform(cls, strategies: Iterable[DeterministicStrategy]) -> "StrategyMixture":
        support = tuple(strategies)
        return cls(support, (Fraction(1, len(support)),) * len(support))

    @property
    def n(self) -> int:
        return self.support[0].n

    @cached_property
    def _cumulative(self) -> tuple[int, list[int]]:
        den = math.lcm(*(w.denominator for w in self.weights))
        return den, list(itertools.accumulate(int(w * den) for w in self.weights))

    def sample(self, rng: np.random.Generator) -> DeterministicStrategy:
        """Draw one strategy with exactly the mixture's probabilities."""
        den, cum = self._cumulative
        u = int(rng.integers(0, den)) if den <= 1 << 62 else _big_randbelow(rng, den)
        return self.support[bisect.bisect_right(cum, u)]


def _big_randbelow(rng: np.random.Generator, bound: int) -> int:
    nbits = bound.bit_length()
    while True:
        words = rng.integers(0, 1 << 32, size=(nbits + 31) // 32, dtype=np.uint64).tolist()
        value = sum(w << (32 * i) for i, w in enumerate(words)) >> (32 * len(words) - nbits)
        if value < bound:
            return value


# ---------------------------------------------------------------------------
# single strategies


def apply_strategy(s: DeterministicStrategy, x: BitLike) -> BitString:
    x = as_bits(x)
    if len(x) != s.n:
        raise ValueError(f"strategy has {s.n} players but question has {len(x)} bits")
    return BitString(tuple(pair[bit] for pair, bit in zip(s.per_player, x)))


def classify(s: DeterministicStrategy) -> StrategyClass:
    codes = s.codes
    k = sum(c in ("01", "10") for c in codes)
    flips = sum(c in ("10", "11") for c in codes)
    return StrategyClass(k, flips % 2)


# ---------------------------------------------------------------------------
# counting identities


def binomial_sum_mod4_direct(n: int, a: int) -> int:
    return sum(math.comb(n, i) for i in range(a % 4, n + 1, 4))


def binomial_sum_mod4(n: int, a: int) -> int:
    """``sum(C(n, i) for i = a mod 4)``.

    Uses the five-case closed form keyed on ``(n - 2a) mod 8``. Below ``n = 3``
    the closed form has fractional intermediate powers, so those are summed
    directly.
    """
    if a not in (0, 1, 2, 3):
        raise ValueError(f"residue must be in 0..3, got {a}")
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    if n < 3:
        return binomial_sum_mod4_direct(n, a)
    r = (n - 2 * a) % 8
    base = 1 << (n - 2)
    if r == 0:
        return base + (1 << (n // 2 - 1))
    if r == 4:
        return base - (1 << (n // 2 - 1))
    if r in (2, 6):
        return base
    if r in (1, 7):
        return base + (1 << ((n - 3) // 2))
    return base - (1 << ((n - 3) // 2))


def set_size(n: int, k: int, a: int, b: int) -> int:
    """Number of promise questions whose first ``k`` bits have parity ``a`` and
    whose weight is ``2b`` mod 4, via products of mod-4 binomial sums."""
    check_players(n)
    if not 0 <= k <= n:
        raise ValueError(f"k must be in [0, {n}], got {k}")
    if a not in (0, 1) or b not in (0, 1):
        raise ValueError("a and b must be bits")
    total = 0
    for i in range(a, 4, 2):
        j = (2 * b - i) % 4
        total += binomial_sum_mod4(k, i) * binomial_sum_mod4(n - k, j)
    return total


def set_size_brute_force(n: int) -> np.ndarray:
    """Counts ``[k, a, b]`` by enumerating every promise question."""
    return kernels.set_size_table(n, promise_masks(n))


def matched_count(n: int, k: int) -> int:
    """Closed form for ``set_size(n,k,0,0) + set_size(n,k,1,1)``.

    This is how many questions a class-``(k, 0)`` strategy wins. The case
    tables key on ``floor(n/2) + 3(n-k)`` mod 4.
    """
    check_players(n)
    if not 0 <= k <= n:
        raise ValueError(f"k must be in [0, {n}], got {k}")
    base = 1 << (n - 2)
    if n % 2:
        c = ((n - 1) // 2 + 3 * (n - k)) % 4
        delta = 1 << ((n - 3) // 2)
        return base + delta if c in (0, 3) else base - delta
    c = (n // 2 + 3 * (n - k)) % 4
    if c in (1, 3):
        return base
    delta = 1 << (n // 2 - 1)
    return base + delta if c == 0 else base - delta


def winning_count(n: int, cls: StrategyClass) -> int:
    if cls.k > n:
        raise ValueError(f"class k={cls.k} exceeds n={n}")
    matched = matched_count(n, cls.k)
    return matched if cls.flip_parity == 0 else (1 << (n - 1)) - matched


def winning_count_expansion(n: int, cls: StrategyClass) -> int:
    """Same as :func:`winning_count`, from :func:`set_size` instead of the case table."""
    matched = set_size(n, cls.k, 0, 0) + set_size(n, cls.k, 1, 1)
    return matched if cls.flip_parity == 0 else (1 << (n - 1)) - matched


def proportion(s: DeterministicStrategy) -> DyadicRational:
    check_players(s.n)
    return DyadicRational(winning_count(s.n, classify(s)), s.n - 1)


def proportion_brute_force(s: DeterministicStrategy) -> DyadicRational:
    wins = sum(is_winning(x, apply_strategy(s, x)) for x in enumerate_questions(s.n))
    return DyadicRational(wins, s.n - 1)


def all_classes(n: int) -> list[StrategyClass]:
    return [StrategyClass(k, f) for k in range(n + 1) for f in (0, 1)]


def class_size(n: int, cls: StrategyClass) -> int:
    """How many of the ``4**n`` strategies fall in ``cls``.

    Choose the ``k`` non-constant players; every player then has a binary
    choice, and exactly half of those ``2**n`` choices give each flip parity.
    """
    return math.comb(n, cls.k) << (n - 1)


def class_table(n: int) -> list[tuple[StrategyClass, DyadicRational]]:
    check_players(n)
    return [(c, DyadicRational(winning_count(n, c), n - 1)) for c in all_classes(n)]


def best_deterministic(
    n: int, limit: int = ENUMERATION_LIMIT
) -> tuple[DyadicRational, list[StrategyClass]]:
    """Optimal proportion over all deterministic strategies, and the classes reaching it."""
    check_players(n, limit)
    table = class_table(n)
    best = max(p for _, p in table)
    return best, [c for c, p in table if p == best]


def raw_win_counts(n: int) -> np.ndarray:
    """Questions won by every strategy index, by exhaustive evaluation."""
    check_players(n, RAW_ENUMERATION_LIMIT)
    return kernels.strategy_win_counts(n, promise_masks(n))


def classify_indices(n: int, indices: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized :func:`classify` over strategy indices: arrays ``(k, flip_parity)``."""
    indices = np.asarray(indices, dtype=np.int64)
    k = np.zeros(indices.shape, dtype=np.int64)
    flips = np.zeros(indices.shape, dtype=np.int64)
    for i in range(n):
        code = (indices >> (2 * i)) & 3
        k += (code == 1) | (code == 2)
        flips += code >> 1
    return k, flips % 2


def best_deterministic_brute_force(n: int) -> DyadicRational:
    return DyadicRational(int(raw_win_counts(n).max()), n - 1)


_TABLE_ROWS = {
    0: ("00", "00"),
    1: ("00", "00"),
    2: ("01", "00"),
    3: ("11", "11"),
    4: ("11", "00"),
    5: ("11", "11"),
    6: ("10", "00"),
    7: ("00", "00"),
}


def table1_strategy(n: int) -> DeterministicStrategy:
    """Simple optimal strategy keyed on ``n mod 8``.

    Player 1 gets the first code, everyone else the second. Only when
    ``n = 2 mod 4`` does anybody look at their input.
    """
    check_players(n)
    first, rest = _TABLE_ROWS[n % 8]
    return DeterministicStrategy.from_codes([first] + [rest] * (n - 1))


# ---------------------------------------------------------------------------
# mixtures


def _check_promise(x: BitString) -> None:
    if hamming_weight(x) % 2:
        raise PromiseViolation(f"question {x} has odd weight")


def mixture_success(mix: StrategyMixture, x: BitLike) -> Fraction:
    x = as_bits(x)
    _check_promise(x)
    return sum(
        (w for s, w in zip(mix.support, mix.weights) if is_winning(x, apply_strategy(s, x))),
        Fraction(0),
    )


def mixture_worst_case(mix: StrategyMixture, limit: int = ENUMERATION_LIMIT) -> Fraction:
    """Minimum success probability over all promise questions."""
    n = mix.n
    check_players(n, limit)
    questions = promise_masks(n)
    win = np.zeros(len(questions), dtype=object)
    win[:] = Fraction(0)
    for s, w in zip(mix.support, mix.weights):
        y = (s.mask0 & ~questions) | (s.mask1 & questions)
        won = (np.bitwise_count(y) & 1) == ((np.bitwise_count(questions) >> 1) & 1)
        win[won] += w
    return min(win)


def optimal_strategies(n: int) -> list[DeterministicStrategy]:
    """Every deterministic strategy achieving the bound, found by raw enumeration."""
    counts = raw_win_counts(n)
    return [
        DeterministicStrategy.from_index(int(i), n)
        for i in np.flatnonzero(counts == counts.max())
    ]


def optimal_mixture(n: int) -> StrategyMixture:
    return StrategyMixture.uniform(optimal_strategies(n))


def sample_optimal_strategy(n: int, rng: np.random.Generator) -> DeterministicStrategy:
    """Uniform draw from all optimal strategies without listing them.

    Rejection sampling over uniform strategy codes; at least a quarter of all
    strategies are optimal, so few draws are needed.
    """
    _, classes = best_deterministic(n)
    wanted = set(classes)
    while True:
        codes = rng.integers(0, 4, size=n).tolist()
        s = DeterministicStrategy(tuple((c >> 1, c & 1) for c in codes))
        if classify(s) in wanted:
            return s


def _optimal_winners_dp(x: BitString, optimal: Sequence[StrategyClass]) -> int:
    """Count strategies in ``optimal`` classes that win ``x``.

    Sweeps players left to right, tracking how many strategies reach each
    ``(k, flip parity, answer parity)`` so far.
    """
    n = len(x)
    dp = np.zeros((n + 1, 2, 2), dtype=np.int64)
    dp[0, 0, 0] = 1
    for bit in x:
        nxt = np.zeros_like(dp)
        nxt += dp  # 00
        nxt[:, 1, :] += dp[:, 0, ::-1]  # 11: flip parity and answer parity toggle
        nxt[:, 0, :] += dp[:, 1, ::-1]
        # 01 answers the input bit; 10 answers its complement and toggles flip parity
        copy = dp[:, :, ::-1] if bit else dp
        neg = dp if bit else dp[:, :, ::-1]
        nxt[1:, :, :] += copy[:-1]
        nxt[1:, ::-1, :] += neg[:-1]
        dp = nxt
    target = (hamming_weight(x) // 2) % 2
    return int(sum(dp[c.k, c.flip_parity, target] for c in optimal))


@dataclass
class ConjectureReport:
    n: int
    bound: DyadicRational
    classes: list[StrategyClass]
    optimal_count: int
    per_input: dict[BitString, Fraction]

    @property
    def counterexamples(self) -> list[BitString]:
        return [x for x, p in self.per_input.items() if p != self.bound]

    @property
    def all_equal_bound(self) -> bool:
        return not self.counterexamples

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "bound": str(self.bound),
            "bound_decimal": self.bound.decimal(),
            "classes": [c.as_dict() for c in self.classes],
            "optimal_strategies": self.optimal_count,
            "per_input": {str(x): str(p) for x, p in self.per_input.items()},
            "all_equal_bound": self.all_equal_bound,
            "counterexamples": [str(x) for x in self.counterexamples],
        }


def optimal_mixture_success(n: int, x: BitLike) -> Fraction:
    """Success on ``x`` of the uniform mixture over every optimal strategy."""
    x = as_bits(x)
    _check_promise(x)
    if len(x) != n:
        raise ValueError(f"question length {len(x)} != n={n}")
    _, classes = best_deterministic(n)
    total = sum(class_size(n, c) for c in classes)
    return Fraction(_optimal_winners_dp(x, classes), total)


def conjecture_check(
    n: int, limit: int = CONJECTURE_LIMIT, method: str = "dp"
) -> ConjectureReport:
    """Exact per-question success of the uniform mixture over all optimal strategies.

    ``method="dp"`` counts winners class by class without listing strategies;
    ``method="enumerate"`` evaluates every optimal strategy index directly and
    is limited to ``RAW_ENUMERATION_LIMIT`` players.
    """
    check_players(n, limit)
    bound, classes = best_deterministic(n)
    total = sum(class_size(n, c) for c in classes)
    questions = list(enumerate_questions(n))
    if method == "dp":
        winners = [_optimal_winners_dp(x, classes) for x in questions]
    elif method == "enumerate":
        counts = raw_win_counts(n)
        optimal = np.flatnonzero(counts == counts.max())
        if len(optimal) != total:
            raise AssertionError(f"enumeration found {len(optimal)} optimal strategies, expected {total}")
        winners = kernels.input_win_counts(n, promise_masks(n), optimal).tolist()
    else:
        raise ValueError(f"unknown method {method!r}")
    per_input = {x: Fraction(w, total) for x, w in zip(questions, winners)}
    return ConjectureReport(n, bound, classes, total, per_input)
