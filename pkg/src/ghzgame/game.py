"""Questions, answers, the promise and the winning rule of the n-player parity game.

Indexing convention, used everywhere in the package: player 1 is the leftmost
character of a bit string such as ``"0110"`` and bit 0 of the packed integer
form. So ``"011"`` packs to ``0b110 == 6``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

import numpy as np

MIN_PLAYERS = 3
ENUMERATION_LIMIT = 24


class PromiseViolation(ValueError):
    """Raised when a question has an odd number of 1s."""


@dataclass(frozen=True)
class BitString:
    """Immutable sequence of bits; index ``i`` belongs to player ``i + 1``."""

    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.bits) == 0:
            raise ValueError("bit string must be non-empty")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError(f"bits must be 0 or 1, got {self.bits!r}")

    @classmethod
    def parse(cls, text: str) -> "BitString":
        if not text or set(text) - {"0", "1"}:
            raise ValueError(f"not a bit string: {text!r}")
        return cls(tuple(int(c) for c in text))

    @classmethod
    def from_int(cls, value: int, n: int) -> "BitString":
        if value < 0 or value >> n:
            raise ValueError(f"{value} does not fit in {n} bits")
        return cls(tuple((value >> i) & 1 for i in range(n)))

    @classmethod
    def zeros(cls, n: int) -> "BitString":
        return cls((0,) * n)

    @property
    def n(self) -> int:
        return len(self.bits)

    def to_int(self) -> int:
        return sum(b << i for i, b in enumerate(self.bits))

    def __len__(self) -> int:
        return len(self.bits)

    def __getitem__(self, i: int) -> int:
        return self.bits[i]

    def __iter__(self) -> Iterator[int]:
        return iter(self.bits)

    def __str__(self) -> str:
        return "".join(map(str, self.bits))

    def __lt__(self, other: "BitString") -> bool:
        return (len(self), str(self)) < (len(other), str(other))


BitLike = Union[BitString, str]


def as_bits(x: BitLike) -> BitString:
    return x if isinstance(x, BitString) else BitString.parse(x)


@dataclass(frozen=True)
class DyadicRational:
    """Exact number ``numerator / 2**exponent``.

    Stored reduced: the numerator is odd unless the exponent is 0.
    Arithmetic and comparison also accept ``int`` and ``Fraction`` operands;
    mixing with a non-dyadic ``Fraction`` yields a ``Fraction``.
    """

    numerator: int
    exponent: int = 0

    def __post_init__(self) -> None:
        if self.exponent < 0:
            raise ValueError("exponent must be non-negative")
        num, exp = self.numerator, self.exponent
        if num == 0:
            exp = 0
        while exp > 0 and num % 2 == 0:
            num //= 2
            exp -= 1
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "exponent", exp)

    @classmethod
    def from_fraction(cls, value: Union[Fraction, int]) -> "DyadicRational":
        value = Fraction(value)
        den = value.denominator
        if den & (den - 1):
            raise ValueError(f"{value} is not dyadic")
        return cls(value.numerator, den.bit_length() - 1)

    @property
    def denominator(self) -> int:
        return 1 << self.exponent

    def to_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def __float__(self) -> float:
        return float(self.to_fraction())

    def decimal(self) -> str:
        """Exact terminating decimal expansion."""
        sign = "-" if self.numerator < 0 else ""
        digits = str(abs(self.numerator) * 5**self.exponent).rjust(self.exponent + 1, "0")
        if self.exponent == 0:
            return sign + digits
        return f"{sign}{digits[:-self.exponent]}.{digits[-self.exponent:]}"

    def __str__(self) -> str:
        return f"{self.numerator}/2^{self.exponent}"

    # arithmetic -------------------------------------------------------------

    def _lift(self, other):
        if isinstance(other, DyadicRational):
            return other
        if isinstance(other, int):
            return DyadicRational(other)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return self.to_fraction() + other if isinstance(other, Fraction) else NotImplemented
        e = max(self.exponent, o.exponent)
        return DyadicRational(
            (self.numerator << (e - self.exponent)) + (o.numerator << (e - o.exponent)), e
        )

    __radd__ = __add__

    def __neg__(self) -> "DyadicRational":
        return DyadicRational(-self.numerator, self.exponent)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return self.to_fraction() - other if isinstance(other, Fraction) else NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return self.to_fraction() * other if isinstance(other, Fraction) else NotImplemented
        return DyadicRational(self.numerator * o.numerator, self.exponent + o.exponent)

    __rmul__ = __mul__

    def _cmp_key(self, other) -> tuple[Fraction, Fraction]:
        if isinstance(other, DyadicRational):
            return self.to_fraction(), other.to_fraction()
        if isinstance(other, (int, Fraction)):
            return self.to_fraction(), Fraction(other)
        raise TypeError(f"cannot compare DyadicRational with {type(other).__name__}")

    def __eq__(self, other) -> bool:
        try:
            a, b = self._cmp_key(other)
        except TypeError:
            return NotImplemented
        return a == b

    def __hash__(self) -> int:
        return hash(self.to_fraction())

    def __lt__(self, other) -> bool:
        a, b = self._cmp_key(other)
        return a < b

    def __le__(self, other) -> bool:
        a, b = self._cmp_key(other)
        return a <= b

    def __gt__(self, other) -> bool:
        a, b = self._cmp_key(other)
        return a > b

    def __ge__(self, other) -> bool:
        a, b = self._cmp_key(other)
        return a >= b


# ---------------------------------------------------------------------------


def hamming_weight(x: BitLike) -> int:
    return sum(as_bits(x))


def satisfies_promise(x: BitLike) -> bool:
    return hamming_weight(x) % 2 == 0


def check_players(n: int, limit: int | None = None) -> None:
    if not isinstance(n, (int, np.integer)) or n < MIN_PLAYERS:
        raise ValueError(f"need at least {MIN_PLAYERS} players, got {n}")
    if limit is not None and n > limit:
        raise ValueError(f"n={n} exceeds the limit of {limit}")


def is_winning(x: BitLike, y: BitLike) -> bool:
    """True iff the answer ``y`` has parity equal to half the weight of ``x``.

    Raises:
        PromiseViolation: ``x`` has odd weight.
        ValueError: ``x`` and ``y`` differ in length.
    """
    x, y = as_bits(x), as_bits(y)
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    wx = hamming_weight(x)
    if wx % 2:
        raise PromiseViolation(f"question {x} has odd weight")
    return hamming_weight(y) % 2 == (wx // 2) % 2


def enumerate_questions(n: int, limit: int = ENUMERATION_LIMIT) -> Iterator[BitString]:
    """Yield the ``2**(n-1)`` even-weight strings of length ``n`` in lexicographic order."""
    check_players(n, limit)
    for bits in itertools.product((0, 1), repeat=n):
        if sum(bits) % 2 == 0:
            yield BitString(bits)


def promise_masks(n: int, limit: int = ENUMERATION_LIMIT) -> np.ndarray:
    """Packed integers of every promise question, in the same order as
    :func:`enumerate_questions`."""
    check_players(n, limit)
    lex = np.arange(1 << n, dtype=np.int64)
    # lexicographic rank has player 1 as the most significant bit; reverse it
    packed = np.zeros_like(lex)
    for i in range(n):
        packed |= ((lex >> (n - 1 - i)) & 1) << i
    weights = np.bitwise_count(packed)
    return packed[weights % 2 == 0]


def classical_bound(n: int) -> DyadicRational:
    """Best achievable classical success: ``1/2 + 2**-ceil(n/2)``."""
    check_players(n)
    c = (n + 1) // 2
    return DyadicRational((1 << (c - 1)) + 1, c)

