"""Imperfect apparatus: noisy success of the entangled protocol and the
reliability needed to stay ahead of every classical strategy.

Two player-level noise models, both independent across players:

* ``bit_flip``: the ideal answer bit is reported with probability ``p`` and
  flipped otherwise.
* ``detector``: the detector fires with probability ``q``; on a no-fire the
  player answers a fair random bit. That is a bit flip with ``p = (1 + q) / 2``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Literal, Optional

from .game import check_players, classical_bound

ATOL = 1e-12
ASYMPTOTIC_THRESHOLD = 0.5 + math.sqrt(2) / 4


def _check_prob(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must be in [0, 1], got {value}")
    return value


@dataclass(frozen=True)
class NoiseModel:
    kind: Literal["bit_flip", "detector"]
    p: Optional[float] = None
    q: Optional[float] = None

    def __post_init__(self) -> None:
        if self.kind == "bit_flip":
            if self.p is None or self.q is not None:
                raise ValueError("bit_flip noise takes p only")
            _check_prob("p", self.p)
        elif self.kind == "detector":
            if self.q is None or self.p is not None:
                raise ValueError("detector noise takes q only")
            _check_prob("q", self.q)
        else:
            raise ValueError(f"unknown noise kind {self.kind!r}")

    @classmethod
    def bit_flip(cls, p: float) -> "NoiseModel":
        return cls("bit_flip", p=p)

    @classmethod
    def detector(cls, q: float) -> "NoiseModel":
        return cls("detector", q=q)

    @property
    def effective_p(self) -> float:
        """Per-player probability that the reported bit equals the ideal one."""
        return self.p if self.kind == "bit_flip" else detector_to_flip(self.q)

    def as_dict(self) -> dict:
        return {"kind": self.kind, "p": self.p, "q": self.q}


def noisy_success(n: int, p: float) -> float:
    """Win probability when every player independently keeps the ideal bit with
    probability ``p``: ``1/2 + (2p - 1)**n / 2``."""
    check_players(n)
    p = _check_prob("p", p)
    return 0.5 + (2 * p - 1) ** n / 2


def noisy_success_binomial(n: int, p: float) -> float:
    """The same probability summed directly over even numbers of flipped players."""
    check_players(n)
    p = _check_prob("p", p)
    return math.fsum(math.comb(n, i) * p ** (n - i) * (1 - p) ** i for i in range(0, n + 1, 2))


def threshold(n: int) -> float:
    """Reliability above which the noisy protocol beats the classical bound
    (exact for odd ``n``): ``1/2 + sqrt(2)**(1 + 1/n) / 4``."""
    check_players(n)
    return 0.5 + math.sqrt(2) ** (1 + 1 / n) / 4


def detector_to_flip(q: float) -> float:
    q = _check_prob("q", q)
    return (1 + q) / 2


def beats_classical(n: int, p: float) -> bool:
    """Whether ``noisy_success(n, p)`` strictly exceeds ``classical_bound(n)``.

    Compares the excesses over 1/2 in log space, ``n log(2p-1)`` against
    ``-(ceil(n/2) - 1) log 2``, so the answer stays correct when both sides are
    far below double precision resolution around 1/2.
    """
    check_players(n)
    p = _check_prob("p", p)
    base = 2 * p - 1
    if base == 0 or (base < 0 and n % 2):
        return False
    c = (n + 1) // 2
    return n * math.log(abs(base)) > -(c - 1) * math.log(2)


def min_players_for_advantage(p: float, n_max: int) -> Optional[int]:
    """Smallest ``n`` in ``[3, n_max]`` where the noisy protocol beats every
    classical strategy, or ``None``."""
    if n_max < 3:
        raise ValueError(f"n_max must be at least 3, got {n_max}")
    _check_prob("p", p)
    return next((n for n in range(3, n_max + 1) if beats_classical(n, p)), None)


def threshold_rows(
    n_values: Iterable[int], p_values: Iterable[float] = (0.85, 0.9, 0.95)
) -> list[dict]:
    p_values = list(p_values)
    rows = []
    for n in n_values:
        row = {"n": n, "e_n": threshold(n), "bound": float(classical_bound(n))}
        for p in p_values:
            row[f"p_n@{p:g}"] = noisy_success(n, p)
        rows.append(row)
    return rows


def rows_to_csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
    return buf.getvalue()
