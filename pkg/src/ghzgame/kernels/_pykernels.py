"""Numpy implementations of the popcount kernels; used when the compiled
extension is unavailable. Signatures and results match ``_ckernels``."""

import numpy as np


def _masks(strategies: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    m0 = np.zeros(strategies.shape, dtype=np.int64)
    m1 = np.zeros(strategies.shape, dtype=np.int64)
    for i in range(n):
        code = (strategies >> (2 * i)) & 3
        m0 |= (code >> 1) << i
        m1 |= (code & 1) << i
    return m0, m1


def _parity(v: np.ndarray) -> np.ndarray:
    return np.bitwise_count(v) & 1


def strategy_win_counts(n: int, questions: np.ndarray) -> np.ndarray:
    m0, m1 = _masks(np.arange(1 << (2 * n), dtype=np.int64), n)
    wins = np.zeros(m0.shape, dtype=np.int64)
    for x in questions.tolist():
        target = (int(x).bit_count() >> 1) & 1
        wins += _parity((m0 & ~x) | (m1 & x)) == target
    return wins


def input_win_counts(n: int, questions: np.ndarray, strategies: np.ndarray) -> np.ndarray:
    m0, m1 = _masks(np.asarray(strategies, dtype=np.int64), n)
    out = np.empty(len(questions), dtype=np.int64)
    for j, x in enumerate(questions.tolist()):
        target = (int(x).bit_count() >> 1) & 1
        out[j] = np.count_nonzero(_parity((m0 & ~x) | (m1 & x)) == target)
    return out


def set_size_table(n: int, questions: np.ndarray) -> np.ndarray:
    q = np.asarray(questions, dtype=np.int64)
    b = (np.bitwise_count(q) >> 1) & 1
    out = np.zeros((n + 1, 2, 2), dtype=np.int64)
    for k in range(n + 1):
        a = _parity(q & ((1 << k) - 1))
        np.add.at(out[k], (a, b), 1)
    return out
