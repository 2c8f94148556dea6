"""The perfect entangled strategy, two ways.

``analytic_sample`` draws answers for any ``n`` straight from the parity class
the protocol lands in. The dense state-vector routines (``build_ghz``,
``apply_single_qubit``, ``measurement_distribution``) execute the literal gate
sequence and serve as an oracle for small ``n``. Basis index bit ``i`` is player
``i + 1``'s qubit, matching the packed convention of :mod:`ghzgame.game`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .game import BitLike, BitString, PromiseViolation, as_bits, hamming_weight

ORACLE_LIMIT = 12
ATOL = 1e-12
# squared amplitudes below this are dropped from reported distributions
SUPPORT_CUTOFF = 1e-14


@dataclass(frozen=True)
class SingleQubitGate:
    matrix: np.ndarray
    name: str = "U"

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.shape != (2, 2):
            raise ValueError(f"gate must be 2x2, got shape {m.shape}")
        if not np.allclose(m.conj().T @ m, np.eye(2), atol=ATOL, rtol=0):
            raise ValueError(f"gate {self.name} is not unitary")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


H = SingleQubitGate(np.array([[1, 1], [1, -1]]) / np.sqrt(2), "H")
S = SingleQubitGate(np.array([[1, 0], [0, 1j]]), "S")
I = SingleQubitGate(np.eye(2), "I")


@dataclass(frozen=True)
class QuantumState:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        if not 1 <= self.n_qubits <= ORACLE_LIMIT:
            raise ValueError(f"n_qubits must be in [1, {ORACLE_LIMIT}], got {self.n_qubits}")
        amp = np.asarray(self.amplitudes, dtype=np.complex128)
        if amp.shape != (1 << self.n_qubits,):
            raise ValueError(f"expected {1 << self.n_qubits} amplitudes, got {amp.shape}")
        if abs(np.vdot(amp, amp).real - 1.0) > ATOL:
            raise ValueError("state is not normalized")
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)

    def norm(self) -> float:
        return float(np.sqrt(np.vdot(self.amplitudes, self.amplitudes).real))

    def fidelity(self, other: "QuantumState") -> float:
        """``|<self|other>|**2``; equals 1 for states equal up to global phase."""
        return float(abs(np.vdot(self.amplitudes, other.amplitudes)) ** 2)

    def equivalent(self, other: "QuantumState", atol: float = ATOL) -> bool:
        return self.n_qubits == other.n_qubits and abs(self.fidelity(other) - 1.0) <= atol


def build_ghz(n: int, sign: int = 1) -> QuantumState:
    """``(|0...0> + sign |1...1>) / sqrt(2)``; ``sign=1`` is the state the players share."""
    if not 1 <= n <= ORACLE_LIMIT:
        raise ValueError(f"n must be in [1, {ORACLE_LIMIT}], got {n}")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    amp = np.zeros(1 << n, dtype=np.complex128)
    amp[0] = 1 / np.sqrt(2)
    amp[-1] = sign / np.sqrt(2)
    return QuantumState(n, amp)


def apply_single_qubit(state: QuantumState, qubit: int, gate: SingleQubitGate) -> QuantumState:
    n = state.n_qubits
    if not 0 <= qubit < n:
        raise IndexError(f"qubit {qubit} out of range for {n} qubits")
    if not isinstance(gate, SingleQubitGate):
        gate = SingleQubitGate(gate)
    # C-order reshape puts the most significant bit (qubit n-1) on axis 0
    axis = n - 1 - qubit
    psi = state.amplitudes.reshape((2,) * n)
    psi = np.moveaxis(np.tensordot(gate.matrix, psi, axes=([1], [axis])), 0, axis)
    return QuantumState(n, psi.reshape(-1))


def apply_layer(state: QuantumState, gates: dict[int, SingleQubitGate]) -> QuantumState:
    for qubit, gate in gates.items():
        state = apply_single_qubit(state, qubit, gate)
    return state


def measurement_distribution(state: QuantumState) -> dict[BitString, float]:
    """Computational-basis outcome probabilities, restricted to the support."""
    probs = np.abs(state.amplitudes) ** 2
    return {
        BitString.from_int(idx, state.n_qubits): float(probs[idx])
        for idx in np.flatnonzero(probs > SUPPORT_CUTOFF)
    }


def _check_question(x: BitString) -> None:
    if hamming_weight(x) % 2:
        raise PromiseViolation(f"question {x} has odd weight")


def oracle_answer_distribution(x: BitLike) -> dict[BitString, float]:
    """Run the protocol gate by gate: S where the input bit is 1, H everywhere, measure."""
    x = as_bits(x)
    _check_question(x)
    if len(x) > ORACLE_LIMIT:
        raise ValueError(f"state-vector oracle limited to {ORACLE_LIMIT} players")
    state = build_ghz(len(x))
    for i, bit in enumerate(x):
        if bit:
            state = apply_single_qubit(state, i, S)
    for i in range(len(x)):
        state = apply_single_qubit(state, i, H)
    return measurement_distribution(state)


def target_parity(x: BitString) -> int:
    """Answer parity forced by the protocol: half the question weight, mod 2."""
    return (hamming_weight(x) // 2) % 2


def analytic_distribution(x: BitLike) -> dict[BitString, float]:
    """Uniform distribution over the answers with the protocol's forced parity."""
    x = as_bits(x)
    _check_question(x)
    n, parity = len(x), target_parity(x)
    p = 1.0 / (1 << (n - 1))
    return {
        BitString.from_int(v, n): p
        for v in range(1 << n)
        if v.bit_count() % 2 == parity
    }


def analytic_sample(x: BitLike, rng: np.random.Generator) -> BitString:
    """One answer of the perfect protocol: ``n - 1`` fair bits, the last fixes parity."""
    x = as_bits(x)
    _check_question(x)
    head = rng.integers(0, 2, size=len(x) - 1).tolist()
    return BitString((*head, (sum(head) + target_parity(x)) % 2))


def analytic_sample_packed(
    n: int, questions: np.ndarray, rng: np.random.Generator, samples: int = 1
) -> np.ndarray:
    """Vectorized :func:`analytic_sample` over packed questions.

    Returns an int64 array of shape ``(len(questions), samples)`` of packed answers.
    """
    questions = np.asarray(questions, dtype=np.int64)
    weights = np.bitwise_count(questions)
    if np.any(weights % 2):
        raise PromiseViolation("some question has odd weight")
    head = rng.integers(0, 1 << (n - 1), size=(len(questions), samples), dtype=np.int64)
    last = (np.bitwise_count(head) + (weights // 2)[:, None]) % 2
    return head | (last.astype(np.int64) << (n - 1))


class GHZResource:
    """A shared entangled state that each player measures locally, one qubit each.

    Tracks the exact post-measurement state ``(|0..0> + i**phase |1..1>)/sqrt(2)``
    over the unmeasured qubits. Outcomes before the last are fair coins; the last
    outcome is fixed by the accumulated phase. Measurement randomness comes from
    the resource's own generator, not the players'.
    """

    def __init__(self, n: int, rng: np.random.Generator | None = None, coins=None):
        self.n = n
        self._remaining = set(range(n))
        self._phase = 0  # in units of pi/2
        self._coin = coins if coins is not None else (lambda: int(rng.integers(0, 2)))

    def measure(self, qubit: int, apply_s: bool) -> int:
        """Optionally apply S to ``qubit``, then H, then measure it."""
        if qubit not in self._remaining:
            raise ValueError(f"qubit {qubit} already measured or out of range")
        self._remaining.discard(qubit)
        if apply_s:
            self._phase = (self._phase + 1) % 4
        if self._remaining:
            outcome = self._coin()
            self._phase = (self._phase + 2 * outcome) % 4
            return outcome
        if self._phase == 0:
            return 0
        if self._phase == 2:
            return 1
        # relative phase +-i: only reachable when the question broke the promise
        return self._coin()
