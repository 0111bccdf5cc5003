"""Exact signed-real state-vector simulator: the ground-truth track.

Amplitudes are signed reals only (phases restricted to +/-1), which covers
the gate set used here (X, Z, H, CNOT) and keeps this track directly
comparable with the disk track. Qubit 0 is the most significant bit of the
basis index, so for two qubits the amplitude order is 00, 01, 10, 11.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

ORACLE_TOL = 1e-12
MAX_QUBITS = 10


class SimulationError(ValueError):
    """An operation violated a simulator precondition."""


@dataclass(frozen=True)
class RealState:
    """Normalized signed-real amplitude vector over 1..10 qubits."""

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        vec = np.array(self.amplitudes, dtype=float)
        n = vec.size
        if vec.ndim != 1 or n < 2 or n & (n - 1):
            raise SimulationError(f"amplitude count must be a power of two >= 2, got {n}")
        if n > 2**MAX_QUBITS:
            raise SimulationError(f"at most {MAX_QUBITS} qubits supported")
        if abs(float(vec @ vec) - 1.0) > ORACLE_TOL:
            raise SimulationError("state is not normalized")
        vec.flags.writeable = False
        object.__setattr__(self, "amplitudes", vec)

    @property
    def n_qubits(self) -> int:
        return self.amplitudes.size.bit_length() - 1

    def __iter__(self):
        return iter(self.amplitudes)


@dataclass(frozen=True)
class Gate:
    """Real 2x2 unitary. Row (a, b) is the image of |0>, row (c, d) of |1>."""

    a: float
    b: float
    c: float
    d: float
    name: str = ""

    def __post_init__(self) -> None:
        if abs(self.a**2 + self.b**2 - 1.0) > ORACLE_TOL:
            raise SimulationError(f"gate {self.name or '?'}: |0> row is not unit length")
        if abs(self.c**2 + self.d**2 - 1.0) > ORACLE_TOL:
            raise SimulationError(f"gate {self.name or '?'}: |1> row is not unit length")
        if abs(self.a * self.c + self.b * self.d) > ORACLE_TOL:
            raise SimulationError(f"gate {self.name or '?'}: rows are not orthogonal")

    @property
    def matrix(self) -> np.ndarray:
        """Column-vector action: new = matrix @ (amp0, amp1)."""
        return np.array([[self.a, self.c], [self.b, self.d]])


_SQRT2_INV = 1.0 / math.sqrt(2.0)

X = Gate(0.0, 1.0, 1.0, 0.0, "X")
Z = Gate(1.0, 0.0, 0.0, -1.0, "Z")
H = Gate(_SQRT2_INV, _SQRT2_INV, _SQRT2_INV, -_SQRT2_INV, "H")
I = Gate(1.0, 0.0, 0.0, 1.0, "I")  # noqa: E741

GATES = {"X": X, "Z": Z, "H": H, "I": I}


def make_state(amplitudes) -> RealState:
    """Build a RealState from a near-normalized signed-real vector.

    The vector length must be a power of two >= 2. A norm within 1e-9 of 1
    is accepted and renormalized exactly; anything further off is an error.
    """
    vec = np.array(list(amplitudes), dtype=float)
    n = vec.size
    if vec.ndim != 1 or n < 2 or n & (n - 1):
        raise SimulationError(f"amplitude count must be a power of two >= 2, got {n}")
    norm = float(np.sqrt(vec @ vec))
    if norm == 0.0:
        raise SimulationError("zero vector is not a state")
    if abs(norm - 1.0) > 1e-9:
        raise SimulationError(f"state norm {norm} is not within 1e-9 of 1")
    return RealState(vec / norm)


def _check_index(state: RealState, index: int, label: str) -> None:
    if not 0 <= index < state.n_qubits:
        raise SimulationError(f"{label} qubit {index} out of range for {state.n_qubits} qubits")


def apply_gate(state: RealState, gate: Gate, target: int, control: int | None = None) -> RealState:
    """Apply a 2x2 gate to `target`, optionally conditioned on `control` being 1."""
    _check_index(state, target, "target")
    n = state.n_qubits
    if control is None and n == 1:
        a0, a1 = state.amplitudes
        return RealState([gate.a * a0 + gate.c * a1, gate.b * a0 + gate.d * a1])
    psi = state.amplitudes.reshape([2] * n).copy()
    if control is None:
        moved = np.moveaxis(psi, target, 0)
        moved[...] = (gate.matrix @ moved.reshape(2, -1)).reshape(moved.shape)
    else:
        _check_index(state, control, "control")
        if control == target:
            raise SimulationError("control and target must differ")
        moved = np.moveaxis(psi, (control, target), (0, 1))
        block = moved[1]
        moved[1] = (gate.matrix @ block.reshape(2, -1)).reshape(block.shape)
    out = psi.reshape(-1)
    assert abs(float(out @ out) - 1.0) <= 1e-10, "gate application drifted the norm"
    return RealState(out)


def probabilities(state: RealState) -> np.ndarray:
    """Born probabilities in binary order."""
    return state.amplitudes**2


def collapse(state: RealState, target: int, outcome: int) -> RealState:
    """Project onto `target`=outcome and renormalize.

    A branch probability below 1e-12 means the outcome is impossible and is
    an error.
    """
    _check_index(state, target, "target")
    outcome = int(outcome)  # a bare bool would trigger numpy mask indexing
    if outcome not in (0, 1):
        raise SimulationError(f"outcome must be 0 or 1, got {outcome}")
    n = state.n_qubits
    if n == 1:
        amp = float(state.amplitudes[outcome])
        if amp * amp < 1e-12:
            raise SimulationError(f"measuring qubit {target} as {outcome} has probability ~0")
        vec = [0.0, 0.0]
        vec[outcome] = 1.0 if amp > 0 else -1.0
        return RealState(vec)
    psi = state.amplitudes.reshape([2] * n).copy()
    moved = np.moveaxis(psi, target, 0)
    p = float(np.sum(moved[outcome] ** 2))
    if p < 1e-12:
        raise SimulationError(f"measuring qubit {target} as {outcome} has probability ~0")
    moved[1 - outcome] = 0.0
    return RealState(psi.reshape(-1) / math.sqrt(p))


def measure(state: RealState, target: int, random_draw: float) -> tuple[int, float, RealState]:
    """Measure one qubit: returns (outcome, probability of it, residual state).

    The outcome is 0 when random_draw falls below the Born probability of 0,
    so a uniform draw in [0, 1) realizes the Born rule.
    """
    _check_index(state, target, "target")
    if not 0.0 <= random_draw < 1.0:
        raise SimulationError("random_draw must lie in [0, 1)")
    n = state.n_qubits
    marg = state.amplitudes.reshape([2] * n) ** 2
    p0 = float(np.sum(np.moveaxis(marg, target, 0)[0]))
    outcome = 0 if random_draw < p0 else 1
    p = p0 if outcome == 0 else 1.0 - p0
    return outcome, p, collapse(state, target, outcome)


def tensor_states(a: RealState, b: RealState) -> RealState:
    """Kronecker product; `a`'s qubits come first."""
    return RealState(np.kron(a.amplitudes, b.amplitudes))


def overlap(a: RealState, b: RealState) -> float:
    """|<a|b>| — 1.0 means equal up to a global sign."""
    if a.amplitudes.size != b.amplitudes.size:
        raise SimulationError("states have different qubit counts")
    return abs(float(a.amplitudes @ b.amplitudes))
