"""Scripted protocol engines: BB84 key agreement and two-stage teleportation.

Both protocols run the disk track and the exact track in lockstep. All
randomness comes from one seeded stream so transcripts are reproducible
bit-for-bit; callers may pass an `on_step` callback to audit every
intermediate state pair.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from enum import Enum
from typing import Callable

from .exact import GATES, RealState, SimulationError, apply_gate, collapse, make_state, tensor_states
from .disks import BLUE, ORANGE, Color, DiskSystem, Region, decode, encode_qubit, project, tensor
from .dynamics import MeasurementOutcome, apply_controlled_disk, apply_gate_disk, cancel, spin_window

StepHook = Callable[[str, DiskSystem, RealState], None] | None


class Basis(Enum):
    STANDARD = "S"
    HADAMARD = "H"


CLASSICAL = "classical"
FULL = "full"

# Outcome of measuring (inner, outer) -> correction gates for Bob, applied in
# order. Derived from the exact oracle (see the golden re-derivation test).
CORRECTIONS: dict[tuple[int, int], tuple[str, ...]] = {
    (0, 0): (),
    (0, 1): ("X",),
    (1, 0): ("Z",),
    (1, 1): ("X", "Z"),
}


def epr_disk() -> DiskSystem:
    """Shared correlated pair (|00> + |11>)/sqrt(2) as a stacked disk."""
    return DiskSystem(2, (Region(0.5, (BLUE, BLUE)), Region(0.5, (ORANGE, ORANGE))))


def epr_state() -> RealState:
    inv = 1.0 / math.sqrt(2.0)
    return make_state([inv, 0.0, 0.0, inv])


@dataclass(frozen=True)
class BB84Params:
    rounds: int
    eve_present: bool = False
    seed: int = 0
    sample_fraction: float = 0.5

    def __post_init__(self) -> None:
        if self.rounds < 1:
            raise SimulationError("rounds must be >= 1")
        if not 0.0 < self.sample_fraction < 1.0:
            raise SimulationError("sample_fraction must lie in (0, 1)")


@dataclass(frozen=True)
class BB84Round:
    index: int
    alice_bit: int
    alice_basis: Basis
    eve_basis: Basis | None
    bob_basis: Basis
    bob_outcome: int
    sifted: bool


def _draw_bit(rng: random.Random) -> int:
    return 0 if rng.random() < 0.5 else 1

def _draw_basis(rng: random.Random) -> Basis:
    return Basis.STANDARD if rng.random() < 0.5 else Basis.HADAMARD


def _rotate(disk: DiskSystem, state: RealState) -> tuple[DiskSystem, RealState]:
    """Basis change on both tracks: Hadamard, then the exact cancellation.

    The cancellations arising here pair equal-area slices, so the shortcut
    is exact and the rotated disk stays faithful. When every region has
    distinct colors no pair can exist, and the cancellation pass is skipped.
    """
    disk = apply_gate_disk(disk, GATES["H"], 0)
    colors = [r.colors for r in disk.regions]
    if len(colors) > len(set(colors)):
        disk, _ = cancel(disk)
    return disk, apply_gate(state, GATES["H"], 0)


def bb84_run(
    params: BB84Params, on_step: StepHook = None
) -> tuple[list[BB84Round], list[int], list[int], float]:
    """Run BB84 rounds; returns (rounds, alice key, bob key, qber).

    Per round the seeded stream is consumed in a fixed order: alice_bit,
    alice_basis, eve_basis (only when Eve is present), bob_basis, then the
    measurement draws in event order (Eve's, then Bob's). After all rounds,
    one draw per sifted round selects the error-estimation subset.
    """
    rng = random.Random(params.seed)
    rounds: list[BB84Round] = []
    for i in range(params.rounds):
        alice_bit = _draw_bit(rng)
        alice_basis = _draw_basis(rng)
        eve_basis = _draw_basis(rng) if params.eve_present else None
        bob_basis = _draw_basis(rng)

        disk = encode_qubit(1.0, 0.0) if alice_bit == 0 else encode_qubit(0.0, 1.0)
        state = make_state([1.0, 0.0] if alice_bit == 0 else [0.0, 1.0])
        if on_step:
            on_step(f"r{i} prepare", disk, state)
        if alice_basis is Basis.HADAMARD:
            disk, state = _rotate(disk, state)
            if on_step:
                on_step(f"r{i} alice rotate", disk, state)

        if eve_basis is not None:
            if eve_basis is Basis.HADAMARD:
                disk, state = _rotate(disk, state)
            outcomes, disk = spin_window(disk, [0], rng.random())
            state = collapse(state, 0, outcomes[0].color is ORANGE)
            if eve_basis is Basis.HADAMARD:
                disk, state = _rotate(disk, state)
            if on_step:
                on_step(f"r{i} eve resend", disk, state)

        if bob_basis is Basis.HADAMARD:
            disk, state = _rotate(disk, state)
            if on_step:
                on_step(f"r{i} bob rotate", disk, state)
        outcomes, disk = spin_window(disk, [0], rng.random())
        state = collapse(state, 0, outcomes[0].color is ORANGE)
        if on_step:
            on_step(f"r{i} bob measure", disk, state)
        bob_outcome = int(outcomes[0].color is ORANGE)

        rounds.append(
            BB84Round(
                index=i,
                alice_bit=alice_bit,
                alice_basis=alice_basis,
                eve_basis=eve_basis,
                bob_basis=bob_basis,
                bob_outcome=bob_outcome,
                sifted=alice_basis == bob_basis,
            )
        )

    sifted_rounds = [r for r in rounds if r.sifted]
    key_alice = [r.alice_bit for r in sifted_rounds]
    key_bob = [r.bob_outcome for r in sifted_rounds]
    sampled = [r for r in sifted_rounds if rng.random() < params.sample_fraction]
    if sampled:
        errors = sum(1 for r in sampled if r.alice_bit != r.bob_outcome)
        qber = errors / len(sampled)
    else:
        qber = 0.0
    return rounds, key_alice, key_bob, qber


def format_bb84_transcript(
    rounds: list[BB84Round], key_alice: list[int], key_bob: list[int], qber: float
) -> str:
    """The results grid, one round per line, with the qber summary last."""
    lines = []
    for r in rounds:
        eve = r.eve_basis.value if r.eve_basis is not None else "-"
        lines.append(
            f"round={r.index + 1:04d} alice_bit={r.alice_bit} alice_basis={r.alice_basis.value} "
            f"eve_basis={eve} bob_basis={r.bob_basis.value} bob_outcome={r.bob_outcome} "
            f"sifted={int(r.sifted)}"
        )
    mismatches = sum(1 for a, b in zip(key_alice, key_bob) if a != b)
    lines.append(f"qber={qber:.8f} sifted={len(key_alice)} mismatches={mismatches}")
    return "\n".join(lines)


@dataclass(frozen=True)
class TeleportTranscript:
    input_qubit: tuple[float, float]
    stage: str
    m_inner: int | None
    m_outer: int
    corrections_applied: tuple[str, ...]
    bob_final_disk: DiskSystem
    bob_final_exact: RealState
    outcome_probability: float


def _force_spin(
    disk: DiskSystem, qubit: int, color: Color
) -> tuple[MeasurementOutcome, DiskSystem]:
    """Measurement with a pinned outcome: the window draw is synthesized as
    the angular start of the first matching region."""
    start = 0.0
    angle = None
    for region in disk.regions:
        if region.colors[qubit] is color:
            angle = start
            break
        start += region.fraction
    if angle is None:
        raise SimulationError(f"qubit {qubit} cannot come out {color.value}")
    outcomes, residual = spin_window(disk, [qubit], angle)
    return outcomes[0], residual


def _measure_one(
    disk: DiskSystem,
    state: RealState,
    qubit: int,
    draw: float | None,
    forced: int | None,
) -> tuple[int, float, DiskSystem, RealState]:
    if forced is not None:
        outcome, disk = _force_spin(disk, qubit, ORANGE if forced else BLUE)
    else:
        outs, disk = spin_window(disk, [qubit], draw)
        outcome = outs[0]
    bit = int(outcome.color is ORANGE)
    return bit, outcome.probability, disk, collapse(state, qubit, bit)


def _setup(alpha: float, beta: float) -> tuple[DiskSystem, RealState]:
    """Alice's qubit tensored with the shared pair; qubits are ordered
    (Alice inner, Alice outer, Bob)."""
    disk = tensor(encode_qubit(alpha, beta), epr_disk())
    state = tensor_states(make_state([alpha, beta]), epr_state())
    return disk, state


def teleport_classical(
    alpha_sq: float,
    random_draw: float,
    force_outcome: int | None = None,
    on_step: StepHook = None,
) -> TeleportTranscript:
    """Phase-free stage: one CNOT, one measured qubit, one classical bit.

    Transmits the bias of Alice's coin to Bob; an orange outcome on Alice's
    outer qubit means Bob flips his colors. No slice ever carries a negative
    sign.
    """
    alpha_sq = min(1.0, max(0.0, alpha_sq))
    alpha, beta = math.sqrt(alpha_sq), math.sqrt(1.0 - alpha_sq)
    disk, state = _setup(alpha, beta)
    if on_step:
        on_step("setup", disk, state)

    disk = apply_controlled_disk(disk, GATES["X"], 0, 1)
    state = apply_gate(state, GATES["X"], 1, control=0)
    if on_step:
        on_step("cnot", disk, state)

    m_outer, prob, disk, state = _measure_one(disk, state, 1, random_draw, force_outcome)
    if on_step:
        on_step("measure outer", disk, state)

    corrections: tuple[str, ...] = ()
    if m_outer == 1:
        corrections = ("X",)
        disk = apply_gate_disk(disk, GATES["X"], 2)
        state = apply_gate(state, GATES["X"], 2)
        if on_step:
            on_step("correct", disk, state)

    bob_disk = project(disk, [2])
    return TeleportTranscript(
        input_qubit=(alpha, beta),
        stage=CLASSICAL,
        m_inner=None,
        m_outer=m_outer,
        corrections_applied=corrections,
        bob_final_disk=bob_disk,
        bob_final_exact=decode(bob_disk),
        outcome_probability=prob,
    )


def teleport_full(
    alpha: float,
    beta: float,
    random_draws: tuple[float, float] | None = None,
    force_outcomes: tuple[int, int] | None = None,
    on_step: StepHook = None,
) -> TeleportTranscript:
    """Full protocol: the classical stage plus Hadamard on Alice's inner qubit.

    Both of Alice's qubits are measured ((inner, outer), each branch has
    probability 1/4) and Bob applies the correction pair dictated by the
    outcome, after which his qubit equals the input up to a global sign.
    """
    if abs(alpha * alpha + beta * beta - 1.0) > 1e-9:
        raise SimulationError("input qubit is not normalized")
    if (random_draws is None) == (force_outcomes is None):
        raise SimulationError("pass either random_draws or force_outcomes")

    disk, state = _setup(alpha, beta)
    if on_step:
        on_step("setup", disk, state)
    disk = apply_controlled_disk(disk, GATES["X"], 0, 1)
    state = apply_gate(state, GATES["X"], 1, control=0)
    if on_step:
        on_step("cnot", disk, state)
    disk = apply_gate_disk(disk, GATES["H"], 0)
    state = apply_gate(state, GATES["H"], 0)
    if on_step:
        on_step("hadamard", disk, state)

    draws = random_draws or (None, None)
    forced = force_outcomes or (None, None)
    m_inner, p_inner, disk, state = _measure_one(disk, state, 0, draws[0], forced[0])
    m_outer, p_outer, disk, state = _measure_one(disk, state, 1, draws[1], forced[1])
    if on_step:
        on_step("measure", disk, state)

    corrections = CORRECTIONS[(m_inner, m_outer)]
    for name in corrections:
        disk = apply_gate_disk(disk, GATES[name], 2)
        state = apply_gate(state, GATES[name], 2)
    if on_step:
        on_step("correct", disk, state)

    bob_amps = state.amplitudes.reshape(2, 2, 2)[m_inner, m_outer, :]
    return TeleportTranscript(
        input_qubit=(alpha, beta),
        stage=FULL,
        m_inner=m_inner,
        m_outer=m_outer,
        corrections_applied=corrections,
        bob_final_disk=project(disk, [2]),
        bob_final_exact=make_state(bob_amps),
        outcome_probability=p_inner * p_outer,
    )


def format_teleport_transcript(t: TeleportTranscript) -> str:
    from .disks import canonical_text

    inner = "-" if t.m_inner is None else str(t.m_inner)
    corr = ",".join(t.corrections_applied) if t.corrections_applied else "-"
    lines = [
        f"stage={t.stage} input=({t.input_qubit[0]:.9f},{t.input_qubit[1]:.9f}) "
        f"m_inner={inner} m_outer={t.m_outer} p={t.outcome_probability:.9f} corrections={corr}",
        "bob_final:",
        canonical_text(t.bob_final_disk),
    ]
    return "\n".join(lines)
