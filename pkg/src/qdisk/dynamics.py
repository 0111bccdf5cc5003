"""Dynamics on disk systems: gate splitting, window spins, cancellation.

Gate application splits each region in place, which is exact term by term on
the implied amplitudes. Cancellation is the one lossy shortcut: it removes
equal-area opposite-sign slices of the same colors, and reports whether the
result still reads out the true probabilities.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exact import Gate, SimulationError, probabilities
from .disks import DISK_TOL, Color, DiskSystem, Region, decode


@dataclass(frozen=True)
class MeasurementOutcome:
    qubit: int
    color: Color
    probability: float
    window_angle: float


@dataclass(frozen=True)
class CancelReport:
    """What a cancellation pass did, and whether it was harmless."""

    cancelled_pairs: int
    removed_fraction: float
    renormalization_factor: float
    sound: bool


def _split_region(region: Region, gate: Gate, target: int) -> list[Region]:
    if region.colors[target] is Color.BLUE:
        entries = ((gate.a, Color.BLUE), (gate.b, Color.ORANGE))
    else:
        entries = ((gate.c, Color.BLUE), (gate.d, Color.ORANGE))
    children = []
    for entry, child_color in entries:
        fraction = region.fraction * entry * entry
        if fraction == 0.0:
            continue
        colors = region.colors[:target] + (child_color,) + region.colors[target + 1:]
        sign = region.sign * (-1 if entry < 0 else 1)
        children.append(Region(fraction, colors, sign))
    return children


def apply_gate_disk(disk: DiskSystem, gate: Gate, target: int) -> DiskSystem:
    """Split every region under a single-qubit gate, preserving region order.

    A region whose target color is blue splits into the (a, b) children, an
    orange one into (c, d); the |0>-image child comes first. Zero-area
    children are dropped. Splitting in place keeps all joint-area relations
    with the other qubits intact.
    """
    if not 0 <= target < disk.n_qubits:
        raise SimulationError(f"target {target} out of range for {disk.n_qubits} qubits")
    out: list[Region] = []
    for region in disk.regions:
        out.extend(_split_region(region, gate, target))
    return DiskSystem(disk.n_qubits, tuple(out))


def apply_controlled_disk(disk: DiskSystem, gate: Gate, control: int, target: int) -> DiskSystem:
    """Apply `gate` to `target` only inside regions whose control color is orange."""
    for label, q in (("control", control), ("target", target)):
        if not 0 <= q < disk.n_qubits:
            raise SimulationError(f"{label} {q} out of range for {disk.n_qubits} qubits")
    if control == target:
        raise SimulationError("control and target must differ")
    out: list[Region] = []
    for region in disk.regions:
        if region.colors[control] is Color.BLUE:
            out.append(region)
        else:
            out.extend(_split_region(region, gate, target))
    return DiskSystem(disk.n_qubits, tuple(out))


def region_at(disk: DiskSystem, angle: float) -> Region:
    """Region under a window at `angle` (fraction of a turn, from the top).

    Arcs are half-open clockwise: a boundary belongs to the region starting
    there.
    """
    cumulative = 0.0
    for region in disk.regions:
        cumulative += region.fraction
        if angle < cumulative:
            return region
    return disk.regions[-1]


def spin_window(
    disk: DiskSystem, qubits: list[int], random_draw: float
) -> tuple[list[MeasurementOutcome], DiskSystem]:
    """Spin the shared window once and read the given qubits.

    The draw is the final window angle; the landed region's colors are the
    outcomes. The residual keeps exactly the regions matching all observed
    colors, rescaled to a full disk. Reported probabilities are the unsigned
    per-qubit area totals of the observed colors.
    """
    if not qubits:
        raise SimulationError("spin_window needs at least one qubit")
    if len(set(qubits)) != len(qubits):
        raise SimulationError("measured qubits must be distinct")
    for q in qubits:
        if not 0 <= q < disk.n_qubits:
            raise SimulationError(f"qubit {q} out of range for {disk.n_qubits} qubits")
    if not 0.0 <= random_draw < 1.0:
        raise SimulationError("random_draw must lie in [0, 1)")

    landed = region_at(disk, random_draw)
    outcomes = []
    for q in qubits:
        color = landed.colors[q]
        prob = math.fsum(r.fraction for r in disk.regions if r.colors[q] is color)
        outcomes.append(MeasurementOutcome(q, color, prob, random_draw))

    kept = [r for r in disk.regions if all(r.colors[q] is landed.colors[q] for q in qubits)]
    total = math.fsum(r.fraction for r in kept)
    residual = DiskSystem(
        disk.n_qubits,
        tuple(Region(r.fraction / total, r.colors, r.sign) for r in kept),
    )
    return outcomes, residual


def naive_probabilities(disk: DiskSystem) -> np.ndarray:
    """Sign-blind outcome probabilities: unsigned area totals, binary order."""
    probs = np.zeros(1 << disk.n_qubits)
    for region in disk.regions:
        probs[region.outcome_index()] += region.fraction
    return probs


def cancel(disk: DiskSystem) -> tuple[DiskSystem, CancelReport]:
    """Remove equal-area opposite-sign same-color region pairs, then rescale.

    Pairs are matched anywhere on the disk (first match in a clockwise scan),
    not only adjacent ones. The report's `sound` flag says whether the
    result's sign-blind probabilities still equal the input's decoded
    probabilities — when the opposing amplitudes were not equal in magnitude
    this reading diverges, and the flag records it.
    """
    regions = list(disk.regions)
    removed = 0.0
    pairs = 0
    found = True
    while found:
        found = False
        for i in range(len(regions)):
            for j in range(i + 1, len(regions)):
                ri, rj = regions[i], regions[j]
                if (
                    ri.colors == rj.colors
                    and ri.sign == -rj.sign
                    and abs(ri.fraction - rj.fraction) <= DISK_TOL
                ):
                    removed += ri.fraction + rj.fraction
                    pairs += 1
                    del regions[j], regions[i]
                    found = True
                    break
            if found:
                break
    if removed >= 1.0 - DISK_TOL:
        raise SimulationError("disk cancels completely; implied state is zero")
    factor = 1.0 / (1.0 - removed)
    result = DiskSystem(
        disk.n_qubits,
        tuple(Region(r.fraction * factor, r.colors, r.sign) for r in regions),
    )
    exact_probs = probabilities(decode(disk))
    gap = float(np.max(np.abs(naive_probabilities(result) - exact_probs)))
    report = CancelReport(
        cancelled_pairs=pairs,
        removed_fraction=removed,
        renormalization_factor=factor,
        sound=gap <= DISK_TOL,
    )
    return result, report
