"""Cross-track comparison: disk-track readout versus the exact oracle.

A step is Sound when the disk's sign-blind probabilities match the exact
Born probabilities to 1e-9; otherwise it is a Breakdown — the square-the-
amplitudes shortcut failed on that state.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exact import RealState, SimulationError, probabilities
from .disks import DISK_TOL, DiskSystem
from .dynamics import naive_probabilities

SOUND = "Sound"
BREAKDOWN = "Breakdown"


@dataclass(frozen=True)
class StepReport:
    step_index: int
    disk_probs: tuple[float, ...]
    exact_probs: tuple[float, ...]
    max_abs_gap: float
    classification: str
    note: str = ""


def compare(disk: DiskSystem, exact: RealState, step_index: int = 0, note: str = "") -> StepReport:
    """Compare one disk against one exact state outcome by outcome."""
    if disk.n_qubits != exact.n_qubits:
        raise SimulationError(
            f"dimension mismatch: disk has {disk.n_qubits} qubits, state {exact.n_qubits}"
        )
    disk_probs = naive_probabilities(disk)
    exact_probs = probabilities(exact)
    gap = float(np.max(np.abs(disk_probs - exact_probs)))
    return StepReport(
        step_index=step_index,
        disk_probs=tuple(float(p) for p in disk_probs),
        exact_probs=tuple(float(p) for p in exact_probs),
        max_abs_gap=gap,
        classification=SOUND if gap <= DISK_TOL else BREAKDOWN,
        note=note,
    )


def audit_run(script: str, seed: int = 0) -> list[StepReport]:
    """Replay a scenario script on both tracks in lockstep, one report per step.

    Measurements on both tracks share the same draws; the exact track
    branches on the outcome sampled by the disk track. Step errors are
    re-raised with the step index attached.
    """
    from .scenario import DualTrackSession, parse_scenario

    scenario = parse_scenario(script)
    session = DualTrackSession(seed=seed)
    for command in scenario.commands:
        session.execute(command)
    return list(session.reports)


def format_report_table(reports: list[StepReport]) -> str:
    """Fixed-width table: step, gap, classification, note."""
    lines = ["step  max_abs_gap    class      note"]
    for rep in reports:
        lines.append(
            f"{rep.step_index:<5d} {rep.max_abs_gap:.9f}    {rep.classification:<10s} {rep.note}".rstrip()
        )
    return "\n".join(lines)
