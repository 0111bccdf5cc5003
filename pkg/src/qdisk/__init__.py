"""Dual-track qubit simulator: signed colored disks plus an exact oracle."""

from .exact import (
    GATES,
    Gate,
    H,
    I,
    RealState,
    SimulationError,
    X,
    Z,
    apply_gate,
    collapse,
    make_state,
    measure,
    overlap,
    probabilities,
    tensor_states,
)
from .disks import (
    AlignedPair,
    BLUE,
    Color,
    DiskSystem,
    ORANGE,
    Region,
    canonical_text,
    decode,
    encode_pair,
    encode_qubit,
    marginals,
    project,
    tensor,
)
from .dynamics import (
    CancelReport,
    MeasurementOutcome,
    apply_controlled_disk,
    apply_gate_disk,
    cancel,
    naive_probabilities,
    spin_window,
)
from .verify import BREAKDOWN, SOUND, StepReport, audit_run, compare
from .protocols import (
    BB84Params,
    BB84Round,
    Basis,
    CORRECTIONS,
    TeleportTranscript,
    bb84_run,
    teleport_classical,
    teleport_full,
)
from .render import RenderSpec, SIDE_BY_SIDE, STACKED, render_svg, render_text
from .scenario import DualTrackSession, Scenario, parse_scenario

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
