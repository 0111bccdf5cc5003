"""Signed colored-disk representation of qubit registers.

A register of n qubits is one disk cut into angular regions. Each region
carries one color per qubit (blue = outcome 0, orange = outcome 1), an area
fraction, and a +/-1 sign. Regions are listed from the top of the disk going
clockwise; per-qubit disks are projections of this single stacked system, so
all qubits share one angular coordinate and joint areas encode correlations.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .exact import RealState, SimulationError

DISK_TOL = 1e-9


class Color(Enum):
    BLUE = "B"
    ORANGE = "O"

    def flipped(self) -> "Color":
        return Color.ORANGE if self is Color.BLUE else Color.BLUE


BLUE = Color.BLUE
ORANGE = Color.ORANGE


@dataclass(frozen=True)
class Region:
    """One angular slice: area fraction, per-qubit colors, phase sign."""

    fraction: float
    colors: tuple[Color, ...]
    sign: int = 1

    def __post_init__(self) -> None:
        if not self.fraction > 0.0:
            raise SimulationError(f"region fraction must be positive, got {self.fraction}")
        if self.sign not in (1, -1):
            raise SimulationError(f"region sign must be +1 or -1, got {self.sign}")
        if isinstance(self.colors, Color):
            object.__setattr__(self, "colors", (self.colors,))
        else:
            object.__setattr__(self, "colors", tuple(self.colors))

    def same_slice(self, other: "Region") -> bool:
        """True when colors and sign match (fractions may differ)."""
        return self.colors == other.colors and self.sign == other.sign

    def outcome_index(self) -> int:
        """Binary outcome index; qubit 0 is the most significant bit."""
        idx = 0
        for color in self.colors:
            idx = (idx << 1) | (color is ORANGE)
        return idx


def _merged(regions: tuple[Region, ...]) -> tuple[Region, ...]:
    """Merge identical adjacent regions (same colors and sign), cyclically.

    Merging the wrap-around pair folds the last slice into the first, which
    rotates the disk's top anchor; joint areas and all probabilities are
    unchanged by a rotation.
    """
    out: list[Region] = []
    for region in regions:
        if out and out[-1].same_slice(region):
            prev = out.pop()
            region = Region(prev.fraction + region.fraction, region.colors, region.sign)
        out.append(region)
    while len(out) > 1 and out[0].same_slice(out[-1]):
        last = out.pop()
        out[0] = Region(out[0].fraction + last.fraction, out[0].colors, out[0].sign)
    return tuple(out)


@dataclass(frozen=True)
class DiskSystem:
    """Cyclic ordered list of regions, starting at the top, clockwise."""

    n_qubits: int
    regions: tuple[Region, ...]

    def __post_init__(self) -> None:
        regions = _merged(tuple(self.regions))
        if not regions:
            raise SimulationError("a disk needs at least one region")
        for region in regions:
            if len(region.colors) != self.n_qubits:
                raise SimulationError(
                    f"region has {len(region.colors)} colors, expected {self.n_qubits}"
                )
        total = math.fsum(r.fraction for r in regions)
        if abs(total - 1.0) > DISK_TOL:
            raise SimulationError(f"region fractions sum to {total}, not 1")
        object.__setattr__(self, "regions", regions)

    def boundaries(self) -> list[float]:
        """Cumulative start fraction of each region."""
        acc, out = 0.0, []
        for region in self.regions:
            out.append(acc)
            acc += region.fraction
        return out


@dataclass(frozen=True)
class AlignedPair:
    """Two aligned one-qubit disks: blue/orange shares plus the offset angle.

    theta is the fraction of a full turn by which the second disk's orange
    start is offset clockwise from the top; joint areas in Gray order are
    (theta, P - theta, 1 - P - P' + theta, P' - theta).
    """

    P: float
    Q: float
    Pp: float
    Qp: float
    theta: float

    def __post_init__(self) -> None:
        if abs(abs(self.P) + abs(self.Q) - 1.0) > DISK_TOL:
            raise SimulationError("first qubit shares must sum to 1")
        if abs(abs(self.Pp) + abs(self.Qp) - 1.0) > DISK_TOL:
            raise SimulationError("second qubit shares must sum to 1")
        # theta = 1 only for the all-blue pair, where a full turn equals none
        if not 0.0 <= self.theta <= 1.0:
            raise SimulationError("theta must lie in [0, 1]")
        lo = max(0.0, abs(self.P) + abs(self.Pp) - 1.0)
        hi = min(abs(self.P), abs(self.Pp))
        if not lo - DISK_TOL <= self.theta <= hi + DISK_TOL:
            raise SimulationError(f"theta {self.theta} outside [{lo}, {hi}]")

    def areas(self) -> tuple[float, float, float, float]:
        """Joint areas for outcomes 00, 01, 11, 10 (Gray order)."""
        p, pp = abs(self.P), abs(self.Pp)
        raw = (self.theta, p - self.theta, 1.0 - p - pp + self.theta, pp - self.theta)
        return tuple(max(0.0, a) for a in raw)

    def to_disk(self) -> DiskSystem:
        regions = [
            Region(area, colors)
            for area, colors in zip(self.areas(), _GRAY_COLORS)
            if area > 0.0
        ]
        return DiskSystem(2, tuple(regions))


_GRAY_COLORS = ((BLUE, BLUE), (BLUE, ORANGE), (ORANGE, ORANGE), (ORANGE, BLUE))


def _sign(x: float) -> int:
    return -1 if x < 0 else 1


def encode_qubit(alpha: float, beta: float) -> DiskSystem:
    """Encode amplitudes (alpha, beta) as a one-qubit disk.

    The blue slice starts at the top going clockwise; each slice's area is
    the squared amplitude and its sign is the amplitude's sign. Zero
    components produce no slice.
    """
    norm_sq = alpha * alpha + beta * beta
    if abs(norm_sq - 1.0) > DISK_TOL:
        raise SimulationError("qubit amplitudes are not normalized")
    regions = []
    if alpha * alpha > 0.0:
        regions.append(Region(alpha * alpha / norm_sq, (BLUE,), _sign(alpha)))
    if beta * beta > 0.0:
        regions.append(Region(beta * beta / norm_sq, (ORANGE,), _sign(beta)))
    return DiskSystem(1, tuple(regions))


def encode_pair(amplitudes) -> tuple[DiskSystem, AlignedPair]:
    """Encode four Gray-ordered amplitudes (00, 01, 11, 10) as a disk.

    Returns the four-region stacked disk plus the aligned-pair view, whose
    offset angle theta equals the squared 00 amplitude.
    """
    a00, a01, a11, a10 = (float(v) for v in amplitudes)
    norm_sq = a00**2 + a01**2 + a11**2 + a10**2
    if abs(norm_sq - 1.0) > DISK_TOL:
        raise SimulationError("pair amplitudes are not normalized")
    fractions = [v * v / norm_sq for v in (a00, a01, a11, a10)]
    signs = [_sign(v) for v in (a00, a01, a11, a10)]
    regions = tuple(
        Region(f, colors, s)
        for f, colors, s in zip(fractions, _GRAY_COLORS, signs)
        if f > 0.0
    )
    disk = DiskSystem(2, regions)
    pair = AlignedPair(
        P=fractions[0] + fractions[1],
        Q=fractions[2] + fractions[3],
        Pp=fractions[0] + fractions[3],
        Qp=fractions[1] + fractions[2],
        theta=fractions[0],
    )
    return disk, pair


def decode(disk: DiskSystem) -> RealState:
    """Invert the encoding: each region contributes sign * sqrt(fraction).

    Contributions to the same outcome add, and the resulting vector is
    renormalized. A disk whose contributions cancel to (near) zero has no
    implied state and is an error.
    """
    amps = [0.0] * (1 << disk.n_qubits)
    for region in disk.regions:
        amps[region.outcome_index()] += region.sign * math.sqrt(region.fraction)
    norm = math.sqrt(math.fsum(a * a for a in amps))
    if norm < DISK_TOL:
        raise SimulationError("disk cancels completely; no implied state")
    return RealState([a / norm for a in amps])


def tensor(a: DiskSystem, b: DiskSystem) -> DiskSystem:
    """Combine two disks; `a`'s qubits come first.

    Every region of `b` is nested inside every region of `a`, so each joint
    area is the product of the factors' areas.
    """
    regions = tuple(
        Region(ra.fraction * rb.fraction, ra.colors + rb.colors, ra.sign * rb.sign)
        for ra in a.regions
        for rb in b.regions
    )
    return DiskSystem(a.n_qubits + b.n_qubits, regions)


def marginals(disk: DiskSystem, qubit: int) -> tuple[float, float]:
    """Unsigned (blue, orange) area totals for one qubit."""
    if not 0 <= qubit < disk.n_qubits:
        raise SimulationError(f"qubit {qubit} out of range for {disk.n_qubits} qubits")
    blue = math.fsum(r.fraction for r in disk.regions if r.colors[qubit] is BLUE)
    orange = math.fsum(r.fraction for r in disk.regions if r.colors[qubit] is ORANGE)
    return blue, orange


def project(disk: DiskSystem, qubits: list[int]) -> DiskSystem:
    """Restrict the region colors to the given qubits (a marginal view)."""
    for q in qubits:
        if not 0 <= q < disk.n_qubits:
            raise SimulationError(f"qubit {q} out of range for {disk.n_qubits} qubits")
    regions = tuple(
        Region(r.fraction, tuple(r.colors[q] for q in qubits), r.sign) for r in disk.regions
    )
    return DiskSystem(len(qubits), regions)


def canonical_text(disk: DiskSystem) -> str:
    """Golden-test form: one region per line, `fraction colors sign`."""
    lines = []
    for region in disk.regions:
        colors = "".join(c.value for c in region.colors)
        sign = "+" if region.sign > 0 else "-"
        lines.append(f"{region.fraction:.9f} {colors} {sign}")
    return "\n".join(lines)
