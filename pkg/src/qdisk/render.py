"""Diagram output for disk systems: deterministic SVG and one-line text art.

Two layouts are supported: side-by-side per-qubit disks with synchronized
windows, and a stacked view with one concentric ring per qubit (qubit 0
outermost). Arcs start at 12 o'clock and run clockwise; negative-sign
regions get a hatch overlay and a "-" label when sign display is on.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .exact import SimulationError
from .disks import Color, DiskSystem

BLUE_HEX = "#1f77b4"
ORANGE_HEX = "#ff7f0e"

SIDE_BY_SIDE = "side"
STACKED = "stacked"


@dataclass(frozen=True)
class RenderSpec:
    layout: str = SIDE_BY_SIDE
    window_angle: float | None = None
    show_signs: bool = True
    size: int = 240

    def __post_init__(self) -> None:
        if self.layout not in (SIDE_BY_SIDE, STACKED):
            raise SimulationError(f"unknown layout {self.layout!r}")
        if self.size <= 0:
            raise SimulationError("size must be positive")
        if self.window_angle is not None and not 0.0 <= self.window_angle < 1.0:
            raise SimulationError("window_angle must lie in [0, 1)")


def render_text(disk: DiskSystem) -> str:
    """One-line bracket form, e.g. `[B 0.500 +][O 0.500 -]`."""
    parts = []
    for region in disk.regions:
        colors = "".join(c.value for c in region.colors)
        sign = "+" if region.sign > 0 else "-"
        parts.append(f"[{colors} {region.fraction:.3f} {sign}]")
    return "".join(parts)


def _fmt(value: float) -> str:
    out = f"{value:.4f}"
    return "0.0000" if out == "-0.0000" else out


def _point(cx: float, cy: float, radius: float, turn: float) -> tuple[float, float]:
    # turn is the clockwise fraction of a full turn from 12 o'clock
    angle = 2.0 * math.pi * turn
    return cx + radius * math.sin(angle), cy - radius * math.cos(angle)


def _sector_path(cx: float, cy: float, r_out: float, r_in: float, t0: float, t1: float) -> str:
    """Clockwise annular sector path; a pie wedge when r_in is 0."""
    large = 1 if (t1 - t0) > 0.5 else 0
    x0, y0 = _point(cx, cy, r_out, t0)
    x1, y1 = _point(cx, cy, r_out, t1)
    if r_in <= 0.0:
        return (
            f"M {_fmt(cx)} {_fmt(cy)} L {_fmt(x0)} {_fmt(y0)} "
            f"A {_fmt(r_out)} {_fmt(r_out)} 0 {large} 1 {_fmt(x1)} {_fmt(y1)} Z"
        )
    x2, y2 = _point(cx, cy, r_in, t1)
    x3, y3 = _point(cx, cy, r_in, t0)
    return (
        f"M {_fmt(x0)} {_fmt(y0)} "
        f"A {_fmt(r_out)} {_fmt(r_out)} 0 {large} 1 {_fmt(x1)} {_fmt(y1)} "
        f"L {_fmt(x2)} {_fmt(y2)} "
        f"A {_fmt(r_in)} {_fmt(r_in)} 0 {large} 0 {_fmt(x3)} {_fmt(y3)} Z"
    )


def _ring_elements(
    disk: DiskSystem, qubit: int, cx: float, cy: float, r_out: float, r_in: float, show_signs: bool
) -> list[str]:
    """SVG elements for one qubit's colors over the shared angular regions."""
    elements = []
    start = 0.0
    for region in disk.regions:
        end = start + region.fraction
        color = BLUE_HEX if region.colors[qubit] is Color.BLUE else ORANGE_HEX
        if region.fraction >= 1.0 - 1e-12 and r_in <= 0.0:
            elements.append(
                f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(r_out)}" fill="{color}"/>'
            )
        else:
            path = _sector_path(cx, cy, r_out, r_in, start, min(end, 1.0))
            elements.append(f'<path d="{path}" fill="{color}"/>')
            if show_signs and region.sign < 0:
                elements.append(f'<path d="{path}" fill="url(#hatch)"/>')
        if show_signs and region.sign < 0:
            mid_r = (r_out + r_in) / 2.0 if r_in > 0.0 else r_out * 0.6
            tx, ty = _point(cx, cy, mid_r, (start + end) / 2.0)
            elements.append(
                f'<text x="{_fmt(tx)}" y="{_fmt(ty)}" text-anchor="middle" '
                f'dominant-baseline="middle" font-size="{_fmt(r_out * 0.2)}">-</text>'
            )
        start = end
    return elements


def _window_marker(cx: float, cy: float, radius: float, turn: float, size: float) -> str:
    wx, wy = _point(cx, cy, radius, turn)
    return (
        f'<circle cx="{_fmt(wx)}" cy="{_fmt(wy)}" r="{_fmt(size)}" '
        f'fill="white" stroke="black" stroke-width="1.5"/>'
    )


def render_svg(disk: DiskSystem, spec: RenderSpec) -> str:
    """Render a disk system as a standalone SVG 1.1 document.

    Output is byte-identical for identical inputs, so files can be golden-
    tested.
    """
    if spec.layout == STACKED and disk.n_qubits < 2:
        raise SimulationError("stacked layout needs at least two qubits")
    n = disk.n_qubits
    size = float(spec.size)
    margin = size * 0.05
    elements: list[str] = []

    if spec.layout == SIDE_BY_SIDE:
        width, height = size * n, size
        radius = size / 2.0 - margin
        for q in range(n):
            cx, cy = size * q + size / 2.0, size / 2.0
            elements.extend(_ring_elements(disk, q, cx, cy, radius, 0.0, spec.show_signs))
            elements.append(
                f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(radius)}" '
                f'fill="none" stroke="black" stroke-width="1"/>'
            )
            if spec.window_angle is not None:
                elements.append(
                    _window_marker(cx, cy, radius, spec.window_angle, size * 0.03)
                )
    else:
        width, height = size, size
        cx = cy = size / 2.0
        radius = size / 2.0 - margin
        ring = radius / n
        for q in range(n):
            r_out = radius - ring * q
            r_in = r_out - ring
            if q == n - 1:
                r_in = 0.0
            elements.extend(_ring_elements(disk, q, cx, cy, r_out, r_in, spec.show_signs))
            elements.append(
                f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(r_out)}" '
                f'fill="none" stroke="black" stroke-width="1"/>'
            )
            if spec.window_angle is not None:
                mid = (r_out + r_in) / 2.0
                elements.append(_window_marker(cx, cy, mid, spec.window_angle, size * 0.02))

    body = "\n".join(elements)
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_fmt(width)}" height="{_fmt(height)}" '
        f'viewBox="0 0 {_fmt(width)} {_fmt(height)}">\n'
        f"<defs>\n"
        f'<pattern id="hatch" patternUnits="userSpaceOnUse" width="6" height="6">\n'
        f'<path d="M0 6 L6 0" stroke="black" stroke-width="1"/>\n'
        f"</pattern>\n"
        f"</defs>\n"
        f"{body}\n"
        f"</svg>\n"
    )


def sector_angles(disk: DiskSystem) -> list[float]:
    """Sweep angle in degrees of each rendered sector, in region order."""
    return [region.fraction * 360.0 for region in disk.regions]
