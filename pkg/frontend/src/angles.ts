/** Disk geometry helpers: fractions of a turn, clockwise from 12 o'clock.
 * These only lay out what the core already decided; outcomes and
 * probabilities always come from the service. */

import type { RegionData } from "./api.js";

export function drawToDegrees(draw: number): number {
  return draw * 360;
}

/** Index of the region under a window at `angleDeg`; arcs are half-open
 * clockwise, so a boundary belongs to the region that starts there. */
export function regionIndexAtAngle(regions: RegionData[], angleDeg: number): number {
  const turn = ((angleDeg % 360) + 360) % 360;
  let cumulative = 0;
  for (let i = 0; i < regions.length; i++) {
    cumulative += regions[i]!.fraction * 360;
    if (turn < cumulative) return i;
  }
  return regions.length - 1;
}

export interface Arc {
  startDeg: number;
  endDeg: number;
  color: string;
  sign: number;
}

/** Angular arcs of one qubit's colors over the shared region layout. */
export function qubitArcs(regions: RegionData[], qubit: number): Arc[] {
  const arcs: Arc[] = [];
  let start = 0;
  for (const region of regions) {
    const end = start + region.fraction * 360;
    const color = region.colors[qubit] ?? "B";
    const previous = arcs[arcs.length - 1];
    if (previous && previous.color === color && previous.sign === region.sign) {
      previous.endDeg = end;
    } else {
      arcs.push({ startDeg: start, endDeg: end, color, sign: region.sign });
    }
    start = end;
  }
  return arcs;
}

export function sweepTotal(arcs: Arc[]): number {
  return arcs.reduce((total, arc) => total + (arc.endDeg - arc.startDeg), 0);
}

/** Point on a circle at a clockwise angle from the top. */
export function pointAt(cx: number, cy: number, radius: number, angleDeg: number): [number, number] {
  const radians = (angleDeg / 180) * Math.PI;
  return [cx + radius * Math.sin(radians), cy - radius * Math.cos(radians)];
}
