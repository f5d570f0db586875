// Shared test doubles: a recording 2D context and pointer-event helpers.

import type { Ctx2D } from '../src/render.js';

export interface RecordingCtx extends Ctx2D {
  calls: { op: string; args: unknown[] }[];
  countOp(op: string): number;
}

export function makeCtx(): RecordingCtx {
  const calls: { op: string; args: unknown[] }[] = [];
  const record =
    (op: string) =>
    (...args: unknown[]) => {
      calls.push({ op, args });
    };
  return {
    calls,
    countOp: (op: string) => calls.filter((c) => c.op === op).length,
    clearRect: record('clearRect'),
    beginPath: record('beginPath'),
    moveTo: record('moveTo'),
    lineTo: record('lineTo'),
    arc: record('arc'),
    stroke: record('stroke'),
    fill: record('fill'),
    fillText: record('fillText'),
    strokeStyle: '',
    fillStyle: '',
    lineWidth: 1,
    globalAlpha: 1,
    font: '',
  };
}

export function fire(target: EventTarget, type: string, xPx: number, yPx: number): void {
  const ev = new MouseEvent(type, { bubbles: true });
  Object.defineProperty(ev, 'offsetX', { value: xPx });
  Object.defineProperty(ev, 'offsetY', { value: yPx });
  Object.defineProperty(ev, 'pointerId', { value: 1 });
  target.dispatchEvent(ev);
}
