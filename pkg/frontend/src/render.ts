// Court and entity drawing. The 2D context is injected so tests can pass
// a recording stub; feet are mapped to pixels with a fixed scale.

import type { BoardState, CourtInfo, Vec } from './model.js';
import type { EntityPositions } from './playback.js';

export const PX_PER_FT = 12;
export const OFFENSE_COLOR = '#d43d3d';
export const DEFENSE_COLOR = '#3d6bd4';
export const BALL_COLOR = '#2f9e44';

export interface Ctx2D {
  clearRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  stroke(): void;
  fill(): void;
  fillText(text: string, x: number, y: number): void;
  strokeStyle: string;
  fillStyle: string;
  lineWidth: number;
  globalAlpha: number;
  font: string;
}

export function toPx(p: Vec): Vec {
  return [p[0] * PX_PER_FT, p[1] * PX_PER_FT];
}

export function toFeet(court: CourtInfo, xPx: number, yPx: number): Vec {
  return [xPx / PX_PER_FT, yPx / PX_PER_FT];
}

export function canvasSize(court: CourtInfo): Vec {
  return [court.length_x * PX_PER_FT, court.width_y * PX_PER_FT];
}

function circle(ctx: Ctx2D, p: Vec, r: number, color: string, filled = true): void {
  ctx.beginPath();
  ctx.arc(p[0], p[1], r, 0, Math.PI * 2);
  if (filled) {
    ctx.fillStyle = color;
    ctx.fill();
  } else {
    ctx.strokeStyle = color;
    ctx.stroke();
  }
}

export function drawCourt(ctx: Ctx2D, court: CourtInfo): void {
  const [w, h] = canvasSize(court);
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = '#888';
  ctx.lineWidth = 2;
  ctx.beginPath();
  ctx.moveTo(1, 1);
  ctx.lineTo(w - 1, 1);
  ctx.lineTo(w - 1, h - 1);
  ctx.lineTo(1, h - 1);
  ctx.lineTo(1, 1);
  ctx.stroke();
  circle(ctx, toPx(court.hoop), 9, '#b35900', false);
}

export function drawBoard(ctx: Ctx2D, state: BoardState, armed: number | null): void {
  drawCourt(ctx, state.court);
  ctx.lineWidth = 2;
  for (const phase of [...state.committed, { paths: state.draft, end: { type: 'none' } }]) {
    for (const [pid, path] of Object.entries(phase.paths)) {
      ctx.strokeStyle = pid === String(state.dribbler) ? '#a03030' : '#d98080';
      ctx.beginPath();
      const [x0, y0] = toPx(path[0]);
      ctx.moveTo(x0, y0);
      for (const p of path.slice(1)) {
        const [x, y] = toPx(p);
        ctx.lineTo(x, y);
      }
      ctx.stroke();
    }
  }
  state.positions.forEach((p, i) => {
    const px = toPx(p);
    circle(ctx, px, 10, OFFENSE_COLOR);
    if (i + 1 === state.carrier) circle(ctx, px, 13, BALL_COLOR, false);
    if (armed === i + 1) circle(ctx, px, 16, '#222', false);
    ctx.fillStyle = '#fff';
    ctx.font = '11px sans-serif';
    ctx.fillText(String(i + 1), px[0] - 3, px[1] + 4);
  });
}

/** Draw one playback frame; returns the integer frame it rendered. */
export function drawPlaybackFrame(
  ctx: Ctx2D,
  court: CourtInfo,
  pos: EntityPositions,
  trails: EntityPositions[],
): void {
  drawCourt(ctx, court);
  trails.forEach((ghost, k) => {
    ctx.globalAlpha = ((k + 1) / (trails.length + 1)) * 0.35;
    ghost.offense.forEach((p) => circle(ctx, toPx(p), 6, OFFENSE_COLOR));
    ghost.defense.forEach((p) => circle(ctx, toPx(p), 6, DEFENSE_COLOR));
    circle(ctx, toPx(ghost.ball), 4, BALL_COLOR);
  });
  ctx.globalAlpha = 1;
  pos.offense.forEach((p, i) => {
    const px = toPx(p);
    circle(ctx, px, 10, OFFENSE_COLOR);
    ctx.fillStyle = '#fff';
    ctx.font = '11px sans-serif';
    ctx.fillText(String(i + 1), px[0] - 3, px[1] + 4);
  });
  pos.defense.forEach((p, i) => {
    const px = toPx(p);
    circle(ctx, px, 10, DEFENSE_COLOR);
    ctx.fillStyle = '#fff';
    ctx.fillText(String(i + 1), px[0] - 3, px[1] + 4);
  });
  circle(ctx, toPx(pos.ball), 6, BALL_COLOR);
}
