// Playback engine: a frame cursor over a simulated play, advanced by a
// wall clock and rendered with linear interpolation between frames.

import type { FrameJson, PlayJson, Vec } from './model.js';

export const TRAIL_FRAMES = 10;

export interface EntityPositions {
  ball: Vec;
  offense: Vec[];
  defense: Vec[];
}

function lerp(a: Vec, b: Vec, u: number): Vec {
  return [a[0] + (b[0] - a[0]) * u, a[1] + (b[1] - a[1]) * u];
}

export class Playback {
  readonly play: PlayJson;
  /** fractional frame cursor in [0, t-1] */
  cursor = 0;
  speed = 1;
  playing = false;
  trails = false;

  constructor(play: PlayJson) {
    this.play = play;
  }

  get frameCount(): number {
    return this.play.frames.length;
  }

  /** Duration of one loop at 1x speed, in milliseconds. */
  get durationMs(): number {
    return ((this.frameCount - 1) / this.play.fps) * 1000;
  }

  /** Advance the cursor by a wall-clock delta; clamps at the last frame. */
  advance(deltaMs: number): void {
    if (!this.playing) return;
    this.cursor += (deltaMs / 1000) * this.play.fps * this.speed;
    if (this.cursor >= this.frameCount - 1) {
      this.cursor = this.frameCount - 1;
      this.playing = false;
    }
  }

  /** Scrubbing is idempotent and never leaves [0, t-1]. */
  seek(frame: number): void {
    this.cursor = Math.min(Math.max(frame, 0), this.frameCount - 1);
  }

  frameIndex(): number {
    return Math.min(Math.floor(this.cursor), this.frameCount - 1);
  }

  /** Interpolated positions at the current cursor. */
  positions(): EntityPositions {
    const i = this.frameIndex();
    const j = Math.min(i + 1, this.frameCount - 1);
    const u = this.cursor - i;
    const a = this.play.frames[i];
    const b = this.play.frames[j];
    return interpolate(a, b, u);
  }

  /** Frame indices ghosted behind the cursor when trails are on. */
  trailIndices(): number[] {
    if (!this.trails) return [];
    const i = this.frameIndex();
    const from = Math.max(0, i - TRAIL_FRAMES);
    const out = [];
    for (let k = from; k < i; k++) out.push(k);
    return out;
  }
}

export function interpolate(a: FrameJson, b: FrameJson, u: number): EntityPositions {
  return {
    ball: lerp(a.ball, b.ball, u),
    offense: a.offense.map((p, k) => lerp(p, b.offense[k], u)),
    defense: (a.defense ?? []).map((p, k) => lerp(p, (b.defense ?? [])[k], u)),
  };
}
