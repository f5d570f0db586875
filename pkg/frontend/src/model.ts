// Sketch-board state machine and wire types. Everything here is pure and
// headless so the behaviour is testable without a canvas.

export type Vec = [number, number];

export interface CourtInfo {
  length_x: number;
  width_y: number;
  hoop: Vec;
}

export const DEFAULT_COURT: CourtInfo = { length_x: 47, width_y: 50, hoop: [5.25, 25] };

export type EndEvent =
  | { type: 'pass'; from: number; to: number }
  | { type: 'shot'; by: number }
  | { type: 'none' };

export interface PhaseJson {
  paths: Record<string, Vec[]>;
  end: EndEvent;
}

export interface SketchJson {
  initial: Vec[];
  dribbler: number;
  phases: PhaseJson[];
}

export interface FrameJson {
  ball: Vec;
  offense: Vec[];
  defense?: Vec[];
  poss: number | 'hoop' | null;
}

export interface PlayJson {
  fps: number;
  frames: FrameJson[];
}

export interface SimulateResponseJson {
  plays: PlayJson[];
  condition_t: number;
  model: string;
}

export interface ValidationReportJson {
  ok: boolean;
  violations: { code: string; message: string; phase?: number; player?: number }[];
}

const DEFAULT_SPOTS: Vec[] = [
  [25, 25],
  [6, 8],
  [6, 42],
  [14, 33],
  [11, 30],
];

export interface BoardState {
  court: CourtInfo;
  initial: Vec[];
  dribbler: number;
  /** player the ball belongs to after the committed phases */
  carrier: number;
  committed: PhaseJson[];
  /** in-progress phase paths, keyed by 1-based player id */
  draft: Record<string, Vec[]>;
  /** current position of each player (end of its last drawn path) */
  positions: Vec[];
  warning: string | null;
  finished: boolean;
}

export function newBoard(court: CourtInfo = DEFAULT_COURT, spots: Vec[] = DEFAULT_SPOTS): BoardState {
  return {
    court,
    initial: spots.map((p) => [...p] as Vec),
    dribbler: 1,
    carrier: 1,
    committed: [],
    draft: {},
    positions: spots.map((p) => [...p] as Vec),
    warning: null,
    finished: false,
  };
}

export function clampToCourt(court: CourtInfo, p: Vec): Vec {
  return [
    Math.min(Math.max(p[0], 0), court.length_x),
    Math.min(Math.max(p[1], 0), court.width_y),
  ];
}

function started(state: BoardState): boolean {
  return state.committed.length > 0 || Object.keys(state.draft).length > 0;
}

/** Move a player's starting spot (only before any drawing has happened). */
export function placePlayer(state: BoardState, player: number, pos: Vec): BoardState {
  if (started(state) || state.finished) {
    return { ...state, warning: 'positions are fixed once drawing starts' };
  }
  const p = clampToCourt(state.court, pos);
  const initial = state.initial.map((q, i) => (i === player - 1 ? p : q));
  const positions = initial.map((q) => [...q] as Vec);
  return { ...state, initial, positions, warning: null };
}

/** Double-click semantics: mark the initial ball handler. */
export function setDribbler(state: BoardState, player: number): BoardState {
  if (started(state) || state.finished) {
    return { ...state, warning: 'the dribbler is fixed once drawing starts' };
  }
  return { ...state, dribbler: player, carrier: player, warning: null };
}

/** Drag: append a point to the player's draft path (clamped to the court). */
export function dragTo(state: BoardState, player: number, pos: Vec): BoardState {
  if (state.finished) return state;
  const p = clampToCourt(state.court, pos);
  const key = String(player);
  const path = state.draft[key] ?? [state.positions[player - 1]];
  const draft = { ...state.draft, [key]: [...path, p] };
  const positions = state.positions.map((q, i) => (i === player - 1 ? p : q));
  return { ...state, draft, positions, warning: null };
}

function closePhase(state: BoardState, end: EndEvent): BoardState {
  const phase: PhaseJson = { paths: state.draft, end };
  return {
    ...state,
    committed: [...state.committed, phase],
    draft: {},
    warning: null,
  };
}

/** Click the carrier, then a receiver: commits the phase with a pass. */
export function commitPass(state: BoardState, from: number, to: number): BoardState {
  if (state.finished) return { ...state, warning: 'the play already ended with a shot' };
  if (from !== state.carrier) {
    return { ...state, warning: `player ${from} does not have the ball` };
  }
  if (to === from || to < 1 || to > 5) {
    return { ...state, warning: 'pick a different receiver' };
  }
  const next = closePhase(state, { type: 'pass', from, to });
  return { ...next, carrier: to };
}

/** Click the carrier, then the hoop: commits the final phase with a shot. */
export function commitShot(state: BoardState, by: number): BoardState {
  if (state.finished) return { ...state, warning: 'the play already ended with a shot' };
  if (by !== state.carrier) {
    return { ...state, warning: `player ${by} does not have the ball` };
  }
  const next = closePhase(state, { type: 'shot', by });
  return { ...next, finished: true };
}

/** Serialize the board; only complete (shot-terminated) or in-progress
 * sketches with a trailing idle phase are emitted. */
export function toSketchJson(state: BoardState): SketchJson {
  const phases = [...state.committed];
  if (!state.finished && Object.keys(state.draft).length > 0) {
    phases.push({ paths: state.draft, end: { type: 'none' } });
  }
  return {
    initial: state.initial.map((p) => [...p] as Vec),
    dribbler: state.dribbler,
    phases,
  };
}

/** Ball carrier at the start of each phase (mirrors the engine's rule). */
export function carrierSequence(sketch: SketchJson): number[] {
  const out = [sketch.dribbler];
  for (const phase of sketch.phases.slice(0, -1)) {
    out.push(phase.end.type === 'pass' ? phase.end.to : out[out.length - 1]);
  }
  return out;
}
