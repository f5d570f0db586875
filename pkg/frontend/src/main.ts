// Tactic-board app: draw an offensive set play, submit it, watch the
// simulated outcome. Talks only to the sketchplay HTTP API.

import { fetchModelInfo, simulateSketch, validateSketch } from './api.js';
import {
  BoardState,
  DEFAULT_COURT,
  SimulateResponseJson,
  commitPass,
  commitShot,
  dragTo,
  newBoard,
  placePlayer,
  setDribbler,
  toSketchJson,
} from './model.js';
import { Playback } from './playback.js';
import { Ctx2D, canvasSize, drawBoard, drawPlaybackFrame, toFeet, toPx } from './render.js';

const DRAG_THRESHOLD_PX = 6;
const HIT_RADIUS_PX = 14;

document.body.innerHTML = `
  <h1>Set-play sketch board</h1>
  <div class="row">
    <div class="panel">
      <canvas id="board"></canvas>
      <div class="controls">
        <button id="validate">Validate</button>
        <button id="simulate">Simulate</button>
        <label>samples <input id="samples" type="number" min="1" max="16" value="2"></label>
        <label>seed <input id="seed" type="number" value="9"></label>
        <button id="reset">Reset</button>
      </div>
      <div id="status" class="status"></div>
      <p class="hint">
        Shift-drag places a player; drag draws a route; double-click marks
        the dribbler. Click the carrier then a teammate to pass, or the
        hoop to shoot.
      </p>
    </div>
    <div class="panel">
      <canvas id="stage"></canvas>
      <div class="controls">
        <button id="play">Play</button>
        <input id="scrub" type="range" min="0" value="0" step="1">
        <label>speed <select id="speed">
          <option value="0.5">0.5x</option>
          <option value="1" selected>1x</option>
          <option value="2">2x</option>
        </select></label>
        <label><input id="trails" type="checkbox"> trails</label>
        <select id="sample"></select>
      </div>
      <div id="playinfo" class="status"></div>
    </div>
  </div>
`;

const boardCanvas = document.getElementById('board') as HTMLCanvasElement;
const stageCanvas = document.getElementById('stage') as HTMLCanvasElement;
const statusEl = document.getElementById('status') as HTMLDivElement;
const playInfoEl = document.getElementById('playinfo') as HTMLDivElement;
const scrubEl = document.getElementById('scrub') as HTMLInputElement;
const sampleEl = document.getElementById('sample') as HTMLSelectElement;

let state: BoardState = newBoard(DEFAULT_COURT);
let armed: number | null = null;
let playback: Playback | null = null;
let response: SimulateResponseJson | null = null;
let requestCounter = 0;

const boardCtx = boardCanvas.getContext('2d') as unknown as Ctx2D;
const stageCtx = stageCanvas.getContext('2d') as unknown as Ctx2D;

function resize(): void {
  const [w, h] = canvasSize(state.court);
  for (const c of [boardCanvas, stageCanvas]) {
    c.width = w;
    c.height = h;
  }
}

function setStatus(text: string, isWarning = false): void {
  statusEl.textContent = text;
  statusEl.className = isWarning ? 'status warning' : 'status';
}

function redrawBoard(): void {
  drawBoard(boardCtx, state, armed);
  if (state.warning) setStatus(state.warning, true);
}

function hitPlayer(xPx: number, yPx: number): number | null {
  for (let i = 0; i < 5; i++) {
    const [px, py] = toPx(state.positions[i]);
    if (Math.hypot(px - xPx, py - yPx) <= HIT_RADIUS_PX) return i + 1;
  }
  return null;
}

function hitHoop(xPx: number, yPx: number): boolean {
  const [hx, hy] = toPx(state.court.hoop);
  return Math.hypot(hx - xPx, hy - yPx) <= HIT_RADIUS_PX;
}

let drag: { player: number; startX: number; startY: number; moved: boolean } | null = null;

boardCanvas.addEventListener('pointerdown', (ev) => {
  const player = hitPlayer(ev.offsetX, ev.offsetY);
  if (player !== null) {
    drag = { player, startX: ev.offsetX, startY: ev.offsetY, moved: false };
    boardCanvas.setPointerCapture(ev.pointerId);
  } else if (hitHoop(ev.offsetX, ev.offsetY) && armed !== null) {
    state = commitShot(state, armed);
    armed = null;
    if (state.finished) setStatus('Shot committed; the sketch is complete.');
    redrawBoard();
  }
});

boardCanvas.addEventListener('pointermove', (ev) => {
  if (!drag) return;
  if (!drag.moved && Math.hypot(ev.offsetX - drag.startX, ev.offsetY - drag.startY) < DRAG_THRESHOLD_PX) {
    return;
  }
  drag.moved = true;
  const posFt = toFeet(state.court, ev.offsetX, ev.offsetY);
  // Shift-drag repositions the starting spot (only before drawing starts).
  state = ev.shiftKey ? placePlayer(state, drag.player, posFt) : dragTo(state, drag.player, posFt);
  redrawBoard();
});

boardCanvas.addEventListener('pointerup', () => {
  if (!drag) return;
  const { player, moved } = drag;
  drag = null;
  if (moved) {
    redrawBoard();
    return;
  }
  // A non-drag click: arm the carrier, or complete a pass to a receiver.
  if (armed === null) {
    if (player === state.carrier) {
      armed = player;
      setStatus(`Player ${player} armed: click a receiver or the hoop.`);
    } else {
      setStatus(`Player ${state.carrier} has the ball.`, true);
    }
  } else if (player !== armed) {
    state = commitPass(state, armed, player);
    armed = null;
  } else {
    armed = null;
  }
  redrawBoard();
});

boardCanvas.addEventListener('dblclick', (ev) => {
  const player = hitPlayer(ev.offsetX, ev.offsetY);
  if (player !== null) {
    state = setDribbler(state, player);
    setStatus(`Player ${player} is the dribbler.`);
    armed = null;
    redrawBoard();
  }
});

(document.getElementById('reset') as HTMLButtonElement).onclick = () => {
  state = newBoard(state.court);
  armed = null;
  playback = null;
  response = null;
  setStatus('Board reset.');
  redrawBoard();
  renderStage();
};

(document.getElementById('validate') as HTMLButtonElement).onclick = async () => {
  try {
    const report = await validateSketch(toSketchJson(state));
    if (report.ok) setStatus('Sketch is valid.');
    else setStatus(report.violations.map((v) => v.message).join('; '), true);
  } catch (err) {
    setStatus(String(err), true);
  }
};

(document.getElementById('simulate') as HTMLButtonElement).onclick = async () => {
  const n = Number((document.getElementById('samples') as HTMLInputElement).value);
  const seedRaw = (document.getElementById('seed') as HTMLInputElement).value;
  const seed = seedRaw === '' ? null : Number(seedRaw);
  const ticket = ++requestCounter;
  setStatus('Simulating…');
  try {
    const resp = await simulateSketch(toSketchJson(state), n, seed);
    if (ticket !== requestCounter) return; // a newer request superseded this one
    response = resp;
    sampleEl.innerHTML = resp.plays
      .map((_, i) => `<option value="${i}">sample ${i + 1}</option>`)
      .join('');
    selectSample(0);
    setStatus(`Simulated ${resp.plays.length} play(s) of t=${resp.condition_t}.`);
  } catch (err) {
    if (ticket === requestCounter) setStatus(String(err), true);
  }
};

function selectSample(i: number): void {
  if (!response) return;
  playback = new Playback(response.plays[i]);
  playback.trails = (document.getElementById('trails') as HTMLInputElement).checked;
  scrubEl.max = String(playback.frameCount - 1);
  scrubEl.value = '0';
  renderStage();
}

sampleEl.onchange = () => selectSample(Number(sampleEl.value));

(document.getElementById('play') as HTMLButtonElement).onclick = () => {
  if (!playback) return;
  if (playback.cursor >= playback.frameCount - 1) playback.seek(0);
  playback.playing = !playback.playing;
  lastTick = null;
  if (playback.playing) requestAnimationFrame(tick);
};

scrubEl.oninput = () => {
  if (!playback) return;
  playback.playing = false;
  playback.seek(Number(scrubEl.value));
  renderStage();
};

(document.getElementById('speed') as HTMLSelectElement).onchange = (ev) => {
  if (playback) playback.speed = Number((ev.target as HTMLSelectElement).value);
};

(document.getElementById('trails') as HTMLInputElement).onchange = (ev) => {
  if (playback) {
    playback.trails = (ev.target as HTMLInputElement).checked;
    renderStage();
  }
};

let lastTick: number | null = null;

function tick(ts: number): void {
  if (!playback || !playback.playing) return;
  if (lastTick === null) lastTick = ts;
  playback.advance(ts - lastTick);
  lastTick = ts;
  scrubEl.value = String(playback.frameIndex());
  renderStage();
  if (playback.playing) requestAnimationFrame(tick);
}

function renderStage(): void {
  if (!playback) {
    drawPlaybackFrame(stageCtx, state.court, { ball: state.court.hoop, offense: [], defense: [] }, []);
    playInfoEl.textContent = 'No simulation yet.';
    return;
  }
  const trails = playback.trailIndices().map((k) => ({
    ball: playback!.play.frames[k].ball,
    offense: playback!.play.frames[k].offense,
    defense: playback!.play.frames[k].defense ?? [],
  }));
  drawPlaybackFrame(stageCtx, state.court, playback.positions(), trails);
  playInfoEl.textContent = `frame ${playback.frameIndex() + 1}/${playback.frameCount}`;
}

async function start(): Promise<void> {
  try {
    const info = await fetchModelInfo();
    state = newBoard(info.court);
    setStatus(info.checkpoint ? `Model ${info.checkpoint} loaded.` : 'No model loaded (validate only).');
  } catch {
    setStatus('Service unreachable; using default court.', true);
  }
  resize();
  redrawBoard();
  renderStage();
}

// Handle for scripted sessions (end-to-end tests) to read board state.
declare global {
  interface Window {
    __sketchplay?: {
      sketch: () => ReturnType<typeof toSketchJson>;
      state: () => BoardState;
      ready: Promise<void>;
    };
  }
}

const ready = start();
window.__sketchplay = {
  sketch: () => toSketchJson(state),
  state: () => state,
  ready,
};
