// Thin fetch wrappers around the simulation service.

import type { CourtInfo, SimulateResponseJson, SketchJson, ValidationReportJson } from './model.js';

export interface ModelInfo {
  court: CourtInfo;
  config: Record<string, number> | null;
  checkpoint: string | null;
  train_steps: number;
}

export async function fetchModelInfo(base = ''): Promise<ModelInfo> {
  const resp = await fetch(`${base}/api/model`);
  if (!resp.ok) throw new Error(`model info failed: ${resp.status}`);
  return resp.json();
}

export async function validateSketch(
  sketch: SketchJson,
  base = '',
): Promise<ValidationReportJson> {
  const resp = await fetch(`${base}/api/validate`, {
    method: 'POST',
    headers: { 'Content-Type': 'application/json' },
    body: JSON.stringify(sketch),
  });
  if (!resp.ok) throw new Error(`validate failed: ${resp.status}`);
  return resp.json();
}

export async function simulateSketch(
  sketch: SketchJson,
  numSamples: number,
  seed: number | null,
  base = '',
): Promise<SimulateResponseJson> {
  const body: Record<string, unknown> = { sketch, num_samples: numSamples };
  if (seed !== null) body.seed = seed;
  const resp = await fetch(`${base}/api/simulate`, {
    method: 'POST',
    headers: { 'Content-Type': 'application/json' },
    body: JSON.stringify(body),
  });
  if (!resp.ok) {
    const detail = await resp.json().catch(() => ({}));
    throw new Error(detail.error ?? `simulate failed: ${resp.status}`);
  }
  return resp.json();
}
