import { describe, expect, it } from 'vitest';

import {
  carrierSequence,
  clampToCourt,
  commitPass,
  commitShot,
  DEFAULT_COURT,
  dragTo,
  newBoard,
  setDribbler,
  toSketchJson,
} from '../src/model.js';

describe('board state machine', () => {
  it('clamps dragged points to the court', () => {
    let s = newBoard();
    s = dragTo(s, 3, [-10, 60]);
    const path = s.draft['3'];
    expect(path[path.length - 1]).toEqual([0, 50]);
  });

  it('rejects a pass from a non-carrier with a warning', () => {
    let s = newBoard();
    s = commitPass(s, 2, 3);
    expect(s.warning).toMatch(/does not have the ball/);
    expect(s.committed).toHaveLength(0);
  });

  it('chains carriers through committed passes', () => {
    let s = newBoard();
    s = dragTo(s, 1, [20, 25]);
    s = commitPass(s, 1, 4);
    expect(s.carrier).toBe(4);
    s = commitShot(s, 4);
    expect(s.finished).toBe(true);
    const sketch = toSketchJson(s);
    expect(carrierSequence(sketch)).toEqual([1, 4]);
  });

  it('locks the dribbler once drawing starts', () => {
    let s = newBoard();
    s = dragTo(s, 1, [20, 25]);
    s = setDribbler(s, 3);
    expect(s.dribbler).toBe(1);
    expect(s.warning).toMatch(/fixed/);
  });

  it('rejects a shot after the play is finished', () => {
    let s = newBoard();
    s = commitShot(s, 1);
    const again = commitShot(s, 1);
    expect(again.warning).toMatch(/already ended/);
    expect(again.committed).toHaveLength(1);
  });

  it('emits a trailing idle phase for an unfinished draft', () => {
    let s = newBoard();
    s = dragTo(s, 2, [10, 10]);
    const sketch = toSketchJson(s);
    expect(sketch.phases).toHaveLength(1);
    expect(sketch.phases[0].end).toEqual({ type: 'none' });
  });

  it('clampToCourt is the identity inside the court', () => {
    expect(clampToCourt(DEFAULT_COURT, [20, 30])).toEqual([20, 30]);
  });
});
