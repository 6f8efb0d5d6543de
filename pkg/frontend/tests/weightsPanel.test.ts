import { describe, expect, it } from 'vitest';

import {
  canNormalize,
  isSubmittable,
  newWeightsPanel,
  normalize,
  setWeight,
  sumIndicator,
} from '../src/weightsPanel.js';

const panel = () => newWeightsPanel([
  { actorId: 'operations', criterion: 'cost', weight: 0.3 },
  { actorId: 'commercial', criterion: 'makespan', weight: 0.3 },
]);

describe('weights panel', () => {
  it('normalizes {0.3, 0.3} to {0.5, 0.5}', () => {
    const out = normalize(panel());
    expect(out.blocked).toBeNull();
    expect(out.state.entries.map((e) => e.weight)).toEqual([0.5, 0.5]);
    expect(isSubmittable(out.state)).toBe(true);
  });

  it('permits zero weights on individual criteria', () => {
    let state = panel();
    state = setWeight(state, 'operations', 'cost', 0).state;
    state = setWeight(state, 'commercial', 'makespan', 1).state;
    expect(isSubmittable(state)).toBe(true);
  });

  it('disables normalize and reports a message when everything is zero', () => {
    let state = panel();
    state = setWeight(state, 'operations', 'cost', 0).state;
    state = setWeight(state, 'commercial', 'makespan', 0).state;
    expect(canNormalize(state)).toBe(false);
    const out = normalize(state);
    expect(out.blocked).toMatch(/nothing to normalize/);
    expect(out.state.messages).toHaveLength(1);
  });

  it('blocks submission while the sum differs from one', () => {
    const state = panel();
    expect(sumIndicator(state)).toEqual({ sum: 0.6, ok: false });
    expect(isSubmittable(state)).toBe(false);
  });

  it('rejects negative weights', () => {
    const out = setWeight(panel(), 'operations', 'cost', -0.1);
    expect(out.blocked).toMatch(/negative/);
  });
});
