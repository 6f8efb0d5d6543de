/**
 * Weight sliders per (actor, criterion) with a live sum indicator.
 * Submission is blocked until the weights sum to exactly one (within the
 * backend's tolerance); the normalize button rescales proportionally.
 */

export const WEIGHT_SUM_TOLERANCE = 1e-9;

export interface WeightEntry {
  actorId: string;
  criterion: string;
  weight: number;
}

export interface WeightsPanelState {
  entries: WeightEntry[];
  messages: string[];
}

export function newWeightsPanel(entries: WeightEntry[]): WeightsPanelState {
  return { entries: entries.map((e) => ({ ...e })), messages: [] };
}

export function weightSum(state: WeightsPanelState): number {
  return state.entries.reduce((acc, e) => acc + e.weight, 0);
}

export function sumIndicator(state: WeightsPanelState): { sum: number; ok: boolean } {
  const sum = weightSum(state);
  return { sum, ok: Math.abs(sum - 1.0) <= WEIGHT_SUM_TOLERANCE };
}

export function isSubmittable(state: WeightsPanelState): boolean {
  return sumIndicator(state).ok && state.entries.every((e) => e.weight >= 0);
}

export function setWeight(
  state: WeightsPanelState,
  actorId: string,
  criterion: string,
  weight: number,
): { state: WeightsPanelState; blocked: string | null } {
  if (weight < 0) {
    return { state, blocked: 'weights cannot be negative' };
  }
  const entries = state.entries.map((e) =>
    e.actorId === actorId && e.criterion === criterion ? { ...e, weight } : e,
  );
  return { state: { entries, messages: [] }, blocked: null };
}

/** Rescale all weights to sum to one; blocked when everything is zero. */
export function normalize(state: WeightsPanelState): {
  state: WeightsPanelState;
  blocked: string | null;
} {
  const sum = weightSum(state);
  if (sum <= 0) {
    const message = 'all weights are zero: nothing to normalize';
    return { state: { ...state, messages: [message] }, blocked: message };
  }
  const entries = state.entries.map((e) => ({ ...e, weight: e.weight / sum }));
  return { state: { entries, messages: [] }, blocked: null };
}

export function canNormalize(state: WeightsPanelState): boolean {
  return weightSum(state) > 0;
}
