/**
 * Preference-curve editor state: draggable breakpoints with live validation.
 *
 * The rules mirror the problem-file schema exactly, so any state the editor
 * accepts serializes to a curve the backend accepts unchanged:
 *   - performance values strictly increasing
 *   - preferences within [0, 100], exactly one 100-anchor and one 0-anchor
 *   - anchors sit at the endpoint breakpoints
 *   - ascending/descending curves are monotone
 */

import type { Breakpoint, CurveDirection, CurveDoc } from './types.js';

export interface CurveEditorState {
  actorId: string;
  criterion: string;
  breakpoints: Breakpoint[];
  direction: CurveDirection;
  /** Snap dragged performance values to this step (null: free placement). */
  gridStep: number | null;
  messages: string[];
}

export interface EditOutcome {
  state: CurveEditorState;
  blocked: string | null;
}

export function validateBreakpoints(points: Breakpoint[], direction: CurveDirection): string[] {
  const problems: string[] = [];
  if (points.length < 2) {
    problems.push('curve needs at least two breakpoints');
    return problems;
  }
  for (let i = 1; i < points.length; i++) {
    if (!(points[i]![0] > points[i - 1]![0])) {
      problems.push(`performance values must be strictly increasing at index ${i}`);
    }
  }
  const prefs = points.map((p) => p[1]);
  if (prefs.some((p) => p < 0 || p > 100)) {
    problems.push('preferences must stay within [0, 100]');
  }
  const hundred = prefs.filter((p) => p === 100).length;
  const zero = prefs.filter((p) => p === 0).length;
  if (hundred !== 1 || zero !== 1) {
    problems.push('curve needs exactly one 100-anchor and one 0-anchor');
  } else {
    const ends = new Set([prefs[0], prefs[prefs.length - 1]]);
    if (!(ends.has(0) && ends.has(100))) {
      problems.push('the 0- and 100-anchors must be the endpoint breakpoints');
    }
  }
  if (direction === 'ascending' && prefs.some((p, i) => i > 0 && p < prefs[i - 1]!)) {
    problems.push('ascending curve has a decreasing segment');
  }
  if (direction === 'descending' && prefs.some((p, i) => i > 0 && p > prefs[i - 1]!)) {
    problems.push('descending curve has an increasing segment');
  }
  return problems;
}

export function newLinearEditor(
  actorId: string,
  criterion: string,
  fMin: number,
  fMax: number,
  direction: 'ascending' | 'descending',
  gridStep: number | null = null,
): CurveEditorState {
  const breakpoints: Breakpoint[] =
    direction === 'ascending'
      ? [[fMin, 0], [fMax, 100]]
      : [[fMin, 100], [fMax, 0]];
  return { actorId, criterion, breakpoints, direction, gridStep, messages: [] };
}

export function snapAbscissa(state: CurveEditorState, f: number): number {
  if (state.gridStep === null || state.gridStep <= 0) return f;
  return Math.round(f / state.gridStep) * state.gridStep;
}

function withPoints(state: CurveEditorState, points: Breakpoint[]): EditOutcome {
  const problems = validateBreakpoints(points, state.direction);
  if (problems.length > 0) {
    return { state: { ...state, messages: problems }, blocked: problems[0]! };
  }
  return { state: { ...state, breakpoints: points, messages: [] }, blocked: null };
}

/** Drag one breakpoint; anchors keep their preference value, only slide. */
export function moveBreakpoint(
  state: CurveEditorState,
  index: number,
  f: number,
  preference: number,
): EditOutcome {
  const current = state.breakpoints[index];
  if (current === undefined) {
    return { state, blocked: `no breakpoint at index ${index}` };
  }
  const isAnchor = current[1] === 0 || current[1] === 100;
  const next: Breakpoint = [snapAbscissa(state, f), isAnchor ? current[1] : preference];
  const points = state.breakpoints.map((p, i): Breakpoint => (i === index ? next : p));
  return withPoints(state, points);
}

export function addBreakpoint(state: CurveEditorState, f: number, preference: number): EditOutcome {
  const snapped = snapAbscissa(state, f);
  const points: Breakpoint[] = [...state.breakpoints, [snapped, preference]];
  points.sort((a, b) => a[0] - b[0]);
  return withPoints(state, points);
}

export function removeBreakpoint(state: CurveEditorState, index: number): EditOutcome {
  const point = state.breakpoints[index];
  if (point === undefined) {
    return { state, blocked: `no breakpoint at index ${index}` };
  }
  if (point[1] === 0 || point[1] === 100) {
    return { state, blocked: 'anchors cannot be removed' };
  }
  const points = state.breakpoints.filter((_, i) => i !== index);
  return withPoints(state, points);
}

/** Flip the curve: every preference mirrors to 100 - p, so anchors swap. */
export function toggleDirection(state: CurveEditorState): CurveEditorState {
  const direction: CurveDirection =
    state.direction === 'ascending' ? 'descending'
      : state.direction === 'descending' ? 'ascending'
        : 'free';
  const breakpoints = state.breakpoints.map(([f, p]): Breakpoint => [f, 100 - p]);
  return { ...state, direction, breakpoints, messages: [] };
}

export function serializeCurve(state: CurveEditorState): CurveDoc {
  return {
    breakpoints: state.breakpoints.map(([f, p]): Breakpoint => [f, p]),
    direction: state.direction,
  };
}

export function editorFromCurve(
  actorId: string,
  criterion: string,
  curve: CurveDoc,
  gridStep: number | null = null,
): CurveEditorState {
  return {
    actorId,
    criterion,
    breakpoints: curve.breakpoints.map(([f, p]): Breakpoint => [f, p]),
    direction: curve.direction ?? 'free',
    gridStep,
    messages: [],
  };
}
