/**
 * Editor state <-> problem document conversion plus a structural validator
 * mirroring the backend schema (unknown fields rejected, weight sum must be
 * one, curves must be valid). Anything the editor can produce passes this
 * validator, and this validator accepts nothing the backend would reject.
 */

import { validateBreakpoints } from './curveEditor.js';
import type { CurveEditorState } from './curveEditor.js';
import { serializeCurve } from './curveEditor.js';
import type { WeightsPanelState } from './weightsPanel.js';
import { WEIGHT_SUM_TOLERANCE } from './weightsPanel.js';
import type { ActorDoc, CriterionEntry, CurveDoc, ProblemDoc } from './types.js';

export interface EditorBundle {
  problemKind: ProblemDoc['problem_kind'];
  capability: Record<string, unknown>;
  curves: CurveEditorState[];
  weights: WeightsPanelState;
  thresholds: Record<string, number>; // "actor:criterion" keys
  solver?: Record<string, number>;
  seed: number;
}

export function buildProblemDocument(bundle: EditorBundle): ProblemDoc {
  const actors = new Map<string, ActorDoc>();
  const curveByColumn = new Map<string, CurveEditorState>();
  for (const editor of bundle.curves) {
    curveByColumn.set(`${editor.actorId}:${editor.criterion}`, editor);
  }
  const ensureActor = (id: string): ActorDoc => {
    let actor = actors.get(id);
    if (actor === undefined) {
      actor = { id, criteria: {} };
      actors.set(id, actor);
    }
    return actor;
  };
  for (const editor of bundle.curves) {
    ensureActor(editor.actorId).criteria[editor.criterion] = {
      weight: 0,
      curve: serializeCurve(editor),
    };
  }
  for (const entry of bundle.weights.entries) {
    const actor = ensureActor(entry.actorId);
    const existing = actor.criteria[entry.criterion];
    if (existing === undefined) {
      throw new Error(`weight for ${entry.actorId}:${entry.criterion} has no curve`);
    }
    existing.weight = entry.weight;
  }
  for (const [column, threshold] of Object.entries(bundle.thresholds)) {
    const [actorId, criterion] = column.split(':', 2) as [string, string];
    const entry = actors.get(actorId)?.criteria[criterion];
    if (entry === undefined) {
      throw new Error(`threshold for unknown column ${column}`);
    }
    entry.threshold = threshold;
  }
  const doc: ProblemDoc = {
    format_version: '1',
    problem_kind: bundle.problemKind,
    capability: bundle.capability,
    actors: [...actors.values()],
    seed: bundle.seed,
  };
  if (bundle.solver !== undefined) doc.solver = bundle.solver;
  return doc;
}

export function parseProblemDocument(doc: ProblemDoc): {
  curves: CurveEditorState[];
  weights: WeightsPanelState;
  thresholds: Record<string, number>;
} {
  const curves: CurveEditorState[] = [];
  const weights: WeightsPanelState = { entries: [], messages: [] };
  const thresholds: Record<string, number> = {};
  for (const actor of doc.actors) {
    for (const [criterion, entry] of Object.entries(actor.criteria)) {
      if (entry.curve !== undefined && 'breakpoints' in entry.curve) {
        curves.push({
          actorId: actor.id,
          criterion,
          breakpoints: entry.curve.breakpoints.map(([f, p]) => [f, p]),
          direction: entry.curve.direction ?? 'free',
          gridStep: null,
          messages: [],
        });
      }
      weights.entries.push({ actorId: actor.id, criterion, weight: entry.weight });
      if (entry.threshold !== undefined) {
        thresholds[`${actor.id}:${criterion}`] = entry.threshold;
      }
    }
  }
  return { curves, weights, thresholds };
}

const TOP_LEVEL_FIELDS = new Set([
  'format_version', 'problem_kind', 'capability', 'actors', 'solver', 'seed',
]);
const ACTOR_FIELDS = new Set(['id', 'criteria']);
const ENTRY_FIELDS = new Set(['weight', 'threshold', 'curve']);
const CURVE_FIELDS = new Set(['breakpoints', 'direction']);

/** Structural validation with json-path style locations. */
export function validateProblemDocument(doc: unknown): string[] {
  const problems: string[] = [];
  if (typeof doc !== 'object' || doc === null || Array.isArray(doc)) {
    return ['$: document must be an object'];
  }
  const record = doc as Record<string, unknown>;
  for (const key of Object.keys(record)) {
    if (!TOP_LEVEL_FIELDS.has(key)) problems.push(`$.${key}: unknown field`);
  }
  if (record['format_version'] !== '1') problems.push('$.format_version: must be "1"');
  if (!['windfarm', 'alloc', 'custom'].includes(record['problem_kind'] as string)) {
    problems.push('$.problem_kind: unknown kind');
  }
  if (typeof record['capability'] !== 'object' || record['capability'] === null) {
    problems.push('$.capability: must be an object');
  }
  if (!Number.isInteger(record['seed'])) problems.push('$.seed: must be an integer');

  const actors = record['actors'];
  if (!Array.isArray(actors) || actors.length === 0) {
    problems.push('$.actors: must be a non-empty array');
    return problems;
  }
  let weightTotal = 0;
  actors.forEach((actor, i) => {
    const a = actor as Record<string, unknown>;
    for (const key of Object.keys(a)) {
      if (!ACTOR_FIELDS.has(key)) problems.push(`$.actors[${i}].${key}: unknown field`);
    }
    if (typeof a['id'] !== 'string' || a['id'].includes(':') || a['id'].length === 0) {
      problems.push(`$.actors[${i}].id: must be a string without ':'`);
    }
    const criteria = a['criteria'];
    if (typeof criteria !== 'object' || criteria === null) {
      problems.push(`$.actors[${i}].criteria: must be an object`);
      return;
    }
    for (const [criterion, rawEntry] of Object.entries(criteria)) {
      const path = `$.actors[${i}].criteria.${criterion}`;
      const entry = rawEntry as Record<string, unknown>;
      for (const key of Object.keys(entry)) {
        if (!ENTRY_FIELDS.has(key)) problems.push(`${path}.${key}: unknown field`);
      }
      const weight = entry['weight'];
      if (typeof weight !== 'number' || weight < 0) {
        problems.push(`${path}.weight: must be a nonnegative number`);
      } else {
        weightTotal += weight;
      }
      const threshold = entry['threshold'];
      if (threshold !== undefined &&
          (typeof threshold !== 'number' || threshold < 0 || threshold > 100)) {
        problems.push(`${path}.threshold: must lie in [0, 100]`);
      }
      const curve = entry['curve'];
      if (curve !== undefined) {
        problems.push(...validateCurveDoc(curve, path + '.curve'));
      }
    }
  });
  if (Math.abs(weightTotal - 1.0) > WEIGHT_SUM_TOLERANCE) {
    problems.push(`$.actors: weights must sum to 1, got ${weightTotal}`);
  }
  return problems;
}

function validateCurveDoc(curve: unknown, path: string): string[] {
  if (typeof curve !== 'object' || curve === null) return [`${path}: must be an object`];
  const c = curve as Record<string, unknown>;
  if ('auto' in c) {
    const auto = c['auto'] as Record<string, unknown>;
    if (!['ascending', 'descending'].includes(auto?.['direction'] as string)) {
      return [`${path}.auto.direction: must be ascending or descending`];
    }
    return [];
  }
  for (const key of Object.keys(c)) {
    if (!CURVE_FIELDS.has(key)) return [`${path}.${key}: unknown field`];
  }
  const breakpoints = c['breakpoints'];
  if (!Array.isArray(breakpoints)) return [`${path}.breakpoints: must be an array`];
  const direction = (c['direction'] ?? 'free') as 'ascending' | 'descending' | 'free';
  return validateBreakpoints(
    breakpoints as [number, number][],
    direction,
  ).map((msg) => `${path}: ${msg}`);
}

export function serializeCurveDoc(curve: CurveDoc): CurveDoc {
  return { breakpoints: curve.breakpoints.map(([f, p]) => [f, p]), direction: curve.direction };
}
