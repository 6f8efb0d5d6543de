/** Shared types mirroring the service's JSON formats. */

export type Breakpoint = [number, number]; // [performance value, preference 0..100]

export type CurveDirection = 'ascending' | 'descending' | 'free';

export interface CurveDoc {
  breakpoints: Breakpoint[];
  direction?: CurveDirection;
}

export interface CriterionEntry {
  weight: number;
  threshold?: number;
  curve?: CurveDoc | { auto: { direction: 'ascending' | 'descending' } };
}

export interface ActorDoc {
  id: string;
  criteria: Record<string, CriterionEntry>;
}

export interface ProblemDoc {
  format_version: '1';
  problem_kind: 'windfarm' | 'alloc' | 'custom';
  capability: Record<string, unknown>;
  actors: ActorDoc[];
  solver?: Record<string, number>;
  seed: number;
}

export interface OverridesDoc {
  format_version: '1';
  weights?: Record<string, number>;
  thresholds?: Record<string, number>;
  curves?: Record<string, CurveDoc | { affine: { scale: number; offset?: number } }>;
}

export interface ResultDoc {
  format_version: string;
  problem_kind: string;
  seed: number;
  best_x: Record<string, unknown>;
  best_Z: number;
  f_values: Record<string, number>;
  preferences: Record<string, number>;
  feasible: boolean;
  acceptable: boolean;
  acceptability_violations: [string, number][];
  evaluations: number;
  generations: number;
  terminated_by: string;
  // best/mean scores are null for generations before any candidate was acceptable
  trace: [number, number | null, number | null, number][];
  trace_total?: number;
}

export type RunStatus = 'queued' | 'running' | 'done' | 'failed';

export interface RunError {
  code: string;
  detail: string;
  diagnostics?: Record<string, unknown>;
}

export interface RunRecord {
  run_id: string;
  problem_id: string;
  seed: number;
  config: Record<string, number> | null;
  overrides: OverridesDoc | null;
  base_run_id: string | null;
  status: RunStatus;
  created_at: string;
  result: ResultDoc | null;
  error: RunError | null;
}
