/**
 * What-if comparison session: one row per run, every value copied verbatim
 * from the service's run records. The client never recomputes Z, z-scores,
 * or feasibility; the only "logic" here is picking which backend number to
 * show and which row currently holds the highest backend-reported score.
 */

import type { ServiceClient, PollOptions } from './apiClient.js';
import type { OverridesDoc, RunRecord } from './types.js';

export interface ComparisonRow {
  label: string;
  runId: string;
  status: RunRecord['status'];
  bestZ: number | null;
  bestX: Record<string, unknown> | null;
  fValues: Record<string, number> | null;
  preferences: Record<string, number> | null;
  errorCode: string | null;
  errorDetail: string | null;
}

export interface WhatIfSession {
  baseRunId: string;
  rows: ComparisonRow[];
}

export function rowFromRecord(label: string, record: RunRecord): ComparisonRow {
  return {
    label,
    runId: record.run_id,
    status: record.status,
    bestZ: record.result?.best_Z ?? null,
    bestX: record.result?.best_x ?? null,
    fValues: record.result?.f_values ?? null,
    preferences: record.result?.preferences ?? null,
    errorCode: record.error?.code ?? null,
    errorDetail: record.error?.detail ?? null,
  };
}

export function newSession(baseRecord: RunRecord): WhatIfSession {
  return { baseRunId: baseRecord.run_id, rows: [rowFromRecord('base', baseRecord)] };
}

export function addRecord(session: WhatIfSession, label: string,
                          record: RunRecord): WhatIfSession {
  return { ...session, rows: [...session.rows, rowFromRecord(label, record)] };
}

/** Index of the row with the highest backend-reported score (display highlight). */
export function bestRowIndex(session: WhatIfSession): number | null {
  let best: number | null = null;
  session.rows.forEach((row, i) => {
    if (row.bestZ === null) return;
    if (best === null || row.bestZ > session.rows[best]!.bestZ!) best = i;
  });
  return best;
}

/**
 * Launch a what-if against the session's base run, poll it to completion,
 * and append the outcome as a new comparison row. Service errors propagate
 * verbatim so the caller can show them and offer a retry.
 */
export async function runAndCompare(
  session: WhatIfSession,
  client: ServiceClient,
  overrides: OverridesDoc,
  label: string,
  poll: PollOptions = {},
): Promise<WhatIfSession> {
  const runId = await client.whatif(session.baseRunId, overrides);
  const record = await client.pollRun(runId, poll);
  return addRecord(session, label, record);
}
