import { describe, expect, it } from 'vitest';

import { ServiceClient, ServiceError } from '../src/apiClient.js';
import { runAndCompare, newSession } from '../src/whatifSession.js';
import type { RunRecord } from '../src/types.js';

function makeRecord(runId: string, status: RunRecord['status'],
                    bestZ: number | null = null): RunRecord {
  return {
    run_id: runId,
    problem_id: 'p1',
    seed: 7,
    config: {},
    overrides: null,
    base_run_id: null,
    status,
    created_at: '2026-01-01T00:00:00+00:00',
    result: bestZ === null ? null : {
      format_version: '1', problem_kind: 'alloc', seed: 7,
      best_x: { start: { a0: 0 } }, best_Z: bestZ,
      f_values: { cost: 1 }, preferences: { 'operations:cost': 50 },
      feasible: true, acceptable: true, acceptability_violations: [],
      evaluations: 10, generations: 2, terminated_by: 'stall', trace: [],
    },
    error: null,
  };
}

/** In-memory stand-in for the service with a run that finishes after 2 polls. */
function fakeService() {
  let polls = 0;
  const calls: string[] = [];
  const fetchImpl: typeof fetch = async (input, init) => {
    const url = String(input);
    const method = init?.method ?? 'GET';
    calls.push(`${method} ${url}`);
    const json = (body: unknown, status = 200) =>
      new Response(JSON.stringify(body), {
        status, headers: { 'content-type': 'application/json' } });
    if (url.endsWith('/v1/problems') && method === 'POST') {
      return json({ problem_id: 'p1' }, 201);
    }
    if (url.endsWith('/v1/runs') && method === 'POST') {
      return json({ run_id: 'r1' }, 201);
    }
    if (url.endsWith('/whatif') && method === 'POST') {
      const overrides = JSON.parse(String(init?.body)) as { weights?: unknown };
      if (overrides.weights !== undefined && Object.keys(overrides.weights).length === 0) {
        return json({ code: 'input_error', detail: 'weights must sum to 1' }, 422);
      }
      return json({ run_id: 'r2' }, 201);
    }
    if (url.includes('/v1/runs/') && method === 'GET') {
      polls += 1;
      const id = url.split('/').pop()!;
      return json(polls < 3 ? makeRecord(id, 'running') : makeRecord(id, 'done', 1.5));
    }
    return json({ code: 'not_found', detail: url }, 404);
  };
  return { fetchImpl, calls, pollCount: () => polls };
}

describe('service client', () => {
  it('polls until the run is done without busy-waiting', async () => {
    const { fetchImpl, pollCount } = fakeService();
    const client = new ServiceClient('http://svc', fetchImpl);
    const sleeps: number[] = [];
    const record = await client.pollRun('r1', {
      intervalMs: 1000,
      sleep: async (ms) => { sleeps.push(ms); },
    });
    expect(record.status).toBe('done');
    expect(pollCount()).toBe(3);
    expect(sleeps).toEqual([1000, 1000]);
  });

  it('surfaces error bodies verbatim', async () => {
    const { fetchImpl } = fakeService();
    const client = new ServiceClient('http://svc', fetchImpl);
    await expect(client.whatif('r1', { format_version: '1', weights: {} }))
      .rejects.toSatisfy((e: unknown) =>
        e instanceof ServiceError && e.status === 422 &&
        (e.body as { detail: string }).detail === 'weights must sum to 1');
  });

  it('runAndCompare appends the polled outcome as a row', async () => {
    const { fetchImpl } = fakeService();
    const client = new ServiceClient('http://svc', fetchImpl);
    const session = newSession(makeRecord('r1', 'done', 1.0));
    const out = await runAndCompare(session, client, { format_version: '1' },
      'what-if 1', { sleep: async () => {} });
    expect(out.rows).toHaveLength(2);
    expect(out.rows[1]!.runId).toBe('r2');
    expect(out.rows[1]!.bestZ).toBe(1.5);
    // a failed launch leaves the session untouched
    await expect(runAndCompare(out, client, { format_version: '1', weights: {} },
      'bad', { sleep: async () => {} })).rejects.toThrow(ServiceError);
    expect(out.rows).toHaveLength(2);
  });
});
