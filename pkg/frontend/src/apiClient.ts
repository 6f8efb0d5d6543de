/**
 * Thin client for the /v1 service API. No score computation happens here:
 * every number displayed by the UI comes back from these responses verbatim.
 */

import type { OverridesDoc, ProblemDoc, RunRecord } from './types.js';

export class ServiceError extends Error {
  constructor(
    public readonly status: number,
    public readonly body: unknown,
  ) {
    super(`service responded ${status}: ${JSON.stringify(body)}`);
    this.name = 'ServiceError';
  }
}

export interface PollOptions {
  intervalMs?: number;
  timeoutMs?: number;
  sleep?: (ms: number) => Promise<void>;
}

const defaultSleep = (ms: number) => new Promise<void>((resolve) => setTimeout(resolve, ms));

export class ServiceClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: typeof fetch = fetch,
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method,
      headers: body !== undefined ? { 'content-type': 'application/json' } : undefined,
      body: body !== undefined ? JSON.stringify(body) : undefined,
    });
    const payload: unknown = await response.json();
    if (!response.ok) {
      throw new ServiceError(response.status, payload);
    }
    return payload as T;
  }

  health(): Promise<{ status: string }> {
    return this.request('GET', '/v1/health');
  }

  async createProblem(doc: ProblemDoc): Promise<string> {
    const out = await this.request<{ problem_id: string }>('POST', '/v1/problems', doc);
    return out.problem_id;
  }

  async startRun(problemId: string, seed?: number,
                 config?: Record<string, number>): Promise<string> {
    const body: Record<string, unknown> = { problem_id: problemId };
    if (seed !== undefined) body['seed'] = seed;
    if (config !== undefined) body['config'] = config;
    const out = await this.request<{ run_id: string }>('POST', '/v1/runs', body);
    return out.run_id;
  }

  getRun(runId: string, page?: { offset: number; limit: number }): Promise<RunRecord> {
    const query = page !== undefined
      ? `?trace_offset=${page.offset}&trace_limit=${page.limit}`
      : '';
    return this.request('GET', `/v1/runs/${runId}${query}`);
  }

  async whatif(baseRunId: string, overrides: OverridesDoc): Promise<string> {
    const out = await this.request<{ run_id: string }>(
      'POST', `/v1/runs/${baseRunId}/whatif`, overrides);
    return out.run_id;
  }

  /** Poll until the run reaches a terminal status (default: every second). */
  async pollRun(runId: string, options: PollOptions = {}): Promise<RunRecord> {
    const interval = options.intervalMs ?? 1000;
    const timeout = options.timeoutMs ?? 120_000;
    const sleep = options.sleep ?? defaultSleep;
    const deadline = Date.now() + timeout;
    for (;;) {
      const record = await this.getRun(runId);
      if (record.status === 'done' || record.status === 'failed') {
        return record;
      }
      if (Date.now() >= deadline) {
        throw new Error(`run ${runId} still ${record.status} after ${timeout} ms`);
      }
      await sleep(interval);
    }
  }
}
