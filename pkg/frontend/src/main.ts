/**
 * DOM wiring for the what-if workbench: paste or load a problem, run it,
 * adjust curves/weights/thresholds, launch what-ifs, and compare outcomes.
 */

import { ServiceClient, ServiceError } from './apiClient.js';
import {
  CurveEditorState,
  addBreakpoint,
  moveBreakpoint,
  removeBreakpoint,
  toggleDirection,
  serializeCurve,
} from './curveEditor.js';
import { parseProblemDocument, validateProblemDocument } from './problemSerializer.js';
import {
  WeightsPanelState,
  isSubmittable,
  normalize,
  setWeight,
  sumIndicator,
  canNormalize,
} from './weightsPanel.js';
import { WhatIfSession, bestRowIndex, newSession, runAndCompare } from './whatifSession.js';
import type { OverridesDoc, ProblemDoc } from './types.js';

interface AppState {
  problem: ProblemDoc | null;
  problemId: string | null;
  session: WhatIfSession | null;
  curves: CurveEditorState[];
  weights: WeightsPanelState;
  thresholds: Record<string, number>;
  busy: boolean;
  notice: string;
}

const client = new ServiceClient('');
const state: AppState = {
  problem: null,
  problemId: null,
  session: null,
  curves: [],
  weights: { entries: [], messages: [] },
  thresholds: {},
  busy: false,
  notice: 'paste a problem file to begin',
};

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K, attrs: Record<string, string> = {}, ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  node.append(...children);
  return node;
}

function notice(text: string): void {
  state.notice = text;
  render();
}

async function loadProblem(text: string): Promise<void> {
  let doc: unknown;
  try {
    doc = JSON.parse(text);
  } catch (e) {
    notice(`invalid JSON: ${(e as Error).message}`);
    return;
  }
  const problems = validateProblemDocument(doc);
  if (problems.length > 0) {
    notice(`problem file rejected: ${problems[0]}`);
    return;
  }
  state.problem = doc as ProblemDoc;
  const parsed = parseProblemDocument(state.problem);
  state.curves = parsed.curves;
  state.weights = parsed.weights;
  state.thresholds = parsed.thresholds;
  state.problemId = null;
  state.session = null;
  notice('problem loaded; run it to create the base row');
}

async function runBase(): Promise<void> {
  if (state.problem === null || state.busy) return;
  state.busy = true;
  notice('uploading and solving…');
  try {
    state.problemId = await client.createProblem(state.problem);
    const runId = await client.startRun(state.problemId);
    const record = await client.pollRun(runId, { intervalMs: 1000 });
    state.session = newSession(record);
    notice(record.status === 'done' ? 'base run complete' : 'base run failed');
  } catch (e) {
    notice(e instanceof ServiceError ? `service error: ${e.message}` : String(e));
  } finally {
    state.busy = false;
    render();
  }
}

function currentOverrides(): OverridesDoc {
  const overrides: OverridesDoc = { format_version: '1' };
  const weights: Record<string, number> = {};
  for (const entry of state.weights.entries) {
    weights[`${entry.actorId}:${entry.criterion}`] = entry.weight;
  }
  overrides.weights = weights;
  if (Object.keys(state.thresholds).length > 0) {
    overrides.thresholds = { ...state.thresholds };
  }
  const curves: NonNullable<OverridesDoc['curves']> = {};
  for (const editor of state.curves) {
    curves[`${editor.actorId}:${editor.criterion}`] = serializeCurve(editor);
  }
  overrides.curves = curves;
  return overrides;
}

async function launchWhatIf(): Promise<void> {
  if (state.session === null || state.busy) return;
  if (!isSubmittable(state.weights)) {
    notice('weights must sum to 1 before launching');
    return;
  }
  state.busy = true;
  notice('what-if running…');
  const label = `what-if ${state.session.rows.length}`;
  try {
    state.session = await runAndCompare(
      state.session, client, currentOverrides(), label, { intervalMs: 1000 });
    notice('what-if complete');
  } catch (e) {
    notice(e instanceof ServiceError
      ? `service error (retry available): ${e.message}`
      : String(e));
  } finally {
    state.busy = false;
    render();
  }
}

// --- rendering -----------------------------------------------------------------

function renderCurveEditor(editor: CurveEditorState, index: number): HTMLElement {
  const width = 360;
  const height = 140;
  const pad = 24;
  const fs = editor.breakpoints.map((b) => b[0]);
  const fMin = Math.min(...fs);
  const fMax = Math.max(...fs);
  const fx = (f: number) =>
    pad + ((f - fMin) / Math.max(fMax - fMin, 1e-12)) * (width - 2 * pad);
  const py = (p: number) => height - pad - (p / 100) * (height - 2 * pad);

  const svg = document.createElementNS('http://www.w3.org/2000/svg', 'svg');
  svg.setAttribute('width', String(width));
  svg.setAttribute('height', String(height));
  svg.setAttribute('class', 'curve');
  const path = document.createElementNS('http://www.w3.org/2000/svg', 'polyline');
  path.setAttribute('points',
    editor.breakpoints.map(([f, p]) => `${fx(f)},${py(p)}`).join(' '));
  path.setAttribute('fill', 'none');
  path.setAttribute('stroke', '#2a6');
  svg.append(path);

  editor.breakpoints.forEach(([f, p], i) => {
    const dot = document.createElementNS('http://www.w3.org/2000/svg', 'circle');
    dot.setAttribute('cx', String(fx(f)));
    dot.setAttribute('cy', String(py(p)));
    dot.setAttribute('r', '5');
    dot.setAttribute('fill', p === 0 || p === 100 ? '#c33' : '#36c');
    dot.addEventListener('pointerdown', (down) => {
      down.preventDefault();
      const onMove = (move: PointerEvent) => {
        const rect = svg.getBoundingClientRect();
        const f2 = fMin + ((move.clientX - rect.left - pad) / (width - 2 * pad)) * (fMax - fMin);
        const p2 = (1 - (move.clientY - rect.top - pad) / (height - 2 * pad)) * 100;
        const out = moveBreakpoint(editor, i, f2, Math.max(0, Math.min(100, p2)));
        state.curves[index] = out.state;
        render();
      };
      const onUp = () => {
        window.removeEventListener('pointermove', onMove);
        window.removeEventListener('pointerup', onUp);
      };
      window.addEventListener('pointermove', onMove);
      window.addEventListener('pointerup', onUp);
    });
    dot.addEventListener('dblclick', () => {
      const out = removeBreakpoint(editor, i);
      state.curves[index] = out.state;
      notice(out.blocked ?? 'breakpoint removed');
    });
    svg.append(dot);
  });
  svg.addEventListener('dblclick', (e) => {
    if (e.target !== svg) return;
    const rect = svg.getBoundingClientRect();
    const f = fMin + ((e.clientX - rect.left - pad) / (width - 2 * pad)) * (fMax - fMin);
    const p = (1 - (e.clientY - rect.top - pad) / (height - 2 * pad)) * 100;
    const out = addBreakpoint(editor, f, Math.max(0, Math.min(100, p)));
    state.curves[index] = out.state;
    notice(out.blocked ?? 'breakpoint added');
  });

  const flip = el('button', {}, 'flip direction');
  flip.addEventListener('click', () => {
    state.curves[index] = toggleDirection(editor);
    render();
  });
  return el('div', { class: 'curve-editor' },
    el('h4', {}, `${editor.actorId}: ${editor.criterion} (${editor.direction})`),
    svg,
    flip,
    el('div', { class: 'messages' }, editor.messages.join('; ')),
  );
}

function renderWeights(): HTMLElement {
  const { sum, ok } = sumIndicator(state.weights);
  const rows = state.weights.entries.map((entry, i) => {
    const slider = el('input', {
      type: 'range', min: '0', max: '1', step: '0.01', value: String(entry.weight),
    });
    slider.addEventListener('input', () => {
      const out = setWeight(state.weights, entry.actorId, entry.criterion,
        Number((slider as HTMLInputElement).value));
      state.weights = out.state;
      render();
    });
    return el('label', { class: 'weight-row', 'data-index': String(i) },
      `${entry.actorId}:${entry.criterion} = ${entry.weight.toFixed(3)} `, slider);
  });
  const normalizeButton = el('button', {}, 'normalize to 1');
  if (!canNormalize(state.weights)) normalizeButton.setAttribute('disabled', '');
  normalizeButton.addEventListener('click', () => {
    const out = normalize(state.weights);
    state.weights = out.state;
    notice(out.blocked ?? 'weights normalized');
  });
  return el('div', { class: 'weights-panel' },
    el('h4', {}, `weights (sum ${sum.toFixed(6)} ${ok ? 'ok' : 'must equal 1'})`),
    ...rows, normalizeButton,
    el('div', { class: 'messages' }, state.weights.messages.join('; ')),
  );
}

function renderComparison(): HTMLElement {
  if (state.session === null) return el('div', {}, 'no runs yet');
  const best = bestRowIndex(state.session);
  const header = el('tr', {},
    ...['run', 'status', 'best Z', 'f values', 'preferences', 'error']
      .map((h) => el('th', {}, h)));
  const rows = state.session.rows.map((row, i) =>
    el('tr', { class: i === best ? 'best' : '' },
      el('td', {}, row.label),
      el('td', {}, row.status),
      el('td', {}, row.bestZ === null ? '—' : String(row.bestZ)),
      el('td', {}, row.fValues === null ? '—' : JSON.stringify(row.fValues)),
      el('td', {}, row.preferences === null ? '—' : JSON.stringify(row.preferences)),
      el('td', {}, row.errorDetail ?? ''),
    ));
  return el('table', { class: 'comparison' }, header, ...rows);
}

function render(): void {
  const root = document.getElementById('app');
  if (root === null) return;
  root.replaceChildren();

  const input = el('textarea', { rows: '6', cols: '80', id: 'problem-input' });
  const loadButton = el('button', {}, 'load problem');
  loadButton.addEventListener('click', () => void loadProblem(
    (document.getElementById('problem-input') as HTMLTextAreaElement).value));
  const runButton = el('button', {}, 'run base');
  runButton.addEventListener('click', () => void runBase());
  const whatifButton = el('button', {}, 'launch what-if');
  whatifButton.addEventListener('click', () => void launchWhatIf());
  if (state.busy || state.problem === null) runButton.setAttribute('disabled', '');
  if (state.busy || state.session === null || !isSubmittable(state.weights)) {
    whatifButton.setAttribute('disabled', '');
  }

  root.append(
    el('h2', {}, 'what-if workbench'),
    el('div', { class: 'notice' }, state.notice),
    input, loadButton,
    el('div', { class: 'editors' }, ...state.curves.map(renderCurveEditor)),
    state.curves.length > 0 ? renderWeights() : el('div'),
    el('div', {}, runButton, whatifButton),
    renderComparison(),
  );
}

render();
