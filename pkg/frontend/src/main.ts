/** Page wiring: start a session, answer questions, watch deductions.
 * Every state transition goes through the documented API calls; the view
 * is rebuilt from GET /state + GET /next after a refresh. */

import { SessionApi, isApiFailure } from './api.js';
import {
  applyAnswer,
  applyFailure,
  applyNonmatchEdges,
  beginAnswer,
  fromCreated,
  fromSnapshot,
  traceDownload,
} from './state.js';
import type { SessionView } from './state.js';
import {
  renderClusters,
  renderCounters,
  renderFeed,
  renderNotice,
  renderQuestion,
  renderSummary,
} from './render.js';
import type { LabelValue } from './types.js';

const api = new SessionApi();
const STORAGE_KEY = 'eolo-session';

let view: SessionView | null = null;

const $ = (id: string) => document.getElementById(id) as HTMLElement;

function redraw(): void {
  if (!view) {
    $('setup-panel').hidden = false;
    $('session-panel').hidden = true;
    $('summary-panel').hidden = true;
    return;
  }
  $('setup-panel').hidden = true;
  $('session-panel').hidden = false;
  $('session-strategy').textContent =
      `strategy ${view.strategy}, ${view.m} pairs`;
  renderCounters($('counters'), view);
  renderQuestion($('question'), view, submitAnswer);
  renderFeed($('feed') as HTMLElement, view);
  renderClusters($('clusters'),
                 $('cluster-edges') as unknown as SVGSVGElement, view);
  renderNotice($('notice'), view);
  renderSummary($('summary-panel'), view, downloadTrace, resetToSetup);
}

function setSetupError(message: string): void {
  const box = $('setup-error');
  box.textContent = message;
  box.hidden = message === '';
}

async function startSession(): Promise<void> {
  setSetupError('');
  const strategySelect = $('strategy') as HTMLSelectElement;
  let strategy = strategySelect.value;
  let seed: number | undefined;
  if (strategy === 'random') {
    seed = Number((($('seed') as HTMLInputElement).value || '0'));
    strategy = `random:${seed}`;
  }
  let instance: string | object = 'triangle';
  const upload = $('instance-file') as HTMLInputElement;
  if (($('instance') as HTMLSelectElement).value === 'upload') {
    const file = upload.files?.[0];
    if (!file) {
      setSetupError('choose an instance file first');
      return;
    }
    try {
      instance = JSON.parse(await file.text());
    } catch {
      setSetupError('that file is not valid JSON');
      return;
    }
  }
  try {
    const created = await api.createSession(instance, strategy);
    view = fromCreated(created);
    sessionStorage.setItem(STORAGE_KEY, JSON.stringify({
      id: created.id, strategy: created.strategy,
    }));
    await refreshEdges();
  } catch (err) {
    setSetupError(isApiFailure(err) ? err.message : String(err));
    return;
  }
  redraw();
}

async function submitAnswer(label: LabelValue): Promise<void> {
  if (!view) {
    return;
  }
  const started = beginAnswer(view);
  if (!started || !started.pending) {
    return;   // double click or nothing pending
  }
  view = started;
  redraw();
  const pending = started.pending;
  try {
    const resp = await api.answer(
        view.sessionId, [pending.a, pending.b], label);
    view = applyAnswer(view, pending, label, resp);
    await refreshEdges();
  } catch (err) {
    if (isApiFailure(err)) {
      view = applyFailure(view, err);
    } else {
      view = applyFailure(view, {
        status: 0, reason: null, message: String(err),
      });
    }
  }
  redraw();
}

/** nonmatch edges only appear in /state; fetch them after each change */
async function refreshEdges(): Promise<void> {
  if (!view) {
    return;
  }
  const state = await api.state(view.sessionId);
  view = applyNonmatchEdges(view, state);
}

async function downloadTrace(): Promise<void> {
  if (!view) {
    return;
  }
  const state = await api.state(view.sessionId);
  const blob = new Blob([traceDownload(state)], { type: 'application/json' });
  const url = URL.createObjectURL(blob);
  const link = document.createElement('a');
  link.href = url;
  link.download = `trace-${view.sessionId.slice(0, 8)}.json`;
  link.click();
  URL.revokeObjectURL(url);
}

function resetToSetup(): void {
  sessionStorage.removeItem(STORAGE_KEY);
  view = null;
  redraw();
}

/** Refreshing the page reproduces the identical view from the service. */
async function resume(): Promise<void> {
  const stored = sessionStorage.getItem(STORAGE_KEY);
  if (!stored) {
    return;
  }
  try {
    const { id, strategy } = JSON.parse(stored);
    const [state, next] = await Promise.all([api.state(id), api.next(id)]);
    view = fromSnapshot(id, strategy, state, next);
  } catch {
    sessionStorage.removeItem(STORAGE_KEY);
    view = null;
  }
}

function wireSetup(): void {
  $('start').addEventListener('click', () => void startSession());
  ($('instance') as HTMLSelectElement).addEventListener('change', () => {
    $('upload-row').hidden =
        ($('instance') as HTMLSelectElement).value !== 'upload';
  });
  ($('strategy') as HTMLSelectElement).addEventListener('change', () => {
    $('seed-row').hidden = ($('strategy') as HTMLSelectElement).value !== 'random';
  });
  $('abandon').addEventListener('click', resetToSetup);
}

void (async () => {
  wireSetup();
  await resume();
  redraw();
})();
