/** Pure view-model: everything the page shows is derived here from
 * service responses, never invented client-side.  Rebuilding the same
 * view after a refresh only needs GET /state + GET /next. */

import type {
  AnswerPayload,
  ApiFailure,
  CreatedPayload,
  LabelValue,
  NextPayload,
  PairQuestion,
  StatePayload,
  TraceEntry,
} from './types.js';

export interface SessionView {
  sessionId: string;
  strategy: string;
  m: number;
  asked: number;
  deduced: number;
  pending: PairQuestion | null;
  done: boolean;
  clusters: string[][];
  nonmatchEdges: [string, string][];
  feed: TraceEntry[];
  /** answer request outstanding; guards double submits */
  inFlight: boolean;
  /** non-destructive warning (e.g. a 409), cleared on the next action */
  notice: string | null;
}

export function remaining(view: SessionView): number {
  return view.m - view.asked - view.deduced;
}

/** The headline readout: questions transitivity answered for free. */
export function savingsText(view: SessionView): string {
  return `saved ${view.deduced} of ${view.m} questions by transitivity`;
}

export function questionText(pending: PairQuestion): string {
  return `Do "${pending.a}" and "${pending.b}" refer to the same entity?`;
}

export function feedLine(entry: TraceEntry): string {
  const verdict = entry.label === 'match' ? 'match' : 'non-match';
  return `(${entry.pair[0]}, ${entry.pair[1]}) ${verdict}`;
}

function fromNext(view: SessionView, next: NextPayload): SessionView {
  return {
    ...view,
    asked: next.asked,
    deduced: next.deduced,
    pending: next.status === 'needs_label' ? next.pair ?? null : null,
    done: next.status === 'done',
    clusters: next.status === 'done' && next.summary
      ? next.summary.clusters
      : view.clusters,
  };
}

export function fromCreated(resp: CreatedPayload): SessionView {
  const base: SessionView = {
    sessionId: resp.id,
    strategy: resp.strategy,
    m: resp.m,
    asked: 0,
    deduced: 0,
    pending: null,
    done: false,
    clusters: [],
    nonmatchEdges: [],
    feed: [],
    inFlight: false,
    notice: null,
  };
  return fromNext(base, resp.next);
}

/** Rebuild after a refresh: the trace is the feed, verbatim. */
export function fromSnapshot(sessionId: string, strategy: string,
                             state: StatePayload,
                             next: NextPayload): SessionView {
  const base: SessionView = {
    sessionId,
    strategy,
    m: state.m,
    asked: state.asked,
    deduced: state.deduced,
    pending: null,
    done: state.done,
    clusters: state.clusters,
    nonmatchEdges: state.nonmatch_edges,
    feed: state.trace,
    inFlight: false,
    notice: null,
  };
  return fromNext(base, next);
}

/** Start an answer submission; null when one is already running or no
 * question is pending (the double-click guard). */
export function beginAnswer(view: SessionView): SessionView | null {
  if (view.inFlight || view.pending === null || view.done) {
    return null;
  }
  return { ...view, inFlight: true, notice: null };
}

export function applyAnswer(view: SessionView, answered: PairQuestion,
                            label: LabelValue,
                            resp: AnswerPayload): SessionView {
  const askedEntry: TraceEntry = {
    pair: [answered.a, answered.b],
    outcome: 'asked',
    label,
  };
  const updated: SessionView = {
    ...view,
    asked: resp.asked,
    deduced: resp.deduced,
    clusters: resp.clusters,
    feed: [...view.feed, askedEntry, ...resp.deduced_since_last],
    inFlight: false,
    notice: null,
  };
  return fromNext(updated, resp.next);
}

export function applyNonmatchEdges(view: SessionView,
                                   state: StatePayload): SessionView {
  return { ...view, nonmatchEdges: state.nonmatch_edges };
}

/** Keep the view usable after a failed call; 409s become warnings. */
export function applyFailure(view: SessionView, failure: ApiFailure): SessionView {
  let notice = failure.message;
  if (failure.reason === 'contradiction') {
    notice = `rejected: ${failure.message} (previous answers already settle this pair)`;
  } else if (failure.reason === 'out_of_turn') {
    notice = `rejected: ${failure.message}`;
  }
  return { ...view, inFlight: false, notice };
}

/** Trace download payload: the service's trace array, pretty-printed. */
export function traceDownload(state: StatePayload): string {
  return JSON.stringify(state.trace, null, 2) + '\n';
}
