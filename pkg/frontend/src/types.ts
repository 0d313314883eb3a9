/** Wire types for the session service. */

export type LabelValue = 'match' | 'nonmatch';

export interface PairQuestion {
  index: number;
  a: string;
  b: string;
  p: number;
}

export interface TraceEntry {
  pair: [string, string];
  outcome: 'asked' | 'deduced';
  label: LabelValue;
}

export interface SummaryPayload {
  m: number;
  asked: number;
  deduced: number;
  clusters: string[][];
}

export interface NextPayload {
  status: 'needs_label' | 'done';
  asked: number;
  deduced: number;
  deduced_since_last: TraceEntry[];
  pair?: PairQuestion;
  summary?: SummaryPayload;
}

export interface CreatedPayload {
  id: string;
  m: number;
  strategy: string;
  order: number[];
  next: NextPayload;
}

export interface AnswerPayload {
  accepted: boolean;
  asked: number;
  deduced: number;
  clusters: string[][];
  deduced_since_last: TraceEntry[];
  next: NextPayload;
}

export interface StatePayload {
  m: number;
  cursor: number;
  done: boolean;
  asked: number;
  deduced: number;
  clusters: string[][];
  nonmatch_edges: [string, string][];
  trace: TraceEntry[];
}

/** Error surfaced by the API client: HTTP status plus the service's
 * machine-readable reason when one is present (409 bodies). */
export interface ApiFailure {
  status: number;
  reason: string | null;
  message: string;
}
