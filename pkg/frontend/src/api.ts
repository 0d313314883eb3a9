/** Thin fetch client for the session service (same origin by default). */

import type {
  AnswerPayload,
  ApiFailure,
  CreatedPayload,
  LabelValue,
  NextPayload,
  StatePayload,
} from './types.js';

async function failureFrom(resp: Response): Promise<ApiFailure> {
  let reason: string | null = null;
  let message = `${resp.status} ${resp.statusText}`;
  try {
    const body = await resp.json();
    if (typeof body.reason === 'string') {
      reason = body.reason;
    }
    if (typeof body.detail === 'string') {
      message = body.detail;
    } else if (typeof body.detail === 'object' && body.detail !== null) {
      message = JSON.stringify(body.detail);
    } else if (typeof body.message === 'string') {
      message = body.message;
    }
  } catch {
    // non-JSON error body; keep the status line
  }
  return { status: resp.status, reason, message };
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const resp = await fetch(url, init);
  if (!resp.ok) {
    throw await failureFrom(resp);
  }
  return (await resp.json()) as T;
}

export class SessionApi {
  constructor(private readonly base: string = '') {}

  createSession(instance: string | object, strategy: string,
                seed?: number): Promise<CreatedPayload> {
    const body: Record<string, unknown> = { instance, strategy };
    if (seed !== undefined) {
      body.seed = seed;
    }
    return request<CreatedPayload>(`${this.base}/sessions`, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(body),
    });
  }

  next(sessionId: string): Promise<NextPayload> {
    return request<NextPayload>(`${this.base}/sessions/${sessionId}/next`);
  }

  answer(sessionId: string, pair: [string, string],
         label: LabelValue): Promise<AnswerPayload> {
    return request<AnswerPayload>(`${this.base}/sessions/${sessionId}/answer`, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify({ pair, label }),
    });
  }

  state(sessionId: string): Promise<StatePayload> {
    return request<StatePayload>(`${this.base}/sessions/${sessionId}/state`);
  }
}

export function isApiFailure(err: unknown): err is ApiFailure {
  return typeof err === 'object' && err !== null
    && 'status' in err && 'message' in err;
}
