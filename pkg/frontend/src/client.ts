// Thin HTTP client for the session service: create, view, act, long-poll.

import type { Action, EventBatch, RuleError, SeatView } from "./protocol.js";

export interface SessionConfig {
  seats: string[];
  seed?: number;
  maxDeals?: number;
}

export type SubmitResult =
  | { ok: true; stateVersion: number }
  | { ok: false; status: number; error: RuleError };

export class ServiceClient {
  constructor(private readonly baseUrl: string) {}

  private url(path: string): string {
    return `${this.baseUrl.replace(/\/$/, "")}${path}`;
  }

  async createSession(config: SessionConfig): Promise<string> {
    const response = await fetch(this.url("/sessions"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(config),
    });
    if (!response.ok) {
      const body = await response.json().catch(() => ({}));
      throw new Error(`session rejected: ${JSON.stringify(body)}`);
    }
    const body = (await response.json()) as { sessionId: string };
    return body.sessionId;
  }

  async fetchView(sessionId: string, seat: number): Promise<SeatView> {
    const response = await fetch(this.url(`/sessions/${sessionId}/seats/${seat}`));
    if (!response.ok) {
      throw new Error(`view fetch failed with ${response.status}`);
    }
    return (await response.json()) as SeatView;
  }

  async submitAction(
    sessionId: string,
    seat: number,
    action: Action,
    stateVersion?: number,
  ): Promise<SubmitResult> {
    const response = await fetch(
      this.url(`/sessions/${sessionId}/seats/${seat}/actions`),
      {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ action, stateVersion }),
      },
    );
    const body = await response.json().catch(() => ({}));
    if (response.ok) {
      return { ok: true, stateVersion: (body as { stateVersion: number }).stateVersion };
    }
    const error = (body as { error?: RuleError }).error ?? {
      rule: "unknown",
      message: `status ${response.status}`,
    };
    return { ok: false, status: response.status, error };
  }

  async pollEvents(
    sessionId: string,
    since: number,
    timeoutSeconds = 20,
  ): Promise<EventBatch> {
    const response = await fetch(
      this.url(`/sessions/${sessionId}/events?since=${since}&timeout=${timeoutSeconds}`),
    );
    if (!response.ok) {
      throw new Error(`event poll failed with ${response.status}`);
    }
    return (await response.json()) as EventBatch;
  }
}
