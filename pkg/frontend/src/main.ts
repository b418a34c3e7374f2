// Browser entry point: wires the client, state machine and renderer together.
// All rules live server-side; this file only moves payloads and pixels.

import { ServiceClient } from "./client.js";
import type { Action } from "./protocol.js";
import {
  ClientState,
  cardSelected,
  connectionLost,
  initialState,
  submitAcknowledged,
  submitRejected,
  submitStarted,
  viewReceived,
} from "./state.js";
import { renderApp } from "./render.js";

function requireParam(params: URLSearchParams, name: string): string {
  const value = params.get(name);
  if (!value) {
    throw new Error(`missing ?${name}= query parameter`);
  }
  return value;
}

export async function start(root: HTMLElement): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const base = params.get("server") ?? "";
  const client = new ServiceClient(base);
  let sessionId = params.get("session");
  const seat = Number(params.get("seat") ?? "0");
  if (!sessionId) {
    sessionId = await client.createSession({
      seats: ["human", "general", "general"].map((kind, i) =>
        i === seat ? "human" : kind === "human" ? "general" : kind,
      ),
    });
  }
  let state: ClientState = initialState;

  const redraw = () => {
    root.innerHTML = renderApp(state);
  };

  const refresh = async () => {
    try {
      state = viewReceived(state, await client.fetchView(sessionId!, seat));
    } catch {
      state = connectionLost(state);
    }
    redraw();
  };

  root.addEventListener("click", (raw) => {
    const target = raw.target as HTMLElement;
    const kind = target.getAttribute("data-action");
    if (!kind) return;
    let action: Action;
    if (kind === "call") {
      action = { type: "call", call: target.getAttribute("data-call") ?? "" };
    } else if (kind === "play") {
      const card = target.getAttribute("data-card") ?? "";
      state = cardSelected(state, card);
      action = { type: "play", card };
    } else {
      return;
    }
    void submit(action);
  });

  const submit = async (action: Action) => {
    if (!state.view) return;
    const version = state.view.stateVersion;
    state = submitStarted(state, action);
    redraw(); // optimistic highlight: the control shows as pending
    const result = await client.submitAction(sessionId!, seat, action, version);
    if (result.ok) {
      state = submitAcknowledged(state);
    } else {
      state = submitRejected(state, result.error, result.status);
    }
    await refresh();
  };

  // Long-poll loop: refetch the view whenever the session version moves.
  const pump = async () => {
    let since = 0;
    for (;;) {
      try {
        const batch = await client.pollEvents(sessionId!, since, 20);
        if (batch.stateVersion > since) {
          since = batch.stateVersion;
          await refresh();
        }
      } catch {
        state = connectionLost(state);
        redraw();
        await new Promise((resolve) => setTimeout(resolve, 1000));
      }
    }
  };

  await refresh();
  void pump();
}

declare global {
  interface Window {
    tribridgeStart?: typeof start;
  }
}

if (typeof window !== "undefined" && typeof document !== "undefined") {
  window.tribridgeStart = start;
  const root = document.getElementById("app");
  if (root) {
    void start(root);
  }
}
