// Scripted round trip against the real Python service: create a session with
// two bots, run the auction and all 13 tricks from the browser-client code,
// and check the dual-scheme settlement arrives.  Along the way, fire known-bad
// submissions and require a named rule on every rejection, and verify no
// payload ever carries a concealed hand.

import { spawn, type ChildProcess } from "node:child_process";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ServiceClient } from "../src/client.js";
import type { Action, SeatView } from "../src/protocol.js";
import { initialState, viewReceived, enabledCalls, enabledCards } from "../src/state.js";

const PORT = 8466;
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;

async function waitForServer(): Promise<void> {
  for (let attempt = 0; attempt < 100; attempt++) {
    try {
      const response = await fetch(`${BASE}/sessions/nope`);
      if (response.status === 404) return;
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 150));
  }
  throw new Error("service did not come up");
}

beforeAll(async () => {
  server = spawn("python3", ["-m", "tribridge.cli", "serve", "--port", String(PORT)], {
    cwd: "..",
    stdio: "ignore",
  });
  await waitForServer();
}, 30_000);

afterAll(() => {
  server?.kill();
});

const ALLOWED_VIEW_KEYS = new Set([
  "sessionId", "stateVersion", "seat", "phase", "dealIndex", "opener",
  "seats", "scores", "lastSettlement", "legalActions", "dummySeat",
  "hand", "auction", "dummy", "trick", "contract", "perSeatTricks",
  "playLog", "finished",
]);

function assertNoConcealedCards(view: SeatView, ownStart: Set<string>): void {
  for (const key of Object.keys(view)) {
    expect(ALLOWED_VIEW_KEYS.has(key), `unexpected view field ${key}`).toBe(true);
  }
  const played = new Set<string>();
  for (const entry of view.playLog ?? []) played.add(entry.card);
  for (const entry of view.trick) played.add(entry.card);
  const dummy = new Set(view.dummy ?? []);
  for (const card of view.hand) {
    expect(ownStart.has(card), `hand grew a foreign card ${card}`).toBe(true);
  }
  for (const action of view.legalActions) {
    if (action.type === "play") {
      const visible = ownStart.has(action.card) || dummy.has(action.card) ||
        played.has(action.card);
      expect(visible, `playable card ${action.card} is not visible`).toBe(true);
    }
  }
}

describe("live-play round trip", () => {
  it("completes auction, 13 tricks and settlement against two bots", async () => {
    const client = new ServiceClient(BASE);
    const sessionId = await client.createSession({
      seats: ["human", "general", "general"],
      seed: 424242,
      maxDeals: 1,
    });

    const first = await client.fetchView(sessionId, 0);
    const ownStart = new Set(first.hand);
    expect(first.hand).toHaveLength(13);

    const rejections: { rule: string; status: number }[] = [];

    // known-bad submissions: every rejection must carry a rule name
    const bad: [number, Action, number | undefined][] = [
      [0, { type: "play", card: "AS" }, undefined], // wrong phase
      [1, { type: "call", call: "PASS" }, undefined], // bot seat
      [0, { type: "call", call: "8NT" }, undefined], // malformed call
      [0, { type: "call", call: "1C" }, 999_999], // stale version
    ];
    for (const [seat, action, version] of bad) {
      const result = await client.submitAction(sessionId, seat, action, version);
      expect(result.ok).toBe(false);
      if (!result.ok) {
        expect(result.error.rule).toBeTruthy();
        rejections.push({ rule: result.error.rule, status: result.status });
      }
    }
    expect(new Set(rejections.map((r) => r.rule)).size).toBeGreaterThanOrEqual(3);

    // drive the deal: always take the first legal action the server offers
    let settled: SeatView | null = null;
    let playActions = 0;
    let sawDummyAfterLead = false;
    for (let step = 0; step < 400; step++) {
      const view = await client.fetchView(sessionId, 0);
      assertNoConcealedCards(view, ownStart);
      const state = viewReceived(initialState, view);
      if (view.phase === "finished") {
        settled = view;
        break;
      }
      if ((view.playLog?.length ?? 0) > 0) {
        expect(view.dummy, "dummy must be public after the lead").not.toBeNull();
        sawDummyAfterLead = true;
      }
      const action = view.legalActions[0];
      if (!action) continue;
      // the reducer agrees these are the only enabled affordances
      if (action.type === "call") {
        expect(enabledCalls(state)).toContain(action.call);
      } else {
        expect(enabledCards(state)).toContain(action.card);
        playActions += 1;
      }
      const result = await client.submitAction(sessionId, 0, action, view.stateVersion);
      expect(result.ok, JSON.stringify(result)).toBe(true);
    }

    expect(settled, "session should finish after maxDeals=1").not.toBeNull();
    expect(sawDummyAfterLead).toBe(true);
    expect(playActions).toBeGreaterThanOrEqual(13); // own hand, plus dummy when declaring
    const settlement = settled!.lastSettlement!;
    expect(settlement.perSeatTricks.reduce((a, b) => a + b, 0)).toBe(13);
    expect(Object.keys(settlement.settlements).sort()).toEqual(["new", "previous"]);
    for (const scheme of Object.values(settlement.settlements)) {
      for (const component of Object.values(scheme.breakdown)) {
        expect(component).toBeGreaterThanOrEqual(0);
      }
    }

    // the event stream replays the whole deal in order
    const batch = await client.pollEvents(sessionId, 0, 1);
    const versions = batch.events.map((e) => e.stateVersion);
    expect([...versions].sort((a, b) => a - b)).toEqual(versions);
    const types = new Set(batch.events.map((e) => e.type));
    expect(types.has("settlement")).toBe(true);
  }, 60_000);

  it("legal call set for the opener has 35 bids and no pass", async () => {
    const client = new ServiceClient(BASE);
    const sessionId = await client.createSession({
      seats: ["human", "general", "general"],
      seed: 7,
    });
    const view = await client.fetchView(sessionId, 0);
    if (view.opener === 0 && view.phase === "auction") {
      const calls = view.legalActions
        .filter((a): a is Extract<Action, { type: "call" }> => a.type === "call")
        .map((a) => a.call);
      expect(calls).toHaveLength(35);
      expect(calls).not.toContain("PASS");
    }
  }, 20_000);
});
