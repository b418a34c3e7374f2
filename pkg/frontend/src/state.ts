// Client state machine.  Pure functions: every transition takes a state and
// returns the next one, so the whole UI flow is unit-testable without a DOM.

import type { Action, RuleError, SeatView } from "./protocol.js";
import { isPlayAction } from "./protocol.js";

export type ConnectionStatus = "connecting" | "live" | "reconnecting";

export interface ClientState {
  view: SeatView | null;
  selectedCard: string | null;
  pendingAction: Action | null;
  connection: ConnectionStatus;
  lastError: RuleError | null;
  staleRetry: boolean; // server said our stateVersion was stale: refresh + retry
}

export const initialState: ClientState = {
  view: null,
  selectedCard: null,
  pendingAction: null,
  connection: "connecting",
  lastError: null,
  staleRetry: false,
};

export function viewReceived(state: ClientState, view: SeatView): ClientState {
  const selected =
    state.selectedCard !== null && view.hand.includes(state.selectedCard)
      ? state.selectedCard
      : null;
  return {
    ...state,
    view,
    selectedCard: selected,
    connection: "live",
    staleRetry: false,
  };
}

export function connectionLost(state: ClientState): ClientState {
  return { ...state, connection: "reconnecting", pendingAction: null };
}

export function cardSelected(state: ClientState, card: string): ClientState {
  if (!state.view || !isEnabled(state, { type: "play", card })) {
    return state;
  }
  return { ...state, selectedCard: card };
}

export function submitStarted(state: ClientState, action: Action): ClientState {
  return { ...state, pendingAction: action, lastError: null };
}

export function submitAcknowledged(state: ClientState): ClientState {
  return { ...state, pendingAction: null, selectedCard: null, lastError: null };
}

export function submitRejected(
  state: ClientState,
  error: RuleError,
  status: number,
): ClientState {
  // rejection restores the prior (non-pending) state and surfaces the rule
  return {
    ...state,
    pendingAction: null,
    selectedCard: null,
    lastError: error,
    staleRetry: status === 409,
  };
}

function sameAction(a: Action, b: Action): boolean {
  if (a.type !== b.type) return false;
  if (a.type === "call" && b.type === "call") return a.call === b.call;
  if (isPlayAction(a) && isPlayAction(b)) return a.card === b.card;
  return false;
}

/** A control is enabled only when its action appears in the server's legal set
 * and nothing is in flight.  The client never computes legality itself. */
export function isEnabled(state: ClientState, action: Action): boolean {
  if (!state.view || state.pendingAction !== null) return false;
  return state.view.legalActions.some((legal) => sameAction(legal, action));
}

export function enabledCalls(state: ClientState): string[] {
  if (!state.view || state.pendingAction !== null) return [];
  return state.view.legalActions
    .filter((a): a is Extract<Action, { type: "call" }> => a.type === "call")
    .map((a) => a.call);
}

export function enabledCards(state: ClientState): string[] {
  if (!state.view || state.pendingAction !== null) return [];
  return state.view.legalActions.filter(isPlayAction).map((a) => a.card);
}

/** Cards to render in the dummy panel; empty before the reveal. */
export function visibleDummy(state: ClientState): string[] {
  return state.view?.dummy ?? [];
}
