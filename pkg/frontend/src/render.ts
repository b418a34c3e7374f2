// HTML-string renderers.  Pure functions of ClientState: they can only show
// what the SeatView carries, which is the information-hiding guarantee.

import type { Action, DealSettlement, SeatView } from "./protocol.js";
import {
  ClientState,
  enabledCalls,
  enabledCards,
  visibleDummy,
} from "./state.js";

const SUIT_GLYPHS: Record<string, string> = {
  C: "&clubs;",
  D: "&diams;",
  H: "&hearts;",
  S: "&spades;",
};

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderCard(card: string, enabled: boolean, selected = false): string {
  const rank = escapeHtml(card.slice(0, -1));
  const suit = card.slice(-1);
  const glyph = SUIT_GLYPHS[suit] ?? escapeHtml(suit);
  const red = suit === "H" || suit === "D" ? " red" : "";
  const classes = `card${red}${selected ? " selected" : ""}`;
  const attrs = enabled
    ? ` data-action="play" data-card="${escapeHtml(card)}"`
    : " disabled";
  return `<button class="${classes}"${attrs}>${rank}${glyph}</button>`;
}

export function renderHand(state: ClientState): string {
  const view = state.view;
  if (!view) return "";
  const playable = new Set(enabledCards(state));
  const cards = view.hand
    .map((card) =>
      renderCard(card, playable.has(card), state.selectedCard === card),
    )
    .join("");
  return `<section class="hand" data-panel="hand"><h2>Your hand (seat ${view.seat})</h2>${cards}</section>`;
}

export function renderDummy(state: ClientState): string {
  const view = state.view;
  if (!view) return "";
  const dummy = visibleDummy(state);
  if (dummy.length === 0) {
    return `<section class="dummy hidden" data-panel="dummy"><h2>Partner hand</h2><p>concealed until the opening lead</p></section>`;
  }
  const playable = new Set(enabledCards(state));
  const declarerControlsDummy = view.legalActions.some(
    (a) => a.type === "play" && a.actingFor === view.dummySeat,
  );
  const cards = dummy
    .map((card) => renderCard(card, declarerControlsDummy && playable.has(card)))
    .join("");
  return `<section class="dummy" data-panel="dummy"><h2>Partner hand (seat ${view.dummySeat})</h2>${cards}</section>`;
}

export function renderBidding(state: ClientState): string {
  const view = state.view;
  if (!view || !view.auction) return "";
  const history = view.auction.history
    .map((h) => `<li>seat ${h.seat}: ${escapeHtml(h.call)}</li>`)
    .join("");
  const callable = new Set(enabledCalls(state));
  const buttons =
    view.phase === "auction"
      ? allCallButtons(view, callable)
      : "";
  return `<section class="bidding" data-panel="bidding">
    <h2>Auction</h2>
    <ol class="auction-history">${history}</ol>
    <div class="call-buttons">${buttons}</div>
  </section>`;
}

function allCallButtons(view: SeatView, callable: Set<string>): string {
  // Render only the server-sent legal calls: the opener simply has no PASS
  // button because the service never offers one.
  const order = (call: string): number => {
    if (call === "PASS") return 1000;
    if (call === "X") return 1001;
    if (call === "XX") return 1002;
    const denoms = ["C", "D", "H", "S", "NT"];
    return Number(call[0]) * 5 + denoms.indexOf(call.slice(1));
  };
  return [...callable]
    .sort((a, b) => order(a) - order(b))
    .map(
      (call) =>
        `<button class="call" data-action="call" data-call="${escapeHtml(call)}">${escapeHtml(call)}</button>`,
    )
    .join("");
}

export function renderTrick(state: ClientState): string {
  const view = state.view;
  if (!view) return "";
  const entries = view.trick
    .map((t) => `<div class="played">seat ${t.seat}: ${escapeHtml(t.card)}</div>`)
    .join("");
  const contract = view.contract
    ? `<p class="contract">contract ${view.contract.level}${escapeHtml(view.contract.denomination)} by seat ${view.contract.declarer} (${escapeHtml(view.contract.doubling)})</p>`
    : "";
  const tricks = view.perSeatTricks
    ? `<p class="tricks">tricks ${view.perSeatTricks.join(" / ")}</p>`
    : "";
  return `<section class="trick" data-panel="trick"><h2>Current trick</h2>${contract}${entries}${tricks}</section>`;
}

export function renderScoreboard(state: ClientState): string {
  const view = state.view;
  if (!view) return "";
  const schemes = Object.keys(view.scores);
  const header = schemes.map((s) => `<th>${escapeHtml(s)}</th>`).join("");
  const rows = [0, 1, 2]
    .map((seat) => {
      const cells = schemes
        .map((s) => `<td>${view.scores[s]?.[seat] ?? 0}</td>`)
        .join("");
      const label = seat === view.seat ? `seat ${seat} (you)` : `seat ${seat}`;
      return `<tr><td>${label}</td>${cells}</tr>`;
    })
    .join("");
  return `<section class="scoreboard" data-panel="scoreboard">
    <h2>Scores</h2>
    <table><thead><tr><th></th>${header}</tr></thead><tbody>${rows}</tbody></table>
  </section>`;
}

export function renderSettlement(settlement: DealSettlement | null): string {
  if (!settlement) return "";
  const blocks = Object.entries(settlement.settlements)
    .map(([scheme, s]) => {
      const b = s.breakdown;
      return `<div class="scheme-settlement">
        <h3>${escapeHtml(scheme)}</h3>
        <ul>
          <li>trick points: ${b.trickPoints}</li>
          <li>overtrick points: ${b.overtrickPoints}</li>
          <li>insult: ${b.insult}</li>
          <li>slam bonus: ${b.slamBonus}</li>
          <li>honors: ${b.honors}</li>
          <li>penalties: ${b.penalties}</li>
        </ul>
        <p>deltas: ${s.perSeatDelta.join(" / ")}</p>
      </div>`;
    })
    .join("");
  return `<section class="settlement" data-panel="settlement">
    <h2>Last deal: ${settlement.declarerTricks} declarer tricks</h2>${blocks}
  </section>`;
}

export function renderStatus(state: ClientState): string {
  const bits: string[] = [`connection: ${state.connection}`];
  if (state.pendingAction) bits.push("submitting&hellip;");
  if (state.lastError) {
    bits.push(
      `rejected (${escapeHtml(state.lastError.rule)}): ${escapeHtml(state.lastError.message)}`,
    );
  }
  if (state.staleRetry) bits.push("view was stale; refreshed, please retry");
  return `<header class="status" data-panel="status">${bits.join(" &middot; ")}</header>`;
}

export function renderApp(state: ClientState): string {
  if (!state.view) {
    return `${renderStatus(state)}<main><p>waiting for the table&hellip;</p></main>`;
  }
  return [
    renderStatus(state),
    "<main>",
    renderScoreboard(state),
    renderBidding(state),
    renderTrick(state),
    renderDummy(state),
    renderHand(state),
    renderSettlement(state.view.lastSettlement),
    "</main>",
  ].join("");
}
