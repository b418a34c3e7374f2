"""Turn-based session service: humans occupy seats against policy bots.

State advances only through legal engine actions.  Every mutation bumps a
session stateVersion; clients submit their last-seen version for optimistic
concurrency and stream {type, sessionId, seat, payload, stateVersion} event
messages via long-poll.
"""
from __future__ import annotations

import secrets
import threading
from dataclasses import dataclass
from typing import Any, Mapping, Optional

from . import auction as auction_mod
from . import play as play_mod
from .auction import AuctionState, Call, contract_of
from .cards import Card, deal_random, derive_seed, parse_card
from .play import DUMMY_SEAT, PlayPolicy, initial_state, legal_plays
from .policies import BidPolicy, parse_seat_spec
from .scoring import Scheme, honors_for_deal, score_deal

EVENT_BACKLOG = 512  # events older than this are dropped from the replay buffer


class SessionError(Exception):
    """Protocol-level rejection carrying a stable rule name."""

    def __init__(self, rule: str, message: str, status: int = 400):
        super().__init__(message)
        self.rule = rule
        self.message = message
        self.status = status


@dataclass(frozen=True)
class SeatAssignment:
    kind: str  # "human" or "bot"
    bid: Optional[BidPolicy]
    play: Optional[PlayPolicy]

    @property
    def label(self) -> str:
        if self.kind == "human":
            return "human"
        return f"bot({self.bid.name}+{self.play.name})"


def _parse_seat(spec: str) -> SeatAssignment:
    token = spec.strip().lower()
    if token == "human":
        return SeatAssignment(kind="human", bid=None, play=None)
    try:
        bid, play = parse_seat_spec(token)
    except Exception as exc:
        raise SessionError("bad-seat-spec", f"seat spec {spec!r} rejected: {exc}") from exc
    return SeatAssignment(kind="bot", bid=bid, play=play)


class Session:
    """One live match; all mutation happens under the session lock."""

    def __init__(self, config: Mapping[str, Any]):
        seats = config.get("seats")
        if not isinstance(seats, (list, tuple)) or len(seats) != 3:
            raise SessionError("bad-config", "config.seats must list exactly 3 seat specs")
        self.seats = tuple(_parse_seat(s) for s in seats)
        if not any(s.kind == "human" for s in self.seats):
            raise SessionError("bad-config",
                               "at least one seat must be human (use the harness "
                               "for bot-only runs)")
        seed = config.get("seed")
        self.seed = int(seed) if seed is not None else secrets.randbits(63)
        max_deals = config.get("maxDeals")
        self.max_deals = int(max_deals) if max_deals is not None else None
        self.id = config.get("id") or secrets.token_hex(8)
        self.lock = threading.RLock()
        self.changed = threading.Condition(self.lock)
        self.version = 0
        self.events: list[dict] = []
        self.deal_index = 0
        self.phase = "auction"
        self.cumulative = {Scheme.PREVIOUS: [0.0, 0.0, 0.0],
                           Scheme.NEW: [0.0, 0.0, 0.0]}
        self.last_settlement: Optional[dict] = None
        self.finished = False
        self._start_deal()
        with self.lock:
            self._advance_bots()

    # --- deal lifecycle -------------------------------------------------------

    def _start_deal(self) -> None:
        self.deal = deal_random(derive_seed(self.seed, self.deal_index))
        self.opener = self.deal_index % 3
        self.auction = AuctionState.new(opener=self.opener)
        self.contract = None
        self.play_state = None
        self.play_log: list[dict] = []
        self.phase = "auction"
        self._emit("deal-started", seat=None,
                   payload={"dealIndex": self.deal_index, "opener": self.opener})

    def _emit(self, type_: str, seat: Optional[int], payload: dict) -> None:
        self.version += 1
        self.events.append({
            "type": type_, "sessionId": self.id, "seat": seat,
            "payload": payload, "stateVersion": self.version,
        })
        if len(self.events) > EVENT_BACKLOG:
            del self.events[: len(self.events) - EVENT_BACKLOG]

    def _notify(self) -> None:
        self.changed.notify_all()

    # --- turn machinery ---------------------------------------------------------

    def _acting_controller(self) -> Optional[int]:
        """Seat that must submit the next action, or None when finished."""
        if self.finished:
            return None
        if self.phase == "auction":
            return self.auction.seat_to_act
        return self.play_state.controller(self.play_state.seat_to_act)

    def _advance_bots(self) -> None:
        while not self.finished:
            controller = self._acting_controller()
            if controller is None or self.seats[controller].kind != "bot":
                break
            if self.phase == "auction":
                seat = self.auction.seat_to_act
                call = self.seats[seat].bid.choose(self.auction, self.deal.hands[seat], seat)
                self._apply_call(seat, call)
            else:
                seat = self.play_state.seat_to_act
                card = self.seats[controller].play.choose(self.play_state, seat)
                self._apply_card(seat, card)

    def _apply_call(self, seat: int, call: Call) -> None:
        try:
            self.auction = auction_mod.apply_call(self.auction, seat, call)
        except auction_mod.AuctionError as exc:
            raise SessionError("auction-legality", str(exc)) from exc
        self._emit("call", seat=seat, payload={"call": str(call)})
        if self.auction.is_complete:
            self.contract = contract_of(self.auction)
            self.play_state = initial_state(self.deal, self.contract)
            self.phase = "play"
            self._emit("contract", seat=self.contract.declarer, payload={
                "declarer": self.contract.declarer,
                "level": self.contract.level,
                "denomination": self.contract.denom.symbol,
                "doubling": self.contract.doubling.name.lower(),
            })

    def _apply_card(self, seat: int, card: Card) -> None:
        state = self.play_state
        trick_no = state.tricks_played + 1
        try:
            self.play_state = play_mod.apply_play(state, seat, card)
        except play_mod.PlayError as exc:
            raise SessionError("play-legality", str(exc)) from exc
        self.play_log.append({"trick": trick_no, "seat": seat, "card": str(card)})
        payload = {"trick": trick_no, "seat": seat, "card": str(card)}
        if not self.play_state.current_trick:
            payload["trickWinner"] = self.play_state.leader
        self._emit("play", seat=seat, payload=payload)
        if self.play_state.tricks_played == 13:
            self._settle_deal()

    def _settle_deal(self) -> None:
        tricks = self.play_state.per_seat_tricks
        declarer_tricks = (tricks[self.contract.declarer] + tricks[DUMMY_SEAT])
        honors = honors_for_deal(self.deal, self.contract)
        settlements = {}
        for scheme in (Scheme.PREVIOUS, Scheme.NEW):
            settlement = score_deal(self.contract, declarer_tricks, honors, scheme)
            for i, delta in enumerate(settlement.per_seat):
                self.cumulative[scheme][i] += delta
            settlements[scheme.value] = settlement.to_json()
        self.last_settlement = {
            "dealIndex": self.deal_index,
            "declarerTricks": declarer_tricks,
            "perSeatTricks": list(tricks),
            "settlements": settlements,
        }
        self._emit("settlement", seat=None, payload=self.last_settlement)
        self.deal_index += 1
        if self.max_deals is not None and self.deal_index >= self.max_deals:
            self.finished = True
            self.phase = "finished"
            self._emit("session-finished", seat=None,
                       payload={"dealsPlayed": self.deal_index})
        else:
            self._start_deal()

    # --- public operations ---------------------------------------------------------

    def apply_action(self, seat: int, action: Mapping[str, Any],
                     expected_version: Optional[int]) -> dict:
        with self.lock:
            if seat not in (0, 1, 2):
                raise SessionError("bad-seat", f"seat {seat} outside 0..2", status=404)
            if self.seats[seat].kind != "human":
                raise SessionError("not-a-human-seat",
                                   f"seat {seat} is a bot; only humans submit actions")
            if expected_version is not None and expected_version != self.version:
                raise SessionError(
                    "state-version-conflict",
                    f"submitted for version {expected_version} but session is at "
                    f"{self.version}; refetch and retry", status=409)
            if self.finished:
                raise SessionError("session-finished", "the session has ended")
            controller = self._acting_controller()
            if controller != seat:
                raise SessionError("not-your-turn",
                                   f"seat {seat} does not hold the turn")
            kind = action.get("type")
            if self.phase == "auction":
                if kind != "call":
                    raise SessionError("wrong-phase",
                                       "auction in progress; expected a call action")
                try:
                    call = Call.parse(str(action.get("call")))
                except auction_mod.AuctionError as exc:
                    raise SessionError("bad-call", str(exc)) from exc
                self._apply_call(seat, call)
            elif self.phase == "play":
                if kind != "play":
                    raise SessionError("wrong-phase",
                                       "play in progress; expected a play action")
                try:
                    card = parse_card(str(action.get("card")))
                except Exception as exc:
                    raise SessionError("bad-card", str(exc)) from exc
                acting_seat = self.play_state.seat_to_act
                self._apply_card(acting_seat, card)
            else:
                raise SessionError("session-finished", "the session has ended")
            self._advance_bots()
            self._notify()
            return self.public_state()

    def public_state(self) -> dict:
        return {
            "sessionId": self.id,
            "stateVersion": self.version,
            "phase": self.phase,
            "dealIndex": self.deal_index,
            "finished": self.finished,
        }

    def view_for_seat(self, seat: int) -> dict:
        with self.lock:
            if seat not in (0, 1, 2):
                raise SessionError("bad-seat", f"seat {seat} outside 0..2", status=404)
            view: dict[str, Any] = {
                "sessionId": self.id,
                "stateVersion": self.version,
                "seat": seat,
                "phase": self.phase,
                "dealIndex": self.deal_index,
                "opener": self.opener,
                "seats": [s.label for s in self.seats],
                "scores": {scheme.value: list(vals)
                           for scheme, vals in self.cumulative.items()},
                "lastSettlement": self.last_settlement,
                "legalActions": [],
                "dummySeat": DUMMY_SEAT,
            }
            if self.finished:
                view["hand"] = []
                view["dummy"] = None
                view["auction"] = None
                view["trick"] = []
                return view
            view["hand"] = ([str(c) for c in self.play_state.hands[seat]]
                            if self.phase == "play"
                            else [str(c) for c in self.deal.hands[seat]])
            view["auction"] = {
                "history": [{"seat": s, "call": str(c)} for s, c in self.auction.history],
                "highBid": str(self.auction.high_bid) if self.auction.high_bid else None,
                "doubling": self.auction.doubling.name.lower(),
                "complete": self.auction.is_complete,
            }
            if self.phase == "auction":
                view["dummy"] = None
                view["trick"] = []
                view["contract"] = None
                if self.auction.seat_to_act == seat and self.seats[seat].kind == "human":
                    calls = auction_mod.legal_calls(self.auction, seat)
                    view["legalActions"] = [
                        {"type": "call", "call": str(c)}
                        for c in sorted(calls, key=lambda c: (c.kind.value,
                                                              c.bid_key if c.is_bid else (0, 0)))
                    ]
            else:
                state = self.play_state
                view["contract"] = {
                    "declarer": self.contract.declarer,
                    "level": self.contract.level,
                    "denomination": self.contract.denom.symbol,
                    "doubling": self.contract.doubling.name.lower(),
                }
                # the dummy hand is public only once the opening lead is down
                view["dummy"] = ([str(c) for c in state.hands[DUMMY_SEAT]]
                                 if state.dummy_revealed else None)
                view["trick"] = [{"seat": s, "card": str(c)} for s, c in state.current_trick]
                view["perSeatTricks"] = list(state.per_seat_tricks)
                view["playLog"] = list(self.play_log)
                acting = state.seat_to_act
                if state.controller(acting) == seat and self.seats[seat].kind == "human":
                    view["legalActions"] = [
                        {"type": "play", "card": str(c), "actingFor": acting}
                        for c in legal_plays(state, acting)
                    ]
            return view

    def events_since(self, since: int, timeout: float = 25.0) -> dict:
        with self.changed:
            if self.version <= since:
                self.changed.wait(timeout=timeout)
            events = [e for e in self.events if e["stateVersion"] > since]
            return {"stateVersion": self.version, "events": events}


class SessionManager:
    """Registry of live sessions."""

    def __init__(self):
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def create(self, config: Mapping[str, Any]) -> Session:
        session = Session(config)
        with self._lock:
            self._sessions[session.id] = session
        return session

    def get(self, session_id: str) -> Session:
        with self._lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise SessionError("unknown-session", f"no session {session_id!r}", status=404)
        return session


def create_app(manager: Optional[SessionManager] = None,
               static_dir: Optional[str] = None):
    """FastAPI app exposing create/view/act/stream for live sessions.

    When static_dir points at a built web client, it is served under /app.
    """
    import os

    from fastapi import FastAPI, Request
    from fastapi.responses import JSONResponse

    manager = manager or SessionManager()
    app = FastAPI(title="tribridge live play", version="0.1.0")
    app.state.manager = manager

    if static_dir and os.path.isdir(static_dir):
        from fastapi.staticfiles import StaticFiles
        app.mount("/app", StaticFiles(directory=static_dir, html=True), name="app")

    @app.exception_handler(SessionError)
    async def _session_error(_request: Request, exc: SessionError):
        return JSONResponse(status_code=exc.status,
                            content={"error": {"rule": exc.rule, "message": exc.message}})

    @app.post("/sessions")
    async def create_session(config: dict):
        session = manager.create(config)
        return session.public_state()

    @app.get("/sessions/{session_id}")
    async def session_state(session_id: str):
        return manager.get(session_id).public_state()

    @app.get("/sessions/{session_id}/seats/{seat}")
    async def seat_view(session_id: str, seat: int):
        return manager.get(session_id).view_for_seat(seat)

    @app.post("/sessions/{session_id}/seats/{seat}/actions")
    async def submit_action(session_id: str, seat: int, body: dict):
        import anyio
        session = manager.get(session_id)
        action = body.get("action") or {}
        expected = body.get("stateVersion")
        return await anyio.to_thread.run_sync(
            lambda: session.apply_action(seat, action, expected))

    @app.get("/sessions/{session_id}/events")
    async def stream_events(session_id: str, since: int = 0, timeout: float = 25.0):
        import anyio
        session = manager.get(session_id)
        return await anyio.to_thread.run_sync(
            lambda: session.events_since(since, min(timeout, 60.0)))

    return app
