"""Trick-by-trick play: follow-suit legality, trump rules, dummy control."""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Mapping, Optional, Protocol, Sequence

from .auction import Contract
from .cards import Card, Deal

DUMMY_SEAT = 3


class PlayError(Exception):
    """Raised for out-of-turn or otherwise impossible play actions."""


class PolicyFault(PlayError):
    """A policy returned a card outside its legal set (identifies seat and trick)."""


@dataclass(frozen=True)
class PlayState:
    """Snapshot of a deal in progress.

    `hands` always holds four entries (seat 3 is the dummy, controlled by the
    declarer).  `current_trick` is the partial trick in play order.
    """

    contract: Contract
    hands: tuple[tuple[Card, ...], ...]
    current_trick: tuple[tuple[int, Card], ...] = ()
    per_seat_tricks: tuple[int, int, int, int] = (0, 0, 0, 0)
    leader: int = 0
    dummy_revealed: bool = False

    @property
    def trump(self) -> Optional[str]:
        return self.contract.trump_suit

    @property
    def seat_to_act(self) -> int:
        if len(self.current_trick) >= 4:
            raise PlayError("trick already complete")
        return (self.leader + len(self.current_trick)) % 4

    @property
    def lead_suit(self) -> Optional[str]:
        return self.current_trick[0][1].suit if self.current_trick else None

    @property
    def tricks_played(self) -> int:
        return sum(self.per_seat_tricks)

    @property
    def declarer_tricks(self) -> int:
        return (self.per_seat_tricks[self.contract.declarer]
                + self.per_seat_tricks[DUMMY_SEAT])

    def controller(self, seat: int) -> int:
        """Who chooses seat's card: the declarer plays the dummy."""
        return self.contract.declarer if seat == DUMMY_SEAT else seat


@dataclass(frozen=True)
class TrickOutcome:
    """Result of a fully played deal."""

    per_seat_tricks: tuple[int, int, int, int]
    declarer_tricks: int
    play_log: tuple[tuple[int, int, Card], ...]  # (trick 1..13, seat, card)

    def log_json(self) -> list[dict]:
        return [{"trick": t, "seat": s, "card": str(c)} for t, s, c in self.play_log]


class PlayPolicy(Protocol):
    """Chooses a card for the seat to act; must return a member of legal_plays."""

    name: str

    def choose(self, state: PlayState, seat: int) -> Card: ...


def legal_plays(state: PlayState, seat: int) -> tuple[Card, ...]:
    """Leading: the whole hand.  Following: lead suit if held, else anything."""
    if seat != state.seat_to_act:
        raise PlayError(f"seat {seat} acted out of turn (seat {state.seat_to_act} to act)")
    hand = state.hands[seat]
    if not state.current_trick:
        return hand
    matching = tuple(c for c in hand if c.suit == state.lead_suit)
    return matching if matching else hand


def winning_play(trick: Sequence[tuple[int, Card]], trump: Optional[str]) -> tuple[int, Card]:
    """Current winner of a (possibly partial) trick under trump supremacy."""
    if not trick:
        raise PlayError("empty trick has no winner")
    lead = trick[0][1].suit

    def key(entry: tuple[int, Card]) -> tuple[int, int]:
        _, card = entry
        if trump is not None and card.suit == trump:
            return (2, card.rank_value)
        if card.suit == lead:
            return (1, card.rank_value)
        return (0, 0)

    return max(trick, key=key)


def trick_winner(trick: Sequence[tuple[int, Card]], trump: Optional[str]) -> int:
    """Seat winning a completed four-card trick."""
    if len(trick) != 4:
        raise PlayError(f"trick has {len(trick)} cards; winner needs all 4")
    return winning_play(trick, trump)[0]


def opening_leader(declarer: int) -> int:
    """First defender clockwise of the declarer leads trick 1 (dummy skipped)."""
    seat = (declarer + 1) % 4
    if seat == DUMMY_SEAT:
        seat = (seat + 1) % 4
    return seat


def initial_state(deal: Deal, contract: Contract) -> PlayState:
    return PlayState(
        contract=contract,
        hands=tuple(h.cards for h in deal.hands),
        leader=opening_leader(contract.declarer),
    )


def apply_play(state: PlayState, seat: int, card: Card) -> PlayState:
    """Play one card, closing the trick (and advancing the leader) on the 4th."""
    allowed = legal_plays(state, seat)
    if card not in allowed:
        if card not in state.hands[seat]:
            raise PlayError(f"seat {seat} does not hold {card}")
        raise PlayError(f"seat {seat} must follow suit {state.lead_suit}; {card} rejected")
    hands = tuple(
        tuple(c for c in h if c != card) if idx == seat else h
        for idx, h in enumerate(state.hands)
    )
    trick = state.current_trick + ((seat, card),)
    revealed = True  # dummy is public once the opening lead has been made
    if len(trick) < 4:
        return replace(state, hands=hands, current_trick=trick, dummy_revealed=revealed)
    winner = trick_winner(trick, state.trump)
    tricks = list(state.per_seat_tricks)
    tricks[winner] += 1
    return replace(state, hands=hands, current_trick=(),
                   per_seat_tricks=tuple(tricks), leader=winner, dummy_revealed=revealed)


def play_deal(deal: Deal, contract: Contract,
              policies: Mapping[int, PlayPolicy]) -> TrickOutcome:
    """Run all 13 tricks; the declarer's policy also chooses the dummy's cards.

    Raises PolicyFault naming the seat and trick index if a policy ever
    returns a card outside legal_plays.
    """
    for seat in (0, 1, 2):
        if seat not in policies:
            raise PlayError(f"no play policy supplied for seat {seat}")
    state = initial_state(deal, contract)
    log: list[tuple[int, int, Card]] = []
    for trick_no in range(1, 14):
        for _ in range(4):
            seat = state.seat_to_act
            policy = policies[state.controller(seat)]
            card = policy.choose(state, seat)
            if card not in legal_plays(state, seat):
                raise PolicyFault(
                    f"policy {policy.name!r} for seat {seat} returned illegal "
                    f"{card} on trick {trick_no}")
            state = apply_play(state, seat, card)
            log.append((trick_no, seat, card))
    return TrickOutcome(
        per_seat_tricks=state.per_seat_tricks,
        declarer_tricks=(state.per_seat_tricks[contract.declarer]
                         + state.per_seat_tricks[DUMMY_SEAT]),
        play_log=tuple(log),
    )
