"""Bidding and card-play policies: the three single-pass game plans, the
defeat-seeking variant, and the point-count / defensive / attack / bluff bidders."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Protocol, Sequence

from . import analytics
from .auction import (ALL_BIDS, AuctionState, Call, Denomination, Doubling,
                      DOUBLE, PASS, legal_calls)
from .cards import Card, DEFAULT_SCALE, Hand, PointScale, SUITS, hand_points
from .play import DUMMY_SEAT, PlayState, legal_plays, winning_play

DEFAULT_THRESHOLDS = (20, 25, 30)

HONOR_RANK_SET = frozenset("AKQJT")


class PolicyError(Exception):
    pass


class BidPolicy(Protocol):
    """Chooses a call for the seat to act; must return a member of legal_calls."""

    name: str

    def choose(self, state: AuctionState, hand: Hand, seat: int) -> Call: ...


# --- instrumentation ---------------------------------------------------------
# Counts how many hand cards the play policies look at, so tests can verify the
# single-pass (linear in hand size) behaviour of every selection rule.

class InspectionCounter:
    __slots__ = ("enabled", "count")

    def __init__(self):
        self.enabled = False
        self.count = 0

    def reset(self):
        self.count = 0


inspections = InspectionCounter()


def _scan(cards: Sequence[Card]) -> Sequence[Card]:
    if inspections.enabled:
        inspections.count += len(cards)
    return cards


# --- card selection helpers --------------------------------------------------

def _rank_key(card: Card, trump: Optional[str]) -> tuple[int, int, int]:
    # Rank first; ties across suits break by trump-first then C < D < H < S.
    return (card.rank_value, 1 if card.suit == trump else 0, card.suit_index)


def highest_card(cards: Iterable[Card], trump: Optional[str] = None) -> Card:
    return max(_scan(tuple(cards)), key=lambda c: _rank_key(c, trump))


def lowest_card(cards: Iterable[Card], trump: Optional[str] = None) -> Card:
    return min(_scan(tuple(cards)), key=lambda c: _rank_key(c, trump))


def _matching(hand: Sequence[Card], suit: str) -> tuple[Card, ...]:
    return tuple(c for c in _scan(hand) if c.suit == suit)


# --- play policies -----------------------------------------------------------

def hcf_choose(state: PlayState, seat: int) -> Card:
    """Lead the highest card; follow with the highest of the lead suit; when
    void, shed the lowest card in hand (this plan never ruffs)."""
    hand = state.hands[seat]
    if not state.current_trick:
        return highest_card(hand, state.trump)
    playable = _matching(hand, state.lead_suit)
    if playable:
        return highest_card(playable, state.trump)
    return lowest_card(hand, state.trump)


def lcf_choose(state: PlayState, seat: int) -> Card:
    """Mirror of the high-card plan using minima throughout."""
    hand = state.hands[seat]
    if not state.current_trick:
        return lowest_card(hand, state.trump)
    playable = _matching(hand, state.lead_suit)
    if playable:
        return lowest_card(playable, state.trump)
    return lowest_card(hand, state.trump)


def general_choose(state: PlayState, seat: int) -> Card:
    """Lead high; following, beat the current winner with the highest card able
    to do so, else throw the lowest of the suit; discard lowest when void."""
    hand = state.hands[seat]
    if not state.current_trick:
        return highest_card(hand, state.trump)
    playable = _matching(hand, state.lead_suit)
    if not playable:
        return lowest_card(hand, state.trump)
    _, winner = winning_play(state.current_trick, state.trump)
    # A lead-suit card can only beat the winner if the trick has not been
    # ruffed away from the lead suit (trump supremacy).
    beatable = winner.suit == state.lead_suit
    beating = tuple(c for c in _scan(playable)
                    if beatable and c.rank_value > winner.rank_value)
    if beating:
        return highest_card(beating, state.trump)
    return lowest_card(playable, state.trump)


def defeat_seeking_choose(state: PlayState, seat: int, beneficiary: int) -> Card:
    """Throw tricks to the beneficiary while they are the declarer.

    When the beneficiary's side is winning the trick: dump the highest card of
    the lead suit if able to follow, and refuse to ruff their winner when void.
    Whenever the beneficiary did not win the auction this collapses to the
    general strategy.
    """
    declarer = state.contract.declarer
    if beneficiary != declarer:
        return general_choose(state, seat)
    if not state.current_trick:
        return general_choose(state, seat)
    winner_seat, winner_card = winning_play(state.current_trick, state.trump)
    if winner_seat not in (declarer, DUMMY_SEAT):
        return general_choose(state, seat)
    hand = state.hands[seat]
    playable = _matching(hand, state.lead_suit)
    if playable:
        return highest_card(playable, state.trump)
    # Void: never take a trick away from the beneficiary by ruffing.
    trump = state.trump
    can_ruff = trump is not None and (
        winner_card.suit != trump or any(
            c.suit == trump and c.rank_value > winner_card.rank_value
            for c in _scan(hand)))
    if can_ruff:
        safe = tuple(c for c in _scan(hand)
                     if not (c.suit == trump and (winner_card.suit != trump or
                                                  c.rank_value > winner_card.rank_value)))
        if safe:
            # Lowest harmless card, spending trump only as a last resort.
            return min(safe, key=lambda c: (c.suit == trump, c.rank_value, c.suit_index))
        return lowest_card(hand, trump)
    return general_choose(state, seat)


@dataclass(frozen=True)
class HighCardFirst:
    name: str = "hcf"

    def choose(self, state: PlayState, seat: int) -> Card:
        return hcf_choose(state, seat)


@dataclass(frozen=True)
class LowCardFirst:
    name: str = "lcf"

    def choose(self, state: PlayState, seat: int) -> Card:
        return lcf_choose(state, seat)


@dataclass(frozen=True)
class GeneralStrategy:
    name: str = "general"

    def choose(self, state: PlayState, seat: int) -> Card:
        return general_choose(state, seat)


@dataclass(frozen=True)
class DefeatSeeking:
    """Plays to hand tricks to `beneficiary` (a different seat)."""

    beneficiary: int

    def __post_init__(self):
        if self.beneficiary not in (0, 1, 2):
            raise PolicyError(f"beneficiary seat {self.beneficiary} outside 0..2")

    @property
    def name(self) -> str:
        return f"defeat:{self.beneficiary}"

    def choose(self, state: PlayState, seat: int) -> Card:
        if seat == self.beneficiary:
            raise PolicyError("defeat-seeking policy cannot serve its own beneficiary seat")
        return defeat_seeking_choose(state, seat, self.beneficiary)


# --- bid policies ------------------------------------------------------------

def _threshold_level(points: float, thresholds: Sequence[int]) -> int:
    """Highest no-trump level (1..3) whose threshold the evaluation reaches."""
    level = 0
    for i, t in enumerate(thresholds):
        if points >= t:
            level = i + 1
    return level


def _nt_call_for_level(level: int, state: AuctionState, seat: int) -> Call:
    """kNT if it is still a legal raise, else pass (opener falls back to 1C)."""
    opening = not state.history
    if level:
        bid = Call.bid(level, Denomination.NO_TRUMP)
        if opening or bid.bid_key > state.high_bid.bid_key:
            return bid
    if opening:
        return Call.bid(1, Denomination.CLUBS)  # the opener may never pass
    return PASS


def point_count_call(hand: Hand, thresholds: Sequence[int], state: AuctionState,
                     scale: PointScale = DEFAULT_SCALE) -> Call:
    if not (len(thresholds) == 3 and thresholds[0] < thresholds[1] < thresholds[2]):
        raise PolicyError(f"thresholds {thresholds!r} must be three increasing values")
    seat = state.seat_to_act
    level = _threshold_level(hand_points(hand, scale), thresholds)
    return _nt_call_for_level(level, state, seat)


def _minimal_suit_bid(denom: Denomination, state: AuctionState) -> Optional[Call]:
    """Lowest legal bid in `denom`, or None when the hierarchy is exhausted."""
    for level in range(1, 8):
        bid = Call.bid(level, denom)
        if state.high_bid is None or bid.bid_key > state.high_bid.bid_key:
            return bid
    return None


def heuristic_call(hand: Hand, state: AuctionState, mode: str,
                   thresholds: Sequence[int] = DEFAULT_THRESHOLDS,
                   scale: PointScale = DEFAULT_SCALE) -> Call:
    """The pass-aware bidding styles: defensive, attack, or bluff.

    Numeric triggers (suit length > 5, two honors, the point thresholds) are
    configuration defaults, not fixed laws; see the bidder classes.
    """
    seat = state.seat_to_act
    if mode == "defensive":
        by_len = sorted(
            SUITS,
            key=lambda s: (len(hand.of_suit(s)),
                           sum(scale.of(c.rank) for c in hand.of_suit(s)),
                           SUITS.index(s)))
        best = by_len[-1]
        suit_cards = hand.of_suit(best)
        has_honor = any(c.rank in HONOR_RANK_SET for c in suit_cards)
        if len(suit_cards) > 5 and has_honor:
            bid = _minimal_suit_bid(Denomination.from_symbol(best), state)
            if bid is not None:
                return bid
        return point_count_call(hand, thresholds, state, scale)
    if mode == "attack":
        evaluation = hand_points(hand, scale) + analytics.expected_dummy_points(hand, scale)
        return _nt_call_for_level(_threshold_level(evaluation, thresholds), state, seat)
    if mode == "bluff":
        opening = not state.history
        trigger = False
        if not opening and state.high_bid is not None and state.high_bidder != seat:
            suit = state.high_bid.denom.trump_suit
            if suit is not None:
                held = hand.of_suit(suit)
                honors = sum(1 for c in held if c.rank in HONOR_RANK_SET)
                trigger = len(held) >= 5 or honors >= 2
        if trigger:
            if (state.consecutive_passes == 1
                    and state.doubling is Doubling.NONE
                    and seat != state.high_bidder):
                return DOUBLE  # spring the trap just before the auction closes
            return PASS
        return point_count_call(hand, thresholds, state, scale)
    raise PolicyError(f"unknown heuristic mode {mode!r}")


@dataclass(frozen=True)
class PointCountBidder:
    """Bids kNT from hand points against three increasing thresholds."""

    thresholds: tuple[int, int, int] = DEFAULT_THRESHOLDS
    scale: PointScale = DEFAULT_SCALE

    @property
    def name(self) -> str:
        return "points:" + ",".join(str(t) for t in self.thresholds)

    def choose(self, state: AuctionState, hand: Hand, seat: int) -> Call:
        return point_count_call(hand, self.thresholds, state, self.scale)


@dataclass(frozen=True)
class HeuristicBidder:
    mode: str
    thresholds: tuple[int, int, int] = DEFAULT_THRESHOLDS
    scale: PointScale = DEFAULT_SCALE

    def __post_init__(self):
        if self.mode not in ("defensive", "attack", "bluff"):
            raise PolicyError(f"unknown heuristic mode {self.mode!r}")

    @property
    def name(self) -> str:
        return self.mode

    def choose(self, state: AuctionState, hand: Hand, seat: int) -> Call:
        return heuristic_call(hand, state, self.mode, self.thresholds, self.scale)


# --- policy registry ---------------------------------------------------------

PLAY_POLICY_NAMES = ("hcf", "lcf", "general", "defeat:<seat>")
BID_POLICY_NAMES = ("points:<t1,t2,t3>", "defensive", "attack", "bluff")


def parse_play_policy(spec: str):
    token = spec.strip().lower()
    if token == "hcf":
        return HighCardFirst()
    if token == "lcf":
        return LowCardFirst()
    if token == "general":
        return GeneralStrategy()
    if token.startswith("defeat:"):
        try:
            return DefeatSeeking(int(token.split(":", 1)[1]))
        except ValueError:
            raise PolicyError(f"bad defeat-seeking spec {spec!r}") from None
    raise PolicyError(f"unknown play policy {spec!r} (expected one of {PLAY_POLICY_NAMES})")


def parse_bid_policy(spec: str):
    token = spec.strip().lower()
    if token in ("defensive", "attack", "bluff"):
        return HeuristicBidder(token)
    if token == "points":
        return PointCountBidder()
    if token.startswith("points:"):
        try:
            parts = tuple(int(x) for x in token.split(":", 1)[1].split(","))
        except ValueError:
            raise PolicyError(f"bad thresholds in {spec!r}") from None
        if len(parts) != 3:
            raise PolicyError(f"bad thresholds in {spec!r} (need three values)")
        return PointCountBidder(parts)
    raise PolicyError(f"unknown bid policy {spec!r} (expected one of {BID_POLICY_NAMES})")


def parse_seat_spec(spec: str):
    """Seat spec "bid+play", either half optional: "general", "bluff+hcf",
    "points:20,25,30". Missing halves default to points bidding / general play."""
    bid = PointCountBidder()
    play = GeneralStrategy()
    for part in spec.split("+"):
        part = part.strip()
        if not part:
            continue
        try:
            play = parse_play_policy(part)
            continue
        except PolicyError:
            pass
        bid = parse_bid_policy(part)  # raises with the part named if unknown
    return bid, play
