"""Three-seat bidding state machine: bid hierarchy, forced opening, doubles."""
from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Optional


class AuctionError(Exception):
    """Raised when a call is illegal or the auction is queried in the wrong state."""


class Denomination(enum.IntEnum):
    """Bid denominations in strict ascending order, no-trump on top."""

    CLUBS = 0
    DIAMONDS = 1
    HEARTS = 2
    SPADES = 3
    NO_TRUMP = 4

    @property
    def symbol(self) -> str:
        return ("C", "D", "H", "S", "NT")[self.value]

    @property
    def trump_suit(self) -> Optional[str]:
        """Trump suit char for suit contracts, None at no-trump."""
        return None if self is Denomination.NO_TRUMP else self.symbol

    @classmethod
    def from_symbol(cls, text: str) -> "Denomination":
        table = {"C": cls.CLUBS, "D": cls.DIAMONDS, "H": cls.HEARTS,
                 "S": cls.SPADES, "N": cls.NO_TRUMP, "NT": cls.NO_TRUMP}
        key = text.strip().upper()
        if key not in table:
            raise AuctionError(f"unknown denomination {text!r}")
        return table[key]


class CallKind(enum.Enum):
    BID = "bid"
    PASS = "pass"
    DOUBLE = "double"
    REDOUBLE = "redouble"


class Doubling(enum.IntEnum):
    NONE = 1
    DOUBLED = 2
    REDOUBLED = 4


@dataclass(frozen=True)
class Call:
    """A single auction action: a bid of (level, denomination), pass, X or XX."""

    kind: CallKind
    level: Optional[int] = None
    denom: Optional[Denomination] = None

    def __post_init__(self):
        if self.kind is CallKind.BID:
            if self.level is None or not 1 <= self.level <= 7:
                raise AuctionError(f"bid level {self.level} outside 1..7")
            if self.denom is None:
                raise AuctionError("bid needs a denomination")
        elif self.level is not None or self.denom is not None:
            raise AuctionError(f"{self.kind.value} carries no level/denomination")

    @classmethod
    def bid(cls, level: int, denom: Denomination) -> "Call":
        return cls(CallKind.BID, level, denom)

    @property
    def is_bid(self) -> bool:
        return self.kind is CallKind.BID

    @property
    def bid_key(self) -> tuple[int, int]:
        """Ordering key (level, denomination) for the bid hierarchy."""
        if not self.is_bid:
            raise AuctionError("only bids have a hierarchy position")
        return (self.level, int(self.denom))

    def __str__(self) -> str:
        if self.kind is CallKind.BID:
            return f"{self.level}{self.denom.symbol}"
        return {"pass": "PASS", "double": "X", "redouble": "XX"}[self.kind.value]

    @classmethod
    def parse(cls, text: str) -> "Call":
        token = text.strip().upper()
        if token == "PASS":
            return PASS
        if token == "X":
            return DOUBLE
        if token == "XX":
            return REDOUBLE
        if len(token) >= 2 and token[0].isdigit():
            return cls.bid(int(token[0]), Denomination.from_symbol(token[1:]))
        raise AuctionError(f"unparseable call {text!r}")


PASS = Call(CallKind.PASS)
DOUBLE = Call(CallKind.DOUBLE)
REDOUBLE = Call(CallKind.REDOUBLE)

ALL_BIDS: tuple[Call, ...] = tuple(
    Call.bid(level, denom) for level in range(1, 8) for denom in Denomination
)


@dataclass(frozen=True)
class Contract:
    """The auction outcome: the declarer owes level+6 tricks in the denomination."""

    declarer: int
    level: int
    denom: Denomination
    doubling: Doubling = Doubling.NONE

    @property
    def trump_suit(self) -> Optional[str]:
        return self.denom.trump_suit

    @property
    def target_tricks(self) -> int:
        return self.level + 6

    def __str__(self) -> str:
        tag = {Doubling.NONE: "", Doubling.DOUBLED: "X", Doubling.REDOUBLED: "XX"}
        return f"{self.level}{self.denom.symbol}{tag[self.doubling]} by seat {self.declarer}"


@dataclass(frozen=True)
class AuctionState:
    """Immutable auction record; apply_call returns a new state.

    Seats 0..2 rotate from the opener; the opener may not pass.  The auction
    ends once two consecutive passes follow the last bid, double or redouble.
    """

    opener: int
    history: tuple[tuple[int, Call], ...] = ()
    high_bid: Optional[Call] = None
    high_bidder: Optional[int] = None
    doubling: Doubling = Doubling.NONE
    consecutive_passes: int = 0

    @classmethod
    def new(cls, opener: int = 0) -> "AuctionState":
        if opener not in (0, 1, 2):
            raise AuctionError(f"opener seat {opener} outside 0..2")
        return cls(opener=opener)

    @property
    def is_complete(self) -> bool:
        return self.high_bid is not None and self.consecutive_passes >= 2

    @property
    def seat_to_act(self) -> int:
        if self.is_complete:
            raise AuctionError("auction already complete")
        return (self.opener + len(self.history)) % 3


def _turn_check(state: AuctionState, seat: int) -> None:
    if state.is_complete:
        raise AuctionError("auction already complete")
    if seat != state.seat_to_act:
        raise AuctionError(f"seat {seat} acted out of turn (seat {state.seat_to_act} to act)")


def _violation(state: AuctionState, seat: int, call: Call) -> Optional[str]:
    """Why `call` is illegal for the seat to act now, or None when legal."""
    if not state.history:
        if call.kind is not CallKind.BID:
            return f"opening seat {seat} must bid; {call} is not permitted"
        return None
    if call.kind is CallKind.BID:
        if call.bid_key <= state.high_bid.bid_key:
            return (f"bid {call} does not exceed the standing bid {state.high_bid} "
                    "in (level, denomination) order")
        return None
    if call.kind is CallKind.PASS:
        return None
    if call.kind is CallKind.DOUBLE:
        if seat == state.high_bidder:
            return "double rejected: the high bidder may not double their own bid"
        if state.doubling is not Doubling.NONE:
            return (f"double rejected: the standing bid is already "
                    f"{state.doubling.name.lower()}")
        return None
    if state.doubling is not Doubling.DOUBLED:
        return "redouble rejected: no standing double to redouble"
    if seat != state.high_bidder:
        return "redouble rejected: only the doubled high bidder may redouble"
    return None


def legal_calls(state: AuctionState, seat: int) -> set[Call]:
    """Every call `seat` may make now; the opener gets the 35 bids and no pass."""
    _turn_check(state, seat)
    if not state.history:
        return set(ALL_BIDS)
    high = state.high_bid
    # ALL_BIDS is generated in (level, denomination) order, so everything past
    # the standing bid's slot is a strictly higher bid.
    index = (high.level - 1) * 5 + int(high.denom)
    calls: set[Call] = {PASS, *ALL_BIDS[index + 1:]}
    if state.doubling is Doubling.NONE and seat != state.high_bidder:
        calls.add(DOUBLE)
    if state.doubling is Doubling.DOUBLED and seat == state.high_bidder:
        calls.add(REDOUBLE)
    return calls


def apply_call(state: AuctionState, seat: int, call: Call) -> AuctionState:
    """Validate and record one call, returning the successor state."""
    _turn_check(state, seat)
    reason = _violation(state, seat, call)
    if reason is not None:
        raise AuctionError(reason)
    history = state.history + ((seat, call),)
    if call.kind is CallKind.BID:
        return replace(state, history=history, high_bid=call, high_bidder=seat,
                       doubling=Doubling.NONE, consecutive_passes=0)
    if call.kind is CallKind.PASS:
        return replace(state, history=history,
                       consecutive_passes=state.consecutive_passes + 1)
    doubling = Doubling.DOUBLED if call.kind is CallKind.DOUBLE else Doubling.REDOUBLED
    return replace(state, history=history, doubling=doubling, consecutive_passes=0)


def contract_of(state: AuctionState) -> Contract:
    """Contract from a complete auction: the final (highest) bid wins the deal."""
    if not state.is_complete:
        raise AuctionError("auction not complete")
    return Contract(declarer=state.high_bidder, level=state.high_bid.level,
                    denom=state.high_bid.denom, doubling=state.doubling)
