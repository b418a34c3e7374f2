"""Settlement of a played deal under the halved ("previous") and full ("new") schemes."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable

from .auction import Contract, Denomination, Doubling
from .cards import Card, Deal

HONOR_RANKS = ("A", "K", "Q", "J", "T")

# Per odd trick, by denomination.  The halved values are the individual-player
# share; the full values (2x) pay the whole trick to the lone declarer.
HALVED_TRICK_VALUE = {
    Denomination.CLUBS: 3.0,
    Denomination.DIAMONDS: 3.5,
    Denomination.HEARTS: 4.0,
    Denomination.SPADES: 4.5,
    Denomination.NO_TRUMP: 5.0,
}

UNDERTRICK_UNIT = 25
INSULT_BONUS = 25


class Scheme(enum.Enum):
    PREVIOUS = "previous"
    NEW = "new"

    @classmethod
    def parse(cls, text: str) -> "Scheme":
        key = text.strip().lower()
        aliases = {"previous": cls.PREVIOUS, "prev": cls.PREVIOUS, "old": cls.PREVIOUS,
                   "new": cls.NEW}
        if key not in aliases:
            raise ValueError(f"unknown scheme {text!r}")
        return aliases[key]


def full_trick_value(denom: Denomination) -> float:
    return 2 * HALVED_TRICK_VALUE[denom]


def honor_domain(denom: Denomination) -> frozenset[Card]:
    """The cards whose holding pays honors: top five of trump, or the four aces."""
    if denom is Denomination.NO_TRUMP:
        return frozenset(Card("A", s) for s in "CDHS")
    return frozenset(Card(r, denom.trump_suit) for r in HONOR_RANKS)


@dataclass(frozen=True)
class HonorsInfo:
    """Honor cards held by the declarer's own hand and by the dummy."""

    declarer: frozenset[Card] = frozenset()
    dummy: frozenset[Card] = frozenset()

    def __post_init__(self):
        if self.declarer & self.dummy:
            raise ValueError("declarer and dummy cannot hold the same honor")


def honors_for_deal(deal: Deal, contract: Contract) -> HonorsInfo:
    """Extract the two relevant honor holdings from the dealt hands."""
    domain = honor_domain(contract.denom)
    declarer_hand = set(deal.hands[contract.declarer])
    dummy_hand = set(deal.hands[3])
    return HonorsInfo(declarer=frozenset(domain & declarer_hand),
                      dummy=frozenset(domain & dummy_hand))


def honors_points(honors: HonorsInfo, denom: Denomination) -> int:
    """Tiered honor bonus; the tiers are mutually exclusive, highest first.

    100 for the complete honor set in the declarer's hand (either hand for the
    four aces at no-trump), 80 for exactly four of five trump honors in the
    declarer's hand, otherwise 10 per honor when the combined holding reaches
    three or when the dummy supplements at all.
    """
    domain = honor_domain(denom)
    bad = (honors.declarer | honors.dummy) - domain
    if bad:
        raise ValueError(f"{sorted(str(c) for c in bad)} are not honors at {denom.symbol}")
    n_declarer, n_dummy = len(honors.declarer), len(honors.dummy)
    if denom is Denomination.NO_TRUMP:
        if n_declarer == 4 or n_dummy == 4:
            return 100
    else:
        if n_declarer == 5:
            return 100
        if n_declarer == 4:
            return 80
    combined = n_declarer + n_dummy
    if combined >= 3:
        return 10 * combined
    if n_dummy >= 1:
        return 10 * n_dummy
    return 0


def slam_bonus(declarer_tricks: int, doubling: Doubling = Doubling.NONE) -> int:
    """50 for twelve tricks, 100 for all thirteen, scaled by the doubling state."""
    if declarer_tricks == 13:
        return 100 * int(doubling)
    if declarer_tricks == 12:
        return 50 * int(doubling)
    return 0


@dataclass(frozen=True)
class Settlement:
    """Per-seat point deltas for one deal plus the scoring breakdown."""

    scheme: Scheme
    declarer: int
    made: bool
    per_seat: tuple[float, float, float]
    trick_points: float = 0.0
    overtrick_points: float = 0.0
    insult: float = 0.0
    slam: float = 0.0
    honors: float = 0.0
    penalty_per_defender: float = 0.0

    def to_json(self) -> dict:
        return {
            "scheme": self.scheme.value,
            "declarer": self.declarer,
            "made": self.made,
            "perSeatDelta": list(self.per_seat),
            "breakdown": {
                "trickPoints": self.trick_points,
                "overtrickPoints": self.overtrick_points,
                "insult": self.insult,
                "slamBonus": self.slam,
                "honors": self.honors,
                "penalties": self.penalty_per_defender,
            },
        }


def score_deal(contract: Contract, declarer_tricks: int,
               honors: HonorsInfo = HonorsInfo(),
               scheme: Scheme = Scheme.PREVIOUS) -> Settlement:
    """Settle one deal.

    Made contracts pay the declarer odd tricks at the scheme's trick value
    (every trick beyond the book of six), doubled extras, the new scheme's
    half-value overtrick bonus, slam and honors.  Failed contracts pay each
    defender 25 per undertrick scaled by doubling; honors stay with the
    declarer side either way.
    """
    if not 0 <= declarer_tricks <= 13:
        raise ValueError(f"declarer tricks {declarer_tricks} outside 0..13")
    dm = int(contract.doubling)
    odd = declarer_tricks - 6
    made = odd >= contract.level
    honor_pts = honors_points(honors, contract.denom)
    per_seat = [0.0, 0.0, 0.0]

    if made:
        halved = HALVED_TRICK_VALUE[contract.denom]
        value = halved if scheme is Scheme.PREVIOUS else 2 * halved
        overtricks = declarer_tricks - contract.target_tricks
        trick_points = odd * value * dm
        overtrick_points = 0.0
        insult = 0.0
        if contract.doubling is not Doubling.NONE:
            overtrick_points += overtricks * UNDERTRICK_UNIT * (dm // 2)
            insult = INSULT_BONUS * (dm // 2)
        if scheme is Scheme.NEW:
            overtrick_points += 0.5 * full_trick_value(contract.denom) * overtricks
        slam = slam_bonus(declarer_tricks, contract.doubling)
        per_seat[contract.declarer] = (trick_points + overtrick_points + insult
                                       + slam + honor_pts)
        return Settlement(scheme=scheme, declarer=contract.declarer, made=True,
                          per_seat=tuple(per_seat), trick_points=trick_points,
                          overtrick_points=overtrick_points, insult=insult,
                          slam=slam, honors=honor_pts)

    undertricks = contract.target_tricks - declarer_tricks
    penalty = undertricks * UNDERTRICK_UNIT * dm
    for seat in range(3):
        if seat != contract.declarer:
            per_seat[seat] = penalty
    per_seat[contract.declarer] = honor_pts
    return Settlement(scheme=scheme, declarer=contract.declarer, made=False,
                      per_seat=tuple(per_seat), honors=honor_pts,
                      penalty_per_defender=penalty)
