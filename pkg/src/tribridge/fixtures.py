"""Built-in reference fixtures: the worked example deal and the ten
declarer/partner hand pairs used by the split-enumeration demos."""
from __future__ import annotations

from dataclasses import dataclass

from .auction import Contract, Denomination
from .cards import Deal, Hand

# The worked single-deal example: four printed hands, played at no-trump with
# every seat on the same plan.  Conventions pinned for reproduction: seat 2
# declares, so seat 0 leads trick 1; rotation is 0..3 clockwise; cross-suit
# rank ties break trump-first then C < D < H < S.
EXAMPLE1_HANDS = (
    Hand.parse("6S 8S QS 2H 3H QH 6D QD 3C 4C 5C 7C JC"),
    Hand.parse("5S 7S KS 4H TH AH 4D 5D 8D KD 9C TC AC"),
    Hand.parse("2S 3S 4S 5H 9H JH KH 7D TD JD AD 6C QC"),
    Hand.parse("9S TS JS AS 6H 7H 8H 2D 3D 9D 2C 8C KC"),
)

EXAMPLE1_DEAL = Deal(hands=EXAMPLE1_HANDS)
EXAMPLE1_CONTRACT = Contract(declarer=2, level=1, denom=Denomination.NO_TRUMP)

# Reference per-seat trick vectors and team splits (teams: seats 0&2 vs 1&3).
EXAMPLE1_EXPECTED = {
    "hcf": ((0, 4, 6, 3), (6, 7)),
    "lcf": ((1, 4, 5, 3), (6, 7)),
    "general": ((3, 2, 4, 4), (7, 6)),
}

# Ten fixed (declarer hand, partner hand) pairs for split enumeration.
SPLIT_HAND_PAIRS: tuple[tuple[Hand, Hand], ...] = tuple(
    (Hand.parse(a), Hand.parse(b))
    for a, b in [
        ("2H 2S 5D 5H 6D 7H 8C 8S 9C JC QC TH TS",
         "2D 3C 3D 3H 4D 6H 7D 7S AH AS JS KD QD"),
        ("4D 4S 6D 6H 7S 8C 8D 9H AD JD QC TH TS",
         "3H 4C 5S 6C 6S 8H 9D AC JH JS KC QS TC"),
        ("2D 2S 3D 3H 4C 5H 6S 7S 8D 9C AH JD TD",
         "2C 4S 5C 5S 7D 8S AD AS JH JS KC KS QH"),
        ("2H 2S 3H 4S 5H 7C 7H 8C AC JD JH QH TH",
         "4D 4H 5C 6D 8D AH JC KH KS QD QS TC TS"),
        ("2H 2S 4D 7C 7D 8H 9S AH JS KC KS QD TH",
         "2D 3D 4C 4H 5C 6C 9C 9D JD QC QS TC TD"),
        ("2D 2S 3D 4C 6D 8H 8S 9C AS QD QH TC TS",
         "3C 3H 4D 5C 6H 7H AC JD JS KC QS TD TH"),
        ("2H 3D 5D 5S 8H 8S 9S JC JS KC QC TC TS",
         "2D 2S 3C 4C 5C 7D 7H 7S 8D 9D AC KH TH"),
        ("2C 3H 3S 6S 7D 9C 9S AC JD KC QD TH TS",
         "2D 2H 5C 5D 6C 6D 7S AS JC JS QC TC TD"),
        ("2D 2S 3D 4D 4H 5C 5D 8D JS KC KD TD TS",
         "2C 3C 3H 6H 6S 8S 9C 9D JH KH QC QS TH"),
        ("2S 3S 4C 4S 6C 6H 7D 8H 9S AS JC JH TH",
         "2C 4D 4H 5D 5S 6D 6S 7S 8C 8D AC KC TC"),
    ]
)


@dataclass(frozen=True)
class FixtureRow:
    """One reproduced strategy row next to its reference values."""

    strategy: str
    per_seat: tuple[int, int, int, int]
    team_split: tuple[int, int]
    expected_per_seat: tuple[int, int, int, int]
    expected_team_split: tuple[int, int]

    @property
    def per_seat_match(self) -> bool:
        return self.per_seat == self.expected_per_seat

    @property
    def team_match(self) -> bool:
        return self.team_split == self.expected_team_split

    def to_json(self) -> dict:
        return {
            "strategy": self.strategy,
            "perSeatTricks": list(self.per_seat),
            "teamSplit": list(self.team_split),
            "expectedPerSeat": list(self.expected_per_seat),
            "expectedTeamSplit": list(self.expected_team_split),
            "perSeatMatch": self.per_seat_match,
            "teamMatch": self.team_match,
        }
