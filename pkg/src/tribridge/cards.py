"""Card identities, hands, deals, seeded dealing and hand point-count evaluation."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

RANKS = "23456789TJQKA"
SUITS = "CDHS"
SUIT_SYMBOLS = {"C": "♣", "D": "♦", "H": "♥", "S": "♠"}

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


class CardError(ValueError):
    """Raised for malformed card text or ill-formed hands/deals."""


@dataclass(frozen=True)
class Card:
    """One of the 52 playing cards, e.g. Card('Q', 'S')."""

    rank: str
    suit: str

    def __post_init__(self):
        if self.rank not in RANKS:
            raise CardError(f"invalid rank {self.rank!r} (expected one of {RANKS})")
        if self.suit not in SUITS:
            raise CardError(f"invalid suit {self.suit!r} (expected one of {SUITS})")

    @property
    def rank_value(self) -> int:
        """2..14 with ace high."""
        return RANKS.index(self.rank) + 2

    @property
    def suit_index(self) -> int:
        return SUITS.index(self.suit)

    @property
    def index(self) -> int:
        """Position in the canonical deck order (suit-major, then rank): 0..51."""
        return self.suit_index * 13 + RANKS.index(self.rank)

    def __str__(self) -> str:
        return f"{self.rank}{self.suit}"

    def __repr__(self) -> str:
        return f"Card({self.rank!r}, {self.suit!r})"


def parse_card(text: str) -> Card:
    """Parse two-character card text like 'TD' or 'as' (case-insensitive)."""
    if not isinstance(text, str) or len(text.strip()) != 2:
        raise CardError(f"malformed card {text!r}: expected rank char + suit char")
    token = text.strip().upper()
    rank, suit = token[0], token[1]
    if rank not in RANKS:
        raise CardError(f"malformed card {text!r}: invalid rank {rank!r}")
    if suit not in SUITS:
        raise CardError(f"malformed card {text!r}: invalid suit {suit!r}")
    return Card(rank, suit)


def card_from_index(index: int) -> Card:
    """Inverse of Card.index."""
    if not 0 <= index < 52:
        raise CardError(f"card index {index} out of range 0..51")
    return Card(RANKS[index % 13], SUITS[index // 13])


FULL_DECK: tuple[Card, ...] = tuple(card_from_index(i) for i in range(52))


class Hand:
    """An immutable set of up to 13 distinct cards with canonical iteration order.

    Iteration is suit-major (C, D, H, S) then ascending rank, so any output
    derived from a hand is deterministic.
    """

    __slots__ = ("_cards",)

    def __init__(self, cards: Iterable[Card]):
        ordered = tuple(sorted(cards, key=lambda c: c.index))
        if len(set(ordered)) != len(ordered):
            raise CardError("hand contains duplicate cards")
        if len(ordered) > 13:
            raise CardError(f"hand has {len(ordered)} cards (maximum 13)")
        object.__setattr__(self, "_cards", ordered)

    @classmethod
    def parse(cls, text: str) -> "Hand":
        """Build a hand from whitespace- or comma-separated card tokens."""
        tokens = [t for t in text.replace(",", " ").split() if t]
        return cls(parse_card(t) for t in tokens)

    @property
    def cards(self) -> tuple[Card, ...]:
        return self._cards

    def of_suit(self, suit: str) -> tuple[Card, ...]:
        return tuple(c for c in self._cards if c.suit == suit)

    def __iter__(self) -> Iterator[Card]:
        return iter(self._cards)

    def __len__(self) -> int:
        return len(self._cards)

    def __contains__(self, card: object) -> bool:
        return card in self._cards

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Hand) and self._cards == other._cards

    def __hash__(self) -> int:
        return hash(self._cards)

    def __str__(self) -> str:
        return " ".join(str(c) for c in self._cards)

    def __repr__(self) -> str:
        return f"Hand.parse({str(self)!r})"


@dataclass(frozen=True)
class PointScale:
    """Per-rank hand-evaluation weights; unlisted ranks count zero."""

    weights: Mapping[str, int] = field(
        default_factory=lambda: {"A": 5, "K": 4, "Q": 3, "J": 2, "T": 1}
    )

    def of(self, rank: str) -> int:
        return self.weights.get(rank, 0)

    @property
    def deck_total(self) -> int:
        """Total weight over all 52 cards (60 under the default scale)."""
        return 4 * sum(self.weights.get(r, 0) for r in RANKS)


DEFAULT_SCALE = PointScale()


def hand_points(hand: Hand | Iterable[Card], scale: PointScale = DEFAULT_SCALE) -> int:
    """Sum of per-card weights under the given scale."""
    return sum(scale.of(c.rank) for c in hand)


class SplitMix64:
    """Fixed 64-bit PRNG (SplitMix64) so deals reproduce on every platform."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform-enough value in [0, bound) via modulo reduction (documented
        procedure; bias is negligible for bound <= 52 and reproducibility wins)."""
        return self.next_u64() % bound


def derive_seed(master: int, index: int) -> int:
    """Per-deal substream seed: a pure function of (master seed, deal index)."""
    z = (master + (index + 1) * _GAMMA) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


@dataclass(frozen=True)
class Deal:
    """Four 13-card hands partitioning the deck; seat 3 is the phantom hand."""

    hands: tuple[Hand, Hand, Hand, Hand]
    seed: int = 0

    def __post_init__(self):
        if len(self.hands) != 4:
            raise CardError("a deal needs exactly 4 hands")
        all_cards = [c for h in self.hands for c in h]
        if len(all_cards) != 52 or len(set(all_cards)) != 52:
            raise CardError("deal hands must partition the 52-card deck")
        for h in self.hands:
            if len(h) != 13:
                raise CardError("every hand in a deal has exactly 13 cards")

    def to_json(self) -> dict:
        return {"seed": self.seed, "hands": [[str(c) for c in h] for h in self.hands]}

    @classmethod
    def from_json(cls, obj: Mapping) -> "Deal":
        hands = tuple(Hand(parse_card(t) for t in cards) for cards in obj["hands"])
        return cls(hands=hands, seed=int(obj.get("seed", 0)))


def shuffled_deck(seed: int) -> list[Card]:
    """Fisher-Yates shuffle of the canonical deck driven by SplitMix64(seed)."""
    rng = SplitMix64(seed)
    deck = list(FULL_DECK)
    for i in range(51, 0, -1):
        j = rng.below(i + 1)
        deck[i], deck[j] = deck[j], deck[i]
    return deck


def deal_random(seed: int) -> Deal:
    """Deterministic uniform deal: shuffle, then seat k takes cards 13k..13k+12."""
    deck = shuffled_deck(seed)
    hands = tuple(Hand(deck[13 * k : 13 * (k + 1)]) for k in range(4))
    return Deal(hands=hands, seed=seed & _MASK64)
