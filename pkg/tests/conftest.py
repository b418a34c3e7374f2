"""Shared test helpers: compact card/state builders."""
import pytest

from tribridge.auction import Contract, Denomination
from tribridge.cards import Card, Hand, parse_card
from tribridge.play import PlayState


def c(spec: str) -> Card:
    """Build a Card from 2-char text like 'QS' or 'td'."""
    return parse_card(spec)


def hand(text: str) -> Hand:
    """Build a Hand from space-separated card tokens."""
    return Hand.parse(text)


def contract(declarer=0, level=1, denom="NT", doubling=None) -> Contract:
    from tribridge.auction import Doubling
    return Contract(declarer=declarer, level=level,
                    denom=Denomination.from_symbol(denom),
                    doubling=doubling or Doubling.NONE)


def mid_trick_state(seat_cards: str, trick: list[tuple[int, str]],
                    declarer=0, denom="NT", seat=2, leader=None) -> PlayState:
    """Minimal play state: `seat` holds seat_cards, a partial trick is down."""
    hands = [(), (), (), ()]
    hands[seat] = tuple(c(t) for t in seat_cards.split())
    played = tuple((s, c(t)) for s, t in trick)
    if leader is None:
        leader = played[0][0] if played else seat
    return PlayState(contract=contract(declarer=declarer, denom=denom),
                     hands=tuple(hands), current_trick=played, leader=leader)


@pytest.fixture
def example_deal():
    from tribridge.fixtures import EXAMPLE1_DEAL
    return EXAMPLE1_DEAL
