"""Batch experiments: bidding simulations, tournaments, split enumeration,
and reproduction of the built-in reference fixtures."""
from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Sequence

import numpy as np

from . import __version__, fastplay
from .analytics import combo_profile, moments
from .auction import AuctionState, Contract, Denomination, apply_call, contract_of
from .cards import (DEFAULT_SCALE, Deal, Hand, PointScale, RANKS,
                    deal_random, derive_seed)
from .fixtures import (EXAMPLE1_CONTRACT, EXAMPLE1_DEAL, EXAMPLE1_EXPECTED,
                       FixtureRow, SPLIT_HAND_PAIRS)
from .play import PlayPolicy, opening_leader, play_deal
from .policies import BidPolicy, GeneralStrategy, parse_play_policy
from .scoring import Scheme, honors_for_deal, score_deal

NT_SIM_DECLARER = 2  # fixed evaluation seat; its partner is the phantom


class HarnessError(Exception):
    pass


# --- no-trump bidding simulation ----------------------------------------------

@dataclass(frozen=True)
class LevelCounts:
    calls: int = 0
    made: int = 0

    @property
    def failed(self) -> int:
        return self.calls - self.made


@dataclass(frozen=True)
class SimReport:
    """Call/made/failed counters per no-trump level for one threshold rule set."""

    thresholds: tuple[int, int, int]
    total_deals: int
    seed: int
    play_policy: str
    levels: Mapping[int, LevelCounts]

    @property
    def ruleset(self) -> str:
        return "/".join(str(t) for t in self.thresholds)

    def to_json(self) -> dict:
        return {
            "meta": {"seed": self.seed, "version": __version__,
                     "config": {"thresholds": list(self.thresholds),
                                "nDeals": self.total_deals,
                                "playPolicy": self.play_policy}},
            "levels": {str(k): {"calls": v.calls, "made": v.made, "failed": v.failed}
                       for k, v in sorted(self.levels.items())},
        }

    def to_csv(self) -> str:
        out = io.StringIO()
        w = csv.writer(out)
        w.writerow(["ruleset", "level", "calls", "made", "failed"])
        for level, c in sorted(self.levels.items()):
            w.writerow([self.ruleset, level, c.calls, c.made, c.failed])
        return out.getvalue()


def _policy_codes_for(policies: Mapping[int, PlayPolicy],
                      declarer: int = 0) -> Optional[np.ndarray]:
    """Integer codes for the fast kernels, or None if any policy is custom.

    Seat 3 (the dummy) runs the declarer's policy unless given its own entry,
    which matches how play_deal routes the dummy's choices.
    """
    codes = np.zeros(4, dtype=np.int64)
    for seat in range(4):
        policy = policies.get(seat)
        if policy is None and seat == 3:
            policy = policies.get(declarer)
        if policy is None:
            return None
        name = getattr(policy, "name", None)
        if name not in fastplay.POLICY_CODES:
            return None
        codes[seat] = fastplay.POLICY_CODES[name]
    return codes


def simulate_nt_bidding(thresholds: Sequence[int], n_deals: int, seed: int,
                        play_policy: PlayPolicy | str = "general",
                        scale: PointScale = DEFAULT_SCALE) -> SimReport:
    """Per deal, seat 2 bids the highest kNT its points reach (else the deal is
    skipped); qualifying deals are played out to fill the made/failed columns."""
    if n_deals < 0:
        raise HarnessError("nDeals must be non-negative")
    t1, t2, t3 = thresholds
    if not t1 < t2 < t3:
        raise HarnessError(f"thresholds {thresholds!r} must be increasing")
    if isinstance(play_policy, str):
        play_policy = parse_play_policy(play_policy)
    leader = opening_leader(NT_SIM_DECLARER)
    policies = {s: play_policy for s in range(4)}
    codes = _policy_codes_for(policies)

    if codes is not None:
        weights = np.array([scale.of(r) for r in RANKS], dtype=np.int64)
        calls, made = fastplay.simulate_nt_kernel(
            fastplay.u64(seed), n_deals, t1, t2, t3, weights, codes, NT_SIM_DECLARER, leader)
        levels = {k: LevelCounts(int(calls[k]), int(made[k])) for k in (1, 2, 3)}
    else:
        from .cards import hand_points
        tally = {k: [0, 0] for k in (1, 2, 3)}
        for i in range(n_deals):
            deal = deal_random(derive_seed(seed, i))
            pts = hand_points(deal.hands[NT_SIM_DECLARER], scale)
            level = sum(1 for t in (t1, t2, t3) if pts >= t)
            if level == 0:
                continue
            contract = Contract(declarer=NT_SIM_DECLARER, level=level,
                                denom=Denomination.NO_TRUMP)
            outcome = play_deal(deal, contract, {0: play_policy, 1: play_policy,
                                                 2: play_policy})
            tally[level][0] += 1
            if outcome.declarer_tricks >= level + 6:
                tally[level][1] += 1
        levels = {k: LevelCounts(*v) for k, v in tally.items()}

    return SimReport(thresholds=(t1, t2, t3), total_deals=n_deals, seed=seed,
                     play_policy=play_policy.name, levels=levels)


# --- tournaments ---------------------------------------------------------------

@dataclass(frozen=True)
class TournamentRow:
    index: int
    opener: int
    declarer: int
    contract: str
    doubling: str
    declarer_tricks: int
    made: bool
    points: Mapping[Scheme, tuple[float, float, float]]

    def to_json(self) -> dict:
        return {
            "game": self.index, "opener": self.opener, "bidder": self.declarer,
            "contract": self.contract, "doubling": self.doubling,
            "tricks": self.declarer_tricks,
            "outcome": "Win" if self.made else "Loss",
            "points": {s.value: list(p) for s, p in self.points.items()},
        }


@dataclass(frozen=True)
class TournamentReport:
    rows: tuple[TournamentRow, ...]
    schemes: tuple[Scheme, ...]
    seed: Optional[int] = None
    config: Mapping[str, str] = field(default_factory=dict)

    def totals(self, scheme: Scheme) -> tuple[float, float, float]:
        cols = [0.0, 0.0, 0.0]
        for row in self.rows:
            for i, v in enumerate(row.points[scheme]):
                cols[i] += v
        return tuple(cols)

    def sd(self, scheme: Scheme) -> float:
        return moments(self.totals(scheme)).population_sd

    @classmethod
    def from_point_rows(cls, points_by_scheme: Mapping[Scheme, Sequence[Sequence[float]]],
                        ) -> "TournamentReport":
        """Build a report from bare per-seat point rows (external match records)."""
        schemes = tuple(points_by_scheme)
        lengths = {len(rows) for rows in points_by_scheme.values()}
        if len(lengths) != 1:
            raise HarnessError("every scheme needs the same number of rows")
        rows = []
        for i in range(lengths.pop()):
            rows.append(TournamentRow(
                index=i + 1, opener=-1, declarer=-1, contract="", doubling="",
                declarer_tricks=-1, made=False,
                points={s: tuple(float(x) for x in points_by_scheme[s][i])
                        for s in schemes}))
        return cls(rows=tuple(rows), schemes=schemes)

    def to_json(self) -> dict:
        return {
            "meta": {"seed": self.seed, "version": __version__, "config": dict(self.config)},
            "rows": [r.to_json() for r in self.rows],
            "totals": {s.value: list(self.totals(s)) for s in self.schemes},
            "sd": {s.value: self.sd(s) for s in self.schemes},
        }

    def to_csv(self) -> str:
        out = io.StringIO()
        w = csv.writer(out)
        w.writerow(["game", "bidder", "contract", "doubling", "tricks", "scheme",
                    "p0", "p1", "p2"])
        for row in self.rows:
            for scheme in self.schemes:
                p = row.points[scheme]
                w.writerow([row.index, row.declarer, row.contract, row.doubling,
                            row.declarer_tricks, scheme.value, p[0], p[1], p[2]])
        return out.getvalue()


def run_tournament(seats: Sequence[tuple[BidPolicy, PlayPolicy]], n_deals: int,
                   schemes: Sequence[Scheme], seed: int) -> TournamentReport:
    """Play n deals: rotate the opener, auction with each seat's bid policy,
    play out, and settle under every requested scheme."""
    if len(seats) != 3:
        raise HarnessError("a tournament needs exactly three seat configs")
    schemes = tuple(schemes)
    rows = []
    play_policies = {s: seats[s][1] for s in range(3)}
    for i in range(n_deals):
        deal = deal_random(derive_seed(seed, i))
        state = AuctionState.new(opener=i % 3)
        while not state.is_complete:
            seat = state.seat_to_act
            call = seats[seat][0].choose(state, deal.hands[seat], seat)
            state = apply_call(state, seat, call)
        contract = contract_of(state)
        outcome = play_deal(deal, contract, play_policies)
        honors = honors_for_deal(deal, contract)
        points = {
            scheme: score_deal(contract, outcome.declarer_tricks, honors, scheme).per_seat
            for scheme in schemes
        }
        rows.append(TournamentRow(
            index=i + 1, opener=i % 3, declarer=contract.declarer,
            contract=f"{contract.level}{contract.denom.symbol}",
            doubling=contract.doubling.name.lower(),
            declarer_tricks=outcome.declarer_tricks,
            made=outcome.declarer_tricks >= contract.target_tricks,
            points=points))
    config = {f"seat{s}": f"{seats[s][0].name}+{seats[s][1].name}" for s in range(3)}
    return TournamentReport(rows=tuple(rows), schemes=schemes, seed=seed, config=config)


# --- split enumeration -----------------------------------------------------------

SPLIT_DECLARER = 1  # the fixed hand declares; its partner is the phantom seat 3


@dataclass(frozen=True)
class SplitDistribution:
    """Frequency of declarer-side trick counts over partner splits."""

    frequencies: tuple[int, ...]
    mode: str  # "exact" or "sampled"
    total: int
    seed: Optional[int] = None

    def __post_init__(self):
        if len(self.frequencies) != 14:
            raise HarnessError("frequencies must cover 0..13 tricks")
        if sum(self.frequencies) != self.total:
            raise HarnessError("frequencies must sum to the number of splits")

    def to_json(self) -> dict:
        return {
            "meta": {"seed": self.seed, "version": __version__,
                     "config": {"mode": self.mode, "total": self.total}},
            "frequencies": list(self.frequencies),
        }

    def to_csv(self) -> str:
        out = io.StringIO()
        w = csv.writer(out)
        w.writerow(["tricks", "frequency"])
        for tricks, freq in enumerate(self.frequencies):
            w.writerow([tricks, freq])
        return out.getvalue()


def enumerate_splits(hand_decl: Hand, hand_dummy: Hand,
                     policies: Optional[Mapping[int, PlayPolicy]] = None,
                     mode: str = "exact", n_samples: int = 10_000, seed: int = 0,
                     workers: Optional[int] = None,
                     progress: Optional[Callable[[int, int], None]] = None,
                     ) -> SplitDistribution:
    """Distribute the 26 free cards between the two defenders and play every
    (or a sampled set of) split(s), tallying declarer-side tricks.

    Exact mode walks all choose(26,13) = 10,400,600 splits with the compiled
    kernel across worker threads; `progress(done, total)` is called per chunk.
    """
    from .cards import FULL_DECK
    if len(hand_decl) != 13 or len(hand_dummy) != 13:
        raise HarnessError("both fixed hands need exactly 13 cards")
    if set(hand_decl) & set(hand_dummy):
        raise HarnessError("the fixed hands overlap")
    taken = set(hand_decl) | set(hand_dummy)
    rest = np.array([c.index for c in FULL_DECK if c not in taken], dtype=np.int32)
    assert rest.size == 26
    decl = np.array([c.index for c in hand_decl], dtype=np.int32)
    dummy = np.array([c.index for c in hand_dummy], dtype=np.int32)
    if policies is None:
        policies = {s: GeneralStrategy() for s in range(4)}
    codes = _policy_codes_for(policies, declarer=SPLIT_DECLARER)
    trump = -1  # played at no-trump
    leader = opening_leader(SPLIT_DECLARER)

    if mode == "sampled":
        if codes is not None:
            freq = fastplay.sample_splits_kernel(fastplay.u64(seed), n_samples, rest, decl,
                                                 dummy, codes, trump, leader)
            freqs = tuple(int(x) for x in freq)
        else:
            freqs = _sample_splits_python(rest, decl, dummy, policies, n_samples, seed)
        return SplitDistribution(frequencies=freqs, mode="sampled",
                                 total=n_samples, seed=seed)

    if mode != "exact":
        raise HarnessError(f"unknown mode {mode!r} (expected 'exact' or 'sampled')")
    if codes is None:
        raise HarnessError("exact mode requires kernel-compatible policies "
                           "(hcf, lcf or general); use sampled mode instead")
    comb_table = fastplay.comb_table_64()
    total = int(comb_table[26, 13])
    workers = workers or os.cpu_count() or 1
    n_chunks = max(workers * 8, 1)
    bounds = [(total * c // n_chunks, total * (c + 1) // n_chunks)
              for c in range(n_chunks)]
    tallies = np.zeros((n_chunks, 14), dtype=np.int64)

    def run_chunk(idx: int):
        start, stop = bounds[idx]
        fastplay._tally_splits_range(start, stop, rest, decl, dummy, comb_table,
                                     codes, trump, leader, tallies[idx])
        return stop - start

    done = 0
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for n in pool.map(run_chunk, range(n_chunks)):
            done += n
            if progress is not None:
                progress(done, total)
    freq = tallies.sum(axis=0)
    return SplitDistribution(frequencies=tuple(int(x) for x in freq),
                             mode="exact", total=total)


def _sample_splits_python(rest: np.ndarray, decl: np.ndarray, dummy: np.ndarray,
                          policies: Mapping[int, PlayPolicy], n_samples: int,
                          seed: int) -> tuple[int, ...]:
    from .cards import SplitMix64, card_from_index
    freq = [0] * 14
    rest_cards = [card_from_index(int(i)) for i in rest]
    decl_hand = Hand(card_from_index(int(i)) for i in decl)
    dummy_hand = Hand(card_from_index(int(i)) for i in dummy)
    contract = Contract(declarer=SPLIT_DECLARER, level=1, denom=Denomination.NO_TRUMP)
    for s in range(n_samples):
        pool = list(rest_cards)
        rng = SplitMix64(derive_seed(seed, s))
        for i in range(25, 0, -1):
            j = rng.below(i + 1)
            pool[i], pool[j] = pool[j], pool[i]
        deal = Deal(hands=(Hand(pool[:13]), decl_hand, Hand(pool[13:]), dummy_hand))
        outcome = play_deal(deal, contract, {s: policies[s] for s in range(3)})
        freq[outcome.declarer_tricks] += 1
    return tuple(freq)


def honor_combo_mc(combo_set: Sequence[Mapping[str, int]], n_samples: int,
                   seed: int) -> float:
    """Monte Carlo frequency of the exact-profile honor events (the sampling
    cross-check for the closed-form computation)."""
    rows = []
    for combo in combo_set:
        profile = combo_profile(combo)
        row = np.full(13, -1, dtype=np.int64)
        for rank, count in profile.items():
            row[RANKS.index(rank)] = count
        rows.append(row)
    profiles = np.stack(rows) if rows else np.zeros((0, 13), dtype=np.int64)
    if n_samples <= 0:
        raise HarnessError("n_samples must be positive")
    hits = fastplay.honor_profile_hits_kernel(fastplay.u64(seed), n_samples, profiles)
    return int(hits) / n_samples


# --- fixture reproduction ---------------------------------------------------------

@dataclass(frozen=True)
class FixtureReport:
    rows: tuple[FixtureRow, ...]

    @property
    def all_teams_match(self) -> bool:
        return all(r.team_match for r in self.rows)

    @property
    def all_per_seat_match(self) -> bool:
        return all(r.per_seat_match for r in self.rows)

    def to_json(self) -> dict:
        return {"rows": [r.to_json() for r in self.rows],
                "allTeamsMatch": self.all_teams_match,
                "allPerSeatMatch": self.all_per_seat_match}


def reproduce_fixtures() -> FixtureReport:
    """Replay the worked example deal under each plan and compare the per-seat
    trick vectors and team splits against the reference values."""
    rows = []
    for name, (expected_seats, expected_teams) in EXAMPLE1_EXPECTED.items():
        policy = parse_play_policy(name)
        outcome = play_deal(EXAMPLE1_DEAL, EXAMPLE1_CONTRACT,
                            {0: policy, 1: policy, 2: policy})
        seats = outcome.per_seat_tricks
        teams = (seats[0] + seats[2], seats[1] + seats[3])
        rows.append(FixtureRow(strategy=name, per_seat=seats, team_split=teams,
                               expected_per_seat=expected_seats,
                               expected_team_split=expected_teams))
    return FixtureReport(rows=tuple(rows))
