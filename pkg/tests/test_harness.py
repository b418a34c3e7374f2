import json
import math

import numpy as np
import pytest

from tribridge import fastplay
from tribridge.analytics import (OPENING_RUN_COMBOS, bucket_probs,
                                 honor_combo_prob, point_distribution)
from tribridge.cards import Hand, deal_random, derive_seed, shuffled_deck
from tribridge.fixtures import SPLIT_HAND_PAIRS
from tribridge.harness import (HarnessError, SimReport, TournamentReport,
                               enumerate_splits, honor_combo_mc,
                               reproduce_fixtures, run_tournament,
                               simulate_nt_bidding, _sample_splits_python)
from tribridge.policies import (GeneralStrategy, HighCardFirst, LowCardFirst,
                                PointCountBidder, parse_seat_spec)
from tribridge.scoring import Scheme

from conftest import hand


class TestFastKernelEquivalence:
    """The compiled kernels must replay the pure-Python rules exactly."""

    def test_shuffle_stream_matches(self):
        deck = np.empty(52, dtype=np.int32)
        for seed in [0, 1, 42, 2**63 + 11, 2**64 - 1]:
            fastplay.shuffle_deck_fast(fastplay.u64(seed), deck)
            assert list(deck) == [c.index for c in shuffled_deck(seed)]

    def test_derived_seeds_match(self):
        for master in [0, 9, 2**62]:
            for index in [0, 1, 1234]:
                assert int(fastplay.derive_seed_fast(fastplay.u64(master), index)) \
                    == derive_seed(master, index)

    def test_playouts_match_engine(self):
        import random
        from tribridge.auction import Contract, Denomination
        from tribridge.play import opening_leader, play_deal
        rnd = random.Random(3)
        policies = {"hcf": HighCardFirst(), "lcf": LowCardFirst(),
                    "general": GeneralStrategy()}
        for _ in range(40):
            deal = deal_random(rnd.getrandbits(60))
            declarer = rnd.randrange(3)
            names = [rnd.choice(list(policies)) for _ in range(4)]
            names[3] = names[declarer]  # dummy is played by the declarer's plan
            denom = rnd.choice(list(Denomination))
            contract = Contract(declarer=declarer, level=1, denom=denom)
            outcome = play_deal(deal, contract,
                                {s: policies[names[s]] for s in range(3)})
            hands = np.array([[c.index for c in h] for h in deal.hands], np.int32)
            codes = np.array([fastplay.POLICY_CODES[n] for n in names], np.int64)
            trump = -1 if denom.trump_suit is None else "CDHS".index(denom.trump_suit)
            tricks = fastplay.play_deal_fast(hands, codes, trump,
                                             opening_leader(declarer))
            assert tuple(int(x) for x in tricks) == outcome.per_seat_tricks


class TestSimulateNtBidding:
    def test_zero_deals(self):
        report = simulate_nt_bidding((20, 25, 30), 0, seed=1)
        assert all(c.calls == 0 and c.made == 0 for c in report.levels.values())

    def test_determinism(self):
        a = simulate_nt_bidding((20, 25, 30), 2_000, seed=5)
        b = simulate_nt_bidding((20, 25, 30), 2_000, seed=5)
        assert a == b

    def test_counters_conserve(self):
        report = simulate_nt_bidding((20, 25, 30), 5_000, seed=5)
        for counts in report.levels.values():
            assert counts.made + counts.failed == counts.calls
        assert sum(c.calls for c in report.levels.values()) <= report.total_deals

    def test_fast_path_equals_python_path(self):
        fast = simulate_nt_bidding((20, 25, 30), 400, seed=9, play_policy="general")

        class WrappedGeneral:
            """Same choices as the general plan, but not kernel-eligible."""
            name = "wrapped-general"

            def choose(self, state, seat):
                return GeneralStrategy().choose(state, seat)

        slow = simulate_nt_bidding((20, 25, 30), 400, seed=9,
                                   play_policy=WrappedGeneral())
        assert {k: (v.calls, v.made) for k, v in fast.levels.items()} == \
               {k: (v.calls, v.made) for k, v in slow.levels.items()}

    def test_same_deal_stream_bucket_identity(self):
        # points in [25,30) bid 2NT under rule one and 1NT under rule two;
        # an identical seed means an identical deal stream, so exact equality
        rule1 = simulate_nt_bidding((20, 25, 30), 20_000, seed=13)
        rule2 = simulate_nt_bidding((25, 30, 35), 20_000, seed=13)
        assert rule1.levels[2].calls == rule2.levels[1].calls

    def test_csv_and_json_forms(self):
        report = simulate_nt_bidding((20, 25, 30), 1_000, seed=3)
        lines = report.to_csv().strip().splitlines()
        assert lines[0] == "ruleset,level,calls,made,failed"
        assert len(lines) == 4
        body = report.to_json()
        assert body["meta"]["seed"] == 3
        assert set(body["levels"]) == {"1", "2", "3"}


class TestTournament:
    def test_structure_and_determinism(self):
        seats = [parse_seat_spec("general"), parse_seat_spec("defensive+hcf"),
                 parse_seat_spec("bluff+lcf")]
        report = run_tournament(seats, 10, (Scheme.PREVIOUS, Scheme.NEW), seed=21)
        again = run_tournament(seats, 10, (Scheme.PREVIOUS, Scheme.NEW), seed=21)
        assert report.to_json() == again.to_json()
        assert len(report.rows) == 10
        for row in report.rows:
            assert row.declarer in (0, 1, 2)
            assert 0 <= row.declarer_tricks <= 13
            for scheme in (Scheme.PREVIOUS, Scheme.NEW):
                pts = row.points[scheme]
                assert len(pts) == 3
                if row.made:
                    defenders = [s for s in range(3) if s != row.declarer]
                    assert all(pts[d] == 0 for d in defenders)

    def test_opener_rotates(self):
        seats = [parse_seat_spec("general")] * 3
        report = run_tournament(seats, 6, (Scheme.PREVIOUS,), seed=2)
        assert [r.opener for r in report.rows] == [0, 1, 2, 0, 1, 2]

    def test_published_match_record_feeds_report(self):
        from tests_data_match import NEW_ROWS, PREVIOUS_ROWS
        report = TournamentReport.from_point_rows(
            {Scheme.PREVIOUS: PREVIOUS_ROWS, Scheme.NEW: NEW_ROWS})
        assert report.totals(Scheme.PREVIOUS) == (518, 549, 392)
        assert report.totals(Scheme.NEW) == (576.5, 605, 515)
        assert report.sd(Scheme.PREVIOUS) == pytest.approx(67.9, abs=0.05)
        assert report.sd(Scheme.NEW) == pytest.approx(37.6, abs=0.05)

    def test_csv_row_format(self):
        seats = [parse_seat_spec("general")] * 3
        report = run_tournament(seats, 2, (Scheme.PREVIOUS,), seed=2)
        header = report.to_csv().splitlines()[0]
        assert header == "game,bidder,contract,doubling,tricks,scheme,p0,p1,p2"

    def test_seat_count_validated(self):
        with pytest.raises(HarnessError):
            run_tournament([parse_seat_spec("general")] * 2, 1, (Scheme.NEW,), 0)


class TestCombinationWalk:
    """The chunked walk's unranking must agree with lexicographic order, which
    is what makes parallel chunk sums identical to a serial pass."""

    def test_unranking_matches_lexicographic_order(self):
        import itertools
        table = fastplay.comb_table_64()
        out = np.empty(13, dtype=np.int64)
        reference = itertools.combinations(range(26), 13)
        for rank, combo in zip(range(200), reference):
            fastplay._unrank_combination(rank, 26, 13, table, out)
            assert tuple(out) == combo

    def test_unranking_random_ranks(self):
        import itertools
        import random
        table = fastplay.comb_table_64()
        out = np.empty(13, dtype=np.int64)
        rnd = random.Random(6)
        total = int(table[26, 13])
        for _ in range(12):
            rank = rnd.randrange(total)
            fastplay._unrank_combination(rank, 26, 13, table, out)
            current = list(out)
            assert current == sorted(current)
            assert all(0 <= x < 26 for x in current)
            # successor stays consistent with unranking the next rank
            a = np.array(current, dtype=np.int64)
            if fastplay._next_combination(a, 26, 13):
                fastplay._unrank_combination(rank + 1, 26, 13, table, out)
                assert list(a) == list(out)

    def test_chunked_ranges_sum_like_one_range(self):
        h2, h4 = SPLIT_HAND_PAIRS[2]
        from tribridge.cards import FULL_DECK
        taken = set(h2) | set(h4)
        rest = np.array([c.index for c in FULL_DECK if c not in taken], np.int32)
        decl = np.array([c.index for c in h2], np.int32)
        dummy = np.array([c.index for c in h4], np.int32)
        codes = np.full(4, fastplay.POLICY_CODES["general"], np.int64)
        table = fastplay.comb_table_64()
        whole = np.zeros(14, dtype=np.int64)
        fastplay._tally_splits_range(0, 3_000, rest, decl, dummy, table,
                                     codes, -1, 2, whole)
        parts = np.zeros((3, 14), dtype=np.int64)
        for i, (lo, hi) in enumerate([(0, 1_000), (1_000, 2_500), (2_500, 3_000)]):
            fastplay._tally_splits_range(lo, hi, rest, decl, dummy, table,
                                         codes, -1, 2, parts[i])
        assert list(parts.sum(axis=0)) == list(whole)


class TestEnumerateSplits:
    def test_sampled_determinism_and_totals(self):
        h2, h4 = SPLIT_HAND_PAIRS[0]
        a = enumerate_splits(h2, h4, mode="sampled", n_samples=2_000, seed=3)
        b = enumerate_splits(h2, h4, mode="sampled", n_samples=2_000, seed=3)
        assert a == b
        assert sum(a.frequencies) == 2_000
        assert a.mode == "sampled"

    def test_python_fallback_matches_kernel_sampling(self):
        h2, h4 = SPLIT_HAND_PAIRS[1]
        import numpy as np
        from tribridge.cards import FULL_DECK
        taken = set(h2) | set(h4)
        rest = np.array([c.index for c in FULL_DECK if c not in taken], np.int32)
        decl = np.array([c.index for c in h2], np.int32)
        dummy = np.array([c.index for c in h4], np.int32)
        pols = {s: GeneralStrategy() for s in range(4)}
        py = _sample_splits_python(rest, decl, dummy, pols, 300, seed=8)
        codes = np.full(4, fastplay.POLICY_CODES["general"], np.int64)
        fast = fastplay.sample_splits_kernel(fastplay.u64(8), 300, rest, decl,
                                             dummy, codes, -1, 2)
        assert tuple(int(x) for x in fast) == py

    def test_overlapping_hands_rejected(self):
        h2, _ = SPLIT_HAND_PAIRS[0]
        with pytest.raises(HarnessError):
            enumerate_splits(h2, h2)

    def test_short_hand_rejected(self):
        h2, h4 = SPLIT_HAND_PAIRS[0]
        with pytest.raises(HarnessError):
            enumerate_splits(hand("2C 3C"), h4)

    def test_csv_shape(self):
        h2, h4 = SPLIT_HAND_PAIRS[0]
        dist = enumerate_splits(h2, h4, mode="sampled", n_samples=100, seed=1)
        lines = dist.to_csv().strip().splitlines()
        assert lines[0] == "tricks,frequency"
        assert len(lines) == 15


class TestHonorComboMc:
    def test_small_sample_close_to_exact(self):
        p = float(honor_combo_prob([{"A": 1, "K": 0, "Q": 0, "J": 0, "T": 0}]))
        mc = honor_combo_mc([{"A": 1, "K": 0, "Q": 0, "J": 0, "T": 0}],
                            200_000, seed=2)
        sigma = math.sqrt(p * (1 - p) / 200_000)
        assert abs(mc - p) < 5 * sigma

    def test_requires_samples(self):
        with pytest.raises(HarnessError):
            honor_combo_mc(OPENING_RUN_COMBOS[7], 0, seed=1)


class TestBuiltinHandPairs:
    def test_all_pairs_are_disjoint_thirteens(self):
        assert len(SPLIT_HAND_PAIRS) == 10
        for decl, dummy in SPLIT_HAND_PAIRS:
            assert len(decl) == 13 and len(dummy) == 13
            assert set(decl).isdisjoint(set(dummy))


class TestFixtureReport:
    def test_all_rows_match_reference(self):
        report = reproduce_fixtures()
        assert report.all_teams_match
        assert report.all_per_seat_match
        for row in report.rows:
            assert sum(row.per_seat) == 13

    def test_json_shape(self):
        body = reproduce_fixtures().to_json()
        assert {r["strategy"] for r in body["rows"]} == {"hcf", "lcf", "general"}
