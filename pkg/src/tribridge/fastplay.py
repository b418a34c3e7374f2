"""Numba kernels for bulk playouts: integer cards, identical results to play.py.

Cards are encoded as suit*13 + rank_index (rank_index 0 is the two, 12 the
ace), matching Card.index.  Every kernel reimplements the pure-Python rules
exactly; the equivalence is pinned by tests, never assumed.
"""
from __future__ import annotations

import numpy as np
from numba import njit

HCF, LCF, GENERAL = 0, 1, 2
POLICY_CODES = {"hcf": HCF, "lcf": LCF, "general": GENERAL}

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


def u64(seed: int) -> np.uint64:
    """Mask an arbitrary Python int into the uint64 the kernels expect."""
    return np.uint64(seed & 0xFFFFFFFFFFFFFFFF)


@njit(cache=True, inline="always")
def _mix64(z):
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


@njit(cache=True)
def derive_seed_fast(master, index):
    return _mix64(np.uint64(master) + np.uint64(index + 1) * _GAMMA)


@njit(cache=True)
def shuffle_deck_fast(seed, deck):
    """Fisher-Yates over the canonical deck, same stream as cards.deal_random."""
    for i in range(52):
        deck[i] = i
    state = np.uint64(seed)
    for i in range(51, 0, -1):
        state = state + _GAMMA
        j = int(_mix64(state) % np.uint64(i + 1))
        tmp = deck[i]
        deck[i] = deck[j]
        deck[j] = tmp


@njit(cache=True, inline="always")
def _order_key(card, trump):
    # (rank, trump flag, suit) packed into one int; mirrors policies._rank_key.
    rank = card % 13
    suit = card // 13
    t = 1 if suit == trump else 0
    return rank * 8 + t * 4 + suit


@njit(cache=True, inline="always")
def _beats(card, winner, lead_suit, trump):
    cs = card // 13
    ws = winner // 13
    if trump >= 0:
        if cs == trump and ws != trump:
            return True
        if ws == trump and cs != trump:
            return False
        if cs == trump and ws == trump:
            return card % 13 > winner % 13
    if cs != lead_suit:
        return False
    if ws != lead_suit:
        return False
    return card % 13 > winner % 13


@njit(cache=True)
def _choose_index(code, cards, n, lead_suit, win_card, trump):
    """Index into cards[:n] that the coded policy plays."""
    if lead_suit < 0:  # leading
        best = 0
        if code == LCF:
            for i in range(1, n):
                if _order_key(cards[i], trump) < _order_key(cards[best], trump):
                    best = i
        else:  # HCF and GENERAL both lead high
            for i in range(1, n):
                if _order_key(cards[i], trump) > _order_key(cards[best], trump):
                    best = i
        return best

    has_match = False
    for i in range(n):
        if cards[i] // 13 == lead_suit:
            has_match = True
            break

    if not has_match:  # void: every plan sheds its lowest card
        best = 0
        for i in range(1, n):
            if _order_key(cards[i], trump) < _order_key(cards[best], trump):
                best = i
        return best

    if code == HCF:
        best = -1
        for i in range(n):
            if cards[i] // 13 != lead_suit:
                continue
            if best < 0 or _order_key(cards[i], trump) > _order_key(cards[best], trump):
                best = i
        return best
    if code == LCF:
        best = -1
        for i in range(n):
            if cards[i] // 13 != lead_suit:
                continue
            if best < 0 or _order_key(cards[i], trump) < _order_key(cards[best], trump):
                best = i
        return best

    # GENERAL: beat the current winner if a lead-suit card can, else low.
    beatable = win_card // 13 == lead_suit
    bar = win_card % 13
    best = -1
    if beatable:
        for i in range(n):
            if cards[i] // 13 != lead_suit or cards[i] % 13 <= bar:
                continue
            if best < 0 or _order_key(cards[i], trump) > _order_key(cards[best], trump):
                best = i
        if best >= 0:
            return best
    for i in range(n):
        if cards[i] // 13 != lead_suit:
            continue
        if best < 0 or _order_key(cards[i], trump) < _order_key(cards[best], trump):
            best = i
    return best


@njit(cache=True)
def play_deal_fast(hands, policy_codes, trump, leader):
    """Play 13 tricks; hands is int32[4,13] (consumed), returns per-seat tricks."""
    rem = hands.copy()
    cnt = np.full(4, 13, dtype=np.int32)
    tricks = np.zeros(4, dtype=np.int32)
    for _ in range(13):
        lead_suit = -1
        win_seat = -1
        win_card = -1
        for k in range(4):
            seat = (leader + k) % 4
            pick = _choose_index(policy_codes[seat], rem[seat], cnt[seat],
                                 lead_suit, win_card, trump)
            card = rem[seat, pick]
            cnt[seat] -= 1
            rem[seat, pick] = rem[seat, cnt[seat]]
            if k == 0:
                lead_suit = card // 13
                win_seat = seat
                win_card = card
            elif _beats(card, win_card, lead_suit, trump):
                win_seat = seat
                win_card = card
        tricks[win_seat] += 1
        leader = win_seat
    return tricks


@njit(cache=True)
def simulate_nt_kernel(master_seed, n_deals, t1, t2, t3, rank_weights,
                       policy_codes, declarer, leader):
    """Count kNT calls by the declarer seat's points and made/failed by playout.

    Returns int64[2][4] (calls, made) indexed by level; level 0 unused.
    """
    calls = np.zeros(4, dtype=np.int64)
    made = np.zeros(4, dtype=np.int64)
    deck = np.empty(52, dtype=np.int32)
    hands = np.empty((4, 13), dtype=np.int32)
    for i in range(n_deals):
        shuffle_deck_fast(derive_seed_fast(master_seed, i), deck)
        pts = 0
        for k in range(13):
            pts += rank_weights[deck[13 * declarer + k] % 13]
        level = 0
        if pts >= t1:
            level = 1
        if pts >= t2:
            level = 2
        if pts >= t3:
            level = 3
        if level == 0:
            continue
        calls[level] += 1
        for s in range(4):
            for k in range(13):
                hands[s, k] = deck[13 * s + k]
        tricks = play_deal_fast(hands, policy_codes, -1, leader)
        if tricks[declarer] + tricks[3] >= level + 6:
            made[level] += 1
    return calls, made


@njit(cache=True)
def _unrank_combination(rank, n, k, comb_table, out):
    """Lexicographic 0-based unranking of a k-subset of range(n)."""
    r = rank
    c = 0
    for i in range(k):
        while comb_table[n - 1 - c, k - 1 - i] <= r:
            r -= comb_table[n - 1 - c, k - 1 - i]
            c += 1
        out[i] = c
        c += 1


@njit(cache=True, inline="always")
def _next_combination(a, n, k):
    """Advance to the lexicographic successor in place; False when exhausted."""
    i = k - 1
    while i >= 0 and a[i] == n - k + i:
        i -= 1
    if i < 0:
        return False
    a[i] += 1
    for j in range(i + 1, k):
        a[j] = a[j - 1] + 1
    return True


@njit(cache=True, nogil=True)
def _tally_splits_range(start, stop, rest, decl_hand, dummy_hand, comb_table,
                        policy_codes, trump, leader, freq):
    """Play every split whose combination rank lies in [start, stop).

    nogil so the harness can drive disjoint ranges from worker threads while
    reporting progress; the tally per range is independent of scheduling.
    """
    subset = np.empty(13, dtype=np.int64)
    _unrank_combination(start, 26, 13, comb_table, subset)
    hands = np.empty((4, 13), dtype=np.int32)
    taken = np.zeros(26, dtype=np.uint8)
    for r in range(start, stop):
        for i in range(26):
            taken[i] = 0
        for i in range(13):
            hands[0, i] = rest[subset[i]]
            taken[subset[i]] = 1
        j = 0
        for i in range(26):
            if taken[i] == 0:
                hands[2, j] = rest[i]
                j += 1
        for i in range(13):
            hands[1, i] = decl_hand[i]
            hands[3, i] = dummy_hand[i]
        tricks = play_deal_fast(hands, policy_codes, trump, leader)
        freq[tricks[1] + tricks[3]] += 1
        if r + 1 < stop:
            _next_combination(subset, 26, 13)


@njit(cache=True, nogil=True)
def sample_splits_kernel(master_seed, n_samples, rest, decl_hand, dummy_hand,
                         policy_codes, trump, leader):
    freq = np.zeros(14, dtype=np.int64)
    pool = np.empty(26, dtype=np.int32)
    hands = np.empty((4, 13), dtype=np.int32)
    for s in range(n_samples):
        for i in range(26):
            pool[i] = rest[i]
        state = derive_seed_fast(master_seed, s)
        for i in range(25, 0, -1):
            state = state + _GAMMA
            j = int(_mix64(state) % np.uint64(i + 1))
            tmp = pool[i]
            pool[i] = pool[j]
            pool[j] = tmp
        for i in range(13):
            hands[0, i] = pool[i]
            hands[2, i] = pool[13 + i]
            hands[1, i] = decl_hand[i]
            hands[3, i] = dummy_hand[i]
        tricks = play_deal_fast(hands, policy_codes, trump, leader)
        freq[tricks[1] + tricks[3]] += 1
    return freq


@njit(cache=True)
def honor_profile_hits_kernel(master_seed, n_samples, profiles):
    """Monte Carlo oracle for honor-combination probabilities.

    profiles: int64[n_rows, 13] pinned counts per rank index (-1 = free rank).
    Counts hands whose per-rank counts match any row exactly.
    """
    hits = np.int64(0)
    deck = np.empty(52, dtype=np.int32)
    counts = np.zeros(13, dtype=np.int32)
    n_rows = profiles.shape[0]
    for s in range(n_samples):
        state = derive_seed_fast(master_seed, s)
        for i in range(52):
            deck[i] = i
        # partial Fisher-Yates: only the last 13 positions are needed
        for i in range(51, 38, -1):
            state = state + _GAMMA
            j = int(_mix64(state) % np.uint64(i + 1))
            tmp = deck[i]
            deck[i] = deck[j]
            deck[j] = tmp
        for r in range(13):
            counts[r] = 0
        for i in range(39, 52):
            counts[deck[i] % 13] += 1
        for row in range(n_rows):
            ok = True
            for r in range(13):
                want = profiles[row, r]
                if want >= 0 and counts[r] != want:
                    ok = False
                    break
            if ok:
                hits += 1
                break
    return hits


def comb_table_64(n_max: int = 26, k_max: int = 13) -> np.ndarray:
    table = np.zeros((n_max + 1, k_max + 1), dtype=np.int64)
    table[:, 0] = 1
    for n in range(1, n_max + 1):
        for k in range(1, k_max + 1):
            table[n, k] = table[n - 1, k - 1] + table[n - 1, k]
    return table
