import itertools
import random
import threading

import pytest
from fastapi.testclient import TestClient

from tribridge.cards import parse_card
from tribridge.service import Session, SessionError, SessionManager, create_app


@pytest.fixture
def client():
    return TestClient(create_app(SessionManager()))


def new_session(client, seats=("human", "general", "general"), seed=9, **extra):
    body = {"seats": list(seats), "seed": seed, **extra}
    response = client.post("/sessions", json=body)
    assert response.status_code == 200, response.json()
    return response.json()["sessionId"]


def drive_full_deal(client, sid, seat=0, max_steps=400):
    """Advance through one full deal picking the first legal action each turn."""
    for _ in range(max_steps):
        view = client.get(f"/sessions/{sid}/seats/{seat}").json()
        if view["dealIndex"] >= 1:
            return view
        actions = view["legalActions"]
        assert actions, f"human starved of actions in phase {view['phase']}"
        response = client.post(f"/sessions/{sid}/seats/{seat}/actions",
                               json={"action": actions[0],
                                     "stateVersion": view["stateVersion"]})
        assert response.status_code == 200, response.json()
    raise AssertionError("deal did not finish")


class TestSessionCreation:
    def test_one_human_two_bots(self, client):
        sid = new_session(client)
        state = client.get(f"/sessions/{sid}").json()
        assert state["phase"] in ("auction", "play")

    def test_rejects_bot_only(self, client):
        response = client.post("/sessions", json={"seats": ["general"] * 3})
        assert response.status_code == 400
        assert response.json()["error"]["rule"] == "bad-config"

    def test_rejects_wrong_seat_count(self, client):
        response = client.post("/sessions", json={"seats": ["human"]})
        assert response.status_code == 400

    def test_fixed_seed_reproduces_deal(self, client):
        sid1 = new_session(client, seed=123)
        sid2 = new_session(client, seed=123)
        h1 = client.get(f"/sessions/{sid1}/seats/0").json()["hand"]
        h2 = client.get(f"/sessions/{sid2}/seats/0").json()["hand"]
        assert h1 == h2

    def test_unknown_session_404(self, client):
        assert client.get("/sessions/zzz").status_code == 404


class TestInformationHiding:
    def test_view_never_carries_other_hands(self, client):
        sid = new_session(client, seats=("human", "human", "general"), seed=4)
        v0 = client.get(f"/sessions/{sid}/seats/0").json()
        v1 = client.get(f"/sessions/{sid}/seats/1").json()
        assert set(v0["hand"]).isdisjoint(v1["hand"])
        for view in (v0, v1):
            assert view["dummy"] is None  # opening lead not made yet
            assert len(view["hand"]) == 13

    def test_dummy_revealed_after_opening_lead(self, client):
        sid = new_session(client, seed=9)
        seen_dummy = None
        for _ in range(300):
            view = client.get(f"/sessions/{sid}/seats/0").json()
            if view["phase"] == "play" and view["trick"] or (
                    view["phase"] == "play" and view.get("playLog")):
                assert view["dummy"] is not None
                seen_dummy = view["dummy"]
                break
            actions = view["legalActions"]
            if not actions:
                continue
            client.post(f"/sessions/{sid}/seats/0/actions",
                        json={"action": actions[0]})
        assert seen_dummy is not None

    ALLOWED_VIEW_KEYS = {
        "sessionId", "stateVersion", "seat", "phase", "dealIndex", "opener",
        "seats", "scores", "lastSettlement", "legalActions", "dummySeat",
        "hand", "auction", "dummy", "trick", "contract", "perSeatTricks",
        "playLog",
    }

    def test_concealed_cards_never_leak_during_full_deal(self, client):
        # Card-bearing fields are exactly: own hand, revealed dummy, the trick
        # and the play log.  Everything in them must be own or publicly played,
        # and the payload may not grow new fields that could smuggle hands.
        sid = new_session(client, seed=31)
        own = set(client.get(f"/sessions/{sid}/seats/0").json()["hand"])
        for _ in range(400):
            view = client.get(f"/sessions/{sid}/seats/0").json()
            if view["dealIndex"] >= 1:
                break
            assert set(view) <= self.ALLOWED_VIEW_KEYS, set(view) - self.ALLOWED_VIEW_KEYS
            played = {e["card"] for e in view.get("playLog") or []}
            played |= {t["card"] for t in view.get("trick") or []}
            dummy = set(view.get("dummy") or [])
            assert set(view["hand"]) <= own
            assert dummy.isdisjoint(own)
            for action in view["legalActions"]:
                if action["type"] == "play":
                    visible = own | dummy | played
                    assert action["card"] in visible
            actions = view["legalActions"]
            if actions:
                client.post(f"/sessions/{sid}/seats/0/actions",
                            json={"action": actions[0]})


class TestActions:
    def test_full_deal_settles_both_schemes(self, client):
        sid = new_session(client, seed=9)
        view = drive_full_deal(client, sid)
        settlement = view["lastSettlement"]
        assert set(settlement["settlements"]) == {"previous", "new"}
        assert sum(settlement["perSeatTricks"]) == 13
        breakdown = settlement["settlements"]["previous"]["breakdown"]
        assert set(breakdown) == {"trickPoints", "overtrickPoints", "insult",
                                  "slamBonus", "honors", "penalties"}

    def test_illegal_actions_name_rules(self, client):
        sid = new_session(client, seed=9)
        view = client.get(f"/sessions/{sid}/seats/0").json()
        assert view["phase"] == "auction"
        # playing a card during the auction
        r = client.post(f"/sessions/{sid}/seats/0/actions",
                        json={"action": {"type": "play", "card": "AS"}})
        assert r.status_code == 400
        assert r.json()["error"]["rule"] == "wrong-phase"
        # bot seats cannot be driven from outside
        r = client.post(f"/sessions/{sid}/seats/1/actions",
                        json={"action": {"type": "call", "call": "PASS"}})
        assert r.json()["error"]["rule"] == "not-a-human-seat"
        # malformed call text
        r = client.post(f"/sessions/{sid}/seats/0/actions",
                        json={"action": {"type": "call", "call": "8NT"}})
        assert r.json()["error"]["rule"] == "bad-call"

    def test_opener_cannot_pass_and_rule_is_named(self, client):
        sid = new_session(client, seed=9)
        view = client.get(f"/sessions/{sid}/seats/0").json()
        calls = {a["call"] for a in view["legalActions"]}
        assert "PASS" not in calls and len(calls) == 35
        r = client.post(f"/sessions/{sid}/seats/0/actions",
                        json={"action": {"type": "call", "call": "PASS"}})
        assert r.status_code == 400
        assert r.json()["error"]["rule"] == "auction-legality"

    def test_stale_version_conflict(self, client):
        sid = new_session(client, seed=9)
        view = client.get(f"/sessions/{sid}/seats/0").json()
        action = view["legalActions"][0]
        ok = client.post(f"/sessions/{sid}/seats/0/actions",
                         json={"action": action, "stateVersion": view["stateVersion"]})
        assert ok.status_code == 200
        stale = client.post(f"/sessions/{sid}/seats/0/actions",
                            json={"action": action,
                                  "stateVersion": view["stateVersion"]})
        assert stale.status_code == 409
        assert stale.json()["error"]["rule"] == "state-version-conflict"

    def test_follow_suit_enforced_for_humans(self, client):
        sid = new_session(client, seed=9)
        for _ in range(300):
            view = client.get(f"/sessions/{sid}/seats/0").json()
            if view["dealIndex"] >= 1:
                break
            actions = view["legalActions"]
            if not actions:
                continue
            if view["phase"] == "play":
                legal_cards = {a["card"] for a in actions}
                hand = set(view["hand"])
                illegal = hand - legal_cards
                if illegal:
                    bad = sorted(illegal)[0]
                    r = client.post(f"/sessions/{sid}/seats/0/actions",
                                    json={"action": {"type": "play", "card": bad}})
                    assert r.status_code == 400
                    assert r.json()["error"]["rule"] == "play-legality"
                    break
            client.post(f"/sessions/{sid}/seats/0/actions",
                        json={"action": actions[0]})

    def test_max_deals_finishes_session(self, client):
        sid = new_session(client, seed=9, maxDeals=1)
        view = drive_full_deal(client, sid)
        assert view["phase"] == "finished"
        r = client.post(f"/sessions/{sid}/seats/0/actions",
                        json={"action": {"type": "call", "call": "1C"}})
        assert r.json()["error"]["rule"] == "session-finished"


class TestEvents:
    def test_event_stream_is_ordered_and_schema_complete(self, client):
        sid = new_session(client, seed=9)
        drive_full_deal(client, sid)
        body = client.get(f"/sessions/{sid}/events",
                          params={"since": 0, "timeout": 0.05}).json()
        versions = [e["stateVersion"] for e in body["events"]]
        assert versions == sorted(versions)
        for event in body["events"]:
            assert set(event) == {"type", "sessionId", "seat", "payload",
                                  "stateVersion"}
        types = {e["type"] for e in body["events"]}
        assert {"call", "play", "settlement"} <= types

    def test_since_filters(self, client):
        sid = new_session(client, seed=9)
        head = client.get(f"/sessions/{sid}/events",
                          params={"since": 0, "timeout": 0.05}).json()
        last = head["stateVersion"]
        tail = client.get(f"/sessions/{sid}/events",
                          params={"since": last, "timeout": 0.05}).json()
        assert tail["events"] == []


class TestStaticMount:
    def test_serves_web_client_when_directory_given(self, tmp_path):
        (tmp_path / "index.html").write_text("<html><body>table</body></html>")
        app = create_app(SessionManager(), static_dir=str(tmp_path))
        local = TestClient(app)
        response = local.get("/app/")
        assert response.status_code == 200
        assert "table" in response.text

    def test_no_mount_without_directory(self, client):
        assert client.get("/app/").status_code == 404


class TestConcurrency:
    def test_exactly_one_of_two_racing_submissions_wins(self):
        manager = SessionManager()
        session = manager.create({"seats": ["human", "general", "general"],
                                  "seed": 77})
        view_version = session.version
        action = {"type": "call", "call": "7NT"}
        results = []

        def submit():
            try:
                session.apply_action(0, action, view_version)
                results.append("ok")
            except SessionError as exc:
                results.append(exc.rule)

        threads = [threading.Thread(target=submit) for _ in range(2)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert sorted(results) == ["ok", "state-version-conflict"]


class TestProtocolFuzz:
    def test_random_messages_cannot_corrupt_state(self, client):
        rnd = random.Random(10)
        sid = new_session(client, seats=("human", "human", "general"), seed=55)
        cards = [f"{r}{s}" for r in "23456789TJQKA" for s in "CDHS"]
        calls = ["PASS", "X", "XX", "1C", "2H", "7NT", "3D", "8NT", "zzz"]
        for step in range(300):
            seat = rnd.randrange(3)
            if rnd.random() < 0.5:
                action = {"type": "call", "call": rnd.choice(calls)}
            else:
                action = {"type": "play", "card": rnd.choice(cards)}
            r = client.post(f"/sessions/{sid}/seats/{seat}/actions",
                            json={"action": action})
            assert r.status_code in (200, 400, 404, 409)
            if r.status_code != 200:
                assert "rule" in r.json()["error"]
            # state stays well-formed for every seat
            for s in range(3):
                view = client.get(f"/sessions/{sid}/seats/{s}").json()
                assert view["phase"] in ("auction", "play", "finished")
                assert len(view["hand"]) <= 13
