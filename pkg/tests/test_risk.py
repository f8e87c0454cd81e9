import json
from datetime import datetime, timedelta, timezone

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from topicgrids.risk import (
    ActivityVector,
    IngestError,
    LogEntry,
    Window,
    activity_vector,
    assemble_topic_grids,
    content_document,
    default_window,
    parse_log,
    peers_of,
    risk_vector,
    smoothed_distribution,
)
from topicgrids.sd import split_diffuse
from topicgrids.topics import build_corpus, fit_lda


def ts(day, hour=0):
    return datetime(2016, 1, day, hour, tzinfo=timezone.utc)


def entry(day, user, path, hour=0, meta="", group=None, action="read"):
    return LogEntry(ts=ts(day, hour), user=user, action=action, path=path, meta=meta, group=group)


def jsonl(*objs):
    return [json.dumps(o) for o in objs]


class TestParseLog:
    def test_single_entry(self):
        parsed = parse_log(jsonl({"ts": "2016-01-01T00:00:00Z", "user": "u1", "action": "read", "path": "/a/b.txt"}))
        assert len(parsed.entries) == 1
        e = parsed.entries[0]
        assert e.user == "u1" and e.action == "read" and e.path == "/a/b.txt"
        assert e.ts == ts(1)
        assert e.meta == "" and e.group is None

    def test_malformed_line_reported_not_dropped(self):
        lines = jsonl(*({"ts": "2016-01-01T00:00:00Z", "user": f"u{i}"} for i in range(100)))
        lines.insert(50, "not json")
        parsed = parse_log(lines)
        assert len(parsed.entries) == 100
        assert len(parsed.failures) == 1
        assert parsed.failures[0][0] == 51

    def test_threshold_breach_is_ingest_error(self):
        good = jsonl(*({"ts": "2016-01-01T00:00:00Z", "user": f"u{i}"} for i in range(50)))
        bad = ["{broken"] * 50
        with pytest.raises(IngestError, match="malformed"):
            parse_log(good + bad)

    def test_missing_user_is_malformed(self):
        good = jsonl(*({"ts": "2016-01-01T00:00:00Z", "user": f"u{i}"} for i in range(20)))
        parsed = parse_log(good + jsonl({"ts": "2016-01-01T00:00:00Z"}))
        assert len(parsed.entries) == 20
        assert len(parsed.failures) == 1
        assert "user" in parsed.failures[0][1]

    def test_naive_timestamps_read_as_utc(self):
        parsed = parse_log(jsonl({"ts": "2016-01-02T03:00:00", "user": "u"}))
        assert parsed.entries[0].ts == ts(2, 3)

    def test_blank_lines_ignored(self):
        parsed = parse_log(["", "  ", json.dumps({"ts": "2016-01-01T00:00:00Z", "user": "u"})])
        assert len(parsed.entries) == 1 and not parsed.failures


class TestContentDocument:
    def test_path_plus_meta(self):
        e = entry(1, "u", "/a/payroll.xlsx", meta="finance export")
        assert content_document(e) == "/a/payroll.xlsx finance export"

    def test_meta_absent(self):
        assert content_document(entry(1, "u", "/a/payroll.xlsx")) == "/a/payroll.xlsx"

    def test_both_empty(self):
        assert content_document(entry(1, "u", "")) == ""


@pytest.fixture(scope="module")
def small_model():
    texts = ["alpha bravo charlie alpha"] * 30 + ["delta echo foxtrot delta"] * 30
    return fit_lda(build_corpus(texts), k=2, iterations=150, seed=3)


class TestActivityVector:
    def test_no_matching_entries_is_zero(self, small_model):
        window = Window(ts(10), ts(11))
        av = activity_vector([], small_model, "u1", "current", window)
        assert np.array_equal(av.mass, np.zeros(2))

    def test_single_entry_mass_equals_relevance(self, small_model):
        from topicgrids.risk import entry_relevance

        e = entry(10, "u1", "/x/alpha_bravo.txt", hour=5)
        window = Window(ts(10), ts(11))
        av = activity_vector([e], small_model, "u1", "current", window)
        assert np.allclose(av.mass, entry_relevance(small_model, e))

    def test_additive_over_entries(self, small_model):
        from topicgrids.risk import entry_relevance

        e1 = entry(10, "u1", "/x/alpha.txt", hour=1)
        e2 = entry(10, "u1", "/y/delta_echo.txt", hour=2)
        window = Window(ts(10), ts(11))
        av = activity_vector([e1, e2], small_model, "u1", "current", window)
        expected = entry_relevance(small_model, e1) + entry_relevance(small_model, e2)
        assert np.allclose(av.mass, expected)

    def test_out_of_vocabulary_entry_contributes_zero(self, small_model):
        e = entry(10, "u1", "/zzz/qqq.bin", hour=1)
        window = Window(ts(10), ts(11))
        av = activity_vector([e], small_model, "u1", "current", window)
        assert np.array_equal(av.mass, np.zeros(2))

    def test_scope_rules(self, small_model):
        window = Window(ts(10), ts(11))
        entries = [
            entry(5, "u1", "/x/alpha.txt", group="g"),       # self history
            entry(10, "u1", "/x/alpha.txt", group="g"),      # current
            entry(12, "u1", "/x/alpha.txt", group="g"),      # after window: nowhere
            entry(9, "u2", "/x/delta.txt", group="g"),       # peer history
            entry(9, "u3", "/x/delta.txt", group="other"),   # not a peer
        ]
        cur = activity_vector(entries, small_model, "u1", "current", window)
        hist = activity_vector(entries, small_model, "u1", "self_history", window)
        peers = activity_vector(entries, small_model, "u1", "peer_history", window)
        assert cur.mass.sum() == pytest.approx(1.0, abs=1e-9)
        assert hist.mass.sum() == pytest.approx(1.0, abs=1e-9)
        assert peers.mass.sum() == pytest.approx(1.0, abs=1e-9)
        assert peers.mass.argmax() == 1  # delta/echo topic

    def test_unknown_scope_rejected(self, small_model):
        with pytest.raises(ValueError, match="scope"):
            activity_vector([], small_model, "u1", "future", Window(ts(1), ts(2)))


class TestPeers:
    def test_group_members_are_peers(self):
        entries = [entry(1, "a", "/p", group="g1"), entry(1, "b", "/p", group="g1"), entry(1, "c", "/p", group="g2")]
        assert peers_of("a", entries) == {"b"}

    def test_no_group_means_everyone_else(self):
        entries = [entry(1, "a", "/p"), entry(1, "b", "/p", group="g1"), entry(1, "c", "/p")]
        assert peers_of("a", entries) == {"b", "c"}


class TestRiskVector:
    def test_identical_nonzero_masses_zero_risk(self):
        mass = np.array([0.2, 0.8])
        assert np.allclose(risk_vector(mass, mass.copy()), 0.0)

    def test_opposite_unit_masses(self):
        r = risk_vector(np.array([1.0, 0.0]), np.array([0.0, 1.0]))
        assert abs(r[0] - 1.0) < 1e-5
        assert r[1] == 0.0

    def test_partial_shift(self):
        r = risk_vector(np.array([0.5, 0.5]), np.array([0.75, 0.25]))
        assert r[0] == pytest.approx(0.0, abs=1e-5)
        assert r[1] == pytest.approx(0.25, abs=1e-5)

    def test_zero_baseline_becomes_uniform(self):
        r = risk_vector(np.array([1.0, 0.0]), np.zeros(2))
        assert r[0] == pytest.approx(0.5, abs=1e-5)

    def test_k_mismatch_rejected(self):
        with pytest.raises(ValueError, match="mismatch"):
            risk_vector(np.zeros(2), np.zeros(3))

    def test_accepts_activity_vectors(self, small_model):
        window = Window(ts(10), ts(11))
        av = ActivityVector("u", "current", window, np.array([1.0, 3.0]))
        bv = ActivityVector("u", "self_history", window, np.array([1.0, 3.0]))
        assert np.allclose(risk_vector(av, bv), 0.0)

    @settings(max_examples=200, deadline=None)
    @given(
        cur=st.lists(st.floats(0, 1e6), min_size=2, max_size=16),
        base=st.lists(st.floats(0, 1e6), min_size=2, max_size=16),
    )
    def test_total_risk_bounded(self, cur, base):
        k = min(len(cur), len(base))
        r = risk_vector(np.array(cur[:k]), np.array(base[:k]))
        assert (r >= 0).all()
        assert 0.0 <= r.sum() < 1.0

    @settings(max_examples=100, deadline=None)
    @given(mass=st.lists(st.floats(0, 1e6), min_size=2, max_size=16))
    def test_zero_iff_equal_smoothed(self, mass):
        m = np.array(mass)
        assert risk_vector(m, m.copy()).sum() == 0.0

    def test_smoothed_distribution_uniform_on_zero(self):
        assert np.allclose(smoothed_distribution(np.zeros(4)), 0.25)


class TestAssembleTopicGrids:
    def test_requires_matching_topic_count(self, small_model):
        placement = split_diffuse(np.random.default_rng(0).random((4, 2)), 1)
        with pytest.raises(ValueError, match="topics"):
            assemble_topic_grids(
                small_model, placement, ["aa", "bb", "cc", "dd"], "u1",
                Window(ts(10), ts(11)), [],
            )


@pytest.fixture(scope="module")
def four_topic_model():
    themes = {
        "alpha": ["alpha", "bravo", "charlie"],
        "delta": ["delta", "echo", "foxtrot"],
        "golf": ["golf", "hotel", "india"],
        "kilo": ["kilo", "lima", "mike"],
    }
    texts = []
    for words in themes.values():
        texts.extend([" ".join(words * 3)] * 25)
    # alpha comparable to the production default (50/64): short documents keep
    # a sharp topic signal through fold-in
    return fit_lda(build_corpus(texts), k=4, alpha=0.8, iterations=200, seed=5)


def theme_topic(model, words):
    index = {w: i for i, w in enumerate(model.vocabulary)}
    mass = np.zeros(model.k)
    for w in words:
        if w in index:
            mass += model.topic_word[:, index[w]]
    return int(mass.argmax())


class TestGridSet:
    def make_entries(self):
        entries = []
        for day in range(1, 9):
            entries.append(entry(day, "u1", "/srv/alpha/bravo_charlie.txt", group="g"))
            entries.append(entry(day, "u2", "/srv/golf/hotel_india.txt", group="g"))
        # current window day 10: u1 switches to the kilo theme
        for hour in range(4):
            entries.append(entry(10, "u1", "/srv/kilo/lima_mike.txt", hour=hour, group="g"))
        return entries

    def test_planted_shift_dominates_self_risk(self, four_topic_model):
        entries = self.make_entries()
        placement = split_diffuse(np.random.default_rng(1).random((4, 2)), 1)
        window = Window(ts(10), ts(11))
        grids = assemble_topic_grids(
            four_topic_model, placement, ["t0", "t1", "t2", "t3"], "u1", window, entries
        )
        planted = theme_topic(four_topic_model, ["kilo", "lima", "mike"])
        assert int(grids.self_risk.argmax()) == planted
        assert grids.self_risk.sum() > 0.3

    def test_empty_current_window_gives_zero_vectors(self, four_topic_model):
        entries = self.make_entries()
        placement = split_diffuse(np.random.default_rng(1).random((4, 2)), 1)
        window = Window(ts(20), ts(21))
        grids = assemble_topic_grids(
            four_topic_model, placement, ["t0", "t1", "t2", "t3"], "u1", window, entries
        )
        assert np.array_equal(grids.current, np.zeros(4))
        # an empty current vector is smoothed into uniform; risk reflects the
        # baseline shape, not an error
        assert np.isfinite(grids.self_risk).all()

    def test_replayed_history_has_zero_self_risk(self, four_topic_model):
        placement = split_diffuse(np.random.default_rng(1).random((4, 2)), 1)
        entries = [
            entry(5, "u1", "/srv/alpha/bravo.txt", group="g"),
            entry(10, "u1", "/srv/alpha/bravo.txt", group="g"),
        ]
        grids = assemble_topic_grids(
            four_topic_model, placement, list("abcd"), "u1", Window(ts(10), ts(11)), entries
        )
        assert np.allclose(grids.self_risk, 0.0, atol=1e-12)

    def test_all_five_grids_share_placement_and_shape(self, four_topic_model):
        placement = split_diffuse(np.random.default_rng(1).random((4, 2)), 1)
        grids = assemble_topic_grids(
            four_topic_model, placement, list("abcd"), "u1", Window(ts(10), ts(11)), self.make_entries()
        )
        payload = grids.to_json_dict()
        assert payload["h"] == 1
        assert len(payload["cells"]) == 4
        assert {tuple((c["col"], c["row"]) for c in payload["cells"])}  # stable order
        for cell in payload["cells"]:
            assert set(cell) == {
                "k", "col", "row", "label", "current",
                "self_history", "self_risk", "peer_history", "peer_risk",
            }
        assert payload["totals"]["self_risk"] == pytest.approx(float(grids.self_risk.sum()))

    def test_grid_json_deterministic(self, four_topic_model):
        placement = split_diffuse(np.random.default_rng(1).random((4, 2)), 1)
        args = (four_topic_model, placement, list("abcd"), "u1", Window(ts(10), ts(11)), self.make_entries())
        a = json.dumps(assemble_topic_grids(*args).to_json_dict(), sort_keys=True)
        b = json.dumps(assemble_topic_grids(*args).to_json_dict(), sort_keys=True)
        assert a == b


class TestWindow:
    def test_empty_window_rejected(self):
        with pytest.raises(ValueError, match="nonempty"):
            Window(ts(2), ts(2))

    def test_default_window_trails_one_day(self):
        entries = [entry(1, "u", "/p"), entry(9, "u", "/p", hour=12)]
        w = default_window(entries)
        assert w.end == ts(9, 12) + timedelta(seconds=1)
        assert w.end - w.start == timedelta(days=1)
        assert w.contains(entries[1].ts)
