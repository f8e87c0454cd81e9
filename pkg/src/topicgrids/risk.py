"""Content-based behavioral risk over access logs.

Each log entry's path + metadata is a content document. Per-user activity in
a time scope is the sum of per-entry topic relevance vectors; risk compares
the current activity distribution against a baseline (own history or peer
history) and keeps the one-sided per-topic excess, so risk is attributable
per topic, bounded, and zero on identical behavior.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from typing import Callable, Iterable

import numpy as np

from .sd import Placement
from .topics import TopicModel, doc_topic_relevance, tokenize

SCOPES = ("current", "self_history", "peer_history")
SMOOTHING_EPS = 1e-6


class IngestError(ValueError):
    """Raised when too large a fraction of a log stream is malformed."""


@dataclass(frozen=True)
class LogEntry:
    ts: datetime
    user: str
    action: str
    path: str
    meta: str = ""
    group: str | None = None


@dataclass(frozen=True)
class Window:
    start: datetime
    end: datetime

    def __post_init__(self) -> None:
        if not self.start < self.end:
            raise ValueError(f"window must be nonempty, got [{self.start}, {self.end})")

    def contains(self, ts: datetime) -> bool:
        return self.start <= ts < self.end

    def to_json_dict(self) -> dict:
        return {"start": isoformat_utc(self.start), "end": isoformat_utc(self.end)}


@dataclass
class ParsedLog:
    entries: list[LogEntry]
    failures: list[tuple[int, str]] = field(default_factory=list)


def parse_timestamp(value: str) -> datetime:
    """ISO-8601 timestamp, second precision, 'Z' accepted; naive means UTC."""
    raw = str(value)
    if raw.endswith("Z"):
        raw = raw[:-1] + "+00:00"
    ts = datetime.fromisoformat(raw)
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def isoformat_utc(ts: datetime) -> str:
    return ts.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def parse_log(lines: Iterable[str], max_malformed_fraction: float = 0.1) -> ParsedLog:
    """Parse a JSONL stream into log entries, collecting malformed lines.

    Missing optional fields default (meta empty, group absent). Malformed
    lines are reported, not dropped silently; if their fraction exceeds
    ``max_malformed_fraction`` the whole ingest fails.
    """
    entries: list[LogEntry] = []
    failures: list[tuple[int, str]] = []
    seen = 0
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        seen += 1
        try:
            obj = json.loads(line)
            if not isinstance(obj, dict):
                raise ValueError("line is not a JSON object")
            user = str(obj.get("user", "") or "")
            if not user:
                raise ValueError("missing or empty user")
            group = obj.get("group")
            entries.append(
                LogEntry(
                    ts=parse_timestamp(obj["ts"]),
                    user=user,
                    action=str(obj.get("action", "") or ""),
                    path=str(obj.get("path", "") or ""),
                    meta=str(obj.get("meta", "") or ""),
                    group=None if group in (None, "") else str(group),
                )
            )
        except (ValueError, KeyError, TypeError) as exc:
            failures.append((lineno, f"{type(exc).__name__}: {exc}"))
    if seen and len(failures) / seen > max_malformed_fraction:
        raise IngestError(
            f"{len(failures)} of {seen} lines malformed "
            f"(> {max_malformed_fraction:.0%} allowed); first: line {failures[0][0]}: {failures[0][1]}"
        )
    return ParsedLog(entries=entries, failures=failures)


def content_document(entry: LogEntry) -> str:
    """The text a log entry contributes to the topic model: path plus metadata."""
    if entry.meta:
        return f"{entry.path} {entry.meta}" if entry.path else entry.meta
    return entry.path


def entry_relevance(
    model: TopicModel,
    entry: LogEntry,
    cache: dict[str, np.ndarray] | None = None,
) -> np.ndarray:
    """Topic relevance of one entry's content document; zero vector when no
    token of the document is in the model vocabulary.

    The cache is keyed by the content document itself, so identical documents
    share one fold-in result (and a persisted relevance table can be reused
    verbatim).
    """
    doc = content_document(entry)
    if cache is not None and doc in cache:
        return cache[doc]
    from collections import Counter

    counts = Counter(tokenize(doc))
    try:
        vec = doc_topic_relevance(model, dict(counts))
    except ValueError:
        vec = np.zeros(model.k)
    if cache is not None:
        cache[doc] = vec
    return vec


def user_groups(entries: Iterable[LogEntry]) -> dict[str, set[str]]:
    groups: dict[str, set[str]] = {}
    for e in entries:
        groups.setdefault(e.user, set())
        if e.group:
            groups[e.user].add(e.group)
    return groups


def peers_of(user: str, entries: list[LogEntry]) -> set[str]:
    """Users sharing any of the user's groups; all other users when the user
    has no group."""
    groups = user_groups(entries)
    mine = groups.get(user, set())
    others = {u for u in groups if u != user}
    if not mine:
        return others
    return {u for u in others if groups[u] & mine}


@dataclass(frozen=True)
class ActivityVector:
    user: str
    scope: str
    window: Window
    mass: np.ndarray


def activity_vector(
    entries: list[LogEntry],
    model: TopicModel,
    user: str,
    scope: str,
    window: Window,
    benchmark_start: datetime | None = None,
    relevance_cache: dict[str, np.ndarray] | None = None,
) -> ActivityVector:
    """Sum of per-entry relevance over the entries selected by the scope rule.

    current: the user's entries inside the window. self_history: the user's
    entries before the window start (bounded below by the benchmark period).
    peer_history: entries of the user's peers, excluding the user, before the
    window end.
    """
    if scope not in SCOPES:
        raise ValueError(f"unknown scope {scope!r}, expected one of {SCOPES}")
    after = benchmark_start or datetime.min.replace(tzinfo=timezone.utc)
    if scope == "current":
        selected = [e for e in entries if e.user == user and window.contains(e.ts)]
    elif scope == "self_history":
        selected = [e for e in entries if e.user == user and after <= e.ts < window.start]
    else:
        peers = peers_of(user, entries)
        selected = [e for e in entries if e.user in peers and after <= e.ts < window.end]
    mass = np.zeros(model.k)
    for e in selected:
        mass += entry_relevance(model, e, relevance_cache)
    return ActivityVector(user=user, scope=scope, window=window, mass=mass)


def smoothed_distribution(mass: np.ndarray, eps: float = SMOOTHING_EPS) -> np.ndarray:
    """Additively smoothed normalization; an all-zero vector becomes uniform."""
    mass = np.asarray(mass, dtype=float)
    return (mass + eps) / (mass.sum() + eps * len(mass))


def one_sided_excess(current_dist: np.ndarray, baseline_dist: np.ndarray) -> np.ndarray:
    """Per-topic one-sided total-variation excess of current over baseline."""
    return np.maximum(current_dist - baseline_dist, 0.0)


def risk_vector(
    current: ActivityVector | np.ndarray,
    baseline: ActivityVector | np.ndarray,
    compare: Callable[[np.ndarray, np.ndarray], np.ndarray] = one_sided_excess,
) -> np.ndarray:
    """Per-topic risk of the current activity against a baseline activity.

    Both masses are smoothed into distributions first, so the total risk lies
    in [0, 1) and is 0 exactly when the smoothed distributions coincide.
    """
    cur = current.mass if isinstance(current, ActivityVector) else np.asarray(current, dtype=float)
    base = baseline.mass if isinstance(baseline, ActivityVector) else np.asarray(baseline, dtype=float)
    if cur.shape != base.shape:
        raise ValueError(f"topic count mismatch: {cur.shape} vs {base.shape}")
    return compare(smoothed_distribution(cur), smoothed_distribution(base))


@dataclass(frozen=True)
class TopicGridSet:
    """The five per-user grids of one snapshot window, sharing one placement."""

    user: str
    window: Window
    placement: Placement
    labels: tuple[str, ...]
    current: np.ndarray
    self_history: np.ndarray
    self_risk: np.ndarray
    peer_history: np.ndarray
    peer_risk: np.ndarray

    def __post_init__(self) -> None:
        k = len(self.placement)
        for name in ("labels", "current", "self_history", "self_risk", "peer_history", "peer_risk"):
            if len(getattr(self, name)) != k:
                raise ValueError(f"{name} must have one value per topic ({k})")

    def to_json_dict(self) -> dict:
        cells = []
        for k in range(len(self.placement)):
            col, row = (int(v) for v in self.placement.cells[k])
            cells.append(
                {
                    "k": k,
                    "col": col,
                    "row": row,
                    "label": self.labels[k],
                    "current": float(self.current[k]),
                    "self_history": float(self.self_history[k]),
                    "self_risk": float(self.self_risk[k]),
                    "peer_history": float(self.peer_history[k]),
                    "peer_risk": float(self.peer_risk[k]),
                }
            )
        return {
            "user": self.user,
            "window": self.window.to_json_dict(),
            "h": self.placement.h,
            "cells": cells,
            "totals": {
                "self_risk": float(self.self_risk.sum()),
                "peer_risk": float(self.peer_risk.sum()),
            },
        }


def assemble_topic_grids(
    model: TopicModel,
    placement: Placement,
    labels,
    user: str,
    window: Window,
    entries: list[LogEntry],
    benchmark_start: datetime | None = None,
    relevance_cache: dict[str, np.ndarray] | None = None,
) -> TopicGridSet:
    """Compute the five grids for one user on the shared placement.

    A user with no entries in the window gets a zero current vector (valid,
    not an error); self risk compares current vs own history, peer risk
    compares current vs peer history.
    """
    if len(placement) != model.k:
        raise ValueError(f"placement has {len(placement)} cells but the model has {model.k} topics")
    vectors = {
        scope: activity_vector(
            entries, model, user, scope, window,
            benchmark_start=benchmark_start, relevance_cache=relevance_cache,
        )
        for scope in SCOPES
    }
    return TopicGridSet(
        user=user,
        window=window,
        placement=placement,
        labels=tuple(labels),
        current=vectors["current"].mass,
        self_history=vectors["self_history"].mass,
        self_risk=risk_vector(vectors["current"], vectors["self_history"]),
        peer_history=vectors["peer_history"].mass,
        peer_risk=risk_vector(vectors["current"], vectors["peer_history"]),
    )


def default_window(entries: list[LogEntry], days: float = 1.0) -> Window:
    """Trailing window covering the last ``days`` of the log, inclusive of the
    final entry."""
    if not entries:
        raise ValueError("no entries to derive a window from")
    end = max(e.ts for e in entries) + timedelta(seconds=1)
    return Window(start=end - timedelta(days=days), end=end)
