"""Fit-once snapshot on disk: model, placement, labels, per-entry relevance,
and per-user grid caches.

A snapshot is immutable once written and fully determines every API response.
Rebuilding from the same log bytes and configuration reproduces the same
snapshot bytes: nothing time- or environment-dependent is ever written.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path

import numpy as np

from .embedding import EmbeddingConfig, classical_mds, tsne
from .io import write_placement_csv, write_points_csv
from .risk import (
    LogEntry,
    ParsedLog,
    TopicGridSet,
    Window,
    assemble_topic_grids,
    content_document,
    entry_relevance,
    isoformat_utc,
    parse_log,
    parse_timestamp,
)
from .sd import Placement, infer_grid_exponent, split_diffuse
from .svg import render_grid_svg
from .topics import (
    TopicModel,
    build_corpus,
    fit_lda,
    load_model,
    save_model,
    top_words,
    topic_distance_matrix,
    topic_label,
)

FORMAT_VERSION = 1


@dataclass(frozen=True)
class PipelineConfig:
    topics: int = 64
    seed: int = 0
    iterations: int = 500
    alpha: float | None = None
    beta: float = 0.01
    method: str = "mds"  # placement embedding: "mds" | "tsne"
    metric: str = "cosine"
    window: Window | None = None  # None: trailing window_days of the log
    window_days: float = 1.0
    anonymize: bool = False

    def to_json_dict(self) -> dict:
        return {
            "topics": self.topics,
            "seed": self.seed,
            "iterations": self.iterations,
            "alpha": self.alpha,
            "beta": self.beta,
            "method": self.method,
            "metric": self.metric,
            "window": self.window.to_json_dict() if self.window else None,
            "window_days": self.window_days,
            "anonymize": self.anonymize,
        }


def _dump_json(payload, path: Path) -> None:
    path.write_text(json.dumps(payload, sort_keys=True, indent=1) + "\n", encoding="utf-8")


def _safe_filename(user: str) -> str:
    keep = "".join(c if c.isalnum() or c in "-_." else "_" for c in user)
    if keep != user or not keep:
        keep = f"{keep}-{hashlib.sha256(user.encode()).hexdigest()[:8]}"
    return keep


def _entry_json(i: int, entry: LogEntry, topic: int | None, relevance: np.ndarray) -> dict:
    return {
        "i": i,
        "ts": isoformat_utc(entry.ts),
        "user": entry.user,
        "action": entry.action,
        "path": entry.path,
        "meta": entry.meta,
        "group": entry.group,
        "topic": topic,
        "relevance": [float(v) for v in relevance],
    }


def build_snapshot(log_path, out_dir, config: PipelineConfig = PipelineConfig()) -> Path:
    """Run the whole fit pipeline over a JSONL access log and write the snapshot.

    Stages: ingest -> corpus -> topic model -> topic distances -> 2-D embedding
    -> grid placement -> per-entry relevance -> per-user grids. Stage names
    are attached to errors so failures are attributable.
    """
    log_path = Path(log_path)
    out = Path(out_dir)
    raw = log_path.read_bytes()

    def stage(name, fn, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ValueError as exc:
            raise ValueError(f"{name}: {exc}") from exc

    parsed: ParsedLog = stage("ingest", parse_log, raw.decode("utf-8").splitlines())
    entries = sorted(parsed.entries, key=lambda e: e.ts)
    if not entries:
        raise ValueError("ingest: no valid log entries")

    docs = [content_document(e) for e in entries]
    corpus = stage("corpus", build_corpus, docs, doc_ids=[f"entry-{i}" for i in range(len(docs))])
    model = stage(
        "topic-model",
        fit_lda,
        corpus,
        k=config.topics,
        alpha=config.alpha,
        beta=config.beta,
        iterations=config.iterations,
        seed=config.seed,
    )

    h = stage("placement", infer_grid_exponent, config.topics)
    distances = stage("topic-distances", topic_distance_matrix, model, config.metric)
    if config.method == "mds":
        coords = stage("embedding", classical_mds, distances)
    elif config.method == "tsne":
        cfg = EmbeddingConfig(
            method="tsne",
            tsne_perplexity=min(10.0, (config.topics - 2) / 2),
            seed=config.seed,
        )
        coords = stage("embedding", tsne, distances, cfg).points
    else:
        raise ValueError(f"embedding: unknown method {config.method!r}")
    placement = stage("placement", split_diffuse, coords, h)
    labels = tuple(topic_label(model, k, anonymize=config.anonymize) for k in range(model.k))

    cache: dict[str, np.ndarray] = {}
    relevance = [entry_relevance(model, e, cache) for e in entries]
    topics_of = [int(r.argmax()) if r.sum() > 0 else None for r in relevance]

    window = config.window
    if window is None:
        from .risk import default_window

        window = default_window(entries, days=config.window_days)
    benchmark_start = min(e.ts for e in entries)

    users = sorted({e.user for e in entries})
    grid_sets = {
        user: assemble_topic_grids(
            model, placement, labels, user, window, entries,
            benchmark_start=benchmark_start, relevance_cache=cache,
        )
        for user in users
    }

    out.mkdir(parents=True, exist_ok=True)
    (out / "users").mkdir(exist_ok=True)
    save_model(model, out / "model.json")
    write_points_csv(coords, out / "embedding.csv")
    write_placement_csv(placement, out / "placement.csv")
    _dump_json([{"k": k, "label": labels[k]} for k in range(model.k)], out / "labels.json")
    _dump_json(
        [_entry_json(i, e, topics_of[i], relevance[i]) for i, e in enumerate(entries)],
        out / "entries.json",
    )
    user_files = {}
    for user in users:
        name = _safe_filename(user)
        user_files[user] = name
        _dump_json(grid_sets[user].to_json_dict(), out / "users" / f"{name}.json")
        (out / "users" / f"{name}.svg").write_text(render_grid_svg(grid_sets[user]), encoding="utf-8")

    manifest = {
        "format_version": FORMAT_VERSION,
        "config": config.to_json_dict(),
        "k": model.k,
        "h": h,
        "window": window.to_json_dict(),
        "benchmark_start": isoformat_utc(benchmark_start),
        "entry_count": len(entries),
        "vocabulary_size": len(model.vocabulary),
        "users": [
            {
                "id": user,
                "file": user_files[user],
                "group": next((e.group for e in entries if e.user == user and e.group), None),
                "entries": sum(1 for e in entries if e.user == user),
            }
            for user in users
        ],
        "ingest_failures": [{"line": line, "error": msg} for line, msg in parsed.failures],
        "log_sha256": hashlib.sha256(raw).hexdigest(),
    }
    _dump_json(manifest, out / "manifest.json")
    return out


@dataclass
class Snapshot:
    """Loaded snapshot; every query below is a pure function of its contents."""

    root: Path
    manifest: dict
    model: TopicModel
    placement: Placement
    labels: tuple[str, ...]
    entries: list[LogEntry]
    entry_topics: list[int | None]
    relevance_cache: dict[str, np.ndarray] = field(repr=False, default_factory=dict)

    @property
    def window(self) -> Window:
        w = self.manifest["window"]
        return Window(parse_timestamp(w["start"]), parse_timestamp(w["end"]))

    @property
    def benchmark_start(self) -> datetime:
        return parse_timestamp(self.manifest["benchmark_start"])

    def users(self) -> list[dict]:
        return self.manifest["users"]

    def has_user(self, user: str) -> bool:
        return any(u["id"] == user for u in self.manifest["users"])

    def gridset_payload(self, user: str, window: Window | None = None) -> dict:
        """The cached five-grid JSON for the snapshot window; recomputed from
        the stored relevance table for any other window."""
        if not self.has_user(user):
            raise KeyError(user)
        if window is None:
            name = next(u["file"] for u in self.manifest["users"] if u["id"] == user)
            return json.loads((self.root / "users" / f"{name}.json").read_text(encoding="utf-8"))
        grids = assemble_topic_grids(
            self.model, self.placement, self.labels, user, window, self.entries,
            benchmark_start=self.benchmark_start, relevance_cache=self.relevance_cache,
        )
        return grids.to_json_dict()

    def gridset(self, user: str, window: Window | None = None) -> TopicGridSet:
        if not self.has_user(user):
            raise KeyError(user)
        return assemble_topic_grids(
            self.model, self.placement, self.labels, user, window or self.window, self.entries,
            benchmark_start=self.benchmark_start, relevance_cache=self.relevance_cache,
        )

    def topic_payload(self, k: int) -> dict:
        if not 0 <= k < self.model.k:
            raise KeyError(k)
        col, row = (int(v) for v in self.placement.cells[k])
        return {
            "k": k,
            "label": self.labels[k],
            "col": col,
            "row": row,
            "words": [{"word": w, "p": p} for w, p in top_words(self.model, k, limit=10)],
        }

    def accesses(
        self,
        k: int,
        user: str | None = None,
        scope: str | None = None,
        offset: int = 0,
        limit: int = 50,
    ) -> dict:
        """Entries attributed to topic k (relevance argmax), newest first."""
        if not 0 <= k < self.model.k:
            raise KeyError(k)
        if scope is not None and user is None:
            raise ValueError("scope filtering requires a user")
        indexed = [
            (i, e) for i, (e, t) in enumerate(zip(self.entries, self.entry_topics)) if t == k
        ]
        if user is not None:
            window = self.window
            if scope is None:
                indexed = [(i, e) for i, e in indexed if e.user == user]
            elif scope == "current":
                indexed = [(i, e) for i, e in indexed if e.user == user and window.contains(e.ts)]
            elif scope == "self_history":
                indexed = [(i, e) for i, e in indexed if e.user == user and e.ts < window.start]
            elif scope == "peer_history":
                from .risk import peers_of

                peers = peers_of(user, self.entries)
                indexed = [(i, e) for i, e in indexed if e.user in peers and e.ts < window.end]
            else:
                raise ValueError(f"unknown scope {scope!r}")
        indexed.sort(key=lambda pair: (pair[1].ts, pair[0]), reverse=True)
        page = indexed[offset : offset + limit]
        return {
            "k": k,
            "total": len(indexed),
            "offset": offset,
            "limit": limit,
            "entries": [
                {
                    "ts": isoformat_utc(e.ts),
                    "user": e.user,
                    "action": e.action,
                    "path": e.path,
                    "meta": e.meta,
                    "group": e.group,
                }
                for _, e in page
            ],
        }


def load_snapshot(snapshot_dir) -> Snapshot:
    root = Path(snapshot_dir)
    manifest = json.loads((root / "manifest.json").read_text(encoding="utf-8"))
    if manifest.get("format_version") != FORMAT_VERSION:
        raise ValueError(f"unsupported snapshot format: {manifest.get('format_version')}")
    model = load_model(root / "model.json")
    labels = tuple(
        obj["label"] for obj in json.loads((root / "labels.json").read_text(encoding="utf-8"))
    )
    from .io import read_placement_csv

    placement = read_placement_csv(root / "placement.csv")
    entries = []
    entry_topics = []
    cache: dict[str, np.ndarray] = {}
    for obj in json.loads((root / "entries.json").read_text(encoding="utf-8")):
        e = LogEntry(
            ts=parse_timestamp(obj["ts"]),
            user=obj["user"],
            action=obj["action"],
            path=obj["path"],
            meta=obj["meta"],
            group=obj["group"],
        )
        entries.append(e)
        entry_topics.append(obj["topic"])
        cache[content_document(e)] = np.asarray(obj["relevance"], dtype=float)
    return Snapshot(
        root=root,
        manifest=manifest,
        model=model,
        placement=placement,
        labels=labels,
        entries=entries,
        entry_topics=entry_topics,
        relevance_cache=cache,
    )
