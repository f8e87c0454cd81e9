#!/usr/bin/env python3
"""Generate the bundled synthetic access-log fixture.

Layout of the synthetic world:
  - 64 document themes, 8 per group, each with its own 16-word vocabulary
    drawn from deterministic pseudo-words (plus a handful of shared filler
    tokens), so a 64-topic model can recover them cleanly.
  - 40 users in 8 groups; each user works inside 3 preferred themes of their
    own group over an 18-day history (hours 8-16).
  - Day 19 (hours 8-18) is the current day: every user continues their usual
    themes except `mallory`, whose current-day accesses all hit a planted
    theme from another group that mallory never touched before, and `uidle`,
    who goes silent.
  - Two malformed lines and a couple of degenerate entries exercise the
    ingest-report paths.

The trailing 1-day window of the resulting log therefore contains exactly the
day-19 entries. Regenerating writes byte-identical output.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import numpy as np

SEED = 20160109
GROUPS = 8
THEMES_PER_GROUP = 8
WORDS_PER_THEME = 16
USERS_PER_GROUP = 5
HISTORY_DAYS = 18  # 2016-01-01 .. 2016-01-18
CURRENT_DAY = 19
ANOMALOUS_USER = "mallory"
IDLE_USER = "uidle"
PLANTED_GROUP = 5  # mallory is in g2; the planted theme comes from g5

EXTENSIONS = ["txt", "xlsx", "pdf", "docx", "csv", "pptx"]
ACTIONS = ["read", "write", "download", "preview"]
FILLER = ["report", "draft", "final", "backup", "shared", "archive", "notes", "summary"]

_SYLLABLES = [c + v for c in "bcdfgklmnprstvz" for v in "aeiou"]


def pseudo_word(rng, taken):
    while True:
        n = rng.integers(2, 4)
        word = "".join(_SYLLABLES[rng.integers(0, len(_SYLLABLES))] for _ in range(n))
        if word not in taken:
            taken.add(word)
            return word


def build_themes(rng):
    taken = set(FILLER)
    themes = []
    for g in range(GROUPS):
        for t in range(THEMES_PER_GROUP):
            words = [pseudo_word(rng, taken) for _ in range(WORDS_PER_THEME)]
            themes.append({"group": g, "name": words[0], "words": words})
    return themes


def theme_entry(rng, user, group, theme, day, hour):
    minute, second = rng.integers(0, 60), rng.integers(0, 60)
    words = theme["words"]
    picks = [words[rng.integers(0, len(words))] for _ in range(4)]
    ext = EXTENSIONS[rng.integers(0, len(EXTENSIONS))]
    action = ACTIONS[rng.integers(0, len(ACTIONS))]
    path = f"/srv/g{group}/{theme['name']}/{picks[0]}_{picks[1]}.{ext}"
    entry = {
        "ts": f"2016-01-{day:02d}T{hour:02d}:{minute:02d}:{second:02d}Z",
        "user": user,
        "action": action,
        "path": path,
        "group": f"g{group}",
    }
    if rng.random() < 0.7:
        filler = FILLER[rng.integers(0, len(FILLER))]
        entry["meta"] = f"{picks[2]} {picks[3]} {filler}"
    return entry


def main(out_path: Path) -> None:
    rng = np.random.default_rng(SEED)
    themes = build_themes(rng)
    theme_pool = {g: [t for t in themes if t["group"] == g] for g in range(GROUPS)}

    users = []
    for g in range(GROUPS):
        for i in range(USERS_PER_GROUP):
            name = f"u{g}{chr(ord('a') + i)}"
            users.append({"name": name, "group": g})
    users[2 * USERS_PER_GROUP]["name"] = ANOMALOUS_USER  # first user of g2
    users[3 * USERS_PER_GROUP]["name"] = IDLE_USER  # first user of g3

    for u in users:
        pool = theme_pool[u["group"]]
        picks = rng.choice(len(pool), size=3, replace=False)
        u["themes"] = [pool[int(p)] for p in picks]

    mallory = next(u for u in users if u["name"] == ANOMALOUS_USER)
    planted = theme_pool[PLANTED_GROUP][0]
    assert planted not in mallory["themes"]

    lines = []
    for day in range(1, HISTORY_DAYS + 1):
        for u in users:
            for _ in range(int(rng.integers(2, 5))):
                theme = u["themes"][int(rng.integers(0, 3))]
                hour = int(rng.integers(8, 17))
                lines.append(theme_entry(rng, u["name"], u["group"], theme, day, hour))

    # current day: business as usual except the planted anomaly and the idle user
    for u in users:
        if u["name"] == IDLE_USER:
            continue
        if u["name"] == ANOMALOUS_USER:
            for _ in range(8):
                hour = int(rng.integers(8, 19))
                lines.append(theme_entry(rng, u["name"], u["group"], planted, CURRENT_DAY, hour))
        else:
            for _ in range(int(rng.integers(2, 5))):
                theme = u["themes"][int(rng.integers(0, 3))]
                hour = int(rng.integers(8, 19))
                lines.append(theme_entry(rng, u["name"], u["group"], theme, CURRENT_DAY, hour))

    records = [json.dumps(e, sort_keys=True) for e in lines]
    # degenerate but valid entry: empty path and meta, contributes zero relevance
    records.append(
        json.dumps(
            {"ts": "2016-01-10T12:00:00Z", "user": IDLE_USER, "action": "read", "path": "", "group": "g3"},
            sort_keys=True,
        )
    )
    # malformed lines: reported by ingest, far below the failure threshold
    records.insert(500, "### not json: rotated log marker ###")
    records.insert(1200, json.dumps({"ts": "2016-01-05T12:00:00Z", "action": "read", "path": "/orphan"}))

    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text("\n".join(records) + "\n", encoding="utf-8")
    print(f"{out_path}: {len(records)} lines, planted theme {planted['name']!r} (group g{PLANTED_GROUP})")


if __name__ == "__main__":
    default = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "access_log.jsonl"
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else default)
