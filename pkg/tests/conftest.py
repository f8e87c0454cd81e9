import re
import warnings
from pathlib import Path

import numpy as np
import pytest

from topicgrids.snapshot import PipelineConfig, build_snapshot, load_snapshot

FIXTURE_LOG = Path(__file__).parent / "fixtures" / "access_log.jsonl"
ANOMALOUS_USER = "mallory"
IDLE_USER = "uidle"


def build_fixture_snapshot(out_dir, config: PipelineConfig = PipelineConfig()):
    with warnings.catch_warnings():
        # cosine topic distances are not Euclidean; MDS clamps and warns
        warnings.simplefilter("ignore", UserWarning)
        return build_snapshot(FIXTURE_LOG, out_dir, config)


@pytest.fixture(scope="session")
def snapshot_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("snapshot") / "snap"
    build_fixture_snapshot(out)
    return out


@pytest.fixture(scope="session")
def snapshot(snapshot_dir):
    return load_snapshot(snapshot_dir)


def planted_topic(snapshot) -> int:
    """The topic of the theme mallory switches to inside the window, derived
    from the fixture structure and the fitted topic-word matrix only (not
    from any relevance or risk computation)."""
    window = snapshot.window
    dirs = {
        e.path.rsplit("/", 1)[0]
        for e in snapshot.entries
        if e.user == ANOMALOUS_USER and window.contains(e.ts)
    }
    assert len(dirs) == 1, f"fixture should plant exactly one theme, saw {dirs}"
    planted_dir = dirs.pop()
    words = set()
    for e in snapshot.entries:
        if e.path.startswith(planted_dir + "/"):
            stem = e.path.rsplit("/", 1)[1].rsplit(".", 1)[0]
            words.update(re.split(r"[^a-z0-9]+", stem))
    words.discard("")
    index = {w: i for i, w in enumerate(snapshot.model.vocabulary)}
    mass = np.zeros(snapshot.model.k)
    for w in words:
        if w in index:
            mass += snapshot.model.topic_word[:, index[w]]
    return int(mass.argmax())
