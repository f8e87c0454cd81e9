"""Topic modeling over content documents: tokenization, collapsed-Gibbs LDA,
fold-in relevance queries, 3-letter topic labels, and topic-topic distances.

The Gibbs sampler is intentionally sequential (token updates form a serial
dependency chain); a fitted model is immutable and can be shared across
threads for relevance queries.
"""

from __future__ import annotations

import hashlib
import json
import re
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from numba import njit

from .embedding import pairwise_distances
from .stopwords import STOPWORDS

MIN_TOKEN_LENGTH = 3

_TOKEN_SPLIT = re.compile(r"[^a-z0-9]+")


def tokenize(text: str) -> list[str]:
    """Lowercase, split on every non-alphanumeric character, drop short tokens
    and stopwords."""
    return [
        tok
        for tok in _TOKEN_SPLIT.split(text.lower())
        if len(tok) >= MIN_TOKEN_LENGTH and tok not in STOPWORDS
    ]


@dataclass(frozen=True)
class Corpus:
    vocabulary: tuple[str, ...]
    documents: tuple[dict[str, int], ...]
    doc_ids: tuple[str, ...]

    @property
    def total_tokens(self) -> int:
        return sum(sum(c.values()) for c in self.documents)


def build_corpus(texts, doc_ids=None) -> Corpus:
    """Tokenize raw texts into term counts over a lexicographic vocabulary.

    Documents that tokenize to nothing stay in the corpus with empty counts
    (indexing must stay aligned with doc_ids); an entirely empty corpus is an
    error.
    """
    texts = list(texts)
    if doc_ids is None:
        doc_ids = [f"doc-{i}" for i in range(len(texts))]
    doc_ids = [str(d) for d in doc_ids]
    if len(doc_ids) != len(texts):
        raise ValueError("doc_ids must match the number of documents")
    counts = [dict(sorted(Counter(tokenize(t)).items())) for t in texts]
    vocabulary = sorted({term for c in counts for term in c})
    if not vocabulary:
        raise ValueError("empty corpus: no tokens survive filtering")
    return Corpus(vocabulary=tuple(vocabulary), documents=tuple(counts), doc_ids=tuple(doc_ids))


def save_corpus(corpus: Corpus, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for doc_id, c in zip(corpus.doc_ids, corpus.documents):
            fh.write(json.dumps({"doc_id": doc_id, "counts": c}, sort_keys=True) + "\n")


def load_corpus(path) -> Corpus:
    doc_ids, counts = [], []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            obj = json.loads(line)
            doc_ids.append(obj["doc_id"])
            counts.append({str(k): int(v) for k, v in obj["counts"].items()})
    vocabulary = sorted({term for c in counts for term in c})
    return Corpus(vocabulary=tuple(vocabulary), documents=tuple(counts), doc_ids=tuple(doc_ids))


@dataclass(frozen=True, eq=False)
class TopicModel:
    k: int
    vocabulary: tuple[str, ...]
    topic_word: np.ndarray  # (k, V) rows summing to 1
    doc_topic: np.ndarray | None  # (D, k) rows summing to 1; None after load
    alpha: float
    beta: float
    seed: int

    def vocab_index(self) -> dict[str, int]:
        return {w: i for i, w in enumerate(self.vocabulary)}


@njit(cache=True)
def _gibbs_sweep(doc_of, word_of, z, n_dk, n_kw, n_k, alpha, beta, uniforms, cumsum):  # pragma: no cover
    k_topics = n_k.shape[0]
    vbeta = beta * n_kw.shape[1]
    for t in range(z.shape[0]):
        d = doc_of[t]
        w = word_of[t]
        k = z[t]
        n_dk[d, k] -= 1
        n_kw[k, w] -= 1
        n_k[k] -= 1
        total = 0.0
        for kk in range(k_topics):
            total += (n_kw[kk, w] + beta) / (n_k[kk] + vbeta) * (n_dk[d, kk] + alpha)
            cumsum[kk] = total
        r = uniforms[t] * total
        knew = 0
        while knew < k_topics - 1 and cumsum[knew] <= r:
            knew += 1
        z[t] = knew
        n_dk[d, knew] += 1
        n_kw[knew, w] += 1
        n_k[knew] += 1


@njit(cache=True)
def _foldin_sweep(word_of, z, n_k_doc, phi, alpha, uniforms, cumsum):  # pragma: no cover
    k_topics = n_k_doc.shape[0]
    for t in range(z.shape[0]):
        w = word_of[t]
        n_k_doc[z[t]] -= 1
        total = 0.0
        for kk in range(k_topics):
            total += phi[kk, w] * (n_k_doc[kk] + alpha)
            cumsum[kk] = total
        r = uniforms[t] * total
        knew = 0
        while knew < k_topics - 1 and cumsum[knew] <= r:
            knew += 1
        z[t] = knew
        n_k_doc[knew] += 1


def _token_stream(corpus: Corpus) -> tuple[np.ndarray, np.ndarray]:
    index = {w: i for i, w in enumerate(corpus.vocabulary)}
    doc_of, word_of = [], []
    for d, counts in enumerate(corpus.documents):
        for term in sorted(counts):
            doc_of.extend([d] * counts[term])
            word_of.extend([index[term]] * counts[term])
    return np.asarray(doc_of, dtype=np.int64), np.asarray(word_of, dtype=np.int64)


def fit_lda(
    corpus: Corpus,
    k: int,
    alpha: float | None = None,
    beta: float = 0.01,
    iterations: int = 500,
    seed: int = 0,
    averaged_samples: int = 100,
) -> TopicModel:
    """Collapsed Gibbs sampling over token-topic assignments.

    Posterior estimates average the smoothed count ratios over the final
    ``averaged_samples`` iterations (clamped to the iteration budget):
    topic_word ~ (count(k, w) + beta) and doc_topic ~ (count(d, k) + alpha),
    each normalized per row. Deterministic for a fixed seed.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if alpha is None:
        alpha = 50.0 / k
    doc_of, word_of = _token_stream(corpus)
    n_tokens = len(doc_of)
    if k > n_tokens:
        raise ValueError(f"k={k} exceeds the total token count {n_tokens}")
    n_docs = len(corpus.documents)
    n_vocab = len(corpus.vocabulary)

    rng = np.random.default_rng(seed)
    z = rng.integers(0, k, n_tokens).astype(np.int64)
    n_dk = np.zeros((n_docs, k), dtype=np.int64)
    n_kw = np.zeros((k, n_vocab), dtype=np.int64)
    n_k = np.zeros(k, dtype=np.int64)
    np.add.at(n_dk, (doc_of, z), 1)
    np.add.at(n_kw, (z, word_of), 1)
    np.add.at(n_k, z, 1)

    averaged_samples = min(averaged_samples, iterations)
    phi_acc = np.zeros((k, n_vocab))
    theta_acc = np.zeros((n_docs, k))
    cumsum = np.empty(k)
    for it in range(iterations):
        _gibbs_sweep(doc_of, word_of, z, n_dk, n_kw, n_k, alpha, beta, rng.random(n_tokens), cumsum)
        if it >= iterations - averaged_samples:
            phi_acc += (n_kw + beta) / (n_k + beta * n_vocab)[:, None]
            doc_tokens = n_dk.sum(axis=1)
            theta_acc += (n_dk + alpha) / (doc_tokens + alpha * k)[:, None]

    topic_word = phi_acc / averaged_samples
    doc_topic = theta_acc / averaged_samples
    topic_word /= topic_word.sum(axis=1, keepdims=True)
    doc_topic /= doc_topic.sum(axis=1, keepdims=True)
    return TopicModel(
        k=k,
        vocabulary=corpus.vocabulary,
        topic_word=topic_word,
        doc_topic=doc_topic,
        alpha=float(alpha),
        beta=float(beta),
        seed=int(seed),
    )


def doc_topic_relevance(model: TopicModel, doc_counts: dict[str, int], iterations: int = 100) -> np.ndarray:
    """Fold-in inference: Gibbs over one document with topic_word frozen.

    The sampler seed is derived from the model seed and a digest of the
    document counts, so the same document always gets the same vector.
    Returns a k-vector summing to 1.
    """
    index = model.vocab_index()
    word_of = []
    for term in sorted(doc_counts):
        if term in index:
            word_of.extend([index[term]] * int(doc_counts[term]))
    if not word_of:
        raise ValueError("document has no in-vocabulary tokens")
    if model.k == 1:
        return np.array([1.0])

    payload = json.dumps(sorted((t, int(c)) for t, c in doc_counts.items())).encode()
    digest = int.from_bytes(hashlib.sha256(payload).digest()[:8], "big")
    rng = np.random.default_rng(np.random.SeedSequence(model.seed, spawn_key=(digest,)))

    word_of = np.asarray(word_of, dtype=np.int64)
    z = rng.integers(0, model.k, len(word_of)).astype(np.int64)
    n_k_doc = np.bincount(z, minlength=model.k).astype(np.int64)
    cumsum = np.empty(model.k)
    averaged = max(1, iterations // 2)
    theta_acc = np.zeros(model.k)
    for it in range(iterations):
        _foldin_sweep(word_of, z, n_k_doc, model.topic_word, model.alpha, rng.random(len(word_of)), cumsum)
        if it >= iterations - averaged:
            theta = n_k_doc + model.alpha
            theta_acc += theta / theta.sum()
    theta = theta_acc / averaged
    return theta / theta.sum()


def top_words(model: TopicModel, k: int, limit: int = 10) -> list[tuple[str, float]]:
    """Highest-probability words of one topic, ties broken lexicographically."""
    if not 0 <= k < model.k:
        raise ValueError(f"topic index {k} out of range for k={model.k}")
    row = model.topic_word[k]
    # vocabulary is sorted, so a stable sort on -p breaks ties lexicographically
    order = np.argsort(-row, kind="stable")[:limit]
    return [(model.vocabulary[i], float(row[i])) for i in order]


def topic_label(model: TopicModel, k: int, anonymize: bool = False) -> str:
    """First three characters of the topic's most probable word.

    Distinct topics may share a label. When anonymize is set, the label is
    the first three hex characters of a deterministic hash of the full word
    instead of the word itself.
    """
    word = top_words(model, k, limit=1)[0][0]
    if anonymize:
        return hashlib.sha256(word.encode("utf-8")).hexdigest()[:3]
    return word[:3]


def topic_distance_matrix(model: TopicModel, metric: str = "cosine") -> np.ndarray:
    """Pairwise distances between the topic-word distributions."""
    return pairwise_distances(model.topic_word, metric=metric)


def save_model(model: TopicModel, path) -> None:
    """Persist as JSON: vocabulary, dense topic_word, hyperparameters, seed.

    doc_topic is fit-time state and is not persisted; relevance queries go
    through fold-in inference instead.
    """
    payload = {
        "k": model.k,
        "vocabulary": list(model.vocabulary),
        "topic_word": [[float(v) for v in row] for row in model.topic_word],
        "alpha": model.alpha,
        "beta": model.beta,
        "seed": model.seed,
    }
    Path(path).write_text(json.dumps(payload, sort_keys=True, indent=1), encoding="utf-8")


def load_model(path) -> TopicModel:
    obj = json.loads(Path(path).read_text(encoding="utf-8"))
    topic_word = np.asarray(obj["topic_word"], dtype=float)
    return TopicModel(
        k=int(obj["k"]),
        vocabulary=tuple(obj["vocabulary"]),
        topic_word=topic_word,
        doc_topic=None,
        alpha=float(obj["alpha"]),
        beta=float(obj["beta"]),
        seed=int(obj["seed"]),
    )
