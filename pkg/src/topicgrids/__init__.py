"""Uniform topic grids: split-diffuse layouts of 2-D embeddings, topology
metrics, and content-based behavioral risk over access logs."""

from .bench import BenchmarkReport, run_benchmark, sample_gaussian, sample_uniform
from .embedding import EmbeddingConfig, classical_mds, pairwise_distances, tsne
from .metrics import ConstraintReport, constraint_count, evaluate
from .risk import (
    ActivityVector,
    IngestError,
    LogEntry,
    TopicGridSet,
    Window,
    activity_vector,
    assemble_topic_grids,
    content_document,
    parse_log,
    risk_vector,
)
from .sd import GridCoord, Placement, rank_split, resolve_allocation, split_diffuse
from .topics import (
    Corpus,
    TopicModel,
    build_corpus,
    doc_topic_relevance,
    fit_lda,
    topic_distance_matrix,
    topic_label,
)

__version__ = "0.1.0"

__all__ = [
    "ActivityVector",
    "BenchmarkReport",
    "ConstraintReport",
    "Corpus",
    "EmbeddingConfig",
    "GridCoord",
    "IngestError",
    "LogEntry",
    "Placement",
    "TopicGridSet",
    "TopicModel",
    "Window",
    "activity_vector",
    "assemble_topic_grids",
    "build_corpus",
    "classical_mds",
    "constraint_count",
    "content_document",
    "doc_topic_relevance",
    "evaluate",
    "fit_lda",
    "pairwise_distances",
    "parse_log",
    "rank_split",
    "resolve_allocation",
    "risk_vector",
    "run_benchmark",
    "sample_gaussian",
    "sample_uniform",
    "split_diffuse",
    "topic_distance_matrix",
    "topic_label",
    "tsne",
]
