"""2-D embeddings of high-dimensional vectors: classical MDS and exact t-SNE.

Both operate on a precomputed symmetric distance matrix, so they are agnostic
to the dimensionality of the original space.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class EmbeddingConfig:
    method: str = "mds"  # "mds" | "tsne"
    tsne_perplexity: float = 10.0
    tsne_iterations: int = 1000
    tsne_learning_rate: float = 100.0
    tsne_early_exaggeration: float = 4.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.method not in ("mds", "tsne"):
            raise ValueError(f"unknown embedding method {self.method!r}")
        if self.tsne_iterations < 1:
            raise ValueError("tsne_iterations must be >= 1")


def pairwise_distances(vectors, metric: str = "euclidean") -> np.ndarray:
    """Dense symmetric distance matrix between same-dimension real vectors.

    Cosine distance is 1 - cosine similarity; an all-zero vector is at
    distance 1 from every nonzero vector and at distance 0 from another zero
    vector.
    """
    v = np.asarray(vectors, dtype=float)
    if v.ndim != 2:
        raise ValueError("vectors must share one dimension >= 1")
    if v.shape[1] < 1:
        raise ValueError("vectors must have dimension >= 1")
    if metric == "euclidean":
        sq = np.sum(v * v, axis=1)
        d2 = sq[:, None] + sq[None, :] - 2.0 * (v @ v.T)
        d = np.sqrt(np.maximum(d2, 0.0))
    elif metric == "cosine":
        norms = np.linalg.norm(v, axis=1)
        nonzero = norms > 0
        safe = np.where(nonzero, norms, 1.0)
        sim = (v @ v.T) / np.outer(safe, safe)
        d = 1.0 - np.clip(sim, -1.0, 1.0)
        zero = ~nonzero
        d[zero, :] = 1.0
        d[:, zero] = 1.0
        d[np.ix_(zero, zero)] = 0.0
    else:
        raise ValueError(f"unknown metric {metric!r}")
    d = (d + d.T) / 2.0
    np.fill_diagonal(d, 0.0)
    return d


def check_distance_matrix(d) -> np.ndarray:
    d = np.asarray(d, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise ValueError(f"distance matrix must be square, got shape {d.shape}")
    if not np.isfinite(d).all():
        raise ValueError("distance matrix must be finite")
    if not np.allclose(d, d.T, rtol=0.0, atol=1e-9 * max(1.0, float(np.abs(d).max()))):
        raise ValueError("distance matrix must be symmetric")
    if (d < 0).any():
        raise ValueError("distances must be nonnegative")
    if np.abs(np.diagonal(d)).max(initial=0.0) > 0:
        raise ValueError("distance matrix must have a zero diagonal")
    return d


def classical_mds(d, dims: int = 2) -> np.ndarray:
    """Torgerson double-centering embedding from a distance matrix.

    B = -1/2 J D^2 J is diagonalized and the top ``dims`` eigenpairs give the
    coordinates (eigenvector * sqrt(eigenvalue)). Negative top eigenvalues
    (non-Euclidean input) are clamped to zero with a warning. Output is
    centered at the origin. Sign/rotation remains arbitrary.
    """
    d = check_distance_matrix(d)
    n = len(d)
    if n < 3:
        raise ValueError(f"classical MDS needs n >= 3 points, got {n}")
    j = np.eye(n) - np.full((n, n), 1.0 / n)
    b = -0.5 * j @ (d * d) @ j
    evals, evecs = np.linalg.eigh((b + b.T) / 2.0)
    top = np.argsort(evals)[::-1][:dims]
    lam = evals[top]
    if np.all(lam <= 0):
        raise ValueError("degenerate embedding: no positive eigenvalue in the doubly-centered matrix")
    scale = max(1.0, float(np.abs(evals).max()))
    if evals.min() < -1e-9 * scale:
        warnings.warn(
            "distance matrix is not Euclidean; negative eigenvalues are clamped to zero",
            stacklevel=2,
        )
    coords = evecs[:, top] * np.sqrt(np.maximum(lam, 0.0))
    return coords - coords.mean(axis=0)


@dataclass(frozen=True)
class TSNEResult:
    points: np.ndarray
    kl: float
    kl_history: tuple[float, ...] = field(repr=False)


def _joint_probabilities(d: np.ndarray, perplexity: float, tol: float = 1e-4, max_iter: int = 128) -> np.ndarray:
    """Symmetrized Gaussian affinities whose per-point entropy matches log(perplexity).

    The per-point precision beta_i = 1/(2 sigma_i^2) is found by bracketing +
    bisection on the entropy, which is monotone decreasing in beta.
    """
    n = len(d)
    d2 = d * d
    target = np.log(perplexity)
    p_cond = np.zeros((n, n))
    for i in range(n):
        row = np.delete(d2[i], i)

        def entropy_and_p(beta: float) -> tuple[float, np.ndarray]:
            logits = -row * beta
            logits -= logits.max()
            w = np.exp(logits)
            z = w.sum()
            p = w / z
            h = -np.sum(p * np.log(np.maximum(p, 1e-300)))
            return h, p

        lo, hi = 0.0, 1.0
        h, p = entropy_and_p(hi)
        while h > target:
            lo, hi = hi, hi * 2.0
            h, p = entropy_and_p(hi)
            if hi > 1e12:
                break
        for _ in range(max_iter):
            if abs(h - target) <= tol:
                break
            mid = (lo + hi) / 2.0
            h, p = entropy_and_p(mid)
            if h > target:
                lo = mid
            else:
                hi = mid
        if abs(h - target) > tol:
            raise ValueError(
                f"perplexity {perplexity} infeasible for point {i}: entropy stuck at {np.exp(h):.4f}"
            )
        p_cond[i, np.arange(n) != i] = p
    p_joint = (p_cond + p_cond.T) / (2.0 * n)
    return np.maximum(p_joint, 1e-12)


def _student_t_q(y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    sq = np.sum(y * y, axis=1)
    d2 = np.maximum(sq[:, None] + sq[None, :] - 2.0 * (y @ y.T), 0.0)
    w = 1.0 / (1.0 + d2)
    np.fill_diagonal(w, 0.0)
    q = w / w.sum()
    return np.maximum(q, 1e-12), w


def _kl_divergence(p: np.ndarray, y: np.ndarray) -> float:
    q, _ = _student_t_q(y)
    mask = ~np.eye(len(p), dtype=bool)
    return float(np.sum(p[mask] * (np.log(p[mask]) - np.log(q[mask]))))


def _kl_gradient(p: np.ndarray, y: np.ndarray) -> np.ndarray:
    q, w = _student_t_q(y)
    m = (p - q) * w
    return 4.0 * (m.sum(axis=1)[:, None] * y - m @ y)


def tsne(d, cfg: EmbeddingConfig | None = None) -> TSNEResult:
    """Exact t-SNE over a distance matrix: gradient descent with momentum and
    early exaggeration, deterministic for a fixed config seed.

    The gradient is exact (no tree approximation). Early exaggeration scales
    the affinities by ``tsne_early_exaggeration`` for the first quarter of the
    iterations; momentum switches 0.5 -> 0.8 at iteration 250. ``kl_history``
    records the unexaggerated objective at every iteration.
    """
    cfg = cfg or EmbeddingConfig(method="tsne")
    d = check_distance_matrix(d)
    n = len(d)
    if not cfg.tsne_perplexity < n - 1:
        raise ValueError(f"perplexity must be < n-1 = {n - 1}, got {cfg.tsne_perplexity}")

    p = _joint_probabilities(d, cfg.tsne_perplexity)
    rng = np.random.default_rng(cfg.seed)
    y = rng.normal(0.0, 1e-4, size=(n, 2))
    velocity = np.zeros_like(y)

    iters = cfg.tsne_iterations
    exaggerate_until = iters // 4
    kl_history = []
    for t in range(iters):
        p_eff = p * cfg.tsne_early_exaggeration if t < exaggerate_until else p
        grad = _kl_gradient(p_eff, y)
        if not np.isfinite(grad).all():
            raise FloatingPointError(f"non-finite t-SNE gradient at iteration {t}")
        momentum = 0.5 if t < 250 else 0.8
        velocity = momentum * velocity - cfg.tsne_learning_rate * grad
        y = y + velocity
        y = y - y.mean(axis=0)
        kl_history.append(_kl_divergence(p, y))

    return TSNEResult(points=y, kl=kl_history[-1], kl_history=tuple(kl_history))
