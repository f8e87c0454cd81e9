"""Monte-Carlo benchmark: sample point clouds, grid them, aggregate error ratios.

Two samplers are provided: U draws i.i.d. uniform points in the unit square;
G draws a two-variate Gaussian whose major axis has twice the standard
deviation of the minor one (sigma 2 vs 1), rotated by pi/4. The absolute
Gaussian scale is irrelevant because both the layout and the metrics depend
only on per-axis coordinate order; only the 2:1 ratio and the rotation matter.

All randomness flows through numpy's PCG64 generator. Each trial derives its
own seed from (master seed, sampler, layout, trial index), so reports are
reproducible across platforms and independent of any execution order.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .metrics import constraint_count, evaluate
from .sd import split_diffuse

GAUSS_SIGMA_MAJOR = 2.0
GAUSS_SIGMA_MINOR = 1.0

DEFAULT_TRIALS = {4: 1000, 8: 1000, 16: 1000, 32: 100, 64: 20}

_SAMPLER_CODES = {"U": 0, "G": 1}


@dataclass(frozen=True)
class BenchmarkRow:
    layout: int  # grid side, e.g. 8 for an 8x8 layout
    sampler: str
    trials: int
    constraints: int
    mean_err_I: float
    mean_err_II: float
    std_err_I: float
    std_err_II: float


@dataclass(frozen=True)
class BenchmarkReport:
    seed: int
    rows: tuple[BenchmarkRow, ...]

    def to_json_dict(self) -> dict:
        return {"seed": self.seed, "rows": [asdict(r) for r in self.rows]}

    def row(self, layout: int, sampler: str) -> BenchmarkRow:
        for r in self.rows:
            if r.layout == layout and r.sampler == sampler:
                return r
        raise KeyError(f"no row for layout {layout}, sampler {sampler}")

    def format_table(self) -> str:
        header = f"{'Layout':<8}{'Sampling':<10}{'Constraints':>12}{'Err_I':>10}{'Err_II':>10}"
        lines = [header, "-" * len(header)]
        for r in self.rows:
            lines.append(
                f"{f'{r.layout}x{r.layout}':<8}{r.sampler:<10}{r.constraints:>12,}"
                f"{r.mean_err_I:>10.4f}{r.mean_err_II:>10.4f}"
            )
        return "\n".join(lines)


def sample_uniform(n: int, seed) -> np.ndarray:
    """n i.i.d. points uniform on the unit square."""
    if n < 1:
        raise ValueError("need n >= 1 points")
    rng = np.random.default_rng(seed)
    return rng.random((n, 2))


def sample_gaussian(n: int, seed) -> np.ndarray:
    """n i.i.d. points from the 2:1 anisotropic Gaussian rotated by pi/4."""
    if n < 1:
        raise ValueError("need n >= 1 points")
    rng = np.random.default_rng(seed)
    u = rng.normal(0.0, GAUSS_SIGMA_MAJOR, n)
    v = rng.normal(0.0, GAUSS_SIGMA_MINOR, n)
    c = s = np.sqrt(0.5)  # cos(pi/4) == sin(pi/4)
    return np.column_stack([u * c - v * s, u * s + v * c])


_SAMPLERS = {"U": sample_uniform, "G": sample_gaussian}


def trial_seed(master_seed: int, sampler: str, side: int, trial: int) -> np.random.SeedSequence:
    """Deterministic per-trial seed, independent of scheduling."""
    return np.random.SeedSequence(master_seed, spawn_key=(_SAMPLER_CODES[sampler], side, trial))


def _side_to_h(side: int) -> int:
    h = int(side).bit_length() - 1
    if side < 1 or 2 ** h != side:
        raise ValueError(f"layout side must be a power of 2, got {side}")
    return h


def run_trial(master_seed: int, sampler: str, side: int, trial: int) -> tuple[float, float]:
    h = _side_to_h(side)
    points = _SAMPLERS[sampler](4 ** h, trial_seed(master_seed, sampler, side, trial))
    try:
        report = evaluate(points, split_diffuse(points, h))
    except ValueError as exc:
        raise ValueError(f"trial {trial} ({sampler}, {side}x{side}) failed: {exc}") from exc
    return report.err_I, report.err_II


def run_benchmark(
    layouts,
    samplers,
    trials: dict[int, int] | int | None = None,
    master_seed: int = 0,
) -> BenchmarkReport:
    """Mean/std error ratios per (layout side, sampler) over independent trials.

    ``trials`` maps layout side -> trial count (an int applies to every
    layout; None uses DEFAULT_TRIALS). Means are taken over the per-trial
    ratios in trial order; std is the population standard deviation.
    """
    rows = []
    for sampler in samplers:
        if sampler not in _SAMPLERS:
            raise ValueError(f"unknown sampler {sampler!r}, expected one of {sorted(_SAMPLERS)}")
        for side in layouts:
            if isinstance(trials, dict):
                count = trials.get(side, DEFAULT_TRIALS.get(side, 100))
            elif trials is None:
                count = DEFAULT_TRIALS.get(side, 100)
            else:
                count = int(trials)
            if count < 1:
                raise ValueError(f"need >= 1 trial per row, got {count} for layout {side}")
            errs = np.array([run_trial(master_seed, sampler, side, t) for t in range(count)])
            rows.append(
                BenchmarkRow(
                    layout=side,
                    sampler=sampler,
                    trials=count,
                    constraints=constraint_count(4 ** _side_to_h(side)),
                    mean_err_I=float(errs[:, 0].mean()),
                    mean_err_II=float(errs[:, 1].mean()),
                    std_err_I=float(errs[:, 0].std()),
                    std_err_II=float(errs[:, 1].std()),
                )
            )
    return BenchmarkReport(seed=master_seed, rows=tuple(rows))
