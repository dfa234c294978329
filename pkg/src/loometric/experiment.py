"""Seeded Monte-Carlo experiment: how often random finitely-sampled spaces
become injective after perturbation, and how often the mesh/separation witness
search succeeds across an (N, M) grid."""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction

from .embed import perturb_to_injective
from .gh import find_mnm_partition
from .space import FiniteMetricSpace, is_injective, to_fraction, validate_metric


@dataclass(frozen=True)
class ExperimentReport:
    """Aggregated trial outcomes.  Everything except runtime_ms is a pure
    function of the generator parameters and the seed."""

    trials: int
    points: int
    eps: Fraction
    seed: int
    grid: tuple[tuple[int, int], ...]
    injective_after_perturbation: int
    injective_before_perturbation: int
    mnm_hits: dict[str, int]
    trial_details: tuple[dict, ...]
    runtime_ms: int


def sample_hypercube_space(rng: random.Random, n_points: int, dim: int = 3,
                           coord_grid: int = 1 << 16, dist_grid: int = 1 << 20,
                           label_width: int | None = None) -> FiniteMetricSpace:
    """Random metric space: points uniform on a rational grid in [0,1]^dim,
    Euclidean distances rounded to the dist_grid denominator.

    Metricity is guaranteed by construction up to rounding; the rare rounding
    that breaks a near-degenerate triangle triggers a full resample.
    """
    if n_points < 1:
        raise ValueError("need at least one point")
    width = label_width or len(str(n_points - 1))
    labels = [f"p{str(k).zfill(width)}" for k in range(n_points)]
    for _ in range(64):
        coords = [tuple(Fraction(rng.randrange(coord_grid + 1), coord_grid)
                        for _ in range(dim)) for _ in range(n_points)]
        rows = [[Fraction(0)] * n_points for _ in range(n_points)]
        degenerate = False
        for i in range(n_points):
            for j in range(i + 1, n_points):
                sq = sum((a - b) * (a - b) for a, b in zip(coords[i], coords[j]))
                if sq == 0:
                    degenerate = True
                    break
                d = Fraction(round(math.sqrt(sq) * dist_grid), dist_grid)
                if d == 0:
                    d = Fraction(1, dist_grid)
                rows[i][j] = rows[j][i] = d
            if degenerate:
                break
        if degenerate:
            continue
        try:
            return validate_metric(labels, rows)
        except ValueError:
            continue
    raise RuntimeError("could not sample a valid space (grid too coarse?)")


def experiment_genericity(trials: int, points: int, eps, grid, seed: int,
                          dim: int = 3) -> ExperimentReport:
    """Run the perturbation/witness experiment.  Deterministic given the seed.

    Per trial: sample a space, perturb it to injective distances, then try the
    dendrogram-cut witness search at every (N, M) of the grid on the perturbed
    space.  Counts are aggregated; per-trial rows are kept for reporting.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if points < 2:
        raise ValueError("points must be >= 2")
    eps = to_fraction(eps)
    grid = tuple((int(N), int(M)) for N, M in grid)
    started = time.monotonic()

    master = random.Random(seed)
    injective_before = 0
    injective_after = 0
    hits = {f"N={N},M={M}": 0 for N, M in grid}
    details = []
    for t in range(trials):
        sample_seed = master.getrandbits(63)
        perturb_seed = master.getrandbits(63)
        space = sample_hypercube_space(random.Random(sample_seed), points, dim=dim)
        before = is_injective(space)[0]
        injective_before += before
        perturbed = perturb_to_injective(space, eps, perturb_seed)
        after = is_injective(perturbed)[0]
        injective_after += after
        row = {"trial": t, "injective_before": before, "injective_after": after}
        for N, M in grid:
            found = find_mnm_partition(perturbed, N, M) is not None
            key = f"N={N},M={M}"
            hits[key] += found
            row[key] = found
        details.append(row)

    return ExperimentReport(
        trials=trials,
        points=points,
        eps=eps,
        seed=seed,
        grid=grid,
        injective_after_perturbation=injective_after,
        injective_before_perturbation=injective_before,
        mnm_hits=hits,
        trial_details=tuple(details),
        runtime_ms=int((time.monotonic() - started) * 1000),
    )


def report_to_json(report: ExperimentReport) -> dict:
    from .io import format_rational

    return {
        "trials": report.trials,
        "points": report.points,
        "eps": format_rational(report.eps),
        "seed": report.seed,
        "grid": [list(nm) for nm in report.grid],
        "injective_before_perturbation": report.injective_before_perturbation,
        "injective_after_perturbation": report.injective_after_perturbation,
        "mnm_hits": dict(report.mnm_hits),
        "trial_details": [dict(row) for row in report.trial_details],
        "runtime_ms": report.runtime_ms,
    }
