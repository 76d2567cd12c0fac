"""
Randomised certification of the weight-perturbation stability bounds.

Trial t perturbs every weight of the base input by ε·k/K with k drawn
uniformly from the integers in [-K, K] by ``numpy.random.default_rng([seed, t])``.
A weight that would drop to zero or below is halved instead. The
perturbed input is written out and read back through the exact parser,
both diagrams are computed, and d_B is compared with the weight-perturbation bound
(max |Δw| for digraphs, max |Δlen| for path complexes).
"""

from __future__ import annotations

import logging
import math
import sys
from fractions import Fraction

import numpy as np
import pandas as pd
from joblib import Parallel, delayed
from tqdm import tqdm

from main.algebra.linalg import ScalarField
from main.errors import StabilityViolationError
from main.formats.graph_files import parse_wdg, parse_wpc, render_wdg, render_wpc
from main.formats.numbers import format_number
from main.topology.bottleneck import bottleneck_distance
from main.topology.complexes import WeightedDigraph, WeightedPathComplex
from main.topology.filtration import edge_filtration, path_filtration
from main.topology.persistence import persistence_diagram
from main.topology.stability import length_perturbation_bound, weight_perturbation_bound

logger = logging.getLogger(__name__)

RESOLUTION = 1000


def perturbed_weights(weights: dict, eps: Fraction, seed: int, trial: int) -> dict:
    """
    Move every weight by a multiple of eps/RESOLUTION in [-eps, eps].

    Args:
        weights: Edge -> positive Fraction
        eps: Largest move
        seed: Run seed
        trial: Trial number; (seed, trial) fixes the draw

    Returns:
        dict: New weights; a move that would reach 0 halves the weight instead
    """
    edges = sorted(weights)
    rng = np.random.default_rng([seed, trial])
    steps = rng.integers(-RESOLUTION, RESOLUTION, size=len(edges), endpoint=True)
    out = {}
    for edge, k in zip(edges, steps):
        w = weights[edge]
        moved = w + eps * Fraction(int(k), RESOLUTION)
        out[edge] = moved if moved > 0 else w / 2
    return out


def perturb(source, eps: Fraction, seed: int, trial: int):
    """A perturbed copy of ``source``, round-tripped through its text format."""
    new = source.with_weights(perturbed_weights(source.weights, eps, seed, trial))
    if isinstance(source, WeightedDigraph):
        return parse_wdg(render_wdg(new), f"<trial {trial}>")
    return parse_wpc(render_wpc(new), f"<trial {trial}>")


def _diagram(source, dim: int, field: ScalarField):
    if isinstance(source, WeightedDigraph):
        return persistence_diagram(edge_filtration(source, dim + 1), dim, field)
    return persistence_diagram(path_filtration(source, dim + 1), dim, field)


def _bound(source, perturbed, dim: int) -> Fraction:
    if isinstance(source, WeightedDigraph):
        return weight_perturbation_bound(source, perturbed)
    return length_perturbation_bound(source, perturbed, top=dim + 1)


def run_trial(source, base_diagram, dim: int, eps: Fraction, seed: int, trial: int, field: ScalarField) -> dict:
    perturbed = perturb(source, eps, seed, trial)
    distance = bottleneck_distance(base_diagram, _diagram(perturbed, dim, field))
    bound = _bound(source, perturbed, dim)
    if bound == 0:
        ratio = 0.0 if distance == 0 else math.inf
    else:
        ratio = float(distance / bound) if distance != math.inf else math.inf
    return {
        "trial": trial,
        "bound": format_number(bound),
        "distance": format_number(distance),
        "ratio": ratio,
        "violation": distance > bound,
    }


def run_trials(
    source: WeightedDigraph | WeightedPathComplex,
    dim: int,
    eps: Fraction,
    trials: int,
    seed: int = 0,
    field: ScalarField | None = None,
    workers: int = 1,
    quiet: bool = False,
) -> pd.DataFrame:
    """
    One row per trial: trial, bound, distance, ratio, violation.

    Args:
        source: Weighted digraph or weighted path complex to perturb
        dim: Homology degree compared
        eps: Largest weight move
        trials: Number of trials
        seed: Run seed
        field: Coefficient field (rationals when omitted)
        workers: joblib workers; 1 runs in-process
        quiet: Hide the progress bar

    Returns:
        pd.DataFrame: The trial report

    Raises:
        StabilityViolationError: if any trial has d_B above its bound.
    """
    field = field or ScalarField.rational()
    base = _diagram(source, dim, field)
    progress = tqdm(range(trials), desc="trials", disable=quiet or not sys.stderr.isatty())
    if workers > 1:
        rows = Parallel(n_jobs=workers)(
            delayed(run_trial)(source, base, dim, eps, seed, t, field) for t in progress
        )
    else:
        rows = [run_trial(source, base, dim, eps, seed, t, field) for t in progress]
    report = pd.DataFrame(rows, columns=["trial", "bound", "distance", "ratio", "violation"])
    logger.info("%d trials, max ratio %s", trials, report["ratio"].max() if trials else 0.0)

    violations = report[report["violation"]]
    if not violations.empty:
        first = violations.iloc[0]
        raise StabilityViolationError(
            f"trial {first['trial']}: d_B {first['distance']} exceeds bound {first['bound']} "
            f"(reproduce with --seed {seed})",
            seed=seed,
        )
    return report
