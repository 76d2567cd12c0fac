from fractions import Fraction

import pytest

import main.cli.perturbation as perturbation
from conftest import random_weighted_digraph
from main.errors import StabilityViolationError
from main.formats.graph_files import parse_wpc
from main.cli.perturbation import perturb, perturbed_weights, run_trials


def test_same_seed_same_weights(square):
    first = perturbed_weights(square.weights, Fraction(1, 2), seed=4, trial=2)
    assert first == perturbed_weights(square.weights, Fraction(1, 2), seed=4, trial=2)
    assert first != perturbed_weights(square.weights, Fraction(1, 2), seed=4, trial=3)


def test_perturbed_weights_stay_positive_and_close():
    weights = {("a", "b"): Fraction(1, 10), ("b", "c"): Fraction(5)}
    eps = Fraction(1)
    for trial in range(20):
        moved = perturbed_weights(weights, eps, seed=0, trial=trial)
        for edge, w in weights.items():
            assert moved[edge] > 0
            assert abs(moved[edge] - w) <= eps


def test_perturb_keeps_the_graph(square):
    moved = perturb(square, Fraction(1, 4), seed=1, trial=0)
    assert moved.edges == square.edges
    assert moved.vertices == square.vertices


def test_trials_on_a_digraph(cycle3):
    report = run_trials(cycle3, 0, Fraction(1, 4), 3, seed=5, quiet=True)
    assert list(report["trial"]) == [0, 1, 2]
    assert not report["violation"].any()
    assert (report["ratio"] <= 1).all()


def test_trials_on_a_path_complex():
    p = parse_wpc("closure auto\np a b c\np c a\nw a b 1\nw b c 1\nw c a 2\n")
    report = run_trials(p, 1, Fraction(1, 2), 4, seed=2, quiet=True)
    assert len(report) == 4
    assert not report["violation"].any()


def test_violation_carries_the_seed(cycle3, monkeypatch):
    monkeypatch.setattr(perturbation, "_bound", lambda *args: Fraction(-1))
    with pytest.raises(StabilityViolationError) as caught:
        run_trials(cycle3, 0, Fraction(1, 4), 2, seed=11, quiet=True)
    assert caught.value.seed == 11
    assert "--seed 11" in str(caught.value)


@pytest.mark.slow
@pytest.mark.parametrize("degree", [0, 1])
def test_hundred_trials_on_a_random_digraph(degree):
    g = random_weighted_digraph(7, n=6, density=0.35)
    report = run_trials(g, degree, Fraction(1, 4), 100, seed=7, quiet=True)
    assert len(report) == 100
    assert (report["ratio"] <= 1).all()


def test_zero_radius_leaves_the_diagram_alone(square):
    report = run_trials(square, 1, Fraction(0), 3, quiet=True)
    assert set(report["distance"]) == {"0"}
    assert set(report["bound"]) == {"0"}
