import math

import numpy as np
import pytest

from ppmlearn.data import GeneratorSpec, generate
from ppmlearn.geometry import Halfspace
from ppmlearn.learner import BudgetExceededError, all_mistake_counts, construct_halfspace_family
from ppmlearn.model import PPMDataset, partition
from ppmlearn.privacy import (
    IllegalNeighborError,
    mechanism_distribution,
    replace_entry,
    verify_dp,
)

from oracles import mechanism_probs_direct


def label_determined(dim, n, seed):
    rng = np.random.default_rng(seed)
    target = Halfspace(rng.standard_normal(dim), float(rng.standard_normal() * 0.2))
    return generate(GeneratorSpec(dim=dim, target=target, seed=seed), n)


# --- mechanism distribution ---------------------------------------------------


def test_mechanism_two_scores_closed_form():
    dist = mechanism_distribution([0, 5], 1.0, 10)
    expect0 = 1.0 / (1.0 + math.exp(-2.5))
    assert dist.probs[0] == pytest.approx(expect0, abs=1e-12)
    assert dist.probs[1] == pytest.approx(1 - expect0, abs=1e-12)
    assert dist.probs[0] == pytest.approx(0.9241, abs=5e-5)
    assert np.allclose(dist.probs, mechanism_probs_direct([0, 5], 1.0), atol=1e-12)


def test_mechanism_uniform_when_scores_equal():
    dist = mechanism_distribution([3, 3, 3, 3], 0.7, 12)
    assert np.allclose(dist.probs, 0.25, atol=1e-12)


def test_mechanism_epsilon_to_zero_limit():
    dist = mechanism_distribution([0, 2, 7, 9], 1e-9, 10)
    tv = 0.5 * np.abs(dist.probs - 0.25).sum()
    assert tv < 1e-6


def test_mechanism_invariants():
    rng = np.random.default_rng(0)
    for _ in range(30):
        k = int(rng.integers(2, 40))
        n = int(rng.integers(1, 50))
        counts = rng.integers(0, n + 1, size=k)
        eps = float(rng.uniform(0.05, 2.0))
        dist = mechanism_distribution(counts, eps, n)
        assert abs(float(np.exp(dist.log_probs).sum()) - 1.0) <= 1e-12
        i, j = rng.integers(0, k, 2)
        expected = -(eps / 2.0) * (counts[i] - counts[j])
        assert dist.log_probs[i] - dist.log_probs[j] == pytest.approx(expected, abs=1e-12)


def test_mechanism_monotone_in_mistakes():
    dist = mechanism_distribution([1, 4, 2, 4], 0.5, 10)
    assert dist.probs[0] > dist.probs[2] > dist.probs[1]
    assert dist.probs[1] == pytest.approx(dist.probs[3], abs=1e-15)


def test_mechanism_validation():
    with pytest.raises(ValueError):
        mechanism_distribution([], 1.0, 5)
    with pytest.raises(ValueError):
        mechanism_distribution([1], 0.0, 5)
    with pytest.raises(ValueError):
        mechanism_distribution([1], 1.0, 0)


# --- neighbors ------------------------------------------------------------------


def test_replace_entry_guards_public():
    ds = label_determined(1, 12, seed=1)
    pub = int(np.flatnonzero(~ds.p)[0])
    priv = int(np.flatnonzero(ds.p)[0])
    with pytest.raises(IllegalNeighborError, match="public entry"):
        replace_entry(ds, pub, [0.0], 1)
    nb = replace_entry(ds, priv, [0.33], 0)
    assert nb.n == ds.n
    assert nb.X[priv, 0] == 0.33 and nb.y[priv] == 0
    # untouched rows identical
    mask = np.arange(ds.n) != priv
    assert np.array_equal(nb.X[mask], ds.X[mask])


def test_neutral_replacement_gives_zero_ratio():
    ds = label_determined(1, 10, seed=2)
    priv = int(np.flatnonzero(ds.p)[0])
    nb = replace_entry(ds, priv, ds.X[priv], int(ds.y[priv]))  # same values
    fam = construct_halfspace_family(partition(ds)[0], 1)
    c0 = all_mistake_counts(fam, partition(ds)[2], 1)
    c1 = all_mistake_counts(fam, partition(nb)[2], 1)
    assert np.array_equal(c0, c1)
    d0 = mechanism_distribution(c0, 1.0, ds.n)
    d1 = mechanism_distribution(c1, 1.0, ds.n)
    assert float(np.max(np.abs(d0.log_probs - d1.log_probs))) == 0.0


def test_verify_dp_passes_and_matches_direct_recomputation():
    ds = label_determined(1, 8, seed=3)
    report = verify_dp(ds, [0.5], trials=12, seed=7)
    assert report.passed
    assert report.max_log_ratio <= 0.5 + 1e-9
    # independent recomputation: rebuild each neighbor dataset from scratch
    # and evaluate both distributions with the plain direct formula
    fam = construct_halfspace_family(partition(ds)[0], 1)
    base = all_mistake_counts(fam, partition(ds)[2], 1)
    rng = np.random.default_rng(7)
    priv_idx = np.flatnonzero(ds.p)
    for t, trial in enumerate(report.trials):
        idx = int(rng.choice(priv_idx))
        x_new = rng.standard_normal(1)
        y_new = int(rng.integers(0, 2))
        assert trial.index == idx
        nb = replace_entry(ds, idx, x_new, y_new)
        nb_counts = all_mistake_counts(fam, partition(nb)[2], 1)
        p0 = mechanism_probs_direct(base, 0.5)
        p1 = mechanism_probs_direct(nb_counts, 0.5)
        direct = float(np.max(np.abs(np.log(p0) - np.log(p1))))
        assert trial.max_log_ratio == pytest.approx(direct, abs=1e-10)


def test_verify_dp_pointwise_bound_full_outcome_space():
    # every pointwise ratio over the whole class stays within eps
    for seed in (4, 5):
        ds = label_determined(2, 10, seed=seed)
        report = verify_dp(ds, [0.1, 1.0], trials=10, seed=seed)
        assert report.passed


def test_verify_dp_refuses_public_indices():
    ds = label_determined(1, 12, seed=6)
    pub = int(np.flatnonzero(~ds.p)[0])
    with pytest.raises(IllegalNeighborError, match="public entry"):
        verify_dp(ds, 1.0, trials=2, indices=[pub])


def test_verify_dp_requires_private_entries():
    rng = np.random.default_rng(8)
    ds = PPMDataset(dim=1, X=rng.standard_normal((6, 1)),
                    y=np.zeros(6, dtype=int), p=np.zeros(6, dtype=int))
    with pytest.raises(IllegalNeighborError, match="no private"):
        verify_dp(ds, 1.0)


def test_verify_dp_class_guard():
    ds = label_determined(2, 16, seed=9)
    with pytest.raises(BudgetExceededError, match="reduce pool_cap"):
        verify_dp(ds, 1.0, class_limit=10)


def test_verify_dp_explicit_private_indices():
    ds = label_determined(1, 12, seed=10)
    priv = [int(i) for i in np.flatnonzero(ds.p)[:2]]
    report = verify_dp(ds, 1.0, trials=4, indices=priv, seed=0)
    assert report.passed
    assert {t.index for t in report.trials} <= set(priv)
