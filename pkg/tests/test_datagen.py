import numpy as np
import pytest

from asjq.datagen import SIGMA, GenParams, generate_relation, normalize_distribution, synthetic_instance
from asjq.skyline import prune_skyline


def test_empty():
    assert len(generate_relation(GenParams(0))) == 0


def test_deterministic():
    a = generate_relation(GenParams(100, dist="anticorrelated", seed=5))
    b = generate_relation(GenParams(100, dist="anticorrelated", seed=5))
    assert np.array_equal(a.values, b.values)
    c = generate_relation(GenParams(100, dist="anticorrelated", seed=6))
    assert not np.array_equal(a.values, c.values)


@pytest.mark.parametrize("bad", [
    dict(n=-1), dict(n=5, local=0, agg=0), dict(n=5, cats=0), dict(n=5, dist="zipf"),
])
def test_invalid_params(bad):
    with pytest.raises(ValueError):
        GenParams(**bad)


def test_aliases():
    assert normalize_distribution("anti-correlated") == "anticorrelated"
    assert normalize_distribution("Independent") == "independent"


@pytest.mark.parametrize("dist", ["correlated", "independent", "anticorrelated"])
def test_value_ranges(dist):
    rel = generate_relation(GenParams(3000, local=2, agg=2, cats=7, dist=dist, seed=1))
    keys = rel.values[:, rel.schema.join_idx[0]]
    vals = rel.values[:, list(rel.schema.local_idx) + list(rel.schema.agg_idx)]
    assert set(np.unique(keys)) <= set(range(7))
    assert vals.min() >= 0 and vals.max() < 1
    # values sit on a 2^-32 grid
    assert np.all(vals * 2 ** 32 == np.round(vals * 2 ** 32))


def test_key_histogram_uniform():
    n, c = 5000, 10
    rel = generate_relation(GenParams(n, cats=c, dist="independent", seed=3))
    counts = np.bincount(rel.values[:, 0].astype(int), minlength=c)
    p = 1 / c
    sd = np.sqrt(n * p * (1 - p))
    assert np.all(np.abs(counts - n * p) <= 3 * sd)


def test_correlated_spread():
    rel = generate_relation(GenParams(5000, local=2, agg=2, dist="correlated", seed=2))
    v = rel.values[:, 1:]
    # deviation from the row mean is on the order of the noise width
    assert 0.5 * SIGMA < np.std(v - v.mean(axis=1, keepdims=True)) < 1.5 * SIGMA


def test_anticorrelated_near_plane():
    rel = generate_relation(GenParams(5000, local=2, agg=2, dist="anticorrelated", seed=2))
    s = rel.values[:, 1:].sum(axis=1)
    assert abs(np.median(s) - 2.0) < 0.1
    assert np.std(s) < 0.25


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_skyline_size_ordering(seed):
    sizes = {}
    for dist in ("correlated", "independent", "anticorrelated"):
        A, B, spec = synthetic_instance(5000, 2, 2, 10, dist, seed)
        sizes[dist] = len(prune_skyline(A, spec).skyline)
    assert sizes["correlated"] < sizes["independent"] < sizes["anticorrelated"]
