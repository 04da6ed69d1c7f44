import numpy as np

from asjq.algorithms import run_naive
from asjq.datagen import synthetic_instance
from asjq.model import Relation, prune_dominates
from asjq.oracle import brute_force_asjq, brute_force_skyline


def test_flights(flights):
    spec, A, B = flights
    got = {t.pair: t.vector[-2:] for t in brute_force_asjq(A, B, spec)}
    assert got == {(11, 21): (324, 260), (11, 23): (322, 295), (12, 24): (326, 210), (14, 24): (300, 205)}


def test_singletons(flights):
    spec, A, B = flights
    a = Relation(A.schema, A.values[:1], [11])
    b = Relation(B.schema, B.values[:1], [21])
    assert [t.pair for t in brute_force_asjq(a, b, spec)] == [(11, 21)]


def test_prune_skyline_flights(flights):
    spec, A, _ = flights
    sky = brute_force_skyline(A.tuples(), lambda s, r: prune_dominates(s, r, A.schema, spec))
    assert {t.row_id for t in sky} == set(range(11, 17))


def test_generic_skyline():
    less = lambda a, b: a < b
    assert brute_force_skyline([3, 1, 2], less) == [1]
    never = lambda a, b: False
    assert brute_force_skyline([3, 1, 2], never) == [3, 1, 2]


def test_random_instances_match_naive():
    for seed in range(10):
        A, B, spec = synthetic_instance(50, 2, 2, 3, "independent", seed)
        assert brute_force_asjq(A, B, spec) == run_naive(A, B, spec).tuples


def test_permutation_invariant():
    A, B, spec = synthetic_instance(40, 2, 2, 2, "anticorrelated", 7)
    rng = np.random.default_rng(0)
    pa, pb = rng.permutation(len(A)), rng.permutation(len(B))
    A2 = Relation(A.schema, A.values[pa], A.ids[pa])
    B2 = Relation(B.schema, B.values[pb], B.ids[pb])
    assert brute_force_asjq(A2, B2, spec) == brute_force_asjq(A, B, spec)


def test_oracle_does_not_use_engine_code():
    import asjq.oracle as o

    src = open(o.__file__).read()
    for mod in ("skyline", "join", "algorithms", "_kernels"):
        assert f"from .{mod}" not in src and f"asjq.{mod}" not in src
