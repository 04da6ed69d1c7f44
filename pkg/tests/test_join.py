import itertools

import numpy as np
from hypothesis import given, strategies as st

from asjq.datagen import synthetic_instance
from asjq.join import JoinPlan, aggregate_pair, compute_join, join_pairs, joins_with
from asjq.model import AggFn, JoinOp, Pref


def test_flights_full_join(flights):
    spec, A, B = flights
    pairs = list(compute_join(A.ids, B.ids, A, B, spec))
    assert len(pairs) == 11
    assert pairs == sorted(pairs)


def test_flights_mixed_block(flights):
    spec, A, B = flights
    assert list(compute_join([13, 14, 15, 16], [23, 24, 25], A, B, spec)) == [(13, 23), (14, 24), (15, 23)]


def test_empty_side(flights):
    spec, A, B = flights
    assert list(compute_join([], B.ids, A, B, spec)) == []


def test_aggregate_pair_flights(flights):
    spec, A, B = flights
    assert aggregate_pair(A.tuple(11), B.tuple(21), spec).vector[-2:] == (324.0, 260.0)
    assert aggregate_pair(A.tuple(14), B.tuple(24), spec).vector[-2:] == (300.0, 205.0)


def test_avg_idempotent():
    assert AggFn.AVG.apply(0.3, 0.3) == 0.3


def test_plan_partitions_conditions(flights):
    spec, _, _ = flights
    plan = JoinPlan.for_query(spec)
    assert sorted(plan.eq_slots + plan.ineq_slots) == sorted(c.slot for c in spec.joins)


@given(
    st.integers(0, 40), st.integers(1, 5), st.integers(0, 2 ** 32 - 1),
    st.lists(st.sampled_from(list(JoinOp)), min_size=1, max_size=3),
)
def test_join_matches_nested_loop(n, cats, seed, ops):
    A, B, spec = synthetic_instance(n, 1, 1, cats, "independent", seed, ops)
    lp, rp = join_pairs(A, B, spec)
    got = list(zip(A.ids[lp].tolist(), B.ids[rp].tolist()))
    want = [
        (u.row_id, v.row_id) for u, v in itertools.product(A.tuples(), B.tuples())
        if joins_with(u, v, spec)
    ]
    assert got == sorted(want)


@given(st.sampled_from(list(AggFn)), st.floats(0, 1), st.floats(0, 1), st.floats(0, 1), st.floats(0, 1))
def test_aggregates_monotone(fn, a, b, c, d):
    lo1, hi1 = sorted((a, b))
    lo2, hi2 = sorted((c, d))
    assert fn.apply(lo1, lo2) <= fn.apply(hi1, hi2)


def test_join_cardinality_close_to_expected():
    for seed in range(3):
        A, B, spec = synthetic_instance(1000, 2, 2, 10, "independent", seed)
        lp, _ = join_pairs(A, B, spec)
        assert abs(len(lp) - 100_000) <= 10_000
