import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from asjq.datagen import synthetic_instance
from asjq.join import aggregate_pair, joins_with
from asjq.model import (
    Aggregate,
    AggFn,
    Column,
    GuaranteeRegime,
    JoinCondition,
    JoinedTuple,
    JoinOp,
    Pref,
    QueryError,
    QuerySpec,
    Relation,
    RelationSchema,
    Role,
    SchemaMismatch,
    Side,
    SourceTuple,
    derive_join_preference,
    joined_dominates,
    prune_dominates,
    validate_query,
    weak_local_dominates,
)

DERIVED_PREFS = {
    (JoinOp.EQ, Side.LEFT): Pref.EQUAL,
    (JoinOp.EQ, Side.RIGHT): Pref.EQUAL,
    (JoinOp.LT, Side.LEFT): Pref.MIN,
    (JoinOp.LT, Side.RIGHT): Pref.MAX,
    (JoinOp.LE, Side.LEFT): Pref.MIN,
    (JoinOp.LE, Side.RIGHT): Pref.MAX,
    (JoinOp.GT, Side.LEFT): Pref.MAX,
    (JoinOp.GT, Side.RIGHT): Pref.MIN,
    (JoinOp.GE, Side.LEFT): Pref.MAX,
    (JoinOp.GE, Side.RIGHT): Pref.MIN,
}


@pytest.mark.parametrize("op,side", sorted(DERIVED_PREFS, key=lambda k: (k[0].value, k[1].value)))
def test_join_preference_table(op, side):
    assert derive_join_preference(op, side) is DERIVED_PREFS[(op, side)]


def test_join_preference_covers_all_pairs():
    assert len(DERIVED_PREFS) == 10
    assert set(DERIVED_PREFS) == set(itertools.product(JoinOp, Side))


def test_derived_preference_keeps_join_partners():
    # a tuple at least as good on the derived preference joins with every partner
    # of the tuple it beats
    for op in JoinOp:
        for a, a2, b in itertools.product(range(4), repeat=3):
            pref = derive_join_preference(op, Side.LEFT)
            better = {Pref.MIN: a <= a2, Pref.MAX: a >= a2, Pref.EQUAL: a == a2}[pref]
            if better and op.holds(a2, b):
                assert op.holds(a, b)
            pref = derive_join_preference(op, Side.RIGHT)
            better = {Pref.MIN: a <= a2, Pref.MAX: a >= a2, Pref.EQUAL: a == a2}[pref]
            if better and op.holds(b, a2):
                assert op.holds(b, a)


def test_flight_11_prunes_17(flights):
    spec, A, B = flights
    assert prune_dominates(A.tuple(11), A.tuple(17), A.schema, spec)
    assert not prune_dominates(A.tuple(17), A.tuple(11), A.schema, spec)


def test_flight_24_does_not_prune_26(flights):
    spec, A, B = flights
    # src differs (E vs C), so the join attributes are incompatible
    assert not prune_dominates(B.tuple(24), B.tuple(26), B.schema, spec)


def test_prune_dominance_irreflexive_on_flights(flights):
    spec, A, B = flights
    for rel in (A, B):
        for t in rel.tuples():
            assert not prune_dominates(t, t, rel.schema, spec)


def test_weak_local_examples(flights):
    spec, A, B = flights
    assert weak_local_dominates(A.tuple(11), A.tuple(13), A.schema)
    assert not weak_local_dominates(A.tuple(12), A.tuple(11), A.schema)


def test_weak_local_ties_count_both_ways():
    schema = RelationSchema("R", (Column("a", Role.LOCAL, pref=Pref.MAX),))
    rel = Relation(schema, [[3.0], [3.0]])
    assert weak_local_dominates(rel.tuple(0), rel.tuple(1), schema)
    assert weak_local_dominates(rel.tuple(1), rel.tuple(0), schema)


def test_joined_dominance_examples(flights):
    spec, A, B = flights
    j = {
        p: aggregate_pair(A.tuple(p[0]), B.tuple(p[1]), spec)
        for p in [(11, 21), (13, 23), (14, 24)]
    }
    assert joined_dominates(j[(11, 21)], j[(13, 23)], spec)
    assert not joined_dominates(j[(11, 21)], j[(14, 24)], spec)
    assert not joined_dominates(j[(11, 21)], j[(11, 21)], spec)


def test_joined_dominance_length_mismatch(flights):
    spec, _, _ = flights
    with pytest.raises(SchemaMismatch):
        joined_dominates(JoinedTuple(1, 2, (1.0,)), JoinedTuple(1, 3, (2.0,)), spec)


def test_prune_dominance_schema_mismatch(flights):
    spec, A, B = flights
    with pytest.raises(SchemaMismatch):
        prune_dominates(SourceTuple(1, (1.0,)), A.tuple(11), A.schema, spec)


def test_regimes(flights):
    spec, _, _ = flights
    assert spec.join_regime == "MIXED"
    assert spec.regime is GuaranteeRegime.RESTRICTED
    eq_only = QuerySpec(spec.left, spec.right, (spec.joins[0],), spec.aggregates)
    # drop the arr/dep columns from the schemas so the slots line up
    def strip(s):
        return RelationSchema(s.name, tuple(c for c in s.columns if not (c.role is Role.JOIN and c.slot == 1)),
                              s.source, s.key)
    eq_only = QuerySpec(strip(spec.left), strip(spec.right), (spec.joins[0],), spec.aggregates)
    check = validate_query(eq_only)
    assert check.join_regime == "EQUI"
    assert check.regime is GuaranteeRegime.EQUI_STRICT
    assert check.weak_aggregates == ()


def _tiny_schema(name, agg_slots=1):
    cols = [Column("k", Role.JOIN, slot=0), Column("l", Role.LOCAL, pref=Pref.MIN)]
    cols += [Column(f"g{i}", Role.AGGREGATE, slot=i, pref=Pref.MIN) for i in range(agg_slots)]
    return RelationSchema(name, tuple(cols))


def test_zero_aggregates_rejected():
    a = RelationSchema("A", (Column("k", Role.JOIN, slot=0), Column("l", Role.LOCAL, pref=Pref.MIN)))
    b = RelationSchema("B", (Column("k", Role.JOIN, slot=0), Column("l", Role.LOCAL, pref=Pref.MIN)))
    with pytest.raises(QueryError, match="at least one aggregate"):
        validate_query(QuerySpec(a, b, (JoinCondition(0, JoinOp.EQ),), ()))


def test_dangling_slot_rejected():
    a, b = _tiny_schema("A", 2), _tiny_schema("B", 1)
    spec = QuerySpec(a, b, (JoinCondition(0, JoinOp.EQ),),
                     (Aggregate(0, AggFn.SUM, Pref.MIN, "g0"), Aggregate(1, AggFn.SUM, Pref.MIN, "g1")))
    with pytest.raises(QueryError, match="slots"):
        validate_query(spec)


def test_equal_preference_on_local_rejected():
    a = RelationSchema("A", (Column("k", Role.JOIN, slot=0), Column("l", Role.LOCAL, pref=Pref.EQUAL),
                             Column("g", Role.AGGREGATE, slot=0, pref=Pref.MIN)))
    b = _tiny_schema("B")
    spec = QuerySpec(a, b, (JoinCondition(0, JoinOp.EQ),), (Aggregate(0, AggFn.SUM, Pref.MIN, "g"),))
    with pytest.raises(QueryError, match="MIN or MAX"):
        validate_query(spec)


def test_min_aggregate_input_gives_no_strictness():
    # u beats u2 only on a MIN-aggregated input; joined with a partner whose
    # value is smaller still, both joined vectors coincide, so pruning u2
    # would lose a skyline tuple
    a, b = _tiny_schema("A"), _tiny_schema("B")
    spec = QuerySpec(a, b, (JoinCondition(0, JoinOp.EQ),), (Aggregate(0, AggFn.MIN, Pref.MIN, "g0"),))
    A = Relation(a, [[0, 1, 5], [0, 1, 6]])
    B = Relation(b, [[0, 1, 2]])
    assert not prune_dominates(A.tuple(0), A.tuple(1), a, spec)
    j0 = aggregate_pair(A.tuple(0), B.tuple(0), spec)
    j1 = aggregate_pair(A.tuple(1), B.tuple(0), spec)
    assert j0.vector == j1.vector
    assert not joined_dominates(j0, j1, spec)
    # with SUM the same advantage is strict and pruning is sound
    spec_sum = QuerySpec(a, b, spec.joins, (Aggregate(0, AggFn.SUM, Pref.MIN, "g0"),))
    assert prune_dominates(A.tuple(0), A.tuple(1), a, spec_sum)


def test_relation_rejects_bad_values():
    schema = _tiny_schema("A")
    with pytest.raises(SchemaMismatch):
        Relation(schema, [[1.0, 2.0]])
    with pytest.raises(ValueError, match="non-finite"):
        Relation(schema, [[1.0, float("nan"), 2.0]])
    with pytest.raises(ValueError, match="duplicate"):
        Relation(schema, [[1, 2, 3], [1, 2, 3]], ids=[4, 4])


def test_relation_sorted_by_id():
    rel = Relation(_tiny_schema("A"), [[1, 1, 1], [2, 2, 2]], ids=[9, 3])
    assert list(rel.ids) == [3, 9]
    assert rel.tuple(9).values == (1.0, 1.0, 1.0)


# --------------------------------------------------------------------------
# dominance axioms on random tuples

ops = st.sampled_from(list(JoinOp))
fns = st.sampled_from(list(AggFn))


@st.composite
def small_instances(draw):
    n = draw(st.integers(2, 12))
    local = draw(st.integers(0, 3))
    agg = draw(st.integers(1, 2))
    cats = draw(st.integers(1, 3))
    dist = draw(st.sampled_from(["correlated", "independent", "anticorrelated"]))
    seed = draw(st.integers(0, 2 ** 32 - 1))
    op_list = draw(st.lists(ops, min_size=1, max_size=2))
    fn_list = draw(st.lists(fns, min_size=agg, max_size=agg))
    A, B, spec = synthetic_instance(n, local, agg, cats, dist, seed, op_list, fn_list)
    if draw(st.booleans()) and len(A) > 1:
        # duplicate a row so ties are exercised
        vals = np.vstack([A.values, A.values[:1]])
        A = Relation(A.schema, vals)
    return A, B, spec


@given(small_instances())
def test_prune_dominance_soundness_steps(inst):
    A, B, spec = inst
    ta, tb = A.tuples(), B.tuples()
    for u, u2 in itertools.permutations(ta, 2):
        if not prune_dominates(u, u2, A.schema, spec):
            continue
        for v in tb:
            if joins_with(u2, v, spec):
                # every partner of the loser is a partner of the winner ...
                assert joins_with(u, v, spec)
                # ... and the winner's joined tuple dominates the loser's
                assert joined_dominates(aggregate_pair(u, v, spec), aggregate_pair(u2, v, spec), spec)


@given(small_instances())
def test_dominance_axioms(inst):
    A, B, spec = inst
    ts = A.tuples()
    for u in ts:
        assert not prune_dominates(u, u, A.schema, spec)
    for u, v, w in itertools.permutations(ts, 3):
        if prune_dominates(u, v, A.schema, spec) and prune_dominates(v, w, A.schema, spec):
            assert prune_dominates(u, w, A.schema, spec)
        if weak_local_dominates(u, v, A.schema) and weak_local_dominates(v, w, A.schema):
            assert weak_local_dominates(u, w, A.schema)
    joined = [aggregate_pair(u, v, spec) for u in ts[:5] for v in B.tuples()[:5]]
    for r in joined:
        assert not joined_dominates(r, r, spec)
    for r, s, t in itertools.permutations(joined[:8], 3):
        if joined_dominates(r, s, spec) and joined_dominates(s, t, spec):
            assert joined_dominates(r, t, spec)
