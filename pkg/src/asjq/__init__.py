"""Aggregate skyline join queries over two relations."""

from .algorithms import (
    ALGORITHMS,
    AsjqResult,
    Mode,
    NotEligible,
    RunReport,
    run_dominator,
    run_iterative,
    run_msc,
    run_naive,
    run_query,
    run_single_aggregate,
)
from .io import load_query, load_relation, parse_query
from .model import (
    AggFn,
    GuaranteeRegime,
    JoinedTuple,
    JoinOp,
    Pref,
    QueryError,
    QuerySpec,
    Relation,
    RelationSchema,
)
from .oracle import brute_force_asjq

__all__ = [
    "ALGORITHMS", "AsjqResult", "Mode", "NotEligible", "RunReport",
    "run_dominator", "run_iterative", "run_msc", "run_naive", "run_query", "run_single_aggregate",
    "load_query", "load_relation", "parse_query",
    "AggFn", "GuaranteeRegime", "JoinedTuple", "JoinOp", "Pref", "QueryError", "QuerySpec",
    "Relation", "RelationSchema", "brute_force_asjq",
]
