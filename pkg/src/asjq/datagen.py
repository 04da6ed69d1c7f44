"""Seeded synthetic relations in the three classic skyline distributions.

Every value column lies in [0, 1) and is snapped to a 2**-32 grid, so sums
and averages of two values are exact in double precision and ties behave
the same in every algorithm.  All columns prefer smaller values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import (
    Aggregate,
    AggFn,
    Column,
    JoinCondition,
    JoinOp,
    Pref,
    QuerySpec,
    Relation,
    RelationSchema,
    Role,
)

DISTRIBUTIONS = ("correlated", "independent", "anticorrelated")
SIGMA = 0.05
_GRID = 2.0 ** 32
_TOP = 1.0 - 1.0 / _GRID

_ALIASES = {
    "corr": "correlated",
    "correlated": "correlated",
    "indep": "independent",
    "independent": "independent",
    "anti": "anticorrelated",
    "anticorrelated": "anticorrelated",
    "anti-correlated": "anticorrelated",
    "anti_correlated": "anticorrelated",
}


def normalize_distribution(name: str) -> str:
    try:
        return _ALIASES[name.strip().lower()]
    except KeyError:
        raise ValueError(f"unknown distribution {name!r}; choose from {DISTRIBUTIONS}") from None


@dataclass(frozen=True)
class GenParams:
    n: int
    local: int = 2
    agg: int = 2
    cats: int = 10
    dist: str = "correlated"
    seed: int = 0
    joins: int = 1  # join columns; the first is the category, others are uniform

    def __post_init__(self):
        problems = []
        if self.n < 0:
            problems.append("n must be >= 0")
        if self.local < 0 or self.agg < 0 or self.local + self.agg < 1:
            problems.append("need local >= 0, agg >= 0 and local + agg >= 1")
        if self.cats < 1:
            problems.append("cats must be >= 1")
        if self.joins < 0:
            problems.append("joins must be >= 0")
        if problems:
            raise ValueError("; ".join(problems))
        object.__setattr__(self, "dist", normalize_distribution(self.dist))


def _snap(x: np.ndarray) -> np.ndarray:
    return np.floor(np.clip(x, 0.0, _TOP) * _GRID) / _GRID


def _values(rng: np.random.Generator, n: int, d: int, dist: str) -> np.ndarray:
    if dist == "independent":
        X = rng.random((n, d))
    elif dist == "correlated":
        base = rng.random((n, 1))
        X = base + rng.normal(0.0, SIGMA, (n, d))
    else:
        # spread along the plane where the coordinates sum to d / 2
        X = rng.dirichlet(np.ones(d), size=n) * (d / 2.0) + rng.normal(0.0, SIGMA, (n, d))
    return _snap(X)


def relation_schema(name: str, local: int, agg: int, joins: int = 1, source: str | None = None) -> RelationSchema:
    cols = [Column("c", Role.JOIN, slot=0)] if joins else []
    cols += [Column(f"t{k}", Role.JOIN, slot=k) for k in range(1, joins)]
    cols += [Column(f"l{k}", Role.LOCAL, pref=Pref.MIN) for k in range(local)]
    cols += [Column(f"g{k}", Role.AGGREGATE, slot=k, pref=Pref.MIN) for k in range(agg)]
    return RelationSchema(name, tuple(cols), source=source)


def generate_relation(params: GenParams, name: str = "R") -> Relation:
    """Deterministic relation for ``params``; row ids are 0..n-1."""
    rng = np.random.default_rng(params.seed)
    n = params.n
    cats = rng.integers(0, params.cats, n).astype(float)
    extra = _snap(rng.random((n, max(0, params.joins - 1))))
    vals = _values(rng, n, params.local + params.agg, params.dist)
    parts = ([cats[:, None]] if params.joins else []) + [extra, vals]
    schema = relation_schema(name, params.local, params.agg, params.joins)
    return Relation(schema, np.hstack(parts).reshape(n, len(schema.columns)))


def synthetic_query(left: RelationSchema, right: RelationSchema, ops=(JoinOp.EQ,),
                    fns=None) -> QuerySpec:
    """Query joining slot k with ``ops[k]`` and aggregating every g column (MIN preferred)."""
    n = sum(1 for c in left.columns if c.role is Role.AGGREGATE)
    fns = [AggFn.SUM] * n if fns is None else [AggFn(f) if isinstance(f, str) else f for f in fns]
    if len(fns) != n:
        raise ValueError(f"need {n} aggregate functions, got {len(fns)}")
    ops = [JoinOp(o) if isinstance(o, str) else o for o in ops]
    joins = tuple(JoinCondition(k, op) for k, op in enumerate(ops))
    aggs = tuple(Aggregate(k, fn, Pref.MIN, f"g{k}") for k, fn in enumerate(fns))
    return QuerySpec(left, right, joins, aggs)


def synthetic_instance(n: int, local: int = 2, agg: int = 2, cats: int = 10, dist: str = "correlated",
                       seed: int = 0, ops=(JoinOp.EQ,), fns=None, n_right: int | None = None):
    """Two independently seeded relations and the matching query: ``(A, B, spec)``."""
    sa, sb = np.random.SeedSequence(seed).spawn(2)
    pa = GenParams(n, local, agg, cats, dist, int(sa.generate_state(1)[0]), len(ops))
    pb = GenParams(n if n_right is None else n_right, local, agg, cats, dist,
                   int(sb.generate_state(1)[0]), len(ops))
    A = generate_relation(pa, "A")
    B = generate_relation(pb, "B")
    return A, B, synthetic_query(A.schema, B.schema, ops, fns)
