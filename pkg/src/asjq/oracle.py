"""Brute-force reference answers for differential testing.

Deliberately shares nothing with the engine except the data model: pairs
are enumerated exhaustively, join conditions and aggregates are evaluated
through their own tables here, and the skyline is taken with a
block-nested-loop window instead of a presorted filter.
"""

from __future__ import annotations

import operator
from typing import Callable, Iterable, TypeVar

import numpy as np

from .model import AggFn, JoinedTuple, JoinOp, Pref, QuerySpec, Relation

T = TypeVar("T")

_JOIN = {
    JoinOp.EQ: operator.eq,
    JoinOp.LT: operator.lt,
    JoinOp.LE: operator.le,
    JoinOp.GT: operator.gt,
    JoinOp.GE: operator.ge,
}

_AGG = {
    AggFn.SUM: lambda a, b: a + b,
    AggFn.AVG: lambda a, b: (a + b) / 2,
    AggFn.MIN: np.fmin,
    AggFn.MAX: np.fmax,
}


def brute_force_skyline(tuples: Iterable[T], dominates: Callable[[T, T], bool]) -> list[T]:
    """Members of ``tuples`` that no other member dominates, in input order."""
    items = list(tuples)
    return [
        t for i, t in enumerate(items)
        if not any(dominates(s, t) for j, s in enumerate(items) if j != i)
    ]


def _col(rel: Relation, name: str) -> np.ndarray:
    return rel.values[:, rel.schema.column_names.index(name)]


def _columns(schema, role_name):
    return [c for c in schema.columns if c.role.name == role_name]


def _by_slot(schema, role_name):
    return {c.slot: c.name for c in _columns(schema, role_name)}


def _better_or_equal(a, b, prefs):
    ok = np.ones(np.broadcast(a[..., 0], b[..., 0]).shape, dtype=bool)
    strict = np.zeros_like(ok)
    for k, p in enumerate(prefs):
        if p is Pref.MAX:
            ok &= a[..., k] >= b[..., k]
            strict |= a[..., k] > b[..., k]
        else:
            ok &= a[..., k] <= b[..., k]
            strict |= a[..., k] < b[..., k]
    return ok & strict


def _window_skyline(V: np.ndarray, prefs) -> np.ndarray:
    """Indices of the non-dominated rows of ``V`` via a BNL window."""
    window: list[int] = []
    for i in range(len(V)):
        if window:
            W = V[window]
            if _better_or_equal(W, V[i][None, :], prefs).any():
                continue
            beaten = _better_or_equal(V[i][None, :], W, prefs)
            window = [w for w, b in zip(window, beaten) if not b]
        window.append(i)
    return np.array(sorted(window), dtype=np.int64)


def brute_force_asjq(A: Relation, B: Relation, spec: QuerySpec) -> list[JoinedTuple]:
    """Full ASJQ answer by exhaustive pairing; tuples in (left id, right id) order."""
    sa, sb = spec.left, spec.right
    na, nb = len(A), len(B)
    li = np.repeat(np.arange(na), nb)
    ri = np.tile(np.arange(nb), na)
    ok = np.ones(len(li), dtype=bool)
    ja, jb = _by_slot(sa, "JOIN"), _by_slot(sb, "JOIN")
    for cond in spec.joins:
        ok &= _JOIN[cond.op](_col(A, ja[cond.slot])[li], _col(B, jb[cond.slot])[ri])
    li, ri = li[ok], ri[ok]
    cols, prefs = [], []
    for rel, idx, schema in ((A, li, sa), (B, ri, sb)):
        for c in _columns(schema, "LOCAL"):
            cols.append(_col(rel, c.name)[idx])
            prefs.append(c.pref)
    ga, gb = _by_slot(sa, "AGGREGATE"), _by_slot(sb, "AGGREGATE")
    for agg in sorted(spec.aggregates, key=lambda a: a.slot):
        cols.append(_AGG[agg.fn](_col(A, ga[agg.slot])[li], _col(B, gb[agg.slot])[ri]))
        prefs.append(agg.pref)
    V = np.column_stack(cols) if cols else np.zeros((len(li), 0))
    keep = _window_skyline(V, prefs)
    out = [
        JoinedTuple(int(A.ids[li[k]]), int(B.ids[ri[k]]), tuple(float(x) for x in V[k]))
        for k in keep
    ]
    return sorted(out)
