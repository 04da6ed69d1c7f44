"""Join-pair computation and aggregation of joined tuples."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .model import JoinedTuple, JoinOp, QuerySpec, Relation, SourceTuple

BLOCK = 1 << 20  # max pairs materialised per streamed block


@dataclass(frozen=True)
class JoinPlan:
    eq_slots: tuple[int, ...]
    ineq_slots: tuple[int, ...]

    @classmethod
    def for_query(cls, spec: QuerySpec) -> "JoinPlan":
        eq = tuple(c.slot for c in spec.joins if c.op is JoinOp.EQ)
        ineq = tuple(c.slot for c in spec.joins if c.op is not JoinOp.EQ)
        return cls(eq, ineq)


def _join_cols(rel: Relation) -> np.ndarray:
    return rel.values[:, rel.schema.join_idx]


def _ineq_filter(HA, HB, lp, rp, spec: QuerySpec, plan: JoinPlan) -> np.ndarray:
    keep = np.ones(len(lp), dtype=bool)
    ops = {c.slot: c.op for c in spec.joins}
    for s in plan.ineq_slots:
        keep &= ops[s].holds(HA[lp, s], HB[rp, s])
    return keep


def _eq_groups(HA, HB, left, right, plan: JoinPlan):
    """Yield (left positions, right positions) sharing every equality key."""
    if not plan.eq_slots:
        yield left, right
        return
    slots = list(plan.eq_slots)
    ka, kb = HA[left][:, slots], HB[right][:, slots]
    _, inv = np.unique(np.vstack([ka, kb]), axis=0, return_inverse=True)
    inv = inv.reshape(-1)
    ga, gb = inv[: len(left)], inv[len(left):]
    oa, ob = np.argsort(ga, kind="stable"), np.argsort(gb, kind="stable")
    ga_s, gb_s = ga[oa], gb[ob]
    for g in np.intersect1d(ga_s, gb_s):
        la = left[oa[np.searchsorted(ga_s, g, "left"):np.searchsorted(ga_s, g, "right")]]
        rb = right[ob[np.searchsorted(gb_s, g, "left"):np.searchsorted(gb_s, g, "right")]]
        yield la, rb


def iter_join_blocks(A: Relation, B: Relation, spec: QuerySpec, left=None, right=None,
                     block: int = BLOCK) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Stream join-valid position pairs in bounded blocks (no global order)."""
    left = np.arange(len(A)) if left is None else np.asarray(left, dtype=np.int64)
    right = np.arange(len(B)) if right is None else np.asarray(right, dtype=np.int64)
    if len(left) == 0 or len(right) == 0:
        return
    plan = JoinPlan.for_query(spec)
    HA, HB = _join_cols(A), _join_cols(B)
    for la, rb in _eq_groups(HA, HB, left, right, plan):
        step = max(1, block // max(1, len(rb)))
        for i in range(0, len(la), step):
            chunk = la[i:i + step]
            lp = np.repeat(chunk, len(rb))
            rp = np.tile(rb, len(chunk))
            if plan.ineq_slots:
                keep = _ineq_filter(HA, HB, lp, rp, spec, plan)
                lp, rp = lp[keep], rp[keep]
            if len(lp):
                yield lp, rp


def join_pairs(A: Relation, B: Relation, spec: QuerySpec, left=None, right=None):
    """All join-valid (left position, right position) pairs in canonical order."""
    blocks = list(iter_join_blocks(A, B, spec, left, right))
    if not blocks:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty.copy()
    lp = np.concatenate([b[0] for b in blocks])
    rp = np.concatenate([b[1] for b in blocks])
    order = np.lexsort((rp, lp))
    return lp[order], rp[order]


def compute_join(left_ids, right_ids, A: Relation, B: Relation, spec: QuerySpec) -> Iterator[tuple[int, int]]:
    """Yield join-valid ``(left id, right id)`` pairs, ascending."""
    lp, rp = join_pairs(A, B, spec, A.positions(left_ids), B.positions(right_ids))
    for a, b in zip(A.ids[lp], B.ids[rp]):
        yield int(a), int(b)


def aggregate_vectors(A: Relation, B: Relation, spec: QuerySpec, lp, rp) -> np.ndarray:
    """Raw skyline vectors (left locals, right locals, aggregates) for position pairs."""
    lp = np.asarray(lp, dtype=np.int64)
    rp = np.asarray(rp, dtype=np.int64)
    parts = [A.values[lp][:, A.schema.local_idx], B.values[rp][:, B.schema.local_idx]]
    aggs = sorted(spec.aggregates, key=lambda a: a.slot)
    ga, gb = A.schema.agg_idx, B.schema.agg_idx
    for a in aggs:
        parts.append(a.fn.apply(A.values[lp, ga[a.slot]], B.values[rp, gb[a.slot]])[:, None])
    return np.hstack(parts) if parts else np.zeros((len(lp), 0))


def aggregate_pair(u: SourceTuple, v: SourceTuple, spec: QuerySpec) -> JoinedTuple:
    """Assemble the joined skyline vector of ``u`` (left) and ``v`` (right)."""
    sa, sb = spec.left, spec.right
    vec = [u.values[i] for i in sa.local_idx] + [v.values[i] for i in sb.local_idx]
    for a in sorted(spec.aggregates, key=lambda a: a.slot):
        vec.append(float(a.fn.apply(u.values[sa.agg_idx[a.slot]], v.values[sb.agg_idx[a.slot]])))
    return JoinedTuple(u.row_id, v.row_id, tuple(float(x) for x in vec))


def joins_with(u: SourceTuple, v: SourceTuple, spec: QuerySpec) -> bool:
    sa, sb = spec.left, spec.right
    return all(
        c.op.holds(u.values[sa.join_idx[c.slot]], v.values[sb.join_idx[c.slot]])
        for c in spec.joins
    )
