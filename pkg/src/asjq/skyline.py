"""Skyline computation over single source relations.

Public functions speak in row ids; the ``*_pos`` variants work on row
positions and are what the ASJQ algorithms call.  All matrices handed to the
filtering kernels are *oriented*: smaller is better in every column.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .model import Pref, QuerySpec, Relation


@dataclass
class OpCounter:
    """Mutable tally of pairwise dominance tests."""

    comparisons: int = 0

    def add(self, n) -> None:
        self.comparisons += int(n)


@dataclass(frozen=True)
class Partition:
    skyline: frozenset[int]
    rest: frozenset[int]


@dataclass(frozen=True)
class LayerDecomposition:
    layers: tuple[frozenset[int], ...]
    residual: frozenset[int]
    delta: int = 0

    @property
    def k(self) -> int:
        return len(self.layers)


# --------------------------------------------------------------------------
# kernels


def presort(X: np.ndarray) -> np.ndarray:
    """Order rows so that every dominator precedes the rows it dominates.

    Primary key is the sum of per-column dense ranks normalised to [0, 1];
    ties fall back to the lexicographic order of the rows themselves, which
    settles the cases where rank sums collide.
    """
    n, d = X.shape
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    score = np.zeros(n)
    for c in range(d):
        uniq, inv = np.unique(X[:, c], return_inverse=True)
        if len(uniq) > 1:
            score += inv.reshape(-1) / (len(uniq) - 1)
    keys = [X[:, c] for c in range(d - 1, -1, -1)] + [score]
    return np.lexsort(keys).astype(np.int64)


def sfs(X: np.ndarray, strict: np.ndarray | None = None, counter: OpCounter | None = None) -> np.ndarray:
    """Sort-filter skyline of the oriented matrix ``X``.

    Row ``a`` dominates ``b`` when ``a <= b`` everywhere and ``a < b`` in at
    least one column flagged in ``strict`` (all columns by default).  Returns
    the indices of the non-dominated rows in presort order.
    """
    n, d = X.shape
    if strict is None:
        strict = np.ones(d, dtype=bool)
    order = presort(X)
    Xs = X[order]
    Ss = Xs[:, strict]
    alive = np.arange(n)
    kept = []
    while alive.size:
        head = alive[0]
        kept.append(head)
        rest = alive[1:]
        if rest.size == 0:
            break
        if counter is not None:
            counter.add(rest.size)
        dom = np.all(Xs[rest] >= Xs[head], axis=1)
        if Ss.shape[1]:
            dom &= np.any(Ss[rest] > Ss[head], axis=1)
        else:
            dom[:] = False
        alive = rest[~dom]
    return order[np.asarray(kept, dtype=np.int64)]


def group_rows(keys: np.ndarray) -> list[np.ndarray]:
    """Split row indices into groups of identical key rows."""
    n = len(keys)
    if keys.shape[1] == 0 or n == 0:
        return [np.arange(n)]
    _, inv = np.unique(keys, axis=0, return_inverse=True)
    inv = inv.reshape(-1)
    order = np.argsort(inv, kind="stable")
    bounds = np.flatnonzero(np.diff(inv[order])) + 1
    return np.split(order, bounds)


# --------------------------------------------------------------------------
# oriented views of a relation


def local_matrix(rel: Relation) -> np.ndarray:
    s = rel.schema
    signs = np.array([s.columns[i].pref.sign for i in s.local_idx], dtype=float)
    return rel.values[:, s.local_idx] * signs


def prune_matrix(rel: Relation, spec: QuerySpec):
    """Oriented prune-dominance columns, their strictness flags, and EQUAL keys."""
    s = rel.schema
    side = spec.side_of(s)
    cols, strict = [], []
    L = local_matrix(rel)
    cols.append(L)
    strict += [True] * L.shape[1]
    aggs = sorted(spec.aggregates, key=lambda a: a.slot)
    G = rel.values[:, s.agg_idx] * np.array([a.pref.sign for a in aggs], dtype=float)
    cols.append(G)
    strict += [a.fn.strict for a in aggs]
    keys = []
    for idx, pref in zip(s.join_idx, spec.join_prefs(side)):
        col = rel.values[:, idx]
        if pref is Pref.EQUAL:
            keys.append(col)
        else:
            cols.append((col * pref.sign)[:, None])
            strict.append(False)
    X = np.hstack(cols) if cols else np.zeros((len(rel), 0))
    K = np.column_stack(keys) if keys else np.zeros((len(rel), 0))
    return X, np.asarray(strict, dtype=bool), K


# --------------------------------------------------------------------------
# position-level operations


def prune_skyline_pos(rel: Relation, spec: QuerySpec, counter: OpCounter | None = None) -> np.ndarray:
    """Positions of the prune skyline, ascending."""
    X, strict, K = prune_matrix(rel, spec)
    kept = []
    for g in group_rows(K):
        kept.append(g[sfs(X[g], strict, counter)])
    if not kept:
        return np.zeros(0, dtype=np.int64)
    return np.sort(np.concatenate(kept)).astype(np.int64)


def weak_split_pos(L: np.ndarray, pos: np.ndarray, counter: OpCounter | None = None):
    """Split ``pos`` into (weak-local skyline, rest), both ascending.

    A row survives only if no *other* row in ``pos`` has locals preferred or
    equal everywhere, so rows sharing a local profile knock each other out.
    """
    pos = np.asarray(pos, dtype=np.int64)
    X = L[pos]
    if len(pos) == 0:
        return pos, pos
    if X.shape[1] == 0:
        return (pos, pos[:0]) if len(pos) == 1 else (pos[:0], pos)
    kept = np.zeros(len(pos), dtype=bool)
    kept[sfs(X, None, counter)] = True
    _, inv, counts = np.unique(X, axis=0, return_inverse=True, return_counts=True)
    kept &= counts[inv.reshape(-1)] == 1
    return pos[kept], pos[~kept]


def dominators_pos(L: np.ndarray, pos: np.ndarray, targets: np.ndarray,
                   counter: OpCounter | None = None) -> dict[int, np.ndarray]:
    """For each target position, the positions in ``pos`` weak-locally dominating it."""
    pos = np.asarray(pos, dtype=np.int64)
    X = L[pos]
    out = {}
    for t in targets:
        t = int(t)
        mask = np.all(X <= L[t], axis=1)
        mask &= pos != t
        if counter is not None:
            counter.add(len(pos))
        out[t] = pos[mask]
    return out


def peel_pos(L: np.ndarray, pos: np.ndarray, delta: int, counter: OpCounter | None = None):
    """Peel weak-local layers until the remainder is at most ``delta`` rows.

    Peeling also stops when the next split would leave an empty layer (a
    group of mutual ties) or an empty remainder (the rest is already an
    antichain and becomes the final block as is).
    """
    if delta < 0:
        raise ValueError("delta must be non-negative")
    layers = []
    rest = np.asarray(pos, dtype=np.int64)
    while len(rest) > delta:
        sky, nxt = weak_split_pos(L, rest, counter)
        if len(sky) == 0 or len(nxt) == 0:
            break
        layers.append(sky)
        rest = nxt
    return layers, rest


# --------------------------------------------------------------------------
# id-level public API


def prune_skyline(relation: Relation, spec: QuerySpec) -> Partition:
    sky = prune_skyline_pos(relation, spec)
    rest = np.setdiff1d(np.arange(len(relation)), sky)
    return Partition(relation.id_set(sky), relation.id_set(rest))


def weak_local_partition(ids: Iterable[int], relation: Relation) -> Partition:
    sky, rest = weak_split_pos(local_matrix(relation), relation.positions(ids))
    return Partition(relation.id_set(sky), relation.id_set(rest))


def find_weak_local_dominators(a0: Iterable[int], relation: Relation):
    """Weak-local split of ``a0`` plus the dominator list of every non-skyline row.

    Returns ``(skyline ids, rest ids, {rest id: dominator ids})``.
    """
    L = local_matrix(relation)
    pos = relation.positions(a0)
    sky, rest = weak_split_pos(L, pos)
    dom = dominators_pos(L, pos, rest)
    ids = relation.ids
    dmap = {int(ids[t]): tuple(int(x) for x in ids[d]) for t, d in dom.items()}
    return relation.id_set(sky), relation.id_set(rest), dmap


def peel_layers(a0: Iterable[int], relation: Relation, delta: int) -> LayerDecomposition:
    layers, rest = peel_pos(local_matrix(relation), relation.positions(a0), delta)
    return LayerDecomposition(
        tuple(relation.id_set(x) for x in layers), relation.id_set(rest), delta
    )

