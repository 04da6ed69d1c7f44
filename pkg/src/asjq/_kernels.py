"""Compiled inner loops for joined-tuple verification.

Both kernels take ``R``, the candidate pool with every column replaced by
its dense rank (smaller is better).  Ranks preserve every per-column order,
so dominance on ``R`` is dominance on the original vectors, and int32 keeps
the inner loop cheap.
"""

from __future__ import annotations

import numba as nb
import numpy as np

_CHUNK_MIN = 32
_CHUNK_MAX = 4096


def dense_ranks(O: np.ndarray) -> np.ndarray:
    """Per-column dense ranks of ``O`` as a C-contiguous int32 matrix."""
    R = np.empty(O.shape, dtype=np.int32)
    for j in range(O.shape[1]):
        R[:, j] = np.unique(O[:, j], return_inverse=True)[1].reshape(-1)
    return R


@nb.njit(cache=True)
def seeded_scan(R, rows, is_cand, keep_survivors):
    """Sort-filter pass over ``rows`` (already in presort order).

    Seed rows enter the window untested.  Each candidate is compared with
    the window in order until its first dominator; a surviving candidate
    joins the window when ``keep_survivors`` is set.  Returns the survivor
    flags (aligned with ``rows``) and the number of comparisons made.
    """
    n = len(rows)
    d = R.shape[1]
    win = np.empty((d, n + 1), dtype=R.dtype)
    size = 0
    worse = np.empty(_CHUNK_MAX, dtype=np.int32)
    c = np.empty(d, dtype=R.dtype)
    survive = np.zeros(n, dtype=np.bool_)
    count = 0
    for i in range(n):
        r = rows[i]
        for j in range(d):
            c[j] = R[r, j]
        if not is_cand[i]:
            for j in range(d):
                win[j, size] = c[j]
            size += 1
            continue
        hit = -1
        k0 = 0
        step = _CHUNK_MIN
        while k0 < size:
            m = min(step, size - k0)
            worse[:m] = 0
            for j in range(d):
                cj = c[j]
                col = win[j, k0:k0 + m]
                for k in range(m):
                    worse[k] |= col[k] > cj
            for k in range(m):
                if worse[k] == 0:
                    for j in range(d):
                        if win[j, k0 + k] != c[j]:
                            hit = k0 + k
                            break
                    if hit >= 0:
                        break
            if hit >= 0:
                break
            k0 += m
            if step < _CHUNK_MAX:
                step *= 2
        if hit >= 0:
            count += hit + 1
        else:
            count += size
            survive[i] = True
            if keep_survivors:
                for j in range(d):
                    win[j, size] = c[j]
                size += 1
    return survive, count


@nb.njit(cache=True)
def closure_scan(R, lp, rp, starts, ends, cand, a_ptr, a_idx, right_cols, geq_cols, skip_own_right):
    """Check each candidate against the join-valid pairs of its dominator closures.

    For a candidate row ``u x v`` the left side contributes the positions
    ``a_idx[a_ptr[u]:a_ptr[u+1]]``; pool rows of a left position ``x`` are
    ``starts[x]:ends[x]``, ordered by right position.  A pool row belongs to
    the right-side closure when its right locals (``right_cols`` of ``R``)
    are no worse than the candidate's; ``skip_own_right`` drops rows whose
    right component is ``v`` itself.  A pair dominates when it is no worse
    on ``geq_cols`` and strictly better somewhere.  Returns per-candidate
    dominated flags and comparison counts.
    """
    nc = len(cand)
    d = R.shape[1]
    nr = len(right_cols)
    RL = np.empty((nr, R.shape[0]), dtype=R.dtype)
    for j in range(nr):
        for s in range(R.shape[0]):
            RL[j, s] = R[s, right_cols[j]]
    width = 1
    for x in range(len(starts)):
        width = max(width, ends[x] - starts[x])
    ok = np.empty(width, dtype=np.int32)
    dominated = np.zeros(nc, dtype=np.bool_)
    counts = np.zeros(nc, dtype=np.int64)
    for t in range(nc):
        row = cand[t]
        u = lp[row]
        v = rp[row]
        n = 0
        found = False
        for ai in range(a_ptr[u], a_ptr[u + 1]):
            x = a_idx[ai]
            lo, hi = starts[x], ends[x]
            m = hi - lo
            ok[:m] = 1
            for j in range(nr):
                cj = RL[j, row]
                col = RL[j, lo:hi]
                for k in range(m):
                    ok[k] &= col[k] <= cj
            for k in range(m):
                if ok[k] == 0:
                    continue
                s = lo + k
                if s == row or (skip_own_right and rp[s] == v):
                    continue
                n += 1
                better = True
                for j in geq_cols:
                    if R[s, j] > R[row, j]:
                        better = False
                        break
                if better:
                    for j in range(d):
                        if R[s, j] < R[row, j]:
                            found = True
                            break
                if found:
                    break
            if found:
                break
        dominated[t] = found
        counts[t] = n
    return dominated, counts
