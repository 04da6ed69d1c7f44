"""ASJQ evaluation strategies.

Every strategy except the naive one works in two phases.  Phase 1 emits the
joined tuples that are guaranteed to be in the answer without looking at any
other joined tuple; phase 2 verifies the remaining candidates against a pool
of joined tuples.  In ``Mode.VERIFIED`` the guarantees are restricted to the
ones that hold for the query at hand, so the answer always equals the naive
one.  ``Mode.PAPER`` applies every guarantee and the narrow target sets
regardless of the query and exists for differential study.

Verification is a seeded sort-filter pass.  Pool rows are visited in
presort order, where a dominator always comes first; guaranteed rows (or the
relevant target rows) seed a window, and each candidate is compared with the
window until its first dominator.  By transitivity a candidate dominated by
any pool row is dominated by some window row, so the window never needs the
rows that were themselves discarded.  All strategies share this scan order,
which makes their comparison counts directly comparable.
"""

from __future__ import annotations

import enum
import time
from dataclasses import asdict, dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from ._kernels import closure_scan, dense_ranks, seeded_scan
from .join import aggregate_vectors, iter_join_blocks, join_pairs
from .model import (
    GuaranteeRegime,
    JoinedTuple,
    JoinOp,
    QuerySpec,
    Relation,
    validate_query,
)
from .skyline import (
    OpCounter,
    dominators_pos,
    local_matrix,
    peel_pos,
    presort,
    prune_skyline_pos,
    sfs,
    weak_split_pos,
)

Trace = Callable[[str, dict], None]

DEFAULT_DELTA = 100


class Mode(enum.Enum):
    VERIFIED = "verified"
    PAPER = "paper"


class NotEligible(ValueError):
    """The single-aggregate fast path does not apply to this input."""


@dataclass
class RunReport:
    algorithm: str
    mode: str
    phase_counts: dict = field(default_factory=dict)
    phase2_candidates: int = 0
    comparisons: int = 0  # joined-tuple dominance tests
    prep_comparisons: int = 0  # source-relation dominance tests
    join_pairs: int = 0
    wall_ms: float = 0.0
    a0: int = 0
    b0: int = 0
    levels: tuple = ()

    @property
    def cardinality(self) -> int:
        return sum(self.phase_counts.values())

    def to_dict(self) -> dict:
        d = asdict(self)
        d["cardinality"] = self.cardinality
        d["levels"] = list(self.levels)
        return d


@dataclass
class AsjqResult:
    tuples: list[JoinedTuple]
    report: RunReport

    @property
    def pairs(self) -> set[tuple[int, int]]:
        return {t.pair for t in self.tuples}

    def __len__(self) -> int:
        return len(self.tuples)


# --------------------------------------------------------------------------
# shared state


class _Prep:
    """Prune skylines, the candidate pool over A0 x B0 and its presort ranks."""

    def __init__(self, A: Relation, B: Relation, spec: QuerySpec, report: RunReport):
        validate_query(spec)
        if A.schema != spec.left or B.schema != spec.right:
            raise ValueError("relations do not match the query schemas")
        self.A, self.B, self.spec = A, B, spec
        pc = OpCounter()
        self.pc = pc
        self.a0 = prune_skyline_pos(A, spec, pc)
        self.b0 = prune_skyline_pos(B, spec, pc)
        self.LA, self.LB = local_matrix(A), local_matrix(B)
        self.lp, self.rp = join_pairs(A, B, spec, self.a0, self.b0)
        V = aggregate_vectors(A, B, spec, self.lp, self.rp)
        self.V = V
        self.O = V * spec.vector_signs()
        self.rank = np.empty(len(self.lp), dtype=np.int64)
        self.rank[presort(self.O)] = np.arange(len(self.lp))
        self.R = dense_ranks(self.O)
        report.a0, report.b0 = len(self.a0), len(self.b0)
        report.join_pairs = len(self.lp)

    def tuples(self, rows) -> list[JoinedTuple]:
        rows = np.sort(np.asarray(rows, dtype=np.int64))
        la, rb = self.A.ids[self.lp[rows]], self.B.ids[self.rp[rows]]
        return [
            JoinedTuple(int(a), int(b), tuple(float(x) for x in v))
            for a, b, v in zip(la, rb, self.V[rows])
        ]

    def pair_of(self, row) -> tuple[int, int]:
        return int(self.A.ids[self.lp[row]]), int(self.B.ids[self.rp[row]])

    def level_arrays(self, a_levels, b_levels):
        la = np.zeros(len(self.A), dtype=np.int64)
        lb = np.zeros(len(self.B), dtype=np.int64)
        for i, s in enumerate(a_levels, 1):
            la[s] = i
        for i, s in enumerate(b_levels, 1):
            lb[s] = i
        return la[self.lp], lb[self.rp]


def _guaranteed_mask(la, lb, regime: GuaranteeRegime, mode: Mode) -> np.ndarray:
    if mode is Mode.PAPER or regime is GuaranteeRegime.EQUI_STRICT:
        return (la == 1) | (lb == 1)
    return (la == 1) & (lb == 1)


def _emit(prep: _Prep, rows, phase: int, trace: Trace | None) -> None:
    if trace is None:
        return
    for r in np.sort(np.asarray(rows, dtype=np.int64)):
        trace("emit", {"phase": phase, "pair": prep.pair_of(r)})


# --------------------------------------------------------------------------
# verification helpers


def _dominated_by(X: np.ndarray, Y: np.ndarray, counter: OpCounter, budget: int = 1 << 22) -> np.ndarray:
    """Rows of ``X`` dominated by at least one row of ``Y`` (oriented)."""
    out = np.zeros(len(X), dtype=bool)
    if len(X) == 0 or len(Y) == 0:
        return out
    d = max(1, X.shape[1])
    ystep = max(1, budget // d)
    for y0 in range(0, len(Y), ystep):
        Yc = Y[y0:y0 + ystep][None, :, :]
        step = max(1, budget // (Yc.shape[1] * d))
        for i in range(0, len(X), step):
            Xc = X[i:i + step][:, None, :]
            out[i:i + step] |= ((Yc <= Xc).all(axis=2) & (Yc < Xc).any(axis=2)).any(axis=1)
        counter.add(len(X) * Yc.shape[1])
    return out


def _scan(prep: "_Prep", rows, cand_mask, keep_survivors: bool, counter: OpCounter):
    """Run the seeded sort-filter pass over pool ``rows``; returns surviving candidate rows."""
    rows = np.asarray(rows, dtype=np.int64)
    rows = rows[np.argsort(prep.rank[rows], kind="stable")]
    is_cand = cand_mask[rows]
    if not is_cand.any():
        return rows[:0]
    survive, n = seeded_scan(prep.R, rows, is_cand, keep_survivors)
    counter.add(n)
    return np.sort(rows[survive & is_cand])


# --------------------------------------------------------------------------
# naive


def run_naive(A: Relation, B: Relation, spec: QuerySpec) -> AsjqResult:
    """Join everything, aggregate, then take the skyline of the joined relation.

    The join is streamed in blocks and merged into a running skyline window so
    memory stays bounded by the block size plus the window.
    """
    validate_query(spec)
    t0 = time.perf_counter()
    report = RunReport("naive", Mode.VERIFIED.value)
    counter = OpCounter()
    signs = spec.vector_signs()
    W = np.zeros((0, spec.dims))
    Wl = np.zeros(0, dtype=np.int64)
    Wr = np.zeros(0, dtype=np.int64)
    for lp, rp in iter_join_blocks(A, B, spec):
        report.join_pairs += len(lp)
        O = aggregate_vectors(A, B, spec, lp, rp) * signs
        if len(W):
            keep = ~_dominated_by(O, W, counter)
            O, lp, rp = O[keep], lp[keep], rp[keep]
        keep = sfs(O, None, counter)
        O, lp, rp = O[keep], lp[keep], rp[keep]
        if len(W) and len(O):
            keep = ~_dominated_by(W, O, counter)
            W, Wl, Wr = W[keep], Wl[keep], Wr[keep]
        W = np.vstack([W, O])
        Wl = np.concatenate([Wl, lp])
        Wr = np.concatenate([Wr, rp])
    order = np.lexsort((Wr, Wl))
    signs_inv = 1.0 / signs
    tuples = [
        JoinedTuple(int(A.ids[a]), int(B.ids[b]), tuple(float(x) for x in v * signs_inv))
        for a, b, v in zip(Wl[order], Wr[order], W[order])
    ]
    report.comparisons = counter.comparisons
    report.phase_counts = {"skyline": len(tuples)}
    report.wall_ms = (time.perf_counter() - t0) * 1e3
    return AsjqResult(tuples, report)


# --------------------------------------------------------------------------
# guaranteed sets and target sets


def guaranteed_set(A: Relation, B: Relation, spec: QuerySpec, a_split, b_split,
                   regime: GuaranteeRegime | None = None, mode: Mode = Mode.VERIFIED) -> set[tuple[int, int]]:
    """Join-valid pairs emitted without verification.

    ``a_split``/``b_split`` are ``(local skyline ids, rest ids)`` of the prune
    skylines.  In verified mode the mixed sets are only trusted for pure
    equality joins with strictly monotone aggregates.
    """
    regime = spec.regime if regime is None else regime
    a1, a1r = (set(x) for x in a_split)
    b1, b1r = (set(x) for x in b_split)
    lp, rp = join_pairs(A, B, spec, A.positions(a1 | a1r), B.positions(b1 | b1r))
    out = set()
    for a, b in zip(A.ids[lp], B.ids[rp]):
        la = 1 if int(a) in a1 else 2
        lb = 1 if int(b) in b1 else 2
        if _guaranteed_mask(np.array([la]), np.array([lb]), regime, mode)[0]:
            out.add((int(a), int(b)))
    return out


class Level(NamedTuple):
    """A block label: layer ``index``, or the remainder after it when ``primed``."""

    index: int
    primed: bool = False

    @classmethod
    def parse(cls, text) -> "Level":
        if isinstance(text, Level):
            return text
        if isinstance(text, int):
            return cls(text)
        text = str(text).strip()
        return cls(int(text.rstrip("'")), text.endswith("'"))

    def __str__(self) -> str:
        return f"{self.index}'" if self.primed else str(self.index)


def target_sets(p, q, mode: Mode = Mode.VERIFIED) -> list[tuple[Level, Level]]:
    """Blocks a candidate block ``A_p x B_q`` has to be verified against.

    Verified mode: every block at or below ``(p, q)`` on both sides, the
    block itself included (its own candidate is skipped at run time).
    Paper mode: an unprimed side only looks at strictly lower layers, a
    primed side looks at everything below it, and a block primed on both
    sides only at blocks lower on at least one side.
    """
    p, q = Level.parse(p), Level.parse(q)
    if min(p.index, q.index) < 1:
        raise ValueError("levels start at 1")
    if mode is Mode.VERIFIED:
        def upto(x: Level):
            out = [Level(i) for i in range(1, x.index + 1)]
            return out + [x] if x.primed else out

        return [(a, b) for a in upto(p) for b in upto(q)]
    if p.index < 2 or q.index < 2:
        raise ValueError("paper target sets start at level 2")

    def lo(x: Level):
        return [Level(i) for i in range(1, x.index)]

    def every(x: Level):
        return lo(x) + [Level(x.index - 1, True)]

    if p.primed and q.primed:
        pairs = [(a, b) for a in lo(p) for b in every(q)]
        pairs += [(a, b) for a in every(p) for b in lo(q) if (a, b) not in pairs]
        return pairs
    left = every(p) if p.primed else lo(p)
    right = every(q) if q.primed else lo(q)
    return [(a, b) for a in left for b in right]


def _target_rows(la, lb, p: int, q: int, kA: int, kB: int, mode: Mode) -> np.ndarray:
    """Row mask of the target pool for block (p, q) over concrete level indices.

    Level ``k + 1`` on a side is its unpeeled remainder (the primed block).
    """
    if mode is Mode.VERIFIED:
        return (la <= p) & (lb <= q) & (la > 0) & (lb > 0)
    pa, pb = p == kA + 1, q == kB + 1
    num_p, num_q = (kA if pa else p), (kB if pb else q)
    lo_a, lo_b = la < num_p, lb < num_q
    if pa and pb:
        return lo_a | lo_b
    ok_a = np.ones_like(lo_a) if pa else lo_a
    ok_b = np.ones_like(lo_b) if pb else lo_b
    return ok_a & ok_b


# --------------------------------------------------------------------------
# MSC


def _two_level(prep: _Prep):
    a1, a1r = weak_split_pos(prep.LA, prep.a0, prep.pc)
    b1, b1r = weak_split_pos(prep.LB, prep.b0, prep.pc)
    return (a1, a1r), (b1, b1r)


def _finish(prep: _Prep, report: RunReport, g_rows, v_rows, counter: OpCounter, t0: float) -> AsjqResult:
    report.phase_counts = {"guaranteed": len(g_rows), "verified": len(v_rows)}
    report.comparisons = counter.comparisons
    report.prep_comparisons = prep.pc.comparisons
    report.wall_ms = (time.perf_counter() - t0) * 1e3
    rows = np.concatenate([np.asarray(g_rows, dtype=np.int64), np.asarray(v_rows, dtype=np.int64)])
    return AsjqResult(prep.tuples(rows), report)


def run_msc(A: Relation, B: Relation, spec: QuerySpec, mode: Mode = Mode.VERIFIED,
            trace: Trace | None = None) -> AsjqResult:
    """Multiple skyline computations: guaranteed blocks, then one verification pass."""
    mode = Mode(mode)
    t0 = time.perf_counter()
    report = RunReport("msc", mode.value)
    prep = _Prep(A, B, spec, report)
    (a1, a1r), (b1, b1r) = _two_level(prep)
    la, lb = prep.level_arrays([a1, a1r], [b1, b1r])
    g = _guaranteed_mask(la, lb, spec.regime, mode)
    g_rows = np.flatnonzero(g)
    _emit(prep, g_rows, 1, trace)
    cand = np.flatnonzero(~g)
    report.phase2_candidates = len(cand)
    counter = OpCounter()
    if len(cand) and trace is not None:
        trace("compare", {"phase": 2})
    v_rows = _scan(prep, np.arange(len(prep.lp)), ~g, True, counter)
    _emit(prep, v_rows, 2, trace)
    report.levels = (2, 2)
    return _finish(prep, report, g_rows, v_rows, counter, t0)


def skyline_with_seed(candidates: list[JoinedTuple], pool: list[JoinedTuple], spec: QuerySpec) -> list[JoinedTuple]:
    """Candidates not dominated by any pool member (the pool contains the candidates)."""
    everything = {t.pair: t for t in pool}
    for t in candidates:
        everything.setdefault(t.pair, t)
    keys = sorted(everything)
    if not keys:
        return []
    O = np.array([everything[k].vector for k in keys], dtype=float).reshape(len(keys), -1)
    O = O * spec.vector_signs()
    order = presort(O)
    where = {k: i for i, k in enumerate(keys)}
    cand = np.zeros(len(keys), dtype=bool)
    cand[[where[t.pair] for t in candidates]] = True
    survive, _ = seeded_scan(dense_ranks(O), order, cand[order], True)
    alive = {keys[i] for i in order[survive]}
    return [t for t in candidates if t.pair in alive]


# --------------------------------------------------------------------------
# dominator-based


def _closure_csr(n: int, sky, dominators: dict, with_self: bool):
    """Per-position dominator closures in CSR form (sorted positions)."""
    lists = [np.zeros(0, dtype=np.int64)] * n
    for u in sky:
        lists[int(u)] = np.array([u], dtype=np.int64) if with_self else lists[int(u)]
    for u, xs in dominators.items():
        lists[u] = np.sort(np.append(xs, u)) if with_self else np.asarray(xs, dtype=np.int64)
    ptr = np.zeros(n + 1, dtype=np.int64)
    ptr[1:] = np.cumsum([len(x) for x in lists])
    idx = np.concatenate(lists).astype(np.int64) if n else np.zeros(0, dtype=np.int64)
    return ptr, idx


def _check_rows(prep: _Prep, row: int, a_ptr, a_idx, b_ptr, b_idx, starts, ends) -> list[int]:
    """Pool rows a candidate is checked against, in scan order (for tracing)."""
    u, v = int(prep.lp[row]), int(prep.rp[row])
    ys = set(b_idx[b_ptr[v]:b_ptr[v + 1]].tolist())
    out = []
    for x in a_idx[a_ptr[u]:a_ptr[u + 1]]:
        out += [s for s in range(starts[x], ends[x]) if int(prep.rp[s]) in ys and s != row]
    return out


def run_dominator(A: Relation, B: Relation, spec: QuerySpec, mode: Mode = Mode.VERIFIED,
                  trace: Trace | None = None) -> AsjqResult:
    """Verify each phase-2 candidate only against joins of its local dominators.

    Verified mode widens each side's dominator list by the candidate's own
    component (ties can make ``u' x y`` dominate ``u' x v'``).  Paper mode
    uses the dominator lists as they are and compares aggregates only, since
    the locals of a dominator pair are never worse.
    """
    mode = Mode(mode)
    t0 = time.perf_counter()
    report = RunReport("dominator", mode.value)
    prep = _Prep(A, B, spec, report)
    (a1, a1r), (b1, b1r) = _two_level(prep)
    dA = dominators_pos(prep.LA, prep.a0, a1r, prep.pc)
    dB = dominators_pos(prep.LB, prep.b0, b1r, prep.pc)
    la, lb = prep.level_arrays([a1, a1r], [b1, b1r])
    g = _guaranteed_mask(la, lb, spec.regime, mode)
    g_rows = np.flatnonzero(g)
    _emit(prep, g_rows, 1, trace)
    cand = np.flatnonzero(~g)
    report.phase2_candidates = len(cand)
    counter = OpCounter()
    paper = mode is Mode.PAPER
    a_ptr, a_idx = _closure_csr(len(A), a1, dA, not paper)
    starts = np.searchsorted(prep.lp, np.arange(len(A)), "left")
    ends = np.searchsorted(prep.lp, np.arange(len(A)), "right")
    m1, m = spec.left.m, spec.left.m + spec.right.m
    # a right component is in the closure of v iff its locals are no worse
    right_cols = np.arange(m1, m, dtype=np.int64)
    geq = np.arange(m if paper else 0, spec.dims, dtype=np.int64)
    if len(cand) and trace is not None:
        trace("compare", {"phase": 2})
    dominated, counts = closure_scan(prep.R, prep.lp, prep.rp, starts, ends, cand,
                                     a_ptr, a_idx, right_cols, geq, paper)
    counter.add(counts.sum())
    if trace is not None:
        b_ptr, b_idx = _closure_csr(len(B), b1, dB, not paper)
        for c, hit, n in zip(cand, dominated, counts):
            rows = _check_rows(prep, int(c), a_ptr, a_idx, b_ptr, b_idx, starts, ends)
            trace("check", {
                "candidate": prep.pair_of(c),
                "against": [prep.pair_of(r) for r in rows],
                "comparisons": int(n),
                "dominated": bool(hit),
            })
    v_rows = cand[~dominated]
    _emit(prep, v_rows, 2, trace)
    report.levels = (2, 2)
    return _finish(prep, report, g_rows, v_rows, counter, t0)


def skyline_using_dominators(candidate: JoinedTuple, A: Relation, B: Relation, spec: QuerySpec,
                             dominator_maps, mode: Mode = Mode.VERIFIED) -> bool:
    """Keep (True) or discard (False) one candidate given the two dominator maps.

    ``dominator_maps`` is ``(left map, right map)`` from
    :func:`asjq.skyline.find_weak_local_dominators`.
    """
    from .join import aggregate_pair, joins_with
    from .model import joined_dominates

    mode = Mode(mode)
    dA, dB = dominator_maps
    u, v = candidate.pair
    xs = list(dA.get(u, ()))
    ys = list(dB.get(v, ()))
    if mode is Mode.VERIFIED:
        xs, ys = xs + [u], ys + [v]
    for x in xs:
        tx = A.tuple(x)
        for y in ys:
            if (x, y) == (u, v):
                continue
            ty = B.tuple(y)
            if joins_with(tx, ty, spec) and joined_dominates(aggregate_pair(tx, ty, spec), candidate, spec):
                return False
    return True


# --------------------------------------------------------------------------
# iterative


def _levels(L, pos, delta, pc):
    layers, rest = peel_pos(L, pos, delta, pc)
    if not layers:
        sky, rest = weak_split_pos(L, pos, pc)
        layers = [sky]
    return layers, rest


def run_iterative(A: Relation, B: Relation, spec: QuerySpec, delta: int = DEFAULT_DELTA,
                  mode: Mode = Mode.VERIFIED, trace: Trace | None = None) -> AsjqResult:
    """Peel weak-local layers on both sides and verify block by block.

    Each side is split into layers ``1..k`` plus its unpeeled remainder
    (level ``k + 1``).  Level-1 blocks are emitted per the guarantee rules;
    every other block ``(p, q)`` is verified, in lexicographic order, against
    its target blocks only.
    """
    mode = Mode(mode)
    if delta < 0:
        raise ValueError("delta must be non-negative")
    t0 = time.perf_counter()
    report = RunReport("iterative", mode.value)
    prep = _Prep(A, B, spec, report)
    a_layers, a_rest = _levels(prep.LA, prep.a0, delta, prep.pc)
    b_layers, b_rest = _levels(prep.LB, prep.b0, delta, prep.pc)
    kA, kB = len(a_layers), len(b_layers)
    la, lb = prep.level_arrays(a_layers + [a_rest], b_layers + [b_rest])
    report.levels = (kA + (len(a_rest) > 0), kB + (len(b_rest) > 0))
    g = _guaranteed_mask(la, lb, spec.regime, mode)
    g_rows = np.flatnonzero(g)
    _emit(prep, g_rows, 1, trace)
    cand = np.flatnonzero(~g)
    report.phase2_candidates = len(cand)
    counter = OpCounter()
    kept = []
    if len(cand):
        if trace is not None:
            trace("compare", {"phase": 2})
        order = np.argsort(prep.rank)
        la_r, lb_r = la[order], lb[order]
        done_r = g[order].copy()  # rows known to be in the answer, rank order
        verified = mode is Mode.VERIFIED
        for p, q in sorted({(int(a), int(b)) for a, b in zip(la[cand], lb[cand])}):
            block_r = (la_r == p) & (lb_r == q) & ~g[order]
            if verified:
                # every dominator sits in a block at or below (p, q) and all
                # of those are settled already (lexicographic order)
                window_r = done_r & (la_r <= p) & (lb_r <= q)
            else:
                window_r = _target_rows(la_r, lb_r, p, q, kA, kB, mode)
            sel = np.flatnonzero(window_r | block_r)
            survive, n = seeded_scan(prep.R, order[sel], block_r[sel], verified)
            counter.add(n)
            won = sel[survive & block_r[sel]]
            done_r[won] = True
            kept.append(order[won])
    v_rows = np.concatenate(kept) if kept else np.zeros(0, dtype=np.int64)
    _emit(prep, v_rows, 2, trace)
    return _finish(prep, report, g_rows, v_rows, counter, t0)


# --------------------------------------------------------------------------
# single aggregate


def single_aggregate_eligible(spec: QuerySpec) -> bool:
    """Query-level preconditions of the single-aggregate fast path."""
    return (
        len(spec.aggregates) == 1
        and spec.aggregates[0].fn.strict
        and all(c.op is JoinOp.EQ for c in spec.joins)
    )


def run_single_aggregate(A: Relation, B: Relation, spec: QuerySpec) -> AsjqResult:
    """Return every join-valid pair of the two prune skylines, unverified.

    Sound only when all joinable prune-skyline tuples share one join key:
    tuples with different keys are not prune-comparable, and a pair from one
    key class can dominate a pair from another.  Raises :class:`NotEligible`
    otherwise, so the caller can fall back to a general algorithm.
    """
    if not single_aggregate_eligible(spec):
        raise NotEligible(
            "single-aggregate path needs one SUM/AVG aggregate and equality joins only; "
            "use a general algorithm"
        )
    t0 = time.perf_counter()
    report = RunReport("single", Mode.VERIFIED.value)
    prep = _Prep(A, B, spec, report)
    if spec.joins and len(prep.lp):
        keys = A.values[prep.lp][:, A.schema.join_idx]
        if len(np.unique(keys, axis=0)) > 1:
            raise NotEligible(
                "joinable tuples span several join-key classes; use a general algorithm"
            )
    rows = np.arange(len(prep.lp))
    report.phase_counts = {"guaranteed": len(rows)}
    report.prep_comparisons = prep.pc.comparisons
    report.wall_ms = (time.perf_counter() - t0) * 1e3
    return AsjqResult(prep.tuples(rows), report)


# --------------------------------------------------------------------------
# dispatcher

ALGORITHMS = ("naive", "msc", "dominator", "iterative", "auto")


def run_query(A: Relation, B: Relation, spec: QuerySpec, algo: str = "auto",
              mode: Mode = Mode.VERIFIED, delta: int = DEFAULT_DELTA,
              trace: Trace | None = None) -> AsjqResult:
    """Run one strategy by name; ``auto`` tries the single-aggregate path first."""
    mode = Mode(mode)
    if algo == "naive":
        return run_naive(A, B, spec)
    if algo == "msc":
        return run_msc(A, B, spec, mode, trace)
    if algo == "dominator":
        return run_dominator(A, B, spec, mode, trace)
    if algo == "iterative":
        return run_iterative(A, B, spec, delta, mode, trace)
    if algo == "auto":
        if single_aggregate_eligible(spec):
            try:
                return run_single_aggregate(A, B, spec)
            except NotEligible:
                pass
        return run_iterative(A, B, spec, delta, mode, trace)
    raise ValueError(f"unknown algorithm {algo!r}; choose from {ALGORITHMS}")
