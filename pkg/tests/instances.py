"""Random ASJQ instances shared by the differential and acceptance suites."""

import numpy as np

from asjq.datagen import DISTRIBUTIONS, synthetic_instance
from asjq.model import AggFn, JoinOp, Relation

JOIN_SETS = {"EQ": (JoinOp.EQ,), "EQ+LT": (JoinOp.EQ, JoinOp.LT), "LT": (JoinOp.LT,)}


def with_duplicates(rel: Relation, rng: np.random.Generator) -> Relation:
    """Append exact copies of a few rows (fresh ids)."""
    if len(rel) == 0:
        return rel
    k = int(rng.integers(1, max(2, len(rel) // 4) + 1))
    extra = rel.values[rng.integers(0, len(rel), k)]
    return Relation(rel.schema, np.vstack([rel.values, extra]))


def coarsen(rel: Relation, levels: int) -> Relation:
    """Round value columns onto a small grid so ties are common."""
    vals = rel.values.copy()
    cols = list(rel.schema.local_idx) + list(rel.schema.agg_idx)
    vals[:, cols] = np.floor(vals[:, cols] * levels) / levels
    return Relation(rel.schema, vals, rel.ids)


def draw_params(rng: np.random.Generator) -> dict:
    """N log-uniform over [1, 200] per side, the rest uniform over the stated ranges."""
    agg = int(rng.integers(1, 4))
    return {
        "n": int(np.exp(rng.uniform(0, np.log(201)))),
        "n_right": int(np.exp(rng.uniform(0, np.log(201)))),
        "local": int(rng.integers(1, 5)),
        "agg": agg,
        "cats": int(rng.integers(1, 11)),
        "dist": DISTRIBUTIONS[int(rng.integers(0, 3))],
        "joins": list(JOIN_SETS)[int(rng.integers(0, 3))],
        "fns": [list(AggFn)[int(i)] for i in rng.integers(0, 4, agg)],
        "duplicates": bool(rng.random() < 0.3),
        "ties": int(rng.choice([0, 0, 3, 8])),
        "seed": int(rng.integers(0, 2 ** 32)),
    }


def build(p: dict):
    n = min(p["n"], 200)
    n_right = min(p.get("n_right", n), 200)
    A, B, spec = synthetic_instance(
        n, p["local"], p["agg"], p["cats"], p["dist"], p["seed"],
        JOIN_SETS[p["joins"]], p["fns"], n_right=n_right,
    )
    rng = np.random.default_rng(p["seed"] ^ 0x5EED)
    if p.get("ties"):
        A, B = coarsen(A, p["ties"]), coarsen(B, p["ties"])
    if p.get("duplicates"):
        A, B = with_duplicates(A, rng), with_duplicates(B, rng)
    return A, B, spec


def instance(seed: int):
    p = draw_params(np.random.default_rng(seed))
    return p, build(p)
