"""Command line: ``asjq gen | run | check | bench``."""

from __future__ import annotations

import argparse
import csv
import statistics
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .algorithms import ALGORITHMS, DEFAULT_DELTA, Mode, run_query
from .datagen import GenParams, generate_relation, normalize_distribution, synthetic_instance
from .io import LoadError, QuerySyntaxError, format_number, load_query, write_relation, write_report, write_results
from .model import QueryError
from .oracle import brute_force_asjq

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_LOAD = 0, 1, 2, 3

BENCH_FIELDS = ["sweep_param", "sweep_value", "algo", "mode", "runtime_ms", "cardinality",
                "comparisons", "join_pairs", "seed"]
SWEEPS = {"L": "local", "G": "agg", "N": "n", "C": "cats", "D": "dist"}


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(message)


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="asjq", description="Aggregate skyline join queries over CSV relations.")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="write one synthetic relation as CSV")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--local", type=int, default=2)
    g.add_argument("--agg", type=int, default=2)
    g.add_argument("--cats", type=int, default=10)
    g.add_argument("--dist", default="correlated")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--joins", type=int, default=1, help="join columns (c, then t1, t2, ...)")
    g.add_argument("--out", required=True)

    for name, text in (("run", "evaluate a query"), ("check", "evaluate and compare with brute force")):
        r = sub.add_parser(name, help=text)
        r.add_argument("--query", required=True)
        r.add_argument("--algo", choices=ALGORITHMS, default="auto")
        r.add_argument("--mode", choices=[m.value for m in Mode], default="verified")
        r.add_argument("--delta", type=int, default=DEFAULT_DELTA)
        r.add_argument("--out", help="result CSV (default: print to stdout)")
        r.add_argument("--report", help="run report JSON")

    b = sub.add_parser("bench", help="parameter sweep over synthetic data")
    b.add_argument("--sweep", choices=sorted(SWEEPS), required=True)
    b.add_argument("--values", required=True, help="comma separated sweep values")
    b.add_argument("--repeat", type=int, default=3)
    b.add_argument("--out", required=True)
    b.add_argument("--algos", default="msc,dominator,iterative",
                   help="comma separated; add naive explicitly (it is slow)")
    b.add_argument("--mode", choices=[m.value for m in Mode], default="verified")
    b.add_argument("--delta", type=int, default=DEFAULT_DELTA)
    b.add_argument("--n", type=int, default=40000)
    b.add_argument("--local", type=int, default=2)
    b.add_argument("--agg", type=int, default=2)
    b.add_argument("--cats", type=int, default=10)
    b.add_argument("--dist", default="correlated")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--jobs", type=int, default=1)
    return p


# --------------------------------------------------------------------------
# bench


@dataclass
class BenchConfig:
    sweep: str
    values: list
    repeat: int = 3
    algos: list = field(default_factory=lambda: ["msc", "dominator", "iterative"])
    mode: str = "verified"
    delta: int = DEFAULT_DELTA
    n: int = 40000
    local: int = 2
    agg: int = 2
    cats: int = 10
    dist: str = "correlated"
    seed: int = 0
    jobs: int = 1


def _point_seed(base: int, value_index: int, rep: int) -> int:
    return int(np.random.SeedSequence([base, value_index, rep]).generate_state(1)[0])


def _bench_point(cfg: BenchConfig, vi: int, value, rep: int) -> list[dict]:
    params = {"n": cfg.n, "local": cfg.local, "agg": cfg.agg, "cats": cfg.cats, "dist": cfg.dist}
    params[SWEEPS[cfg.sweep]] = value
    seed = _point_seed(cfg.seed, vi, rep)
    A, B, spec = synthetic_instance(seed=seed, **params)
    rows = []
    for algo in cfg.algos:
        t0 = time.perf_counter()
        res = run_query(A, B, spec, algo, Mode(cfg.mode), cfg.delta)
        ms = (time.perf_counter() - t0) * 1e3
        rows.append({
            "sweep_param": cfg.sweep, "sweep_value": value, "algo": algo, "mode": cfg.mode,
            "runtime_ms": round(ms, 3), "cardinality": len(res),
            "comparisons": res.report.comparisons, "join_pairs": res.report.join_pairs, "seed": seed,
        })
    return rows


def _sweep_values(sweep: str, raw) -> list:
    vals = [v.strip() for v in raw.split(",")] if isinstance(raw, str) else list(raw)
    if not vals or any(v == "" for v in vals):
        raise ValueError("empty sweep value")
    if sweep == "D":
        return [normalize_distribution(str(v)) for v in vals]
    out = [int(v) for v in vals]
    low = {"L": 0, "G": 1, "N": 0, "C": 1}[sweep]
    if any(v < low for v in out):
        raise ValueError(f"{sweep} values must be >= {low}")
    return out


def run_benchmark(cfg: BenchConfig) -> list[dict]:
    """One row per (sweep value, repetition, algorithm), in that order."""
    cfg.values = _sweep_values(cfg.sweep, cfg.values)
    cfg.dist = normalize_distribution(cfg.dist)
    points = [(vi, v, rep) for vi, v in enumerate(cfg.values) for rep in range(cfg.repeat)]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(cfg.jobs) as ex:
            chunks = list(ex.map(_bench_point, [cfg] * len(points), *zip(*points)))
    else:
        chunks = [_bench_point(cfg, vi, v, rep) for vi, v, rep in points]
    return [row for chunk in chunks for row in chunk]


def summarize(rows: list[dict]) -> list[dict]:
    """Median runtime / cardinality / comparisons per (sweep value, algorithm)."""
    groups: dict = {}
    for r in rows:
        groups.setdefault((r["sweep_value"], r["algo"]), []).append(r)
    out = []
    for (value, algo), rs in groups.items():
        out.append({
            "sweep_value": value, "algo": algo, "runs": len(rs),
            "runtime_ms": statistics.median(r["runtime_ms"] for r in rs),
            "cardinality": statistics.median(r["cardinality"] for r in rs),
            "comparisons": statistics.median(r["comparisons"] for r in rs),
        })
    return out


# --------------------------------------------------------------------------
# commands


def _cmd_gen(a) -> int:
    try:
        params = GenParams(a.n, a.local, a.agg, a.cats, a.dist, a.seed, a.joins)
    except ValueError as e:
        raise _Usage(str(e)) from None
    write_relation(a.out, generate_relation(params))
    print(f"wrote {a.n} rows to {a.out}")
    return EXIT_OK


def _print_tuples(tuples, spec) -> None:
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["left_id", "right_id"] + spec.vector_names())
    for t in tuples:
        w.writerow([t.left_id, t.right_id] + [format_number(x) for x in t.vector])


def _cmd_run(a, check: bool) -> int:
    spec, A, B = load_query(a.query)
    res = run_query(A, B, spec, a.algo, Mode(a.mode), a.delta)
    if a.out:
        write_results(a.out, res.tuples, spec)
    elif not check:
        _print_tuples(res.tuples, spec)
    if a.report:
        write_report(a.report, res.report)
    rep = res.report
    print(f"{rep.algorithm} ({rep.mode}): {len(res)} tuples, phases {rep.phase_counts}, "
          f"phase-2 candidates {rep.phase2_candidates}, comparisons {rep.comparisons}, "
          f"join pairs {rep.join_pairs}, {rep.wall_ms:.1f} ms", file=sys.stderr)
    if not check:
        return EXIT_OK
    expected = {t.pair: t.vector for t in brute_force_asjq(A, B, spec)}
    got = {t.pair: t.vector for t in res.tuples}
    missing = sorted(set(expected) - set(got))
    extra = sorted(set(got) - set(expected))
    wrong = sorted(k for k in set(got) & set(expected) if got[k] != expected[k])
    if not (missing or extra or wrong):
        print(f"check: OK ({len(got)} tuples match brute force)")
        return EXIT_OK
    witness = (missing or extra or wrong)[0]
    print(f"check: MISMATCH missing={len(missing)} extra={len(extra)} wrong_values={len(wrong)} "
          f"witness={witness}")
    if Mode(a.mode) is Mode.PAPER:
        # differences are the point of running paper mode; report, don't fail
        return EXIT_OK
    return EXIT_MISMATCH


def _cmd_bench(a) -> int:
    cfg = BenchConfig(
        sweep=a.sweep, values=a.values, repeat=a.repeat,
        algos=[x.strip() for x in a.algos.split(",") if x.strip()], mode=a.mode, delta=a.delta,
        n=a.n, local=a.local, agg=a.agg, cats=a.cats, dist=a.dist, seed=a.seed, jobs=a.jobs,
    )
    bad = [x for x in cfg.algos if x not in ALGORITHMS]
    if bad or cfg.repeat < 1:
        raise _Usage(f"unknown algorithm(s): {bad}" if bad else "--repeat must be >= 1")
    try:
        cfg.values = _sweep_values(cfg.sweep, cfg.values)
        cfg.dist = normalize_distribution(cfg.dist)
    except ValueError as e:
        raise _Usage(str(e)) from None
    rows = run_benchmark(cfg)
    with open(a.out, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=BENCH_FIELDS, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    print(f"{'value':>16} {'algo':>10} {'median ms':>12} {'cardinality':>12} {'comparisons':>14}")
    for s in summarize(rows):
        print(f"{s['sweep_value']!s:>16} {s['algo']:>10} {s['runtime_ms']:>12.1f} "
              f"{s['cardinality']:>12g} {s['comparisons']:>14g}")
    return EXIT_OK


def main(argv=None) -> int:
    try:
        a = _build_parser().parse_args(argv)
        if a.cmd == "gen":
            return _cmd_gen(a)
        if a.cmd in ("run", "check"):
            if a.delta < 0:
                raise _Usage("--delta must be >= 0")
            return _cmd_run(a, a.cmd == "check")
        return _cmd_bench(a)
    except _Usage as e:
        print(f"asjq: usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (QuerySyntaxError, QueryError, LoadError) as e:
        print(f"asjq: {e}", file=sys.stderr)
        return EXIT_LOAD


if __name__ == "__main__":
    sys.exit(main())
