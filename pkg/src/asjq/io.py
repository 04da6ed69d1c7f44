"""Query language, CSV relations and result files.

A query file looks like::

    RELATION FlightsA FROM flights_a.csv KEY fno
    RELATION FlightsB FROM flights_b.csv KEY fno
    JOIN FlightsA.dst EQ FlightsB.src, FlightsA.arr LT FlightsB.dep
    AGG cost = SUM(FlightsA.cost, FlightsB.cost) PREF MIN
    LOCAL FlightsA.rtg PREF MAX

Keywords are case-insensitive, ``#`` starts a comment, and the optional
``KEY`` names a column holding the row ids (otherwise rows are numbered
from 0).  Relative paths are resolved against the query file's directory.
"""

from __future__ import annotations

import csv
import json
import math
import os
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .model import (
    Aggregate,
    AggFn,
    Column,
    JoinCondition,
    JoinedTuple,
    JoinOp,
    Pref,
    QueryError,
    QuerySpec,
    Relation,
    RelationSchema,
    Role,
    validate_query,
)

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NUMBER = re.compile(r"[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?")
_TIME = re.compile(r"(\d{1,2}):(\d{2})")
_BARE_PATH = re.compile(r"[^\s\"#,()=]+")


class QuerySyntaxError(QueryError):
    """Query text error with a 1-based line and column."""

    def __init__(self, message: str, line: int, col: int):
        self.message, self.line, self.col = message, line, col
        super().__init__([f"line {line}, column {col}: {message}"])


class LoadError(ValueError):
    """A relation file could not be read."""


# --------------------------------------------------------------------------
# parsing


@dataclass
class _Ref:
    rel: str
    col: str
    at: int


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.i = 0

    # -- positions and errors

    def where(self, at: int | None = None) -> tuple[int, int]:
        at = self.i if at is None else at
        line = self.text.count("\n", 0, at) + 1
        col = at - (self.text.rfind("\n", 0, at) + 1) + 1
        return line, col

    def fail(self, message: str, at: int | None = None):
        raise QuerySyntaxError(message, *self.where(at))

    # -- lexing

    def skip(self) -> None:
        t = self.text
        while self.i < len(t):
            if t[self.i].isspace():
                self.i += 1
            elif t[self.i] == "#":
                nl = t.find("\n", self.i)
                self.i = len(t) if nl < 0 else nl
            else:
                break

    def at_end(self) -> bool:
        self.skip()
        return self.i >= len(self.text)

    def peek_word(self) -> str | None:
        self.skip()
        m = _NAME.match(self.text, self.i)
        return m.group(0).upper() if m else None

    def keyword(self, *options: str) -> str:
        self.skip()
        m = _NAME.match(self.text, self.i)
        if not m or m.group(0).upper() not in options:
            found = m.group(0) if m else (self.text[self.i] if self.i < len(self.text) else "end of input")
            self.fail(f"expected {' or '.join(options)}, found {found!r}")
        self.i = m.end()
        return m.group(0).upper()

    def name(self, what: str) -> tuple[str, int]:
        self.skip()
        m = _NAME.match(self.text, self.i)
        if not m:
            self.fail(f"expected {what}")
        self.i = m.end()
        return m.group(0), m.start()

    def punct(self, ch: str) -> None:
        self.skip()
        if not self.text.startswith(ch, self.i):
            found = self.text[self.i] if self.i < len(self.text) else "end of input"
            self.fail(f"expected {ch!r}, found {found!r}")
        self.i += 1

    def maybe(self, ch: str) -> bool:
        self.skip()
        if self.text.startswith(ch, self.i):
            self.i += 1
            return True
        return False

    def path(self) -> str:
        self.skip()
        if self.maybe('"'):
            end = self.text.find('"', self.i)
            if end < 0:
                self.fail("unterminated quoted path")
            out, self.i = self.text[self.i:end], end + 1
            return out
        m = _BARE_PATH.match(self.text, self.i)
        if not m:
            self.fail("expected a file path")
        self.i = m.end()
        return m.group(0)

    def ref(self) -> _Ref:
        rel, at = self.name("relation name")
        self.skip()
        if not self.text.startswith(".", self.i):
            self.fail("expected '.' between relation and column")
        self.i += 1
        col, _ = self.name("column name")
        return _Ref(rel, col, at)


def parse_query(text: str) -> QuerySpec:
    """Parse query text into a validated :class:`QuerySpec`.

    Raises :class:`QuerySyntaxError` (with line and column) for any problem
    in the text, including unknown relations, role conflicts and a missing
    aggregate clause.
    """
    p = _Parser(text)
    rels: list[tuple[str, str, str | None, int]] = []
    for _ in range(2):
        p.keyword("RELATION")
        name, at = p.name("relation name")
        if rels and rels[0][0] == name:
            p.fail(f"relation {name!r} declared twice", at)
        p.keyword("FROM")
        path = p.path()
        key = None
        if p.peek_word() == "KEY":
            p.keyword("KEY")
            key, _ = p.name("key column")
        rels.append((name, path, key, at))
    left_name, right_name = rels[0][0], rels[1][0]
    cols: dict[str, dict[str, tuple[Column, int]]] = {left_name: {}, right_name: {}}

    def side(ref: _Ref) -> int:
        if ref.rel == left_name:
            return 0
        if ref.rel == right_name:
            return 1
        p.fail(f"unknown relation {ref.rel!r}", ref.at)

    def claim(ref: _Ref, column: Column) -> None:
        table = cols[ref.rel]
        key = rels[side(ref)][2]
        if ref.col == key:
            p.fail(f"column {ref.rel}.{ref.col} is the row key and cannot be an attribute", ref.at)
        if ref.col in table:
            prev = table[ref.col][0].role.value
            p.fail(f"column {ref.rel}.{ref.col} used in two roles ({prev} and {column.role.value})", ref.at)
        table[ref.col] = (column, ref.at)

    def pair(first: _Ref, second: _Ref, what: str) -> tuple[_Ref, _Ref, bool]:
        s1, s2 = side(first), side(second)
        if s1 == s2:
            p.fail(f"{what} must reference one column of each relation", second.at)
        return (first, second, False) if s1 == 0 else (second, first, True)

    joins = []
    p.keyword("JOIN")
    while True:
        a = p.ref()
        op = JoinOp(p.keyword(*[o.value for o in JoinOp]))
        b = p.ref()
        lref, rref, swapped = pair(a, b, "a join condition")
        slot = len(joins)
        claim(lref, Column(lref.col, Role.JOIN, slot=slot))
        claim(rref, Column(rref.col, Role.JOIN, slot=slot))
        joins.append(JoinCondition(slot, op.flipped() if swapped else op))
        if not p.maybe(","):
            break

    aggs = []
    while p.peek_word() == "AGG":
        p.keyword("AGG")
        name, at = p.name("aggregate name")
        if any(a.name == name for a in aggs):
            p.fail(f"aggregate {name!r} defined twice", at)
        p.punct("=")
        fn = AggFn(p.keyword(*[f.value for f in AggFn]))
        p.punct("(")
        a = p.ref()
        p.punct(",")
        b = p.ref()
        p.punct(")")
        p.keyword("PREF")
        pref = Pref(p.keyword("MIN", "MAX"))
        lref, rref, _ = pair(a, b, "an aggregate")
        slot = len(aggs)
        claim(lref, Column(lref.col, Role.AGGREGATE, slot=slot, pref=pref))
        claim(rref, Column(rref.col, Role.AGGREGATE, slot=slot, pref=pref))
        aggs.append(Aggregate(slot, fn, pref, name))
    if not aggs:
        p.fail("ASJQ requires at least one aggregate")

    while p.peek_word() == "LOCAL":
        p.keyword("LOCAL")
        ref = p.ref()
        side(ref)
        p.keyword("PREF")
        claim(ref, Column(ref.col, Role.LOCAL, pref=Pref(p.keyword("MIN", "MAX"))))

    if not p.at_end():
        word = p.peek_word()
        if word in ("AGG", "JOIN", "RELATION"):
            p.fail(f"{word} clause out of order")
        p.fail("expected LOCAL or end of query")

    def schema(k: int) -> RelationSchema:
        name, path, key, _ = rels[k]
        table = [c for c, _ in cols[name].values()]
        order = {Role.JOIN: 0, Role.AGGREGATE: 1, Role.LOCAL: 2}
        table.sort(key=lambda c: (order[c.role], c.slot if c.slot is not None else 0))
        return RelationSchema(name, tuple(table), source=path, key=key)

    spec = QuerySpec(schema(0), schema(1), tuple(joins), tuple(aggs))
    try:
        validate_query(spec)
    except QueryError as e:
        raise QuerySyntaxError("; ".join(e.problems), *p.where(rels[0][3])) from None
    return spec


def _fmt_path(path: str) -> str:
    return path if _BARE_PATH.fullmatch(path) else f'"{path}"'


def format_query(spec: QuerySpec) -> str:
    """Canonical query text; ``parse_query(format_query(s)) == s``."""
    lines = []
    for s in (spec.left, spec.right):
        line = f"RELATION {s.name} FROM {_fmt_path(s.source or s.name + '.csv')}"
        if s.key:
            line += f" KEY {s.key}"
        lines.append(line)
    L, R = spec.left, spec.right
    jl = {c.slot: c.name for c in L.columns if c.role is Role.JOIN}
    jr = {c.slot: c.name for c in R.columns if c.role is Role.JOIN}
    conds = [f"{L.name}.{jl[c.slot]} {c.op.value} {R.name}.{jr[c.slot]}"
             for c in sorted(spec.joins, key=lambda c: c.slot)]
    lines.append("JOIN " + ", ".join(conds))
    gl = {c.slot: c.name for c in L.columns if c.role is Role.AGGREGATE}
    gr = {c.slot: c.name for c in R.columns if c.role is Role.AGGREGATE}
    for a in sorted(spec.aggregates, key=lambda a: a.slot):
        lines.append(f"AGG {a.name} = {a.fn.value}({L.name}.{gl[a.slot]}, {R.name}.{gr[a.slot]}) "
                     f"PREF {a.pref.value}")
    for s in (L, R):
        for c in s.columns:
            if c.role is Role.LOCAL:
                lines.append(f"LOCAL {s.name}.{c.name} PREF {c.pref.value}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# relations


def parse_value(text: str) -> float:
    """A decimal number, or an ``HH:MM`` time converted to minutes."""
    s = text.strip()
    m = _TIME.fullmatch(s)
    if m:
        hours, minutes = int(m.group(1)), int(m.group(2))
        if minutes >= 60:
            raise ValueError(f"invalid time {text!r}")
        return float(hours * 60 + minutes)
    if _NUMBER.fullmatch(s):
        return float(s)
    raise ValueError(f"not a number or HH:MM time: {text!r}")


def load_relation(path, schema: RelationSchema) -> Relation:
    """Read a CSV file into a relation for ``schema``.

    Every field must be numeric or an ``HH:MM`` time.  The header must name
    every schema column (and the key column, if any) exactly once.
    """
    path = Path(path)
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as e:
        raise LoadError(f"{path}: {e.strerror or e}") from None
    if not rows:
        raise LoadError(f"{path}: empty file, a header row is required")
    header = [h.strip() for h in rows[0]]
    seen = set()
    for h in header:
        if h in seen:
            raise LoadError(f"{path}: duplicate header column {h!r}")
        seen.add(h)
    wanted = [c.name for c in schema.columns]
    if schema.key:
        wanted.append(schema.key)
    missing = [w for w in wanted if w not in seen]
    if missing:
        raise LoadError(f"{path}: missing column(s) {', '.join(missing)} for relation {schema.name}")
    data = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != len(header):
            raise LoadError(f"{path}, line {lineno}: expected {len(header)} fields, got {len(row)}")
        vals = []
        for name, field in zip(header, row):
            try:
                vals.append(parse_value(field))
            except ValueError:
                raise LoadError(
                    f"{path}, line {lineno}, column {name!r}: non-numeric value {field!r}"
                ) from None
        data.append(vals)
    table = np.asarray(data, dtype=float).reshape(len(data), len(header))
    pick = [header.index(c.name) for c in schema.columns]
    ids = None
    if schema.key:
        raw = table[:, header.index(schema.key)]
        if not np.all(raw == np.round(raw)):
            raise LoadError(f"{path}: key column {schema.key!r} must hold integers")
        ids = raw.astype(np.int64)
        if len(np.unique(ids)) != len(ids):
            raise LoadError(f"{path}: key column {schema.key!r} has duplicate values")
    return Relation(schema, table[:, pick], ids)


def load_query(path):
    """Parse a query file and load both relations: ``(spec, left, right)``."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise LoadError(f"{path}: {e.strerror or e}") from None
    spec = parse_query(text)
    base = path.parent
    rels = []
    for s in (spec.left, spec.right):
        src = Path(s.source)
        rels.append(load_relation(src if src.is_absolute() else base / src, s))
    return spec, rels[0], rels[1]


def write_relation(path, relation: Relation, key: str | None = "id") -> None:
    """Write a relation as CSV (ids first under ``key`` unless ``key`` is None)."""
    names = relation.schema.column_names
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(([key] if key else []) + names)
        for rid, row in zip(relation.ids, relation.values):
            w.writerow(([int(rid)] if key else []) + [format_number(x) for x in row])


# --------------------------------------------------------------------------
# results


def format_number(x: float) -> str:
    """Shortest text that reads back as exactly ``x``."""
    x = float(x)
    if x.is_integer() and abs(x) < 2 ** 53:
        return str(int(x))
    return repr(x)


def write_results(path, tuples, spec: QuerySpec, report=None, report_path=None) -> None:
    """Write result tuples as CSV in (left id, right id) order, plus an optional report.

    The report (a :class:`asjq.algorithms.RunReport`) goes to ``report_path``,
    or next to ``path`` with a ``.report.json`` suffix when only ``report`` is given.
    """
    tuples = sorted(tuples)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["left_id", "right_id"] + spec.vector_names())
        for t in tuples:
            w.writerow([t.left_id, t.right_id] + [format_number(x) for x in t.vector])
    if report is not None:
        write_report(report_path or f"{os.fspath(path)}.report.json", report)


def write_report(path, report) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_results(path) -> list[JoinedTuple]:
    """Read a file written by :func:`write_results`."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    out = []
    for row in rows[1:]:
        vec = tuple(float(x) for x in row[2:])
        if not all(math.isfinite(v) for v in vec):
            raise LoadError(f"{path}: non-finite value")
        out.append(JoinedTuple(int(row[0]), int(row[1]), vec))
    return out
