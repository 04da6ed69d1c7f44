"""Attribute roles, queries, tuples and the three dominance relations.

Every algorithm in the package is built on the definitions in this module.
Values are plain floats (times are minutes since midnight, categories are
integer codes) and comparisons are exact.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


class Pref(enum.Enum):
    MIN = "MIN"
    MAX = "MAX"
    EQUAL = "EQUAL"  # only ever derived for join attributes

    @property
    def sign(self) -> float:
        """Multiplier that turns the preference into "smaller is better"."""
        if self is Pref.MIN:
            return 1.0
        if self is Pref.MAX:
            return -1.0
        raise ValueError("EQUAL has no orientation")


class JoinOp(enum.Enum):
    EQ = "EQ"
    LT = "LT"
    LE = "LE"
    GT = "GT"
    GE = "GE"

    def holds(self, a, b):
        """Evaluate ``a <op> b``; works elementwise on numpy arrays."""
        if self is JoinOp.EQ:
            return a == b
        if self is JoinOp.LT:
            return a < b
        if self is JoinOp.LE:
            return a <= b
        if self is JoinOp.GT:
            return a > b
        return a >= b

    def flipped(self) -> "JoinOp":
        """Operator with the operands swapped (``a < b`` is ``b > a``)."""
        return _FLIP[self]


_FLIP = {
    JoinOp.EQ: JoinOp.EQ,
    JoinOp.LT: JoinOp.GT,
    JoinOp.LE: JoinOp.GE,
    JoinOp.GT: JoinOp.LT,
    JoinOp.GE: JoinOp.LE,
}


class AggFn(enum.Enum):
    SUM = "SUM"
    AVG = "AVG"
    MIN = "MIN"
    MAX = "MAX"

    @property
    def strict(self) -> bool:
        """SUM and AVG are strictly monotone; MIN and MAX only weakly."""
        return self in (AggFn.SUM, AggFn.AVG)

    def apply(self, a, b):
        if self is AggFn.SUM:
            return a + b
        if self is AggFn.AVG:
            return (a + b) / 2
        if self is AggFn.MIN:
            return np.minimum(a, b)
        return np.maximum(a, b)


class Side(enum.Enum):
    LEFT = "left"
    RIGHT = "right"


def derive_join_preference(op: JoinOp, side: Side) -> Pref:
    """Preference a join attribute acquires for pruning.

    A tuple may only replace another if it joins with every partner the other
    one joins with: ``A.a < B.b`` means smaller ``a`` and larger ``b`` are
    never worse.
    """
    if op is JoinOp.EQ:
        return Pref.EQUAL
    smaller_left = op in (JoinOp.LT, JoinOp.LE)
    if side is Side.LEFT:
        return Pref.MIN if smaller_left else Pref.MAX
    return Pref.MAX if smaller_left else Pref.MIN


class Role(enum.Enum):
    JOIN = "join"
    LOCAL = "local"
    AGGREGATE = "aggregate"


@dataclass(frozen=True)
class Column:
    name: str
    role: Role
    slot: int | None = None  # join / aggregate slot
    pref: Pref | None = None  # local / aggregate preference


@dataclass(frozen=True)
class RelationSchema:
    name: str
    columns: tuple[Column, ...]
    source: str | None = None
    key: str | None = None  # column holding external row ids

    def column_index(self, name: str) -> int:
        for i, col in enumerate(self.columns):
            if col.name == name:
                return i
        raise KeyError(f"{self.name} has no column {name!r}")

    def _by_role(self, role: Role) -> list[int]:
        idx = [i for i, c in enumerate(self.columns) if c.role is role]
        if role is not Role.LOCAL:
            idx.sort(key=lambda i: self.columns[i].slot)
        return idx

    @property
    def join_idx(self) -> list[int]:
        return self._by_role(Role.JOIN)

    @property
    def local_idx(self) -> list[int]:
        return self._by_role(Role.LOCAL)

    @property
    def agg_idx(self) -> list[int]:
        return self._by_role(Role.AGGREGATE)

    @property
    def column_names(self) -> list[str]:
        return [c.name for c in self.columns]

    @property
    def m(self) -> int:
        return len(self.local_idx)


@dataclass(frozen=True)
class JoinCondition:
    slot: int
    op: JoinOp


@dataclass(frozen=True)
class Aggregate:
    slot: int
    fn: AggFn
    pref: Pref
    name: str


class GuaranteeRegime(enum.Enum):
    EQUI_STRICT = "equi_strict"
    RESTRICTED = "restricted"


@dataclass(frozen=True)
class QuerySpec:
    left: RelationSchema
    right: RelationSchema
    joins: tuple[JoinCondition, ...]
    aggregates: tuple[Aggregate, ...]

    def side_of(self, schema: RelationSchema) -> Side:
        if schema is self.left or schema == self.left:
            return Side.LEFT
        if schema is self.right or schema == self.right:
            return Side.RIGHT
        raise SchemaMismatch(f"schema {schema.name!r} is not part of this query")

    def schema(self, side: Side) -> RelationSchema:
        return self.left if side is Side.LEFT else self.right

    def join_prefs(self, side: Side) -> list[Pref]:
        """Derived join preferences in slot order."""
        ops = sorted(self.joins, key=lambda c: c.slot)
        return [derive_join_preference(c.op, side) for c in ops]

    @property
    def join_regime(self) -> str:
        return "EQUI" if all(c.op is JoinOp.EQ for c in self.joins) else "MIXED"

    @property
    def regime(self) -> GuaranteeRegime:
        if self.join_regime == "EQUI" and all(a.fn.strict for a in self.aggregates):
            return GuaranteeRegime.EQUI_STRICT
        return GuaranteeRegime.RESTRICTED

    @property
    def dims(self) -> int:
        return self.left.m + self.right.m + len(self.aggregates)

    def vector_signs(self) -> np.ndarray:
        """Orientation of the joined skyline vector (+1 MIN, -1 MAX)."""
        signs = [self.left.columns[i].pref.sign for i in self.left.local_idx]
        signs += [self.right.columns[i].pref.sign for i in self.right.local_idx]
        signs += [a.pref.sign for a in sorted(self.aggregates, key=lambda a: a.slot)]
        return np.asarray(signs, dtype=float)

    def vector_names(self) -> list[str]:
        names = [f"{self.left.name}.{self.left.columns[i].name}" for i in self.left.local_idx]
        names += [f"{self.right.name}.{self.right.columns[i].name}" for i in self.right.local_idx]
        names += [a.name for a in sorted(self.aggregates, key=lambda a: a.slot)]
        return names


class QueryError(ValueError):
    """Raised when a query violates the schema/query invariants."""

    def __init__(self, problems: Sequence[str]):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class SchemaMismatch(ValueError):
    pass


@dataclass(frozen=True)
class QueryCheck:
    spec: QuerySpec
    join_regime: str
    regime: GuaranteeRegime
    weak_aggregates: tuple[str, ...]


def _check_schema(schema: RelationSchema, j: int, n: int) -> list[str]:
    problems = []
    names = [c.name for c in schema.columns]
    dupes = {x for x in names if names.count(x) > 1}
    if dupes:
        problems.append(f"{schema.name}: column(s) used in two roles: {sorted(dupes)}")
    join_slots = sorted(c.slot for c in schema.columns if c.role is Role.JOIN)
    if join_slots != list(range(j)):
        problems.append(f"{schema.name}: join slots {join_slots} do not cover 0..{j - 1}")
    agg_slots = sorted(c.slot for c in schema.columns if c.role is Role.AGGREGATE)
    if agg_slots != list(range(n)):
        problems.append(f"{schema.name}: aggregate slots {agg_slots} do not cover 0..{n - 1}")
    for c in schema.columns:
        if c.role is Role.JOIN:
            if c.pref is not None:
                problems.append(f"{schema.name}.{c.name}: join attribute carries a preference")
        elif c.pref not in (Pref.MIN, Pref.MAX):
            problems.append(f"{schema.name}.{c.name}: preference must be MIN or MAX, got {c.pref}")
    return problems


def validate_query(spec: QuerySpec) -> QueryCheck:
    """Check the query invariants and classify its guarantee regime.

    Raises :class:`QueryError` listing every problem found.
    """
    j, n = len(spec.joins), len(spec.aggregates)
    problems = []
    if n == 0:
        problems.append("ASJQ requires at least one aggregate")
    if sorted(c.slot for c in spec.joins) != list(range(j)):
        problems.append("dangling join slot")
    if sorted(a.slot for a in spec.aggregates) != list(range(n)):
        problems.append("dangling aggregate slot")
    for a in spec.aggregates:
        if a.pref not in (Pref.MIN, Pref.MAX):
            problems.append(f"aggregate {a.name}: preference must be MIN or MAX")
    problems += _check_schema(spec.left, j, n)
    problems += _check_schema(spec.right, j, n)
    if problems:
        raise QueryError(problems)
    weak = tuple(a.name for a in spec.aggregates if not a.fn.strict)
    return QueryCheck(spec, spec.join_regime, spec.regime, weak)


# --------------------------------------------------------------------------
# tuples and relations


@dataclass(frozen=True)
class SourceTuple:
    row_id: int
    values: tuple[float, ...]


@dataclass(frozen=True, order=True)
class JoinedTuple:
    left_id: int
    right_id: int
    vector: tuple[float, ...] = field(compare=False)

    @property
    def pair(self) -> tuple[int, int]:
        return (self.left_id, self.right_id)


class Relation:
    """Immutable base table; rows are kept in ascending row-id order.

    ``values`` holds one column per schema column, in schema order.
    """

    def __init__(self, schema: RelationSchema, values, ids=None):
        values = np.asarray(values, dtype=float)
        if values.ndim == 1 and values.size == 0:
            values = values.reshape(0, len(schema.columns))
        if values.ndim != 2 or values.shape[1] != len(schema.columns):
            raise SchemaMismatch(
                f"{schema.name}: expected {len(schema.columns)} values per row, "
                f"got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError(f"{schema.name}: non-finite value")
        if ids is None:
            ids = np.arange(len(values), dtype=np.int64)
        ids = np.asarray(ids, dtype=np.int64)
        if len(ids) != len(values):
            raise ValueError("ids and values differ in length")
        if len(np.unique(ids)) != len(ids):
            raise ValueError(f"{schema.name}: duplicate row ids")
        order = np.argsort(ids, kind="stable")
        self.schema = schema
        self.ids = ids[order]
        self.values = values[order]
        self.ids.setflags(write=False)
        self.values.setflags(write=False)
        self._pos = {int(r): i for i, r in enumerate(self.ids)}

    @property
    def name(self) -> str:
        return self.schema.name

    def __len__(self) -> int:
        return len(self.ids)

    def __repr__(self) -> str:
        return f"Relation({self.name!r}, {len(self)} rows)"

    def position(self, row_id: int) -> int:
        return self._pos[int(row_id)]

    def positions(self, row_ids: Iterable[int]) -> np.ndarray:
        return np.asarray(sorted(self._pos[int(r)] for r in row_ids), dtype=np.int64)

    def id_set(self, positions) -> frozenset[int]:
        return frozenset(int(x) for x in self.ids[np.asarray(positions, dtype=np.int64)])

    def tuple(self, row_id: int) -> SourceTuple:
        p = self._pos[int(row_id)]
        return SourceTuple(int(self.ids[p]), tuple(float(x) for x in self.values[p]))

    def tuples(self) -> list[SourceTuple]:
        return [SourceTuple(int(r), tuple(map(float, v))) for r, v in zip(self.ids, self.values)]

    def column(self, name: str) -> np.ndarray:
        return self.values[:, self.schema.column_index(name)]


# --------------------------------------------------------------------------
# dominance relations on single tuples


def _check_tuple(u: SourceTuple, schema: RelationSchema) -> None:
    if len(u.values) != len(schema.columns):
        raise SchemaMismatch(
            f"tuple {u.row_id} has {len(u.values)} values, schema {schema.name} has "
            f"{len(schema.columns)} columns"
        )


def _better_eq(a: float, b: float, pref: Pref) -> bool:
    if pref is Pref.MIN:
        return a <= b
    if pref is Pref.MAX:
        return a >= b
    return a == b


def _strictly_better(a: float, b: float, pref: Pref) -> bool:
    return a < b if pref is Pref.MIN else a > b


def prune_dominates(u: SourceTuple, u2: SourceTuple, schema: RelationSchema, spec: QuerySpec) -> bool:
    """Join-aware ("full") dominance used to discard source tuples.

    ``u`` must be preferred-or-equal on every local and aggregate attribute,
    satisfy the derived preference on every join attribute, and be strictly
    preferred on a local attribute or on the input of a strictly monotone
    aggregate.  Join attributes never supply strictness, and neither do MIN/MAX
    aggregate inputs, because the advantage may vanish after aggregation.
    """
    side = spec.side_of(schema)
    _check_tuple(u, schema)
    _check_tuple(u2, schema)
    strict_agg = {a.slot: a.fn.strict for a in spec.aggregates}
    agg_pref = {a.slot: a.pref for a in spec.aggregates}
    join_pref = spec.join_prefs(side)
    strict = False
    for i, col in enumerate(schema.columns):
        a, b = u.values[i], u2.values[i]
        if col.role is Role.JOIN:
            if not _better_eq(a, b, join_pref[col.slot]):
                return False
            continue
        pref = col.pref if col.role is Role.LOCAL else agg_pref[col.slot]
        if not _better_eq(a, b, pref):
            return False
        if _strictly_better(a, b, pref) and (col.role is Role.LOCAL or strict_agg[col.slot]):
            strict = True
    return strict


def weak_local_dominates(u: SourceTuple, u2: SourceTuple, schema: RelationSchema) -> bool:
    """Locals-only dominance that admits ties (``u`` and ``u2`` distinct rows)."""
    _check_tuple(u, schema)
    _check_tuple(u2, schema)
    if u.row_id == u2.row_id:
        return False
    return all(_better_eq(u.values[i], u2.values[i], schema.columns[i].pref) for i in schema.local_idx)


def joined_dominates(r: JoinedTuple, r2: JoinedTuple, spec: QuerySpec) -> bool:
    """Standard skyline dominance over the joined skyline vector."""
    if len(r.vector) != spec.dims or len(r2.vector) != spec.dims:
        raise SchemaMismatch("skyline vector length does not match the query")
    strict = False
    for a, b, s in zip(r.vector, r2.vector, spec.vector_signs()):
        a, b = a * s, b * s
        if a > b:
            return False
        if a < b:
            strict = True
    return strict
