"""Finite multiclass hypothesis classes and version spaces.

All combinatorics downstream (dimensions, learners, adversaries) runs over an
explicit table of hypotheses h: [0,n) -> [0,k).  A version space is a bitmask
over table rows, so restriction is a single integer AND and spaces double as
hashable memoization keys.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Sequence

Label = int
Instance = int


class RealizabilityViolation(RuntimeError):
    """A learner that assumes a realizable run observed evidence against one."""


class FiniteClass:
    """Explicit hypothesis class over instances [0, n) and labels [0, k).

    Duplicate rows are dropped at construction (first occurrence kept): they
    change no dimension, error count, or learner behaviour.  Instances are
    immutable by convention; per-class caches (dimension memos, expert-pool
    state tables) hang off the object so memoization stays scoped to one class.
    """

    def __init__(self, name: str, n: int, k: int, rows: Iterable[Sequence[int]]):
        if not isinstance(n, int) or n < 1:
            raise ValueError(f"need at least one instance, got n={n!r}")
        if not isinstance(k, int) or k < 2:
            raise ValueError(f"need at least two labels, got k={k!r}")
        table: list[tuple[int, ...]] = []
        seen: set[tuple[int, ...]] = set()
        for i, raw in enumerate(rows):
            row = tuple(int(v) for v in raw)
            if len(row) != n:
                raise ValueError(f"row {i} has length {len(row)}, expected n={n}")
            for v in row:
                if not 0 <= v < k:
                    raise ValueError(f"row {i} contains label {v} outside [0, {k})")
            if row not in seen:
                seen.add(row)
                table.append(row)
        if not table:
            raise ValueError("hypothesis list is empty")
        self.name = str(name)
        self.n = n
        self.k = k
        self.table: tuple[tuple[int, ...], ...] = tuple(table)
        self.size = len(table)
        self.full_mask = (1 << self.size) - 1
        eq = [[0] * k for _ in range(n)]
        for h, row in enumerate(self.table):
            for x, y in enumerate(row):
                eq[x][y] |= 1 << h
        self._eq = tuple(tuple(col) for col in eq)
        self._hash = hash((self.name, n, k, self.table))
        # caches filled lazily by other modules; writes are idempotent
        self.ldim_cache: dict[int, int] = {}
        self.bldim_cache: dict[int, int] = {}
        self.shatter_cache: dict[tuple, object] = {}
        self.pool_cache: dict[tuple, object] = {}

    def eq_mask(self, x: int, y: int) -> int:
        """Bitmask of hypotheses with h(x) == y."""
        return self._eq[x][y]

    def check_instance(self, x: int) -> None:
        if not 0 <= x < self.n:
            raise ValueError(f"instance {x} outside [0, {self.n})")

    def check_label(self, y: int) -> None:
        if not 0 <= y < self.k:
            raise ValueError(f"label {y} outside [0, {self.k})")

    def full_space(self) -> "VersionSpace":
        return VersionSpace(self, self.full_mask)

    def empty_space(self) -> "VersionSpace":
        return VersionSpace(self, 0)

    def space(self, members: Iterable[int]) -> "VersionSpace":
        mask = 0
        for h in members:
            if not 0 <= h < self.size:
                raise ValueError(f"hypothesis index {h} out of range")
            mask |= 1 << h
        return VersionSpace(self, mask)

    def hypothesis(self, h: int) -> tuple[int, ...]:
        return self.table[h]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteClass):
            return NotImplemented
        return (self.name, self.n, self.k, self.table) == (
            other.name,
            other.n,
            other.k,
            other.table,
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"FiniteClass({self.name!r}, n={self.n}, k={self.k}, |H|={self.size})"


@dataclass(frozen=True)
class VersionSpace:
    """Subset of a FiniteClass's rows, stored as a canonical bitmask."""

    cls: FiniteClass
    mask: int

    def __post_init__(self) -> None:
        if not 0 <= self.mask <= self.cls.full_mask:
            raise ValueError(f"mask {self.mask:#x} outside the class universe")

    @property
    def size(self) -> int:
        return self.mask.bit_count()

    @property
    def is_empty(self) -> bool:
        return self.mask == 0

    def members(self) -> Iterator[int]:
        m = self.mask
        while m:
            low = m & -m
            yield low.bit_length() - 1
            m ^= low

    def __contains__(self, h: int) -> bool:
        return 0 <= h < self.cls.size and bool(self.mask >> h & 1)

    def restrict_eq(self, x: int, y: int) -> "VersionSpace":
        """Hypotheses of this space with h(x) == y."""
        self.cls.check_instance(x)
        self.cls.check_label(y)
        return VersionSpace(self.cls, self.mask & self.cls.eq_mask(x, y))

    def restrict_ne(self, x: int, y: int) -> "VersionSpace":
        """Hypotheses of this space with h(x) != y."""
        self.cls.check_instance(x)
        self.cls.check_label(y)
        return VersionSpace(self.cls, self.mask & ~self.cls.eq_mask(x, y))

    def restrict_in(self, x: int, labels: Iterable[int]) -> "VersionSpace":
        """Hypotheses with h(x) in the given label set."""
        self.cls.check_instance(x)
        allowed_mask = 0
        for y in labels:
            self.cls.check_label(y)
            allowed_mask |= self.cls.eq_mask(x, y)
        return VersionSpace(self.cls, self.mask & allowed_mask)

    def is_realizable(self, seq: "LabeledSequence") -> bool:
        """True iff some member picks an allowed label at every round.

        The empty space realizes only the empty sequence (convention: with no
        members there is no witness, but a zero-length run constrains nothing).
        """
        if not seq:
            return True
        if self.is_empty:
            return False
        _check_sequence(self.cls, seq)
        table = self.cls.table
        return any(
            all(table[h][ex.x] in ex.allowed for ex in seq) for h in self.members()
        )

    def class_error(self, seq: "LabeledSequence") -> int:
        """Minimum over members of the number of rounds whose allowed set is missed."""
        if self.is_empty:
            raise ValueError("class_error is undefined for an empty version space")
        _check_sequence(self.cls, seq)
        table = self.cls.table
        best = len(seq) + 1
        for h in self.members():
            row = table[h]
            misses = 0
            for ex in seq:
                if row[ex.x] not in ex.allowed:
                    misses += 1
                    if misses >= best:
                        break
            if misses < best:
                best = misses
                if best == 0:
                    break
        return best

    def __repr__(self) -> str:
        return f"VersionSpace({self.cls.name!r}, |V|={self.size})"


@dataclass(frozen=True)
class MultiLabelExample:
    """One round's instance together with its allowed label set."""

    x: int
    allowed: frozenset[int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "allowed", frozenset(int(y) for y in self.allowed))
        if not self.allowed:
            raise ValueError("allowed label set must be nonempty")


LabeledSequence = tuple[MultiLabelExample, ...]


def make_sequence(pairs: Iterable[tuple[int, Iterable[int]]]) -> LabeledSequence:
    return tuple(MultiLabelExample(int(x), frozenset(labels)) for x, labels in pairs)


def _check_sequence(cls: FiniteClass, seq: LabeledSequence) -> None:
    for ex in seq:
        cls.check_instance(ex.x)
        for y in ex.allowed:
            cls.check_label(y)


# ---------------------------------------------------------------------------
# serialization: both formats are plain JSON and round-trip exactly
# ---------------------------------------------------------------------------


def load_class(text: str) -> FiniteClass:
    """Parse a class document: {"name": ..., "n": ..., "k": ..., "rows": [[...], ...]}."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise ValueError(f"malformed class document: {err}") from err
    if not isinstance(doc, dict):
        raise ValueError("malformed class document: expected a JSON object")
    try:
        n, k, rows = doc["n"], doc["k"], doc["rows"]
    except KeyError as err:
        raise ValueError(f"class document missing field {err}") from err
    if not isinstance(rows, list):
        raise ValueError("class document field 'rows' must be a list")
    return FiniteClass(doc.get("name", "unnamed"), n, k, rows)


def dumps_class(cls: FiniteClass) -> str:
    doc = {
        "name": cls.name,
        "n": cls.n,
        "k": cls.k,
        "rows": [list(row) for row in cls.table],
    }
    return json.dumps(doc, indent=2)


def read_class(path: str | Path) -> FiniteClass:
    return load_class(Path(path).read_text())


def write_class(cls: FiniteClass, path: str | Path) -> None:
    Path(path).write_text(dumps_class(cls))


def load_sequence(text: str) -> LabeledSequence:
    """Parse a sequence document: a JSON list of {"x": ..., "allowed": [...]} records."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise ValueError(f"malformed sequence document: {err}") from err
    if not isinstance(doc, list):
        raise ValueError("malformed sequence document: expected a JSON list")
    out = []
    for i, rec in enumerate(doc):
        try:
            out.append(MultiLabelExample(int(rec["x"]), frozenset(rec["allowed"])))
        except (KeyError, TypeError) as err:
            raise ValueError(f"bad sequence record {i}: {err}") from err
    return tuple(out)


def dumps_sequence(seq: LabeledSequence) -> str:
    doc = [{"x": ex.x, "allowed": sorted(ex.allowed)} for ex in seq]
    return json.dumps(doc, indent=2)


def read_sequence(path: str | Path) -> LabeledSequence:
    return load_sequence(Path(path).read_text())


def write_sequence(seq: LabeledSequence, path: str | Path) -> None:
    Path(path).write_text(dumps_sequence(seq))
