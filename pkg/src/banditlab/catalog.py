"""Builders for the hypothesis classes used by presets and tests."""

from __future__ import annotations

from itertools import permutations, product
from typing import Iterator

import numpy as np

from .hypotheses import FiniteClass


def full_class(n: int, k: int) -> FiniteClass:
    """Every function [0,n) -> [0,k): the k^n-row table."""
    return FiniteClass(f"full:{n}x{k}", n, k, product(range(k), repeat=n))


def constants_class(n: int, k: int) -> FiniteClass:
    """The k constant functions over n instances."""
    return FiniteClass(f"const:{n}x{k}", n, k, ([c] * n for c in range(k)))


def permutation_class(delta: int, k: int) -> FiniteClass:
    """Functions on [0,delta)x[0,k) that restrict to a bijection on every block.

    Instance (j, m) is flattened to j*k + m.  The table has (k!)^delta rows, so
    keep delta and k small.
    """
    if delta < 1:
        raise ValueError("delta must be >= 1")
    rows = (
        [y for block in combo for y in block]
        for combo in product(permutations(range(k)), repeat=delta)
    )
    return FiniteClass(f"perm:{delta}x{k}", delta * k, k, rows)


def random_class(rng: np.random.Generator, max_n: int = 3, max_k: int = 3, name: str | None = None) -> FiniteClass:
    """A uniformly drawn table with random shape (duplicates collapse at load)."""
    n = int(rng.integers(1, max_n + 1))
    k = int(rng.integers(2, max_k + 1))
    size = int(rng.integers(1, k**n + 1))
    rows = rng.integers(0, k, size=(size, n))
    return FiniteClass(name or f"rand:{n}x{k}", n, k, rows.tolist())


def all_nonempty_submasks(cls: FiniteClass) -> Iterator[int]:
    """Every nonempty subset of the class's rows, as version-space masks."""
    return iter(range(1, cls.full_mask + 1))


def subclass(cls: FiniteClass, mask: int) -> FiniteClass:
    """The rows selected by a version-space mask, as a standalone class."""
    if not 0 < mask <= cls.full_mask:
        raise ValueError(f"mask {mask:#x} selects no rows of {cls.name!r}")
    rows = [cls.table[h] for h in range(cls.size) if mask >> h & 1]
    return FiniteClass(f"{cls.name}#{mask}", cls.n, cls.k, rows)


def parse_spec(spec: str) -> FiniteClass:
    """Resolve a builtin class spec: full:NxK, const:NxK, or perm:DxK."""
    try:
        kind, shape = spec.split(":", 1)
        a, b = (int(part) for part in shape.split("x"))
    except ValueError as err:
        raise ValueError(
            f"bad class spec {spec!r}; expected full:NxK, const:NxK, or perm:DxK"
        ) from err
    if kind == "full":
        return full_class(a, b)
    if kind == "const":
        return constants_class(a, b)
    if kind == "perm":
        return permutation_class(a, b)
    raise ValueError(f"unknown class kind {kind!r} in spec {spec!r}")
