"""Shared class corpus for the test suite."""

from __future__ import annotations

import numpy as np

from banditlab import FiniteClass, VersionSpace, full_class, random_class

ENUMERATED_SHAPES = ((1, 2), (1, 3), (2, 2))


def enumerated_spaces() -> list[VersionSpace]:
    """Every nonempty subclass of the small full classes, as version spaces."""
    out = []
    for n, k in ENUMERATED_SHAPES:
        fc = full_class(n, k)
        out.extend(VersionSpace(fc, mask) for mask in range(1, fc.full_mask + 1))
    return out


def random_spaces(count: int, seed: int, max_n: int = 3, max_k: int = 3) -> list[VersionSpace]:
    rng = np.random.default_rng(seed)
    return [
        random_class(rng, max_n, max_k, name=f"rand{i}").full_space()
        for i in range(count)
    ]


def named_corpus() -> list[FiniteClass]:
    """Small named classes with ldim >= 1, for learner sweeps."""
    from banditlab import permutation_class

    return [
        full_class(1, 2),
        full_class(1, 3),
        full_class(1, 4),
        full_class(2, 2),
        full_class(2, 3),
        permutation_class(1, 3),
    ]
