"""Exact Littlestone and bandit-Littlestone dimensions, plus the capacity measure.

Two independent routes are provided for each dimension:

* a memoized version-space recursion (`ldim`, `bldim`) used by the learners,
  and
* a brute-force search for an explicitly shattered tree (`shatter_oracle`,
  `shatter_witness`) that follows the tree definitions directly and can emit
  the witness tree.

The recursions:

    ldim(empty) = -1
    ldim(V)     = max over x and label pairs y1 != y2 with both restrictions
                  nonempty of 1 + min(ldim(V[x=y1]), ldim(V[x=y2])), or 0 when
                  no such pair exists.

    bldim(empty) = -1
    bldim(V)     = max over x of 1 + min over labels y of bldim(V[x!=y]),
                  floored at 0.

In both recursions a restriction equal to V itself can never bind: for ldim it
forces every other label's restriction empty at that x (no usable pair), and
for bldim its value is bldim(V) >= the value of any proper restriction, so the
min is always attained on a proper subset.  Skipping those branches keeps the
recursion well-founded.  The tree oracles do not rely on this argument: they
recurse on depth, which is how the two routes stay independent cross-checks.

Scaling: ldim only ever visits subsets cut out by pinning instances to labels
(at most (k+1)^n masks, usually far fewer), so it stays fast even for large
tables.  bldim visits subsets cut out by *forbidding* label sets (up to
(2^k)^n masks) and can need minutes and a lot of memo on big random classes
or product-structured tables; keep bandit-dimension work to small universes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .hypotheses import FiniteClass, VersionSpace

DEFAULT_DEPTH_CAP = 6

_LEAF = object()  # sentinel: subtree of depth 0 exists


def ldim(space: VersionSpace) -> int:
    """Littlestone dimension of a version space (-1 for the empty space)."""
    return _ldim_mask(space.cls, space.mask)


def bldim(space: VersionSpace) -> int:
    """Bandit Littlestone dimension of a version space (-1 for the empty space)."""
    return _bldim_mask(space.cls, space.mask)


def _ldim_mask(cls: FiniteClass, mask: int) -> int:
    if mask == 0:
        return -1
    cache = cls.ldim_cache
    got = cache.get(mask)
    if got is not None:
        return got
    best = 0
    for x in range(cls.n):
        top = second = -1  # two largest restriction dimensions at x
        for y in range(cls.k):
            sub = mask & cls.eq_mask(x, y)
            if sub == 0:
                continue
            if sub == mask:
                # the whole space agrees on x: no usable label pair here
                top, second = 0, -1
                break
            d = _ldim_mask(cls, sub)
            if d > top:
                top, second = d, top
            elif d > second:
                second = d
        if second >= 0 and 1 + second > best:
            best = 1 + second
    cache[mask] = best
    return best


def _bldim_mask(cls: FiniteClass, mask: int) -> int:
    if mask == 0:
        return -1
    cache = cls.bldim_cache
    got = cache.get(mask)
    if got is not None:
        return got
    best = 0
    for x in range(cls.n):
        worst = None  # min over labels that actually shrink the space
        for y in range(cls.k):
            sub = mask & ~cls.eq_mask(x, y)
            if sub == mask:
                continue  # unused label: its branch never attains the min
            d = _bldim_mask(cls, sub)
            if worst is None or d < worst:
                worst = d
            if worst == -1:
                break
        # worst is set: a nonempty space uses at least one label at every x
        if 1 + worst > best:
            best = 1 + worst
    cache[mask] = best
    return best


@dataclass
class WitnessNode:
    """Internal node of a shattered tree: an instance and one subtree per edge label."""

    x: int
    edges: dict[int, "WitnessNode | None"]  # None marks a leaf child


def shatter_oracle(
    space: VersionSpace, depth: int, mode: str = "L", depth_cap: int = DEFAULT_DEPTH_CAP
) -> bool:
    """Whether a complete shattered tree of the given depth exists.

    Mode "L": binary tree, each node carrying two distinct edge labels; every
    root-to-leaf label path must be realizable by some member.  Mode "BL":
    k-ary tree with one edge per label; every path must admit a member
    avoiding each edge label.  Exhaustive search over node instances (and, in
    L mode, label pairs), memoized on (surviving members, remaining depth).
    """
    return _search(space, depth, mode, depth_cap) is not False


def shatter_witness(
    space: VersionSpace, depth: int, mode: str = "L", depth_cap: int = DEFAULT_DEPTH_CAP
) -> WitnessNode | None:
    """A shattered tree of the given depth, or None if depth is 0 or unattainable."""
    got = _search(space, depth, mode, depth_cap)
    if got is False or got is _LEAF:
        return None
    return got


def _search(space: VersionSpace, depth: int, mode: str, depth_cap: int):
    if mode not in ("L", "BL"):
        raise ValueError(f"mode must be 'L' or 'BL', got {mode!r}")
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    if depth > depth_cap:
        raise ValueError(f"depth {depth} above the tractability cap {depth_cap}")
    fn = _l_search if mode == "L" else _bl_search
    return fn(space.cls, space.mask, depth)


def _l_search(cls: FiniteClass, mask: int, depth: int):
    if depth == 0:
        return _LEAF if mask else False
    key = ("L", mask, depth)
    cache = cls.shatter_cache
    got = cache.get(key)
    if got is not None:
        return got
    result = False
    for x in range(cls.n):
        subs = [mask & cls.eq_mask(x, y) for y in range(cls.k)]
        for y1 in range(cls.k):
            if not subs[y1]:
                continue
            left = _l_search(cls, subs[y1], depth - 1)
            if left is False:
                continue
            for y2 in range(y1 + 1, cls.k):
                if not subs[y2]:
                    continue
                right = _l_search(cls, subs[y2], depth - 1)
                if right is False:
                    continue
                result = WitnessNode(
                    x,
                    {
                        y1: None if left is _LEAF else left,
                        y2: None if right is _LEAF else right,
                    },
                )
                break
            if result is not False:
                break
        if result is not False:
            break
    cache[key] = result
    return result


def _bl_search(cls: FiniteClass, mask: int, depth: int):
    if depth == 0:
        return _LEAF if mask else False
    key = ("BL", mask, depth)
    cache = cls.shatter_cache
    got = cache.get(key)
    if got is not None:
        return got
    result = False
    for x in range(cls.n):
        edges: dict[int, WitnessNode | None] = {}
        ok = True
        for y in range(cls.k):
            child = _bl_search(cls, mask & ~cls.eq_mask(x, y), depth - 1)
            if child is False:
                ok = False
                break
            edges[y] = None if child is _LEAF else child
        if ok:
            result = WitnessNode(x, edges)
            break
    cache[key] = result
    return result


def format_witness(node: WitnessNode | None, indent: int = 0) -> str:
    """Indented text rendering of a witness tree."""
    if node is None:
        return " " * indent + "leaf"
    lines = [" " * indent + f"x={node.x}"]
    for y in sorted(node.edges):
        lines.append(" " * (indent + 2) + f"y={y} ->")
        lines.append(format_witness(node.edges[y], indent + 4))
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# collections of version spaces and their capacity
# ---------------------------------------------------------------------------

ClassCollection = tuple[VersionSpace, ...]
"""Ordered multiset of nonempty version spaces over one class.

Multiset semantics matter: the capacity accounting sums over members
individually, so equal subsets must not be merged.
"""


def capacity(collection: ClassCollection) -> int:
    """Exact capacity sum_{V} k^(2*ldim(V)); comparisons must never round.

    k^(2L) overflows 64 bits already at moderate k and L, hence exact Python
    integers throughout.
    """
    total = 0
    for v in collection:
        if v.is_empty:
            raise ValueError("capacity is defined over nonempty spaces only")
        total += v.cls.k ** (2 * ldim(v))
    return total
