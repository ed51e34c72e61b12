"""Learning algorithms for the full-information and bandit protocols.

Learner states are value-semantic: `predict` is read-only and `update` returns
a fresh state, so independent rollouts can share a starting state.  All
learners expose

    kind          "full" or "bandit" (which feedback they consume)
    predict(x, rng) -> label
    update(x, prediction, feedback) -> next state
    mistakes      running count
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, product
from typing import ClassVar

import numpy as np

from .dimensions import ClassCollection, _ldim_mask, bldim, capacity, ldim
from .hypotheses import FiniteClass, RealizabilityViolation, VersionSpace


@dataclass(frozen=True)
class FullInfoFeedback:
    """The revealed allowed-label set of the round."""

    allowed: frozenset[int]


@dataclass(frozen=True)
class BanditFeedback:
    """Only whether the played label was in the allowed set."""

    correct: bool


# ---------------------------------------------------------------------------
# full-information version-space learner
# ---------------------------------------------------------------------------


def soa_prediction(space: VersionSpace, x: int) -> int:
    """Label whose matching restriction keeps the largest dimension (ties: smallest label)."""
    best_y, best_d = 0, -2
    for y in range(space.cls.k):
        d = ldim(space.restrict_eq(x, y))
        if d > best_d:
            best_y, best_d = y, d
    return best_y


@dataclass(frozen=True)
class SOALearner:
    """Standard optimal version-space learner for full-information rounds.

    Predicts the dimension-maximizing label and keeps only hypotheses agreeing
    with the revealed label set.  On single-label realizable runs it makes at
    most ldim(H) mistakes.
    """

    kind: ClassVar[str] = "full"

    space: VersionSpace
    mistakes: int = 0

    @classmethod
    def for_class(cls, fc: FiniteClass) -> "SOALearner":
        return cls(fc.full_space())

    def predict(self, x: int, rng=None) -> int:
        if self.space.is_empty:
            raise RealizabilityViolation("version space emptied: run was not realizable")
        return soa_prediction(self.space, x)

    def update(self, x: int, prediction: int, feedback: FullInfoFeedback) -> "SOALearner":
        mistake = prediction not in feedback.allowed
        nxt = self.space.restrict_in(x, feedback.allowed)
        return SOALearner(nxt, self.mistakes + mistake)


@dataclass(frozen=True)
class SOABanditLearner:
    """SOA heuristic fed only correctness bits.

    Equality-restricts on correct rounds (exact when label sets are
    singletons) and inequality-restricts on wrong ones.  No mistake guarantee;
    it is a zoo member for lower-bound probes.
    """

    kind: ClassVar[str] = "bandit"

    space: VersionSpace
    mistakes: int = 0

    @classmethod
    def for_class(cls, fc: FiniteClass) -> "SOABanditLearner":
        return cls(fc.full_space())

    def predict(self, x: int, rng=None) -> int:
        if self.space.is_empty:
            return 0
        return soa_prediction(self.space, x)

    def update(self, x: int, prediction: int, feedback: BanditFeedback) -> "SOABanditLearner":
        if self.space.is_empty:
            return SOABanditLearner(self.space, self.mistakes + (not feedback.correct))
        if feedback.correct:
            return SOABanditLearner(self.space.restrict_eq(x, prediction), self.mistakes)
        return SOABanditLearner(self.space.restrict_ne(x, prediction), self.mistakes + 1)


@dataclass(frozen=True)
class BanditOptimalLearner:
    """Bandit version-space learner that predicts the label whose avoidance
    restriction has the smallest bandit dimension.

    Every x has a label whose avoidance drops bldim, so each wrong answer
    shrinks bldim by at least one: single-label realizable runs cost at most
    bldim(H) mistakes.
    """

    kind: ClassVar[str] = "bandit"

    space: VersionSpace
    mistakes: int = 0

    @classmethod
    def for_class(cls, fc: FiniteClass) -> "BanditOptimalLearner":
        return cls(fc.full_space())

    def predict(self, x: int, rng=None) -> int:
        if self.space.is_empty:
            raise RealizabilityViolation("version space emptied: run was not realizable")
        best_y, best_d = 0, None
        for y in range(self.space.cls.k):
            d = bldim(self.space.restrict_ne(x, y))
            if best_d is None or d < best_d:
                best_y, best_d = y, d
        return best_y

    def update(self, x: int, prediction: int, feedback: BanditFeedback) -> "BanditOptimalLearner":
        if feedback.correct:
            return BanditOptimalLearner(self.space.restrict_eq(x, prediction), self.mistakes)
        return BanditOptimalLearner(self.space.restrict_ne(x, prediction), self.mistakes + 1)


# ---------------------------------------------------------------------------
# capacity-collection bandit learner
# ---------------------------------------------------------------------------


def bandit_potential(
    collection: ClassCollection, x: int, y0: int
) -> tuple[ClassCollection, ClassCollection, int]:
    """Capacity drop if y0 were predicted and judged wrong.

    Returns (selected, updated, drop): `selected` holds the members whose every
    off-y0 restriction strictly loses dimension; `updated` is the collection
    with each such member replaced in place by its nonempty off-y0 restrictions
    (other members untouched); `drop` is the exact integer
    capacity(collection) - capacity(updated).
    """
    selected: list[VersionSpace] = []
    updated: list[VersionSpace] = []
    for v in collection:
        if v.is_empty:
            raise ValueError("collections must hold nonempty spaces")
        k = v.cls.k
        dv = ldim(v)
        pieces: list[VersionSpace] = []
        in_selected = True
        for y in range(k):
            if y == y0:
                continue
            sub = v.restrict_eq(x, y)
            if ldim(sub) >= dv:
                in_selected = False
                break
            if not sub.is_empty:
                pieces.append(sub)
        if in_selected:
            selected.append(v)
            updated.extend(pieces)
        else:
            updated.append(v)
    drop = capacity(collection) - capacity(tuple(updated))
    return tuple(selected), tuple(updated), drop


@dataclass(frozen=True)
class CapacityLearner:
    """Deterministic realizable-case bandit learner driven by the capacity potential.

    Keeps a collection of version spaces; predicts the label whose
    wrong-answer capacity drop is largest (ties: smallest label) and applies
    that drop when told wrong.  Every hypothesis consistent with the feedback
    so far stays inside some member, so on realizable runs the capacity never
    reaches zero and the total mistakes stay below 4*k*ln(k)*ldim(H).
    """

    kind: ClassVar[str] = "bandit"

    collection: ClassCollection
    k: int
    mistakes: int = 0

    @classmethod
    def for_class(cls, fc: FiniteClass) -> "CapacityLearner":
        return cls((fc.full_space(),), fc.k)

    def predict(self, x: int, rng=None) -> int:
        if not self.collection:
            raise RealizabilityViolation("capacity exhausted: run was not realizable")
        best_y, best_drop = 0, -1
        for y in range(self.k):
            _, _, drop = bandit_potential(self.collection, x, y)
            if drop > best_drop:
                best_y, best_drop = y, drop
        return best_y

    def update(self, x: int, prediction: int, feedback: BanditFeedback) -> "CapacityLearner":
        if feedback.correct:
            return self
        _, updated, _ = bandit_potential(self.collection, x, prediction)
        if not updated:
            raise RealizabilityViolation("capacity reached 0: run was not realizable")
        return CapacityLearner(updated, self.k, self.mistakes + 1)


# ---------------------------------------------------------------------------
# baseline predictors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConstantLearner:
    kind: ClassVar[str] = "bandit"

    k: int
    label: int = 0
    mistakes: int = 0

    def predict(self, x: int, rng=None) -> int:
        return self.label

    def update(self, x, prediction, feedback) -> "ConstantLearner":
        return ConstantLearner(self.k, self.label, self.mistakes + (not feedback.correct))


@dataclass(frozen=True)
class CyclingLearner:
    kind: ClassVar[str] = "bandit"

    k: int
    t: int = 0
    mistakes: int = 0

    def predict(self, x: int, rng=None) -> int:
        return self.t % self.k

    def update(self, x, prediction, feedback) -> "CyclingLearner":
        return CyclingLearner(self.k, self.t + 1, self.mistakes + (not feedback.correct))


@dataclass(frozen=True)
class RandomLearner:
    kind: ClassVar[str] = "bandit"

    k: int
    mistakes: int = 0

    def predict(self, x: int, rng=None) -> int:
        return int(rng.integers(self.k))

    def update(self, x, prediction, feedback) -> "RandomLearner":
        return RandomLearner(self.k, self.mistakes + (not feedback.correct))


# ---------------------------------------------------------------------------
# deviation experts and the exponential-weights bandit aggregator
# ---------------------------------------------------------------------------

DEFAULT_EXPERT_CAP = 10**6


class EnumerationCapExceeded(ValueError):
    """The expert pool for (class, horizon) would be too large to materialize."""


def expert_count(T: int, k: int, L: int) -> int:
    """Exact number of deviation experts: sum_{j<=L} C(T,j) * k^j."""
    return sum(math.comb(T, j) * k**j for j in range(L + 1))


def expert_count_bound_holds(T: int, k: int, L: int) -> bool:
    """Whether the convenient ceiling (T*k)^L covers the exact count.

    The ceiling can be exceeded at very small T (e.g. T=2, k=2, L=1 gives
    5 > 4); callers should treat a False here as a known small-horizon
    artifact, not an error.
    """
    return expert_count(T, k, L) <= (T * k) ** L


@dataclass(frozen=True)
class Expert:
    """Deviation-augmented replay of the full-info learner.

    Follows the dimension-maximizing prediction except on `rounds`, where the
    corresponding forced label is played; the simulated version space restricts
    by the advised label in both branches.  Advice depends only on the
    instance stream, never on feedback.
    """

    rounds: tuple[int, ...]  # strictly increasing round indices
    labels: tuple[int, ...]  # forced label per deviation round

    def advice_sequence(self, fc: FiniteClass, xs) -> list[int]:
        forced = dict(zip(self.rounds, self.labels))
        mask = fc.full_mask
        out = []
        for t, x in enumerate(xs):
            y = forced.get(t)
            if y is None:
                y = _soa_label_mask(fc, mask, x)
            out.append(y)
            mask &= fc.eq_mask(x, y)
        return out


def _soa_label_mask(fc: FiniteClass, mask: int, x: int) -> int:
    best_y, best_d = 0, -2
    for y in range(fc.k):
        d = _ldim_mask(fc, mask & fc.eq_mask(x, y))
        if d > best_d:
            best_y, best_d = y, d
    return best_y


def imitating_expert(fc: FiniteClass, xs, labels) -> Expert:
    """The expert that replays a target labeling: deviations at the rounds where
    the plain dimension-maximizing learner would have erred against it."""
    mask = fc.full_mask
    rounds, forced = [], []
    for t, (x, y) in enumerate(zip(xs, labels)):
        if _soa_label_mask(fc, mask, x) != y:
            rounds.append(t)
            forced.append(y)
        mask &= fc.eq_mask(x, y)
    return Expert(tuple(rounds), tuple(forced))


class ExpertsPool:
    """All deviation experts for one (class, horizon), simulated jointly.

    Individual expert simulations collapse onto a small set of distinct
    version-space states, so advising the whole pool is a couple of array
    lookups per round instead of one simulation per expert.  The state tables
    are lazily filled caches (idempotent writes); per-game data (weights,
    state ids) lives in Exp4Learner.
    """

    def __init__(self, fc: FiniteClass, T: int, cap: int = DEFAULT_EXPERT_CAP):
        self.fc = fc
        self.T = T
        self.L = ldim(fc.full_space())
        self.count = expert_count(T, fc.k, self.L)
        if self.count > cap:
            raise EnumerationCapExceeded(
                f"{self.count} experts for T={T}, ldim={self.L} exceed the cap {cap}"
            )
        self.gamma = min(
            1.0, math.sqrt(fc.k * math.log(self.count) / ((math.e - 1) * T))
        )
        per_round_idx: list[list[int]] = [[] for _ in range(T)]
        per_round_lbl: list[list[int]] = [[] for _ in range(T)]
        specs: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
        i = 0
        for j in range(self.L + 1):
            for rounds in combinations(range(T), j):
                for labels in product(range(fc.k), repeat=j):
                    specs.append((rounds, labels))
                    for t, y in zip(rounds, labels):
                        per_round_idx[t].append(i)
                        per_round_lbl[t].append(y)
                    i += 1
        self._specs = specs
        self._overrides = [
            (np.asarray(ix, dtype=np.int64), np.asarray(lb, dtype=np.int8))
            for ix, lb in zip(per_round_idx, per_round_lbl)
        ]
        # version-space state tables, lazily filled
        self._masks: list[int] = [fc.full_mask]
        self._index: dict[int, int] = {fc.full_mask: 0}
        self._soa = np.full((8, fc.n), -1, dtype=np.int16)
        self._trans = np.full((8, fc.n, fc.k), -1, dtype=np.int32)

    def expert(self, i: int) -> Expert:
        rounds, labels = self._specs[i]
        return Expert(rounds, labels)

    def fresh_state_ids(self) -> np.ndarray:
        return np.zeros(self.count, dtype=np.int32)

    def fresh_weights(self) -> np.ndarray:
        return np.full(self.count, 1.0 / self.count)

    def _state_id(self, mask: int) -> int:
        sid = self._index.get(mask)
        if sid is None:
            sid = len(self._masks)
            self._masks.append(mask)
            self._index[mask] = sid
            if sid >= self._soa.shape[0]:
                grow = self._soa.shape[0]
                self._soa = np.concatenate(
                    [self._soa, np.full((grow, self.fc.n), -1, dtype=np.int16)]
                )
                self._trans = np.concatenate(
                    [self._trans, np.full((grow, self.fc.n, self.fc.k), -1, dtype=np.int32)]
                )
        return sid

    def advice(self, state_ids: np.ndarray, t: int, x: int) -> np.ndarray:
        """Advice of every expert at round t on instance x."""
        for sid in np.unique(state_ids):
            if self._soa[sid, x] < 0:
                self._soa[sid, x] = _soa_label_mask(self.fc, self._masks[sid], x)
        adv = self._soa[state_ids, x].astype(np.int8)
        idx, lbl = self._overrides[t]
        adv[idx] = lbl
        return adv

    def advance(self, state_ids: np.ndarray, x: int, advice: np.ndarray) -> np.ndarray:
        """Next simulation state of every expert after advising on x."""
        nxt = self._trans[state_ids, x, advice]
        missing = nxt < 0
        if missing.any():
            codes = state_ids[missing].astype(np.int64) * self.fc.k + advice[missing]
            for code in np.unique(codes):
                sid, y = divmod(int(code), self.fc.k)
                self._trans[sid, x, y] = self._state_id(
                    self._masks[sid] & self.fc.eq_mask(x, int(y))
                )
            nxt = self._trans[state_ids, x, advice]
        return nxt.astype(np.int32)


def pool_for(fc: FiniteClass, T: int, cap: int = DEFAULT_EXPERT_CAP) -> ExpertsPool:
    """Pool shared per (class, horizon); building one is the expensive part."""
    key = (T, cap)
    pool = fc.pool_cache.get(key)
    if pool is None:
        pool = ExpertsPool(fc, T, cap)
        fc.pool_cache[key] = pool
    return pool


def exp4_distribution(
    weights: np.ndarray, advice: np.ndarray, k: int, gamma: float
) -> np.ndarray:
    """Play distribution: weight-averaged advice mixed with gamma of uniform."""
    by_label = np.bincount(advice, weights=weights, minlength=k)
    p = (1.0 - gamma) * by_label / weights.sum() + gamma / k
    return p / p.sum()


def exp4_update(
    weights: np.ndarray,
    advice: np.ndarray,
    played: int,
    p_played: float,
    correct: bool,
    k: int,
    gamma: float,
) -> np.ndarray:
    """Importance-weighted exponential update; rescaled to sum 1 for stability."""
    out = weights.copy()
    if correct and gamma > 0.0:
        out[advice == played] *= math.exp(gamma / (k * p_played))
    return out / out.sum()


@dataclass(frozen=True, eq=False)
class Exp4Learner:
    """Exponential-weights bandit learner over the deviation-expert pool."""

    kind: ClassVar[str] = "bandit"

    pool: ExpertsPool
    weights: np.ndarray
    state_ids: np.ndarray
    t: int = 0
    mistakes: int = 0

    @classmethod
    def for_class(cls, fc: FiniteClass, T: int, cap: int = DEFAULT_EXPERT_CAP) -> "Exp4Learner":
        pool = pool_for(fc, T, cap)
        return cls(pool, pool.fresh_weights(), pool.fresh_state_ids())

    def predict(self, x: int, rng) -> int:
        advice = self.pool.advice(self.state_ids, self.t, x)
        p = exp4_distribution(self.weights, advice, self.pool.fc.k, self.pool.gamma)
        return int(rng.choice(self.pool.fc.k, p=p))

    def update(self, x: int, prediction: int, feedback: BanditFeedback) -> "Exp4Learner":
        advice = self.pool.advice(self.state_ids, self.t, x)
        p = exp4_distribution(self.weights, advice, self.pool.fc.k, self.pool.gamma)
        weights = exp4_update(
            self.weights,
            advice,
            prediction,
            float(p[prediction]),
            feedback.correct,
            self.pool.fc.k,
            self.pool.gamma,
        )
        state_ids = self.pool.advance(self.state_ids, x, advice)
        return Exp4Learner(
            self.pool, weights, state_ids, self.t + 1, self.mistakes + (not feedback.correct)
        )


def run_exp4_on_sequence(pool: ExpertsPool, seq, rng) -> tuple[int, int]:
    """One bandit game of the pool against a fixed sequence.

    Returns (learner mistakes, best single expert's true loss); the latter is
    tracked across the whole pool, which run_game cannot do cheaply.
    """
    k = pool.fc.k
    weights = pool.fresh_weights()
    state_ids = pool.fresh_state_ids()
    losses = np.zeros(pool.count, dtype=np.int64)
    mistakes = 0
    for t, ex in enumerate(seq):
        advice = pool.advice(state_ids, t, ex.x)
        p = exp4_distribution(weights, advice, k, pool.gamma)
        played = int(rng.choice(k, p=p))
        correct = played in ex.allowed
        mistakes += not correct
        weights = exp4_update(weights, advice, played, float(p[played]), correct, k, pool.gamma)
        state_ids = pool.advance(state_ids, ex.x, advice)
        good = np.zeros(k, dtype=bool)
        good[list(ex.allowed)] = True
        losses += ~good[advice]
    return mistakes, int(losses.min())


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

LEARNER_NAMES = (
    "soa",
    "capacity",
    "soa-bandit",
    "bsoa",
    "exp4",
    "constant",
    "cycling",
    "random",
)


def make_learner(name: str, fc: FiniteClass, T: int):
    """Fresh learner instance by CLI name (constant takes an optional :label)."""
    base, _, arg = name.partition(":")
    if base == "soa":
        return SOALearner.for_class(fc)
    if base == "capacity":
        return CapacityLearner.for_class(fc)
    if base == "soa-bandit":
        return SOABanditLearner.for_class(fc)
    if base == "bsoa":
        return BanditOptimalLearner.for_class(fc)
    if base == "exp4":
        cap = int(arg) if arg else DEFAULT_EXPERT_CAP
        return Exp4Learner.for_class(fc, T, cap)
    if base == "constant":
        label = int(arg) if arg else 0
        fc.check_label(label)
        return ConstantLearner(fc.k, label)
    if base == "cycling":
        return CyclingLearner(fc.k)
    if base == "random":
        return RandomLearner(fc.k)
    raise ValueError(f"unknown learner {name!r}; known: {', '.join(LEARNER_NAMES)}")
