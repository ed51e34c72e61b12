import math

import numpy as np
import pytest

from banditlab import (
    BanditFeedback,
    CapacityLearner,
    Exp4Learner,
    FiniteClass,
    FullInfoFeedback,
    RealizabilityViolation,
    SOALearner,
    bandit_potential,
    bldim,
    capacity,
    expert_count,
    full_class,
    imitating_expert,
    ldim,
    make_learner,
    make_sequence,
    pool_for,
    run_exp4_on_sequence,
    sample_realizable_sequence,
    soa_prediction,
)
from banditlab.learners import (
    EnumerationCapExceeded,
    exp4_distribution,
    expert_count_bound_holds,
)
from corpus_util import named_corpus


# ---------------------------------------------------------------------------
# SOA
# ---------------------------------------------------------------------------


def test_soa_breaks_ties_toward_smallest_label():
    fc = full_class(1, 2)  # two constants, both restrictions have ldim 0
    assert soa_prediction(fc.full_space(), 0) == 0


def test_soa_prefers_the_dimension_keeping_label():
    # three rows: two with h(0)=1 (they still differ at x=1), one with h(0)=0
    fc = FiniteClass("m", 2, 2, [[0, 0], [1, 0], [1, 1]])
    space = fc.full_space()
    assert ldim(space.restrict_eq(0, 1)) > ldim(space.restrict_eq(0, 0))
    assert soa_prediction(space, 0) == 1


@pytest.mark.parametrize("fc", named_corpus(), ids=lambda c: c.name)
def test_soa_mistake_bound_on_realizable_runs(fc):
    bound = ldim(fc.full_space())
    for seed in range(10):
        rng = np.random.default_rng(seed)
        seq, _ = sample_realizable_sequence(fc, 25, rng)
        learner = SOALearner.for_class(fc)
        for ex in seq:
            pred = learner.predict(ex.x)
            learner = learner.update(ex.x, pred, FullInfoFeedback(ex.allowed))
        assert learner.mistakes <= bound


def test_soa_raises_once_the_space_is_contradicted():
    fc = FiniteClass("c0", 1, 2, [[0]])
    learner = SOALearner.for_class(fc)
    learner = learner.update(0, 0, FullInfoFeedback(frozenset({1})))
    with pytest.raises(RealizabilityViolation):
        learner.predict(0)


# ---------------------------------------------------------------------------
# the capacity potential
# ---------------------------------------------------------------------------


def test_potential_full_binary_class():
    fc = full_class(1, 2)
    for y0 in (0, 1):
        selected, updated, drop = bandit_potential((fc.full_space(),), 0, y0)
        assert len(selected) == 1
        assert [v.size for v in updated] == [1]
        assert drop == 3  # capacity 4 -> 1


def test_potential_singleton_off_its_own_label():
    fc = full_class(1, 2)
    single = fc.space([1])  # the constant-1 row
    selected, updated, drop = bandit_potential((single,), 0, 1)
    assert len(selected) == 1 and updated == () and drop == 1
    selected, updated, drop = bandit_potential((single,), 0, 0)
    assert selected == () and updated == (single,) and drop == 0


def test_potential_is_never_negative_and_mass_bounds_hold():
    # collections reached by running the learner, plus handmade ones
    for fc in named_corpus():
        k = fc.k
        collections = [
            (fc.full_space(),),
            tuple(fc.space([h]) for h in range(min(3, fc.size))),
        ]
        learner = CapacityLearner.for_class(fc)
        rng = np.random.default_rng(3)
        seq, _ = sample_realizable_sequence(fc, 12, rng)
        for ex in seq:
            pred = learner.predict(ex.x)
            learner = learner.update(ex.x, pred, BanditFeedback(pred in ex.allowed))
            collections.append(learner.collection)
        for coll in collections:
            if not coll:
                continue
            cap = capacity(coll)
            drops = []
            for x in range(fc.n):
                drops_x = [bandit_potential(coll, x, y)[2] for y in range(k)]
                assert all(d >= 0 for d in drops_x)
                # total potential mass: k * sum >= (k-1) * capacity, exactly
                assert k * sum(drops_x) >= (k - 1) * cap
                # argmax floor: 2k * max >= capacity, exactly
                assert 2 * k * max(drops_x) >= cap
                drops.append(drops_x)


def test_capacity_learner_hand_trace():
    # adversary answers "wrong" while it can; exactly one mistake then perfect
    fc = full_class(1, 2)
    learner = CapacityLearner.for_class(fc)
    p1 = learner.predict(0)
    assert p1 == 0  # smallest-label tie-break
    learner = learner.update(0, p1, BanditFeedback(False))
    assert learner.mistakes == 1
    p2 = learner.predict(0)
    assert p2 == 1
    learner = learner.update(0, p2, BanditFeedback(True))
    assert learner.mistakes == 1


def run_capacity_instrumented(fc, seq):
    """Run the learner over a sequence, checking exact shrinkage and coverage."""
    k = fc.k
    learner = CapacityLearner.for_class(fc)
    consistent = fc.full_mask  # hypotheses agreeing with all feedback so far
    for ex in seq:
        pred = learner.predict(ex.x)
        correct = pred in ex.allowed
        cap_before = capacity(learner.collection)
        learner = learner.update(ex.x, pred, BanditFeedback(correct))
        if not correct:
            cap_after = capacity(learner.collection)
            assert 2 * k * cap_after <= (2 * k - 1) * cap_before  # exact integers
            consistent &= ~fc.eq_mask(ex.x, pred)
        elif len(ex.allowed) == 1:
            consistent &= fc.eq_mask(ex.x, pred)
        union = 0
        for v in learner.collection:
            union |= v.mask
        assert consistent & ~union == 0  # every consistent hypothesis is covered
        assert capacity(learner.collection) >= 1
    return learner.mistakes


@pytest.mark.parametrize("fc", named_corpus(), ids=lambda c: c.name)
def test_capacity_learner_bound_shrinkage_and_coverage(fc):
    bound = 4.0 * fc.k * math.log(fc.k) * ldim(fc.full_space())
    for seed in range(8):
        rng = np.random.default_rng(seed)
        seq, _ = sample_realizable_sequence(fc, 20, rng)
        mistakes = run_capacity_instrumented(fc, seq)
        assert mistakes < bound


def test_capacity_learner_raises_on_unrealizable_run():
    fc = FiniteClass("c01", 1, 2, [[0], [1]])
    learner = CapacityLearner.for_class(fc)
    with pytest.raises(RealizabilityViolation):
        for _ in range(5):  # nothing is ever correct: no hypothesis survives
            pred = learner.predict(0)
            learner = learner.update(0, pred, BanditFeedback(False))


# ---------------------------------------------------------------------------
# experts
# ---------------------------------------------------------------------------


def test_expert_count_examples():
    assert expert_count(2, 2, 1) == 5
    assert not expert_count_bound_holds(2, 2, 1)  # 5 > (2*2)^1, small-T artifact
    assert expert_count(10, 3, 0) == 1
    assert expert_count_bound_holds(10, 3, 0)
    assert expert_count(100, 3, 2) == 1 + 300 + math.comb(100, 2) * 9
    assert expert_count_bound_holds(100, 3, 2)


def test_singleton_class_has_one_expert_following_it():
    fc = FiniteClass("one", 2, 3, [[2, 1]])
    pool = pool_for(fc, 5)
    assert pool.count == 1
    expert = pool.expert(0)
    xs = [0, 1, 0, 1, 0]
    assert expert.advice_sequence(fc, xs) == [2, 1, 2, 1, 2]


def test_pool_advice_matches_expert_simulation():
    fc = full_class(2, 2)
    T = 4
    pool = pool_for(fc, T)
    xs = [0, 1, 1, 0]
    state_ids = pool.fresh_state_ids()
    matrix = []
    for t, x in enumerate(xs):
        advice = pool.advice(state_ids, t, x)
        matrix.append([int(a) for a in advice])
        state_ids = pool.advance(state_ids, x, advice)
    for i in range(pool.count):
        expert = pool.expert(i)
        assert expert.advice_sequence(fc, xs) == [matrix[t][i] for t in range(T)]


def test_imitating_expert_replays_the_hypothesis():
    fc = full_class(2, 3)
    rng = np.random.default_rng(12)
    L = ldim(fc.full_space())
    for h in range(fc.size):
        row = fc.table[h]
        xs = [int(v) for v in rng.integers(fc.n, size=10)]
        expert = imitating_expert(fc, xs, [row[x] for x in xs])
        assert len(expert.rounds) <= L
        assert expert.advice_sequence(fc, xs) == [row[x] for x in xs]


def test_best_expert_never_beats_by_less_than_the_class():
    fc = full_class(2, 2)
    pool = pool_for(fc, 8)
    rng = np.random.default_rng(5)
    for _ in range(6):
        seq = make_sequence(
            [(int(rng.integers(fc.n)), {int(rng.integers(fc.k))}) for _ in range(8)]
        )
        _, best = run_exp4_on_sequence(pool, seq, np.random.default_rng(1))
        assert best <= fc.full_space().class_error(seq)


def test_enumeration_cap_is_enforced():
    fc = full_class(2, 3)
    with pytest.raises(EnumerationCapExceeded):
        pool_for(fc, 200, cap=1000)


# ---------------------------------------------------------------------------
# exp4
# ---------------------------------------------------------------------------


def test_single_expert_pool_follows_it_exactly():
    fc = FiniteClass("one", 1, 3, [[2]])
    pool = pool_for(fc, 6)
    assert pool.gamma == 0.0
    seq = make_sequence([(0, {2})] * 6)
    mistakes, best = run_exp4_on_sequence(pool, seq, np.random.default_rng(0))
    assert mistakes == 0 and best == 0


def test_uniform_advice_mixture():
    weights = np.array([0.25, 0.5, 0.25])
    advice = np.array([1, 1, 1], dtype=np.int8)
    p = exp4_distribution(weights, advice, k=3, gamma=0.3)
    assert p[1] == pytest.approx(0.7 + 0.1)
    assert p[0] == pytest.approx(0.1)
    assert p.sum() == pytest.approx(1.0)


def test_exp4_learner_matches_sequence_runner():
    fc = full_class(1, 3)
    T = 30
    pool = pool_for(fc, T)
    rng = np.random.default_rng(77)
    seq, _ = sample_realizable_sequence(fc, T, rng)
    mistakes_runner, _ = run_exp4_on_sequence(pool, seq, np.random.default_rng(5))
    learner = Exp4Learner.for_class(fc, T)
    lrn_rng = np.random.default_rng(5)
    for ex in seq:
        pred = learner.predict(ex.x, lrn_rng)
        learner = learner.update(ex.x, pred, BanditFeedback(pred in ex.allowed))
    assert learner.mistakes == mistakes_runner


def test_exp4_update_is_pure():
    fc = full_class(1, 2)
    learner = Exp4Learner.for_class(fc, 10)
    w0 = learner.weights.copy()
    nxt = learner.update(0, 0, BanditFeedback(True))
    assert np.array_equal(learner.weights, w0)
    assert nxt.t == 1


def test_make_learner_registry():
    fc = full_class(1, 3)
    for name in ("soa", "capacity", "soa-bandit", "bsoa", "constant:2", "cycling", "random"):
        learner = make_learner(name, fc, 5)
        assert hasattr(learner, "predict")
    with pytest.raises(ValueError):
        make_learner("nope", fc, 5)
    with pytest.raises(ValueError):
        make_learner("constant:9", fc, 5)


def test_bsoa_bound_on_realizable_bandit_runs():
    for fc in named_corpus():
        bound = bldim(fc.full_space())
        for seed in range(6):
            rng = np.random.default_rng(seed)
            seq, _ = sample_realizable_sequence(fc, 20, rng)
            learner = make_learner("bsoa", fc, 20)
            for ex in seq:
                pred = learner.predict(ex.x)
                learner = learner.update(ex.x, pred, BanditFeedback(pred in ex.allowed))
            assert learner.mistakes <= bound
