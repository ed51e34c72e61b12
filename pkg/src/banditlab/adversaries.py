"""Sequence generators and adaptive adversaries for lower-bound games.

An adversary exposes

    next_instance() -> int | None      (None once its schedule is exhausted)
    respond(prediction) -> RoundReply
    sequence() -> LabeledSequence | None   (committed labels, possibly fixed
                                            retroactively at game end)
    claims_realizable                  whether sequence() must have class_error 0
    can_serve_full                     whether label sets are revealed per round
"""

from __future__ import annotations

from dataclasses import dataclass

from .dimensions import bldim
from .hypotheses import FiniteClass, LabeledSequence, MultiLabelExample


@dataclass(frozen=True)
class RoundReply:
    correct: bool
    allowed: frozenset[int] | None  # None when labels cannot be revealed yet


# ---------------------------------------------------------------------------
# the hidden-label guessing game
# ---------------------------------------------------------------------------


class NonRepeatingGuesser:
    """Guesses 0,1,2,... in order, then repeats the hidden label once found."""

    def __init__(self, k: int, rng=None):
        self.k = k
        self._next = 0
        self._hit: int | None = None

    def next_guess(self) -> int:
        if self._hit is not None:
            return self._hit
        return self._next

    def observe(self, guess: int, correct: bool) -> None:
        if correct:
            self._hit = guess
        elif guess == self._next:
            self._next += 1


class ConstantGuesser:
    def __init__(self, k: int, rng=None, label: int = 0):
        self.label = label

    def next_guess(self) -> int:
        return self.label

    def observe(self, guess: int, correct: bool) -> None:
        pass


class CyclingGuesser:
    """Walks the labels in order regardless of feedback."""

    def __init__(self, k: int, rng=None):
        self.k = k
        self.t = 0

    def next_guess(self) -> int:
        return self.t % self.k

    def observe(self, guess: int, correct: bool) -> None:
        self.t += 1


class RandomGuesser:
    def __init__(self, k: int, rng=None):
        self.k = k
        self.rng = rng

    def next_guess(self) -> int:
        return int(self.rng.integers(self.k))

    def observe(self, guess: int, correct: bool) -> None:
        pass


GUESSER_NAMES = ("nonrepeating", "constant", "cycling", "random")


def make_guesser(name: str, k: int, rng=None):
    table = {
        "nonrepeating": NonRepeatingGuesser,
        "constant": ConstantGuesser,
        "cycling": CyclingGuesser,
        "random": RandomGuesser,
    }
    try:
        return table[name](k, rng)
    except KeyError:
        raise ValueError(f"unknown guesser {name!r}; known: {', '.join(GUESSER_NAMES)}")


def guessing_game(k: int, guesser, rng) -> int:
    """One game: k-1 guesses at a uniformly hidden label; returns wrong guesses.

    Whatever the strategy, the expected count is at least (k-1)/2, with
    equality for the feedback-aware non-repeating guesser.
    """
    if k < 2:
        raise ValueError("the guessing game needs k >= 2")
    hidden = int(rng.integers(k))
    mistakes = 0
    for _ in range(k - 1):
        guess = guesser.next_guess()
        correct = guess == hidden
        mistakes += not correct
        guesser.observe(guess, correct)
    return mistakes


class GuessingAdversary:
    """The guessing game wrapped in the adversary protocol: a hidden uniform
    label on the single instance 0, honest equality feedback."""

    claims_realizable = True
    can_serve_full = True

    def __init__(self, fc: FiniteClass, rng):
        for y in range(fc.k):
            if fc.eq_mask(0, y) == 0:
                raise ValueError(
                    f"class {fc.name!r} realizes no hypothesis with h(0)={y}; "
                    "the guessing game needs every label available at instance 0"
                )
        self.fc = fc
        self.hidden = int(rng.integers(fc.k))
        self.rounds = 0

    def next_instance(self) -> int | None:
        return 0

    def respond(self, prediction: int) -> RoundReply:
        self.rounds += 1
        return RoundReply(prediction == self.hidden, frozenset((self.hidden,)))

    def sequence(self) -> LabeledSequence:
        return tuple(
            MultiLabelExample(0, frozenset((self.hidden,))) for _ in range(self.rounds)
        )


# ---------------------------------------------------------------------------
# the per-block permutation adversary
# ---------------------------------------------------------------------------


def draw_permutation_tape(delta: int, k: int, rng) -> tuple[tuple[int, ...], ...]:
    """Per block, the uniformly random order in which labels get committed."""
    return tuple(tuple(int(v) for v in rng.permutation(k)) for _ in range(delta))


def permutation_floor(delta: int, k: int) -> float:
    """Expected-mistake floor delta*(k-1)*k/4 forced on any learner."""
    return delta * (k - 1) * k / 4


class PermutationAdversary:
    """Oblivious adversary over X = [0,delta) x [0,k) (flattened to j*k+m).

    Block by block, instance (j, m) is shown k-1-m times with hidden label
    tape[j][m]; the committed labels form a bijection per block, so the run is
    realizable by the per-block permutation class.  All randomness sits in the
    up-front tape, never in reactions to predictions.
    """

    claims_realizable = True
    can_serve_full = True

    def __init__(self, fc: FiniteClass, delta: int, rng=None, tape=None):
        k = fc.k
        if fc.n != delta * k:
            raise ValueError(
                f"class {fc.name!r} has n={fc.n}; the block schedule needs n = delta*k = {delta * k}"
            )
        if tape is None:
            tape = draw_permutation_tape(delta, k, rng)
        self.fc = fc
        self.delta = delta
        self.tape = tape
        self.schedule: list[tuple[int, int]] = []
        for j in range(delta):
            for m in range(k - 1):
                self.schedule.extend([(j * k + m, tape[j][m])] * (k - 1 - m))
        self.pos = 0
        self.history: list[MultiLabelExample] = []

    @property
    def length(self) -> int:
        return len(self.schedule)

    def next_instance(self) -> int | None:
        if self.pos >= len(self.schedule):
            return None
        return self.schedule[self.pos][0]

    def respond(self, prediction: int) -> RoundReply:
        x, y = self.schedule[self.pos]
        self.pos += 1
        self.history.append(MultiLabelExample(x, frozenset((y,))))
        return RoundReply(prediction == y, frozenset((y,)))

    def sequence(self) -> LabeledSequence:
        return tuple(self.history)

    def committed_row(self) -> tuple[int, ...]:
        """The hiding function as a full table row, f(j, m) = tape[j][m]."""
        return tuple(self.tape[j][m] for j in range(self.delta) for m in range(self.fc.k))


# ---------------------------------------------------------------------------
# the bandit-dimension forcing adversary
# ---------------------------------------------------------------------------


class MinimaxBanditAdversary:
    """Forces >= min(T, bldim(H)) wrong answers from any deterministic learner.

    While the survivor space has positive bandit dimension, present the
    smallest dimension-attaining instance, declare the prediction wrong, and
    keep only avoiding hypotheses; the avoidance restriction at such an
    instance loses at most one dimension level, so the forcing phase lasts at
    least bldim(H) rounds.  Once the dimension hits zero, commit the smallest
    surviving hypothesis and answer honestly.  Cannot reveal label sets during
    forcing, so it serves bandit learners only.
    """

    claims_realizable = True
    can_serve_full = False

    def __init__(self, fc: FiniteClass, rng=None):
        self.fc = fc
        self.space = fc.full_space()
        self.committed: int | None = None
        self.rounds: list[tuple[int, int]] = []  # (x, prediction)
        self.forced_rounds = 0
        self.bldim_trace: list[int] = [bldim(self.space)]
        self._pending: int | None = None

    def _forcing_instance(self) -> int:
        target = bldim(self.space)
        for x in range(self.fc.n):
            worst = None
            for y in range(self.fc.k):
                sub = self.space.restrict_ne(x, y)
                if sub.mask == self.space.mask:
                    continue
                d = bldim(sub)
                if worst is None or d < worst:
                    worst = d
            if 1 + worst == target:
                return x
        raise AssertionError("no instance attains the bandit dimension")  # unreachable

    def next_instance(self) -> int | None:
        if self.committed is None and bldim(self.space) > 0:
            self._pending = self._forcing_instance()
        else:
            if self.committed is None:
                self.committed = next(self.space.members())
            self._pending = len(self.rounds) % self.fc.n
        return self._pending

    def respond(self, prediction: int) -> RoundReply:
        x = self._pending
        self.rounds.append((x, prediction))
        if self.committed is None:
            self.forced_rounds += 1
            self.space = self.space.restrict_ne(x, prediction)
            self.bldim_trace.append(bldim(self.space))
            return RoundReply(False, None)
        truth = self.fc.table[self.committed][x]
        return RoundReply(prediction == truth, frozenset((truth,)))

    def sequence(self) -> LabeledSequence:
        if self.committed is None and not self.space.is_empty:
            self.committed = next(self.space.members())
        row = self.fc.table[self.committed]
        return tuple(
            MultiLabelExample(x, frozenset((row[x],))) for x, _ in self.rounds
        )


# ---------------------------------------------------------------------------
# stochastic sequence samplers
# ---------------------------------------------------------------------------


def sample_realizable_sequence(
    fc: FiniteClass, T: int, rng, label_set_size: int = 1
) -> tuple[LabeledSequence, int]:
    """A length-T sequence realized by a uniformly drawn hypothesis.

    Each round's allowed set is the hypothesis's label plus label_set_size - 1
    distinct decoys.  Returns (sequence, realizing row index).
    """
    if not 1 <= label_set_size <= fc.k:
        raise ValueError(f"label_set_size must be in [1, {fc.k}]")
    h = int(rng.integers(fc.size))
    row = fc.table[h]
    items = []
    for x in rng.integers(fc.n, size=T):
        x = int(x)
        truth = row[x]
        allowed = {truth}
        if label_set_size > 1:
            others = [y for y in range(fc.k) if y != truth]
            decoys = rng.choice(len(others), size=label_set_size - 1, replace=False)
            allowed.update(others[int(i)] for i in decoys)
        items.append(MultiLabelExample(x, frozenset(allowed)))
    return tuple(items), h


class SequenceAdversary:
    """Replays a fixed sequence, judging predictions against the allowed sets."""

    can_serve_full = True

    def __init__(self, seq: LabeledSequence, claims_realizable: bool):
        self.seq = seq
        self.claims_realizable = claims_realizable
        self.pos = 0

    def next_instance(self) -> int | None:
        if self.pos >= len(self.seq):
            return None
        return self.seq[self.pos].x

    def respond(self, prediction: int) -> RoundReply:
        ex = self.seq[self.pos]
        self.pos += 1
        return RoundReply(prediction in ex.allowed, ex.allowed)

    def sequence(self) -> LabeledSequence:
        return self.seq[: self.pos]


def sample_noise_sequence(fc: FiniteClass, T: int, rng, label_set_size: int = 1) -> LabeledSequence:
    """Uniform instances with uniform label sets; generally not realizable."""
    if not 1 <= label_set_size <= fc.k:
        raise ValueError(f"label_set_size must be in [1, {fc.k}]")
    items = []
    for x in rng.integers(fc.n, size=T):
        labels = rng.choice(fc.k, size=label_set_size, replace=False)
        items.append(MultiLabelExample(int(x), frozenset(int(y) for y in labels)))
    return tuple(items)


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

ADVERSARY_NAMES = (
    "guessing",
    "permutation:<delta>",
    "minimax",
    "random-realizable:<setsize>",
    "noise:<setsize>",
)


def make_adversary(name: str, fc: FiniteClass, T: int, rng):
    base, _, arg = name.partition(":")
    if base == "guessing":
        return GuessingAdversary(fc, rng)
    if base == "permutation":
        delta = int(arg) if arg else 1
        return PermutationAdversary(fc, delta, rng)
    if base == "minimax":
        return MinimaxBanditAdversary(fc, rng)
    if base == "random-realizable":
        setsize = int(arg) if arg else 1
        seq, _ = sample_realizable_sequence(fc, T, rng, setsize)
        return SequenceAdversary(seq, claims_realizable=True)
    if base == "noise":
        setsize = int(arg) if arg else 1
        return SequenceAdversary(
            sample_noise_sequence(fc, T, rng, setsize), claims_realizable=False
        )
    raise ValueError(f"unknown adversary {name!r}; known: {', '.join(ADVERSARY_NAMES)}")
