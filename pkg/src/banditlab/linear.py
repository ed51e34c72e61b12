"""Margin multiclass linear separators: scoring, two explicit embeddings, and
the multiclass Perceptron.

A scorer is a k x d matrix W acting on unit-ball instances; a pair (x, y) is
margin-realized when row y beats every other row by at least 1.  The two
constructions below realize finite classes inside the Frobenius ball:

* standard-basis embedding: any f: [0,L) -> [0,k) becomes a 0/1 matrix with
  gap exactly 1 and squared norm L;
* roots-of-unity embedding: any per-block bijection table becomes a matrix of
  magnitude-k^2 unit-phase entries with gap k^2*(1 - cos(2*pi/k)) and squared
  norm delta*k^5.  Complex coordinates are realized explicitly in R^(2*delta),
  so real inner products equal real parts of hermitian products and instances
  stay in the unit ball.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

GAP_TOL = 1e-9


def frobenius_norm(w: np.ndarray) -> float:
    return float(np.linalg.norm(w))


def margin_gap(w: np.ndarray, x: np.ndarray, y: int) -> float:
    """Score advantage of row y over the best other row; >= 1 means margin-realized."""
    scores = w @ x
    others = np.delete(scores, y)
    return float(scores[y] - others.max())


def check_margin_realization(
    w: np.ndarray, graph: list[tuple[np.ndarray, int]]
) -> tuple[bool, float]:
    """Whether every listed (point, label) pair has gap >= 1; also the minimum gap."""
    if not graph:
        return True, math.inf
    min_gap = min(margin_gap(w, x, y) for x, y in graph)
    return min_gap >= 1.0 - GAP_TOL, min_gap


def standard_basis_embedding(
    f, k: int, d: int | None = None
) -> tuple[np.ndarray, list[tuple[np.ndarray, int]]]:
    """Realize a labeling f: [0,L) -> [0,k) on the first L basis vectors.

    Row i of the matrix is the indicator sum of the points labeled i, so every
    pair has gap exactly 1 and the squared Frobenius norm is L.
    """
    f = list(f)
    L = len(f)
    if d is None:
        d = L
    if L > d:
        raise ValueError(f"{L} points do not fit in dimension {d}")
    for y in f:
        if not 0 <= y < k:
            raise ValueError(f"label {y} outside [0, {k})")
    w = np.zeros((k, d))
    for j, y in enumerate(f):
        w[y, j] = 1.0
    graph = [(np.eye(d)[j], f[j]) for j in range(L)]
    return w, graph


def roots_of_unity_embedding(
    table: list[list[int]], d: int | None = None
) -> tuple[np.ndarray, list[tuple[np.ndarray, int]]]:
    """Realize a per-block bijection table f(j, m) = table[j][m] with margin.

    Point (j, m) is the m-th k-th root of unity on complex coordinate j;
    the matrix entry for its label is k^2 times the same phase.  Complex
    coordinate j maps to real coordinates (2j, 2j+1), which preserves norms
    and turns Re<u, v> into a plain dot product.  Scores are computed from the
    matrix itself rather than any closed form.
    """
    delta = len(table)
    if delta < 1:
        raise ValueError("need at least one block")
    k = len(table[0])
    for j, row in enumerate(table):
        if sorted(row) != list(range(k)):
            raise ValueError(f"block {j} is not a bijection on [0, {k})")
    if d is None:
        d = 2 * delta
    if d < 2 * delta:
        raise ValueError(f"{delta} complex coordinates need d >= {2 * delta}")
    w = np.zeros((k, d))
    graph = []
    for j in range(delta):
        for m in range(k):
            phase = 2.0 * math.pi * m / k
            re, im = math.cos(phase), math.sin(phase)
            w[table[j][m], 2 * j] = k**2 * re
            w[table[j][m], 2 * j + 1] = k**2 * im
            x = np.zeros(d)
            x[2 * j], x[2 * j + 1] = re, im
            graph.append((x, table[j][m]))
    return w, graph


def roots_of_unity_gap(k: int) -> float:
    """The construction's closed-form minimum gap k^2*(1 - cos(2*pi/k))."""
    return k**2 * (1.0 - math.cos(2.0 * math.pi / k))


def unit_gap_scaled(
    w: np.ndarray, graph: list[tuple[np.ndarray, int]]
) -> tuple[np.ndarray, float]:
    """The matrix rescaled so its minimum gap over the graph is exactly 1.

    Gaps are positively homogeneous, so dividing by the current minimum leaves
    every argmax untouched; the scaled squared norm is what the radius
    accounting compares against thresholds.
    """
    _, min_gap = check_margin_realization(w, graph)
    if not math.isfinite(min_gap) or min_gap <= 0.0:
        raise ValueError("the matrix does not separate its graph with a positive gap")
    return w / min_gap, frobenius_norm(w / min_gap)


def embedding_norm_report(delta: int, k: int) -> dict:
    """Norm bookkeeping for the bijection construction at block count delta.

    Reports the raw squared norm delta*k^5, the squared norm after scaling the
    minimum gap down to exactly 1, and the threshold k^3*d quoted for ambient
    dimension d = 2*delta, flagging when the normalized construction still
    exceeds it (it does once k grows; no attempt is made to reconcile this).
    """
    d = 2 * delta
    gap = roots_of_unity_gap(k)
    raw_sq = delta * k**5
    normalized_sq = raw_sq / gap**2
    threshold = k**3 * d
    return {
        "delta": delta,
        "k": k,
        "d": d,
        "min_gap": gap,
        "raw_norm_sq": float(raw_sq),
        "normalized_norm_sq": normalized_sq,
        "threshold_norm_sq": float(threshold),
        "fits_threshold": normalized_sq <= threshold,
    }


def taylor_gap_floor(k: int) -> float:
    """Quarter-quadratic lower bound on the gap: k^2 * (2*pi/k)^2 / 4 = pi^2."""
    return k**2 * (2.0 * math.pi / k) ** 2 / 4.0


# ---------------------------------------------------------------------------
# the multiclass Perceptron
# ---------------------------------------------------------------------------


@dataclass
class PerceptronResult:
    mistakes: int
    weights: np.ndarray


def multiclass_perceptron(stream, k: int, d: int) -> PerceptronResult:
    """Online run over (point, label) pairs: argmax prediction, additive
    correction of the true and predicted rows on mistakes.

    On a stream margin-realized by some matrix of Frobenius norm at most D,
    the mistake count is at most 2*D^2.
    """
    w = np.zeros((k, d))
    mistakes = 0
    for x, y in stream:
        pred = int(np.argmax(w @ x))
        if pred != y:
            mistakes += 1
            w[y] += x
            w[pred] -= x
    return PerceptronResult(mistakes, w)


@dataclass(frozen=True, eq=False)
class BanditPerceptron:
    """Perceptron probe for bandit games on embedded points: wrong answers
    push the played row away, correct answers leave the matrix alone.  Used
    only to witness lower bounds; it carries no mistake guarantee."""

    weights: np.ndarray
    mistakes: int = 0

    @classmethod
    def zeros(cls, k: int, d: int) -> "BanditPerceptron":
        return cls(np.zeros((k, d)))

    def predict(self, x: np.ndarray) -> int:
        return int(np.argmax(self.weights @ x))

    def update(self, x: np.ndarray, prediction: int, correct: bool) -> "BanditPerceptron":
        if correct:
            return self
        w = self.weights.copy()
        w[prediction] -= x
        return BanditPerceptron(w, self.mistakes + 1)
