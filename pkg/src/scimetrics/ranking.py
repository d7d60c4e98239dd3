"""Pluralistic multi-criteria ranking.

Three ways to turn per-criterion performance values into an ordering:
a weighted sum of mean-normalized values, a talent score that adds a bonus
for the two strongest criteria over the two weakest, and a league
classification that rewards excellence on one or a few scales.  These are
meant for preselection only.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import EmptyMatrix, LengthMismatch, WrongArity, ZeroMeanCriterion

TALENT_COEFFICIENT = 0.1
LEAGUES = ("A", "B", "C")
UNRANKED = "unranked"


@dataclass
class ScoreMatrix:
    """Performance values, one row per candidate and one column per criterion."""

    candidate_ids: list[str]
    criteria_ids: list[str]
    values: np.ndarray

    def __post_init__(self):
        self.candidate_ids = list(self.candidate_ids)
        self.criteria_ids = list(self.criteria_ids)
        self.values = np.asarray(self.values, dtype=float).reshape(len(self.candidate_ids), len(self.criteria_ids))
        if (self.values < 0).any() or not np.isfinite(self.values).all():
            raise ValueError("performance values must be finite and >= 0")

    @classmethod
    def from_csv(cls, path) -> "ScoreMatrix":
        """Read a matrix whose header row names the criteria and whose first
        column holds candidate ids."""
        with open(path, newline="", encoding="utf-8") as fh:
            rows = [r for r in csv.reader(fh) if r]
        if not rows:
            raise EmptyMatrix(f"{path}: empty score matrix")
        header, body = rows[0], rows[1:]
        criteria = header[1:]
        for i, r in enumerate(body, start=2):
            if len(r) != len(header):
                raise LengthMismatch(f"{path}:{i}: expected {len(header)} columns, got {len(r)}")
        return cls([r[0] for r in body], criteria, [[float(v) for v in r[1:]] for r in body])

    def column(self, criterion: str) -> np.ndarray:
        return self.values[:, self.criteria_ids.index(criterion)]


@dataclass(frozen=True)
class WeightVector:
    weights: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        if any(w < 0 for w in self.weights) or sum(self.weights) <= 0:
            raise ValueError("weights must be >= 0 with a positive sum")

    def __len__(self):
        return len(self.weights)

    def normalized(self) -> "WeightVector":
        s = sum(self.weights)
        return WeightVector(tuple(w / s for w in self.weights))


# The example weighting of four criteria: scientific excellence, industrial
# relevance, societal relevance, dissemination.
EXAMPLE_WEIGHTS = WeightVector((0.35, 0.25, 0.25, 0.15))


def _weights(w) -> tuple[float, ...]:
    return w.weights if isinstance(w, WeightVector) else WeightVector(tuple(w)).weights


def normalize_scores(matrix: ScoreMatrix) -> ScoreMatrix:
    """Divide every criterion column by its mean."""
    means = matrix.values.mean(axis=0) if len(matrix.candidate_ids) else np.zeros(len(matrix.criteria_ids))
    for c, m in zip(matrix.criteria_ids, means):
        if not m > 0:
            raise ZeroMeanCriterion(c)
    return ScoreMatrix(matrix.candidate_ids, matrix.criteria_ids, matrix.values / means)


def weighted_score(x: Sequence[float], w) -> float:
    ws = _weights(w)
    if len(x) != len(ws):
        raise LengthMismatch(f"{len(x)} values but {len(ws)} weights")
    return math.fsum(wi * xi for wi, xi in zip(ws, x))


def talent_score(x: Sequence[float], w) -> float:
    """Weighted score plus 0.1 times (two best minus two worst) of ``x``.

    Defined for exactly four criteria.
    """
    if len(x) != 4 or len(_weights(w)) != 4:
        raise WrongArity("talent score is defined for exactly 4 criteria")
    y = sorted(x, reverse=True)
    return weighted_score(x, w) + TALENT_COEFFICIENT * (y[0] + y[1] - y[2] - y[3])


def rank_candidates(matrix: ScoreMatrix, w, mode: str = "weighted") -> list[tuple[str, float]]:
    """Normalize, score and sort candidates, best first (ties by id)."""
    score = {"weighted": weighted_score, "talent": talent_score}[mode]
    norm = normalize_scores(matrix)
    scored = [(cid, score(list(row), w)) for cid, row in zip(norm.candidate_ids, norm.values)]
    return sorted(scored, key=lambda t: (-t[1], t[0]))


def competition_ranks(column: np.ndarray) -> np.ndarray:
    """1 + number of strictly better values; tied values share a rank."""
    col = np.asarray(column, dtype=float)
    return 1 + (col[None, :] > col[:, None]).sum(axis=1)


def top_cutoff(percent: float, n: int) -> int:
    """Largest rank still inside the best ``percent`` % of ``n`` candidates."""
    return min(n, math.ceil(Fraction(percent) * n / 100))


def _qualifies(ranks: np.ndarray, y: float, n: int) -> bool:
    # ranks: one candidate's rank per criterion
    return any((ranks <= top_cutoff(m * y, n)).sum() >= m for m in (1, 2, 3))


@dataclass(frozen=True)
class LeagueAssignment:
    candidate_id: str
    league: str


def league_classify(matrix: ScoreMatrix, y_a: float = 10, y_b: float = 20, y_c: float = 30) -> list[LeagueAssignment]:
    """Assign each candidate to league A, B, C or ``unranked``.

    A candidate belongs to a league with parameter y when they are in the
    top y % on at least one criterion, the top 2y % on two, or the top 3y %
    on three.  Leagues are tried in order A, B, C.
    """
    if not 0 < y_a <= y_b <= y_c <= 100:
        raise ValueError("need 0 < y_a <= y_b <= y_c <= 100")
    n = len(matrix.candidate_ids)
    if n == 0 or not matrix.criteria_ids:
        raise EmptyMatrix("league classification needs candidates and criteria")
    ranks = np.column_stack([competition_ranks(matrix.values[:, j]) for j in range(len(matrix.criteria_ids))])
    out = []
    for cid, r in zip(matrix.candidate_ids, ranks):
        league = next((name for name, y in zip(LEAGUES, (y_a, y_b, y_c)) if _qualifies(r, y, n)), UNRANKED)
        out.append(LeagueAssignment(cid, league))
    return out
