"""Per-author citation indices: h, g, e, contemporary h, AWCR/AW, h_I and h_m."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .corpus import Corpus, age, author_papers, rank_key

CONTEMPORARY_GAMMA = 4.0
CONTEMPORARY_DELTA = 1.0


@dataclass(frozen=True)
class AuthorPaperView:
    """The per-paper inputs the author indices consume."""

    citations: int
    year: int
    n_authors: int = 1
    paper_id: str = ""

    def __post_init__(self):
        if self.citations < 0:
            raise ValueError("citations must be >= 0")
        if isinstance(self.n_authors, bool) or int(self.n_authors) != self.n_authors or self.n_authors < 1:
            raise ValueError("n_authors must be an integer >= 1")
        object.__setattr__(self, "n_authors", int(self.n_authors))


@dataclass(frozen=True)
class AuthorMetrics:
    h: int
    g: int
    e: float
    h_contemporary: int
    awcr: float
    aw: float
    h_individual: float
    h_m: float
    now_year: int

    def as_dict(self) -> dict:
        return asdict(self)


def _ranked(papers: Iterable[AuthorPaperView]) -> list[AuthorPaperView]:
    return sorted(papers, key=lambda p: rank_key(p.citations, p.year, p.paper_id))


def _h_of(values: Iterable[float]) -> int:
    """Largest n such that n of the values are >= n."""
    h = 0
    for n, v in enumerate(sorted(values, reverse=True), start=1):
        if v >= n:
            h = n
        else:
            break
    return h


def h_index(citations: Iterable[int]) -> int:
    """Hirsch index of a list of citation counts."""
    return _h_of(citations)


def g_index(citations: Iterable[int]) -> int:
    """Largest g whose top-g papers hold at least g**2 citations together.

    g is capped at the number of papers.
    """
    total = 0
    g = 0
    for n, c in enumerate(sorted(citations, reverse=True), start=1):
        total += c
        if total >= n * n:
            g = n
    return g


def e_index(citations: Iterable[int]) -> float:
    cs = sorted(citations, reverse=True)
    h = _h_of(cs)
    return math.sqrt(sum(cs[:h]) - h * h)


def contemporary_h(
    papers: Sequence[AuthorPaperView],
    now_year: int,
    gamma: float = CONTEMPORARY_GAMMA,
    delta: float = CONTEMPORARY_DELTA,
) -> int:
    """h-index over age-discounted scores ``gamma * age**-delta * citations``.

    Scores are not rounded before thresholding.
    """
    if gamma <= 0 or delta < 0:
        raise ValueError("need gamma > 0 and delta >= 0")
    scores = [gamma * age(p.year, now_year) ** (-delta) * p.citations for p in papers]
    return _h_of(scores)


def awcr_aw(papers: Sequence[AuthorPaperView], now_year: int) -> tuple[float, float]:
    """Age-weighted citation rate and its square root (the AW-index)."""
    awcr = math.fsum(p.citations / age(p.year, now_year) for p in papers)
    return awcr, math.sqrt(awcr)


def individual_h(papers: Sequence[AuthorPaperView]) -> float:
    """h divided by the mean author count of the h-core papers."""
    ranked = _ranked(papers)
    h = _h_of(p.citations for p in ranked)
    if h == 0:
        return 0.0
    mean_authors = sum(p.n_authors for p in ranked[:h]) / h
    return h / mean_authors


def hm_index(papers: Sequence[AuthorPaperView], floor: bool = False) -> float:
    """Multi-authored h: h-type threshold on fractional effective ranks.

    Each paper advances the effective rank by ``1 / n_authors``; the result
    is the largest effective rank still covered by that paper's citations.
    With ``floor=True`` the result is rounded down to an integer.
    """
    # exact rationals: float sums of 1/n drift past integer citation counts
    r_eff = Fraction(0)
    best = Fraction(0)
    for p in _ranked(papers):
        r_eff += Fraction(1, p.n_authors)
        if p.citations >= r_eff:
            best = r_eff
    return float(math.floor(best)) if floor else float(best)


def author_views(corpus: Corpus, author: str) -> list[AuthorPaperView]:
    return [
        AuthorPaperView(citations=c, year=p.year, n_authors=len(set(p.author_ids)), paper_id=p.id)
        for p, c in author_papers(corpus, author)
    ]


def metrics_from_views(
    views: Sequence[AuthorPaperView],
    now_year: int,
    gamma: float = CONTEMPORARY_GAMMA,
    delta: float = CONTEMPORARY_DELTA,
) -> AuthorMetrics:
    cites = [v.citations for v in views]
    awcr, aw = awcr_aw(views, now_year)
    return AuthorMetrics(
        h=h_index(cites),
        g=g_index(cites),
        e=e_index(cites),
        h_contemporary=contemporary_h(views, now_year, gamma, delta),
        awcr=awcr,
        aw=aw,
        h_individual=individual_h(views),
        h_m=hm_index(views),
        now_year=now_year,
    )


def author_report(
    corpus: Corpus,
    author: str,
    now_year: int,
    gamma: float = CONTEMPORARY_GAMMA,
    delta: float = CONTEMPORARY_DELTA,
) -> AuthorMetrics:
    """All author indices for ``author`` as of ``now_year``."""
    return metrics_from_views(author_views(corpus, author), now_year, gamma, delta)
