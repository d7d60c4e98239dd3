"""Topic- and field-level indices: h_b with m-number, co-citation, h_f."""

from __future__ import annotations

from collections import Counter
from dataclasses import asdict, dataclass
from itertools import combinations
from typing import Iterable

from .author_metrics import h_index
from .corpus import Corpus, age
from .errors import CitationFree, EmptyField, PairLimitExceeded, SamePaper, UnknownField, UnknownTopic

MAX_PAIRS = 10**7


@dataclass(frozen=True)
class TopicMetrics:
    topic: str
    h_b: int
    n_years: int
    m_number: float

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class FieldConstants:
    field_id: str
    c0: float
    r0: float

    def __post_init__(self):
        if self.c0 <= 0 or self.r0 <= 0:
            raise ValueError("field constants must be positive")


def hb_index(corpus: Corpus, topic: str, now_year: int) -> TopicMetrics:
    """h-index of all papers tagged ``topic`` and its growth rate per year.

    Citations from outside the topic count too.
    """
    pids = corpus.papers_with_tag(topic)
    if not pids:
        raise UnknownTopic(topic)
    hb = h_index(len(corpus.cited_by[p]) for p in pids)
    n = age(min(corpus.papers[p].year for p in pids), now_year)
    return TopicMetrics(topic=topic.lower(), h_b=hb, n_years=n, m_number=hb / n)


def co_citation_count(corpus: Corpus, a: str, b: str) -> int:
    """Number of papers whose reference list holds both ``a`` and ``b``."""
    if a == b:
        raise SamePaper(f"co-citation needs two different papers, got {a!r} twice")
    corpus.paper(a)
    corpus.paper(b)
    return len(set(corpus.cited_by[a]) & set(corpus.cited_by[b]))


def top_cocited_pairs(corpus: Corpus, k: int, max_pairs: int = MAX_PAIRS) -> list[tuple[tuple[str, str], int]]:
    """The ``k`` most co-cited unordered pairs, ties broken by pair ids.

    Only references resolving inside the corpus are paired.  Raises
    :class:`PairLimitExceeded` when the reference lists would generate more
    than ``max_pairs`` pairs.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    lists = [sorted(r for r in p.references if r in corpus.papers) for p in corpus.papers.values()]
    n_pairs = sum(len(refs) * (len(refs) - 1) // 2 for refs in lists)
    if n_pairs > max_pairs:
        raise PairLimitExceeded(f"{n_pairs} co-citation pairs exceed the cap of {max_pairs}")
    counts = Counter()
    for refs in lists:
        counts.update(combinations(refs, 2))
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return ranked[:k]


def field_papers(corpus: Corpus, field: str) -> list[str]:
    pids = [pid for pid, p in sorted(corpus.papers.items()) if corpus.field_of(p) == field]
    if not pids and not any(j.field_id == field for j in corpus.journals.values()):
        raise UnknownField(field)
    return pids


def field_constants(corpus: Corpus, field: str) -> FieldConstants:
    """Mean citations per paper and mean papers per author within ``field``."""
    pids = field_papers(corpus, field)
    if not pids:
        raise EmptyField(f"field {field!r} has no papers")
    c0 = sum(len(corpus.cited_by[p]) for p in pids) / len(pids)
    if c0 == 0:
        raise CitationFree(f"field {field!r} has no citations")
    per_author = Counter(a for p in pids for a in set(corpus.papers[p].author_ids))
    r0 = sum(per_author.values()) / len(per_author)
    return FieldConstants(field_id=field, c0=c0, r0=r0)


def hf_index(citations: Iterable[float], constants: FieldConstants) -> float:
    """Field-normalized h: crossing of rescaled citations and rescaled ranks.

    Citations are divided by ``c0`` and ranks by ``r0``; the result is
    ``max_r min(c_r / c0, r / r0)`` over the descending citation sequence.
    """
    best = 0.0
    for r, c in enumerate(sorted(citations, reverse=True), start=1):
        best = max(best, min(c / constants.c0, r / constants.r0))
    return best
