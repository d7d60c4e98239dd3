"""Journal-level indicators: impact factor, immediacy, cited half-life,
aggregate impact factor, Eigenfactor and Article Influence.

Citation years are the citing paper's publication year throughout.
"""

from __future__ import annotations

import logging
import warnings
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .corpus import Corpus, citations_in_year
from .errors import (
    DegenerateMatrix,
    KeyMismatch,
    NoCitations,
    NoConvergence,
    UnknownField,
    UnknownJournal,
    ZeroDenominatorWarning,
)

logger = logging.getLogger(__name__)

JIF_WINDOW = 2
EIGENFACTOR_WINDOW = 5
DAMPING = 0.85


@dataclass(frozen=True)
class JournalYearStats:
    journal_id: str
    year: int
    articles_published: int
    citations_received_by_year: dict[int, int] = field(default_factory=dict)


@dataclass
class JournalFlowMatrix:
    """Cross-journal citation counts for one census year.

    ``matrix[i, j]`` counts citations from journal ``i``'s census-year
    papers to journal ``j``'s papers from the preceding window.
    """

    journal_ids: list[str]
    matrix: np.ndarray
    article_fractions: np.ndarray
    article_counts: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=float)
        self.article_fractions = np.asarray(self.article_fractions, dtype=float)
        n = len(self.journal_ids)
        if self.matrix.shape != (n, n) or self.article_fractions.shape != (n,):
            raise ValueError("flow matrix dimensions do not match journal list")
        if (self.matrix < 0).any() or (self.article_fractions < 0).any():
            raise ValueError("flow matrix and article fractions must be nonnegative")
        if not np.isclose(self.article_fractions.sum(), 1.0, rtol=0, atol=1e-12):
            raise ValueError("article fractions must sum to 1")


def _check_journal(corpus: Corpus, journal: str) -> list[str]:
    pids = corpus.papers_in_journal(journal)
    if journal not in corpus.journals and not pids:
        raise UnknownJournal(journal)
    return pids


def _ratio(num: float, den: float, what: str) -> float:
    if den == 0:
        warnings.warn(f"{what}: no articles, reporting 0", ZeroDenominatorWarning, stacklevel=3)
        return 0.0
    return num / den


def _window_ratio(corpus: Corpus, pids: list[str], ref_year: int, first: int, last: int):
    in_window = [p for p in pids if first <= corpus.papers[p].year <= last]
    cites = sum(citations_in_year(corpus, p, ref_year) for p in in_window)
    return cites, len(in_window)


def jif(corpus: Corpus, journal: str, ref_year: int, window: int = JIF_WINDOW) -> float:
    """Impact factor: ref_year citations to the previous ``window`` years'
    papers, per paper."""
    if window < 1:
        raise ValueError("window must be >= 1")
    pids = _check_journal(corpus, journal)
    cites, n = _window_ratio(corpus, pids, ref_year, ref_year - window, ref_year - 1)
    return _ratio(cites, n, f"jif({journal}, {ref_year})")


def immediacy(corpus: Corpus, journal: str, year: int) -> float:
    pids = _check_journal(corpus, journal)
    cites, n = _window_ratio(corpus, pids, year, year, year)
    return _ratio(cites, n, f"immediacy({journal}, {year})")


def journal_year_stats(corpus: Corpus, journal: str, year: int) -> JournalYearStats:
    """Articles published by ``journal`` in ``year`` and their citations per citing year."""
    pids = [p for p in _check_journal(corpus, journal) if corpus.papers[p].year == year]
    by_year = Counter(corpus.papers[c].year for p in pids for c in corpus.cited_by[p])
    return JournalYearStats(journal, year, len(pids), dict(sorted(by_year.items())))


def citations_by_age(corpus: Corpus, journal: str, ref_year: int) -> dict[int, int]:
    """ref_year citations to ``journal`` bucketed by cited-paper age (1 = same year)."""
    pids = _check_journal(corpus, journal)
    out = Counter()
    for p in pids:
        y = corpus.papers[p].year
        if y <= ref_year:
            n = citations_in_year(corpus, p, ref_year)
            if n:
                out[ref_year - y + 1] += n
    return dict(sorted(out.items()))


def half_life_from_ages(by_age: dict[int, int]) -> float:
    """Median cited age with linear interpolation inside the crossing year.

    Returns 1.0 when the newest year alone holds half the citations.
    """
    total = sum(by_age.values())
    if total == 0:
        raise NoCitations("no citations to compute a half-life from")
    cum = 0
    for k in range(1, max(by_age) + 1):
        prev = cum
        cum += by_age.get(k, 0)
        if 2 * cum >= total:
            if k == 1:
                return 1.0
            return (k - 1) + (total - 2 * prev) / (2 * by_age[k])
    raise AssertionError("unreachable")


def cited_half_life(corpus: Corpus, journal: str, ref_year: int) -> float:
    by_age = citations_by_age(corpus, journal, ref_year)
    if not by_age:
        raise NoCitations(f"journal {journal!r} received no citations in {ref_year}")
    return half_life_from_ages(by_age)


def aggregate_impact_factor(corpus: Corpus, field: str, ref_year: int, window: int = JIF_WINDOW) -> float:
    """Impact factor of the pooled papers of every journal in ``field``."""
    journals = sorted(j.id for j in corpus.journals.values() if j.field_id == field)
    if not journals:
        raise UnknownField(field)
    pids = [p for j in journals for p in corpus.papers_in_journal(j)]
    cites, n = _window_ratio(corpus, pids, ref_year, ref_year - window, ref_year - 1)
    return _ratio(cites, n, f"aggregate_impact_factor({field}, {ref_year})")


def build_flow_matrix(
    corpus: Corpus, ref_year: int, window: int = EIGENFACTOR_WINDOW, strict: bool = False
) -> JournalFlowMatrix:
    """Self-citation-free journal citation flows for ``ref_year``."""
    if not corpus.journals:
        raise UnknownJournal("<no journals in corpus>")
    ids = sorted(corpus.journals)
    index = {j: i for i, j in enumerate(ids)}
    first, last = ref_year - window, ref_year - 1

    unresolved = set()

    def journal_index(p):
        if p.journal_id is None:
            return None
        if p.journal_id not in index:
            if strict:
                raise UnknownJournal(p.journal_id)
            unresolved.add(p.journal_id)
            return None
        return index[p.journal_id]

    n = len(ids)
    m = np.zeros((n, n))
    counts = np.zeros(n)
    for p in corpus.papers.values():
        j = journal_index(p)
        if j is not None and first <= p.year <= last:
            counts[j] += 1
    for p in corpus.papers.values():
        if p.year != ref_year:
            continue
        i = journal_index(p)
        if i is None:
            continue
        for r in p.references:
            q = corpus.papers.get(r)
            if q is None or not first <= q.year <= last:
                continue
            j = journal_index(q)
            if j is not None:
                m[i, j] += 1
    np.fill_diagonal(m, 0.0)
    if unresolved:
        warnings.warn(f"skipped papers of unknown journals {sorted(unresolved)}", UserWarning, stacklevel=2)

    if counts.sum() == 0:
        warnings.warn("no articles in the Eigenfactor window; using uniform article fractions",
                      ZeroDenominatorWarning, stacklevel=2)
        fractions = np.full(n, 1.0 / n)
    else:
        fractions = counts / counts.sum()
    return JournalFlowMatrix(ids, m, fractions, {j: int(c) for j, c in zip(ids, counts)})


def transition_matrix(flow: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Column-stochastic citing->cited transitions and the dangling mask.

    Column ``i`` holds journal ``i``'s outgoing citations normalized to 1;
    journals that cite nobody get an all-zero column and ``True`` in the mask.
    """
    z = np.array(flow, dtype=float)
    np.fill_diagonal(z, 0.0)
    out = z.sum(axis=1)
    dangling = out == 0
    h = np.zeros_like(z)
    h[~dangling] = z[~dangling] / out[~dangling, None]
    return h.T, dangling


def power_iterate(h, dangling, teleport, damping=DAMPING, tol=1e-12, max_iter=10_000):
    """Stationary vector of the damped chain; returns (vector, residual history)."""
    p = teleport.copy()
    residuals = []
    for _ in range(max_iter):
        nxt = damping * (h @ p + teleport * p[dangling].sum()) + (1 - damping) * teleport
        res = float(np.abs(nxt - p).sum())
        residuals.append(res)
        p = nxt
        if res < tol:
            return p / p.sum(), residuals
    raise NoConvergence(max_iter, residuals[-1] if residuals else None)


def eigenfactor(
    flow: JournalFlowMatrix,
    damping: float = DAMPING,
    tol: float = 1e-12,
    max_iter: int = 10_000,
) -> dict[str, float]:
    """Eigenfactor scores (summing to 100) from a journal flow matrix.

    The citing journal's outgoing citations become transition weights,
    journals that cite nobody teleport by article fraction, and the score
    of a journal is its share of citation flow under the stationary vector.
    """
    if not 0 < damping < 1:
        raise ValueError("damping must lie in (0, 1)")
    h, dangling = transition_matrix(flow.matrix)
    if h.sum() == 0:
        raise DegenerateMatrix("flow matrix has no off-diagonal citations")
    p, residuals = power_iterate(h, dangling, flow.article_fractions, damping, tol, max_iter)
    logger.debug("eigenfactor converged in %d iterations", len(residuals))
    inflow = h @ p
    scores = 100.0 * inflow / inflow.sum()
    return dict(zip(flow.journal_ids, scores.tolist()))


def article_influence(ef_scores: dict[str, float], article_counts: dict[str, int]) -> dict[str, float | None]:
    """Eigenfactor per unit of article share.

    Journals with zero articles get ``None`` (undefined) rather than a number.
    """
    if set(ef_scores) != set(article_counts):
        raise KeyMismatch("Eigenfactor and article-count journals differ")
    total = sum(article_counts.values())
    if total <= 0:
        raise ValueError("total article count must be positive")
    return {
        j: (ef_scores[j] / (article_counts[j] / total) if article_counts[j] > 0 else None)
        for j in sorted(ef_scores)
    }


def journal_report(corpus: Corpus, journal: str, ref_year: int,
                   jif_window: int = JIF_WINDOW, ef_window: int = EIGENFACTOR_WINDOW,
                   damping: float = DAMPING, tol: float = 1e-12, max_iter: int = 10_000) -> dict:
    """Every journal indicator for one census year, with warning flags.

    Indicators that are undefined for the data are reported as ``None``.
    """
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        report = {
            "journal_id": journal,
            "ref_year": ref_year,
            "jif": jif(corpus, journal, ref_year, jif_window),
            "immediacy": immediacy(corpus, journal, ref_year),
        }
        try:
            report["cited_half_life"] = cited_half_life(corpus, journal, ref_year)
        except NoCitations:
            report["cited_half_life"] = None
        report["eigenfactor"] = report["article_influence"] = None
        if journal in corpus.journals:
            flow = build_flow_matrix(corpus, ref_year, ef_window)
            try:
                ef = eigenfactor(flow, damping, tol, max_iter)
            except DegenerateMatrix:
                pass
            else:
                report["eigenfactor"] = ef[journal]
                if sum(flow.article_counts.values()) > 0:
                    report["article_influence"] = article_influence(ef, flow.article_counts)[journal]
    report["warnings"] = sorted({str(w.message) for w in caught})
    return report
