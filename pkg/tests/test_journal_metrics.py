import itertools
import math
import random

import numpy as np
import pytest

import oracles
from conftest import paper, random_corpus
from scimetrics.corpus import Corpus, JournalRecord
from scimetrics.errors import (
    DegenerateMatrix,
    KeyMismatch,
    NoCitations,
    UnknownField,
    UnknownJournal,
    ZeroDenominatorWarning,
)
from scimetrics.journal_metrics import (
    JournalFlowMatrix,
    aggregate_impact_factor,
    article_influence,
    build_flow_matrix,
    cited_half_life,
    citations_by_age,
    eigenfactor,
    half_life_from_ages,
    immediacy,
    jif,
    journal_year_stats,
    power_iterate,
    transition_matrix,
)

_ids = itertools.count()


def citers(targets, n, year, journal="X"):
    """``n`` fresh papers from ``year`` citing every id in ``targets``."""
    return [paper(f"c{next(_ids):05d}", year, refs=tuple(targets), journal=journal) for _ in range(n)]


def spread(targets, n, year, journal="X"):
    """``n`` citations from ``year`` spread round-robin over ``targets``."""
    return [paper(f"c{next(_ids):05d}", year, refs=(targets[k % len(targets)],), journal=journal) for k in range(n)]


def journals(*specs):
    return [JournalRecord(j, j, f) for j, f in specs]


@pytest.fixture
def jif_corpus():
    js = [f"J{i}" for i in range(10)]
    papers = [paper(p, 2007 + i % 2, journal="J") for i, p in enumerate(js)]
    papers += [paper("J_old", 2006, journal="J")]
    papers += spread(js, 25, 2009)
    papers += spread(js, 7, 2008)          # wrong census year
    papers += citers(["J_old"], 4, 2009)  # outside the window
    return Corpus.build(papers, journals=journals(("J", "F"), ("X", "G")))


def test_jif_definitional_arithmetic(jif_corpus):
    assert jif(jif_corpus, "J", 2009) == 2.5


def test_jif_matches_counting_oracle(jif_corpus):
    c = jif_corpus
    window = [p for p in c.papers.values() if p.journal_id == "J" and 2007 <= p.year <= 2008]
    cites = sum(1 for q in c.papers.values() if q.year == 2009 for p in window if p.id in q.references)
    assert jif(c, "J", 2009) == cites / len(window)


def test_jif_empty_window_warns():
    c = Corpus.build([paper("a", 2000, journal="J")], journals=journals(("J", "F")))
    with pytest.warns(ZeroDenominatorWarning):
        assert jif(c, "J", 2009) == 0
    with pytest.raises(UnknownJournal):
        jif(c, "nope", 2009)


def test_jif_invariant_under_relabeling(jif_corpus):
    mapping = {pid: f"z{k}" for k, pid in enumerate(sorted(jif_corpus.papers))}
    relabeled = Corpus.build(
        [paper(mapping[p.id], p.year, refs=tuple(mapping[r] for r in p.references), journal=p.journal_id)
         for p in jif_corpus.papers.values()],
        journals=jif_corpus.journals.values())
    assert jif(relabeled, "J", 2009) == jif(jif_corpus, "J", 2009)


def test_immediacy():
    js = [f"J{i}" for i in range(5)]
    papers = [paper(p, 2009, journal="J") for p in js] + spread(js, 10, 2009) + spread(js, 3, 2010)
    c = Corpus.build(papers, journals=journals(("J", "F")))
    assert immediacy(c, "J", 2009) == 2.0
    with pytest.warns(ZeroDenominatorWarning):
        assert immediacy(c, "J", 2010) == 0.0
    c2 = Corpus.build([paper(p, 2009, journal="J") for p in js], journals=journals(("J", "F")))
    assert immediacy(c2, "J", 2009) == 0.0
    stats = journal_year_stats(c, "J", 2009)
    assert stats.articles_published == 5
    assert stats.citations_received_by_year == {2009: 10, 2010: 3}


def half_life_corpus(counts_by_age, ref_year=2005):
    papers = []
    for age_, n in counts_by_age.items():
        pid = f"H{age_}"
        papers.append(paper(pid, ref_year - age_ + 1, journal="J"))
        papers += citers([pid], n, ref_year)
    return Corpus.build(papers, journals=journals(("J", "F"), ("X", "F")))


def test_half_life_worked_example():
    # 2001-2005 (ages 1..5) hold exactly half of the 2005 citations
    c = half_life_corpus({1: 1, 2: 2, 3: 3, 4: 2, 5: 2, 6: 4, 7: 3, 8: 3})
    assert sum(v for a, v in citations_by_age(c, "J", 2005).items() if a <= 5) == 10
    assert cited_half_life(c, "J", 2005) == pytest.approx(5.0, abs=1e-9)


def test_half_life_all_same_year():
    assert cited_half_life(half_life_corpus({1: 7}), "J", 2005) == 1.0


def test_half_life_exact_boundary_and_interpolation():
    assert half_life_from_ages({1: 25, 2: 25, 3: 50}) == 2.0
    # 30/30/40: 50 % falls 2/3 of the way through the second year
    assert half_life_from_ages({1: 30, 2: 30, 3: 40}) == pytest.approx(5 / 3, abs=1e-12)


def test_half_life_no_citations():
    c = Corpus.build([paper("a", 2000, journal="J")], journals=journals(("J", "F")))
    with pytest.raises(NoCitations):
        cited_half_life(c, "J", 2005)


def test_half_life_bracketing_property():
    rng = random.Random(5)
    for _ in range(500):
        by_age = {a: rng.randint(0, 9) for a in range(1, rng.randint(2, 12))}
        if not sum(by_age.values()):
            continue
        k = half_life_from_ages(by_age)
        total = sum(by_age.values())

        def cum(m):
            return sum(v for a, v in by_age.items() if a <= m)
        assert 2 * cum(math.ceil(k)) >= total
        if k > 1 and k != int(k):
            assert 2 * cum(math.floor(k)) < total


def test_aggregate_impact_factor():
    a = [paper(f"A{i}", 2008, journal="JA") for i in range(10)]
    b = [paper(f"B{i}", 2007, journal="JB") for i in range(10)]
    papers = a + b + spread([p.id for p in a], 25, 2009) + spread([p.id for p in b], 15, 2009)
    js = journals(("JA", "F"), ("JB", "F"), ("X", "G"))
    c = Corpus.build(papers, journals=js)
    assert aggregate_impact_factor(c, "F", 2009) == 2.0
    single = Corpus.build(a + spread([p.id for p in a], 25, 2009), journals=js)
    assert aggregate_impact_factor(single, "F", 2009) == jif(single, "JA", 2009)
    with pytest.raises(UnknownField):
        aggregate_impact_factor(c, "nope", 2009)
    with pytest.warns(ZeroDenominatorWarning):
        assert aggregate_impact_factor(c, "F", 2020) == 0


def flow(m, fractions=None):
    m = np.asarray(m, dtype=float)
    n = len(m)
    fr = np.full(n, 1 / n) if fractions is None else np.asarray(fractions, dtype=float)
    return JournalFlowMatrix([f"J{i}" for i in range(n)], m, fr)


def test_eigenfactor_symmetric():
    ef = eigenfactor(flow([[0, 7], [7, 0]]))
    assert ef["J0"] == pytest.approx(50, abs=1e-9)
    assert ef["J1"] == pytest.approx(50, abs=1e-9)


def test_eigenfactor_degenerate():
    with pytest.raises(DegenerateMatrix):
        eigenfactor(flow(np.zeros((3, 3))))
    with pytest.raises(DegenerateMatrix):
        eigenfactor(flow(np.diag([4.0, 5.0])))  # self-citations only


def test_eigenfactor_asymmetric_matches_dense_oracle():
    m = [[0, 5, 1], [2, 0, 0], [0, 0, 0]]  # journal 2 cites nobody
    fr = [0.5, 0.3, 0.2]
    ef = eigenfactor(flow(m, fr))
    expected = oracles.eigenfactor_dense(m, fr)
    np.testing.assert_allclose([ef[f"J{i}"] for i in range(3)], expected, atol=1e-9)


def test_eigenfactor_random_vs_oracle_scale_and_residuals():
    rng = np.random.default_rng(0)
    for _ in range(50):
        n = int(rng.integers(2, 8))
        m = rng.integers(0, 6, size=(n, n)) * (rng.random((n, n)) < 0.6)
        if (m * (1 - np.eye(n))).sum() == 0:
            continue
        fr = rng.random(n) + 0.05
        fr /= fr.sum()
        ef = eigenfactor(flow(m, fr))
        vals = np.array([ef[f"J{i}"] for i in range(n)])
        assert vals.min() >= 0
        assert vals.sum() == pytest.approx(100, abs=1e-9)
        np.testing.assert_allclose(vals, oracles.eigenfactor_dense(m, fr), atol=1e-8)
        doubled = eigenfactor(flow(2 * m, fr))
        np.testing.assert_allclose([doubled[f"J{i}"] for i in range(n)], vals, atol=1e-9)
        h, dangling = transition_matrix(m)
        _, residuals = power_iterate(h, dangling, fr, 0.85, 1e-12, 10_000)
        assert all(b <= a + 1e-15 for a, b in zip(residuals[1:], residuals[2:]))


def test_build_flow_matrix_matches_edge_scan():
    c = random_corpus(21, n_papers=120, n_journals=5)
    fm = build_flow_matrix(c, 2010)
    idx = {j: i for i, j in enumerate(fm.journal_ids)}
    brute = np.zeros_like(fm.matrix)
    for p in c.papers.values():
        if p.year != 2010 or p.journal_id is None:
            continue
        for r in p.references:
            q = c.papers[r]
            if q.journal_id is not None and 2005 <= q.year <= 2009 and q.journal_id != p.journal_id:
                brute[idx[p.journal_id], idx[q.journal_id]] += 1
    np.testing.assert_array_equal(fm.matrix, brute)
    assert np.all(np.diag(fm.matrix) == 0)
    counts = [sum(1 for p in c.papers.values() if p.journal_id == j and 2005 <= p.year <= 2009)
              for j in fm.journal_ids]
    np.testing.assert_allclose(fm.article_fractions, np.array(counts) / sum(counts))


def test_flow_matrix_no_cross_citations():
    papers = [paper("a", 2006, journal="J1"), paper("b", 2010, journal="J1", refs=("a",)),
              paper("c", 2006, journal="J2")]
    fm = build_flow_matrix(Corpus.build(papers, journals=journals(("J1", "F"), ("J2", "F"))), 2010)
    assert fm.matrix.sum() == 0


def test_article_influence():
    ai = article_influence({"A": 50, "B": 50}, {"A": 10, "B": 40})
    assert ai == {"A": pytest.approx(250), "B": pytest.approx(62.5)}
    ai = article_influence({"A": 30, "B": 30}, {"A": 5, "B": 5})
    assert ai["A"] == ai["B"]
    assert article_influence({"A": 60, "B": 40}, {"A": 0, "B": 5})["A"] is None
    with pytest.raises(KeyMismatch):
        article_influence({"A": 1}, {"B": 1})


def test_article_influence_weighted_mean_is_total():
    c = random_corpus(8, n_papers=150, n_journals=6)
    fm = build_flow_matrix(c, 2010)
    ef = eigenfactor(fm)
    ai = article_influence(ef, fm.article_counts)
    total = sum(fm.article_counts.values())
    weighted = sum(ai[j] * fm.article_counts[j] / total for j in ai if ai[j] is not None)
    assert weighted == pytest.approx(100, abs=1e-6)
