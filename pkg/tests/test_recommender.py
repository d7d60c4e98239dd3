import itertools
import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import paper, random_corpus
from scimetrics.corpus import Corpus, DownloadEvent, load_corpus
from scimetrics.errors import UnknownPaper
from scimetrics.recommender import (
    Subscription,
    alert_match,
    alerts,
    coaccess_similarity,
    cosine,
    downloaders,
    jaccard,
    load_subscriptions,
    popularity,
    randomized_display,
    tag_similarity,
)

tag_sets = st.frozensets(st.sampled_from("abcdefgh"), max_size=6)


def test_tag_similarity_examples():
    c = Corpus.build([
        paper("p", tags=("a", "b", "c")),
        paper("same", tags=("c", "b", "a")),
        paper("some", tags=("a", "d", "e")),
        paper("none", tags=("x",)),
    ])
    assert tag_similarity(c, "p", 10) == [("same", 1.0), ("some", pytest.approx(0.2))]
    assert tag_similarity(c, "p", 1) == [("same", 1.0)]
    with pytest.raises(UnknownPaper):
        tag_similarity(c, "nope", 3)
    with pytest.raises(ValueError):
        tag_similarity(c, "p", 0)


@settings(max_examples=300, deadline=None)
@given(tag_sets, tag_sets)
def test_jaccard_properties(a, b):
    assert jaccard(a, b) == jaccard(b, a)
    assert 0 <= jaccard(a, b) <= 1
    if a:
        assert jaccard(a, a) == 1


def dl(pairs):
    return [DownloadEvent(u, p, t) for t, (u, p) in enumerate(pairs)]


def test_coaccess_examples():
    papers = [paper(x) for x in ("a", "b", "c", "d", "lonely")]
    events = dl([("u1", "a"), ("u2", "a"), ("u1", "b"), ("u2", "b"), ("u3", "b"), ("u4", "b"),
                 ("u1", "c"), ("u2", "c"), ("u1", "c"), ("u9", "d")])
    c = Corpus.build(papers, downloads=events)
    got = dict(coaccess_similarity(c, "a", 10))
    assert got["c"] == 1.0
    assert got["b"] == pytest.approx(2 / math.sqrt(8)) == pytest.approx(0.7071, abs=1e-4)
    assert "d" not in got and "a" not in got
    assert coaccess_similarity(c, "lonely", 5) == []
    assert downloaders(c)["c"] == frozenset({"u1", "u2"})
    assert popularity(c) == {"a": 2, "b": 4, "c": 2, "d": 1, "lonely": 0}


@settings(max_examples=300, deadline=None)
@given(tag_sets, tag_sets)
def test_cosine_properties(a, b):
    assert cosine(a, b) == cosine(b, a)
    assert 0 <= cosine(a, b) <= 1 + 1e-12
    if a:
        assert cosine(a, a) == pytest.approx(1.0)


@pytest.mark.parametrize("seed", range(10))
def test_coaccess_matches_matrix_oracle(seed):
    c = random_corpus(seed, n_papers=100, n_users=25)
    ids = sorted(c.papers)
    cos = oracles.cosine_brute(c.downloads, ids)
    users = downloaders(c)
    for i, p in enumerate(ids):
        got = dict(coaccess_similarity(c, p, len(ids), users))
        for j, q in enumerate(ids):
            if i == j:
                assert q not in got
            elif cos[i, j] > 0:
                assert got[q] == pytest.approx(cos[i, j], abs=1e-12)
            else:
                assert q not in got


def test_display_temperature_zero_and_permutation():
    items = [("b", 3), ("a", 3), ("c", 9), ("z", 0)]
    assert randomized_display(items, 0).item_ids == ("c", "a", "b", "z")
    for t in (0.01, 1, 100):
        order = randomized_display(items, t, seed=5)
        assert sorted(order.item_ids) == sorted(i for i, _ in items)
        assert order == randomized_display(items, t, seed=5)
    assert randomized_display([], 1.0, seed=1).item_ids == ()


def test_display_errors():
    with pytest.raises(ValueError):
        randomized_display([("a", 1)], -1)
    with pytest.raises(ValueError):
        randomized_display([("a", 0), ("b", 0)], 1.0)
    with pytest.raises(ValueError):
        randomized_display([("a", -1)], 1.0)


def sequential_probability(perm, weights):
    """Probability of ``perm`` under draw-without-replacement with ``weights``."""
    remaining = dict(weights)
    prob = 1.0
    for item in perm:
        prob *= remaining[item] / sum(remaining.values())
        del remaining[item]
    return prob


def test_display_monte_carlo():
    items = [("top", 8), ("x", 1), ("y", 1)]
    rng = np.random.default_rng(2024)
    n = 100_000
    perms = Counter(randomized_display(items, 1.0, rng).item_ids for _ in range(n))
    first = sum(v for p, v in perms.items() if p[0] == "top") / n
    assert abs(first - 0.8) <= 0.01
    for perm in itertools.permutations(["top", "x", "y"]):
        assert perms[perm] / n == pytest.approx(sequential_probability(perm, dict(items)), abs=0.01)


def test_display_temperature_controls_mixing():
    items = [("top", 8), ("x", 1), ("y", 1)]
    rng = np.random.default_rng(3)
    n = 20_000
    cold = sum(randomized_display(items, 0.05, rng).item_ids[0] == "top" for _ in range(n)) / n
    hot = sum(randomized_display(items, 1000, rng).item_ids[0] == "top" for _ in range(n)) / n
    assert cold > 0.999
    assert abs(hot - 1 / 3) < 0.02
    zero = [("a", 5), ("b", 0)]
    assert randomized_display(zero, 1.0, seed=0).item_ids == ("a", "b")


def test_alert_match():
    p = paper("p", authors=("auth1",), tags=("networks",))
    assert alert_match(Subscription("u", keywords=frozenset({"Networks"})), p)
    assert alert_match(Subscription("u", author_ids=frozenset({"auth1"})), p)
    assert not alert_match(Subscription("u", keywords=frozenset({"physics"})), p)
    with pytest.raises(ValueError):
        Subscription("u")


@settings(max_examples=300, deadline=None)
@given(tag_sets, tag_sets, tag_sets)
def test_alert_monotone(kw, extra, paper_tags):
    p = paper("p", tags=paper_tags)
    if not kw:
        return
    if alert_match(Subscription("u", keywords=kw), p):
        assert alert_match(Subscription("u", keywords=kw | extra, author_ids=frozenset({"q"})), p)


def test_alerts_on_reference_fixture(reference_dir):
    c = load_corpus([reference_dir])
    subs = load_subscriptions(reference_dir / "subscriptions.jsonl")
    pairs = alerts(subs, c.papers.values())
    brute = sorted((s.user_id, p.id) for s in subs for p in c.papers.values()
                   if (s.keywords & p.tags) or (s.author_ids & set(p.author_ids)))
    assert pairs == brute and pairs
