"""Tag- and co-download-based recommendations, subscription alerts, and
popularity-aware randomized display ordering."""

from __future__ import annotations

import json
import math
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .corpus import Corpus, PaperRecord
from .errors import ParseError

ZERO_POPULARITY_WEIGHT = 1e-6


@dataclass(frozen=True)
class Subscription:
    user_id: str
    keywords: frozenset[str] = frozenset()
    author_ids: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "keywords", frozenset(k.lower() for k in self.keywords))
        object.__setattr__(self, "author_ids", frozenset(self.author_ids))
        if not self.keywords and not self.author_ids:
            raise ValueError("a subscription needs at least one keyword or author")


@dataclass(frozen=True)
class DisplayOrder:
    item_ids: tuple[str, ...]
    seed: int | None
    temperature: float


def jaccard(a: frozenset, b: frozenset) -> float:
    union = len(a | b)
    return len(a & b) / union if union else 0.0


def _top_k(scored: Iterable[tuple[str, float]], k: int) -> list[tuple[str, float]]:
    if k < 1:
        raise ValueError("k must be >= 1")
    ranked = sorted(((p, s) for p, s in scored if s > 0), key=lambda t: (-t[1], t[0]))
    return ranked[:k]


def tag_similarity(corpus: Corpus, paper: str, k: int) -> list[tuple[str, float]]:
    """Other papers ranked by Jaccard overlap of tag sets."""
    tags = corpus.paper(paper).tags
    candidates = {q for t in tags for q in corpus.papers_with_tag(t)} - {paper}
    return _top_k(((q, jaccard(tags, corpus.papers[q].tags)) for q in candidates), k)


def downloaders(corpus: Corpus) -> dict[str, frozenset[str]]:
    """Distinct users who downloaded each paper; repeat downloads count once."""
    users = defaultdict(set)
    for ev in corpus.downloads:
        users[ev.paper_id].add(ev.user_id)
    return {p: frozenset(u) for p, u in users.items()}


def cosine(a: frozenset, b: frozenset) -> float:
    if not a or not b:
        return 0.0
    return len(a & b) / math.sqrt(len(a) * len(b))


def coaccess_similarity(corpus: Corpus, paper: str, k: int,
                        users: dict[str, frozenset[str]] | None = None) -> list[tuple[str, float]]:
    """Other papers ranked by cosine similarity of their downloader sets.

    Papers nobody downloaded get an empty list.
    """
    corpus.paper(paper)
    users = downloaders(corpus) if users is None else users
    mine = users.get(paper, frozenset())
    if not mine:
        return _top_k((), k)
    return _top_k(((q, cosine(mine, u)) for q, u in users.items() if q != paper), k)


def popularity(corpus: Corpus) -> dict[str, int]:
    """Distinct-downloader count for every paper in the corpus."""
    users = downloaders(corpus)
    return {p: len(users.get(p, ())) for p in sorted(corpus.papers)}


def randomized_display(
    items: Sequence[tuple[str, float]],
    temperature: float,
    seed: int | np.random.Generator | None = None,
    zero_weight: float = ZERO_POPULARITY_WEIGHT,
) -> DisplayOrder:
    """Order items for display, mixing popularity with chance.

    Temperature 0 sorts by popularity (ties by id).  Otherwise items are
    drawn one at a time without replacement with probability proportional
    to ``popularity ** (1 / temperature)``; zero-popularity items get weight
    ``zero_weight``.  High temperatures approach a uniform shuffle.  The
    draw uses Gumbel keys on log-weights, which is equivalent to sequential
    sampling and avoids overflow at small temperatures.
    """
    if temperature < 0:
        raise ValueError("temperature must be >= 0")
    if any(p < 0 for _, p in items):
        raise ValueError("popularity must be >= 0")
    seed_val = seed if isinstance(seed, (int, type(None))) else None
    if temperature == 0:
        order = sorted(items, key=lambda t: (-t[1], t[0]))
        return DisplayOrder(tuple(i for i, _ in order), seed_val, 0.0)
    pops = np.array([p for _, p in items], dtype=float)
    if len(items) and not pops.any():
        raise ValueError("popularity values are all zero")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    with np.errstate(divide="ignore"):
        logw = np.where(pops > 0, np.log(pops) / temperature, math.log(zero_weight))
    keys = logw + rng.gumbel(size=len(items))
    order = np.argsort(-keys, kind="stable")
    return DisplayOrder(tuple(items[i][0] for i in order), seed_val, float(temperature))


def alert_match(sub: Subscription, paper: PaperRecord) -> bool:
    tags = {t.lower() for t in paper.tags}
    return bool(sub.keywords & tags) or bool(sub.author_ids & set(paper.author_ids))


def load_subscriptions(path: str | Path) -> list[Subscription]:
    """Read subscriptions.jsonl (``user_id``, ``keywords``, ``author_ids``)."""
    subs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                d = json.loads(line)
                subs.append(Subscription(d["user_id"], frozenset(d.get("keywords", ())),
                                         frozenset(d.get("author_ids", ()))))
            except (KeyError, TypeError, ValueError) as exc:
                raise ParseError(path, lineno, str(exc)) from None
    return subs


def alerts(subs: Iterable[Subscription], papers: Iterable[PaperRecord]) -> list[tuple[str, str]]:
    """(user, paper) pairs for every subscription a paper matches."""
    papers = list(papers)
    return sorted((s.user_id, p.id) for s in subs for p in papers if alert_match(s, p))
