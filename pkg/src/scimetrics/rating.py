"""Multi-dimensional ratings with reputation-weighted aggregation.

A :class:`RatingStore` keeps the latest rating of every (user, item) pair,
charges one point of a monthly budget for each newly rated item, and holds
rater reputations in [0, 1] together with temporary sanctions.  Aggregates
weight each rating by its rater's reputation; sanctioned raters weigh 0.

Reputations come from a damped fixed-point iteration: a user's reputation
is the rescaled mean score of the items they authored, where those scores
are themselves averaged with reputation weights.
"""

from __future__ import annotations

import json
import logging
import math
import time
import warnings
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .errors import (
    BudgetExhausted,
    InvalidScore,
    NoConvergence,
    ParseError,
    SanctionedUserWarning,
    UnknownUser,
)

logger = logging.getLogger(__name__)

DEFAULT_DIMENSIONS = ("readability", "importance", "novelty", "controversy")
INITIAL_REPUTATION = 0.5


@dataclass(frozen=True)
class RatingConfig:
    scale_min: int = 1
    scale_max: int = 5
    dimensions: tuple[str, ...] = DEFAULT_DIMENSIONS
    monthly_budget: int = 30
    saturation_count: int = 10
    # venue -> dimension -> weight; venues not listed use equal weights
    venue_weights: Mapping[str, Mapping[str, float]] = field(default_factory=dict)

    def __post_init__(self):
        if self.scale_max <= self.scale_min:
            raise ValueError("scale_max must exceed scale_min")
        if self.monthly_budget < 0 or self.saturation_count < 1:
            raise ValueError("invalid budget or saturation count")
        if not self.dimensions:
            raise ValueError("at least one rating dimension is required")

    def weights_for(self, venue: str | None = None) -> dict[str, float]:
        if venue is not None and venue in self.venue_weights:
            return dict(self.venue_weights[venue])
        return {d: 1.0 for d in self.dimensions}

    def rescale(self, score: float) -> float:
        return (score - self.scale_min) / (self.scale_max - self.scale_min)


@dataclass(frozen=True)
class RatingEvent:
    user_id: str
    item_id: str
    scores: Mapping[str, int]
    timestamp: int

    def to_dict(self) -> dict:
        return {"user_id": self.user_id, "item_id": self.item_id,
                "scores": dict(sorted(self.scores.items())), "timestamp": self.timestamp}


def month_of(timestamp: int) -> str:
    """Calendar month (UTC) of an epoch timestamp, as ``YYYY-MM``."""
    return datetime.fromtimestamp(timestamp, tz=timezone.utc).strftime("%Y-%m")


@dataclass
class RatingStore:
    """Mutable rating ledger.  Single writer; readers should work on a
    consistent snapshot."""

    config: RatingConfig = field(default_factory=RatingConfig)
    events: dict[tuple[str, str], RatingEvent] = field(default_factory=dict)
    budgets: dict[tuple[str, str], int] = field(default_factory=dict)
    reputations: dict[str, float] = field(default_factory=dict)
    sanctions: dict[str, int] = field(default_factory=dict)
    log: list[dict] = field(default_factory=list)

    @property
    def users(self) -> set[str]:
        return set(self.reputations)

    def register(self, user: str, reputation: float = INITIAL_REPUTATION) -> None:
        if not 0.0 <= reputation <= 1.0:
            raise ValueError("reputation must lie in [0, 1]")
        self.reputations.setdefault(user, reputation)

    def is_sanctioned(self, user: str, now: int) -> bool:
        return now < self.sanctions.get(user, -math.inf)

    def weight(self, user: str, now: int) -> float:
        """Aggregation weight of ``user`` at time ``now``."""
        if self.is_sanctioned(user, now):
            return 0.0
        return self.reputations.get(user, INITIAL_REPUTATION)

    def spent(self, user: str, month: str) -> int:
        return self.budgets.get((user, month), 0)

    def item_events(self, item: str) -> list[RatingEvent]:
        return sorted((e for (_, i), e in self.events.items() if i == item), key=lambda e: e.user_id)

    def items(self) -> list[str]:
        return sorted({i for _, i in self.events})

    def latest_timestamp(self) -> int:
        return max((e.timestamp for e in self.events.values()), default=0)

    # -- persistence ----------------------------------------------------------

    def snapshot(self) -> dict:
        """JSON-ready snapshot of the whole store."""
        return {
            "config": {
                "scale_min": self.config.scale_min,
                "scale_max": self.config.scale_max,
                "dimensions": list(self.config.dimensions),
                "monthly_budget": self.config.monthly_budget,
                "saturation_count": self.config.saturation_count,
                "venue_weights": {v: dict(w) for v, w in sorted(self.config.venue_weights.items())},
            },
            "events": [e.to_dict() for _, e in sorted(self.events.items())],
            "budgets": [{"user_id": u, "month": m, "spent": n} for (u, m), n in sorted(self.budgets.items())],
            "reputations": dict(sorted(self.reputations.items())),
            "sanctions": dict(sorted(self.sanctions.items())),
        }

    def save_log(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for entry in self.log:
                fh.write(json.dumps(entry, sort_keys=True) + "\n")


def _validate(config: RatingConfig, event: RatingEvent) -> None:
    if not event.scores:
        raise InvalidScore("a rating needs at least one dimension")
    for dim, s in event.scores.items():
        if dim not in config.dimensions:
            raise InvalidScore(f"unknown rating dimension {dim!r}")
        if isinstance(s, bool) or not isinstance(s, int) or not config.scale_min <= s <= config.scale_max:
            raise InvalidScore(f"{dim} score {s!r} outside {config.scale_min}..{config.scale_max}")


def submit_rating(store: RatingStore, event: RatingEvent) -> RatingStore:
    """Store ``event``, replacing any earlier rating of the same item.

    Only the first rating of an item costs a budget point (in the month of
    that rating); corrections are free.  Unknown users are registered on
    their first rating.
    """
    _validate(store.config, event)
    key = (event.user_id, event.item_id)
    if key not in store.events:
        month = month_of(event.timestamp)
        if store.spent(event.user_id, month) >= store.config.monthly_budget:
            raise BudgetExhausted(event.user_id, month)
        store.budgets[(event.user_id, month)] = store.spent(event.user_id, month) + 1
    store.register(event.user_id)
    store.events[key] = event
    store.log.append({"kind": "rating", **event.to_dict()})
    if store.is_sanctioned(event.user_id, event.timestamp):
        warnings.warn(f"user {event.user_id!r} is sanctioned; rating stored with weight 0",
                      SanctionedUserWarning, stacklevel=2)
    return store


def apply_sanction(store: RatingStore, user: str, until: int) -> RatingStore:
    """Zero the user's aggregation weight until ``until``; the later end wins."""
    if user not in store.reputations:
        raise UnknownUser(user)
    store.sanctions[user] = max(until, store.sanctions.get(user, until))
    store.log.append({"kind": "sanction", "user_id": user, "until": until})
    return store


def replay_log(path: str | Path, config: RatingConfig | None = None) -> RatingStore:
    """Rebuild a store from a ratings.jsonl event log."""
    store = RatingStore(config=config or RatingConfig())
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                kind = rec.get("kind", "rating")
                if kind == "rating":
                    ev = RatingEvent(rec["user_id"], rec["item_id"], rec["scores"], int(rec["timestamp"]))
                    with warnings.catch_warnings():
                        warnings.simplefilter("ignore", SanctionedUserWarning)
                        submit_rating(store, ev)
                elif kind == "sanction":
                    apply_sanction(store, rec["user_id"], int(rec["until"]))
                elif kind == "register":
                    store.register(rec["user_id"], float(rec.get("reputation", INITIAL_REPUTATION)))
                    store.log.append(rec)
                else:
                    raise ValueError(f"unknown log entry kind {kind!r}")
            except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
                raise ParseError(path, lineno, str(exc)) from None
            except (BudgetExhausted, UnknownUser) as exc:
                raise ParseError(path, lineno, str(exc)) from None
    return store


# -- aggregation ----------------------------------------------------------------

@dataclass(frozen=True)
class DimensionAggregate:
    weighted_mean: float | None
    count: int
    std: float
    intensity: float


@dataclass(frozen=True)
class ItemAggregate:
    item_id: str
    per_dimension: dict[str, DimensionAggregate]
    overall: float | None

    def as_dict(self) -> dict:
        return {
            "item_id": self.item_id,
            "overall": self.overall,
            "per_dimension": {d: vars(a) for d, a in sorted(self.per_dimension.items())},
        }


def intensity(count: int, std: float, scale_min: int, scale_max: int, saturation_count: int = 10) -> float:
    """Display intensity in [0, 1]: grows with the number of ratings and
    fades with their spread (std relative to half the scale range)."""
    if count < 0 or std < 0:
        raise ValueError("count and std must be >= 0")
    if count == 0:
        return 0.0
    half_range = (scale_max - scale_min) / 2
    return min(1.0, count / saturation_count) * max(0.0, 1.0 - std / half_range)


def weighted_mean(values: Sequence[float], weights: Sequence[float]) -> float | None:
    total = math.fsum(weights)
    if total <= 0:
        return None
    return math.fsum(v * w for v, w in zip(values, weights)) / total


def combine(means: Mapping[str, float | None], venue_weights: Mapping[str, float]) -> float | None:
    """Venue-weighted combination of per-dimension means.

    Dimensions without a defined mean drop out and the remaining weights are
    renormalized.
    """
    pairs = [(means[d], w) for d, w in venue_weights.items() if w > 0 and means.get(d) is not None]
    if not pairs:
        return None
    return weighted_mean([m for m, _ in pairs], [w for _, w in pairs])


def _check_venue(venue_weights: Mapping[str, float]) -> None:
    if any(w < 0 for w in venue_weights.values()) or sum(venue_weights.values()) <= 0:
        raise ValueError("venue weights must be >= 0 with a positive sum")


def aggregate_item(
    store: RatingStore,
    item: str,
    venue_weights: Mapping[str, float] | None = None,
    now: int | None = None,
    reputations: Mapping[str, float] | None = None,
) -> ItemAggregate:
    """Reputation-weighted summary of every rating of ``item``.

    ``count`` and ``std`` (sample standard deviation) ignore the weights.
    A dimension whose raters all weigh zero reports ``weighted_mean=None``.
    Unknown items give an empty aggregate.  ``reputations`` overrides the
    store's reputations.
    """
    cfg = store.config
    vw = dict(venue_weights) if venue_weights is not None else cfg.weights_for()
    _check_venue(vw)
    now = int(time.time()) if now is None else now
    reps = store.reputations if reputations is None else reputations

    def w_of(user):
        if store.is_sanctioned(user, now):
            return 0.0
        return reps.get(user, INITIAL_REPUTATION)

    evs = store.item_events(item)
    per_dim = {}
    for dim in cfg.dimensions:
        rated = [(e.scores[dim], w_of(e.user_id)) for e in evs if dim in e.scores]
        vals = [v for v, _ in rated]
        n = len(vals)
        std = float(np.std(vals, ddof=1)) if n > 1 else 0.0
        per_dim[dim] = DimensionAggregate(
            weighted_mean=weighted_mean(vals, [w for _, w in rated]) if n else None,
            count=n,
            std=std,
            intensity=intensity(n, std, cfg.scale_min, cfg.scale_max, cfg.saturation_count),
        )
    overall = combine({d: a.weighted_mean for d, a in per_dim.items()}, vw)
    return ItemAggregate(item, per_dim, overall)


def _item_scores(groups, weight_of, vw):
    """Overall reputation-weighted score of each item (None if undefined)."""
    out = {}
    for item, evs in groups.items():
        means = {}
        for dim in vw:
            rated = [(e.scores[dim], weight_of(e.user_id)) for e in evs if dim in e.scores]
            means[dim] = weighted_mean([v for v, _ in rated], [w for _, w in rated]) if rated else None
        out[item] = combine(means, vw)
    return out


def compute_reputation(
    store: RatingStore,
    authored_items: Mapping[str, Sequence[str]],
    damping: float = 0.5,
    tol: float = 1e-9,
    max_iter: int = 1000,
    now: int | None = None,
    venue_weights: Mapping[str, float] | None = None,
) -> dict[str, float]:
    """Fixed point of "reputation = rescaled mean score of own contributions".

    Starts every user at 0.5.  Each round scores all authored items with the
    current reputations as rating weights, maps each author's mean item score
    from the rating scale onto [0, 1] (users without rated items get 0.5),
    and blends ``damping * old + (1 - damping) * raw``.  Stops once no
    reputation moves by ``tol`` or more.  The store is not modified.
    """
    if not 0 < damping < 1:
        raise ValueError("damping must lie in (0, 1)")
    cfg = store.config
    vw = dict(venue_weights) if venue_weights is not None else cfg.weights_for()
    _check_venue(vw)
    now = store.latest_timestamp() if now is None else now
    users = sorted(store.users | set(authored_items))
    items = sorted({i for its in authored_items.values() for i in its})
    rep = {u: INITIAL_REPUTATION for u in users}
    groups = {i: [] for i in items}
    for (_, i), e in sorted(store.events.items()):
        if i in groups:
            groups[i].append(e)

    for it in range(1, max_iter + 1):
        def weight_of(u):
            return 0.0 if store.is_sanctioned(u, now) else rep.get(u, INITIAL_REPUTATION)

        scores = _item_scores(groups, weight_of, vw)
        new = {}
        for u in users:
            own = [scores[i] for i in authored_items.get(u, ()) if scores.get(i) is not None]
            raw = cfg.rescale(math.fsum(own) / len(own)) if own else INITIAL_REPUTATION
            new[u] = damping * rep[u] + (1 - damping) * raw
        change = max((abs(new[u] - rep[u]) for u in users), default=0.0)
        rep = new
        if change < tol:
            logger.debug("reputation converged after %d rounds", it)
            return rep
    raise NoConvergence(max_iter, change)


def _event_score(event: RatingEvent, vw: Mapping[str, float]) -> float | None:
    return combine({d: float(s) for d, s in event.scores.items()}, vw)


def deviation_scores(store: RatingStore, min_overlap: int = 10,
                     venue_weights: Mapping[str, float] | None = None) -> dict[str, float]:
    """Mean gap between each user's rating and the other raters' mean.

    Only items with at least two raters count, and only users with at least
    ``min_overlap`` such items are scored.
    """
    vw = dict(venue_weights) if venue_weights is not None else store.config.weights_for()
    by_item = {}
    for (u, i), e in sorted(store.events.items()):
        s = _event_score(e, vw)
        if s is not None:
            by_item.setdefault(i, []).append((u, s))
    gaps = {}
    for raters in by_item.values():
        if len(raters) < 2:
            continue
        total = math.fsum(s for _, s in raters)
        for u, s in raters:
            others = (total - s) / (len(raters) - 1)
            gaps.setdefault(u, []).append(s - others)
    return {u: math.fsum(g) / len(g) for u, g in sorted(gaps.items()) if len(g) >= min_overlap}


def detect_anomalies(store: RatingStore, min_overlap: int = 10, z_threshold: float = 3.0,
                     venue_weights: Mapping[str, float] | None = None) -> list[tuple[str, float]]:
    """Users whose mean deviation from consensus is a z-score outlier.

    The z-score uses the population mean and standard deviation of all
    scored users' deviations.  Returns flagged ``(user, z)`` pairs, sorted
    by user id; an empty list when there is too little data.
    """
    d = deviation_scores(store, min_overlap, venue_weights)
    if len(d) < 2:
        return []
    vals = np.array(list(d.values()))
    sd = float(vals.std())
    mu = float(vals.mean())
    # equal deviations can leave float noise in the spread
    if sd <= 1e-12 * max(1.0, abs(mu)):
        return []
    return [(u, (x - mu) / sd) for u, x in d.items() if abs((x - mu) / sd) > z_threshold]
