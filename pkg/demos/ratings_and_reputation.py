# %% [markdown]
# Reputation-weighted ratings
#
# Users rate each other's papers on four dimensions.  Reputation is earned
# from how well one's own papers are rated, and it decides how much one's
# ratings count.  A rater who games the system stands out in the anomaly
# check and can be sanctioned.

# %%
import calendar
import random

from scimetrics.rating import (
    DEFAULT_DIMENSIONS,
    RatingEvent,
    RatingStore,
    aggregate_item,
    apply_sanction,
    compute_reputation,
    detect_anomalies,
    submit_rating,
)

rng = random.Random(3)
t0 = calendar.timegm((2010, 5, 3, 9, 0, 0))
users = [f"u{i:02d}" for i in range(16)]
quality = {u: rng.uniform(1.5, 4.8) for u in users}   # true quality of each user's work
authored = {u: [f"{u}-paper{k}" for k in range(2)] for u in users}

store = RatingStore()
for rater in users:
    for author in rng.sample(users, 12):
        if author == rater:
            continue
        for item in authored[author]:
            q = quality[author]
            scores = {d: min(5, max(1, round(rng.gauss(q, 0.7)))) for d in DEFAULT_DIMENSIONS}
            if rater == "u05":  # praises everything
                scores = {d: 5 for d in DEFAULT_DIMENSIONS}
            submit_rating(store, RatingEvent(rater, item, scores, t0 + rng.randrange(86400)))

print("items rated:", len(store.items()), " budget used by u00 in May:", store.spent("u00", "2010-05"))

# %% [markdown]
# The reputation fixed point: authors of well-rated papers end up with more
# weight.

# %%
reps = compute_reputation(store, authored)
for u in sorted(users, key=reps.get, reverse=True)[:5]:
    print(f"{u}  reputation {reps[u]:.3f}  true quality {quality[u]:.2f}")

# %% [markdown]
# The constant praiser deviates from consensus on every item.

# %%
print(detect_anomalies(store, min_overlap=10, z_threshold=3.0))

# %% [markdown]
# Sanctioning sets the rater's weight to zero until the given time.  We
# compare one of the praised papers before and after.

# %%
store.reputations.update(reps)
item = authored["u09"][0]
before = aggregate_item(store, item, now=t0 + 86400)
apply_sanction(store, "u05", until=t0 + 30 * 86400)
after = aggregate_item(store, item, now=t0 + 86400)
print(f"{item}: overall {before.overall:.3f} -> {after.overall:.3f}")
for d, agg in after.per_dimension.items():
    print(f"  {d:12} mean {agg.weighted_mean:.2f}  n={agg.count}  sd={agg.std:.2f}  intensity={agg.intensity:.2f}")
