# %% [markdown]
# Ranking candidates on several scales at once
#
# Twelve hypothetical groups are scored on four criteria.  A single weighted
# sum favours all-rounders; the talent score adds a bonus for standout
# strengths; the league scheme lets a candidate in on one excellent scale.

# %%
import numpy as np

from scimetrics.ranking import (
    EXAMPLE_WEIGHTS,
    ScoreMatrix,
    league_classify,
    normalize_scores,
    rank_candidates,
)

rng = np.random.default_rng(7)
criteria = ["excellence", "industry", "society", "dissemination"]
values = rng.gamma(shape=2.0, scale=10.0, size=(12, 4)).round(1)
values[3] = [95, 2, 3, 4]      # a pure specialist
values[7] = [25, 25, 25, 25]   # a steady all-rounder
matrix = ScoreMatrix([f"g{i:02d}" for i in range(12)], criteria, values)

print(np.column_stack([matrix.candidate_ids, values]))

# %% [markdown]
# Every column is divided by its mean first, so the criteria become
# comparable regardless of their units.

# %%
print(normalize_scores(matrix).values.mean(axis=0))

# %%
weighted = rank_candidates(matrix, EXAMPLE_WEIGHTS, "weighted")
talent = rank_candidates(matrix, EXAMPLE_WEIGHTS, "talent")
pos_w = {c: i for i, (c, _) in enumerate(weighted, 1)}
pos_t = {c: i for i, (c, _) in enumerate(talent, 1)}
print(f"{'group':6}{'weighted':>10}{'talent':>8}")
for c, _ in weighted:
    print(f"{c:6}{pos_w[c]:10}{pos_t[c]:8}")

# %% [markdown]
# Leagues use rank percentiles: top 10 % on one scale, 20 % on two or 30 % on
# three for league A, and wider bands for B and C.

# %%
for a in league_classify(matrix, 10, 20, 30):
    print(a.candidate_id, a.league)
