# %% [markdown]
# From archive to journal, and how readers find papers
#
# Every manuscript lands in the open archive first.  An editor can pick it
# for a round of three referee reports; one positive report from a referee
# with enough reputation sends it to revision, and the board decides after
# that.  Rejected work stays readable.

# %%
from scimetrics.review import (
    RefereeReport,
    add_reader_comment,
    editorial_decision,
    evaluate_reports,
    record_report,
    select_for_review,
    submit_manuscript,
    submit_revision,
)

reputation = {"r-senior": 0.85, "r-junior": 0.2, "r-mid": 0.55}

wf = submit_manuscript("ms-17", timestamp=1_000)
wf = add_reader_comment(wf, "reader-4", "Nice idea, check eq. 3")
wf = select_for_review(wf, timestamp=2_000)
for rid, verdict in [("r-junior", "positive"), ("r-mid", "negative"), ("r-senior", "positive")]:
    wf = record_report(wf, RefereeReport(rid, verdict, timestamp=3_000))
wf = evaluate_reports(wf, reputation, threshold=0.5, timestamp=4_000)
wf = submit_revision(wf, ["Clarified the model assumptions."], timestamp=5_000)
wf = editorial_decision(wf, accept=True, timestamp=6_000)
for t in wf.history:
    print(t.to_dict())
print("reports shown with the paper:", [r.referee_id for r in wf.published_reports])

# %% [markdown]
# The same round with only the junior referee positive is rejected, yet the
# manuscript remains in the archive.

# %%
other = select_for_review(submit_manuscript("ms-18", timestamp=0), timestamp=1)
for rid, verdict in [("r-junior", "positive"), ("r-mid", "negative"), ("r-senior", "negative")]:
    other = record_report(other, RefereeReport(rid, verdict))
other = evaluate_reports(other, reputation, timestamp=2)
print(other.state, "readable:", other.readable)

# %% [markdown]
# Recommendations: tag overlap and co-downloads, then a display order that
# mixes popularity with chance so early leaders do not lock in attention.

# %%
import numpy as np

from scimetrics import Corpus, DownloadEvent, PaperRecord
from scimetrics.recommender import (
    Subscription,
    alerts,
    coaccess_similarity,
    popularity,
    randomized_display,
    tag_similarity,
)

rng = np.random.default_rng(0)
topics = ["networks", "ranking", "citations", "peer-review", "economics"]
papers = [PaperRecord(id=f"p{i:02d}", title="", author_ids=(f"a{i % 6}",), year=2010,
                      tags=frozenset(rng.choice(topics, size=2, replace=False)))
          for i in range(20)]
downloads = [DownloadEvent(f"u{u}", f"p{int(p):02d}", t)
             for t, (u, p) in enumerate(zip(rng.integers(0, 30, 300), rng.zipf(1.6, 300) % 20))]
corpus = Corpus.build(papers, downloads=downloads)

print("tags of p00:", sorted(corpus.papers["p00"].tags))
print("by tags:    ", tag_similarity(corpus, "p00", 3))
print("by download:", [(p, round(s, 3)) for p, s in coaccess_similarity(corpus, "p00", 3)])

pops = popularity(corpus)
items = list(pops.items())
for temperature in (0, 0.5, 2.0):
    order = randomized_display(items, temperature, seed=1)
    print(f"T={temperature}:", " ".join(order.item_ids[:8]))

# %%
subs = [Subscription("kim", keywords=frozenset({"Peer-Review"})),
        Subscription("lee", author_ids=frozenset({"a2"}))]
print(alerts(subs, papers)[:6])
