# %% [markdown]
# Journal indicators on a synthetic five-journal literature
#
# Papers are drawn year by year; each new paper cites earlier ones with a
# preference for two "prestige" journals.  We then compare the impact factor
# with the network-based Eigenfactor and Article Influence scores.

# %%
import numpy as np

from scimetrics import Corpus, JournalRecord, PaperRecord
from scimetrics.journal_metrics import (
    article_influence,
    build_flow_matrix,
    cited_half_life,
    eigenfactor,
    immediacy,
    jif,
)

rng = np.random.default_rng(42)
journals = ["JA", "JB", "JC", "JD", "JE"]
appeal = np.array([4.0, 3.0, 1.0, 1.0, 0.5])   # how attractive each journal is to cite
output = np.array([0.15, 0.15, 0.3, 0.25, 0.15])  # share of papers each journal prints

papers = []
for year in range(1998, 2011):
    for k in range(40):
        j = rng.choice(len(journals), p=output)
        earlier = papers[-400:]  # the recent literature, same year included
        refs = ()
        if earlier:
            w = np.array([appeal[journals.index(p.journal_id)] for p in earlier])
            n = min(len(earlier), int(rng.integers(3, 10)))
            idx = rng.choice(len(earlier), size=n, replace=False, p=w / w.sum())
            refs = tuple(earlier[i].id for i in idx)
        papers.append(PaperRecord(id=f"{year}-{k:02d}", title="", author_ids=("x",), year=year,
                                  journal_id=journals[j], references=refs))

corpus = Corpus.build(papers, journals=[JournalRecord(j, j, "demo") for j in journals])
print(corpus.summary())

# %% [markdown]
# Ratio indicators for the 2010 census year.

# %%
print(f"{'journal':8}{'JIF':>8}{'immed.':>8}{'half-life':>11}")
for j in journals:
    print(f"{j:8}{jif(corpus, j, 2010):8.3f}{immediacy(corpus, j, 2010):8.3f}"
          f"{cited_half_life(corpus, j, 2010):11.2f}")

# %% [markdown]
# Eigenfactor follows citation flow between journals (self-citations
# removed), so a citation from an influential journal counts for more.
# Article Influence divides by each journal's share of articles.

# %%
flow = build_flow_matrix(corpus, 2010)
print(flow.matrix.astype(int))
ef = eigenfactor(flow)
ai = article_influence(ef, flow.article_counts)
for j in journals:
    print(f"{j}: Eigenfactor {ef[j]:6.2f}   Article Influence {ai[j]:7.2f}")
print("sum of Eigenfactor scores:", round(sum(ef.values()), 9))
