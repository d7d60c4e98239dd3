# %% [markdown]
# Author indices on a hand-built citation record
#
# One author, five papers.  We build the citing papers explicitly so the
# corpus carries real citation edges, then compare the family of h-type
# indices side by side.

# %%
from scimetrics import Corpus, PaperRecord, author_report
from scimetrics.author_metrics import AuthorPaperView, h_index, hm_index, individual_h

profile = [  # (citations, year, number of authors)
    (10, 2008, 2),
    (8, 2005, 1),
    (5, 2009, 3),
    (4, 2001, 2),
    (3, 2010, 1),
]

papers = []
for i, (cites, year, n_auth) in enumerate(profile):
    authors = ("ada",) + tuple(f"co{i}_{k}" for k in range(n_auth - 1))
    papers.append(PaperRecord(id=f"P{i}", title=f"Paper {i}", author_ids=authors, year=year))
    for k in range(cites):
        papers.append(PaperRecord(id=f"C{i}_{k}", title="citer", author_ids=("zed",), year=2010,
                                  references=(f"P{i}",)))

corpus = Corpus.build(papers)
print(corpus.summary())

# %%
report = author_report(corpus, "ada", now_year=2010)
for name, value in report.as_dict().items():
    print(f"{name:>15}: {value:.4f}" if isinstance(value, float) else f"{name:>15}: {value}")

# %% [markdown]
# The g-index rewards the heavily cited head of the list, the e-index measures
# the citations beyond what h needs, and the contemporary h-index discounts old
# papers.  The two multi-author variants shrink the index for shared papers.

# %%
views = [AuthorPaperView(c, y, n, f"P{i}") for i, (c, y, n) in enumerate(profile)]
print("plain h           ", h_index(c for c, _, _ in profile))
print("individual h      ", individual_h(views))
print("h_m (fractional)  ", round(hm_index(views), 4))

# %% [markdown]
# Sole-author papers give back the plain h-index.

# %%
solo = [AuthorPaperView(c, y, 1, f"P{i}") for i, (c, y, _) in enumerate(profile)]
print(h_index(c for c, _, _ in profile), individual_h(solo), hm_index(solo))
