import json
import random
import sys
from pathlib import Path

import pytest

from scimetrics.corpus import AuthorRecord, Corpus, DownloadEvent, JournalRecord, PaperRecord

sys.path.insert(0, str(Path(__file__).parent))

DATA = Path(__file__).parent / "data"


def paper(pid, year=2000, authors=("A1",), refs=(), journal=None, field=None, tags=()):
    return PaperRecord(id=pid, title=pid, author_ids=tuple(authors), year=year, journal_id=journal,
                       field_id=field, tags=frozenset(tags), references=tuple(refs))


def random_corpus(seed, n_papers=60, n_authors=12, n_journals=4, n_users=15, max_refs=8,
                  year_range=(2000, 2010)):
    rng = random.Random(seed)
    authors = [AuthorRecord(f"a{i:02d}", f"Author {i}") for i in range(n_authors)]
    journals = [JournalRecord(f"j{i}", f"Journal {i}", f"f{i % 2}") for i in range(n_journals)]
    tags = ["networks", "ranking", "citations", "peer-review", "economics", "physics"]
    papers = []
    for k in range(n_papers):
        pid = f"p{k:03d}"
        year = rng.randint(*year_range)
        earlier = [p for p in papers if p.year <= year]
        refs = rng.sample([p.id for p in earlier], min(len(earlier), rng.randint(0, max_refs)))
        papers.append(PaperRecord(
            id=pid, title=f"Paper {k}",
            author_ids=tuple(a.id for a in rng.sample(authors, rng.randint(1, 4))),
            year=year,
            journal_id=rng.choice(journals).id if rng.random() < 0.9 else None,
            field_id=None,
            tags=frozenset(rng.sample(tags, rng.randint(0, 3))),
            references=tuple(refs),
        ))
    downloads = [DownloadEvent(f"u{rng.randrange(n_users)}", rng.choice(papers).id, rng.randrange(10**6))
                 for _ in range(n_papers * 3)]
    return Corpus.build(papers, authors, journals, downloads, strict=True)


def write_corpus(corpus: Corpus, directory: Path) -> Path:
    directory.mkdir(parents=True, exist_ok=True)

    def dump(name, rows):
        with open(directory / f"{name}.jsonl", "w", encoding="utf-8") as fh:
            for r in rows:
                fh.write(json.dumps(r, sort_keys=True) + "\n")

    dump("papers", [{"id": p.id, "title": p.title, "author_ids": list(p.author_ids), "year": p.year,
                     "journal_id": p.journal_id, "field_id": p.field_id, "tags": sorted(p.tags),
                     "references": list(p.references)} for p in corpus.papers.values()])
    dump("authors", [{"id": a.id, "name": a.name} for a in corpus.authors.values()])
    dump("journals", [{"id": j.id, "name": j.name, "field_id": j.field_id} for j in corpus.journals.values()])
    dump("downloads", [{"user_id": d.user_id, "paper_id": d.paper_id, "timestamp": d.timestamp}
                       for d in corpus.downloads])
    return directory


@pytest.fixture
def chain_corpus():
    # A -> B -> C -> D -> E
    ids = "ABCDE"
    papers = [paper(p, refs=(ids[i + 1],) if i < 4 else ()) for i, p in enumerate(ids)]
    return Corpus.build(papers, strict=True)


@pytest.fixture(scope="session")
def reference_dir():
    return DATA / "reference"
