"""Loading, validation and indexing of the scholarly corpus.

The corpus is read from up to four JSON-lines files (``papers.jsonl``,
``authors.jsonl``, ``journals.jsonl``, ``downloads.jsonl``), one record per
line.  After loading it is treated as read-only; every metric module takes a
:class:`Corpus` and never mutates it.
"""

from __future__ import annotations

import json
import logging
import warnings
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .errors import (
    CorpusWarning,
    DanglingReference,
    DuplicateId,
    FutureDated,
    ParseError,
    UnknownAuthor,
    UnknownPaper,
)

logger = logging.getLogger(__name__)

YEAR_MIN, YEAR_MAX = 1500, 3000
RECORD_KINDS = ("papers", "authors", "journals", "downloads")


@dataclass(frozen=True)
class PaperRecord:
    id: str
    title: str
    author_ids: tuple[str, ...]
    year: int
    journal_id: str | None = None
    field_id: str | None = None
    tags: frozenset[str] = frozenset()
    references: tuple[str, ...] = ()

    def __post_init__(self):
        if not isinstance(self.id, str) or not self.id:
            raise ValueError("paper id must be a nonempty string")
        if not self.author_ids:
            raise ValueError(f"paper {self.id!r} has no authors")
        if isinstance(self.year, bool) or not isinstance(self.year, int):
            raise ValueError(f"paper {self.id!r}: year must be an integer")
        if not YEAR_MIN <= self.year <= YEAR_MAX:
            raise ValueError(f"paper {self.id!r}: year {self.year} out of range")
        if len(set(self.references)) != len(self.references):
            dupes = sorted(r for r, n in Counter(self.references).items() if n > 1)
            raise ValueError(f"paper {self.id!r} repeats references {dupes}")
        object.__setattr__(self, "author_ids", tuple(self.author_ids))
        object.__setattr__(self, "references", tuple(self.references))
        object.__setattr__(self, "tags", frozenset(str(t).lower() for t in self.tags))


@dataclass(frozen=True)
class AuthorRecord:
    id: str
    name: str = ""


@dataclass(frozen=True)
class JournalRecord:
    id: str
    name: str = ""
    field_id: str | None = None


@dataclass(frozen=True)
class DownloadEvent:
    user_id: str
    paper_id: str
    timestamp: int

    def __post_init__(self):
        if self.timestamp < 0:
            raise ValueError("download timestamp must be >= 0")


_FIELDS = {
    "papers": ("id", "title", "author_ids", "journal_id", "field_id", "year", "tags", "references"),
    "authors": ("id", "name"),
    "journals": ("id", "name", "field_id"),
    "downloads": ("user_id", "paper_id", "timestamp"),
}


def _make_paper(rec: dict) -> PaperRecord:
    return PaperRecord(
        id=rec["id"],
        title=rec.get("title", ""),
        author_ids=tuple(rec["author_ids"]),
        year=rec["year"],
        journal_id=rec.get("journal_id"),
        field_id=rec.get("field_id"),
        tags=frozenset(rec.get("tags", ())),
        references=tuple(rec.get("references", ())),
    )


def _make_record(kind: str, rec: dict):
    if kind == "papers":
        return _make_paper(rec)
    if kind == "authors":
        return AuthorRecord(id=rec["id"], name=rec.get("name", ""))
    if kind == "journals":
        return JournalRecord(id=rec["id"], name=rec.get("name", ""), field_id=rec.get("field_id"))
    ts = rec["timestamp"]
    if isinstance(ts, bool) or not isinstance(ts, int):
        raise ValueError("timestamp must be an integer")
    return DownloadEvent(user_id=rec["user_id"], paper_id=rec["paper_id"], timestamp=ts)


@dataclass(eq=False)
class Corpus:
    """Indexed, read-only view of papers, authors, journals and downloads.

    ``cited_by`` maps every paper id to the sorted tuple of ids of papers
    citing it.  References that do not resolve are kept out of the graph
    and listed in ``dangling_refs``.
    """

    papers: dict[str, PaperRecord] = field(default_factory=dict)
    authors: dict[str, AuthorRecord] = field(default_factory=dict)
    journals: dict[str, JournalRecord] = field(default_factory=dict)
    downloads: tuple[DownloadEvent, ...] = ()
    cited_by: dict[str, tuple[str, ...]] = field(default_factory=dict)
    dangling_refs: frozenset[str] = frozenset()
    dangling_occurrences: int = 0
    unknown_keys: int = 0
    skipped_downloads: int = 0

    def __post_init__(self):
        by_author = defaultdict(list)
        by_journal = defaultdict(list)
        by_tag = defaultdict(list)
        for pid in sorted(self.papers):
            p = self.papers[pid]
            for a in dict.fromkeys(p.author_ids):
                by_author[a].append(pid)
            if p.journal_id is not None:
                by_journal[p.journal_id].append(pid)
            for t in p.tags:
                by_tag[t].append(pid)
        self._by_author = dict(by_author)
        self._by_journal = dict(by_journal)
        self._by_tag = dict(by_tag)

    def __eq__(self, other):
        if not isinstance(other, Corpus):
            return NotImplemented
        return (
            self.papers == other.papers
            and self.authors == other.authors
            and self.journals == other.journals
            and self.downloads == other.downloads
            and self.cited_by == other.cited_by
            and self.dangling_refs == other.dangling_refs
        )

    @classmethod
    def build(
        cls,
        papers: Iterable[PaperRecord] = (),
        authors: Iterable[AuthorRecord] = (),
        journals: Iterable[JournalRecord] = (),
        downloads: Iterable[DownloadEvent] = (),
        strict: bool = False,
        unknown_keys: int = 0,
    ) -> "Corpus":
        paper_map = _unique("paper", papers)
        author_map = _unique("author", authors)
        journal_map = _unique("journal", journals)

        cited_by = {pid: [] for pid in paper_map}
        dangling = set()
        n_dangling = 0
        for pid in sorted(paper_map):
            for ref in paper_map[pid].references:
                if ref in cited_by:
                    cited_by[ref].append(pid)
                elif strict:
                    raise DanglingReference(pid, ref)
                else:
                    dangling.add(ref)
                    n_dangling += 1

        kept = []
        skipped = 0
        for ev in downloads:
            if ev.paper_id in paper_map:
                kept.append(ev)
            elif strict:
                raise UnknownPaper(ev.paper_id)
            else:
                skipped += 1
        if skipped:
            warnings.warn(f"{skipped} download events refer to unknown papers", CorpusWarning, stacklevel=2)

        return cls(
            papers=paper_map,
            authors=author_map,
            journals=journal_map,
            downloads=tuple(kept),
            cited_by={k: tuple(v) for k, v in cited_by.items()},
            dangling_refs=frozenset(dangling),
            dangling_occurrences=n_dangling,
            unknown_keys=unknown_keys,
            skipped_downloads=skipped,
        )

    # -- lookups ------------------------------------------------------------

    def paper(self, paper_id: str) -> PaperRecord:
        try:
            return self.papers[paper_id]
        except KeyError:
            raise UnknownPaper(paper_id) from None

    def has_author(self, author_id: str) -> bool:
        return author_id in self.authors or author_id in self._by_author

    def papers_by_author(self, author_id: str) -> list[str]:
        if not self.has_author(author_id):
            raise UnknownAuthor(author_id)
        return list(self._by_author.get(author_id, ()))

    def papers_in_journal(self, journal_id: str) -> list[str]:
        return list(self._by_journal.get(journal_id, ()))

    def papers_with_tag(self, tag: str) -> list[str]:
        return list(self._by_tag.get(tag.lower(), ()))

    def field_of(self, paper: PaperRecord) -> str | None:
        """Paper's own field, falling back to its journal's field."""
        if paper.field_id is not None:
            return paper.field_id
        j = self.journals.get(paper.journal_id) if paper.journal_id else None
        return j.field_id if j else None

    @property
    def n_edges(self) -> int:
        return sum(len(v) for v in self.cited_by.values())

    def summary(self) -> dict:
        years = [p.year for p in self.papers.values()]
        return {
            "papers": len(self.papers),
            "authors": len(self.authors),
            "journals": len(self.journals),
            "downloads": len(self.downloads),
            "citation_edges": self.n_edges,
            "dangling_references": self.dangling_occurrences,
            "dangling_ids": len(self.dangling_refs),
            "unknown_keys": self.unknown_keys,
            "skipped_downloads": self.skipped_downloads,
            "year_min": min(years) if years else None,
            "year_max": max(years) if years else None,
        }


def _unique(kind, records):
    out = {}
    for r in records:
        if r.id in out:
            raise DuplicateId(kind, r.id)
        out[r.id] = r
    return out


def _kind_of(path: Path) -> str:
    stem = path.name.split(".")[0]
    if stem not in RECORD_KINDS:
        raise ParseError(path, 0, f"cannot tell record type from file name (expected one of {RECORD_KINDS})")
    return stem


def read_jsonl(path: Path, kind: str) -> tuple[list, int]:
    """Parse one JSONL file of ``kind`` records; return (records, unknown key count)."""
    allowed = set(_FIELDS[kind])
    records = []
    unknown = 0
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if lineno == 1 and line.startswith("\ufeff"):
                raise ParseError(path, lineno, "byte-order mark not allowed")
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(path, lineno, f"invalid JSON: {exc.msg}") from None
            if not isinstance(rec, dict):
                raise ParseError(path, lineno, "record is not a JSON object")
            unknown += len(set(rec) - allowed)
            try:
                records.append(_make_record(kind, rec))
            except KeyError as exc:
                raise ParseError(path, lineno, f"missing field {exc.args[0]!r}") from None
            except (TypeError, ValueError, AttributeError) as exc:
                raise ParseError(path, lineno, str(exc)) from None
    return records, unknown


def corpus_files(paths: Iterable[str | Path]) -> list[Path]:
    """Expand directories into the known corpus file names they contain."""
    files = []
    for p in map(Path, paths):
        if p.is_dir():
            files.extend(p / f"{k}.jsonl" for k in RECORD_KINDS if (p / f"{k}.jsonl").exists())
        else:
            files.append(p)
    return files


def load_corpus(paths: Iterable[str | Path], strict: bool = False) -> Corpus:
    """Load and index a corpus from JSONL files or directories holding them.

    In strict mode references to unknown papers raise
    :class:`DanglingReference`; otherwise they are collected in
    ``Corpus.dangling_refs`` and left out of the citation graph.
    """
    buckets = {k: [] for k in RECORD_KINDS}
    unknown = 0
    for path in corpus_files(paths):
        kind = _kind_of(path)
        recs, n_unknown = read_jsonl(path, kind)
        buckets[kind].extend(recs)
        unknown += n_unknown
    if unknown:
        warnings.warn(f"ignored {unknown} unknown keys while loading corpus", CorpusWarning, stacklevel=2)
    corpus = Corpus.build(strict=strict, unknown_keys=unknown, **buckets)
    logger.debug("loaded corpus: %s", corpus.summary())
    return corpus


# -- queries ------------------------------------------------------------------

def citation_count(corpus: Corpus, paper: str) -> int:
    corpus.paper(paper)
    return len(corpus.cited_by[paper])


def citations_in_year(corpus: Corpus, paper: str, year: int) -> int:
    """Citations received in ``year``, dated by the citing paper's year."""
    corpus.paper(paper)
    return sum(1 for c in corpus.cited_by[paper] if corpus.papers[c].year == year)


def paper_age(paper: PaperRecord, now_year: int) -> int:
    """Age in years counting the publication year as 1."""
    return age(paper.year, now_year)


def age(year: int, now_year: int) -> int:
    if now_year < year:
        raise FutureDated(year, now_year)
    return now_year - year + 1


def rank_key(citations: int, year: int, paper_id: str):
    """Sort key giving the canonical order for ranked paper lists."""
    return (-citations, year, paper_id)


def author_papers(corpus: Corpus, author: str) -> list[tuple[PaperRecord, int]]:
    """Papers of ``author`` with their citation counts, most cited first.

    Ties go to the older paper, then to the lexicographically smaller id.
    """
    rows = [(corpus.papers[pid], len(corpus.cited_by[pid])) for pid in corpus.papers_by_author(author)]
    rows.sort(key=lambda pc: rank_key(pc[1], pc[0].year, pc[0].id))
    return rows
