import json
import warnings

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import paper, random_corpus, write_corpus
from scimetrics.corpus import (
    Corpus,
    author_papers,
    citation_count,
    citations_in_year,
    load_corpus,
    paper_age,
)
from scimetrics.errors import (
    DanglingReference,
    DuplicateId,
    FutureDated,
    ParseError,
    UnknownAuthor,
    UnknownPaper,
)


def write_lines(path, rows):
    path.write_text("".join(json.dumps(r) + "\n" for r in rows), encoding="utf-8")
    return path


def test_empty_file_set():
    c = load_corpus([])
    assert len(c.papers) == 0
    assert c.n_edges == 0


def test_dangling_reference_collected(tmp_path):
    f = write_lines(tmp_path / "papers.jsonl",
                    [{"id": "P1", "title": "x", "author_ids": ["A"], "year": 2000, "references": ["MISSING"]}])
    c = load_corpus([f])
    assert c.dangling_refs == {"MISSING"}
    assert c.cited_by == {"P1": ()}
    with pytest.raises(DanglingReference):
        load_corpus([f], strict=True)


def test_chain(chain_corpus):
    c = chain_corpus
    assert c.cited_by["B"] == ("A",)
    assert c.cited_by["E"] == ("D",)
    assert c.cited_by["A"] == ()
    brute = sum(len(p.references) for p in c.papers.values())
    assert c.n_edges == brute == 4


def test_citations_in_year():
    papers = [paper("T", 2000)] + [paper(f"c{i}", 2009, refs=("T",)) for i in range(3)] + [paper("d", 2008, refs=("T",))]
    c = Corpus.build(papers)
    assert citations_in_year(c, "T", 2009) == 3
    assert citations_in_year(c, "T", 2008) == 1
    assert citations_in_year(c, "T", 1900) == 0
    assert citations_in_year(c, "c0", 2009) == 0
    with pytest.raises(UnknownPaper):
        citations_in_year(c, "nope", 2009)


def test_citation_count_star():
    papers = [paper("hub")] + [paper(f"leaf{i}", refs=("hub",)) for i in range(6)]
    c = Corpus.build(papers)
    assert citation_count(c, "hub") == 6
    assert citation_count(c, "leaf0") == 0


def test_duplicate_reference_rejected(tmp_path):
    f = write_lines(tmp_path / "papers.jsonl", [
        {"id": "T", "title": "", "author_ids": ["A"], "year": 2000},
        {"id": "C", "title": "", "author_ids": ["A"], "year": 2001, "references": ["T", "T"]},
    ])
    with pytest.raises(ParseError) as err:
        load_corpus([f])
    assert err.value.line == 2


def test_duplicate_paper_id(tmp_path):
    row = {"id": "T", "title": "", "author_ids": ["A"], "year": 2000}
    f = write_lines(tmp_path / "papers.jsonl", [row, row])
    with pytest.raises(DuplicateId):
        load_corpus([f])


@pytest.mark.parametrize("row, reason", [
    ({"id": "T", "title": "", "author_ids": [], "year": 2000}, "no authors"),
    ({"id": "T", "title": "", "author_ids": ["A"], "year": 1400}, "out of range"),
    ({"id": "", "title": "", "author_ids": ["A"], "year": 2000}, "nonempty"),
    ({"title": "", "author_ids": ["A"], "year": 2000}, "missing field"),
])
def test_invalid_paper_rows(tmp_path, row, reason):
    f = write_lines(tmp_path / "papers.jsonl", [row])
    with pytest.raises(ParseError, match=reason):
        load_corpus([f])


def test_bad_json_names_line(tmp_path):
    f = tmp_path / "papers.jsonl"
    f.write_text('{"id": "T", "title": "", "author_ids": ["A"], "year": 2000}\n{oops\n', encoding="utf-8")
    with pytest.raises(ParseError) as err:
        load_corpus([f])
    assert err.value.line == 2


def test_bom_rejected(tmp_path):
    f = tmp_path / "authors.jsonl"
    f.write_text('\ufeff{"id": "A", "name": "x"}\n', encoding="utf-8")
    with pytest.raises(ParseError, match="byte-order"):
        load_corpus([f])


def test_unknown_keys_counted(tmp_path):
    f = write_lines(tmp_path / "authors.jsonl", [{"id": "A", "name": "x", "orcid": "0", "h": 3}])
    with pytest.warns(UserWarning, match="2 unknown keys"):
        c = load_corpus([f])
    assert c.unknown_keys == 2


def test_paper_age():
    assert paper_age(paper("x", 2010), 2010) == 1
    assert paper_age(paper("x", 2001), 2010) == 10
    with pytest.raises(FutureDated):
        paper_age(paper("x", 2011), 2010)


def test_author_papers_order():
    papers = [
        paper("new", 2005, authors=("A",)),
        paper("old", 2001, authors=("A",)),
        paper("top", 2003, authors=("A",)),
        paper("c1", 2006, authors=("B",), refs=("new", "old", "top")),
        paper("c2", 2006, authors=("B",), refs=("new", "old", "top")),
        paper("c3", 2007, authors=("B",), refs=("top",)),
    ]
    c = Corpus.build(papers)
    rows = author_papers(c, "A")
    assert [(p.id, n) for p, n in rows] == [("top", 3), ("old", 2), ("new", 2)]
    assert author_papers(Corpus.build(papers, authors=[]), "B")[0][1] == 0
    with pytest.raises(UnknownAuthor):
        author_papers(c, "Z")


def test_author_without_papers():
    from scimetrics.corpus import AuthorRecord
    c = Corpus.build([], authors=[AuthorRecord("A", "x")])
    assert author_papers(c, "A") == []


def test_roundtrip_and_idempotent_load(tmp_path):
    c = random_corpus(3)
    d = write_corpus(c, tmp_path / "c")
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        a = load_corpus([d])
        b = load_corpus([d])
    assert a == b == c


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_inverse_index_soundness(seed):
    c = random_corpus(seed, n_papers=40)
    for cited, citers in c.cited_by.items():
        for citer in citers:
            assert cited in c.papers[citer].references
    total_refs = sum(len(p.references) for p in c.papers.values())
    assert c.n_edges + c.dangling_occurrences == total_refs
    for pid in c.papers:
        brute = sum(1 for p in c.papers.values() if pid in p.references)
        assert citation_count(c, pid) == brute
    for a in c.authors:
        assert author_papers(c, a) == author_papers(c, a)


def test_paper_record_normalizes_tags():
    p = paper("x", tags=("Ranking", "PEER-review"))
    assert p.tags == {"ranking", "peer-review"}
    assert all(type(t) is str for t in p.tags)
