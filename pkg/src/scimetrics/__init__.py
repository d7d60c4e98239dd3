"""Citation indices, journal rankings, pluralistic scoring, reputation-weighted
ratings, a manuscript review workflow and recommendation helpers."""

from .author_metrics import (
    AuthorMetrics,
    AuthorPaperView,
    author_report,
    awcr_aw,
    contemporary_h,
    e_index,
    g_index,
    h_index,
    hm_index,
    individual_h,
)
from .corpus import (
    AuthorRecord,
    Corpus,
    DownloadEvent,
    JournalRecord,
    PaperRecord,
    author_papers,
    citation_count,
    citations_in_year,
    load_corpus,
    paper_age,
)
from .field_metrics import (
    FieldConstants,
    TopicMetrics,
    co_citation_count,
    field_constants,
    hb_index,
    hf_index,
    top_cocited_pairs,
)
from .journal_metrics import (
    JournalFlowMatrix,
    aggregate_impact_factor,
    article_influence,
    build_flow_matrix,
    cited_half_life,
    eigenfactor,
    immediacy,
    jif,
)
from .ranking import (
    ScoreMatrix,
    WeightVector,
    league_classify,
    normalize_scores,
    talent_score,
    weighted_score,
)

__version__ = "0.1.0"
