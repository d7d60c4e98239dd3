"""Manuscript review workflow.

Every manuscript starts in the public archive.  Editors may pick it for a
round of three anonymous referee reports; the manuscript goes to revision if
at least one positive report comes from a referee whose reputation meets
the threshold, and is otherwise left in the archive as rejected.  After a
revision the editorial board publishes or rejects it.  Rejected manuscripts
stay readable.

Workflows are immutable values: each operation returns a new workflow with
the transition appended to its audit history.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping

from .errors import (
    DuplicateManuscript,
    DuplicateReferee,
    IncompleteRound,
    InvalidTransition,
    ParseError,
    RoundFull,
    WorkflowError,
)

ROUND_SIZE = 3
REPUTATION_THRESHOLD = 0.5


class State(str, Enum):
    ARCHIVED = "Archived"
    UNDER_REVIEW = "UnderReview"
    REVISION_REQUESTED = "RevisionRequested"
    REVISED = "Revised"
    PUBLISHED = "Published"
    ARCHIVED_REJECTED = "ArchivedRejected"

    def __str__(self):
        return self.value


TERMINAL = frozenset({State.PUBLISHED, State.ARCHIVED_REJECTED})


class Verdict(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


@dataclass(frozen=True)
class RefereeReport:
    referee_id: str
    verdict: Verdict
    text: str = ""
    timestamp: int = 0

    def __post_init__(self):
        object.__setattr__(self, "verdict", Verdict(self.verdict))


@dataclass(frozen=True)
class Transition:
    manuscript_id: str
    from_state: State | None
    to_state: State
    timestamp: int
    cause: str

    def to_dict(self) -> dict:
        return {
            "manuscript_id": self.manuscript_id,
            "from": None if self.from_state is None else self.from_state.value,
            "to": self.to_state.value,
            "timestamp": self.timestamp,
            "cause": self.cause,
        }


@dataclass(frozen=True)
class ManuscriptWorkflow:
    manuscript_id: str
    state: State = State.ARCHIVED
    reports: tuple[RefereeReport, ...] = ()
    round: int = 1
    past_reports: tuple[tuple[RefereeReport, ...], ...] = ()
    author_replies: tuple[str, ...] = ()
    reader_comments: tuple[tuple[str, str], ...] = ()
    history: tuple[Transition, ...] = field(default=(), repr=False)

    @property
    def published_reports(self) -> tuple[RefereeReport, ...]:
        """Referee reports that appear alongside a published paper."""
        if self.state is not State.PUBLISHED:
            return ()
        return tuple(r for rnd in self.past_reports for r in rnd) + self.reports

    @property
    def readable(self) -> bool:
        # nothing is ever removed from the archive
        return True


def _now(ts):
    return int(time.time()) if ts is None else ts


def _move(wf: ManuscriptWorkflow, to: State, cause: str, ts, **changes) -> ManuscriptWorkflow:
    t = Transition(wf.manuscript_id, wf.state, to, _now(ts), cause)
    return replace(wf, state=to, history=wf.history + (t,), **changes)


def _require(wf: ManuscriptWorkflow, op: str, *states: State) -> None:
    if wf.state not in states:
        raise InvalidTransition(op, wf.state)


def submit_manuscript(manuscript_id: str, existing: Iterable[str] = (), timestamp: int | None = None) -> ManuscriptWorkflow:
    """New archived manuscript; ``existing`` holds ids already in use."""
    if manuscript_id in set(existing):
        raise DuplicateManuscript(f"manuscript {manuscript_id!r} already submitted")
    t = Transition(manuscript_id, None, State.ARCHIVED, _now(timestamp), "submitted")
    return ManuscriptWorkflow(manuscript_id, history=(t,))


def select_for_review(wf: ManuscriptWorkflow, allow_rereview: bool = False,
                      timestamp: int | None = None) -> ManuscriptWorkflow:
    """Start a review round.  With ``allow_rereview`` a revised manuscript
    may be sent out for another round."""
    allowed = (State.ARCHIVED, State.REVISED) if allow_rereview else (State.ARCHIVED,)
    _require(wf, "select_for_review", *allowed)
    if wf.state is State.REVISED:
        return _move(wf, State.UNDER_REVIEW, "selected for another review round", timestamp,
                     past_reports=wf.past_reports + (wf.reports,), reports=())
    return _move(wf, State.UNDER_REVIEW, "selected for review", timestamp)


def record_report(wf: ManuscriptWorkflow, report: RefereeReport, round_size: int = ROUND_SIZE) -> ManuscriptWorkflow:
    _require(wf, "record_report", State.UNDER_REVIEW)
    if any(r.referee_id == report.referee_id for r in wf.reports):
        raise DuplicateReferee(f"referee {report.referee_id!r} already reported in round {wf.round}")
    if len(wf.reports) >= round_size:
        raise RoundFull(f"round {wf.round} already has {round_size} reports")
    return replace(wf, reports=wf.reports + (report,))


def qualifying_positive(reports: Iterable[RefereeReport], reputations: Mapping[str, float], threshold: float) -> bool:
    """True when some positive report comes from a referee with enough reputation.

    Referees missing from ``reputations`` count as having reputation 0.
    """
    return any(r.verdict is Verdict.POSITIVE and reputations.get(r.referee_id, 0.0) >= threshold for r in reports)


def evaluate_reports(wf: ManuscriptWorkflow, reputations: Mapping[str, float],
                     threshold: float = REPUTATION_THRESHOLD, round_size: int = ROUND_SIZE,
                     timestamp: int | None = None) -> ManuscriptWorkflow:
    _require(wf, "evaluate_reports", State.UNDER_REVIEW)
    if len(wf.reports) != round_size:
        raise IncompleteRound(f"need {round_size} reports, have {len(wf.reports)}")
    if qualifying_positive(wf.reports, reputations, threshold):
        return _move(wf, State.REVISION_REQUESTED, "qualifying positive report", timestamp)
    return _move(wf, State.ARCHIVED_REJECTED, "no qualifying positive report", timestamp)


def submit_revision(wf: ManuscriptWorkflow, replies: Iterable[str] = (),
                    timestamp: int | None = None) -> ManuscriptWorkflow:
    _require(wf, "submit_revision", State.REVISION_REQUESTED)
    return _move(wf, State.REVISED, "revision submitted", timestamp,
                 round=wf.round + 1, author_replies=wf.author_replies + tuple(replies))


def editorial_decision(wf: ManuscriptWorkflow, accept: bool, timestamp: int | None = None) -> ManuscriptWorkflow:
    _require(wf, "editorial_decision", State.REVISED)
    if accept:
        return _move(wf, State.PUBLISHED, "editorial board accepted", timestamp)
    return _move(wf, State.ARCHIVED_REJECTED, "editorial board rejected", timestamp)


def add_reader_comment(wf: ManuscriptWorkflow, reader_id: str, text: str) -> ManuscriptWorkflow:
    """Reader reviews are kept as comments; they never affect the decision."""
    return replace(wf, reader_comments=wf.reader_comments + ((reader_id, text),))


# -- audit log and event replay --------------------------------------------------

def write_audit_log(workflows: Iterable[ManuscriptWorkflow], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for wf in workflows:
            for t in wf.history:
                fh.write(json.dumps(t.to_dict(), sort_keys=True) + "\n")


def read_audit_log(path: str | Path) -> list[Transition]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                d = json.loads(line)
                out.append(Transition(d["manuscript_id"], None if d["from"] is None else State(d["from"]),
                                      State(d["to"]), int(d["timestamp"]), d["cause"]))
            except (KeyError, ValueError, TypeError) as exc:
                raise ParseError(path, lineno, str(exc)) from None
    return out


@dataclass
class ReviewDesk:
    """All manuscripts of one venue, driven by workflow events.

    Event records are dicts with ``manuscript_id``, ``op`` and the op's
    arguments: ``submit``, ``select``, ``report`` (``referee_id``,
    ``verdict``, ``text``), ``evaluate`` (``reputations``, ``threshold``),
    ``revise`` (``replies``), ``decide`` (``accept``), ``comment``
    (``reader_id``, ``text``).  Every event may carry a ``timestamp``.
    """

    threshold: float = REPUTATION_THRESHOLD
    allow_rereview: bool = False
    workflows: dict[str, ManuscriptWorkflow] = field(default_factory=dict)

    def get(self, manuscript_id: str) -> ManuscriptWorkflow:
        try:
            return self.workflows[manuscript_id]
        except KeyError:
            raise WorkflowError(f"unknown manuscript {manuscript_id!r}") from None

    def apply(self, event: Mapping) -> ManuscriptWorkflow:
        mid = event["manuscript_id"]
        op = event["op"]
        ts = event.get("timestamp")
        if op == "submit":
            wf = submit_manuscript(mid, self.workflows, ts)
        else:
            wf = self.get(mid)
            if op == "select":
                wf = select_for_review(wf, self.allow_rereview, ts)
            elif op == "report":
                wf = record_report(wf, RefereeReport(event["referee_id"], event["verdict"],
                                                     event.get("text", ""), ts or 0))
            elif op == "evaluate":
                wf = evaluate_reports(wf, event.get("reputations", {}),
                                      event.get("threshold", self.threshold), timestamp=ts)
            elif op == "revise":
                wf = submit_revision(wf, event.get("replies", ()), ts)
            elif op == "decide":
                wf = editorial_decision(wf, bool(event["accept"]), ts)
            elif op == "comment":
                wf = add_reader_comment(wf, event["reader_id"], event.get("text", ""))
            else:
                raise ValueError(f"unknown workflow op {op!r}")
        self.workflows[mid] = wf
        return wf

    def replay(self, path: str | Path) -> "ReviewDesk":
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    self.apply(json.loads(line))
                except (KeyError, ValueError, TypeError, WorkflowError) as exc:
                    raise ParseError(path, lineno, str(exc)) from None
        return self

    def transitions(self) -> list[Transition]:
        return [t for mid in sorted(self.workflows) for t in self.workflows[mid].history]
