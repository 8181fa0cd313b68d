"""Peer-review event logs: parsing, validation, and as-of-date history profiles.

An event log is line-delimited JSON, one record per line.  Every record has a
``type`` (submission | assignment | report | decision | citation), a
``paper_id`` and an ISO date, plus kind-specific fields.  After validation the
log is wrapped in an immutable :class:`Corpus` that serves point-in-time
author and reviewer profiles; "point-in-time" always means *strictly before*
the requested date, which is what makes downstream features leakage-free.
"""

from __future__ import annotations

import datetime as dt
import json
from dataclasses import dataclass
from typing import Iterable, Optional, Union

TERMINAL_OUTCOMES = ("accept", "reject", "withdraw")
RECOMMENDATIONS = ("accept", "reject", "revise")


@dataclass(frozen=True)
class Submission:
    paper_id: str
    date: dt.date
    author_ids: tuple[str, ...]
    title: str


@dataclass(frozen=True)
class Assignment:
    paper_id: str
    date: dt.date
    editor_id: str
    reviewer_id: str
    round: int


@dataclass(frozen=True)
class Report:
    paper_id: str
    date: dt.date
    reviewer_id: str
    round: int
    text: str
    recommendation: str


@dataclass(frozen=True)
class Decision:
    paper_id: str
    date: dt.date
    outcome: str
    round: int


@dataclass(frozen=True)
class CitationRecord:
    paper_id: str
    date: dt.date
    cumulative_citations: int
    as_of_year: int


ReviewEvent = Union[Submission, Assignment, Report, Decision, CitationRecord]


def event_to_record(ev: ReviewEvent) -> dict:
    """Inverse of :func:`parse_events` for one event."""
    if isinstance(ev, Submission):
        return {"type": "submission", "paper_id": ev.paper_id,
                "date": ev.date.isoformat(), "author_ids": list(ev.author_ids),
                "title": ev.title}
    if isinstance(ev, Assignment):
        return {"type": "assignment", "paper_id": ev.paper_id,
                "date": ev.date.isoformat(), "editor_id": ev.editor_id,
                "reviewer_id": ev.reviewer_id, "round": ev.round}
    if isinstance(ev, Report):
        return {"type": "report", "paper_id": ev.paper_id,
                "date": ev.date.isoformat(), "reviewer_id": ev.reviewer_id,
                "round": ev.round, "text": ev.text,
                "recommendation": ev.recommendation}
    if isinstance(ev, Decision):
        return {"type": "decision", "paper_id": ev.paper_id,
                "date": ev.date.isoformat(), "outcome": ev.outcome,
                "round": ev.round}
    if isinstance(ev, CitationRecord):
        return {"type": "citation", "paper_id": ev.paper_id,
                "date": ev.date.isoformat(),
                "cumulative_citations": ev.cumulative_citations,
                "as_of_year": ev.as_of_year}
    raise TypeError(f"not a review event: {ev!r}")


def write_events(events: Iterable[ReviewEvent], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for ev in events:
            fh.write(json.dumps(event_to_record(ev), sort_keys=True) + "\n")


@dataclass(frozen=True)
class LogError:
    """One diagnostic tied to a 1-based line / event position."""

    line: int
    message: str

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return f"line {self.line}: {self.message}"


class CorpusError(ValueError):
    """Raised when an event list fails validation."""

    def __init__(self, errors: list[LogError]):
        self.errors = errors
        preview = "; ".join(str(e) for e in errors[:5])
        more = f" (+{len(errors) - 5} more)" if len(errors) > 5 else ""
        super().__init__(f"{len(errors)} validation error(s): {preview}{more}")


def _parse_date(raw: object) -> dt.date:
    if not isinstance(raw, str):
        raise ValueError(f"date must be an ISO string, got {raw!r}")
    return dt.date.fromisoformat(raw)


def _require(record: dict, key: str) -> object:
    if key not in record:
        raise ValueError(f"missing field {key!r}")
    return record[key]


def _parse_record(record: dict) -> ReviewEvent:
    kind = _require(record, "type")
    paper_id = str(_require(record, "paper_id"))
    date = _parse_date(_require(record, "date"))
    if kind == "submission":
        authors = _require(record, "author_ids")
        if not isinstance(authors, list) or not authors:
            raise ValueError("author_ids must be a non-empty list")
        return Submission(paper_id, date, tuple(str(a) for a in authors),
                          str(record.get("title", "")))
    if kind == "assignment":
        rnd = int(_require(record, "round"))
        if rnd < 1:
            raise ValueError(f"round must be a positive int, got {rnd}")
        return Assignment(paper_id, date, str(_require(record, "editor_id")),
                          str(_require(record, "reviewer_id")), rnd)
    if kind == "report":
        rnd = int(_require(record, "round"))
        if rnd < 1:
            raise ValueError(f"round must be a positive int, got {rnd}")
        rec = str(_require(record, "recommendation"))
        if rec not in RECOMMENDATIONS:
            raise ValueError(f"unknown recommendation {rec!r}")
        return Report(paper_id, date, str(_require(record, "reviewer_id")),
                      rnd, str(_require(record, "text")), rec)
    if kind == "decision":
        outcome = str(_require(record, "outcome"))
        if outcome not in TERMINAL_OUTCOMES:
            raise ValueError(f"unknown outcome {outcome!r}")
        rnd = int(_require(record, "round"))
        if rnd < 1:
            raise ValueError(f"round must be a positive int, got {rnd}")
        return Decision(paper_id, date, outcome, rnd)
    if kind == "citation":
        cites = int(_require(record, "cumulative_citations"))
        if cites < 0:
            raise ValueError("cumulative_citations must be >= 0")
        return CitationRecord(paper_id, date, cites,
                              int(_require(record, "as_of_year")))
    raise ValueError(f"unknown event type {kind!r}")


def parse_events(lines: Iterable[str]) -> tuple[list[ReviewEvent], list[LogError]]:
    """Parse line-delimited records, keeping file order.

    Returns the well-formed events plus per-line diagnostics for every
    ill-formed line; parsing never raises on bad input lines.
    """
    events: list[ReviewEvent] = []
    errors: list[LogError] = []
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            record = json.loads(line)
            if not isinstance(record, dict):
                raise ValueError("record must be a JSON object")
            events.append(_parse_record(record))
        except (ValueError, TypeError) as exc:
            errors.append(LogError(lineno, str(exc)))
    return events, errors


def validate_events(events: list[ReviewEvent]) -> list[LogError]:
    """Check the cross-event invariants of a parsed log.

    Positions in the returned diagnostics are 1-based indexes into ``events``.
    """
    errors: list[LogError] = []
    submission: dict[str, Submission] = {}
    decided: dict[str, Decision] = {}
    rounds: dict[str, set[int]] = {}

    for pos, ev in enumerate(events, start=1):
        pid = ev.paper_id
        if isinstance(ev, Submission):
            if pid in submission:
                errors.append(LogError(pos, f"duplicate submission for paper {pid}"))
            else:
                submission[pid] = ev
            continue
        if pid not in submission:
            errors.append(LogError(
                pos, f"{type(ev).__name__.lower()} for paper {pid} without prior submission"))
            continue
        if isinstance(ev, (Assignment, Report, Decision)):
            rounds.setdefault(pid, set()).add(ev.round)
        if isinstance(ev, Decision):
            if pid in decided:
                errors.append(LogError(pos, f"duplicate terminal decision for paper {pid}"))
            else:
                decided[pid] = ev
        elif isinstance(ev, CitationRecord):
            if pid not in decided:
                errors.append(LogError(
                    pos, f"citation record for paper {pid} before any terminal decision"))

    for pid, seen in sorted(rounds.items()):
        expected = set(range(1, max(seen) + 1))
        if seen != expected:
            errors.append(LogError(
                0, f"paper {pid}: rounds {sorted(seen)} are not contiguous from 1"))
    return errors


@dataclass(frozen=True)
class AuthorProfile:
    """Author history strictly before an as-of date."""

    author_id: str
    accept_count: int
    reject_count: int
    submission_dates: tuple[dt.date, ...]
    mean_inter_submission_gap: Optional[float]  # days, needs >= 2 submissions

    @property
    def acceptance_ratio(self) -> Optional[float]:
        decided = self.accept_count + self.reject_count
        if decided == 0:
            return None
        return self.accept_count / decided


@dataclass(frozen=True)
class ReviewerProfile:
    """Reviewer history strictly before an as-of date."""

    reviewer_id: str
    accept_count: int
    reject_count: int
    last_assignment_date: Optional[dt.date]

    @property
    def accept_ratio(self) -> Optional[float]:
        decided = self.accept_count + self.reject_count
        if decided == 0:
            return None
        return self.accept_count / decided


class Corpus:
    """Validated, indexed event log.  Immutable after construction.

    Withdrawn papers are excluded from every accept/reject ratio, both
    numerator and denominator.  Undefined ratios (no decided papers) stay
    ``None``; imputation is a modeling concern, not a corpus one.
    """

    def __init__(self, events: list[ReviewEvent]):
        errors = validate_events(events)
        if errors:
            raise CorpusError(errors)
        self.events: tuple[ReviewEvent, ...] = tuple(events)

        self.submissions: dict[str, Submission] = {}
        self.assignments: dict[str, list[Assignment]] = {}
        self.reports: dict[str, list[Report]] = {}
        self.decisions: dict[str, Decision] = {}
        self.citation_records: dict[str, CitationRecord] = {}
        self._papers_by_author: dict[str, list[str]] = {}
        self._assignments_by_reviewer: dict[str, list[Assignment]] = {}
        self._reported_papers: dict[str, list[str]] = {}

        for ev in events:
            if isinstance(ev, Submission):
                self.submissions[ev.paper_id] = ev
                for author in ev.author_ids:
                    self._papers_by_author.setdefault(author, []).append(ev.paper_id)
            elif isinstance(ev, Assignment):
                self.assignments.setdefault(ev.paper_id, []).append(ev)
                self._assignments_by_reviewer.setdefault(ev.reviewer_id, []).append(ev)
            elif isinstance(ev, Report):
                self.reports.setdefault(ev.paper_id, []).append(ev)
                seen = self._reported_papers.setdefault(ev.reviewer_id, [])
                if ev.paper_id not in seen:
                    seen.append(ev.paper_id)
            elif isinstance(ev, Decision):
                self.decisions[ev.paper_id] = ev
            elif isinstance(ev, CitationRecord):
                current = self.citation_records.get(ev.paper_id)
                if current is None or ev.date >= current.date:
                    self.citation_records[ev.paper_id] = ev

    @classmethod
    def from_lines(cls, lines: Iterable[str]) -> "Corpus":
        events, errors = parse_events(lines)
        if errors:
            raise CorpusError(errors)
        return cls(events)

    @classmethod
    def from_file(cls, path) -> "Corpus":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_lines(fh)

    # -- paper-level lookups ------------------------------------------------

    def paper_ids(self) -> list[str]:
        """All submitted papers, ordered by submission date then id."""
        return sorted(self.submissions, key=lambda p: (self.submissions[p].date, p))

    def submission_date(self, paper_id: str) -> dt.date:
        return self.submissions[paper_id].date

    def outcome(self, paper_id: str) -> Optional[str]:
        dec = self.decisions.get(paper_id)
        return dec.outcome if dec is not None else None

    def publication_year(self, paper_id: str) -> Optional[int]:
        dec = self.decisions.get(paper_id)
        return dec.date.year if dec is not None else None

    def citations(self, paper_id: str) -> Optional[int]:
        rec = self.citation_records.get(paper_id)
        return rec.cumulative_citations if rec is not None else None

    def assigned_reviewers(self, paper_id: str) -> list[str]:
        """Distinct reviewers ever assigned to a paper, in assignment order."""
        seen: list[str] = []
        for a in self.assignments.get(paper_id, []):
            if a.reviewer_id not in seen:
                seen.append(a.reviewer_id)
        return seen

    # -- as-of-date profiles ------------------------------------------------

    def author_profile(self, author_id: str, as_of: dt.date) -> AuthorProfile:
        accept = reject = 0
        sub_dates: list[dt.date] = []
        for pid in self._papers_by_author.get(author_id, []):
            sub = self.submissions[pid]
            if sub.date < as_of:
                sub_dates.append(sub.date)
            dec = self.decisions.get(pid)
            if dec is None or dec.date >= as_of:
                continue
            if dec.outcome == "accept":
                accept += 1
            elif dec.outcome == "reject":
                reject += 1
        sub_dates.sort()
        gap: Optional[float] = None
        if len(sub_dates) >= 2:
            total = (sub_dates[-1] - sub_dates[0]).days
            gap = total / (len(sub_dates) - 1)
        return AuthorProfile(author_id, accept, reject, tuple(sub_dates), gap)

    def reviewer_profile(self, reviewer_id: str, as_of: dt.date) -> ReviewerProfile:
        accept = reject = 0
        for pid in self._reported_papers.get(reviewer_id, []):
            dec = self.decisions.get(pid)
            if dec is None or dec.date >= as_of:
                continue
            if dec.outcome == "accept":
                accept += 1
            elif dec.outcome == "reject":
                reject += 1
        last: Optional[dt.date] = None
        for a in self._assignments_by_reviewer.get(reviewer_id, []):
            if a.date < as_of and (last is None or a.date > last):
                last = a.date
        return ReviewerProfile(reviewer_id, accept, reject, last)

    def reviewer_assignment_dates(self, reviewer_id: str) -> list[dt.date]:
        return sorted(a.date for a in self._assignments_by_reviewer.get(reviewer_id, []))
