"""Grading engine: automatic checks plus human judgments -> criterion grades.

Scoring semantics: a criterion is Satisfied (1 point) when every applicable
minimum item is met and "all or most" full-credit items are met, Partially
Satisfied (0.5) when the minimum is complete but full credit falls short,
and Not Satisfied (0) otherwise. Full-credit items never rescue a missing
minimum. "Most" is quantified as a configurable fraction of the applicable
full-credit items (default 0.75; 1.0 gives the strict conjunctive reading).
Grades apply separately to every evaluation, except once-per-report criteria
which are graded a single time at report level.

Everything here is pure: assessments, sessions, and scorecards are value
objects, and the same inputs always produce the same outputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Iterator

from . import reportdoc
from .agreement import RaterMatrix
from .reportdoc import FactSet, ReportDocument, Scope
from .rubric import (
    Applicability,
    CategoryScope,
    Criterion,
    Rubric,
    SpecialRule,
    applicable_criteria,
    applicable_requirements,
)

REPORT_SCOPE = "__report__"
ASSESSMENT_SCHEMA_ID = "stream-assessment/v1"
SESSION_SCHEMA_ID = "stream-grades/v1"

MET = frozenset({"met_auto", "met_judged"})


class GradingError(ValueError):
    """Engine contract violations: bad session targets, missing statuses."""


class PendingJudgmentsError(GradingError):
    def __init__(self, count: int):
        super().__init__(f"{count} judgments pending")
        self.count = count


class Status(str, Enum):
    MET_AUTO = "met_auto"
    MET_JUDGED = "met_judged"
    UNMET = "unmet"
    NOT_APPLICABLE = "not_applicable"
    PENDING = "pending"

    @property
    def met(self) -> bool:
        return self.value in MET


@dataclass(frozen=True)
class RequirementStatus:
    requirement_id: str
    status: Status
    note: str = ""
    judge: str | None = None

    def to_dict(self) -> dict:
        out: dict = {"requirement": self.requirement_id, "status": self.status.value}
        if self.note:
            out["note"] = self.note
        if self.judge:
            out["judge"] = self.judge
        return out

    @classmethod
    def from_dict(cls, raw: dict) -> "RequirementStatus":
        return cls(
            requirement_id=raw["requirement"],
            status=Status(raw["status"]),
            note=raw.get("note", ""),
            judge=raw.get("judge"),
        )


@dataclass(frozen=True)
class Assessment:
    """Per-requirement statuses for every applicable criterion of a report.

    ``cells`` maps a scope (evaluation name, or ``__report__`` for the
    once-per-report criteria) to criterion id to statuses. ``facts`` carries
    the extracted applicability facts per scope so scoring can evaluate
    footnote rules without re-reading the report.
    """

    report_ref: str
    rubric_version: str
    cells: dict[str, dict[str, tuple[RequirementStatus, ...]]]
    facts: dict[str, FactSet] = field(default_factory=dict, compare=False)
    generated_at: str | None = None

    def scopes(self) -> list[str]:
        return list(self.cells.keys())

    def statuses(self, scope: str, criterion_id: str) -> tuple[RequirementStatus, ...]:
        return self.cells[scope][criterion_id]

    def pending(self) -> list[tuple[str, str, str]]:
        """(scope, criterion id, requirement id) for every pending item."""
        out = []
        for scope, criteria in self.cells.items():
            for cid, statuses in criteria.items():
                for st in statuses:
                    if st.status is Status.PENDING:
                        out.append((scope, cid, st.requirement_id))
        return out

    def to_dict(self) -> dict:
        return {
            "schema": ASSESSMENT_SCHEMA_ID,
            "report_ref": self.report_ref,
            "rubric_version": self.rubric_version,
            "cells": {
                scope: {cid: [s.to_dict() for s in statuses] for cid, statuses in criteria.items()}
                for scope, criteria in self.cells.items()
            },
            **({"generated_at": self.generated_at} if self.generated_at else {}),
        }


@dataclass(frozen=True)
class Judgment:
    seq: int
    requirement_id: str
    scope: str  # evaluation name, or REPORT_SCOPE
    verdict: str  # "met" | "unmet" | "not_applicable"
    comment: str = ""
    override: bool = False

    def to_dict(self) -> dict:
        return {
            "seq": self.seq,
            "evaluation": None if self.scope == REPORT_SCOPE else self.scope,
            "requirement": self.requirement_id,
            "verdict": self.verdict,
            "comment": self.comment,
            "override": self.override,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "Judgment":
        scope = raw.get("evaluation")
        return cls(
            seq=int(raw["seq"]),
            requirement_id=raw["requirement"],
            scope=REPORT_SCOPE if scope in (None, REPORT_SCOPE) else scope,
            verdict=raw["verdict"],
            comment=raw.get("comment", ""),
            override=bool(raw.get("override", False)),
        )


@dataclass(frozen=True)
class GraderSession:
    """Append-only journal of one grader's judgments on one report."""

    grader: str
    report_ref: str
    rubric_version: str
    judgments: tuple[Judgment, ...] = ()
    created: str | None = None
    updated: str | None = None

    def next_seq(self) -> int:
        return max((j.seq for j in self.judgments), default=0) + 1

    def with_judgment(self, judgment: Judgment) -> "GraderSession":
        if judgment.seq != self.next_seq():
            raise GradingError(
                f"stale judgment sequence: expected {self.next_seq()}, got {judgment.seq}"
            )
        return replace(self, judgments=self.judgments + (judgment,))

    def effective(self) -> dict[tuple[str, str], Judgment]:
        """Latest judgment per (scope, requirement); earlier entries are
        superseded but remain in the journal."""
        out: dict[tuple[str, str], Judgment] = {}
        for j in sorted(self.judgments, key=lambda j: j.seq):
            out[(j.scope, j.requirement_id)] = j
        return out

    def to_dict(self) -> dict:
        out: dict = {
            "schema": SESSION_SCHEMA_ID,
            "grader": self.grader,
            "report_ref": self.report_ref,
            "rubric_version": self.rubric_version,
            "judgments": [j.to_dict() for j in self.judgments],
        }
        if self.created:
            out["created"] = self.created
        if self.updated:
            out["updated"] = self.updated
        return out

    @classmethod
    def from_dict(cls, raw: dict) -> "GraderSession":
        if raw.get("schema") != SESSION_SCHEMA_ID:
            raise GradingError(f"unknown session schema: {raw.get('schema')!r}")
        return cls(
            grader=raw["grader"],
            report_ref=raw["report_ref"],
            rubric_version=raw["rubric_version"],
            judgments=tuple(Judgment.from_dict(j) for j in raw.get("judgments", [])),
            created=raw.get("created"),
            updated=raw.get("updated"),
        )


@dataclass(frozen=True)
class ScoringConfig:
    full_credit_threshold: float = 0.75
    allow_pending: bool = False

    def __post_init__(self) -> None:
        if not (0.0 <= self.full_credit_threshold <= 1.0):
            raise GradingError("full_credit_threshold must be within [0, 1]")


class GradeState(str, Enum):
    SATISFIED = "satisfied"
    PARTIAL = "partial"
    NOT_SATISFIED = "not_satisfied"
    NOT_APPLICABLE = "not_applicable"
    PENDING = "pending"


_GRADE_VALUES = {
    GradeState.SATISFIED: 1.0,
    GradeState.PARTIAL: 0.5,
    GradeState.NOT_SATISFIED: 0.0,
}


@dataclass(frozen=True)
class Grade:
    state: GradeState
    rationale: str = ""

    @property
    def value(self) -> float | None:
        return _GRADE_VALUES.get(self.state)

    @property
    def countable(self) -> bool:
        """Whether this cell enters the applicable-count denominator."""
        return self.state is not GradeState.NOT_APPLICABLE

    def to_dict(self) -> dict:
        out: dict = {"state": self.state.value}
        if self.value is not None:
            out["value"] = self.value
        if self.rationale:
            out["rationale"] = self.rationale
        return out

    @classmethod
    def from_dict(cls, raw: dict) -> "Grade":
        return cls(state=GradeState(raw["state"]), rationale=raw.get("rationale", ""))


# ---------------------------------------------------------------------------
# automatic assessment

def auto_assess(report: ReportDocument, rubric: Rubric) -> Assessment:
    """Resolve every applicable requirement structurally.

    Field-presence items become MetAuto when the fact is stated locally or in
    the shared section, Unmet when absent; judgment items and unknown
    applicability become PendingJudgment; requirements whose ONLY IF gate is
    known false become NotApplicable.
    """
    cells: dict[str, dict[str, tuple[RequirementStatus, ...]]] = {}
    facts_by_scope: dict[str, FactSet] = {}
    for name in report.evaluation_names():
        meta = report.metadata(name)
        facts = reportdoc.extract_facts(report, name)
        facts_by_scope[name] = facts
        per_criterion: dict[str, tuple[RequirementStatus, ...]] = {}
        for entry in applicable_criteria(rubric, meta):
            if entry.once_per_report:
                continue
            criterion = rubric.criterion(entry.id)
            per_criterion[criterion.id] = _assess_criterion(report, name, criterion, facts)
        cells[name] = per_criterion

    report_level_facts = reportdoc.report_facts(report)
    facts_by_scope[REPORT_SCOPE] = report_level_facts
    report_cells: dict[str, tuple[RequirementStatus, ...]] = {}
    for category in rubric.categories:
        if category.scope is not CategoryScope.ONCE_PER_REPORT:
            continue
        for criterion in category.criteria:
            report_cells[criterion.id] = _assess_criterion(
                report, None, criterion, report_level_facts
            )
    cells[REPORT_SCOPE] = report_cells
    return Assessment(
        report_ref=report.digest(),
        rubric_version=rubric.version,
        cells=cells,
        facts=facts_by_scope,
    )


def _assess_criterion(
    report: ReportDocument,
    evaluation: str | None,
    criterion: Criterion,
    facts: FactSet,
) -> tuple[RequirementStatus, ...]:
    statuses = []
    for req, applicability in applicable_requirements(criterion, facts):
        if applicability is Applicability.NOT_APPLICABLE:
            statuses.append(
                RequirementStatus(req.id, Status.NOT_APPLICABLE, note=f"condition not met: {req.condition.fact}")
            )
            continue
        if applicability is Applicability.UNKNOWN or req.check.kind == "judgment":
            statuses.append(RequirementStatus(req.id, Status.PENDING))
            continue
        scope = _presence(report, evaluation, req.check.any_of, req.check.all_of)
        if scope is Scope.ABSENT:
            statuses.append(RequirementStatus(req.id, Status.UNMET, note="absent from report"))
        else:
            statuses.append(RequirementStatus(req.id, Status.MET_AUTO, note=f"present ({scope.value})"))
    return tuple(statuses)


def _presence(
    report: ReportDocument,
    evaluation: str | None,
    any_of: tuple[str, ...],
    all_of: tuple[str, ...],
) -> Scope:
    try:
        if evaluation is None:
            # report-level criteria check shared paths against the document
            eval_names = report.evaluation_names()
            probe = eval_names[0] if eval_names else None

            def one(path: str) -> Scope:
                if probe is not None:
                    return reportdoc.resolve_scope(report, probe, path)
                segments = path.split(".")
                if segments[0] == "evaluation":
                    return Scope.ABSENT
                return (
                    Scope.SHARED
                    if reportdoc._walk_presence(report.content, reportdoc._split_path(path))
                    else Scope.ABSENT
                )

        else:

            def one(path: str) -> Scope:
                return reportdoc.resolve_scope(report, evaluation, path)

        if all_of:
            scopes = [one(p) for p in all_of]
            if any(s is Scope.ABSENT for s in scopes):
                return Scope.ABSENT
            return Scope.LOCAL if Scope.LOCAL in scopes else Scope.SHARED
        scopes = [one(p) for p in any_of]
        if Scope.LOCAL in scopes:
            return Scope.LOCAL
        if Scope.SHARED in scopes:
            return Scope.SHARED
        return Scope.ABSENT
    except KeyError as exc:
        raise GradingError(f"rubric/report schema mismatch: {exc}") from exc


# ---------------------------------------------------------------------------
# judgments

def apply_judgments(assessment: Assessment, session: GraderSession) -> Assessment:
    """Fold a grader session into an assessment, returning a new assessment.

    Pending items take the judged verdict; auto-resolved items may only be
    changed with the explicit override flag (recorded in the note). Judgments
    for requirements that are not applicable in the assessment are rejected.
    NotApplicable verdicts and overrides must carry a comment.
    """
    if session.report_ref != assessment.report_ref:
        raise GradingError(
            f"session targets report {session.report_ref}, assessment is for {assessment.report_ref}"
        )
    if session.rubric_version != assessment.rubric_version:
        raise GradingError(
            f"session rubric version {session.rubric_version!r} != {assessment.rubric_version!r}"
        )
    cells = {
        scope: {cid: list(statuses) for cid, statuses in criteria.items()}
        for scope, criteria in assessment.cells.items()
    }
    for (scope, rid), judgment in sorted(session.effective().items(), key=lambda kv: kv[1].seq):
        if scope not in cells:
            raise GradingError(f"judgment targets unknown scope {scope!r}")
        located = None
        for cid, statuses in cells[scope].items():
            for i, st in enumerate(statuses):
                if st.requirement_id == rid:
                    located = (cid, i, st)
                    break
            if located:
                break
        if located is None:
            raise GradingError(f"requirement not applicable: {rid} in scope {scope!r}")
        cid, i, current = located
        if current.status is Status.NOT_APPLICABLE and not judgment.override:
            raise GradingError(f"requirement not applicable: {rid} in scope {scope!r}")
        if judgment.verdict == "not_applicable" and not judgment.comment:
            raise GradingError(f"{rid}: a NotApplicable judgment requires a comment")
        auto_resolved = current.status in (Status.MET_AUTO, Status.UNMET) and current.judge is None
        if auto_resolved and not judgment.override:
            raise GradingError(
                f"{rid}: automatic status {current.status.value} may only be changed with an override flag"
            )
        if judgment.override and not judgment.comment:
            raise GradingError(f"{rid}: overrides require a comment")
        new_status = {
            "met": Status.MET_JUDGED,
            "unmet": Status.UNMET,
            "not_applicable": Status.NOT_APPLICABLE,
        }.get(judgment.verdict)
        if new_status is None:
            raise GradingError(f"unknown verdict {judgment.verdict!r}")
        note = judgment.comment
        if judgment.override:
            note = f"override of {current.status.value}" + (f": {judgment.comment}" if judgment.comment else "")
        cells[scope][cid][i] = RequirementStatus(rid, new_status, note=note, judge=session.grader)
    return replace(
        assessment,
        cells={
            scope: {cid: tuple(statuses) for cid, statuses in criteria.items()}
            for scope, criteria in cells.items()
        },
    )


# ---------------------------------------------------------------------------
# criterion grading

def grade_criterion(
    statuses: Iterable[RequirementStatus],
    criterion: Criterion,
    config: ScoringConfig = ScoringConfig(),
    facts: FactSet | None = None,
) -> Grade:
    """Roll requirement statuses up into one criterion grade.

    Statuses must cover exactly the criterion's requirements. Any pending
    status yields a Pending marker rather than a grade.
    """
    status_by_id = {s.requirement_id: s for s in statuses}
    missing = [r.id for r in criterion.requirements if r.id not in status_by_id]
    if missing:
        raise GradingError(f"statuses missing for applicable requirement(s): {', '.join(missing)}")
    pending = [s for s in status_by_id.values() if s.status is Status.PENDING]
    if pending:
        return Grade(GradeState.PENDING, rationale=f"{len(pending)} judgment(s) pending")

    met = {rid for rid, s in status_by_id.items() if s.status.met}
    min_suffices = False
    for rule in criterion.special_rules:
        if not _rule_triggered(rule, met, facts):
            continue
        if rule.effect_kind == "counts_toward_minimum":
            if rule.source in met:
                met.add(rule.target)
        elif rule.effect_kind == "minimum_suffices_for_full":
            min_suffices = True

    def applicable(reqs) -> list[str]:
        return [
            r.id
            for r in reqs
            if status_by_id[r.id].status is not Status.NOT_APPLICABLE
        ]

    min_ids = applicable(criterion.minimum)
    full_ids = applicable(criterion.full_credit)
    if not min_ids and not full_ids:
        return Grade(GradeState.NOT_APPLICABLE, rationale="no applicable requirements")

    unmet_min = [rid for rid in min_ids if rid not in met]
    unmet_full = [rid for rid in full_ids if rid not in met]
    minimum_met = not unmet_min
    full_fraction = 1.0 if not full_ids else (len(full_ids) - len(unmet_full)) / len(full_ids)

    if minimum_met and (min_suffices or full_fraction >= config.full_credit_threshold - 1e-12):
        rationale = "all applicable requirements met" if not unmet_full else (
            f"minimum met; full credit at {full_fraction:.2f}"
            + ("; footnote rule grants full credit" if min_suffices else "")
        )
        return Grade(GradeState.SATISFIED, rationale=rationale)
    if minimum_met:
        return Grade(
            GradeState.PARTIAL,
            rationale=f"minimum met; unmet full-credit items: {', '.join(unmet_full)}",
        )
    return Grade(
        GradeState.NOT_SATISFIED,
        rationale=f"unmet minimum items: {', '.join(unmet_min)}",
    )


def _rule_triggered(rule: SpecialRule, met: set[str], facts: FactSet | None) -> bool:
    if rule.trigger_kind == "requirement_met":
        return rule.requirement in met
    value = facts.get(rule.fact) if facts is not None else None
    if value is None:
        return False
    return (not value) if rule.negate else bool(value)


# ---------------------------------------------------------------------------
# scorecards

@dataclass(frozen=True)
class ScorecardRow:
    scope: str  # evaluation name or REPORT_SCOPE
    cells: dict[str, Grade]  # criterion id -> grade
    points: float
    applicable: int


@dataclass(frozen=True)
class Scorecard:
    """Grade grid plus aggregates for one report under one rubric."""

    report_ref: str
    rubric_version: str
    config: ScoringConfig
    rows: tuple[ScorecardRow, ...]
    category_points: dict[int, float]
    category_applicable: dict[int, int]
    overall_points: float
    overall_applicable: int
    pending_count: int

    @property
    def normalized(self) -> float:
        if self.overall_applicable == 0:
            return 0.0
        return self.overall_points / self.overall_applicable

    @property
    def provisional(self) -> bool:
        return self.pending_count > 0

    def display_percentage(self) -> str:
        """Half-up one-decimal percentage for display; exports keep the raw
        fraction."""
        from decimal import ROUND_HALF_UP, Decimal

        if self.overall_applicable == 0:
            return "0.0%"
        pct = (
            Decimal(str(self.overall_points)) / Decimal(self.overall_applicable) * 100
        ).quantize(Decimal("0.1"), rounding=ROUND_HALF_UP)
        return f"{pct}%"

    def row(self, scope: str) -> ScorecardRow:
        for row in self.rows:
            if row.scope == scope:
                return row
        raise KeyError(f"no scorecard row for scope {scope!r}")

    def to_dict(self) -> dict:
        return {
            "report_ref": self.report_ref,
            "rubric_version": self.rubric_version,
            "config": {
                "full_credit_threshold": self.config.full_credit_threshold,
                "allow_pending": self.config.allow_pending,
            },
            "rows": [
                {
                    "scope": row.scope,
                    "cells": {cid: grade.to_dict() for cid, grade in row.cells.items()},
                    "points": row.points,
                    "applicable": row.applicable,
                }
                for row in self.rows
            ],
            "category_points": {str(k): v for k, v in self.category_points.items()},
            "category_applicable": {str(k): v for k, v in self.category_applicable.items()},
            "overall_points": self.overall_points,
            "overall_applicable": self.overall_applicable,
            "normalized": self.normalized,
            "pending_count": self.pending_count,
            "provisional": self.provisional,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "Scorecard":
        rows = tuple(
            ScorecardRow(
                scope=r["scope"],
                cells={cid: Grade.from_dict(g) for cid, g in r["cells"].items()},
                points=float(r["points"]),
                applicable=int(r["applicable"]),
            )
            for r in raw["rows"]
        )
        return cls(
            report_ref=raw["report_ref"],
            rubric_version=raw["rubric_version"],
            config=ScoringConfig(
                full_credit_threshold=float(raw["config"]["full_credit_threshold"]),
                allow_pending=bool(raw["config"]["allow_pending"]),
            ),
            rows=rows,
            category_points={int(k): float(v) for k, v in raw["category_points"].items()},
            category_applicable={int(k): int(v) for k, v in raw["category_applicable"].items()},
            overall_points=float(raw["overall_points"]),
            overall_applicable=int(raw["overall_applicable"]),
            pending_count=int(raw["pending_count"]),
        )


def score_report(
    assessment: Assessment, rubric: Rubric, config: ScoringConfig = ScoringConfig()
) -> Scorecard:
    """Populate the evaluation x criterion grid and all aggregates.

    Branch-excluded criteria appear as NotApplicable cells. With
    ``allow_pending`` set, pending cells count zero points (conservatively
    Not Satisfied) but stay in the denominator and flag the scorecard
    provisional; otherwise pending judgments are an error.
    """
    pending_count = len(assessment.pending())
    if pending_count and not config.allow_pending:
        raise PendingJudgmentsError(pending_count)

    rows: list[ScorecardRow] = []
    category_points: dict[int, float] = {cat.id: 0.0 for cat in rubric.categories}
    category_applicable: dict[int, int] = {cat.id: 0 for cat in rubric.categories}

    for scope in assessment.scopes():
        facts = assessment.facts.get(scope)
        once = scope == REPORT_SCOPE
        cells: dict[str, Grade] = {}
        points = 0.0
        applicable = 0
        for category in rubric.categories:
            if (category.scope is CategoryScope.ONCE_PER_REPORT) is not once:
                continue
            for criterion in category.criteria:
                statuses = assessment.cells[scope].get(criterion.id)
                if statuses is None:
                    grade = Grade(
                        GradeState.NOT_APPLICABLE,
                        rationale=f"branch not applicable: {criterion.branch.value}",
                    )
                else:
                    grade = grade_criterion(statuses, criterion, config, facts)
                cells[criterion.id] = grade
                if grade.countable:
                    applicable += 1
                    category_applicable[category.id] += 1
                    value = grade.value if grade.value is not None else 0.0
                    points += value
                    category_points[category.id] += value
        rows.append(ScorecardRow(scope=scope, cells=cells, points=points, applicable=applicable))

    overall_points = sum(r.points for r in rows)
    overall_applicable = sum(r.applicable for r in rows)
    # guard against drift between row and category aggregation
    assert math.isclose(overall_points, sum(category_points.values()))
    return Scorecard(
        report_ref=assessment.report_ref,
        rubric_version=assessment.rubric_version,
        config=config,
        rows=tuple(rows),
        category_points=category_points,
        category_applicable=category_applicable,
        overall_points=overall_points,
        overall_applicable=overall_applicable,
        pending_count=pending_count,
    )


# ---------------------------------------------------------------------------
# multi-grader merge

@dataclass(frozen=True)
class MergeResult:
    matrix: RaterMatrix
    applicability_disagreements: tuple[str, ...]


def merge_grader_sessions(
    sessions: list[GraderSession], rubric: Rubric, report: ReportDocument
) -> MergeResult:
    """Build the items x graders grade matrix from independent sessions.

    Rows are (scope, criterion) cells gradable by every rater; cells where
    raters split between a grade and NotApplicable are excluded and recorded
    as applicability disagreements. Cells left pending by any rater are
    excluded (they were not gradable by all raters).
    """
    if len(sessions) < 2:
        raise GradingError("need at least two graders")
    refs = {s.report_ref for s in sessions}
    if len(refs) > 1 or report.digest() not in refs:
        raise GradingError("sessions reference different reports")
    base = auto_assess(report, rubric)
    scorecards = [score_report(apply_judgments(base, s), rubric, ScoringConfig(allow_pending=True)) for s in sessions]
    raters = [s.grader for s in sessions]

    items: list[str] = []
    values: list[list[float | None]] = []
    disagreements: list[str] = []
    for row_index, row in enumerate(scorecards[0].rows):
        for cid in row.cells:
            grades = [card.rows[row_index].cells[cid] for card in scorecards]
            states = {g.state for g in grades}
            label = f"{row.scope}:{cid}"
            if states == {GradeState.NOT_APPLICABLE}:
                continue
            if GradeState.NOT_APPLICABLE in states:
                disagreements.append(label)
                continue
            if GradeState.PENDING in states:
                continue
            items.append(label)
            values.append([g.value for g in grades])
    matrix = RaterMatrix(items=tuple(items), raters=tuple(raters), values=tuple(tuple(v) for v in values))
    return MergeResult(matrix=matrix, applicability_disagreements=tuple(disagreements))


def session_marking_all_pending(
    assessment: Assessment,
    grader: str,
    verdict: str = "met",
    comment: str = "scripted judgment",
) -> GraderSession:
    """A scripted session resolving every pending item with one verdict.

    Used by the end-to-end fixtures and the demo workflow; real grading goes
    through incremental judgments.
    """
    judgments = []
    for seq, (scope, _cid, rid) in enumerate(assessment.pending(), start=1):
        judgments.append(
            Judgment(seq=seq, requirement_id=rid, scope=scope, verdict=verdict, comment=comment)
        )
    return GraderSession(
        grader=grader,
        report_ref=assessment.report_ref,
        rubric_version=assessment.rubric_version,
        judgments=tuple(judgments),
    )


def iter_grades(scorecard: Scorecard) -> Iterator[tuple[str, str, Grade]]:
    for row in scorecard.rows:
        for cid, grade in row.cells.items():
            yield row.scope, cid, grade
