"""The STREAM v1 reporting standard as immutable, versioned data.

The built-in definition lives in ``data/stream_v1_rubric.json`` and loads
with no external file; alternative rubric documents under the
``stream-rubric/v1`` format can be supplied for future standard revisions.
Rubric values are frozen after load and safe to share across threads.

Structure: 6 categories -> 28 criteria -> atomic requirements split into a
"minimum" tier (all required for partial credit) and a "full credit" tier.
Criteria may be gated on evaluation branching facts (human vs auto grading,
human baseline vs none); individual requirements may be gated on report
facts (ONLY IF ...) or left to grader judgment (WHERE APPLICABLE ...).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from typing import Iterator, NamedTuple

from . import reportdoc
from .reportdoc import EvaluationMetadata, FactSet

RUBRIC_SCHEMA_ID = "stream-rubric/v1"
BUILTIN_VERSION = "stream-v1"

EXPECTED_LEAF_COUNT = 28
EXPECTED_CATEGORY_LEAVES = (3, 9, 3, 3, 5, 5)


class RubricError(ValueError):
    """Raised when a rubric document cannot be loaded as a valid rubric."""


class CategoryScope(str, Enum):
    PER_EVALUATION = "per_evaluation"
    ONCE_PER_REPORT = "once_per_report"


class Branch(str, Enum):
    """Criterion gate over evaluation metadata."""

    ALWAYS = "always"
    HUMAN_GRADED = "human_graded"
    AUTO_GRADED = "auto_graded"
    HUMAN_BASELINE = "human_baseline"
    NO_HUMAN_BASELINE = "no_human_baseline"

    def applies(self, meta: EvaluationMetadata) -> bool:
        if self is Branch.ALWAYS:
            return True
        if self is Branch.HUMAN_GRADED:
            return meta.human_graded
        if self is Branch.AUTO_GRADED:
            return meta.auto_graded
        if self is Branch.HUMAN_BASELINE:
            return meta.baseline_kind is reportdoc.BaselineKind.HUMAN_BASELINE
        return meta.baseline_kind is reportdoc.BaselineKind.NO_HUMAN_BASELINE


class Tier(str, Enum):
    MINIMUM = "minimum"
    FULL_CREDIT = "full_credit"


class Applicability(Enum):
    APPLICABLE = "applicable"
    NOT_APPLICABLE = "not_applicable"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Condition:
    """Always / OnlyIf(fact) / WhereApplicable gate on one requirement."""

    kind: str  # "always" | "only_if" | "where_applicable"
    fact: str | None = None
    negate: bool = False

    def evaluate(self, facts: FactSet | None) -> Applicability:
        if self.kind == "always":
            return Applicability.APPLICABLE
        if self.kind == "where_applicable":
            return Applicability.UNKNOWN
        value = facts.get(self.fact) if facts is not None else None
        if value is None:
            return Applicability.UNKNOWN
        if self.negate:
            value = not value
        return Applicability.APPLICABLE if value else Applicability.NOT_APPLICABLE

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.fact is not None:
            out["fact"] = self.fact
            out["negate"] = self.negate
        return out


@dataclass(frozen=True)
class CheckSpec:
    """How a requirement is checked: structural field presence or judgment."""

    kind: str  # "field_presence" | "judgment"
    any_of: tuple[str, ...] = ()
    all_of: tuple[str, ...] = ()

    @property
    def paths(self) -> tuple[str, ...]:
        return self.any_of + self.all_of

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.any_of:
            out["any_of"] = list(self.any_of)
        if self.all_of:
            out["all_of"] = list(self.all_of)
        return out


@dataclass(frozen=True)
class AtomicRequirement:
    id: str
    tier: Tier
    condition: Condition
    check: CheckSpec
    text: str
    provenance: str

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "tier": self.tier.value,
            "condition": self.condition.to_dict(),
            "check": self.check.to_dict(),
            "text": self.text,
            "provenance": self.provenance,
        }


@dataclass(frozen=True)
class SpecialRule:
    """A footnote-style scoring exception attached to one criterion.

    Effects: ``minimum_suffices_for_full`` upgrades a minimum-complete
    criterion straight to Satisfied while the trigger holds;
    ``counts_toward_minimum`` lets a met full-credit item stand in for a
    named minimum item.
    """

    trigger_kind: str  # "fact" | "requirement_met"
    effect_kind: str  # "minimum_suffices_for_full" | "counts_toward_minimum"
    provenance: str
    fact: str | None = None
    negate: bool = False
    requirement: str | None = None
    source: str | None = None
    target: str | None = None

    def to_dict(self) -> dict:
        trigger: dict = {"kind": self.trigger_kind}
        if self.trigger_kind == "fact":
            trigger["fact"] = self.fact
            trigger["negate"] = self.negate
        else:
            trigger["requirement"] = self.requirement
        effect: dict = {"kind": self.effect_kind}
        if self.effect_kind == "counts_toward_minimum":
            effect["source"] = self.source
            effect["target"] = self.target
        return {"trigger": trigger, "effect": effect, "provenance": self.provenance}


@dataclass(frozen=True)
class Criterion:
    id: str
    title: str
    summary: str
    branch: Branch
    minimum: tuple[AtomicRequirement, ...]
    full_credit: tuple[AtomicRequirement, ...]
    special_rules: tuple[SpecialRule, ...] = ()

    @property
    def requirements(self) -> tuple[AtomicRequirement, ...]:
        return self.minimum + self.full_credit

    def requirement(self, rid: str) -> AtomicRequirement:
        for req in self.requirements:
            if req.id == rid:
                return req
        raise KeyError(f"unknown requirement: {rid!r}")

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "title": self.title,
            "summary": self.summary,
            "branch": self.branch.value,
            "minimum": [r.to_dict() for r in self.minimum],
            "full_credit": [r.to_dict() for r in self.full_credit],
            "special_rules": [r.to_dict() for r in self.special_rules],
        }


@dataclass(frozen=True)
class Category:
    id: int
    title: str
    scope: CategoryScope
    criteria: tuple[Criterion, ...]

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "title": self.title,
            "scope": self.scope.value,
            "criteria": [c.to_dict() for c in self.criteria],
        }


@dataclass(frozen=True)
class Rubric:
    version: str
    categories: tuple[Category, ...]
    _criterion_index: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        index = {c.id: (c, cat) for cat in self.categories for c in cat.criteria}
        object.__setattr__(self, "_criterion_index", index)

    def criteria(self) -> Iterator[Criterion]:
        for cat in self.categories:
            yield from cat.criteria

    def criterion(self, cid: str) -> Criterion:
        try:
            return self._criterion_index[cid][0]
        except KeyError:
            raise KeyError(f"unknown criterion: {cid!r}") from None

    def category_of(self, cid: str) -> Category:
        try:
            return self._criterion_index[cid][1]
        except KeyError:
            raise KeyError(f"unknown criterion: {cid!r}") from None

    def all_requirements(self) -> Iterator[AtomicRequirement]:
        for criterion in self.criteria():
            yield from criterion.requirements

    def requirement(self, rid: str) -> AtomicRequirement:
        for req in self.all_requirements():
            if req.id == rid:
                return req
        raise KeyError(f"unknown requirement: {rid!r}")

    def criterion_of_requirement(self, rid: str) -> Criterion:
        for criterion in self.criteria():
            for req in criterion.requirements:
                if req.id == rid:
                    return criterion
        raise KeyError(f"unknown requirement: {rid!r}")

    def to_dict(self) -> dict:
        return {
            "schema": RUBRIC_SCHEMA_ID,
            "version": self.version,
            "categories": [c.to_dict() for c in self.categories],
        }


# ---------------------------------------------------------------------------
# loading

def load_rubric(source: str | dict | None = None) -> Rubric:
    """Load a rubric from JSON text, a parsed document, or the built-in.

    With no argument (or ``"stream-v1"``) the embedded STREAM v1 definition
    is returned. The result is checked against all rubric invariants; a
    definition that fails any of them raises :class:`RubricError`.
    """
    if source is None or source == BUILTIN_VERSION:
        raw = _load_builtin()
    elif isinstance(source, dict):
        raw = source
    else:
        try:
            raw = json.loads(source)
        except json.JSONDecodeError as exc:
            raise RubricError(f"malformed rubric document: {exc}") from exc
    if not isinstance(raw, dict) or raw.get("schema") != RUBRIC_SCHEMA_ID:
        raise RubricError(f"unknown rubric schema: {raw.get('schema') if isinstance(raw, dict) else raw!r}")
    try:
        rubric = _build(raw)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, RubricError):
            raise
        raise RubricError(f"malformed rubric document: {exc}") from exc
    problems = validate_rubric(rubric)
    if problems:
        raise RubricError("; ".join(f.message for f in problems[:3]))
    return rubric


def _load_builtin() -> dict:
    with resources.files("streamaudit.data").joinpath("stream_v1_rubric.json").open(
        "r", encoding="utf-8"
    ) as fh:
        return json.load(fh)


def _build(raw: dict) -> Rubric:
    categories = []
    for cat in raw["categories"]:
        criteria = []
        for crit in cat["criteria"]:
            minimum = tuple(_build_requirement(r) for r in crit["minimum"])
            full = tuple(_build_requirement(r) for r in crit["full_credit"])
            rules = tuple(_build_rule(r) for r in crit.get("special_rules", []))
            criteria.append(
                Criterion(
                    id=crit["id"],
                    title=crit["title"],
                    summary=crit.get("summary", crit["title"]),
                    branch=Branch(crit["branch"]),
                    minimum=minimum,
                    full_credit=full,
                    special_rules=rules,
                )
            )
        categories.append(
            Category(
                id=int(cat["id"]),
                title=cat["title"],
                scope=CategoryScope(cat["scope"]),
                criteria=tuple(criteria),
            )
        )
    return Rubric(version=raw["version"], categories=tuple(categories))


def _build_requirement(raw: dict) -> AtomicRequirement:
    cond_raw = raw["condition"]
    condition = Condition(
        kind=cond_raw["kind"],
        fact=cond_raw.get("fact"),
        negate=bool(cond_raw.get("negate", False)),
    )
    if condition.kind not in ("always", "only_if", "where_applicable"):
        raise RubricError(f"unknown condition kind: {condition.kind!r}")
    if condition.kind == "only_if" and not condition.fact:
        raise RubricError(f"requirement {raw['id']}: only_if condition needs a fact")
    check_raw = raw["check"]
    check = CheckSpec(
        kind=check_raw["kind"],
        any_of=tuple(check_raw.get("any_of", [])),
        all_of=tuple(check_raw.get("all_of", [])),
    )
    if check.kind not in ("field_presence", "judgment"):
        raise RubricError(f"unknown check kind: {check.kind!r}")
    if check.kind == "field_presence" and not check.paths:
        raise RubricError(f"requirement {raw['id']}: field presence check needs paths")
    return AtomicRequirement(
        id=raw["id"],
        tier=Tier(raw["tier"]),
        condition=condition,
        check=check,
        text=raw["text"],
        provenance=raw.get("provenance", ""),
    )


def _build_rule(raw: dict) -> SpecialRule:
    trigger = raw["trigger"]
    effect = raw["effect"]
    return SpecialRule(
        trigger_kind=trigger["kind"],
        effect_kind=effect["kind"],
        provenance=raw.get("provenance", ""),
        fact=trigger.get("fact"),
        negate=bool(trigger.get("negate", False)),
        requirement=trigger.get("requirement"),
        source=effect.get("source"),
        target=effect.get("target"),
    )


# ---------------------------------------------------------------------------
# applicability

class ApplicableCriterion(NamedTuple):
    id: str
    once_per_report: bool


def applicable_criteria(rubric: Rubric, meta: EvaluationMetadata) -> list[ApplicableCriterion]:
    """Criteria whose branch condition holds for this metadata, in document
    order. Once-per-report criteria are flagged so callers can grade them at
    report level rather than per evaluation."""
    out = []
    for cat in rubric.categories:
        once = cat.scope is CategoryScope.ONCE_PER_REPORT
        for criterion in cat.criteria:
            if criterion.branch.applies(meta):
                out.append(ApplicableCriterion(criterion.id, once))
    return out


def applicable_requirements(
    criterion: Criterion, facts: FactSet | None
) -> list[tuple[AtomicRequirement, Applicability]]:
    """Each requirement with its gate resolved against the report facts.

    ONLY IF gates resolve to Applicable/NotApplicable when the fact is known
    and Unknown otherwise; WHERE APPLICABLE items are always Unknown (the
    grader decides); everything else is Applicable.
    """
    return [(req, req.condition.evaluate(facts)) for req in criterion.requirements]


# ---------------------------------------------------------------------------
# validation

def validate_rubric(rubric: Rubric) -> list[reportdoc.Finding]:
    """All invariant violations for a rubric; empty for the built-in.

    Checks: 6 categories with the expected leaf layout and a total of 28
    criteria; unique criterion and requirement ids; exactly category 6 is
    once-per-report; branch groups exclusive and complete; every field
    presence path resolves against the report schema; tier labels match the
    list each requirement sits in; special rule references resolve.
    """
    findings: list[reportdoc.Finding] = []

    def note(code: str, message: str, where: str = "rubric") -> None:
        findings.append(reportdoc.Finding(code, message, where))

    leaves = [len(cat.criteria) for cat in rubric.categories]
    if len(rubric.categories) != len(EXPECTED_CATEGORY_LEAVES):
        note("category-count", f"expected {len(EXPECTED_CATEGORY_LEAVES)} categories, found {len(rubric.categories)}")
    if sum(leaves) != EXPECTED_LEAF_COUNT:
        note("leaf-count", f"leaf count mismatch: expected {EXPECTED_LEAF_COUNT} criteria, found {sum(leaves)}")
    if len(rubric.categories) == len(EXPECTED_CATEGORY_LEAVES) and tuple(leaves) != EXPECTED_CATEGORY_LEAVES:
        note("leaf-layout", f"per-category leaf counts {leaves} != {list(EXPECTED_CATEGORY_LEAVES)}")

    for cat in rubric.categories:
        expected_scope = CategoryScope.ONCE_PER_REPORT if cat.id == 6 else CategoryScope.PER_EVALUATION
        if cat.scope is not expected_scope:
            note("category-scope", f"category {cat.id} must have scope {expected_scope.value}", f"category {cat.id}")

    seen_criteria: set[str] = set()
    seen_reqs: set[str] = set()
    for criterion in rubric.criteria():
        if criterion.id in seen_criteria:
            note("duplicate-id", f"duplicate id {criterion.id!r}", criterion.id)
        seen_criteria.add(criterion.id)
        if not criterion.minimum:
            note("empty-minimum", "criterion has no minimum requirements", criterion.id)
        for tier, reqs in ((Tier.MINIMUM, criterion.minimum), (Tier.FULL_CREDIT, criterion.full_credit)):
            for req in reqs:
                if req.id in seen_reqs:
                    note("duplicate-id", f"duplicate id {req.id!r}", req.id)
                seen_reqs.add(req.id)
                if req.tier is not tier:
                    note("tier-mismatch", f"requirement {req.id} labeled {req.tier.value} in {tier.value} list", req.id)
                if req.condition.kind == "only_if" and req.condition.fact not in reportdoc.KNOWN_FACTS:
                    note("unknown-fact", f"requirement {req.id} gates on unknown fact {req.condition.fact!r}", req.id)
                if req.check.kind == "field_presence":
                    for bad in reportdoc.declared_paths_valid(list(req.check.paths)):
                        note("unresolved-schema-path", f"unresolved schema path {bad!r}", req.id)
        req_ids = {r.id for r in criterion.requirements}
        for rule in criterion.special_rules:
            if rule.trigger_kind == "fact" and rule.fact not in reportdoc.KNOWN_FACTS:
                note("unknown-fact", f"special rule trigger fact {rule.fact!r} unknown", criterion.id)
            if rule.trigger_kind == "requirement_met" and rule.requirement not in req_ids:
                note("unknown-requirement", f"special rule trigger names foreign requirement {rule.requirement!r}", criterion.id)
            if rule.effect_kind == "counts_toward_minimum" and (
                rule.source not in req_ids or rule.target not in req_ids
            ):
                note("unknown-requirement", "counts_toward_minimum rule names a foreign requirement", criterion.id)

    findings.extend(_validate_branch_groups(rubric))
    return findings


def _validate_branch_groups(rubric: Rubric) -> list[reportdoc.Finding]:
    findings = []
    grading = {c.id: c.branch for c in rubric.criteria() if c.branch in (Branch.HUMAN_GRADED, Branch.AUTO_GRADED)}
    baseline = {c.id: c.branch for c in rubric.criteria() if c.branch in (Branch.HUMAN_BASELINE, Branch.NO_HUMAN_BASELINE)}
    if baseline and set(baseline.values()) != {Branch.HUMAN_BASELINE, Branch.NO_HUMAN_BASELINE}:
        findings.append(
            reportdoc.Finding("branch-exclusivity", "baseline branch group must cover both baseline kinds", "rubric")
        )
    # exclusivity is structural: no criterion can sit in two branches, so the
    # remaining check is that grading-gated criteria exist in matched pairs
    if grading and set(grading.values()) != {Branch.HUMAN_GRADED, Branch.AUTO_GRADED}:
        findings.append(
            reportdoc.Finding("branch-exclusivity", "grading branch group must cover both grading methods", "rubric")
        )
    return findings
