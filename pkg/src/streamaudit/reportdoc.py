"""Structured model-report documents: parsing, validation, and scope resolution.

A report is a JSON document under the ``stream-report/v1`` schema. The field
tree is declared in ``data/report_schema_v1.json`` (the machine-readable
schema descriptor shipped with the tool); parsing validates against it and
serialization emits keys in descriptor order so diffs stay stable.

Absence of a field is a grading fact, not a parse failure: almost every leaf
is optional, and the grading engine asks "is this stated somewhere?" via
:func:`resolve_scope`. A text field may be replaced by a redaction object
``{"redacted": true, "attestation": "<attester>"}``; with an attestation it
counts as present for presence checks.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from typing import Any, Iterator

PLACEHOLDER = "__FILL__"
REPORT_SCHEMA_ID = "stream-report/v1"

_ISO_DATE_RE = re.compile(r"^\d{4}-\d{2}-\d{2}$")
_PATH_SEGMENT_RE = re.compile(r"^(?P<name>[a-z_][a-z0-9_]*)(?:\[(?P<sel>[^\]]*)\])?$")


class ReportParseError(ValueError):
    """Raised for malformed report documents (syntax, types, duplicates)."""


def _load_data(name: str) -> dict:
    with resources.files("streamaudit.data").joinpath(name).open("r", encoding="utf-8") as fh:
        return json.load(fh)


_DESCRIPTOR = _load_data("report_schema_v1.json")


def schema_descriptor() -> dict:
    """The machine-readable report schema descriptor (deep copy)."""
    return json.loads(json.dumps(_DESCRIPTOR))


class Scope(Enum):
    """Where a fact was found relative to one evaluation."""

    LOCAL = "local"
    SHARED = "shared"
    ABSENT = "absent"


class AnswerFormat(str, Enum):
    MULTIPLE_CHOICE = "multiple_choice"
    MULTIPLE_SELECT = "multiple_select"
    SHORT_ANSWER = "short_answer"
    OPEN_ENDED = "open_ended"
    AGENTIC = "agentic"
    MIXED = "mixed"


class GradingMethod(str, Enum):
    ANSWER_KEY_ONLY = "answer_key_only"
    HUMAN_GRADED = "human_graded"
    AUTO_GRADED = "auto_graded"
    BOTH = "both"


class BaselineKind(str, Enum):
    HUMAN_BASELINE = "human_baseline"
    NO_HUMAN_BASELINE = "no_human_baseline"


@dataclass(frozen=True)
class EvaluationMetadata:
    """Branching facts about one evaluation, fixed at report time."""

    answer_format: AnswerFormat
    grading_method: GradingMethod
    baseline_kind: BaselineKind
    format_mix: tuple[tuple[str, float], ...] = ()

    @classmethod
    def from_dict(cls, raw: dict) -> "EvaluationMetadata":
        mix = tuple(
            (entry["format"], float(entry["proportion"]))
            for entry in raw.get("format_mix", [])
            if isinstance(entry, dict) and _is_number(entry.get("proportion"))
        )
        return cls(
            answer_format=AnswerFormat(raw["answer_format"]),
            grading_method=GradingMethod(raw["grading_method"]),
            baseline_kind=BaselineKind(raw["baseline_kind"]),
            format_mix=mix,
        )

    @property
    def human_graded(self) -> bool:
        return self.grading_method in (GradingMethod.HUMAN_GRADED, GradingMethod.BOTH)

    @property
    def auto_graded(self) -> bool:
        return self.grading_method in (GradingMethod.AUTO_GRADED, GradingMethod.BOTH)


@dataclass(frozen=True)
class Finding:
    """One structural-validation finding. Findings are data, not failures."""

    code: str
    message: str
    where: str

    def __str__(self) -> str:  # pragma: no cover - display helper
        return f"[{self.code}] {self.where}: {self.message}"


@dataclass
class ReportDocument:
    """A parsed model report: canonical dict content plus parse warnings."""

    content: dict
    warnings: list[str] = field(default_factory=list)

    @property
    def meta(self) -> dict:
        return self.content.get("meta", {})

    @property
    def shared(self) -> dict:
        return self.content.get("shared", {})

    @property
    def evaluations(self) -> list[dict]:
        return self.content.get("evaluations", [])

    @property
    def attestations(self) -> list[dict]:
        return self.content.get("attestations", [])

    def evaluation_names(self) -> list[str]:
        return [e["name"] for e in self.evaluations]

    def evaluation(self, name: str) -> dict:
        for entry in self.evaluations:
            if entry.get("name") == name:
                return entry
        raise KeyError(f"unknown evaluation: {name!r}")

    def metadata(self, name: str) -> EvaluationMetadata:
        return EvaluationMetadata.from_dict(self.evaluation(name)["metadata"])

    def digest(self) -> str:
        """Content digest used as a stable report reference."""
        canonical = json.dumps(self.content, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


# ---------------------------------------------------------------------------
# presence semantics


def is_present(value: Any) -> bool:
    """Whether a leaf value counts as stated for grading purposes.

    Placeholders and empty strings are absent; redaction objects count only
    when backed by an attestation reference; lists count when they contain at
    least one present element.
    """
    if value is None:
        return False
    if isinstance(value, str):
        return value != "" and value != PLACEHOLDER
    if isinstance(value, bool):
        return True
    if isinstance(value, (int, float)):
        return True
    if isinstance(value, dict):
        if value.get("redacted") is True:
            return is_present(value.get("attestation"))
        return any(is_present(v) for v in value.values())
    if isinstance(value, list):
        return any(is_present(v) for v in value)
    return False


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _scalar(value: Any) -> Any:
    """Unwrap placeholder sentinels to None for arithmetic checks."""
    if isinstance(value, str) and value == PLACEHOLDER:
        return None
    return value


# ---------------------------------------------------------------------------
# schema paths

def _split_path(path: str) -> list[tuple[str, str | None]]:
    segments: list[tuple[str, str | None]] = []
    for raw in path.split("."):
        m = _PATH_SEGMENT_RE.match(raw)
        if not m:
            raise KeyError(f"malformed schema path segment: {raw!r} in {path!r}")
        segments.append((m.group("name"), m.group("sel")))
    return segments


def _walk_presence(node: Any, segments: list[tuple[str, str | None]]) -> bool:
    """Presence of a path below `node`, honoring list selectors.

    Selectors over the present elements of a list: ``[]`` any element,
    ``[all]`` every element, ``[key=value]`` every matching element
    (vacuously present when present elements exist but none match the
    filter). A list without present elements is absent under any selector.
    """
    if not segments:
        return is_present(node)
    name, sel = segments[0]
    rest = segments[1:]
    if not isinstance(node, dict):
        return False
    value = node.get(name)
    if sel is None:
        return _walk_presence(value, rest) if rest else is_present(value)
    if not isinstance(value, list):
        return False
    elements = [e for e in value if isinstance(e, dict) and is_present(e)]
    if not elements:
        return False
    if sel == "":
        return any(_walk_presence(e, rest) for e in elements)
    if sel == "all":
        return all(_walk_presence(e, rest) for e in elements)
    key, _, expected = sel.partition("=")
    matching = [e for e in elements if e.get(key) == expected]
    if not matching:
        return True
    return all(_walk_presence(e, rest) for e in matching)


def _descriptor_has_path(path: str) -> bool:
    segments = _split_path(path)
    node = _DESCRIPTOR["root"]
    for i, (name, sel) in enumerate(segments):
        if i == 0 and name == "evaluation":
            node = node["fields"]["evaluations"]["element"]
            if sel is not None:
                return False
            continue
        if node.get("type") == "object":
            fields = node.get("fields", {})
            if name not in fields:
                return False
            node = fields[name]
        else:
            return False
        if node.get("type") == "list":
            if sel is None and i < len(segments) - 1:
                return False
            if sel is not None:
                node = node["element"]
        elif sel is not None:
            return False
    return True


def declared_paths_valid(paths: list[str]) -> list[str]:
    """Return the subset of `paths` that do NOT resolve in the schema."""
    bad = []
    for p in paths:
        try:
            ok = _descriptor_has_path(p)
        except KeyError:
            ok = False
        if not ok:
            bad.append(p)
    return bad


def resolve_scope(report: ReportDocument, evaluation: str, path: str) -> Scope:
    """Resolve where a fact is stated: in the evaluation, shared, or nowhere.

    Paths rooted at ``evaluation.`` are local to the named evaluation; paths
    rooted at ``shared.`` live in the shared section. Suite-level statements
    (shared entries tagged with an evaluation-name set) count as Shared for
    their member evaluations, whatever path they cover.
    """
    names = report.evaluation_names()
    if evaluation not in names:
        raise KeyError(f"unknown evaluation: {evaluation!r}")
    if declared_paths_valid([path]):
        raise KeyError(f"unknown schema path: {path!r}")
    segments = _split_path(path)
    root_name = segments[0][0]
    if root_name == "evaluation":
        ev = report.evaluation(evaluation)
        if _walk_presence(ev, segments[1:]):
            return Scope.LOCAL
        return Scope.SHARED if _suite_statement_covers(report, evaluation, path) else Scope.ABSENT
    if _walk_presence(report.content, segments):
        return Scope.SHARED
    if _suite_statement_covers(report, evaluation, path):
        return Scope.SHARED
    return Scope.ABSENT


def _suite_statement_covers(report: ReportDocument, evaluation: str, path: str) -> bool:
    for stmt in report.shared.get("suite_statements", []):
        if not isinstance(stmt, dict) or not is_present(stmt.get("text")):
            continue
        if stmt.get("path") != path:
            continue
        applies = stmt.get("applies_to")
        if applies is None or not applies or evaluation in applies:
            return True
    return False


def resolve_presence(report: ReportDocument, evaluation: str, paths: list[str]) -> Scope:
    """Combined scope over several candidate paths (Local wins over Shared)."""
    scopes = [resolve_scope(report, evaluation, p) for p in paths]
    if Scope.LOCAL in scopes:
        return Scope.LOCAL
    if Scope.SHARED in scopes:
        return Scope.SHARED
    return Scope.ABSENT


# ---------------------------------------------------------------------------
# parsing

def parse_report(document: str) -> ReportDocument:
    """Parse a ``stream-report/v1`` document from JSON text.

    Unknown fields become warnings; absent fields are left absent. Raises
    :class:`ReportParseError` for broken syntax, a wrong schema identifier,
    type-invalid values, or duplicate evaluation names.
    """
    try:
        raw = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ReportParseError(f"malformed document: {exc}") from exc
    if not isinstance(raw, dict):
        raise ReportParseError("malformed document: top level must be an object")
    schema_id = raw.get("schema")
    if schema_id != REPORT_SCHEMA_ID:
        raise ReportParseError(f"unknown schema version: {schema_id!r}")
    warnings: list[str] = []
    content = _check_node(raw, _DESCRIPTOR["root"], "", warnings)
    names = [e.get("name") for e in content.get("evaluations", [])]
    dupes = {n for n in names if names.count(n) > 1}
    if dupes:
        raise ReportParseError(f"duplicate evaluation name: {sorted(dupes)[0]!r}")
    _warn_absent_blocks(content, warnings)
    return ReportDocument(content=content, warnings=warnings)


_EXPECTED_BLOCKS = (
    "meta",
    "shared.threat_models",
    "shared.model_versions",
    "shared.standard_elicitation",
    "shared.results_interpretation",
)
_EXPECTED_EVAL_BLOCKS = ("threat_relevance", "construction", "elicitation", "performance", "baseline")


def _warn_absent_blocks(content: dict, warnings: list[str]) -> None:
    """Absent blocks are legal (absence is graded, not rejected) but worth
    flagging to whoever is inspecting the parse."""
    for dotted in _EXPECTED_BLOCKS:
        node = content
        for part in dotted.split("."):
            node = node.get(part) if isinstance(node, dict) else None
        if not node:
            warnings.append(f"absent block: {dotted}")
    for ev in content.get("evaluations", []):
        for block in _EXPECTED_EVAL_BLOCKS:
            if not ev.get(block):
                warnings.append(f"absent block: evaluations[{ev.get('name')}].{block}")


def _check_node(value: Any, node: dict, where: str, warnings: list[str]) -> Any:
    kind = node["type"]
    if kind == "free":
        return value
    if isinstance(value, str) and value == PLACEHOLDER:
        return value
    if kind == "const":
        if value != node["value"]:
            raise ReportParseError(f"{where or 'document'}: expected {node['value']!r}")
        return value
    if kind == "object":
        if not isinstance(value, dict):
            raise ReportParseError(f"{where}: expected an object")
        if value.get("redacted") is True:
            raise ReportParseError(f"{where}: redaction markers apply to text fields only")
        out = {}
        fields = node.get("fields", {})
        for name, sub in fields.items():
            if name in value:
                out[name] = _check_node(value[name], sub, f"{where}.{name}".lstrip("."), warnings)
            elif sub.get("required"):
                raise ReportParseError(f"{where}.{name}".lstrip(".") + ": required field missing")
        for name in value:
            if name not in fields:
                warnings.append(f"unrecognized field: {f'{where}.{name}'.lstrip('.')}")
        return out
    if kind == "list":
        if not isinstance(value, list):
            raise ReportParseError(f"{where}: expected a list")
        return [
            _check_node(v, node["element"], f"{where}[{i}]", warnings) for i, v in enumerate(value)
        ]
    if kind == "text_list":
        if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
            raise ReportParseError(f"{where}: expected a list of strings")
        return list(value)
    if kind in ("text", "date"):
        if isinstance(value, dict):
            if value.get("redacted") is not True:
                raise ReportParseError(f"{where}: expected text or a redaction object")
            return {k: value[k] for k in ("redacted", "attestation", "summary") if k in value}
        if not isinstance(value, str):
            raise ReportParseError(f"{where}: expected text")
        return value
    if kind == "bool":
        if not isinstance(value, bool):
            raise ReportParseError(f"{where}: expected true/false")
        return value
    if kind == "int":
        if isinstance(value, bool) or not isinstance(value, int):
            raise ReportParseError(f"{where}: expected an integer")
        return value
    if kind == "number":
        if not _is_number(value):
            raise ReportParseError(f"{where}: expected a number")
        return value
    if kind == "enum":
        if value not in node["values"]:
            raise ReportParseError(f"{where}: expected one of {node['values']}")
        return value
    raise AssertionError(f"descriptor node type {kind!r}")  # pragma: no cover


def serialize_report(report: ReportDocument) -> str:
    """Emit the document as JSON with keys in schema order, 2-space indent."""
    ordered = _order_node(report.content, _DESCRIPTOR["root"])
    return json.dumps(ordered, indent=2, ensure_ascii=False) + "\n"


def _order_node(value: Any, node: dict) -> Any:
    kind = node["type"]
    if kind == "object" and isinstance(value, dict) and value.get("redacted") is not True:
        fields = node.get("fields", {})
        out = {name: _order_node(value[name], sub) for name, sub in fields.items() if name in value}
        for name in value:
            if name not in fields:
                out[name] = value[name]
        return out
    if kind == "list" and isinstance(value, list):
        return [_order_node(v, node["element"]) for v in value]
    return value


# ---------------------------------------------------------------------------
# structural validation

def validate_report_structure(report: ReportDocument, rubric=None) -> list[Finding]:
    """Cross-reference and consistency findings for a parsed report.

    Pure function: same report, same findings, same order. Pass the active
    rubric to also check attestation scopes against requirement ids.
    """
    findings: list[Finding] = []
    shared = report.shared
    tm_names = [t.get("name") for t in shared.get("threat_models", [])]
    mv_names = [m.get("name") for m in shared.get("model_versions", [])]
    for label, names in (("threat model", tm_names), ("model version", mv_names)):
        for name in sorted({n for n in names if names.count(n) > 1}):
            findings.append(Finding("duplicate-name", f"duplicate {label} name {name!r}", "shared"))

    for mv in shared.get("model_versions", []):
        if mv.get("identical_to_deployed") is True and mv.get("mitigation_set") in ("reduced", "minimal"):
            if not is_present(mv.get("capability_delta_note")):
                findings.append(
                    Finding(
                        "deployed-mitigation-mismatch",
                        "version identical to deployed carries a reduced mitigation set with no overriding note",
                        f"shared.model_versions[{mv.get('name')}]",
                    )
                )

    eval_names = report.evaluation_names()
    for stmt in shared.get("suite_statements", []):
        for target in stmt.get("applies_to") or []:
            if target not in eval_names:
                findings.append(
                    Finding("dangling-suite-statement", f"suite statement names unknown evaluation {target!r}", "shared.suite_statements")
                )
        path = stmt.get("path")
        if isinstance(path, str) and path != PLACEHOLDER and declared_paths_valid([path]):
            findings.append(
                Finding("unknown-suite-path", f"suite statement covers undeclared path {path!r}", "shared.suite_statements")
            )

    for where, value in _iter_date_fields(report.content):
        if isinstance(value, str) and value != PLACEHOLDER and not _ISO_DATE_RE.match(value):
            findings.append(Finding("bad-date", f"date {value!r} is not ISO-8601 (YYYY-MM-DD)", where))

    attester_names = {a.get("attester") for a in report.attestations}
    for where, value in _iter_redactions(report.content):
        ref = value.get("attestation")
        if is_present(ref) and report.attestations and ref not in attester_names:
            findings.append(Finding("dangling-attestation", f"redaction cites unknown attester {ref!r}", where))
    if rubric is not None:
        known_ids = {r.id for r in rubric.all_requirements()}
        for i, att in enumerate(report.attestations):
            for rid in att.get("scope", []):
                if rid not in known_ids:
                    findings.append(
                        Finding("unknown-attestation-scope", f"attestation scope {rid!r} is not a rubric requirement", f"attestations[{i}]")
                    )

    for ev in report.evaluations:
        findings.extend(_validate_evaluation(ev, tm_names, mv_names))
    return findings


def _validate_evaluation(ev: dict, tm_names: list, mv_names: list) -> list[Finding]:
    findings: list[Finding] = []
    name = ev.get("name", "?")
    meta = EvaluationMetadata.from_dict(ev["metadata"])
    where = f"evaluations[{name}]"

    for ref in ev.get("threat_relevance", {}).get("threat_model_refs", []):
        if ref != PLACEHOLDER and ref not in tm_names:
            findings.append(Finding("dangling-threat-model-ref", f"reference to undeclared threat model {ref!r}", where))
    for ref in ev.get("elicitation", {}).get("model_version_refs", []):
        if ref != PLACEHOLDER and ref not in mv_names:
            findings.append(Finding("dangling-model-version-ref", f"reference to undeclared model version {ref!r}", where))

    construction = ev.get("construction", {})
    if construction.get("human_grading") and not meta.human_graded:
        findings.append(Finding("grading-block-mismatch", "human grading block present but metadata excludes human grading", where))
    if construction.get("auto_grading") and not meta.auto_graded:
        findings.append(Finding("grading-block-mismatch", "auto grading block present but metadata excludes auto grading", where))

    baseline = ev.get("baseline", {})
    variant = baseline.get("kind")
    if variant == "human" and meta.baseline_kind is not BaselineKind.HUMAN_BASELINE:
        findings.append(Finding("baseline-variant-mismatch", "human baseline block on a no-baseline evaluation", where))
    if variant == "none" and meta.baseline_kind is not BaselineKind.NO_HUMAN_BASELINE:
        findings.append(Finding("baseline-variant-mismatch", "no-baseline block on a human-baseline evaluation", where))
    n_participants = _scalar(baseline.get("n_participants"))
    if _is_number(n_participants) and n_participants < 1:
        findings.append(Finding("bad-participant-count", "human baseline must have at least one participant", where))

    if meta.format_mix:
        total = sum(p for _, p in meta.format_mix)
        if abs(total - 1.0) > 1e-9:
            findings.append(Finding("format-mix-sum", f"answer format proportions sum to {total}, not 1", where))

    for block_name, block in (("performance", ev.get("performance", {})), ("baseline", baseline)):
        stats = [s for s in block.get("stats" if block_name == "baseline" else "summary_stats", []) or []]
        for j, unc in enumerate(block.get("uncertainty", []) or []):
            low, high = _scalar(unc.get("low")), _scalar(unc.get("high"))
            spot = f"{where}.{block_name}.uncertainty[{j}]"
            if _is_number(low) and _is_number(high):
                if low > high:
                    findings.append(Finding("inverted-interval", f"interval low {low} exceeds high {high}", spot))
                else:
                    ref = unc.get("stat_ref")
                    for stat in stats:
                        value = _scalar(stat.get("value"))
                        if ref and stat.get("kind") != ref:
                            continue
                        if ref and _is_number(value) and not (low <= value <= high):
                            findings.append(Finding("interval-stat-mismatch", f"stat {ref!r} value {value} outside [{low}, {high}]", spot))
            elif unc.get("kind") == "ci" and (_is_number(low) or _is_number(high)):
                findings.append(Finding("half-open-interval", "confidence interval needs both low and high", spot))
    return findings


def _iter_date_fields(content: dict) -> Iterator[tuple[str, Any]]:
    yield "meta.publication_date", content.get("meta", {}).get("publication_date")
    for i, mv in enumerate(content.get("shared", {}).get("model_versions", [])):
        yield f"shared.model_versions[{i}].deployment_date", mv.get("deployment_date")


def _iter_redactions(value: Any, where: str = "") -> Iterator[tuple[str, dict]]:
    if isinstance(value, dict):
        if value.get("redacted") is True:
            yield where, value
            return
        for k, v in value.items():
            yield from _iter_redactions(v, f"{where}.{k}".lstrip("."))
    elif isinstance(value, list):
        for i, v in enumerate(value):
            yield from _iter_redactions(v, f"{where}[{i}]")


# ---------------------------------------------------------------------------
# fact extraction

KNOWN_FACTS = frozenset(
    {
        "subset_used",
        "mixed_formats",
        "designer_is_publisher",
        "external_design_modified",
        "qc_performed",
        "multiple_autograder_samples",
        "validated_against_humans",
        "validation_comparison_made",
        "nonfinal_instance_tested",
        "no_final_version_tested",
        "fine_tuning_used",
        "nonstandard_stat",
        "ci_given",
        "ablations_performed",
        "contamination_tested",
        "baseline_expert",
        "baseline_ci_given",
        "baseline_stat_differs",
        "alternative_nonempirical",
        "open_weight_release",
        "disagreements_denied",
        "example_not_representative",
        "not_core_to_assessment",
    }
)

# presence-style facts reported alongside the boolean flags, with the paths
# each one is resolved from
_PRESENCE_FACTS = {
    "mitigations_stated": ["shared.model_versions[].mitigations"],
    "bypass_attempts_stated": ["shared.standard_elicitation.bypass_strategies"],
    "resource_ceilings_stated": ["shared.standard_elicitation.resource_ceilings"],
    "example_item_stated": ["evaluation.threat_relevance.example_item"],
    "uncertainty_stated": ["evaluation.performance.uncertainty"],
}


@dataclass(frozen=True)
class FactSet:
    """Applicability inputs for one evaluation.

    ``flags`` are tri-state (True/False/None-for-unknown) branch predicates;
    ``presence`` records Local/Shared/Absent resolution for a few facts whose
    location matters to graders.
    """

    evaluation: str
    flags: dict[str, bool | None]
    presence: dict[str, Scope]

    def get(self, fact: str) -> bool | None:
        return self.flags.get(fact)


def extract_facts(report: ReportDocument, evaluation: str) -> FactSet:
    """Compute the predicate inputs used for requirement applicability.

    ``designer_is_publisher`` is true when the evaluation designers are the
    publishing organization OR the publisher modified an external design in a
    way that affects grading (the two cases gate the same requirement).
    """
    ev = report.evaluation(evaluation)
    meta = EvaluationMetadata.from_dict(ev["metadata"])
    tr = ev.get("threat_relevance", {})
    construction = ev.get("construction", {})
    design = construction.get("design", {})
    auto = construction.get("auto_grading", {})
    validation = auto.get("validation", {})
    performance = ev.get("performance", {})
    baseline = ev.get("baseline", {})
    interp = report.shared.get("results_interpretation", {})

    flags: dict[str, bool | None] = {}

    total = _scalar(construction.get("num_items_total"))
    run = _scalar(construction.get("num_items_run"))
    if total is None:
        flags["subset_used"] = False
    else:
        flags["subset_used"] = run is None or total != run

    formats = construction.get("answer_formats", [])
    flags["mixed_formats"] = meta.answer_format is AnswerFormat.MIXED or len(formats) > 1

    publisher = design.get("designer_is_publisher")
    modified = design.get("modified_external_design")
    if publisher is True or modified is True:
        flags["designer_is_publisher"] = True
    elif publisher is False:
        flags["designer_is_publisher"] = False
    else:
        flags["designer_is_publisher"] = None
    if publisher is False and modified is True:
        flags["external_design_modified"] = True
    elif publisher is True or modified is False:
        flags["external_design_modified"] = False
    else:
        flags["external_design_modified"] = None

    flags["qc_performed"] = construction.get("qc_performed")

    samples = _scalar(auto.get("samples_per_item"))
    flags["multiple_autograder_samples"] = None if samples is None else samples > 1
    compared = validation.get("compared_to")
    if compared is None or compared == PLACEHOLDER:
        flags["validated_against_humans"] = None
        flags["validation_comparison_made"] = None
    else:
        flags["validated_against_humans"] = compared == "human_graders"
        flags["validation_comparison_made"] = compared in ("human_graders", "auto_grader")

    flags["nonfinal_instance_tested"], flags["no_final_version_tested"] = _version_facts(report, ev)

    flags["fine_tuning_used"] = (
        True if is_present(report.shared.get("standard_elicitation", {}).get("fine_tuning")) else None
    )

    stats = performance.get("summary_stats", [])
    if any(is_present(s) for s in stats):
        flags["nonstandard_stat"] = any(s.get("kind") == "other" for s in stats)
    else:
        flags["nonstandard_stat"] = None
    flags["ci_given"] = any(u.get("kind") == "ci" for u in performance.get("uncertainty", []))

    ablations = performance.get("ablations", [])
    stated = performance.get("ablations_performed")
    if stated is not None and stated != PLACEHOLDER:
        flags["ablations_performed"] = bool(stated)
    elif any(is_present(a) for a in ablations):
        flags["ablations_performed"] = True
    else:
        flags["ablations_performed"] = None
    flags["contamination_tested"] = _tri(performance.get("contamination_tested"))

    flags["baseline_expert"] = _tri(baseline.get("expert_level"))
    flags["baseline_ci_given"] = any(u.get("kind") == "ci" for u in baseline.get("uncertainty", []))
    flags["baseline_stat_differs"] = _baseline_stat_differs(baseline.get("stats", []), stats)
    alt = baseline.get("alternative_reference", {})
    empirical = _tri(alt.get("empirical"))
    flags["alternative_nonempirical"] = None if empirical is None else not empirical

    flags["open_weight_release"] = _tri(report.meta.get("open_weight_release"))
    arose = _tri(interp.get("disagreements", {}).get("arose"))
    flags["disagreements_denied"] = None if arose is None else not arose
    representative = _tri(tr.get("example_representative"))
    flags["example_not_representative"] = None if representative is None else not representative
    flags["not_core_to_assessment"] = _tri(tr.get("not_core_to_assessment"))

    presence = {
        name: resolve_presence(report, evaluation, paths) for name, paths in _PRESENCE_FACTS.items()
    }
    return FactSet(evaluation=evaluation, flags=flags, presence=presence)


def report_facts(report: ReportDocument) -> FactSet:
    """Facts for report-level (once-per-report) grading.

    Only flags derivable without a specific evaluation are populated; the
    rest stay unknown.
    """
    interp = report.shared.get("results_interpretation", {})
    arose = _tri(interp.get("disagreements", {}).get("arose"))
    flags: dict[str, bool | None] = {f: None for f in KNOWN_FACTS}
    flags["open_weight_release"] = _tri(report.meta.get("open_weight_release"))
    flags["disagreements_denied"] = None if arose is None else not arose
    return FactSet(evaluation="", flags=flags, presence={})


def _tri(value: Any) -> bool | None:
    if isinstance(value, bool):
        return value
    return None


def _version_facts(report: ReportDocument, ev: dict) -> tuple[bool | None, bool | None]:
    refs = ev.get("elicitation", {}).get("model_version_refs", [])
    declared = report.shared.get("model_versions", [])
    versions = [v for v in declared if v.get("name") in refs] or declared
    if not versions:
        return None, None
    markers = [_tri(v.get("identical_to_deployed")) for v in versions]
    if any(m is False for m in markers):
        nonfinal: bool | None = True
    elif all(m is True for m in markers):
        nonfinal = False
    else:
        nonfinal = None
    if any(m is True for m in markers):
        no_final: bool | None = False
    elif all(m is False for m in markers):
        no_final = True
    else:
        no_final = None
    return nonfinal, no_final


def _baseline_stat_differs(baseline_stats: list, model_stats: list) -> bool | None:
    b_kinds = {s.get("kind") for s in baseline_stats if is_present(s)}
    m_kinds = {s.get("kind") for s in model_stats if is_present(s)}
    if not b_kinds or not m_kinds:
        return None
    if "mean" in b_kinds or (b_kinds & m_kinds):
        return False
    return True
