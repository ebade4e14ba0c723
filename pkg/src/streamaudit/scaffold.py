"""Fillable report skeletons and human-readable checklists.

``scaffold_report`` emits a ``stream-report/v1`` document where every field
appears as an explicit ``__FILL__`` placeholder and branch-inapplicable
blocks are omitted outright (an auto-graded-only plan gets no human grading
block; a no-baseline plan gets the justification variant). Placeholders are
distinguishable from legitimate empty strings, so automatic assessment
treats an unfilled scaffold as entirely absent.

``export_checklist`` regenerates the standard's summary and expanded
checklists from rubric data; the checklists are never hand-written, and the
expanded JSON form round-trips through ``load_rubric``.
"""

from __future__ import annotations

import json

from .reportdoc import (
    PLACEHOLDER,
    REPORT_SCHEMA_ID,
    BaselineKind,
    EvaluationMetadata,
    ReportDocument,
)
from .rubric import Rubric, applicable_criteria

F = PLACEHOLDER


class ScaffoldError(ValueError):
    pass


def scaffold_report(
    plans: list[EvaluationMetadata],
    names: list[str] | None = None,
    guidance: Rubric | None = None,
) -> ReportDocument:
    """Build a fillable report skeleton for the given per-evaluation plans.

    Pass a rubric as ``guidance`` to embed the applicable criterion and
    requirement texts under a top-level ``guidance`` key.
    """
    if not plans:
        raise ScaffoldError("a scaffold needs at least one evaluation")
    if names is None:
        names = [f"Evaluation {i + 1}" for i in range(len(plans))]
    if len(names) != len(plans):
        raise ScaffoldError("one name per evaluation plan required")

    content: dict = {
        "schema": REPORT_SCHEMA_ID,
        "meta": {
            "title": F,
            "model_family": F,
            "publication_date": F,
            "open_weight_release": F,
        },
        "shared": {
            "threat_models": [
                {
                    "name": F,
                    "actor_type": F,
                    "misuse_vector": F,
                    "capabilities": [F],
                    "justification": F,
                }
            ],
            "model_versions": [
                {
                    "name": F,
                    "identical_to_deployed": F,
                    "deployment_date": F,
                    "mitigation_set": F,
                    "mitigations": [F],
                    "capability_delta_note": F,
                }
            ],
            "standard_elicitation": {
                "resource_ceilings": F,
                "sampling_strategies": F,
                "scaffolding_tools": F,
                "prompting": F,
                "sampling_parameters": F,
                "fine_tuning": F,
                "bypass_strategies": F,
            },
            "results_interpretation": {
                "conclusion": F,
                "decision_impact": F,
                "evidence_contributions": [{"source": F, "weight_label": F, "note": F}],
                "falsification_conditions": F,
                "preregistration": {"registered": F, "how": F},
                "future_performance": {
                    "near_term": F,
                    "medium_term": F,
                    "implications": F,
                    "decision_point_estimate": F,
                },
                "review_time": {"statement": F, "quantified_estimate": F},
                "disagreements": {"arose": F, "summary": F, "handling": F},
            },
        },
        "evaluations": [
            _scaffold_evaluation(name, meta) for name, meta in zip(names, plans)
        ],
    }
    if guidance is not None:
        content["guidance"] = _guidance_block(guidance, plans)
    return ReportDocument(content=content)


def _scaffold_evaluation(name: str, meta: EvaluationMetadata) -> dict:
    ev: dict = {
        "name": name,
        "metadata": {
            "answer_format": meta.answer_format.value,
            "grading_method": meta.grading_method.value,
            "baseline_kind": meta.baseline_kind.value,
        },
        "threat_relevance": {
            "threat_model_refs": [F],
            "capability_refs": [F],
            "justification": F,
            "limitations": F,
            "evidence_role": F,
            "not_core_to_assessment": F,
            "rule_thresholds": [
                {"range": F, "direction": F, "justification": F, "registered_when": F}
            ],
            "example_item": F,
            "example_answer": F,
            "representativeness_note": F,
            "example_representative": F,
        },
        "construction": _scaffold_construction(meta),
        "elicitation": {
            "model_version_refs": [F],
            "deviations_from_standard": F,
            "refusal_notes": F,
        },
        "performance": {
            "summary_stats": [{"kind": F, "value": F, "unit": F, "model_version_ref": F}],
            "uncertainty": [{"kind": F, "level": F, "low": F, "high": F, "stat_ref": F}],
            "num_runs": F,
            "ablations_performed": F,
            "ablations": [{"condition": F, "stats": [{"kind": F, "value": F}], "note": F}],
            "no_ablations_reason": F,
            "highest_score_confirmation": F,
            "contamination_tested": F,
            "contamination_note": F,
        },
        "baseline": _scaffold_baseline(meta),
    }
    if meta.answer_format.value == "mixed":
        ev["metadata"]["format_mix"] = [{"format": F, "proportion": F}]
    return ev


def _scaffold_construction(meta: EvaluationMetadata) -> dict:
    construction: dict = {
        "num_items_run": F,
        "num_items_total": F,
        "subset_method": F,
        "answer_formats": [{"format": F, "proportion": F}],
        "scoring_details": F,
        "design": {
            "designer_affiliation": F,
            "designer_is_publisher": F,
            "modified_external_design": F,
            "modification_note": F,
        },
        "key_provenance": F,
        "qc_performed": F,
        "qc_measures": F,
        "ambiguity_handling": F,
    }
    if meta.human_graded:
        construction["human_grading"] = {
            "grader_qualifications": F,
            "grader_affiliation": F,
            "n_graders": F,
            "recruitment": F,
            "training_note": F,
            "instructions": F,
            "blinded": F,
            "graders_per_item": F,
            "adjudication": F,
            "agreement_statement": F,
            "agreement_statistic": F,
            "notable_disagreements": F,
        }
    if meta.auto_graded:
        construction["auto_grading"] = {
            "base_model": F,
            "modified": F,
            "modifications_note": F,
            "instructions": F,
            "judging_method": F,
            "example_prompt": F,
            "samples_per_item": F,
            "aggregation": F,
            "validation": {
                "compared_to": F,
                "n_human_graders": F,
                "grader_qualifications": F,
                "agreement_statistic": F,
                "comparison_scope": F,
                "no_validation_reason": F,
            },
        }
    return construction


def _scaffold_baseline(meta: EvaluationMetadata) -> dict:
    if meta.baseline_kind is BaselineKind.HUMAN_BASELINE:
        return {
            "kind": "human",
            "n_participants": F,
            "expert_level": F,
            "qualifications": F,
            "recruitment": F,
            "sampling_bias_note": F,
            "stats": [{"kind": F, "value": F, "unit": F}],
            "uncertainty": [{"kind": F, "level": F, "low": F, "high": F, "stat_ref": F}],
            "test_differences": F,
            "time_allowed": F,
            "resources": F,
            "incentives": F,
            "time_per_item": F,
            "condition_notes": F,
        }
    return {
        "kind": "none",
        "justification_kind": F,
        "justification_text": F,
        "supporting_details": F,
        "alternative_reference": {
            "description": F,
            "empirical": F,
            "methodology": F,
            "validity_argument": F,
            "uncertainties": F,
        },
    }


def _guidance_block(rubric: Rubric, plans: list[EvaluationMetadata]) -> dict:
    applicable: set[str] = set()
    for meta in plans:
        applicable.update(entry.id for entry in applicable_criteria(rubric, meta))
    criteria = {}
    requirements = {}
    for criterion in rubric.criteria():
        if criterion.id not in applicable:
            continue
        criteria[criterion.id] = criterion.title
        for req in criterion.requirements:
            requirements[req.id] = req.text
    return {"criteria": criteria, "requirements": requirements}


# ---------------------------------------------------------------------------
# checklists

def export_checklist(rubric: Rubric, detail: str = "summary", fmt: str = "text") -> str:
    """Render the rubric as a checklist document.

    ``detail``: "summary" gives the one-line-per-criterion checklist;
    "expanded" gives the two-tier minimum/full-credit breakdown. ``fmt``:
    "text", "markdown", or "json" (the expanded JSON form is the rubric
    document itself and re-ingests through ``load_rubric`` unchanged).
    """
    if detail not in ("summary", "expanded"):
        raise ScaffoldError(f"unknown detail level: {detail!r}")
    if fmt == "json":
        return json.dumps(rubric.to_dict(), indent=2, ensure_ascii=False) + "\n"
    if fmt not in ("text", "markdown"):
        raise ScaffoldError(f"unknown checklist format: {fmt!r}")
    md = fmt == "markdown"
    lines: list[str] = []
    title = f"{rubric.version} {'summary checklist' if detail == 'summary' else 'expanded checklist'}"
    lines.append(f"# {title}" if md else title)
    lines.append("")
    for cat in rubric.categories:
        suffix = " [graded once per report]" if cat.scope.value == "once_per_report" else ""
        lines.append((f"## {cat.id}. {cat.title}{suffix}" if md else f"{cat.id}. {cat.title}{suffix}"))
        for criterion in cat.criteria:
            if detail == "summary":
                box = "- [ ]" if md else "[ ]"
                lines.append(f"{box} {criterion.id} {criterion.summary}")
                continue
            lines.append("")
            lines.append(f"### {criterion.id} {criterion.title}" if md else f"{criterion.id} {criterion.title}")
            for tier_name, reqs in (("Minimum", criterion.minimum), ("Full credit", criterion.full_credit)):
                lines.append(f"**{tier_name}:**" if md else f"  {tier_name}:")
                for req in reqs:
                    lines.append((f"- {req.id}. {req.text}" if md else f"    {req.id}. {req.text}"))
            for rule in criterion.special_rules:
                lines.append((f"- Note: {rule.provenance}" if md else f"    Note: {rule.provenance}"))
        lines.append("")
    return "\n".join(lines).rstrip() + "\n"
