"""Shared fixtures: rubric, gold report, scaffold-filling helpers."""

from __future__ import annotations

import itertools
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import streamaudit as sa
from streamaudit.reportdoc import (
    PLACEHOLDER,
    AnswerFormat,
    BaselineKind,
    EvaluationMetadata,
    GradingMethod,
)

ENUM_FILLS = {
    "mitigation_set": "full",
    "direction": "rule_in",
    "compared_to": "human_graders",
    "justification_kind": "infeasibility",
    "kind": "mean",
    "answer_format": "open_ended",
    "grading_method": "both",
    "baseline_kind": "human_baseline",
}


@pytest.fixture(scope="session")
def rubric():
    return sa.load_rubric()


@pytest.fixture()
def gold_report():
    return sa.gold_standard_report()


def all_metadata():
    """The full grading-method x baseline-kind cross-product."""
    return [
        EvaluationMetadata(AnswerFormat.OPEN_ENDED, gm, bk)
        for gm, bk in itertools.product(GradingMethod, BaselineKind)
    ]


def make_facts(evaluation: str = "E1", **flags) -> sa.FactSet:
    return sa.FactSet(evaluation=evaluation, flags=dict(flags), presence={})


def fill_scaffold(doc: sa.ReportDocument) -> sa.ReportDocument:
    """Replace every placeholder with a plausible concrete value.

    Reference fields are filled consistently (threat model and model version
    names match the refs), so a filled scaffold passes structural validation
    and every field-presence check.
    """
    content = _fill(doc.content, None)
    shared = content["shared"]
    shared["threat_models"][0]["name"] = "TM-1"
    shared["model_versions"][0]["name"] = "MV-1"
    for ev in content["evaluations"]:
        ev["threat_relevance"]["threat_model_refs"] = ["TM-1"]
        ev["elicitation"]["model_version_refs"] = ["MV-1"]
        mix = ev["metadata"].get("format_mix")
        if mix:
            ev["metadata"]["format_mix"] = [{"format": "multiple_choice", "proportion": 1.0}]
    return sa.ReportDocument(content=content)


def _fill(value, key):
    if isinstance(value, dict):
        out = {k: _fill(v, k) for k, v in value.items()}
        if out.get("kind") == "mean" and ("low" in out or "level" in out):
            out["kind"] = "ci"
        return out
    if isinstance(value, list):
        return [_fill(v, key) for v in value]
    if value == PLACEHOLDER:
        if key in ENUM_FILLS:
            return ENUM_FILLS[key]
        if key in ("publication_date", "deployment_date"):
            return "2025-01-01"
        if key in ("n_participants", "n_graders", "graders_per_item", "num_items_run",
                   "num_items_total", "samples_per_item", "num_runs"):
            return 12
        if key in ("value", "low", "high", "level", "proportion"):
            return 0.5
        if key in ("identical_to_deployed", "registered", "arose", "open_weight_release",
                   "blinded", "modified", "qc_performed", "ablations_performed",
                   "contamination_tested", "expert_level", "designer_is_publisher",
                   "modified_external_design", "not_core_to_assessment",
                   "example_representative", "empirical"):
            return True
        return f"filled {key}"
    return value
