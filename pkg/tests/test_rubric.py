"""Rubric data model: the built-in definition, applicability, validation."""

from __future__ import annotations

import json
import re
import string

import pytest

import streamaudit as sa
from conftest import all_metadata, make_facts
from streamaudit.reportdoc import AnswerFormat, BaselineKind, EvaluationMetadata, GradingMethod
from streamaudit.rubric import (
    Applicability,
    CategoryScope,
    RubricError,
    applicable_criteria,
    applicable_requirements,
    load_rubric,
    validate_rubric,
)

LEAF_LAYOUT = [3, 9, 3, 3, 5, 5]


class TestBuiltinRubric:
    def test_counts(self, rubric):
        assert len(rubric.categories) == 6
        assert sum(len(c.criteria) for c in rubric.categories) == 28
        assert [len(c.criteria) for c in rubric.categories] == LEAF_LAYOUT

    def test_self_validates(self, rubric):
        assert validate_rubric(rubric) == []

    def test_category_scopes(self, rubric):
        for cat in rubric.categories:
            expected = CategoryScope.ONCE_PER_REPORT if cat.id == 6 else CategoryScope.PER_EVALUATION
            assert cat.scope is expected

    def test_unique_identifiers(self, rubric):
        criterion_ids = [c.id for c in rubric.criteria()]
        requirement_ids = [r.id for r in rubric.all_requirements()]
        assert len(set(criterion_ids)) == len(criterion_ids)
        assert len(set(requirement_ids)) == len(requirement_ids)

    def test_every_criterion_has_minimum(self, rubric):
        for criterion in rubric.criteria():
            assert criterion.minimum, criterion.id

    def test_tier_letters_partition_like_two_columns(self, rubric):
        # within each criterion the minimum item letters all precede the
        # full-credit letters
        for criterion in rubric.criteria():
            def letters(reqs):
                out = []
                for req in reqs:
                    assert req.id.startswith(criterion.id)
                    suffix = req.id[len(criterion.id):]
                    assert suffix in string.ascii_uppercase
                    out.append(suffix)
                return out

            min_letters = letters(criterion.minimum)
            full_letters = letters(criterion.full_credit)
            if min_letters and full_letters:
                assert max(min_letters) < min(full_letters), criterion.id

    def test_requirement_ids_round_trip(self, rubric):
        reloaded = load_rubric(json.dumps(rubric.to_dict()))
        assert [r.id for r in reloaded.all_requirements()] == [r.id for r in rubric.all_requirements()]
        assert reloaded == rubric

    def test_published_label_gap_preserved(self, rubric):
        # the standard's expanded summary labels the third auto-grader item D
        ids = [r.id for r in rubric.criterion("2(v-a)").requirements]
        assert ids == ["2(v-a)A", "2(v-a)B", "2(v-a)D"]

    def test_field_presence_paths_resolve(self, rubric):
        paths = [p for r in rubric.all_requirements() for p in r.check.paths]
        assert paths
        assert sa.reportdoc.declared_paths_valid(paths) == []

    def test_special_rules_present_exactly_where_expected(self, rubric):
        with_rules = {c.id: [r.effect_kind for r in c.special_rules] for c in rubric.criteria() if c.special_rules}
        assert with_rules == {
            "1(ii)": ["minimum_suffices_for_full"],
            "2(i)": ["minimum_suffices_for_full"],
            "2(iv-c)": ["counts_toward_minimum"],
        }
        for criterion in rubric.criteria():
            for rule in criterion.special_rules:
                assert rule.provenance


class TestLoadErrors:
    def test_builtin_aliases(self, rubric):
        assert load_rubric() == rubric
        assert load_rubric("stream-v1") == rubric

    def test_malformed_json(self):
        with pytest.raises(RubricError, match="malformed"):
            load_rubric("{not json")

    def test_unknown_schema(self):
        with pytest.raises(RubricError, match="schema"):
            load_rubric(json.dumps({"schema": "nope/v9", "version": "x", "categories": []}))

    def test_extra_criterion_fails_leaf_count(self, rubric):
        raw = rubric.to_dict()
        extra = json.loads(json.dumps(raw["categories"][0]["criteria"][0]))
        extra["id"] = "1(iv)"
        extra["minimum"] = [dict(r, id="1(iv)A") for r in extra["minimum"]]
        extra["full_credit"] = [dict(r, id="1(iv)" + r["id"][-1]) for r in extra["full_credit"]]
        raw["categories"][0]["criteria"].append(extra)
        with pytest.raises(RubricError, match="leaf count mismatch"):
            load_rubric(raw)

    def test_duplicate_criterion_id_reported(self, rubric):
        raw = rubric.to_dict()
        raw["categories"][3]["criteria"][1]["id"] = "4(i)"
        built = sa.rubric._build(raw)
        findings = validate_rubric(built)
        assert any(f.code == "duplicate-id" and "4(i)" in f.message for f in findings)
        with pytest.raises(RubricError):
            load_rubric(raw)

    def test_unresolved_schema_path_reported(self, rubric):
        raw = rubric.to_dict()
        raw["categories"][0]["criteria"][0]["minimum"][0]["check"] = {
            "kind": "field_presence",
            "any_of": ["evaluation.nonexistent"],
        }
        built = sa.rubric._build(raw)
        findings = validate_rubric(built)
        assert any(f.code == "unresolved-schema-path" for f in findings)

    def test_wrong_scope_reported(self, rubric):
        raw = rubric.to_dict()
        raw["categories"][5]["scope"] = "per_evaluation"
        findings = validate_rubric(sa.rubric._build(raw))
        assert any(f.code == "category-scope" for f in findings)


def _meta(gm: GradingMethod, bk: BaselineKind) -> EvaluationMetadata:
    return EvaluationMetadata(AnswerFormat.OPEN_ENDED, gm, bk)


# hand-enumerated from the branch table: 17 unconditional criteria, +3 per
# active grading branch, +3 with a human baseline or +2 without
EXPECTED_COUNTS = {
    (GradingMethod.ANSWER_KEY_ONLY, BaselineKind.HUMAN_BASELINE): 20,
    (GradingMethod.ANSWER_KEY_ONLY, BaselineKind.NO_HUMAN_BASELINE): 19,
    (GradingMethod.HUMAN_GRADED, BaselineKind.HUMAN_BASELINE): 23,
    (GradingMethod.HUMAN_GRADED, BaselineKind.NO_HUMAN_BASELINE): 22,
    (GradingMethod.AUTO_GRADED, BaselineKind.HUMAN_BASELINE): 23,
    (GradingMethod.AUTO_GRADED, BaselineKind.NO_HUMAN_BASELINE): 22,
    (GradingMethod.BOTH, BaselineKind.HUMAN_BASELINE): 26,
    (GradingMethod.BOTH, BaselineKind.NO_HUMAN_BASELINE): 25,
}


class TestApplicability:
    def test_cross_product_counts(self, rubric):
        for (gm, bk), expected in EXPECTED_COUNTS.items():
            assert len(applicable_criteria(rubric, _meta(gm, bk))) == expected, (gm, bk)

    def test_counts_equal_total_minus_excluded_leaves(self, rubric):
        for meta in all_metadata():
            excluded = 0
            excluded += 0 if meta.human_graded else 3
            excluded += 0 if meta.auto_graded else 3
            excluded += 2 if meta.baseline_kind is BaselineKind.HUMAN_BASELINE else 3
            assert len(applicable_criteria(rubric, meta)) == 28 - excluded

    def test_auto_no_baseline_exact_ids(self, rubric):
        ids = [e.id for e in applicable_criteria(rubric, _meta(GradingMethod.AUTO_GRADED, BaselineKind.NO_HUMAN_BASELINE))]
        assert ids == [
            "1(i)", "1(ii)", "1(iii)",
            "2(i)", "2(ii)", "2(iii)", "2(v-a)", "2(v-b)", "2(v-c)",
            "3(i)", "3(ii)", "3(iii)",
            "4(i)", "4(ii)", "4(iii)",
            "5(ii-a)", "5(ii-b)",
            "6(i)", "6(ii)", "6(iii)", "6(iv)", "6(v)",
        ]

    def test_answer_key_only_with_baseline_ids(self, rubric):
        ids = [e.id for e in applicable_criteria(rubric, _meta(GradingMethod.ANSWER_KEY_ONLY, BaselineKind.HUMAN_BASELINE))]
        assert len(ids) == 20
        assert {"2(iv-a)", "2(iv-b)", "2(iv-c)", "2(v-a)", "2(v-b)", "2(v-c)"}.isdisjoint(ids)
        assert {"5(i-a)", "5(i-b)", "5(i-c)"} <= set(ids)

    def test_branch_exclusivity(self, rubric):
        for meta in all_metadata():
            ids = {e.id for e in applicable_criteria(rubric, meta)}
            human = {"2(iv-a)", "2(iv-b)", "2(iv-c)"} <= ids
            auto = {"2(v-a)", "2(v-b)", "2(v-c)"} <= ids
            assert human == meta.human_graded
            assert auto == meta.auto_graded
            baseline = {"5(i-a)", "5(i-b)", "5(i-c)"} <= ids
            none = {"5(ii-a)", "5(ii-b)"} <= ids
            assert baseline != none

    def test_order_stable_and_deterministic(self, rubric):
        document_order = [c.id for c in rubric.criteria()]
        for meta in all_metadata():
            once = applicable_criteria(rubric, meta)
            again = applicable_criteria(rubric, meta)
            assert once == again
            positions = [document_order.index(e.id) for e in once]
            assert positions == sorted(positions)

    def test_once_per_report_flag(self, rubric):
        entries = applicable_criteria(rubric, _meta(GradingMethod.BOTH, BaselineKind.HUMAN_BASELINE))
        flagged = {e.id for e in entries if e.once_per_report}
        assert flagged == {"6(i)", "6(ii)", "6(iii)", "6(iv)", "6(v)"}


class TestApplicableRequirements:
    def test_no_subset_disables_subset_items(self, rubric):
        criterion = rubric.criterion("2(i)")
        resolved = dict(
            (req.id, state) for req, state in applicable_requirements(criterion, make_facts(subset_used=False))
        )
        assert resolved["2(i)A"] is Applicability.APPLICABLE
        assert resolved["2(i)B"] is Applicability.NOT_APPLICABLE
        assert resolved["2(i)C"] is Applicability.NOT_APPLICABLE

    def test_where_applicable_is_unknown(self, rubric):
        criterion = rubric.criterion("1(i)")
        resolved = dict((req.id, state) for req, state in applicable_requirements(criterion, make_facts()))
        assert resolved["1(i)H"] is Applicability.UNKNOWN

    def test_designer_is_publisher_enables_provenance_item(self, rubric):
        criterion = rubric.criterion("2(iii)")
        resolved = dict(
            (req.id, state)
            for req, state in applicable_requirements(criterion, make_facts(designer_is_publisher=True))
        )
        assert resolved["2(iii)B"] is Applicability.APPLICABLE

    def test_unknown_fact_is_unknown(self, rubric):
        criterion = rubric.criterion("2(iii)")
        resolved = dict((req.id, state) for req, state in applicable_requirements(criterion, make_facts()))
        assert resolved["2(iii)B"] is Applicability.UNKNOWN

    def test_negated_condition(self, rubric):
        criterion = rubric.criterion("6(v)")
        resolved = dict(
            (req.id, state)
            for req, state in applicable_requirements(criterion, make_facts(disagreements_denied=True))
        )
        assert resolved["6(v)B"] is Applicability.NOT_APPLICABLE


class TestChecklistSpotIds:
    def test_expanded_contains_published_item_ids(self, rubric):
        text = sa.export_checklist(rubric, detail="expanded", fmt="text")
        for rid in ["1(i)A", "1(i)B", "1(i)C", "1(i)D", "1(i)E", "1(i)F", "1(i)G", "1(i)H",
                    "2(v-c)D", "4(iii)E", "5(i-b)F", "6(v)C"]:
            assert re.search(rf"^\s*{re.escape(rid)}\. ", text, re.MULTILINE), rid
