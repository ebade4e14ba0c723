"""Compliance toolkit for the STREAM v1 evaluation-reporting standard.

Encodes the standard as executable data: parse structured model reports,
determine which criteria apply to each evaluation, combine automatic
structural checks with human judgments into Satisfied/Partial/Not grades,
compute multi-grader agreement statistics, and render scorecards.
"""

from importlib import resources

from .agreement import (
    AgreementError,
    AgreementResult,
    AlphaMetric,
    KappaWeighting,
    RaterMatrix,
    cohen_kappa,
    disagreement_digest,
    krippendorff_alpha,
    percent_agreement,
    spearman_rho,
)
from .grading import (
    Assessment,
    Grade,
    GradeState,
    GraderSession,
    GradingError,
    Judgment,
    PendingJudgmentsError,
    RequirementStatus,
    Scorecard,
    ScoringConfig,
    Status,
    apply_judgments,
    auto_assess,
    grade_criterion,
    merge_grader_sessions,
    score_report,
)
from .render import (
    RenderTheme,
    export_scorecard,
    import_scorecard,
    render_svg,
    render_text,
)
from .reportdoc import (
    AnswerFormat,
    BaselineKind,
    EvaluationMetadata,
    FactSet,
    Finding,
    GradingMethod,
    ReportDocument,
    ReportParseError,
    Scope,
    extract_facts,
    parse_report,
    resolve_scope,
    schema_descriptor,
    serialize_report,
    validate_report_structure,
)
from .rubric import (
    Branch,
    Category,
    CategoryScope,
    Criterion,
    Rubric,
    RubricError,
    applicable_criteria,
    applicable_requirements,
    load_rubric,
    validate_rubric,
)
from .scaffold import export_checklist, scaffold_report

__version__ = "0.1.0"


def gold_standard_report() -> ReportDocument:
    """The bundled synthetic exemplary report used by the end-to-end suite."""
    text = (
        resources.files("streamaudit.data")
        .joinpath("gold_standard_report.json")
        .read_text(encoding="utf-8")
    )
    return parse_report(text)
