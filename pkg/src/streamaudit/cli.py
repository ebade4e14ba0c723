"""Command-line entry point binding the toolkit into workflows.

Subcommands: scaffold, validate, assess, grade, score, render, agreement,
checklist, serve. Exit codes: 0 success, 1 findings or violations present,
2 usage error, 3 I/O or document-format error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import agreement as ag
from . import grading, render, scaffold
from .reportdoc import (
    AnswerFormat,
    BaselineKind,
    EvaluationMetadata,
    GradingMethod,
    ReportDocument,
    ReportParseError,
    parse_report,
    serialize_report,
    validate_report_structure,
)
from .rubric import Rubric, RubricError, load_rubric

AGREEMENT_SCHEMA_ID = "stream-agreement/v1"

_GRADING_ALIASES = {
    "answer_key": GradingMethod.ANSWER_KEY_ONLY,
    "answer_key_only": GradingMethod.ANSWER_KEY_ONLY,
    "human": GradingMethod.HUMAN_GRADED,
    "human_graded": GradingMethod.HUMAN_GRADED,
    "auto": GradingMethod.AUTO_GRADED,
    "auto_graded": GradingMethod.AUTO_GRADED,
    "both": GradingMethod.BOTH,
}
_BASELINE_ALIASES = {
    "human": BaselineKind.HUMAN_BASELINE,
    "human_baseline": BaselineKind.HUMAN_BASELINE,
    "none": BaselineKind.NO_HUMAN_BASELINE,
    "no_human_baseline": BaselineKind.NO_HUMAN_BASELINE,
}
_FORMAT_ALIASES = {
    "mc": AnswerFormat.MULTIPLE_CHOICE,
    "multiple_choice": AnswerFormat.MULTIPLE_CHOICE,
    "ms": AnswerFormat.MULTIPLE_SELECT,
    "multiple_select": AnswerFormat.MULTIPLE_SELECT,
    "short": AnswerFormat.SHORT_ANSWER,
    "short_answer": AnswerFormat.SHORT_ANSWER,
    "open": AnswerFormat.OPEN_ENDED,
    "open_ended": AnswerFormat.OPEN_ENDED,
    "agentic": AnswerFormat.AGENTIC,
    "mixed": AnswerFormat.MIXED,
}


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def parse_plan(spec: str) -> EvaluationMetadata:
    """Parse ``grading:baseline[:format]`` (e.g. ``auto:none:open``)."""
    parts = spec.split(":")
    if len(parts) not in (2, 3):
        raise CliError(f"bad plan {spec!r}: expected grading:baseline[:format]", 2)
    grading_method = _GRADING_ALIASES.get(parts[0].strip())
    baseline = _BASELINE_ALIASES.get(parts[1].strip())
    answer_format = _FORMAT_ALIASES.get(parts[2].strip()) if len(parts) == 3 else AnswerFormat.OPEN_ENDED
    if grading_method is None:
        raise CliError(f"bad plan {spec!r}: unknown grading method {parts[0]!r}", 2)
    if baseline is None:
        raise CliError(f"bad plan {spec!r}: unknown baseline kind {parts[1]!r}", 2)
    if answer_format is None:
        raise CliError(f"bad plan {spec!r}: unknown answer format {parts[2]!r}", 2)
    return EvaluationMetadata(
        answer_format=answer_format, grading_method=grading_method, baseline_kind=baseline
    )


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", 3) from exc


def _write_output(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot write {out}: {exc}", 3) from exc


def _load_rubric_arg(spec: str) -> Rubric:
    if spec in ("builtin", "stream-v1"):
        return load_rubric()
    try:
        return load_rubric(_read_text(spec))
    except RubricError as exc:
        raise CliError(f"bad rubric document: {exc}", 3) from exc


def _load_report(path: str) -> ReportDocument:
    try:
        return parse_report(_read_text(path))
    except ReportParseError as exc:
        raise CliError(str(exc), 3) from exc


def _load_session(path: str) -> grading.GraderSession:
    try:
        return grading.GraderSession.from_dict(json.loads(_read_text(path)))
    except (json.JSONDecodeError, KeyError, ValueError) as exc:
        raise CliError(f"bad session file {path}: {exc}", 3) from exc


def _session_paths(args) -> list[str]:
    paths: list[str] = []
    for entry in args.sessions:
        paths.extend(p for p in entry.split(",") if p)
    if not paths:
        raise CliError("at least one session file required", 2)
    return paths


# ---------------------------------------------------------------------------
# subcommand handlers

def _cmd_scaffold(args) -> int:
    plans = [parse_plan(p) for p in args.plan] or [
        EvaluationMetadata(
            answer_format=AnswerFormat.OPEN_ENDED,
            grading_method=GradingMethod.AUTO_GRADED,
            baseline_kind=BaselineKind.NO_HUMAN_BASELINE,
        )
    ]
    if args.evaluations is not None:
        if args.evaluations < 1:
            raise CliError("a scaffold needs at least one evaluation", 2)
        if len(plans) == 1:
            plans = plans * args.evaluations
        elif len(plans) != args.evaluations:
            raise CliError("--evaluations disagrees with the number of --plan entries", 2)
    names = args.name or None
    guidance = _load_rubric_arg(args.rubric) if args.guidance else None
    try:
        doc = scaffold.scaffold_report(plans, names=names, guidance=guidance)
    except scaffold.ScaffoldError as exc:
        raise CliError(str(exc), 2) from exc
    _write_output(serialize_report(doc), args.output)
    return 0


def _cmd_validate(args) -> int:
    rubric = _load_rubric_arg(args.rubric)
    report = _load_report(args.report)
    for warning in report.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    findings = validate_report_structure(report, rubric)
    for finding in findings:
        print(f"{finding.code}: {finding.where}: {finding.message}")
    if findings:
        print(f"{len(findings)} finding(s)", file=sys.stderr)
        return 1
    return 0


def _cmd_assess(args) -> int:
    rubric = _load_rubric_arg(args.rubric)
    report = _load_report(args.report)
    assessment = grading.auto_assess(report, rubric)
    _write_output(json.dumps(assessment.to_dict(), indent=2, ensure_ascii=False) + "\n", args.output)
    pending = len(assessment.pending())
    if pending:
        print(f"{pending} judgment(s) pending", file=sys.stderr)
    return 0


def _cmd_grade(args) -> int:
    rubric = _load_rubric_arg(args.rubric)
    report = _load_report(args.report)
    assessment = grading.auto_assess(report, rubric)
    for path in _session_paths(args):
        session = _load_session(path)
        try:
            assessment = grading.apply_judgments(assessment, session)
        except grading.GradingError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
    _write_output(json.dumps(assessment.to_dict(), indent=2, ensure_ascii=False) + "\n", args.output)
    pending = len(assessment.pending())
    if pending:
        print(f"{pending} judgment(s) pending", file=sys.stderr)
    return 0


def _score_from_args(args, rubric: Rubric, report: ReportDocument) -> grading.Scorecard:
    assessment = grading.auto_assess(report, rubric)
    for path in _session_paths(args) if args.sessions else []:
        assessment = grading.apply_judgments(assessment, _load_session(path))
    config = grading.ScoringConfig(
        full_credit_threshold=args.threshold, allow_pending=args.allow_pending
    )
    return grading.score_report(assessment, rubric, config)


def _cmd_score(args) -> int:
    rubric = _load_rubric_arg(args.rubric)
    report = _load_report(args.report)
    try:
        scorecard = _score_from_args(args, rubric, report)
    except grading.PendingJudgmentsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except grading.GradingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _write_output(render.export_scorecard(scorecard), args.output)
    if scorecard.provisional:
        print(f"provisional: {scorecard.pending_count} judgment(s) pending", file=sys.stderr)
    return 0


def _cmd_render(args) -> int:
    rubric = _load_rubric_arg(args.rubric)
    try:
        scorecard = render.import_scorecard(_read_text(args.scorecard))
    except render.RenderError as exc:
        raise CliError(str(exc), 3) from exc
    if args.format == "svg":
        _write_output(render.render_svg(scorecard, rubric=rubric), args.output)
    else:
        _write_output(render.render_text(scorecard, rubric=rubric, ascii_mode=args.ascii), args.output)
    return 0


def _mean_pairwise(results: list[ag.AgreementResult], statistic: str) -> ag.AgreementResult:
    defined = [r.value for r in results if r.value is not None]
    n = max((r.n_items_used for r in results), default=0)
    if not defined:
        return ag.AgreementResult(statistic, None, n, note="undefined: no variation")
    note = "mean over rater pairs" if len(results) > 1 else ""
    return ag.AgreementResult(statistic, sum(defined) / len(defined), n, note=note)


def agreement_document(
    matrix: ag.RaterMatrix,
    applicability_disagreements: tuple[str, ...] = (),
    metric: ag.AlphaMetric = ag.AlphaMetric.INTERVAL,
    report_ref: str = "",
) -> dict:
    """The ``stream-agreement/v1`` body shared by the CLI and the service."""
    results = []
    try:
        results.append(ag.percent_agreement(matrix))
    except ag.AgreementError as exc:
        results.append(ag.AgreementResult("percent_agreement", None, 0, note=str(exc)))
    kappas = []
    rhos = []
    for j in range(matrix.n_raters):
        for k in range(j + 1, matrix.n_raters):
            a = matrix.column(matrix.raters[j])
            b = matrix.column(matrix.raters[k])
            try:
                kappas.append(ag.cohen_kappa(a, b))
            except ag.AgreementError:
                pass
            try:
                rhos.append(ag.spearman_rho(a, b))
            except ag.AgreementError:
                pass
    results.append(_mean_pairwise(kappas, "cohen_kappa"))
    try:
        results.append(ag.krippendorff_alpha(matrix, metric))
    except ag.AgreementError as exc:
        results.append(ag.AgreementResult("krippendorff_alpha", None, 0, note=str(exc)))
    results.append(_mean_pairwise(rhos, "spearman_rho"))
    return {
        "schema": AGREEMENT_SCHEMA_ID,
        "report_ref": report_ref,
        "raters": list(matrix.raters),
        "n_items": matrix.n_items,
        "alpha_metric": metric.value,
        "results": [r.to_dict() for r in results],
        "digest": ag.disagreement_digest(matrix).to_dict(),
        "applicability_disagreements": list(applicability_disagreements),
    }


def _cmd_agreement(args) -> int:
    rubric = _load_rubric_arg(args.rubric)
    report = _load_report(args.report)
    sessions = [_load_session(p) for p in _session_paths(args)]
    try:
        merged = grading.merge_grader_sessions(sessions, rubric, report)
    except grading.GradingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    doc = agreement_document(
        merged.matrix,
        merged.applicability_disagreements,
        ag.AlphaMetric(args.metric),
        report_ref=report.digest(),
    )
    _write_output(json.dumps(doc, indent=2, ensure_ascii=False) + "\n", args.output)
    return 0


def _cmd_checklist(args) -> int:
    rubric = _load_rubric_arg(args.rubric)
    _write_output(scaffold.export_checklist(rubric, detail=args.detail, fmt=args.format), args.output)
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    data_dir = args.data_dir or os.environ.get("STREAM_AUDIT_DATA_DIR") or "./stream-audit-data"
    app = create_app(Path(data_dir), rubric=_load_rubric_arg(args.rubric))
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stream-audit",
        description="Parse, validate, grade, and render model reports against the STREAM v1 reporting standard.",
    )
    parser.add_argument("--rubric", default="builtin", help="rubric file, or 'builtin' (default)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scaffold", help="emit a fillable report skeleton")
    p.add_argument("--plan", action="append", default=[], help="grading:baseline[:format], repeatable")
    p.add_argument("--evaluations", type=int, default=None, help="replicate a single plan N times")
    p.add_argument("--name", action="append", help="evaluation name, repeatable")
    p.add_argument("--guidance", action="store_true", help="embed criterion texts as guidance")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_scaffold)

    p = sub.add_parser("validate", help="structural findings for a report")
    p.add_argument("report")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("assess", help="automatic assessment of a report")
    p.add_argument("report")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_assess)

    p = sub.add_parser("grade", help="apply grader session(s) to an assessment")
    p.add_argument("report")
    p.add_argument("--session", dest="sessions", action="append", required=True, help="session file, repeatable")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_grade)

    p = sub.add_parser("score", help="final or provisional scorecard export")
    p.add_argument("report")
    p.add_argument("--sessions", nargs="*", default=[], help="session files (comma- or space-separated)")
    p.add_argument("--threshold", type=float, default=0.75, help="full-credit fraction for Satisfied")
    p.add_argument("--allow-pending", action="store_true")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("render", help="render a scorecard export")
    p.add_argument("scorecard")
    p.add_argument("--format", choices=["svg", "text"], default="text")
    p.add_argument("--ascii", action="store_true", help="ASCII glyphs in text mode")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_render)

    p = sub.add_parser("agreement", help="inter-rater statistics over grader sessions")
    p.add_argument("report")
    p.add_argument("--sessions", nargs="+", required=True)
    p.add_argument("--metric", choices=[m.value for m in ag.AlphaMetric], default="interval")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_agreement)

    p = sub.add_parser("checklist", help="regenerate the standard's checklists from rubric data")
    p.add_argument("--detail", choices=["summary", "expanded"], default="summary")
    p.add_argument("--format", choices=["text", "markdown", "json"], default="text")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_checklist)

    p = sub.add_parser("serve", help="run the grading HTTP service")
    p.add_argument("--port", type=int, default=8431)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--data-dir", default=None, help="defaults to $STREAM_AUDIT_DATA_DIR")
    p.set_defaults(func=_cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except grading.GradingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
