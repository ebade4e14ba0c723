"""HTTP session service for the grading workbench.

Persistence is plain files under the data directory (``reports/`` and
``sessions/``, one JSON document per id) for auditability. Uploaded reports
are never mutated; sessions are append-only judgment journals with
monotonically increasing sequence numbers, guarded by optimistic
concurrency: a judgment posted with a stale sequence number gets 409.

Scorecard exports served here go through the same serializer as the CLI, so
the two produce byte-identical documents for the same inputs.
"""

from __future__ import annotations

import json
import os
import threading
import uuid
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query, Request, Response

from . import agreement as ag
from . import grading, render
from .cli import agreement_document
from .reportdoc import ReportDocument, ReportParseError, parse_report, serialize_report, validate_report_structure
from .rubric import Rubric, load_rubric


class Store:
    """One-file-per-document persistence with a single writer per session."""

    def __init__(self, data_dir: Path):
        self.data_dir = data_dir
        self.reports_dir = data_dir / "reports"
        self.sessions_dir = data_dir / "sessions"
        self.reports_dir.mkdir(parents=True, exist_ok=True)
        self.sessions_dir.mkdir(parents=True, exist_ok=True)
        self._session_locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def session_lock(self, session_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._session_locks.setdefault(session_id, threading.Lock())

    @staticmethod
    def _write_atomic(path: Path, text: str) -> None:
        tmp = path.with_suffix(".tmp")
        tmp.write_text(text, encoding="utf-8")
        os.replace(tmp, path)

    def save_report(self, report: ReportDocument) -> str:
        report_id = report.digest()
        self._write_atomic(self.reports_dir / f"{report_id}.json", serialize_report(report))
        return report_id

    def load_report(self, report_id: str) -> ReportDocument:
        path = self.reports_dir / f"{report_id}.json"
        if not path.is_file():
            raise HTTPException(status_code=404, detail=f"unknown report id: {report_id}")
        return parse_report(path.read_text(encoding="utf-8"))

    def save_session(self, session_id: str, session: grading.GraderSession) -> None:
        self._write_atomic(
            self.sessions_dir / f"{session_id}.json",
            json.dumps(session.to_dict(), indent=2, ensure_ascii=False) + "\n",
        )

    def load_session(self, session_id: str) -> grading.GraderSession:
        path = self.sessions_dir / f"{session_id}.json"
        if not path.is_file():
            raise HTTPException(status_code=404, detail=f"unknown session id: {session_id}")
        return grading.GraderSession.from_dict(json.loads(path.read_text(encoding="utf-8")))


def _now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


async def _json_body(request: Request) -> dict:
    try:
        body = await request.json()
    except json.JSONDecodeError as exc:
        raise HTTPException(status_code=400, detail=f"malformed JSON body: {exc}") from exc
    if not isinstance(body, dict):
        raise HTTPException(status_code=400, detail="body must be a JSON object")
    return body


def create_app(data_dir: Path, rubric: Rubric | None = None) -> FastAPI:
    rubric = rubric or load_rubric()
    store = Store(Path(data_dir))
    app = FastAPI(title="stream-audit", version="0.1.0")

    def _sessions_from_param(report: ReportDocument, sessions: str | None) -> list[grading.GraderSession]:
        if not sessions:
            return []
        out = []
        for session_id in sessions.split(","):
            session_id = session_id.strip()
            if not session_id:
                continue
            session = store.load_session(session_id)
            if session.report_ref != report.digest():
                raise HTTPException(
                    status_code=422,
                    detail=f"session {session_id} targets a different report",
                )
            out.append(session)
        return out

    def _scorecard(
        report: ReportDocument,
        sessions: list[grading.GraderSession],
        threshold: float,
        allow_pending: bool,
    ) -> grading.Scorecard:
        assessment = grading.auto_assess(report, rubric)
        for session in sessions:
            assessment = grading.apply_judgments(assessment, session)
        config = grading.ScoringConfig(full_credit_threshold=threshold, allow_pending=allow_pending)
        try:
            return grading.score_report(assessment, rubric, config)
        except grading.PendingJudgmentsError as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from exc

    @app.get("/api/rubric")
    def get_rubric() -> dict:
        return rubric.to_dict()

    @app.post("/api/reports", status_code=201)
    async def post_report(request: Request) -> dict:
        body = await _json_body(request)
        try:
            report = parse_report(json.dumps(body))
        except ReportParseError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        report_id = store.save_report(report)
        findings = validate_report_structure(report, rubric)
        return {
            "id": report_id,
            "evaluations": report.evaluation_names(),
            "warnings": report.warnings,
            "findings": [{"code": f.code, "message": f.message, "where": f.where} for f in findings],
        }

    @app.get("/api/reports/{report_id}")
    def get_report(report_id: str) -> Response:
        report = store.load_report(report_id)
        return Response(content=serialize_report(report), media_type="application/json")

    @app.get("/api/reports/{report_id}/assessment")
    def get_assessment(report_id: str) -> dict:
        report = store.load_report(report_id)
        assessment = grading.auto_assess(report, rubric)
        payload = assessment.to_dict()
        payload["pending"] = [
            {"scope": scope, "criterion": cid, "requirement": rid}
            for scope, cid, rid in assessment.pending()
        ]
        return payload

    @app.post("/api/sessions", status_code=201)
    async def post_session(request: Request) -> dict:
        body = await _json_body(request)
        grader = body.get("grader")
        report_id = body.get("report_id")
        if not isinstance(grader, str) or not grader or not isinstance(report_id, str):
            raise HTTPException(status_code=400, detail="body needs 'grader' and 'report_id'")
        report = store.load_report(report_id)
        session = grading.GraderSession(
            grader=grader,
            report_ref=report.digest(),
            rubric_version=rubric.version,
            created=_now(),
            updated=_now(),
        )
        session_id = uuid.uuid4().hex[:12]
        store.save_session(session_id, session)
        return {"id": session_id, "session": session.to_dict(), "next_seq": session.next_seq()}

    @app.get("/api/sessions/{session_id}")
    def get_session(session_id: str) -> dict:
        session = store.load_session(session_id)
        return {"id": session_id, "session": session.to_dict(), "next_seq": session.next_seq()}

    @app.post("/api/sessions/{session_id}/judgments")
    async def post_judgments(session_id: str, request: Request) -> dict:
        body = await _json_body(request)
        raw_items = body["judgments"] if "judgments" in body else [body]
        if not isinstance(raw_items, list) or not raw_items:
            raise HTTPException(status_code=400, detail="'judgments' must be a non-empty list")
        try:
            judgments = [grading.Judgment.from_dict(item) for item in raw_items]
        except (KeyError, TypeError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=f"malformed judgment: {exc}") from exc

        lock = store.session_lock(session_id)
        with lock:
            session = store.load_session(session_id)
            updated = session
            for judgment in judgments:
                if judgment.seq != updated.next_seq():
                    raise HTTPException(
                        status_code=409,
                        detail=f"stale judgment sequence: expected {updated.next_seq()}, got {judgment.seq}",
                    )
                updated = grading.GraderSession(
                    grader=updated.grader,
                    report_ref=updated.report_ref,
                    rubric_version=updated.rubric_version,
                    judgments=updated.judgments + (judgment,),
                    created=updated.created,
                    updated=_now(),
                )
            # the whole batch must be applicable before anything is persisted
            report = store.load_report(updated.report_ref)
            assessment = grading.auto_assess(report, rubric)
            try:
                applied = grading.apply_judgments(assessment, updated)
            except grading.GradingError as exc:
                raise HTTPException(status_code=422, detail=str(exc)) from exc
            store.save_session(session_id, updated)
        return {
            "id": session_id,
            "next_seq": updated.next_seq(),
            "pending_count": len(applied.pending()),
        }

    @app.get("/api/reports/{report_id}/scorecard")
    def get_scorecard(
        report_id: str,
        sessions: str | None = Query(default=None),
        threshold: float = Query(default=0.75),
        allow_pending: bool = Query(default=True),
    ) -> Response:
        report = store.load_report(report_id)
        scorecard = _scorecard(report, _sessions_from_param(report, sessions), threshold, allow_pending)
        return Response(content=render.export_scorecard(scorecard), media_type="application/json")

    @app.get("/api/reports/{report_id}/scorecard.svg")
    def get_scorecard_svg(
        report_id: str,
        sessions: str | None = Query(default=None),
        threshold: float = Query(default=0.75),
    ) -> Response:
        report = store.load_report(report_id)
        scorecard = _scorecard(report, _sessions_from_param(report, sessions), threshold, True)
        return Response(content=render.render_svg(scorecard, rubric=rubric), media_type="image/svg+xml")

    @app.get("/api/reports/{report_id}/agreement")
    def get_agreement(
        report_id: str,
        sessions: str = Query(...),
        metric: str = Query(default="interval"),
    ) -> dict:
        report = store.load_report(report_id)
        loaded = _sessions_from_param(report, sessions)
        try:
            merged = grading.merge_grader_sessions(loaded, rubric, report)
        except grading.GradingError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        try:
            alpha_metric = ag.AlphaMetric(metric)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=f"unknown metric {metric!r}") from exc
        return agreement_document(
            merged.matrix, merged.applicability_disagreements, alpha_metric, report_ref=report.digest()
        )

    return app


def serve_api(port: int, data_dir: Path, host: str = "127.0.0.1", rubric: Rubric | None = None) -> None:
    """Run the service in the foreground (blocking)."""
    import uvicorn

    uvicorn.run(create_app(data_dir, rubric=rubric), host=host, port=port, log_level="warning")
