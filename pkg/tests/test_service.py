"""HTTP service: endpoint contracts, concurrency rules, CLI parity."""

from __future__ import annotations

import json

import pytest
from fastapi.testclient import TestClient

import streamaudit as sa
from streamaudit.cli import main
from streamaudit.grading import auto_assess
from streamaudit.reportdoc import serialize_report
from streamaudit.service import create_app


@pytest.fixture()
def client(tmp_path):
    return TestClient(create_app(tmp_path / "data"))


@pytest.fixture()
def uploaded(client, gold_report):
    response = client.post("/api/reports", content=serialize_report(gold_report))
    assert response.status_code == 201
    return response.json()["id"]


def post_all_judgments(client, report_id, grader="alice", verdict="met"):
    session_id = client.post("/api/sessions", json={"grader": grader, "report_id": report_id}).json()["id"]
    pending = client.get(f"/api/reports/{report_id}/assessment").json()["pending"]
    judgments = [
        {
            "seq": seq,
            "evaluation": None if item["scope"] == "__report__" else item["scope"],
            "requirement": item["requirement"],
            "verdict": verdict,
            "comment": "reviewed",
        }
        for seq, item in enumerate(pending, start=1)
    ]
    response = client.post(f"/api/sessions/{session_id}/judgments", json={"judgments": judgments})
    assert response.status_code == 200, response.text
    return session_id, response.json()


class TestReports:
    def test_upload_returns_id_and_findings(self, client, gold_report):
        response = client.post("/api/reports", content=serialize_report(gold_report))
        assert response.status_code == 201
        body = response.json()
        assert body["id"] == gold_report.digest()
        assert body["findings"] == []
        assert body["evaluations"] == gold_report.evaluation_names()

    def test_malformed_body_is_400(self, client):
        assert client.post("/api/reports", content="{broken").status_code == 400
        assert client.post("/api/reports", json={"schema": "nope"}).status_code == 400

    def test_unknown_id_is_404(self, client):
        assert client.get("/api/reports/ffffffffffffffff").status_code == 404
        assert client.get("/api/reports/ffffffffffffffff/assessment").status_code == 404
        assert client.get("/api/sessions/nonexistent").status_code == 404

    def test_uploads_are_immutable(self, client, gold_report, uploaded):
        post_all_judgments(client, uploaded)
        stored = client.get(f"/api/reports/{uploaded}").text
        assert stored == serialize_report(gold_report)

    def test_rubric_endpoint(self, client, rubric):
        body = client.get("/api/rubric").json()
        assert body["schema"] == "stream-rubric/v1"
        assert sa.load_rubric(json.dumps(body)) == rubric


class TestAssessment:
    def test_matches_auto_assess(self, client, rubric, gold_report, uploaded):
        body = client.get(f"/api/reports/{uploaded}/assessment").json()
        local = auto_assess(gold_report, rubric)
        assert body["cells"] == local.to_dict()["cells"]
        assert len(body["pending"]) == len(local.pending())


class TestSessions:
    def test_judgment_flow_reaches_zero_pending(self, client, uploaded):
        _sid, body = post_all_judgments(client, uploaded)
        assert body["pending_count"] == 0

    def test_stale_sequence_is_409(self, client, uploaded):
        session_id, _ = post_all_judgments(client, uploaded)
        response = client.post(
            f"/api/sessions/{session_id}/judgments",
            json={"seq": 1, "evaluation": None, "requirement": "6(i)D", "verdict": "met", "comment": "x"},
        )
        assert response.status_code == 409

    def test_non_applicable_requirement_is_422(self, client, uploaded):
        session_id = client.post("/api/sessions", json={"grader": "bob", "report_id": uploaded}).json()["id"]
        response = client.post(
            f"/api/sessions/{session_id}/judgments",
            json={"seq": 1, "evaluation": None, "requirement": "2(i)A", "verdict": "met", "comment": "x"},
        )
        assert response.status_code == 422
        assert "not applicable" in response.json()["detail"]

    def test_atomic_batch_rejected_entirely(self, client, uploaded):
        session_id = client.post("/api/sessions", json={"grader": "bob", "report_id": uploaded}).json()["id"]
        bad_batch = {
            "judgments": [
                {"seq": 1, "evaluation": None, "requirement": "6(i)D", "verdict": "met", "comment": "x"},
                {"seq": 2, "evaluation": None, "requirement": "2(i)A", "verdict": "met", "comment": "x"},
            ]
        }
        assert client.post(f"/api/sessions/{session_id}/judgments", json=bad_batch).status_code == 422
        assert client.get(f"/api/sessions/{session_id}").json()["next_seq"] == 1

    def test_malformed_judgment_is_400(self, client, uploaded):
        session_id = client.post("/api/sessions", json={"grader": "bob", "report_id": uploaded}).json()["id"]
        assert client.post(f"/api/sessions/{session_id}/judgments", json={"nope": 1}).status_code == 400

    def test_session_create_requires_known_report(self, client):
        assert client.post("/api/sessions", json={"grader": "a", "report_id": "ffffffffffffffff"}).status_code == 404


class TestScorecards:
    def test_live_scorecard_is_provisional_by_default(self, client, uploaded):
        body = json.loads(client.get(f"/api/reports/{uploaded}/scorecard").text)
        assert body["provisional"] is True
        assert body["schema"] == "stream-scorecard/v1"

    def test_pending_with_allow_pending_false_is_409(self, client, uploaded):
        response = client.get(f"/api/reports/{uploaded}/scorecard", params={"allow_pending": "false"})
        assert response.status_code == 409

    def test_svg_mid_session_shows_pending(self, client, uploaded):
        response = client.get(f"/api/reports/{uploaded}/scorecard.svg")
        assert response.status_code == 200
        assert response.headers["content-type"].startswith("image/svg+xml")
        assert "PROVISIONAL" in response.text

    def test_byte_identical_with_cli_export(self, client, tmp_path, capsys, gold_report, uploaded):
        session_id, _ = post_all_judgments(client, uploaded)
        api_export = client.get(
            f"/api/reports/{uploaded}/scorecard", params={"sessions": session_id, "allow_pending": "false"}
        ).text

        report_path = tmp_path / "report.json"
        report_path.write_text(serialize_report(gold_report), encoding="utf-8")
        session_doc = client.get(f"/api/sessions/{session_id}").json()["session"]
        session_path = tmp_path / "session.json"
        session_path.write_text(json.dumps(session_doc), encoding="utf-8")
        out_path = tmp_path / "card.json"
        code = main(["score", str(report_path), "--sessions", str(session_path), "-o", str(out_path)])
        capsys.readouterr()
        assert code == 0
        assert out_path.read_text(encoding="utf-8") == api_export

    def test_unknown_session_in_query_is_404(self, client, uploaded):
        assert client.get(f"/api/reports/{uploaded}/scorecard", params={"sessions": "nope"}).status_code == 404


class TestAgreementEndpoint:
    def test_two_sessions(self, client, uploaded):
        a, _ = post_all_judgments(client, uploaded, grader="alice")
        b, _ = post_all_judgments(client, uploaded, grader="bob")
        body = client.get(
            f"/api/reports/{uploaded}/agreement", params={"sessions": f"{a},{b}"}
        ).json()
        assert body["schema"] == "stream-agreement/v1"
        values = {r["statistic"]: r for r in body["results"]}
        assert values["percent_agreement"]["value"] == 1.0

    def test_one_session_is_422(self, client, uploaded):
        a, _ = post_all_judgments(client, uploaded)
        response = client.get(f"/api/reports/{uploaded}/agreement", params={"sessions": a})
        assert response.status_code == 422

    def test_unknown_metric_is_400(self, client, uploaded):
        a, _ = post_all_judgments(client, uploaded, grader="alice")
        b, _ = post_all_judgments(client, uploaded, grader="bob")
        response = client.get(
            f"/api/reports/{uploaded}/agreement", params={"sessions": f"{a},{b}", "metric": "sideways"}
        )
        assert response.status_code == 400
