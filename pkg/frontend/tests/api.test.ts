import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiError, WorkbenchClient } from "../src/api.js";
import { goldReportText, startService, type ServiceHandle } from "./harness.js";

let service: ServiceHandle;
let client: WorkbenchClient;

beforeAll(async () => {
  service = await startService();
  client = new WorkbenchClient(service.baseUrl);
});

afterAll(() => service.stop());

describe("api client", () => {
  it("fetches the rubric", async () => {
    const rubric = await client.getRubric();
    expect(rubric.schema).toBe("stream-rubric/v1");
    expect(rubric.categories).toHaveLength(6);
    expect(rubric.categories.flatMap((c) => c.criteria)).toHaveLength(28);
  });

  it("uploads reports and fetches assessments", async () => {
    const uploaded = await client.uploadReport(goldReportText());
    expect(uploaded.findings).toEqual([]);
    const assessment = await client.getAssessment(uploaded.id);
    expect(assessment.schema).toBe("stream-assessment/v1");
    expect(assessment.pending.length).toBeGreaterThan(0);
  });

  it("maps error statuses to ApiError", async () => {
    await expect(client.getAssessment("ffffffffffffffff")).rejects.toMatchObject({ status: 404 });
    await expect(client.uploadReport("{broken")).rejects.toMatchObject({ status: 400 });
    const uploaded = await client.uploadReport(goldReportText());
    const session = await client.createSession("grader", uploaded.id);
    await expect(
      client.postJudgment(session.id, {
        seq: 99,
        evaluation: null,
        requirement: "6(i)D",
        verdict: "met",
        comment: "",
        override: false,
      }),
    ).rejects.toSatisfy((error: unknown) => error instanceof ApiError && error.isConflict);
  });

  it("returns the scorecard export as raw text", async () => {
    const uploaded = await client.uploadReport(goldReportText());
    const text = await client.getScorecardText(uploaded.id, []);
    expect(text.endsWith("\n")).toBe(true);
    const parsed = JSON.parse(text);
    expect(parsed.schema).toBe("stream-scorecard/v1");
    expect(parsed.provisional).toBe(true);
    const svg = await client.getScorecardSvg(uploaded.id, []);
    expect(svg.startsWith('<?xml version="1.0"')).toBe(true);
  });
});
