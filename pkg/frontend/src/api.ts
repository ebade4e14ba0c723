// Typed client for the stream-audit HTTP API. The scorecard export is kept
// as raw text so downloads stay byte-identical with the CLI's output.

import type {
  AgreementDoc,
  AssessmentDoc,
  JudgmentDoc,
  ReportUploadResult,
  RubricDoc,
  ScorecardDoc,
  SessionEnvelope,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }

  get isConflict(): boolean {
    return this.status === 409;
  }
}

async function raise(response: Response): Promise<never> {
  let detail = response.statusText;
  try {
    const body = await response.json();
    if (body && typeof body.detail === "string") detail = body.detail;
  } catch {
    // non-JSON error body; keep the status text
  }
  throw new ApiError(response.status, detail);
}

export class WorkbenchClient {
  constructor(public readonly baseUrl: string) {}

  private url(path: string, params?: Record<string, string>): string {
    const url = new URL(path, this.baseUrl);
    for (const [key, value] of Object.entries(params ?? {})) {
      url.searchParams.set(key, value);
    }
    return url.toString();
  }

  private async getJson<T>(path: string, params?: Record<string, string>): Promise<T> {
    const response = await fetch(this.url(path, params));
    if (!response.ok) await raise(response);
    return (await response.json()) as T;
  }

  getRubric(): Promise<RubricDoc> {
    return this.getJson<RubricDoc>("/api/rubric");
  }

  async uploadReport(reportText: string): Promise<ReportUploadResult> {
    const response = await fetch(this.url("/api/reports"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: reportText,
    });
    if (!response.ok) await raise(response);
    return (await response.json()) as ReportUploadResult;
  }

  async getReportText(reportId: string): Promise<string> {
    const response = await fetch(this.url(`/api/reports/${reportId}`));
    if (!response.ok) await raise(response);
    return response.text();
  }

  getAssessment(reportId: string): Promise<AssessmentDoc> {
    return this.getJson<AssessmentDoc>(`/api/reports/${reportId}/assessment`);
  }

  async createSession(grader: string, reportId: string): Promise<SessionEnvelope> {
    const response = await fetch(this.url("/api/sessions"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ grader, report_id: reportId }),
    });
    if (!response.ok) await raise(response);
    return (await response.json()) as SessionEnvelope;
  }

  getSession(sessionId: string): Promise<SessionEnvelope> {
    return this.getJson<SessionEnvelope>(`/api/sessions/${sessionId}`);
  }

  async postJudgment(
    sessionId: string,
    judgment: JudgmentDoc,
  ): Promise<{ id: string; next_seq: number; pending_count: number }> {
    const response = await fetch(this.url(`/api/sessions/${sessionId}/judgments`), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(judgment),
    });
    if (!response.ok) await raise(response);
    return (await response.json()) as { id: string; next_seq: number; pending_count: number };
  }

  /** Raw scorecard export; parse separately so the bytes stay pristine. */
  async getScorecardText(
    reportId: string,
    sessionIds: string[],
    options: { allowPending?: boolean; threshold?: number } = {},
  ): Promise<string> {
    const params: Record<string, string> = {};
    if (sessionIds.length) params.sessions = sessionIds.join(",");
    if (options.allowPending !== undefined) params.allow_pending = String(options.allowPending);
    if (options.threshold !== undefined) params.threshold = String(options.threshold);
    const response = await fetch(this.url(`/api/reports/${reportId}/scorecard`, params));
    if (!response.ok) await raise(response);
    return response.text();
  }

  async getScorecard(
    reportId: string,
    sessionIds: string[],
    options: { allowPending?: boolean; threshold?: number } = {},
  ): Promise<ScorecardDoc> {
    return JSON.parse(await this.getScorecardText(reportId, sessionIds, options)) as ScorecardDoc;
  }

  async getScorecardSvg(reportId: string, sessionIds: string[]): Promise<string> {
    const params: Record<string, string> = {};
    if (sessionIds.length) params.sessions = sessionIds.join(",");
    const response = await fetch(this.url(`/api/reports/${reportId}/scorecard.svg`, params));
    if (!response.ok) await raise(response);
    return response.text();
  }

  getAgreement(reportId: string, sessionIds: string[], metric = "interval"): Promise<AgreementDoc> {
    return this.getJson<AgreementDoc>(`/api/reports/${reportId}/agreement`, {
      sessions: sessionIds.join(","),
      metric,
    });
  }
}
