// Grading session flow: step through the applicable requirements of each
// evaluation, record judgments with sequence numbers, and track pending
// count. All grading state lives on the service; this module only holds a
// view of it and can rebuild itself from the service after a refresh.

import { ApiError, WorkbenchClient } from "./api.js";
import {
  REPORT_SCOPE,
  type AssessmentDoc,
  type BranchKind,
  type CategoryDoc,
  type CriterionDoc,
  type JudgmentDoc,
  type RequirementDoc,
  type RequirementState,
  type RubricDoc,
  type ScorecardDoc,
  type StatusDoc,
  type Verdict,
} from "./types.js";

export class JudgmentInputError extends Error {}

/** A stale sequence number: another tab or an earlier load got there first. */
export class SessionConflictError extends Error {
  constructor(detail: string) {
    super(`${detail} - reload the session to continue`);
  }
}

export interface ItemView {
  requirement: RequirementDoc;
  /** status assigned by the automatic assessment */
  auto: StatusDoc;
  /** latest judgment applied in this session, if any */
  judgment?: JudgmentDoc;
  state: RequirementState;
  /** true when the engine accepts a judgment without the override flag */
  editable: boolean;
}

export interface CriterionPanel {
  scope: string;
  category: CategoryDoc;
  criterion: CriterionDoc;
  items: ItemView[];
}

export interface BranchNote {
  scope: string;
  criterionId: string;
  note: string;
}

const BRANCH_NOTES: Record<BranchKind, string> = {
  always: "",
  human_graded: "not applicable: auto-graded evaluation",
  auto_graded: "not applicable: human-graded evaluation",
  human_baseline: "not applicable: no human baseline was used",
  no_human_baseline: "not applicable: a human baseline was used",
};

const VERDICT_STATE: Record<Verdict, RequirementState> = {
  met: "met_judged",
  unmet: "unmet",
  not_applicable: "not_applicable",
};

function scopeOf(evaluation: string | null): string {
  return evaluation ?? REPORT_SCOPE;
}

export class SessionFlow {
  readonly panels: CriterionPanel[];
  readonly branchNotes: BranchNote[];
  private position = 0;
  private nextSeq: number;
  private pending: number;

  private constructor(
    private readonly client: WorkbenchClient,
    readonly reportId: string,
    readonly sessionId: string,
    readonly grader: string,
    readonly rubric: RubricDoc,
    assessment: AssessmentDoc,
    appliedJudgments: JudgmentDoc[],
    nextSeq: number,
  ) {
    this.panels = buildPanels(rubric, assessment);
    this.branchNotes = buildBranchNotes(rubric, assessment);
    for (const judgment of appliedJudgments) {
      this.applyLocally(judgment);
    }
    this.nextSeq = nextSeq;
    this.pending = this.panels
      .flatMap((p) => p.items)
      .filter((i) => i.state === "pending").length;
  }

  /** Start a fresh grading session for an uploaded report. */
  static async open(client: WorkbenchClient, reportId: string, grader: string): Promise<SessionFlow> {
    const [rubric, assessment] = await Promise.all([
      client.getRubric(),
      client.getAssessment(reportId),
    ]);
    const envelope = await client.createSession(grader, reportId);
    return new SessionFlow(client, reportId, envelope.id, grader, rubric, assessment, [], envelope.next_seq);
  }

  /** Rebuild the flow for an existing session (e.g. after a page reload). */
  static async resume(client: WorkbenchClient, reportId: string, sessionId: string): Promise<SessionFlow> {
    const [rubric, assessment, envelope] = await Promise.all([
      client.getRubric(),
      client.getAssessment(reportId),
      client.getSession(sessionId),
    ]);
    return new SessionFlow(
      client,
      reportId,
      sessionId,
      envelope.session.grader,
      rubric,
      assessment,
      envelope.session.judgments,
      envelope.next_seq,
    );
  }

  get pendingCount(): number {
    return this.pending;
  }

  get complete(): boolean {
    return this.pending === 0;
  }

  get stepIndex(): number {
    return this.position;
  }

  current(): CriterionPanel {
    const panel = this.panels[this.position];
    if (!panel) throw new Error("empty session flow");
    return panel;
  }

  jump(index: number): CriterionPanel {
    if (index < 0 || index >= this.panels.length) {
      throw new RangeError(`panel index ${index} out of range`);
    }
    this.position = index;
    return this.current();
  }

  next(): CriterionPanel {
    return this.jump(Math.min(this.position + 1, this.panels.length - 1));
  }

  previous(): CriterionPanel {
    return this.jump(Math.max(this.position - 1, 0));
  }

  /** The first panel that still has a pending item, if any. */
  firstPendingIndex(): number {
    return this.panels.findIndex((p) => p.items.some((i) => i.state === "pending"));
  }

  find(scope: string, requirementId: string): ItemView {
    for (const panel of this.panels) {
      if (panel.scope !== scope) continue;
      for (const item of panel.items) {
        if (item.requirement.id === requirementId) return item;
      }
    }
    throw new JudgmentInputError(`requirement ${requirementId} is not gradable in scope ${scope}`);
  }

  /**
   * Record one judgment. Overrides of auto-resolved items need the override
   * flag and a comment; NotApplicable judgments always need a comment (the
   * engine enforces the same rules server-side).
   */
  async judge(
    scope: string,
    requirementId: string,
    verdict: Verdict,
    comment = "",
    override = false,
  ): Promise<void> {
    const item = this.find(scope, requirementId);
    if (!item.editable && !override) {
      throw new JudgmentInputError(
        `${requirementId} was resolved automatically; enable override to change it`,
      );
    }
    if (override && !comment) {
      throw new JudgmentInputError("overrides require a comment");
    }
    if (verdict === "not_applicable" && !comment) {
      throw new JudgmentInputError("a NotApplicable judgment requires a comment");
    }
    const judgment: JudgmentDoc = {
      seq: this.nextSeq,
      evaluation: scope === REPORT_SCOPE ? null : scope,
      requirement: requirementId,
      verdict,
      comment,
      override,
    };
    let result;
    try {
      result = await this.client.postJudgment(this.sessionId, judgment);
    } catch (error) {
      if (error instanceof ApiError && error.isConflict) {
        throw new SessionConflictError(error.detail);
      }
      throw error;
    }
    this.applyLocally(judgment);
    this.nextSeq = result.next_seq;
    this.pending = result.pending_count;
  }

  private applyLocally(judgment: JudgmentDoc): void {
    const item = this.find(scopeOf(judgment.evaluation), judgment.requirement);
    item.judgment = judgment;
    item.state = VERDICT_STATE[judgment.verdict];
  }

  /** Provisional scorecard for the live side panel. */
  refreshScorecard(): Promise<ScorecardDoc> {
    return this.client.getScorecard(this.reportId, [this.sessionId], { allowPending: true });
  }

  scorecardSvg(): Promise<string> {
    return this.client.getScorecardSvg(this.reportId, [this.sessionId]);
  }

  /**
   * The session file offered on the completion screen. Identical in format
   * to the CLI's grade-session files: applying it with the CLI reproduces
   * the service's scorecard byte for byte.
   */
  async downloadSessionFile(): Promise<string> {
    const envelope = await this.client.getSession(this.sessionId);
    return JSON.stringify(envelope.session, null, 2) + "\n";
  }

  /** Final (non-provisional) scorecard export text, for completed sessions. */
  async finalScorecardText(): Promise<string> {
    return this.client.getScorecardText(this.reportId, [this.sessionId], { allowPending: false });
  }
}

function buildPanels(rubric: RubricDoc, assessment: AssessmentDoc): CriterionPanel[] {
  const panels: CriterionPanel[] = [];
  const requirementIndex = new Map<string, RequirementDoc>();
  for (const category of rubric.categories) {
    for (const criterion of category.criteria) {
      for (const requirement of [...criterion.minimum, ...criterion.full_credit]) {
        requirementIndex.set(requirement.id, requirement);
      }
    }
  }
  const scopes = Object.keys(assessment.cells);
  for (const scope of scopes) {
    const criteria = assessment.cells[scope] ?? {};
    for (const category of rubric.categories) {
      for (const criterion of category.criteria) {
        const statuses = criteria[criterion.id];
        if (!statuses) continue;
        const items: ItemView[] = statuses.map((status) => {
          const requirement = requirementIndex.get(status.requirement);
          if (!requirement) {
            throw new Error(`assessment references unknown requirement ${status.requirement}`);
          }
          return {
            requirement,
            auto: status,
            state: status.status,
            editable: status.status === "pending",
          };
        });
        panels.push({ scope, category, criterion, items });
      }
    }
  }
  return panels;
}

function buildBranchNotes(rubric: RubricDoc, assessment: AssessmentDoc): BranchNote[] {
  const notes: BranchNote[] = [];
  for (const [scope, criteria] of Object.entries(assessment.cells)) {
    if (scope === REPORT_SCOPE) continue;
    for (const category of rubric.categories) {
      if (category.scope === "once_per_report") continue;
      for (const criterion of category.criteria) {
        if (!(criterion.id in criteria)) {
          notes.push({ scope, criterionId: criterion.id, note: BRANCH_NOTES[criterion.branch] });
        }
      }
    }
  }
  return notes;
}
