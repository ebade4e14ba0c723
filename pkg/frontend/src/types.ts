// Wire formats of the stream-audit service. These mirror the documents the
// service emits; the workbench never computes a grade or statistic itself.

export interface RubricDoc {
  schema: string;
  version: string;
  categories: CategoryDoc[];
}

export interface CategoryDoc {
  id: number;
  title: string;
  scope: "per_evaluation" | "once_per_report";
  criteria: CriterionDoc[];
}

export type BranchKind =
  | "always"
  | "human_graded"
  | "auto_graded"
  | "human_baseline"
  | "no_human_baseline";

export interface CriterionDoc {
  id: string;
  title: string;
  summary: string;
  branch: BranchKind;
  minimum: RequirementDoc[];
  full_credit: RequirementDoc[];
  special_rules: unknown[];
}

export interface RequirementDoc {
  id: string;
  tier: "minimum" | "full_credit";
  condition: { kind: string; fact?: string; negate?: boolean };
  check: { kind: "field_presence" | "judgment"; any_of?: string[]; all_of?: string[] };
  text: string;
  provenance: string;
}

export type RequirementState =
  | "met_auto"
  | "met_judged"
  | "unmet"
  | "not_applicable"
  | "pending";

export interface StatusDoc {
  requirement: string;
  status: RequirementState;
  note?: string;
  judge?: string;
}

export const REPORT_SCOPE = "__report__";

export interface PendingItemDoc {
  scope: string;
  criterion: string;
  requirement: string;
}

export interface AssessmentDoc {
  schema: string;
  report_ref: string;
  rubric_version: string;
  cells: Record<string, Record<string, StatusDoc[]>>;
  pending: PendingItemDoc[];
}

export type Verdict = "met" | "unmet" | "not_applicable";

export interface JudgmentDoc {
  seq: number;
  evaluation: string | null;
  requirement: string;
  verdict: Verdict;
  comment: string;
  override: boolean;
}

export interface SessionDoc {
  schema: string;
  grader: string;
  report_ref: string;
  rubric_version: string;
  judgments: JudgmentDoc[];
  created?: string;
  updated?: string;
}

export interface SessionEnvelope {
  id: string;
  session: SessionDoc;
  next_seq: number;
}

export type GradeStateDoc =
  | "satisfied"
  | "partial"
  | "not_satisfied"
  | "not_applicable"
  | "pending";

export interface GradeDoc {
  state: GradeStateDoc;
  value?: number;
  rationale?: string;
}

export interface ScorecardRowDoc {
  scope: string;
  cells: Record<string, GradeDoc>;
  points: number;
  applicable: number;
}

export interface ScorecardDoc {
  schema: string;
  report_ref: string;
  rubric_version: string;
  config: { full_credit_threshold: number; allow_pending: boolean };
  rows: ScorecardRowDoc[];
  category_points: Record<string, number>;
  category_applicable: Record<string, number>;
  overall_points: number;
  overall_applicable: number;
  normalized: number;
  pending_count: number;
  provisional: boolean;
}

export interface AgreementResultDoc {
  statistic: string;
  value: number | null;
  n_items_used: number;
  undefined: boolean;
  note: string;
}

export interface DigestEntryDoc {
  item: string;
  values: Record<string, number | null>;
  spread: number;
}

export interface AgreementDoc {
  schema: string;
  report_ref: string;
  raters: string[];
  n_items: number;
  alpha_metric: string;
  results: AgreementResultDoc[];
  digest: { header: string; entries: DigestEntryDoc[] };
  applicability_disagreements: string[];
}

export interface ReportUploadResult {
  id: string;
  evaluations: string[];
  warnings: string[];
  findings: { code: string; message: string; where: string }[];
}
