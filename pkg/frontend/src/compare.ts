// Side-by-side rater comparison: agreement statistics plus a per-cell
// disagreement grid. Everything shown is fetched from the service; with
// fewer than two sessions the view is disabled with an explanation.

import type { WorkbenchClient } from "./api.js";
import type { AgreementDoc, GradeStateDoc, ScorecardDoc } from "./types.js";

export interface StatView {
  statistic: string;
  label: string;
  display: string;
  undefined: boolean;
  note: string;
}

export interface GridCell {
  scope: string;
  criterion: string;
  states: (GradeStateDoc | undefined)[];
  disagreement: boolean;
}

export interface CompareModel {
  enabled: boolean;
  explanation: string;
  raters: string[];
  stats: StatView[];
  /** set when no statistic is defined; the digest stands in for them */
  fallbackHeader: string;
  digestItems: string[];
  applicabilityDisagreements: string[];
  grid: GridCell[];
}

const STAT_LABELS: Record<string, string> = {
  percent_agreement: "Percent agreement",
  cohen_kappa: "Cohen's kappa",
  krippendorff_alpha: "Krippendorff's alpha",
  spearman_rho: "Spearman's rho",
};

function formatStat(value: number | null): string {
  if (value === null) return "undefined";
  return value.toFixed(2).replace(/^(-?\d+\.\d)0$/, "$1");
}

export function disabledCompareModel(count: number): CompareModel {
  return {
    enabled: false,
    explanation: `rater comparison needs at least two completed sessions (${count} selected)`,
    raters: [],
    stats: [],
    fallbackHeader: "",
    digestItems: [],
    applicabilityDisagreements: [],
    grid: [],
  };
}

export function buildCompareModel(agreement: AgreementDoc, scorecards: ScorecardDoc[]): CompareModel {
  const stats: StatView[] = agreement.results.map((result) => ({
    statistic: result.statistic,
    label: STAT_LABELS[result.statistic] ?? result.statistic,
    display: formatStat(result.value),
    undefined: result.undefined,
    note: result.note,
  }));
  const disagreeing = new Set(agreement.digest.entries.map((entry) => entry.item));

  const grid: GridCell[] = [];
  const first = scorecards[0];
  if (first) {
    first.rows.forEach((row, rowIndex) => {
      for (const criterion of Object.keys(row.cells)) {
        const states = scorecards.map((card) => card.rows[rowIndex]?.cells[criterion]?.state);
        if (states.every((s) => s === "not_applicable")) continue;
        grid.push({
          scope: row.scope,
          criterion,
          states,
          disagreement:
            disagreeing.has(`${row.scope}:${criterion}`) ||
            agreement.applicability_disagreements.includes(`${row.scope}:${criterion}`),
        });
      }
    });
  }
  return {
    enabled: true,
    explanation: "",
    raters: agreement.raters,
    stats,
    fallbackHeader: stats.every((s) => s.undefined) ? agreement.digest.header : "",
    digestItems: agreement.digest.entries.map((entry) => entry.item),
    applicabilityDisagreements: agreement.applicability_disagreements,
    grid,
  };
}

export async function loadCompareView(
  client: WorkbenchClient,
  reportId: string,
  sessionIds: string[],
): Promise<CompareModel> {
  if (sessionIds.length < 2) {
    return disabledCompareModel(sessionIds.length);
  }
  const [agreement, ...scorecards] = await Promise.all([
    client.getAgreement(reportId, sessionIds),
    ...sessionIds.map((id) => client.getScorecard(reportId, [id], { allowPending: true })),
  ]);
  return buildCompareModel(agreement, scorecards);
}
