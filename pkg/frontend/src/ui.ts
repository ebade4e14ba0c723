// DOM rendering for the workbench: criterion stepper, judgment controls,
// live scorecard panel, completion screen, and the rater comparison view.

import { clear, el } from "./dom.js";
import { JudgmentInputError, SessionConflictError, SessionFlow } from "./session.js";
import type { CompareModel } from "./compare.js";
import type { ItemView, CriterionPanel } from "./session.js";
import { REPORT_SCOPE, type Verdict } from "./types.js";

const STATE_LABELS: Record<string, string> = {
  met_auto: "met (auto)",
  met_judged: "met (judged)",
  unmet: "unmet",
  not_applicable: "N/A",
  pending: "pending",
};

function scopeLabel(scope: string): string {
  return scope === REPORT_SCOPE ? "Report level" : scope;
}

export class WorkbenchUi {
  private flow: SessionFlow | null = null;

  constructor(private readonly root: HTMLElement) {}

  attach(flow: SessionFlow): void {
    this.flow = flow;
    this.render();
  }

  private render(): void {
    const flow = this.flow;
    if (!flow) return;
    clear(this.root);
    if (flow.complete) {
      this.root.appendChild(this.completionScreen(flow));
    } else {
      this.root.appendChild(this.stepper(flow));
      this.root.appendChild(this.panelView(flow, flow.current()));
      this.root.appendChild(this.branchNoteView(flow));
    }
    this.root.appendChild(this.scorePanel(flow));
  }

  private stepper(flow: SessionFlow): HTMLElement {
    const steps = flow.panels.map((panel, index) =>
      el(
        "button",
        {
          className:
            "step" +
            (index === flow.stepIndex ? " current" : "") +
            (panel.items.some((i) => i.state === "pending") ? " has-pending" : ""),
          title: `${scopeLabel(panel.scope)} ${panel.criterion.id}`,
          onclick: () => {
            flow.jump(index);
            this.render();
          },
        },
        panel.criterion.id,
      ),
    );
    return el("nav", { className: "stepper" }, ...steps);
  }

  private panelView(flow: SessionFlow, panel: CriterionPanel): HTMLElement {
    const header = el(
      "header",
      {},
      el("h2", {}, `${panel.criterion.id} - ${scopeLabel(panel.scope)}`),
      el("p", { className: "category" }, `${panel.category.id}. ${panel.category.title}`),
      el("p", { className: "criterion-title" }, panel.criterion.title),
    );
    const items = panel.items.map((item) => this.itemCard(flow, panel, item));
    return el("section", { className: "panel" }, header, ...items);
  }

  private itemCard(flow: SessionFlow, panel: CriterionPanel, item: ItemView): HTMLElement {
    const tier = item.requirement.tier === "minimum" ? "Minimum" : "Full credit";
    const badge = el("span", { className: `tier ${item.requirement.tier}` }, tier);
    const state = el("span", { className: `state ${item.state}` }, STATE_LABELS[item.state] ?? item.state);
    const note = item.auto.note ? el("p", { className: "auto-note" }, item.auto.note) : null;

    const comment = el("textarea", {
      className: "comment",
      placeholder: "comment (required for overrides and N/A)",
    }) as HTMLTextAreaElement;
    const overrideToggle = el("input", { type: "checkbox", className: "override" }) as HTMLInputElement;
    const error = el("p", { className: "error" });

    const judgeButton = (verdict: Verdict, label: string) =>
      el(
        "button",
        {
          className: `judge ${verdict}`,
          onclick: async () => {
            try {
              await flow.judge(panel.scope, item.requirement.id, verdict, comment.value, overrideToggle.checked);
              this.render();
            } catch (err) {
              if (err instanceof SessionConflictError) {
                error.textContent = err.message;
              } else if (err instanceof JudgmentInputError) {
                error.textContent = err.message;
              } else {
                throw err;
              }
            }
          },
        },
        label,
      );

    const controls =
      item.editable || overrideToggle.checked
        ? el(
            "div",
            { className: "controls" },
            judgeButton("met", "Met"),
            judgeButton("unmet", "Unmet"),
            judgeButton("not_applicable", "N/A"),
            comment,
            error,
          )
        : el(
            "div",
            { className: "controls readonly" },
            el("label", {}, overrideToggle, " override this automatic result"),
            error,
          );
    overrideToggle.addEventListener("change", () => this.render());

    return el(
      "article",
      { className: "item" },
      el("div", { className: "item-head" }, el("code", {}, item.requirement.id), badge, state),
      el("p", { className: "text" }, item.requirement.text),
      note,
      controls,
    );
  }

  private branchNoteView(flow: SessionFlow): HTMLElement {
    const scope = flow.current().scope;
    const notes = flow.branchNotes.filter((n) => n.scope === scope);
    if (!notes.length) return el("aside", { className: "branch-notes empty" });
    return el(
      "aside",
      { className: "branch-notes" },
      ...notes.map((n) => el("p", {}, el("code", {}, n.criterionId), ` ${n.note}`)),
    );
  }

  private scorePanel(flow: SessionFlow): HTMLElement {
    const panel = el("aside", { className: "score-panel" }, el("h3", {}, "Live scorecard"));
    void flow.refreshScorecard().then((card) => {
      const pct = ((card.overall_points / Math.max(card.overall_applicable, 1)) * 100).toFixed(1);
      panel.appendChild(
        el(
          "p",
          {},
          `${card.overall_points}/${card.overall_applicable} (${pct}%)` +
            (card.provisional ? ` - PROVISIONAL, ${card.pending_count} pending` : ""),
        ),
      );
    });
    void flow.scorecardSvg().then((svg) => {
      const holder = el("div", { className: "svg-holder" });
      holder.innerHTML = svg;
      panel.appendChild(holder);
    });
    return panel;
  }

  private completionScreen(flow: SessionFlow): HTMLElement {
    const download = el(
      "button",
      {
        className: "download",
        onclick: async () => {
          const text = await flow.downloadSessionFile();
          const blob = new Blob([text], { type: "application/json" });
          const link = el("a", {
            href: URL.createObjectURL(blob),
            download: `session-${flow.sessionId}.json`,
          }) as HTMLAnchorElement;
          link.click();
          URL.revokeObjectURL(link.href);
        },
      },
      "Download session file",
    );
    return el(
      "section",
      { className: "complete" },
      el("h2", {}, "Session complete"),
      el("p", {}, "Every judgment is recorded. The session file applies identically through the CLI."),
      download,
    );
  }
}

export function renderCompare(root: HTMLElement, model: CompareModel): void {
  clear(root);
  if (!model.enabled) {
    root.appendChild(el("p", { className: "disabled" }, model.explanation));
    return;
  }
  const stats = el("div", { className: "stats" });
  if (model.fallbackHeader) {
    stats.appendChild(el("p", { className: "fallback" }, model.fallbackHeader));
  } else {
    for (const stat of model.stats) {
      stats.appendChild(
        el(
          "p",
          { className: stat.undefined ? "stat undefined" : "stat" },
          `${stat.label}: ${stat.display}`,
          stat.note ? el("span", { className: "note" }, ` (${stat.note})`) : null,
        ),
      );
    }
  }
  const header = el(
    "tr",
    {},
    el("th", {}, "cell"),
    ...model.raters.map((rater) => el("th", {}, rater)),
  );
  const rows = model.grid.map((cell) =>
    el(
      "tr",
      { className: cell.disagreement ? "disagree" : "" },
      el("td", {}, `${scopeLabel(cell.scope)} ${cell.criterion}`),
      ...cell.states.map((state) => el("td", {}, state ?? "?")),
    ),
  );
  root.appendChild(stats);
  root.appendChild(el("table", { className: "compare-grid" }, header, ...rows));
}
