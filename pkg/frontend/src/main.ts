// Bootstrap: wire the API client, session flow, and UI together.
//
// Query parameters:
//   api=<base url>      service location (default http://127.0.0.1:8431)
//   report=<id>         report to grade (otherwise upload via the form)
//   session=<id>        resume an existing session
//   grader=<name>       grader id for new sessions
//   compare=<id,id,...> open the comparison view for completed sessions

import { WorkbenchClient } from "./api.js";
import { loadCompareView } from "./compare.js";
import { el } from "./dom.js";
import { SessionFlow } from "./session.js";
import { renderCompare, WorkbenchUi } from "./ui.js";

async function boot(): Promise<void> {
  const params = new URL(window.location.href).searchParams;
  const client = new WorkbenchClient(params.get("api") ?? "http://127.0.0.1:8431");
  const mount = document.getElementById("workbench");
  if (!mount) throw new Error("missing #workbench mount point");

  const compareIds = params.get("compare");
  const reportId = params.get("report");
  if (compareIds && reportId) {
    const model = await loadCompareView(client, reportId, compareIds.split(","));
    renderCompare(mount, model);
    return;
  }

  if (!reportId) {
    mount.appendChild(uploadForm(client));
    return;
  }

  const grader = params.get("grader") ?? "grader";
  const sessionId = params.get("session");
  const flow = sessionId
    ? await SessionFlow.resume(client, reportId, sessionId)
    : await SessionFlow.open(client, reportId, grader);
  const pending = flow.firstPendingIndex();
  if (pending >= 0) flow.jump(pending);
  new WorkbenchUi(mount).attach(flow);
}

function uploadForm(client: WorkbenchClient): HTMLElement {
  const input = el("input", { type: "file", accept: ".json" }) as HTMLInputElement;
  const status = el("p", {});
  const button = el(
    "button",
    {
      onclick: async () => {
        const file = input.files?.[0];
        if (!file) {
          status.textContent = "choose a stream-report/v1 file first";
          return;
        }
        const result = await client.uploadReport(await file.text());
        const url = new URL(window.location.href);
        url.searchParams.set("report", result.id);
        window.location.href = url.toString();
      },
    },
    "Upload report",
  );
  return el(
    "section",
    { className: "upload" },
    el("h2", {}, "Upload a model report"),
    input,
    button,
    status,
  );
}

void boot().catch((error) => {
  const mount = document.getElementById("workbench");
  if (mount) mount.textContent = `failed to start: ${error}`;
  console.error(error);
});
