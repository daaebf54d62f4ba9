/** Pure view builders: service documents in, HTML strings out.
 *
 * Everything shown comes verbatim from a service response; witness
 * values in particular are exact rational strings and are never
 * reformatted or rounded here.
 */

import { SessionForest, SessionStep } from "./session.js";
import {
  ApiError, ClassifyResponse, OutcomeName, QeResponse, QueryDoc, Witness,
} from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

const BADGE_CLASS: Record<OutcomeName, string> = {
  True: "badge-true",
  False: "badge-false",
  Mixed: "badge-mixed",
  ContradictoryAssumptions: "badge-contradictory",
  Unknown: "badge-unknown",
};

export function outcomeBadge(outcome: OutcomeName, detail?: string): string {
  const label = outcome === "ContradictoryAssumptions" ? "Contradictory" : outcome;
  const title = detail ? ` title="${escapeHtml(detail)}"` : "";
  return `<span class="badge ${BADGE_CLASS[outcome]}"${title}>${escapeHtml(label)}</span>`;
}

export function renderWitnessTable(witness: Witness, caption: string): string {
  const rows = Object.entries(witness)
    .map(([name, value]) =>
      `<tr><td>${escapeHtml(name)}</td><td class="rational">${escapeHtml(value)}</td></tr>`)
    .join("");
  return (
    `<table class="witness"><caption>${escapeHtml(caption)}</caption>` +
    `<thead><tr><th>variable</th><th>value</th></tr></thead>` +
    `<tbody>${rows}</tbody></table>`
  );
}

function renderQueryRow(label: string, q: QueryDoc | undefined): string {
  if (!q) {
    return `<tr><td>${label}</td><td colspan="3" class="skipped">not run</td></tr>`;
  }
  const reason = q.reason ? ` (${escapeHtml(q.reason)})` : "";
  return (
    `<tr><td>${label}</td>` +
    `<td class="status status-${q.status.toLowerCase()}">${q.status}${reason}</td>` +
    `<td>${escapeHtml(q.engine)}</td>` +
    `<td>${q.millis.toFixed(0)} ms</td></tr>`
  );
}

export function renderClassification(doc: ClassifyResponse): string {
  const parts: string[] = [];
  parts.push(
    `<div class="result-head">${outcomeBadge(doc.outcome, doc.outcome_detail)}` +
    `<span class="problem-id">${escapeHtml(doc.id)}</span></div>`,
  );
  parts.push(
    `<table class="queries"><thead><tr>` +
    `<th>query</th><th>status</th><th>engine</th><th>time</th></tr></thead><tbody>` +
    renderQueryRow("assumptions", doc.queries.assumptions) +
    renderQueryRow("example", doc.queries.example) +
    renderQueryRow("counterexample", doc.queries.counterexample) +
    `</tbody></table>`,
  );
  const example = doc.queries.example?.witness;
  if (example) {
    parts.push(renderWitnessTable(example, "example point"));
  }
  const counter = doc.queries.counterexample?.witness;
  if (counter) {
    parts.push(renderWitnessTable(counter, "counterexample point"));
  }
  for (const w of doc.warnings) {
    parts.push(`<p class="warning">${escapeHtml(w)}</p>`);
  }
  return `<div class="classification">${parts.join("")}</div>`;
}

export function renderSideCondition(doc: QeResponse): string {
  const marker = doc.equivalence_checked
    ? `<span class="verified">equivalence verified</span>`
    : `<span class="unverified">equivalence not verified</span>`;
  const notes = doc.notes.map((n) => `<p class="note">${escapeHtml(n)}</p>`).join("");
  return (
    `<div class="side-condition">` +
    `<div class="result-head"><span class="badge badge-condition">Condition</span>${marker}</div>` +
    `<pre class="condition">${escapeHtml(doc.formula_dsl)}</pre>` +
    `<details><summary>counterexample region</summary>` +
    `<pre class="condition">${escapeHtml(doc.projection_dsl)}</pre></details>` +
    notes +
    `<button class="conjoin" data-action="conjoin">conjoin into assumptions and re-classify</button>` +
    `</div>`
  );
}

export function renderError(err: ApiError, status: number): string {
  const where =
    err.line !== undefined
      ? `<span class="error-pos" data-line="${err.line}" data-col="${err.col ?? 0}">` +
        `line ${err.line}, col ${err.col ?? "?"}</span> `
      : "";
  const kind = status === 0 ? "service unreachable" : `error ${status}`;
  return `<div class="error"><strong>${kind}:</strong> ${where}${escapeHtml(err.error)}</div>`;
}

export function renderHistory(forest: SessionForest): string {
  const renderStep = (step: SessionStep): string => {
    const summary =
      step.kind === "classify"
        ? outcomeBadge((step.result as ClassifyResponse).outcome)
        : `<span class="badge badge-condition">QE</span>`;
    const children = forest.childrenOf(step.id);
    const sub = children.length
      ? `<ul>${children.map(renderStep).join("")}</ul>`
      : "";
    return (
      `<li><button class="step" data-step="${step.id}">#${step.id}</button> ` +
      `${summary}${sub}</li>`
    );
  };
  const roots = forest.roots();
  if (!roots.length) {
    return `<p class="empty">no steps yet</p>`;
  }
  return `<ul class="history">${roots.map(renderStep).join("")}</ul>`;
}
