/** DOM shell of the what-if console.
 *
 * State lives in two places only: the editor text and the session
 * forest.  At most one request is in flight; submitting cancels the
 * previous one.  All rendering goes through the pure builders in
 * render.ts, so this file is just wiring.
 */

import { ApiClient } from "./api.js";
import {
  conjoinIntoAssumptions, declaredVariables, highlight, validateSource,
  withoutFreeDeclarations,
} from "./dsl.js";
import {
  renderClassification, renderError, renderHistory, renderSideCondition,
} from "./render.js";
import { SessionForest } from "./session.js";
import { ClassifyResponse, QeResponse, ServiceError } from "./types.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

const source = el<HTMLTextAreaElement>("source");
const highlightLayer = el<HTMLPreElement>("highlight");
const resultPane = el<HTMLDivElement>("result");
const historyPane = el<HTMLDivElement>("history");
const statusBanner = el<HTMLDivElement>("status");
const freeVarsInput = el<HTMLInputElement>("free-vars");
const classifyButton = el<HTMLButtonElement>("classify");
const deriveButton = el<HTMLButtonElement>("derive");
const exportButton = el<HTMLButtonElement>("export");
const importInput = el<HTMLInputElement>("import");
const corpusSelect = el<HTMLSelectElement>("corpus");

const api = new ApiClient("");
let forest = new SessionForest();
let inflight: AbortController | null = null;
let currentParent: number | null = null;
let lastQeStep: number | null = null;

function setStatus(text: string, busy = false): void {
  statusBanner.textContent = text;
  statusBanner.classList.toggle("busy", busy);
}

function refreshHighlight(): void {
  highlightLayer.innerHTML = highlight(source.value) + "\n";
}

function refreshHistory(): void {
  historyPane.innerHTML = renderHistory(forest);
}

function beginRequest(label: string): AbortSignal {
  inflight?.abort();
  inflight = new AbortController();
  setStatus(label, true);
  return inflight.signal;
}

function endRequest(): void {
  inflight = null;
  setStatus("ready");
}

function showError(err: unknown): void {
  if (err instanceof DOMException && err.name === "AbortError") return;
  if (err instanceof ServiceError) {
    resultPane.innerHTML = renderError(err.detail, err.status);
  } else {
    resultPane.innerHTML = renderError({ error: String(err) }, 0);
  }
}

async function classify(dsl: string, parent: number | null): Promise<void> {
  const problem = validateSource(dsl);
  if (problem) {
    resultPane.innerHTML = renderError({ error: problem }, 400);
    return;
  }
  const signal = beginRequest("classifying...");
  try {
    const doc: ClassifyResponse = await api.classify(
      { dsl, parent: parent ?? undefined }, signal);
    const step = forest.add({ parent, kind: "classify", source: dsl, result: doc });
    currentParent = step.id;
    resultPane.innerHTML = renderClassification(doc);
    refreshHistory();
  } catch (err) {
    showError(err);
  } finally {
    endRequest();
  }
}

async function derive(dsl: string, free: string[], parent: number | null): Promise<void> {
  if (!free.length) {
    resultPane.innerHTML = renderError(
      { error: "select at least one free variable to derive a condition" }, 400);
    return;
  }
  const known = new Set(declaredVariables(dsl));
  const unknown = free.filter((n) => !known.has(n));
  if (unknown.length) {
    resultPane.innerHTML = renderError(
      { error: `not declared in the model: ${unknown.join(", ")}` }, 400);
    return;
  }
  const signal = beginRequest("eliminating quantifiers...");
  try {
    const doc: QeResponse = await api.qe({ dsl, free, parent: parent ?? undefined }, signal);
    const step = forest.add({ parent, kind: "qe", source: dsl, freeVars: free, result: doc });
    lastQeStep = step.id;
    currentParent = step.id;
    resultPane.innerHTML = renderSideCondition(doc);
    refreshHistory();
  } catch (err) {
    showError(err);
  } finally {
    endRequest();
  }
}

classifyButton.addEventListener("click", () => {
  void classify(source.value, currentParent);
});

deriveButton.addEventListener("click", () => {
  const free = freeVarsInput.value.split(",").map((s) => s.trim()).filter(Boolean);
  void derive(source.value, free, currentParent);
});

resultPane.addEventListener("click", (ev) => {
  const target = ev.target as HTMLElement;
  if (target.dataset.action === "conjoin" && lastQeStep !== null) {
    const step = forest.get(lastQeStep);
    if (!step) return;
    const condition = (step.result as QeResponse).formula_dsl;
    const strengthened = withoutFreeDeclarations(
      conjoinIntoAssumptions(step.source, condition));
    source.value = strengthened;
    refreshHighlight();
    void classify(strengthened, step.id);
  }
});

historyPane.addEventListener("click", (ev) => {
  const target = ev.target as HTMLElement;
  const id = target.dataset.step;
  if (!id) return;
  const step = forest.get(Number(id));
  if (!step) return;
  source.value = step.source;
  refreshHighlight();
  currentParent = step.id;
  if (step.kind === "classify") {
    resultPane.innerHTML = renderClassification(step.result as ClassifyResponse);
  } else {
    lastQeStep = step.id;
    resultPane.innerHTML = renderSideCondition(step.result as QeResponse);
  }
});

exportButton.addEventListener("click", () => {
  const blob = new Blob([forest.exportJson()], { type: "application/json" });
  const a = document.createElement("a");
  a.href = URL.createObjectURL(blob);
  a.download = "econqe-session.json";
  a.click();
  URL.revokeObjectURL(a.href);
});

importInput.addEventListener("change", async () => {
  const file = importInput.files?.[0];
  if (!file) return;
  try {
    forest = SessionForest.importJson(await file.text());
    refreshHistory();
    setStatus(`imported ${forest.all().length} steps`);
  } catch (err) {
    resultPane.innerHTML = renderError({ error: String(err) }, 400);
  }
});

source.addEventListener("input", refreshHighlight);
source.addEventListener("scroll", () => {
  highlightLayer.scrollTop = source.scrollTop;
  highlightLayer.scrollLeft = source.scrollLeft;
});

async function loadCorpusList(): Promise<void> {
  try {
    const summary = await api.corpus();
    setStatus(`service ready; corpus has ${summary.theorems} theorems`);
    const ids = ["0013", "0056", "0078"];
    for (const id of ids) {
      const option = document.createElement("option");
      option.value = id;
      option.textContent = `model ${id}`;
      corpusSelect.appendChild(option);
    }
  } catch {
    setStatus("service unreachable; start it with: econqe serve", false);
    statusBanner.classList.add("error");
  }
}

corpusSelect.addEventListener("change", async () => {
  const id = corpusSelect.value;
  if (!id) return;
  try {
    const doc = await api.corpusSource(id);
    source.value = doc.source;
    refreshHighlight();
    currentParent = null;
  } catch (err) {
    showError(err);
  }
});

refreshHighlight();
refreshHistory();
void loadCorpusList();
