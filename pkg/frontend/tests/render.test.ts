/** Contract tests: rendered views against recorded API responses.
 *
 * The console must not compute anything itself, so every assertion here
 * checks that displayed values come verbatim from the recorded payloads,
 * exact rationals included.
 */

import { describe, expect, it } from "vitest";

import {
  outcomeBadge, renderClassification, renderError, renderHistory,
  renderSideCondition, renderWitnessTable,
} from "../src/render.js";
import { SessionForest } from "../src/session.js";
import { ClassifyResponse, QeResponse } from "../src/types.js";
import { RecordedExchange, loadFixture } from "./fixtures.js";

const marshall = loadFixture<RecordedExchange<{ dsl: string }, ClassifyResponse>>(
  "classify_marshall");
const edited = loadFixture<RecordedExchange<{ dsl: string }, ClassifyResponse>>(
  "classify_marshall_edited");
const qe = loadFixture<RecordedExchange<any, QeResponse>>("qe_0013");
const strengthened = loadFixture<RecordedExchange<{ dsl: string }, ClassifyResponse>>(
  "classify_0013_strengthened");
const parseError = loadFixture<RecordedExchange>("classify_parse_error");

describe("classification view", () => {
  it("renders the starter model as True with an UNSAT counterexample row", () => {
    const html = renderClassification(marshall.response);
    expect(html).toContain(">True</span>");
    expect(html).toContain("badge-true");
    expect(html).toContain("UNSAT");
    expect(marshall.response.queries.counterexample?.status).toBe("UNSAT");
  });

  it("renders the edited-sign variant as Mixed with both points shown", () => {
    const doc = edited.response;
    expect(doc.outcome).toBe("Mixed");
    const html = renderClassification(doc);
    expect(html).toContain("badge-mixed");
    expect(html).toContain("example point");
    expect(html).toContain("counterexample point");
    for (const [name, value] of Object.entries(doc.queries.example!.witness!)) {
      expect(html).toContain(`<td>${name}</td>`);
      expect(html).toContain(`class="rational">${value}</td>`);
    }
    for (const value of Object.values(doc.queries.counterexample!.witness!)) {
      expect(html).toContain(`class="rational">${value}</td>`);
    }
  });

  it("shows witness rationals exactly as sent, no reformatting", () => {
    const html = renderWitnessTable({ x: "-1/2", y: "22/7" }, "point");
    expect(html).toContain(">-1/2<");
    expect(html).toContain(">22/7<");
    expect(html).not.toContain("0.5");
    expect(html).not.toContain("3.14");
  });

  it("escapes markup in service-provided strings", () => {
    const html = renderWitnessTable({ "<x>": "1/3" }, 'a "caption" <b>');
    expect(html).not.toContain("<x>");
    expect(html).toContain("&lt;x&gt;");
    expect(html).toContain("&quot;caption&quot;");
  });
});

describe("side-condition view", () => {
  it("renders the derived condition with the verified marker", () => {
    const doc = qe.response;
    expect(doc.equivalence_checked).toBe(true);
    const html = renderSideCondition(doc);
    expect(html).toContain("equivalence verified");
    expect(html).toContain(doc.formula_dsl
      .replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;"));
    expect(html).toContain('data-action="conjoin"');
  });

  it("marks unverified conditions distinctly", () => {
    const html = renderSideCondition({
      ...qe.response, equivalence_checked: false, notes: ["timeout"],
    });
    expect(html).toContain("equivalence not verified");
    expect(html).toContain("timeout");
  });
});

describe("conjoin-and-reclassify flow", () => {
  it("renders the strengthened model as True", () => {
    expect(strengthened.response.outcome).toBe("True");
    const html = renderClassification(strengthened.response);
    expect(html).toContain("badge-true");
  });
});

describe("errors", () => {
  it("parse errors carry the source position for inline display", () => {
    const html = renderError(parseError.response, parseError.status ?? 400);
    expect(html).toContain(`data-line="${parseError.response.line}"`);
    expect(html).toContain("error 400");
  });

  it("status 0 renders as unreachable-service banner", () => {
    const html = renderError({ error: "connection refused" }, 0);
    expect(html).toContain("service unreachable");
  });
});

describe("history tree", () => {
  it("renders the forest with parent nesting", () => {
    const forest = new SessionForest();
    const a = forest.add({
      parent: null, kind: "classify", source: "m1", result: marshall.response,
    });
    forest.add({
      parent: a.id, kind: "classify", source: "m2", result: edited.response,
    });
    const html = renderHistory(forest);
    expect(html).toContain('data-step="1"');
    expect(html).toContain('data-step="2"');
    // the child list is nested inside the parent's list item
    expect(html.indexOf("<ul>")).toBeLessThan(html.indexOf('data-step="2"'));
  });

  it("badges come from recorded outcomes only", () => {
    expect(outcomeBadge("ContradictoryAssumptions")).toContain("Contradictory");
    expect(outcomeBadge("Unknown", "example: timeout")).toContain("example: timeout");
  });
});
