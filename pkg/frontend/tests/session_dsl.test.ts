/** Session forest semantics and the textual model-language helpers. */

import { describe, expect, it } from "vitest";

import {
  conjoinIntoAssumptions, declaredVariables, highlight, splitSections,
  validateSource, withoutFreeDeclarations,
} from "../src/dsl.js";
import { SessionForest } from "../src/session.js";
import { RecordedExchange, loadFixture } from "./fixtures.js";

const marshall = loadFixture<RecordedExchange>("classify_marshall");
const krugman = loadFixture<RecordedExchange>("classify_0013");
const qe = loadFixture<RecordedExchange>("qe_0013");
const strengthened = loadFixture<RecordedExchange>("classify_0013_strengthened");

describe("session forest", () => {
  it("branches form a forest and steps stay immutable", () => {
    const forest = new SessionForest();
    const root = forest.add({
      parent: null, kind: "classify", source: "a", result: marshall.response,
    });
    const branch1 = forest.add({
      parent: root.id, kind: "qe", source: "a", result: qe.response,
    });
    const branch2 = forest.add({
      parent: root.id, kind: "classify", source: "b", result: marshall.response,
    });
    expect(forest.childrenOf(root.id).map((s) => s.id)).toEqual([branch1.id, branch2.id]);
    expect(forest.isWellFormed()).toBe(true);
    expect(() => {
      (root as any).source = "mutated";
    }).toThrow();
  });

  it("survives export and import", () => {
    const forest = new SessionForest();
    forest.add({ parent: null, kind: "classify", source: "a", result: marshall.response });
    forest.add({ parent: 1, kind: "qe", source: "a", result: qe.response });
    const restored = SessionForest.importJson(forest.exportJson());
    expect(restored.all().length).toBe(2);
    expect(restored.get(2)?.parent).toBe(1);
    expect(restored.isWellFormed()).toBe(true);
  });

  it("rejects malformed imports", () => {
    expect(() => SessionForest.importJson("{}")).toThrow();
    expect(() => SessionForest.importJson(JSON.stringify({
      version: 1,
      steps: [{ id: 1, parent: 5, kind: "classify", source: "", result: {}, timestamp: 0 }],
    }))).toThrow(/forest/);
  });
});

describe("source validation", () => {
  it("flags an empty hypothesis before any request", () => {
    expect(validateSource("vars x\nassume x > 0\nhypothesis")).toMatch(/hypothesis is empty/);
    expect(validateSource("vars x\nassume x > 0\nhypothesis   # todo")).toMatch(/empty/);
  });

  it("accepts complete models", () => {
    expect(validateSource(marshall.request.dsl)).toBeNull();
    expect(validateSource(krugman.request.dsl)).toBeNull();
  });

  it("extracts declared variables for the free-variable picker", () => {
    expect(declaredVariables(marshall.request.dsl)).toEqual(["v1", "v2", "v3", "v4"]);
    expect(declaredVariables(krugman.request.dsl)).toContain("Dw");
    expect(declaredVariables(krugman.request.dsl)).toContain("Sw");
  });
});

describe("conjoin rewrite", () => {
  it("reproduces the exact strengthened source the fixtures were recorded with", () => {
    const rebuilt = withoutFreeDeclarations(
      conjoinIntoAssumptions(krugman.request.dsl, qe.response.formula_dsl));
    expect(rebuilt).toBe(strengthened.request.dsl);
  });

  it("keeps the hypothesis untouched", () => {
    const out = conjoinIntoAssumptions(marshall.request.dsl, "v1 + v2 < 0");
    const sections = splitSections(out)!;
    expect(sections.hypothesis.trim()).toBe("v3 > 0 and v4 < 0");
    expect(sections.beforeHypothesis).toContain("and (v1 + v2 < 0)");
  });
});

describe("highlighting", () => {
  it("marks keywords and escapes content", () => {
    const html = highlight('problem "m"\nassume x < 1 # note');
    expect(html).toContain('<span class="tok-kw">problem</span>');
    expect(html).toContain('<span class="tok-kw">assume</span>');
    expect(html).toContain("&lt;");
    expect(html).toContain('<span class="tok-comment">');
  });

  it("never emits raw angle brackets from user input", () => {
    const html = highlight("<script>alert(1)</script>");
    expect(html).not.toContain("<script>");
  });
});
