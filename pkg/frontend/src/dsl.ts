/** Light syntactic helpers for the model language.
 *
 * Only string-level work happens here (the service owns parsing and all
 * semantics): highlighting for the editor, the pre-flight checks that
 * catch obviously incomplete input before a request, free-variable
 * extraction for the what-if panel, and the purely textual "conjoin a
 * derived condition into the assumptions" rewrite.
 */

import { escapeHtml } from "./render.js";

const KEYWORDS = new Set([
  "problem", "vars", "free", "order", "assume", "hypothesis",
  "and", "or", "not", "implies",
]);
const INTRINSICS = new Set(["gram_psd", "nsd_minors"]);

const TOKEN = /("[^"]*")|(#[^\n]*)|([A-Za-z_][A-Za-z0-9_]*)|(\d+)|(<=|>=|!=|[<>=^*/+\-(),])|(\s+)|(.)/g;

export function highlight(source: string): string {
  let out = "";
  for (const m of source.matchAll(TOKEN)) {
    const [text, str, comment, ident, num, op, ws, other] = m;
    if (str) out += `<span class="tok-string">${escapeHtml(text)}</span>`;
    else if (comment) out += `<span class="tok-comment">${escapeHtml(text)}</span>`;
    else if (ident && KEYWORDS.has(text)) out += `<span class="tok-kw">${text}</span>`;
    else if (ident && INTRINSICS.has(text)) out += `<span class="tok-intrinsic">${text}</span>`;
    else if (ident) out += `<span class="tok-ident">${escapeHtml(text)}</span>`;
    else if (num) out += `<span class="tok-num">${text}</span>`;
    else if (op) out += `<span class="tok-op">${escapeHtml(text)}</span>`;
    else if (ws) out += text;
    else if (other) out += escapeHtml(text);
  }
  return out;
}

export interface Sections {
  beforeHypothesis: string;
  hypothesis: string;
}

/** Split at the hypothesis keyword (token position, not inside a word). */
export function splitSections(source: string): Sections | null {
  const m = /(^|\s)hypothesis(\s|$)/.exec(source);
  if (!m) return null;
  const at = m.index + m[1].length;
  return {
    beforeHypothesis: source.slice(0, at),
    hypothesis: source.slice(at + "hypothesis".length),
  };
}

/** Pre-flight validation; returns a message or null when submittable. */
export function validateSource(source: string): string | null {
  if (!source.trim()) return "the model is empty";
  if (!/(^|\s)assume(\s|$)/.test(source)) return "missing an 'assume' section";
  const sections = splitSections(source);
  if (!sections) return "missing a 'hypothesis' section";
  const hyp = sections.hypothesis.replace(/#[^\n]*/g, "").trim();
  if (!hyp) return "the hypothesis is empty";
  return null;
}

/** Names declared as variables, for the free-variable picker. */
export function declaredVariables(source: string): string[] {
  const names: string[] = [];
  for (const m of source.matchAll(/(^|\n)\s*vars\s+([^\n#]*)/g)) {
    for (const tok of m[2].split(/\s+/)) {
      if (tok && /^[A-Za-z_][A-Za-z0-9_]*$/.test(tok) && !KEYWORDS.has(tok)) {
        names.push(tok);
      }
    }
  }
  return names;
}

/** Conjoin a derived condition into the assumptions, textually. */
export function conjoinIntoAssumptions(source: string, conditionDsl: string): string {
  const sections = splitSections(source);
  if (!sections) {
    throw new Error("cannot conjoin: no hypothesis section");
  }
  const head = sections.beforeHypothesis.replace(/\s+$/, "");
  return `${head}\n  and (${conditionDsl})\nhypothesis${sections.hypothesis}`;
}

/** Drop `free` declarations so a strengthened model is fully quantified. */
export function withoutFreeDeclarations(source: string): string {
  return source
    .split("\n")
    .filter((line) => !/^\s*free\s+/.test(line))
    .join("\n");
}
