/** The what-if session: an append-only forest of analysis steps.
 *
 * Strengthening one branch while weakening another forks the history,
 * so steps form a forest through parent references rather than a linear
 * trail.  Steps are immutable once recorded; the whole forest exports
 * to JSON and imports back, surviving page reloads.
 */

import { ClassifyResponse, QeResponse } from "./types.js";

export type StepKind = "classify" | "qe";

export interface SessionStep {
  readonly id: number;
  readonly parent: number | null;
  readonly kind: StepKind;
  readonly source: string;
  readonly freeVars?: string[];
  readonly result: ClassifyResponse | QeResponse;
  readonly timestamp: number;
}

export class SessionForest {
  private steps: SessionStep[] = [];

  add(step: Omit<SessionStep, "id" | "timestamp">, now = Date.now()): SessionStep {
    const full: SessionStep = Object.freeze({
      ...step,
      id: this.steps.length + 1,
      timestamp: now,
    });
    this.steps.push(full);
    return full;
  }

  all(): readonly SessionStep[] {
    return this.steps;
  }

  get(id: number): SessionStep | undefined {
    return this.steps.find((s) => s.id === id);
  }

  childrenOf(id: number | null): SessionStep[] {
    return this.steps.filter((s) => s.parent === id);
  }

  roots(): SessionStep[] {
    return this.childrenOf(null);
  }

  /** Parent references must point backwards: the forest has no cycles. */
  isWellFormed(): boolean {
    return this.steps.every(
      (s, i) => s.id === i + 1 && (s.parent === null || (s.parent >= 1 && s.parent < s.id)),
    );
  }

  exportJson(): string {
    return JSON.stringify({ version: 1, steps: this.steps }, null, 2);
  }

  static importJson(text: string): SessionForest {
    const doc = JSON.parse(text) as { version: number; steps: SessionStep[] };
    if (!doc || !Array.isArray(doc.steps)) {
      throw new Error("not a session export");
    }
    const forest = new SessionForest();
    forest.steps = doc.steps.map((s) => Object.freeze({ ...s }));
    if (!forest.isWellFormed()) {
      throw new Error("imported session is not a well-formed forest");
    }
    return forest;
  }
}
