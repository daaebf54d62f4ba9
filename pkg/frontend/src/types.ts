/** Wire types of the analysis service (see the backend README). */

export type QueryStatus = "SAT" | "UNSAT" | "UNKNOWN";

export type OutcomeName =
  | "True"
  | "False"
  | "Mixed"
  | "ContradictoryAssumptions"
  | "Unknown";

/** Witness values are exact rational strings like "-1/2"; never parse
 * them into floats. */
export type Witness = Record<string, string>;

export interface QueryDoc {
  status: QueryStatus;
  engine: string;
  millis: number;
  reason?: string;
  witness?: Witness;
}

export interface ClassifyResponse {
  id: string;
  outcome: OutcomeName;
  outcome_detail?: string;
  queries: {
    assumptions?: QueryDoc;
    example?: QueryDoc;
    counterexample?: QueryDoc;
  };
  warnings: string[];
  step?: number;
}

export interface QeResponse {
  formula_dsl: string;
  projection_dsl: string;
  equivalence_checked: boolean;
  notes: string[];
  step?: number;
}

export interface DecideResponse {
  status: QueryStatus;
  reason?: string;
  witness?: Witness;
}

export interface CorpusSummary {
  root: string;
  theorems: number;
  complete: number;
  files: number;
  digest: string;
  warnings: string[];
}

export interface ApiError {
  error: string;
  line?: number;
  col?: number;
}

export class ServiceError extends Error {
  constructor(
    message: string,
    readonly status: number,
    readonly detail: ApiError,
  ) {
    super(message);
  }
}
