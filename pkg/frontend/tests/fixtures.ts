/** Recorded service responses (captured from a live backend run). */

import { readFileSync } from "node:fs";

export function loadFixture<T = any>(name: string): T {
  const url = new URL(`./fixtures/${name}.json`, import.meta.url);
  return JSON.parse(readFileSync(url, "utf-8")) as T;
}

export interface RecordedExchange<Req = any, Resp = any> {
  request: Req;
  response: Resp;
  status?: number;
}
