import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { Envelope, FetchLike } from "../src/api.js";

const FIXTURE_DIR = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

export interface Fixture<T = unknown> {
  method: string;
  path: string;
  request: unknown;
  status: number;
  response: Envelope<T>;
}

export function loadFixture<T>(name: string): Fixture<T> {
  const raw = readFileSync(join(FIXTURE_DIR, `${name}.json`), "utf-8");
  return JSON.parse(raw) as Fixture<T>;
}

/** A fetch mock that replays recorded fixtures by (method, path, body). */
export function replayFetch(fixtures: Fixture[]): FetchLike {
  return async (url, init) => {
    const method = init?.method ?? "GET";
    const body = init?.body;
    const match = fixtures.find(
      (f) =>
        f.method === method &&
        url.endsWith(f.path) &&
        (f.method === "GET" || JSON.stringify(f.request) === body),
    );
    if (!match) {
      throw new Error(`no fixture for ${method} ${url} body=${body ?? "<none>"}`);
    }
    return new Response(JSON.stringify(match.response), {
      status: match.status,
      headers: { "content-type": "application/json" },
    });
  };
}
