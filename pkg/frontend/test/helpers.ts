import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";

/** Raw text of a recorded API response. */
export function fixture(name: string): string {
  return readFileSync(
    fileURLToPath(new URL(`./fixtures/${name}`, import.meta.url)),
    "utf8",
  );
}

export function jsonFixture<T>(name: string): T {
  return JSON.parse(fixture(name)) as T;
}

export interface Route {
  body: string;
  status?: number;
  headers?: Record<string, string>;
}

export interface RecordedCall {
  url: string;
  init?: RequestInit;
}

/** A fetch stub that serves canned bodies keyed by "METHOD path". */
export function mockFetch(routes: Record<string, Route>) {
  const calls: RecordedCall[] = [];
  const fn = async (url: string, init?: RequestInit): Promise<Response> => {
    calls.push({ url, init });
    const key = `${init?.method ?? "GET"} ${url}`;
    const route = routes[key];
    if (!route) throw new Error(`unmatched request: ${key}`);
    return new Response(route.body, {
      status: route.status ?? 200,
      headers: route.headers ?? { "content-type": "application/json" },
    });
  };
  return { fn, calls };
}
