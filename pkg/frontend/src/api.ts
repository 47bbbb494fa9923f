// Thin client for the graphqa HTTP API. The fetch function is injected
// so tests can run against a stub service.

import type { GraphDoc, QueryResponse } from "./types.js";

export type FetchLike = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<{ status: number; json(): Promise<unknown> }>;

export interface Service {
  query(question: string): Promise<QueryResponse>;
  graph(limit?: number): Promise<GraphDoc>;
  sentence(doc: number, index: number): Promise<string>;
  health(): Promise<{ nodes: number; edges: number }>;
}

export function makeService(baseUrl: string, fetchFn?: FetchLike): Service {
  const doFetch: FetchLike =
    fetchFn ?? ((url, init) => fetch(url, init) as never);

  return {
    async query(question: string): Promise<QueryResponse> {
      const resp = await doFetch(`${baseUrl}/query`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ question }),
      });
      // 422 carries a well-formed unanswerable body
      if (resp.status !== 200 && resp.status !== 422) {
        throw new Error(`query failed with status ${resp.status}`);
      }
      return (await resp.json()) as QueryResponse;
    },

    async graph(limit?: number): Promise<GraphDoc> {
      const suffix = limit === undefined ? "" : `?limit=${limit}`;
      const resp = await doFetch(`${baseUrl}/graph${suffix}`);
      if (resp.status !== 200) {
        throw new Error(`graph failed with status ${resp.status}`);
      }
      return (await resp.json()) as GraphDoc;
    },

    async sentence(doc: number, index: number): Promise<string> {
      const resp = await doFetch(
        `${baseUrl}/sentence?doc=${doc}&index=${index}`,
      );
      if (resp.status !== 200) {
        return "";
      }
      const body = (await resp.json()) as { text?: string };
      return body.text ?? "";
    },

    async health(): Promise<{ nodes: number; edges: number }> {
      const resp = await doFetch(`${baseUrl}/health`);
      if (resp.status !== 200) {
        throw new Error(`health failed with status ${resp.status}`);
      }
      return (await resp.json()) as { nodes: number; edges: number };
    },
  };
}
