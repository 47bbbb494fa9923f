import { describe, expect, it } from "vitest";

import { reduce, replay } from "../src/state.js";
import { initialState } from "../src/types.js";
import type { Event, GraphDoc, QueryResponse } from "../src/types.js";

const graph: GraphDoc = {
  nodes: [
    { id: 0, label: "Lalu Yadav", ne_type: "PERSON", highlight: false },
    { id: 1, label: "Nitish Kumar", ne_type: "PERSON", highlight: false },
    { id: 2, label: "Patna", ne_type: "LOCATION", highlight: false },
  ],
  edges: [
    { id: 0, from: 0, to: 1, relation: "criticized", relation_class: "AVerb",
      doc: 0, sent: 1, highlight: false },
    { id: 1, from: 1, to: 2, relation: "in", relation_class: "SubAction",
      doc: 0, sent: 1, highlight: false },
  ],
};

function response(question: string, highlight: number[]): QueryResponse {
  return {
    question,
    wh: "Who",
    unanswerable: false,
    message: "",
    answers: [
      { label: "Nitish Kumar", ne_type: "PERSON", doc: 0, sent: 1,
        sentence: "Lalu Yadav criticized Nitish Kumar in Patna." },
    ],
    highlight,
  };
}

describe("state reducer", () => {
  it("replaying the same event log reproduces the identical state", () => {
    const events: Event[] = [
      { type: "graph-loaded", graph },
      { type: "question-submitted", seq: 1, question: "Who was criticized by Lalu Yadav?" },
      { type: "query-succeeded", seq: 1, response: response("Who was criticized by Lalu Yadav?", [0]) },
      { type: "node-selected", id: 1 },
      { type: "question-submitted", seq: 2, question: "Where is Patna?" },
      { type: "query-failed", seq: 2, error: "boom" },
      { type: "history-restored", index: 0 },
    ];
    const a = replay(events);
    const b = replay(events);
    expect(JSON.stringify(a)).toBe(JSON.stringify(b));
    expect(a.history.length).toBe(1);
    expect(a.highlight).toEqual([0]);
  });

  it("discards responses for superseded questions", () => {
    let state = replay([
      { type: "graph-loaded", graph },
      { type: "question-submitted", seq: 1, question: "first" },
      { type: "question-submitted", seq: 2, question: "second" },
    ]);
    const stale = reduce(state, {
      type: "query-succeeded", seq: 1, response: response("first", [0]),
    });
    expect(stale.answers).toEqual([]);
    expect(stale.pendingSeq).toBe(2);
    const fresh = reduce(stale, {
      type: "query-succeeded", seq: 2, response: response("second", [1]),
    });
    expect(fresh.answers.length).toBe(1);
    expect(fresh.highlight).toEqual([1]);
    expect(fresh.pendingSeq).toBeNull();
  });

  it("keeps highlight a subset of graph edge ids", () => {
    const state = replay([
      { type: "graph-loaded", graph },
      { type: "question-submitted", seq: 1, question: "q" },
      { type: "query-succeeded", seq: 1, response: response("q", [0, 99, 7]) },
    ]);
    expect(state.highlight).toEqual([0]);
    const ids = new Set(state.graph.edges.map((e) => e.id));
    for (const h of state.highlight) {
      expect(ids.has(h)).toBe(true);
    }
  });

  it("history restores a prior question and highlight", () => {
    const events: Event[] = [
      { type: "graph-loaded", graph },
      { type: "question-submitted", seq: 1, question: "q1" },
      { type: "query-succeeded", seq: 1, response: response("q1", [0]) },
      { type: "question-submitted", seq: 2, question: "q2" },
      { type: "query-succeeded", seq: 2, response: { ...response("q2", [1]), answers: [] } },
    ];
    let state = replay(events);
    expect(state.history.length).toBe(2);
    expect(state.highlight).toEqual([1]);
    state = reduce(state, { type: "history-restored", index: 0 });
    expect(state.currentQuestion).toBe("q1");
    expect(state.highlight).toEqual([0]);
  });

  it("query failure preserves prior answers and reports the error", () => {
    let state = replay([
      { type: "graph-loaded", graph },
      { type: "question-submitted", seq: 1, question: "q1" },
      { type: "query-succeeded", seq: 1, response: response("q1", [0]) },
      { type: "question-submitted", seq: 2, question: "q2" },
    ]);
    state = reduce(state, { type: "query-failed", seq: 2, error: "network down" });
    expect(state.error).toBe("network down");
    expect(state.answers.length).toBe(1); // prior state preserved
  });

  it("selecting an unknown node is a no-op", () => {
    const state = replay([{ type: "graph-loaded", graph }]);
    const after = reduce(state, { type: "node-selected", id: 42 });
    expect(after.selectedNode).toBeNull();
    const ok = reduce(state, { type: "node-selected", id: 2 });
    expect(ok.selectedNode).toBe(2);
  });

  it("initial state is empty and typed", () => {
    const state = initialState();
    expect(state.graph.nodes).toEqual([]);
    expect(state.highlight).toEqual([]);
    expect(state.history).toEqual([]);
  });
});
