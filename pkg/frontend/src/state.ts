// Pure state transitions: replaying the same event log always produces
// the same ViewState. Responses for superseded questions (stale sequence
// numbers) are discarded.

import type { Event, GraphDoc, ViewState } from "./types.js";
import { initialState } from "./types.js";

function clampHighlight(highlight: number[], graph: GraphDoc): number[] {
  const known = new Set(graph.edges.map((e) => e.id));
  return highlight.filter((id) => known.has(id)).sort((a, b) => a - b);
}

export function reduce(state: ViewState, event: Event): ViewState {
  switch (event.type) {
    case "graph-loaded": {
      return {
        ...state,
        graph: event.graph,
        highlight: clampHighlight(state.highlight, event.graph),
        selectedNode:
          state.selectedNode !== null &&
          event.graph.nodes.some((n) => n.id === state.selectedNode)
            ? state.selectedNode
            : null,
      };
    }
    case "question-submitted": {
      return {
        ...state,
        currentQuestion: event.question,
        pendingSeq: event.seq,
        error: null,
        notice: null,
      };
    }
    case "query-succeeded": {
      if (event.seq !== state.pendingSeq) {
        return state; // superseded by a newer question
      }
      const response = event.response;
      const highlight = clampHighlight(response.highlight, state.graph);
      const notice = response.unanswerable
        ? `unanswerable: ${response.message || "no analyzable clause"}`
        : response.answers.length === 0
          ? "no answers found"
          : null;
      return {
        ...state,
        pendingSeq: null,
        answers: response.answers,
        wh: response.wh,
        highlight,
        notice,
        history: [
          ...state.history,
          {
            question: response.question,
            answers: response.answers,
            highlight,
          },
        ],
      };
    }
    case "query-failed": {
      if (event.seq !== state.pendingSeq) {
        return state;
      }
      return { ...state, pendingSeq: null, error: event.error };
    }
    case "node-selected": {
      if (
        event.id !== null &&
        !state.graph.nodes.some((n) => n.id === event.id)
      ) {
        return state;
      }
      return { ...state, selectedNode: event.id };
    }
    case "history-restored": {
      const entry = state.history[event.index];
      if (!entry) {
        return state;
      }
      return {
        ...state,
        currentQuestion: entry.question,
        answers: entry.answers,
        highlight: clampHighlight(entry.highlight, state.graph),
        notice: entry.answers.length === 0 ? "no answers found" : null,
        error: null,
      };
    }
  }
}

export function replay(events: Event[], start?: ViewState): ViewState {
  let state = start ?? initialState();
  for (const event of events) {
    state = reduce(state, event);
  }
  return state;
}
