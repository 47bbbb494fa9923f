// Wire formats of the graphqa HTTP API (GET /graph, POST /query,
// GET /sentence) and the console's view state.

export interface GraphNode {
  id: number;
  label: string;
  ne_type: string;
  highlight: boolean;
}

export interface GraphEdge {
  id: number;
  from: number;
  to: number;
  relation: string;
  relation_class: string;
  doc: number;
  sent: number;
  highlight: boolean;
}

export interface GraphDoc {
  nodes: GraphNode[];
  edges: GraphEdge[];
}

export interface AnswerRow {
  label: string;
  ne_type: string;
  doc: number;
  sent: number;
  sentence: string;
}

export interface QueryResponse {
  question: string;
  wh: string;
  unanswerable: boolean;
  message: string;
  answers: AnswerRow[];
  highlight: number[];
}

export interface HistoryEntry {
  question: string;
  answers: AnswerRow[];
  highlight: number[];
}

// The whole UI state; a pure function of the event log.
export interface ViewState {
  currentQuestion: string;
  graph: GraphDoc;
  highlight: number[];          // edge ids, always a subset of graph edges
  answers: AnswerRow[];
  wh: string;
  selectedNode: number | null;
  history: HistoryEntry[];
  pendingSeq: number | null;    // in-flight query sequence number
  error: string | null;
  notice: string | null;        // e.g. "no answers" or unanswerable message
}

export type Event =
  | { type: "graph-loaded"; graph: GraphDoc }
  | { type: "question-submitted"; seq: number; question: string }
  | { type: "query-succeeded"; seq: number; response: QueryResponse }
  | { type: "query-failed"; seq: number; error: string }
  | { type: "node-selected"; id: number | null }
  | { type: "history-restored"; index: number };

export function initialState(): ViewState {
  return {
    currentQuestion: "",
    graph: { nodes: [], edges: [] },
    highlight: [],
    answers: [],
    wh: "None",
    selectedNode: null,
    history: [],
    pendingSeq: null,
    error: null,
    notice: null,
  };
}
