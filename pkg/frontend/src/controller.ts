// Glue between the service client and the state reducer. At most one
// query is in flight; stale responses carry an old sequence number and
// the reducer drops them. DOM-free, so the whole flow is testable.

import type { Service } from "./api.js";
import type { Event, ViewState } from "./types.js";
import { initialState } from "./types.js";
import { reduce } from "./state.js";

export class Controller {
  private state: ViewState = initialState();
  private seq = 0;
  readonly log: Event[] = [];

  constructor(
    private service: Service,
    private onChange: (state: ViewState) => void = () => {},
  ) {}

  current(): ViewState {
    return this.state;
  }

  dispatch(event: Event): ViewState {
    this.log.push(event);
    this.state = reduce(this.state, event);
    this.onChange(this.state);
    return this.state;
  }

  async loadGraph(): Promise<void> {
    const graph = await this.service.graph();
    this.dispatch({ type: "graph-loaded", graph });
  }

  async submitQuestion(text: string): Promise<void> {
    const question = text.trim();
    if (!question) {
      return; // blank input: submit disabled upstream, ignore here too
    }
    const seq = ++this.seq;
    this.dispatch({ type: "question-submitted", seq, question });
    try {
      const response = await this.service.query(question);
      this.dispatch({ type: "query-succeeded", seq, response });
    } catch (err) {
      this.dispatch({
        type: "query-failed",
        seq,
        error: err instanceof Error ? err.message : String(err),
      });
    }
  }

  selectNode(id: number | null): void {
    this.dispatch({ type: "node-selected", id });
  }

  restoreHistory(index: number): void {
    this.dispatch({ type: "history-restored", index });
  }

  // provenance rows for the selected node: (doc, sentence) pairs from its
  // incident edges plus the sentence text fetched from the service
  async provenance(
    nodeId: number,
  ): Promise<Array<{ doc: number; sent: number; text: string }>> {
    const seen = new Set<string>();
    const rows: Array<{ doc: number; sent: number; text: string }> = [];
    for (const edge of this.state.graph.edges) {
      if (edge.from !== nodeId && edge.to !== nodeId) continue;
      const key = `${edge.doc}:${edge.sent}`;
      if (seen.has(key)) continue;
      seen.add(key);
      rows.push({
        doc: edge.doc,
        sent: edge.sent,
        text: await this.service.sentence(edge.doc, edge.sent),
      });
    }
    rows.sort((a, b) => a.doc - b.doc || a.sent - b.sent);
    return rows;
  }
}
