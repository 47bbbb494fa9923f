// Rendering split in two: buildRenderModel is pure (testable anywhere),
// the draw* functions below it touch the DOM.

import type { Point } from "./layout.js";
import type { AnswerRow, ViewState } from "./types.js";

export interface EdgeView {
  id: number;
  x1: number;
  y1: number;
  x2: number;
  y2: number;
  relation: string;
  highlighted: boolean;
}

export interface NodeView {
  id: number;
  x: number;
  y: number;
  label: string;
  neType: string;
  radius: number;
  highlighted: boolean;   // incident to a matched edge
  isAnswer: boolean;      // enlarged in the view
  selected: boolean;
}

export interface RenderModel {
  edges: EdgeView[];
  nodes: NodeView[];
  empty: boolean;
}

const NE_COLORS: Record<string, string> = {
  PERSON: "#4f83cc",
  LOCATION: "#4caf7d",
  ORGANIZATION: "#b07cc6",
  DATE: "#c9a227",
  TIME: "#c9a227",
  NUMEX: "#d07550",
  NONE: "#8a8f98",
};

export function nodeColor(neType: string): string {
  return NE_COLORS[neType] ?? NE_COLORS.NONE;
}

export function buildRenderModel(
  state: ViewState,
  positions: Map<number, Point>,
): RenderModel {
  const highlight = new Set(state.highlight);
  const litNodes = new Set<number>();
  for (const edge of state.graph.edges) {
    if (highlight.has(edge.id)) {
      litNodes.add(edge.from);
      litNodes.add(edge.to);
    }
  }
  const answerLabels = new Set(
    state.answers.map((a) => a.label.toLowerCase()),
  );
  const edges: EdgeView[] = [];
  for (const edge of state.graph.edges) {
    const a = positions.get(edge.from);
    const b = positions.get(edge.to);
    if (!a || !b) continue;
    edges.push({
      id: edge.id,
      x1: a.x,
      y1: a.y,
      x2: b.x,
      y2: b.y,
      relation: edge.relation,
      highlighted: highlight.has(edge.id),
    });
  }
  const nodes: NodeView[] = [];
  for (const node of state.graph.nodes) {
    const p = positions.get(node.id);
    if (!p) continue;
    const isAnswer = answerLabels.has(node.label.toLowerCase());
    nodes.push({
      id: node.id,
      x: p.x,
      y: p.y,
      label: node.label,
      neType: node.ne_type,
      radius: isAnswer ? 16 : 9,
      highlighted: litNodes.has(node.id),
      isAnswer,
      selected: node.id === state.selectedNode,
    });
  }
  return { edges, nodes, empty: state.graph.nodes.length === 0 };
}

// ------------------------------------------------------------- DOM ----

const SVG_NS = "http://www.w3.org/2000/svg";

export function drawGraph(
  svg: SVGSVGElement,
  model: RenderModel,
  onNodeClick: (id: number) => void,
): void {
  svg.innerHTML = "";
  if (model.empty) {
    const text = document.createElementNS(SVG_NS, "text");
    text.setAttribute("x", "50%");
    text.setAttribute("y", "50%");
    text.setAttribute("text-anchor", "middle");
    text.setAttribute("fill", "#777");
    text.textContent = "graph is empty: ingest documents, then ask a question";
    svg.appendChild(text);
    return;
  }
  for (const edge of model.edges) {
    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", String(edge.x1));
    line.setAttribute("y1", String(edge.y1));
    line.setAttribute("x2", String(edge.x2));
    line.setAttribute("y2", String(edge.y2));
    line.setAttribute("stroke", edge.highlighted ? "#e05909" : "#c4c9cf");
    line.setAttribute("stroke-width", edge.highlighted ? "3.5" : "1.2");
    svg.appendChild(line);
    const label = document.createElementNS(SVG_NS, "text");
    label.setAttribute("x", String((edge.x1 + edge.x2) / 2));
    label.setAttribute("y", String((edge.y1 + edge.y2) / 2 - 3));
    label.setAttribute("font-size", "8");
    label.setAttribute("text-anchor", "middle");
    label.setAttribute("fill", edge.highlighted ? "#b34607" : "#9aa0a6");
    label.textContent = edge.relation;
    svg.appendChild(label);
  }
  for (const node of model.nodes) {
    const group = document.createElementNS(SVG_NS, "g");
    group.setAttribute("transform", `translate(${node.x},${node.y})`);
    group.style.cursor = "pointer";
    group.addEventListener("click", () => onNodeClick(node.id));
    const circle = document.createElementNS(SVG_NS, "circle");
    circle.setAttribute("r", String(node.radius));
    circle.setAttribute("fill", nodeColor(node.neType));
    circle.setAttribute(
      "stroke",
      node.selected ? "#111" : node.highlighted ? "#e05909" : "#fff",
    );
    circle.setAttribute("stroke-width", node.selected ? "3" : "2");
    group.appendChild(circle);
    const text = document.createElementNS(SVG_NS, "text");
    text.setAttribute("y", String(-node.radius - 3));
    text.setAttribute("text-anchor", "middle");
    text.setAttribute("font-size", node.isAnswer ? "12" : "9");
    text.setAttribute("font-weight", node.isAnswer ? "bold" : "normal");
    text.textContent = node.label;
    group.appendChild(text);
    svg.appendChild(group);
  }
}

export function drawAnswers(
  container: HTMLElement,
  state: ViewState,
): void {
  container.innerHTML = "";
  if (state.error) {
    const div = document.createElement("div");
    div.className = "error";
    div.textContent = `error: ${state.error} (state preserved, retry below)`;
    container.appendChild(div);
    return;
  }
  if (state.notice) {
    const div = document.createElement("div");
    div.className = "notice";
    div.textContent = state.notice;
    container.appendChild(div);
    return;
  }
  if (state.answers.length === 0) {
    return;
  }
  const heading = document.createElement("div");
  heading.className = "wh";
  heading.textContent = `${state.wh} answers`;
  container.appendChild(heading);
  state.answers.forEach((answer: AnswerRow, i: number) => {
    const row = document.createElement("div");
    row.className = "answer";
    row.textContent =
      `${i + 1}. ${answer.label} (${answer.ne_type}) ` +
      `[doc ${answer.doc}, sentence ${answer.sent}]` +
      (answer.sentence ? ` — ${answer.sentence}` : "");
    container.appendChild(row);
  });
}

export function drawProvenance(
  container: HTMLElement,
  label: string,
  rows: Array<{ doc: number; sent: number; text: string }>,
): void {
  container.innerHTML = "";
  const heading = document.createElement("div");
  heading.className = "wh";
  heading.textContent = label;
  container.appendChild(heading);
  if (rows.length === 0) {
    const div = document.createElement("div");
    div.className = "notice";
    div.textContent = "no incident edges: this node has no source sentences";
    container.appendChild(div);
    return;
  }
  for (const row of rows) {
    const div = document.createElement("div");
    div.className = "prov";
    div.textContent = `doc ${row.doc}, sentence ${row.sent}: ${row.text}`;
    container.appendChild(div);
  }
}

export function drawHistory(
  container: HTMLElement,
  state: ViewState,
  onRestore: (index: number) => void,
): void {
  container.innerHTML = "";
  state.history.forEach((entry, i) => {
    const item = document.createElement("button");
    item.className = "history-item";
    item.textContent = entry.question;
    item.addEventListener("click", () => onRestore(i));
    container.appendChild(item);
  });
}
