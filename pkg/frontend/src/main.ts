import { makeService } from "./api.js";
import { Controller } from "./controller.js";
import { layout } from "./layout.js";
import {
  buildRenderModel,
  drawAnswers,
  drawGraph,
  drawHistory,
  drawProvenance,
} from "./render.js";
import type { ViewState } from "./types.js";

const API_BASE =
  new URLSearchParams(location.search).get("api") ?? "http://127.0.0.1:8765";

const svg = document.getElementById("graph") as unknown as SVGSVGElement;
const answersEl = document.getElementById("answers") as HTMLElement;
const provenanceEl = document.getElementById("provenance") as HTMLElement;
const historyEl = document.getElementById("history") as HTMLElement;
const input = document.getElementById("question") as HTMLInputElement;
const submit = document.getElementById("submit") as HTMLButtonElement;
const status = document.getElementById("status") as HTMLElement;

const service = makeService(API_BASE);

function onState(state: ViewState): void {
  const box = svg.getBoundingClientRect();
  const positions = layout(
    state.graph,
    Math.max(box.width, 400),
    Math.max(box.height, 300),
  );
  drawGraph(svg, buildRenderModel(state, positions), (id) => {
    controller.selectNode(id);
    void showProvenance(id);
  });
  drawAnswers(answersEl, state);
  drawHistory(historyEl, state, (i) => controller.restoreHistory(i));
  submit.disabled = input.value.trim() === "" || state.pendingSeq !== null;
}

const controller = new Controller(service, onState);

async function showProvenance(nodeId: number): Promise<void> {
  const node = controller
    .current()
    .graph.nodes.find((n) => n.id === nodeId);
  if (!node) return;
  const rows = await controller.provenance(nodeId);
  drawProvenance(provenanceEl, node.label, rows);
}

submit.addEventListener("click", () => {
  void controller.submitQuestion(input.value);
});
input.addEventListener("keydown", (e) => {
  if (e.key === "Enter" && input.value.trim() !== "") {
    void controller.submitQuestion(input.value);
  }
});
input.addEventListener("input", () => {
  submit.disabled = input.value.trim() === "";
});

async function start(): Promise<void> {
  try {
    const health = await service.health();
    status.textContent = `connected: ${health.nodes} nodes, ${health.edges} edges`;
  } catch {
    status.textContent = `cannot reach ${API_BASE} — start it with: graphqa serve`;
  }
  await controller.loadGraph().catch(() => {});
}

void start();
