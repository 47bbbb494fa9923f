import { describe, expect, it } from "vitest";

import { layout } from "../src/layout.js";
import type { GraphDoc } from "../src/types.js";

function bigGraph(n: number): GraphDoc {
  const nodes = Array.from({ length: n }, (_, i) => ({
    id: i,
    label: `node ${i}`,
    ne_type: "PERSON",
    highlight: false,
  }));
  const edges = Array.from({ length: n * 2 }, (_, i) => ({
    id: i,
    from: i % n,
    to: (i * 7 + 3) % n,
    relation: "met",
    relation_class: "AVerb",
    doc: 0,
    sent: 0,
    highlight: false,
  }));
  return { nodes, edges };
}

describe("layout", () => {
  it("is stable: the same document lays out identically on re-render", () => {
    const graph = bigGraph(40);
    const a = layout(graph, 800, 600);
    const b = layout(graph, 800, 600);
    expect([...a.entries()]).toEqual([...b.entries()]);
  });

  it("keeps every node inside the viewport", () => {
    const graph = bigGraph(60);
    const positions = layout(graph, 800, 600);
    for (const p of positions.values()) {
      expect(p.x).toBeGreaterThanOrEqual(0);
      expect(p.x).toBeLessThanOrEqual(800);
      expect(p.y).toBeGreaterThanOrEqual(0);
      expect(p.y).toBeLessThanOrEqual(600);
    }
  });

  it("lays out a 100-node export well under the 2s budget", () => {
    const graph = bigGraph(100);
    const started = performance.now();
    const positions = layout(graph, 1200, 800);
    const elapsed = performance.now() - started;
    expect(positions.size).toBe(100);
    expect(elapsed).toBeLessThan(2000);
  });

  it("spreads nodes apart rather than stacking them", () => {
    const graph = bigGraph(12);
    const positions = [...layout(graph, 800, 600).values()];
    let tooClose = 0;
    for (let i = 0; i < positions.length; i++) {
      for (let j = i + 1; j < positions.length; j++) {
        const dx = positions[i].x - positions[j].x;
        const dy = positions[i].y - positions[j].y;
        if (Math.sqrt(dx * dx + dy * dy) < 10) tooClose++;
      }
    }
    expect(tooClose).toBe(0);
  });
});
