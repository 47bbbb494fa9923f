// Deterministic force-directed layout: seeded initial positions plus a
// fixed number of repulsion/spring/centering iterations. Same graph and
// viewport in, same coordinates out, so re-rendering never jiggles.

import type { GraphDoc } from "./types.js";

export interface Point {
  x: number;
  y: number;
}

function hash(text: string): number {
  let h = 2166136261;
  for (let i = 0; i < text.length; i++) {
    h ^= text.charCodeAt(i);
    h = Math.imul(h, 16777619);
  }
  return h >>> 0;
}

// mulberry32: tiny deterministic PRNG
function rng(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a |= 0;
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function layout(
  graph: GraphDoc,
  width: number,
  height: number,
  iterations = 120,
): Map<number, Point> {
  const positions = new Map<number, Point>();
  const velocity = new Map<number, Point>();
  for (const node of graph.nodes) {
    const random = rng(hash(`${node.id}:${node.label}`));
    positions.set(node.id, {
      x: width / 2 + (random() - 0.5) * width * 0.8,
      y: height / 2 + (random() - 0.5) * height * 0.8,
    });
    velocity.set(node.id, { x: 0, y: 0 });
  }
  const ids = graph.nodes.map((n) => n.id);
  const springLength = Math.min(width, height) / 6 + 40;
  for (let step = 0; step < iterations; step++) {
    const cooling = 1 - step / iterations;
    // pairwise repulsion
    for (let i = 0; i < ids.length; i++) {
      for (let j = i + 1; j < ids.length; j++) {
        const a = positions.get(ids[i])!;
        const b = positions.get(ids[j])!;
        let dx = a.x - b.x;
        let dy = a.y - b.y;
        const dist2 = Math.max(dx * dx + dy * dy, 1);
        const force = (2200 * cooling) / dist2;
        const dist = Math.sqrt(dist2);
        dx /= dist;
        dy /= dist;
        const va = velocity.get(ids[i])!;
        const vb = velocity.get(ids[j])!;
        va.x += dx * force;
        va.y += dy * force;
        vb.x -= dx * force;
        vb.y -= dy * force;
      }
    }
    // springs along edges
    for (const edge of graph.edges) {
      const a = positions.get(edge.from);
      const b = positions.get(edge.to);
      if (!a || !b) continue;
      const dx = b.x - a.x;
      const dy = b.y - a.y;
      const dist = Math.max(Math.sqrt(dx * dx + dy * dy), 1);
      const force = ((dist - springLength) / dist) * 0.02 * cooling;
      const va = velocity.get(edge.from)!;
      const vb = velocity.get(edge.to)!;
      va.x += dx * force;
      va.y += dy * force;
      vb.x -= dx * force;
      vb.y -= dy * force;
    }
    // centering pull + integrate
    for (const id of ids) {
      const p = positions.get(id)!;
      const v = velocity.get(id)!;
      v.x += (width / 2 - p.x) * 0.005 * cooling;
      v.y += (height / 2 - p.y) * 0.005 * cooling;
      p.x += Math.max(-18, Math.min(18, v.x));
      p.y += Math.max(-18, Math.min(18, v.y));
      v.x *= 0.55;
      v.y *= 0.55;
      p.x = Math.max(20, Math.min(width - 20, p.x));
      p.y = Math.max(20, Math.min(height - 20, p.y));
    }
  }
  return positions;
}
