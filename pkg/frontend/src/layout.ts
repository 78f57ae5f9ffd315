import type { GraphDto } from './types.js';

export interface Point {
  x: number;
  y: number;
}

export interface GraphLayout {
  positions: Map<string, Point>;
  width: number;
  height: number;
}

const COLUMN_GAP = 96;
const ROW_GAP = 64;
const MARGIN = 36;

/** Deterministic force-free layered layout.
 *
 * Vertices are assigned breadth-first layers starting from the sorted
 * list of sources (vertices without incoming non-loop edges); graphs that
 * are all cycle fall back to the alphabetically first vertex. Ties are
 * broken by vertex id everywhere, so the same graph always renders the
 * same picture.
 */
export function layoutGraph(graph: GraphDto): GraphLayout {
  const ids = graph.vertices.map((v) => v.id).sort();
  const incoming = new Map<string, number>(ids.map((id) => [id, 0]));
  const out = new Map<string, string[]>(ids.map((id) => [id, []]));
  for (const edge of [...graph.edges].sort((a, b) => (a.id < b.id ? -1 : 1))) {
    if (edge.src === edge.tgt) continue; // loops do not affect layering
    incoming.set(edge.tgt, (incoming.get(edge.tgt) ?? 0) + 1);
    out.get(edge.src)?.push(edge.tgt);
  }

  const layer = new Map<string, number>();
  const queue: string[] = ids.filter((id) => incoming.get(id) === 0);
  for (const id of queue) layer.set(id, 0);
  let cursor = 0;
  const visit = () => {
    while (cursor < queue.length) {
      const id = queue[cursor]!;
      cursor += 1;
      for (const next of [...(out.get(id) ?? [])].sort()) {
        if (!layer.has(next)) {
          layer.set(next, (layer.get(id) ?? 0) + 1);
          queue.push(next);
        }
      }
    }
  };
  visit();
  // Cyclic leftovers: seed the first unplaced vertex and flood again.
  for (const id of ids) {
    if (!layer.has(id)) {
      layer.set(id, 0);
      queue.push(id);
      visit();
    }
  }

  const byLayer = new Map<number, string[]>();
  for (const id of ids) {
    const l = layer.get(id) ?? 0;
    if (!byLayer.has(l)) byLayer.set(l, []);
    byLayer.get(l)!.push(id);
  }

  const positions = new Map<string, Point>();
  let maxRows = 1;
  for (const [l, members] of byLayer) {
    maxRows = Math.max(maxRows, members.length);
    members.sort();
    members.forEach((id, row) => {
      positions.set(id, { x: MARGIN + l * COLUMN_GAP, y: MARGIN + row * ROW_GAP });
    });
  }
  const columns = byLayer.size;
  return {
    positions,
    width: 2 * MARGIN + Math.max(0, columns - 1) * COLUMN_GAP,
    height: 2 * MARGIN + (maxRows - 1) * ROW_GAP,
  };
}
