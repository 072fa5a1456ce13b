import type { ModelJson } from "./types.js";

// Layered left-to-right placement: the source place sits in the leftmost
// column, every other node in the column after its closest predecessor, the
// sink pushed to the far right.  Columns are breadth-first distances, which
// stay finite on nets with cycles.

export interface LaidNode {
  id: string;
  kind: "place" | "transition";
  label: string | null;
  tau: boolean;
  freq: number;
  duration: number;
  dead: boolean;
  x: number;
  y: number;
}

export interface LaidEdge {
  source: string;
  target: string;
  freq: number;
  rule: string | null;
  /** set when this edge is a clickable branch of a choice node */
  xor: { node: string; branch: number } | null;
  x1: number;
  y1: number;
  x2: number;
  y2: number;
}

export interface NetLayout {
  nodes: LaidNode[];
  edges: LaidEdge[];
  width: number;
  height: number;
}

const COLUMN = 130;
const ROW = 74;
const MARGIN = 60;

export function layoutNet(model: ModelJson): NetLayout {
  const ids = new Set<string>([
    ...model.places,
    ...model.transitions.map((t) => t.id),
  ]);
  const successors = new Map<string, string[]>();
  for (const arc of model.arcs) {
    const out = successors.get(arc.source) ?? [];
    out.push(arc.target);
    successors.set(arc.source, out);
  }

  // breadth-first columns from the source place
  const column = new Map<string, number>([[model.source, 0]]);
  const queue = [model.source];
  while (queue.length) {
    const node = queue.shift()!;
    for (const next of successors.get(node) ?? []) {
      if (!column.has(next)) {
        column.set(next, column.get(node)! + 1);
        queue.push(next);
      }
    }
  }
  let deepest = Math.max(0, ...column.values());
  for (const id of ids) {
    if (!column.has(id)) column.set(id, deepest + 1); // disconnected leftovers
  }
  deepest = Math.max(...column.values());
  if (ids.size > 1) column.set(model.sink, Math.max(column.get(model.sink)!, deepest));

  const perColumn = new Map<number, string[]>();
  for (const id of [...ids].sort()) {
    const col = column.get(id)!;
    const members = perColumn.get(col) ?? [];
    members.push(id);
    perColumn.set(col, members);
  }

  const dead = new Set(model.dead_transitions);
  const byId = new Map(model.transitions.map((t) => [t.id, t]));
  const position = new Map<string, { x: number; y: number }>();
  let tallest = 0;
  for (const [col, members] of perColumn) {
    members.forEach((id, row) => {
      position.set(id, { x: MARGIN + col * COLUMN, y: MARGIN + row * ROW });
    });
    tallest = Math.max(tallest, members.length);
  }

  const nodes: LaidNode[] = [...ids].sort().map((id) => {
    const spot = position.get(id)!;
    const transition = byId.get(id);
    return {
      id,
      kind: transition ? "transition" : "place",
      label: transition ? transition.label : id,
      tau: transition ? transition.label === null : false,
      freq: transition?.freq ?? 0,
      duration: transition?.duration ?? 0,
      dead: dead.has(id),
      x: spot.x,
      y: spot.y,
    };
  });

  const branchOf = new Map<string, { node: string; branch: number }>();
  for (const binding of model.xor_bindings) {
    for (const [transition, branch] of Object.entries(binding.branches)) {
      branchOf.set(`${binding.place}->${transition}`, {
        node: binding.node,
        branch,
      });
    }
  }

  const edges: LaidEdge[] = model.arcs.map((arc) => {
    const from = position.get(arc.source)!;
    const to = position.get(arc.target)!;
    return {
      source: arc.source,
      target: arc.target,
      freq: arc.freq,
      rule: arc.rule,
      xor: branchOf.get(`${arc.source}->${arc.target}`) ?? null,
      x1: from.x,
      y1: from.y,
      x2: to.x,
      y2: to.y,
    };
  });

  return {
    nodes,
    edges,
    width: MARGIN * 2 + (deepest + 1) * COLUMN,
    height: MARGIN * 2 + Math.max(1, tallest) * ROW,
  };
}
