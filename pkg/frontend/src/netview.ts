import { layoutNet } from "./layout.js";
import type { ModelJson, TransitionJson } from "./types.js";

/** Raised when a model payload cannot be drawn; the app shows it as a banner. */
export class RenderError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "RenderError";
  }
}

const PLACE_RADIUS = 15;
const BOX_W = 46;
const BOX_H = 30;

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function checkShape(model: ModelJson): void {
  if (!model || !Array.isArray(model.places) || !Array.isArray(model.transitions) ||
      !Array.isArray(model.arcs) || !Array.isArray(model.xor_bindings)) {
    throw new RenderError("malformed model payload: missing places/transitions/arcs");
  }
  const known = new Set<string>([
    ...model.places,
    ...model.transitions.map((t) => t.id),
  ]);
  for (const arc of model.arcs) {
    if (!known.has(arc.source) || !known.has(arc.target)) {
      throw new RenderError(
        `malformed model payload: arc ${arc.source}->${arc.target} references an unknown node`,
      );
    }
  }
  if (!known.has(model.source) || !known.has(model.sink)) {
    throw new RenderError("malformed model payload: missing source or sink place");
  }
}

function transitionTitle(t: TransitionJson): string {
  if (t.label === null) return `silent step, ${t.freq} cases`;
  return `${t.label}: ${t.freq} cases, ${t.duration} h`;
}

/** Draw the filtered net as standalone SVG markup.
 *
 * Silent transitions are filled black; arcs leaving a choice place carry
 * `data-node`/`data-branch` attributes (the click targets) plus a tooltip
 * with the decision-rule text for that branch.
 */
export function renderNet(model: ModelJson, labelByBranchTarget?: Map<string, string>): string {
  checkShape(model);
  const laid = layoutNet(model);
  const labels = labelByBranchTarget ?? branchTargetLabels(model);
  const parts: string[] = [];

  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" class="net" viewBox="0 0 ${laid.width} ${laid.height}" width="${laid.width}" height="${laid.height}">`,
    `<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="7" markerHeight="7" orient="auto-start-reverse"><path d="M 0 0 L 10 5 L 0 10 z"/></marker></defs>`,
  );

  for (const edge of laid.edges) {
    const classes = edge.xor ? "arc xor-edge" : "arc";
    const data = edge.xor
      ? ` data-node="${escapeXml(edge.xor.node)}" data-branch="${edge.xor.branch}"`
      : "";
    const tip = edge.xor
      ? tooltipFor(edge.rule, labels.get(edge.target))
      : edge.rule ?? `${edge.freq} cases`;
    parts.push(
      `<g class="${classes}"${data}>`,
      `<title>${escapeXml(tip)}</title>`,
      `<line x1="${edge.x1}" y1="${edge.y1}" x2="${edge.x2}" y2="${edge.y2}" marker-end="url(#arrow)"/>`,
      `<text class="freq" x="${(edge.x1 + edge.x2) / 2}" y="${(edge.y1 + edge.y2) / 2 - 4}">${edge.freq}</text>`,
      `</g>`,
    );
  }

  for (const node of laid.nodes) {
    if (node.kind === "place") {
      const role =
        node.id === model.source ? " source" : node.id === model.sink ? " sink" : "";
      parts.push(
        `<g class="place${role}"><circle cx="${node.x}" cy="${node.y}" r="${PLACE_RADIUS}"/>`,
        `<text class="name" x="${node.x}" y="${node.y + PLACE_RADIUS + 12}">${escapeXml(node.id)}</text></g>`,
      );
      continue;
    }
    const classes = ["transition"];
    if (node.tau) classes.push("tau");
    if (node.dead) classes.push("dead");
    const fill = node.tau ? ' fill="black"' : "";
    parts.push(
      `<g class="${classes.join(" ")}">`,
      `<title>${escapeXml(transitionTitle({ id: node.id, label: node.label, freq: node.freq, duration: node.duration }))}</title>`,
      `<rect x="${node.x - BOX_W / 2}" y="${node.y - BOX_H / 2}" width="${BOX_W}" height="${BOX_H}"${fill}/>`,
    );
    if (!node.tau && node.label !== null) {
      parts.push(
        `<text class="name" x="${node.x}" y="${node.y + 4}">${escapeXml(node.label)} (${node.freq})</text>`,
      );
    }
    parts.push(`</g>`);
  }

  parts.push(`</svg>`);
  return parts.join("\n");
}

function tooltipFor(rule: string | null, target: string | undefined): string {
  const alternative = target ?? "this branch";
  return rule ? `${rule} → ${alternative}` : `branch → ${alternative}`;
}

/** What a branch arc leads to, for tooltips: the visible label behind each
 * bound transition (the transition's own label, or the choice alternative
 * text when the branch enters through a silent step). */
export function branchTargetLabels(model: ModelJson): Map<string, string> {
  const labels = new Map<string, string>();
  const byId = new Map(model.transitions.map((t) => [t.id, t]));
  const ruleByPoint = new Map(model.rules.map((r) => [r.point, r]));
  for (const binding of model.xor_bindings) {
    const rule = ruleByPoint.get(binding.place);
    for (const [transition, branch] of Object.entries(binding.branches)) {
      const spec = byId.get(transition);
      if (spec?.label) {
        labels.set(transition, spec.label);
      } else if (rule && branch < rule.alternatives.length) {
        labels.set(transition, rule.alternatives[branch]);
      } else {
        labels.set(transition, `branch ${branch}`);
      }
    }
  }
  return labels;
}
