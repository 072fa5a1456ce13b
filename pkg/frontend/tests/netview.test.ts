import { describe, expect, it } from "vitest";

import { RenderError, branchTargetLabels, renderNet } from "../src/netview.js";
import { chainModel, filteredModel, goldenModel } from "./fixtures.js";

describe("net rendering", () => {
  it("draws silent transitions as filled black boxes without labels", () => {
    const svg = renderNet(goldenModel());
    const tauBoxes = svg.match(/class="transition tau"/g) ?? [];
    expect(tauBoxes).toHaveLength(2);
    expect(svg).toContain('fill="black"');
    // visible transitions keep their label and case count
    expect(svg).toContain("a (4)");
    expect(svg).toContain("d (2)");
  });

  it("makes exactly the choice-place arcs clickable", () => {
    const svg = renderNet(goldenModel());
    const clickable = svg.match(/class="arc xor-edge"/g) ?? [];
    expect(clickable).toHaveLength(2);
    expect(svg).toContain('data-node="xor1" data-branch="0"');
    expect(svg).toContain('data-node="xor1" data-branch="1"');
  });

  it("puts the decision rule in the branch tooltip", () => {
    const svg = renderNet(goldenModel());
    expect(svg).toContain("<title>client = IZ → d</title>");
    expect(svg).toContain("<title>client != IZ → {b,c}</title>");
  });

  it("renders a model without choices with no clickable edges", () => {
    const svg = renderNet(chainModel());
    expect(svg).not.toContain("xor-edge");
    expect(svg).not.toContain("data-node");
  });

  it("re-renders without the branch a raised gamma removed", () => {
    const svg = renderNet(filteredModel());
    expect(svg).not.toContain("d (2)");
    expect(svg).toContain("a (4)");
    const clickable = svg.match(/class="arc xor-edge"/g) ?? [];
    expect(clickable).toHaveLength(1);
  });

  it("refuses malformed payloads with a render error", () => {
    const broken = goldenModel();
    broken.arcs.push({ source: "start", target: "nowhere", freq: 1, rule: null });
    expect(() => renderNet(broken)).toThrow(RenderError);
    expect(() => renderNet(broken)).toThrow(/unknown node/);
    expect(() => renderNet({} as never)).toThrow(RenderError);
  });

  it("names branch targets after labels or rule alternatives", () => {
    const labels = branchTargetLabels(goldenModel());
    expect(labels.get("t6")).toBe("d"); // a visible transition keeps its label
    expect(labels.get("t2")).toBe("{b,c}"); // a silent branch borrows the alternative
  });
});
