import { describe, expect, it } from "vitest";

import { layoutNet } from "../src/layout.js";
import { chainModel, goldenModel } from "./fixtures.js";

describe("layered layout", () => {
  it("places every node exactly once inside the canvas", () => {
    const laid = layoutNet(goldenModel());
    expect(laid.nodes).toHaveLength(8 + 7);
    const ids = laid.nodes.map((n) => n.id);
    expect(new Set(ids).size).toBe(ids.length);
    for (const node of laid.nodes) {
      expect(node.x).toBeGreaterThan(0);
      expect(node.x).toBeLessThan(laid.width);
      expect(node.y).toBeGreaterThan(0);
      expect(node.y).toBeLessThan(laid.height);
    }
  });

  it("runs left to right from source to sink", () => {
    const laid = layoutNet(goldenModel());
    const at = new Map(laid.nodes.map((n) => [n.id, n]));
    const source = at.get("start")!;
    const sink = at.get("end")!;
    expect(source.x).toBe(Math.min(...laid.nodes.map((n) => n.x)));
    expect(sink.x).toBe(Math.max(...laid.nodes.map((n) => n.x)));
    // the first activity sits strictly between them
    expect(at.get("t1")!.x).toBeGreaterThan(source.x);
    expect(at.get("t1")!.x).toBeLessThan(sink.x);
    // parallel branch bodies share a column
    expect(at.get("t4")!.x).toBe(at.get("t5")!.x);
  });

  it("keeps edge endpoints attached to their node centres", () => {
    const laid = layoutNet(goldenModel());
    const at = new Map(laid.nodes.map((n) => [n.id, n]));
    for (const edge of laid.edges) {
      expect(edge.x1).toBe(at.get(edge.source)!.x);
      expect(edge.y1).toBe(at.get(edge.source)!.y);
      expect(edge.x2).toBe(at.get(edge.target)!.x);
      expect(edge.y2).toBe(at.get(edge.target)!.y);
    }
  });

  it("tags choice-place arcs with their node and branch", () => {
    const laid = layoutNet(goldenModel());
    const tagged = laid.edges.filter((e) => e.xor !== null);
    expect(tagged).toHaveLength(2);
    expect(tagged.map((e) => [e.target, e.xor!.node, e.xor!.branch]).sort()).toEqual([
      ["t2", "xor1", 0],
      ["t6", "xor1", 1],
    ]);
  });

  it("marks silent transitions and carries rule texts through", () => {
    const laid = layoutNet(goldenModel());
    const taus = laid.nodes.filter((n) => n.tau).map((n) => n.id);
    expect(taus.sort()).toEqual(["t2", "t3"]);
    const ruled = laid.edges.filter((e) => e.rule !== null);
    expect(ruled.map((e) => e.rule).sort()).toEqual(["client != IZ", "client = IZ"]);
  });

  it("lays out a plain chain without choices", () => {
    const laid = layoutNet(chainModel());
    expect(laid.edges.every((e) => e.xor === null)).toBe(true);
    const xs = new Map(laid.nodes.map((n) => [n.id, n.x]));
    expect(xs.get("start")!).toBeLessThan(xs.get("t1")!);
    expect(xs.get("t1")!).toBeLessThan(xs.get("p1")!);
    expect(xs.get("p1")!).toBeLessThan(xs.get("t2")!);
    expect(xs.get("t2")!).toBeLessThan(xs.get("end")!);
  });
});
