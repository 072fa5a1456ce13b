import { describe, expect, it } from "vitest";

import { canCommit, initialState, liveBranches, reduce } from "../src/state.js";
import { filteredModel, goldenChoice, goldenModel } from "./fixtures.js";

function sessionState() {
  let state = initialState();
  state = reduce(state, {
    kind: "session-created",
    sessionId: "sess-1",
    estimator: "mean",
    stats: { cases: 4, variants: [] },
  });
  return reduce(state, { kind: "model-loaded", gamma: 0, model: goldenModel() });
}

describe("reducer", () => {
  it("tracks the happy path from upload to committed schedule", () => {
    let state = sessionState();
    expect(state.sessionId).toBe("sess-1");
    expect(state.model?.workflow_net).toBe(true);
    expect(canCommit(state)).toBe(false); // nothing picked yet

    state = reduce(state, { kind: "branch-picked", node: "xor1", branch: 0 });
    expect(canCommit(state)).toBe(true);

    state = reduce(state, { kind: "choice-committed", result: goldenChoice() });
    expect(state.committed?.schedule.makespan).toBe(11.0);
    expect(state.pending).toEqual({ xor1: 0 });
    expect(state.prompt).toBeNull();
  });

  it("marks requests busy and clears busy on completion", () => {
    let state = sessionState();
    state = reduce(state, { kind: "request-started" });
    expect(state.busy).toBe(true);
    expect(canCommit(state)).toBe(false);
    state = reduce(state, { kind: "model-loaded", gamma: 0, model: goldenModel() });
    expect(state.busy).toBe(false);
  });

  it("clears a stale selection on 409 and prompts to re-choose", () => {
    let state = sessionState();
    state = reduce(state, { kind: "branch-picked", node: "xor1", branch: 1 });
    state = reduce(state, { kind: "choice-committed", result: goldenChoice() });
    state = reduce(state, {
      kind: "choice-rejected",
      status: 409,
      message: "choice uses activities filtered out at gamma=3/5: d",
    });
    expect(state.pending).toEqual({});
    expect(state.committed).toBeNull();
    expect(state.prompt).toMatch(/filtered out/);
    expect(state.prompt).toMatch(/commit again/);
    expect(state.error).toBeNull();
  });

  it("treats non-409 rejections as plain errors without touching picks", () => {
    let state = sessionState();
    state = reduce(state, { kind: "branch-picked", node: "xor1", branch: 0 });
    state = reduce(state, {
      kind: "choice-rejected",
      status: 400,
      message: "incomplete choice",
    });
    expect(state.pending).toEqual({ xor1: 0 });
    expect(state.error).toBe("incomplete choice");
    expect(state.prompt).toBeNull();
  });

  it("drops picks whose branch vanished from a freshly loaded model", () => {
    let state = sessionState();
    state = reduce(state, { kind: "branch-picked", node: "xor1", branch: 1 });
    state = reduce(state, {
      kind: "model-loaded",
      gamma: 0.6,
      model: filteredModel(),
    });
    expect(state.pending).toEqual({});
    expect(state.prompt).toMatch(/gamma=0.6/);
    expect(state.prompt).toMatch(/xor1/);
  });

  it("keeps picks that are still live after a model reload", () => {
    let state = sessionState();
    state = reduce(state, { kind: "branch-picked", node: "xor1", branch: 0 });
    state = reduce(state, {
      kind: "model-loaded",
      gamma: 0.6,
      model: filteredModel(),
    });
    expect(state.pending).toEqual({ xor1: 0 });
    expect(state.prompt).toBeNull();
  });

  it("invalidates a committed schedule whose branch disappeared", () => {
    let state = sessionState();
    state = reduce(state, { kind: "branch-picked", node: "xor1", branch: 1 });
    const committed = goldenChoice();
    committed.choice.selections = { xor1: 1 };
    state = reduce(state, { kind: "choice-committed", result: committed });
    state = reduce(state, {
      kind: "model-loaded",
      gamma: 0.6,
      model: filteredModel(),
    });
    expect(state.committed).toBeNull();
    expect(state.prompt).toMatch(/pick a live branch/);
  });

  it("reads live branches off the bindings", () => {
    const live = liveBranches(goldenModel());
    expect([...live.keys()]).toEqual(["xor1"]);
    expect([...live.get("xor1")!].sort()).toEqual([0, 1]);
    expect(liveBranches(filteredModel()).get("xor1")?.has(1)).toBe(false);
  });
});
