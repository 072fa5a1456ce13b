import type { ChoiceResult, ModelJson } from "../src/types.js";

/** The reference four-project model at gamma=0, exactly as the service sends it. */
export function goldenModel(): ModelJson {
  return {
    gamma: 0.0,
    places: ["start", "p1", "p2", "p3", "p4", "p5", "p6", "end"],
    transitions: [
      { id: "t1", label: "a", freq: 4, duration: 2.0 },
      { id: "t2", label: null, freq: 2, duration: 0.0 },
      { id: "t3", label: null, freq: 2, duration: 0.0 },
      { id: "t4", label: "b", freq: 2, duration: 4.0 },
      { id: "t5", label: "c", freq: 2, duration: 3.5 },
      { id: "t6", label: "d", freq: 2, duration: 0.0 },
      { id: "t7", label: "e", freq: 4, duration: 5.0 },
    ],
    arcs: [
      { source: "p1", target: "t2", freq: 2, rule: "client != IZ" },
      { source: "p1", target: "t6", freq: 2, rule: "client = IZ" },
      { source: "p2", target: "t7", freq: 4, rule: null },
      { source: "p3", target: "t4", freq: 2, rule: null },
      { source: "p4", target: "t3", freq: 2, rule: null },
      { source: "p5", target: "t5", freq: 2, rule: null },
      { source: "p6", target: "t3", freq: 2, rule: null },
      { source: "start", target: "t1", freq: 4, rule: null },
      { source: "t1", target: "p1", freq: 4, rule: null },
      { source: "t2", target: "p3", freq: 2, rule: null },
      { source: "t2", target: "p5", freq: 2, rule: null },
      { source: "t3", target: "p2", freq: 2, rule: null },
      { source: "t4", target: "p4", freq: 2, rule: null },
      { source: "t5", target: "p6", freq: 2, rule: null },
      { source: "t6", target: "p2", freq: 2, rule: null },
      { source: "t7", target: "end", freq: 4, rule: null },
    ],
    source: "start",
    sink: "end",
    xor_bindings: [{ place: "p1", node: "xor1", branches: { t2: 0, t6: 1 } }],
    workflow_net: true,
    sound: true,
    dead_transitions: [],
    disconnected: [],
    rules: [
      {
        point: "p1",
        accuracy: 1.0,
        alternatives: ["{b,c}", "d"],
        text:
          "IF client = IZ THEN d (support=2, acc=1.00)\n" +
          "IF client != IZ THEN {b,c} (support=2, acc=1.00)",
        tree: {},
      },
    ],
  };
}

/** The same model with the d branch filtered away (as at a higher gamma). */
export function filteredModel(): ModelJson {
  const model = goldenModel();
  model.gamma = 0.6;
  model.transitions = model.transitions.filter((t) => t.id !== "t6");
  model.arcs = model.arcs.filter((a) => a.source !== "t6" && a.target !== "t6");
  model.xor_bindings = [{ place: "p1", node: "xor1", branches: { t2: 0 } }];
  return model;
}

/** A straight-line model without any choice node. */
export function chainModel(): ModelJson {
  return {
    gamma: 0.0,
    places: ["start", "p1", "end"],
    transitions: [
      { id: "t1", label: "a", freq: 3, duration: 1.0 },
      { id: "t2", label: "e", freq: 3, duration: 2.0 },
    ],
    arcs: [
      { source: "start", target: "t1", freq: 3, rule: null },
      { source: "t1", target: "p1", freq: 3, rule: null },
      { source: "p1", target: "t2", freq: 3, rule: null },
      { source: "t2", target: "end", freq: 3, rule: null },
    ],
    source: "start",
    sink: "end",
    xor_bindings: [],
    workflow_net: true,
    sound: true,
    dead_transitions: [],
    disconnected: [],
    rules: [],
  };
}

/** The accepted parallel-branch schedule, exactly as the service sends it. */
export function goldenChoice(): ChoiceResult {
  return {
    choice: { selections: { xor1: 0 }, unrolls: {} },
    schedule: {
      makespan: 11.0,
      critical_path: ["a", "b", "e"],
      activities: [
        { id: "a", label: "a", duration: 2.0, early_start: 0.0, early_finish: 2.0, late_start: 0.0, late_finish: 2.0, slack: 0.0 },
        { id: "b", label: "b", duration: 4.0, early_start: 2.0, early_finish: 6.0, late_start: 2.0, late_finish: 6.0, slack: 0.0 },
        { id: "c", label: "c", duration: 3.5, early_start: 2.0, early_finish: 5.5, late_start: 2.5, late_finish: 6.0, slack: 0.5 },
        { id: "e", label: "e", duration: 5.0, early_start: 6.0, early_finish: 11.0, late_start: 6.0, late_finish: 11.0, slack: 0.0 },
      ],
    },
    relaxation: {
      baseline_makespan: 14.5,
      plan_makespan: 11.0,
      gain: 3.5,
      percent_gain: 24.14,
      slack: { a: 0.0, b: 0.0, c: 0.5, e: 0.0 },
    },
  };
}
