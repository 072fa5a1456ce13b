import type { ChoiceResult, LogStats, ModelJson } from "./types.js";

// All client-side state lives here as one immutable record; the DOM layer
// dispatches events and re-renders from whatever comes back.  Every number
// displayed anywhere is copied from a service response — the reducer never
// computes schedule figures of its own.

export interface ViewState {
  sessionId: string | null;
  estimator: string;
  stats: LogStats | null;
  gamma: number;
  model: ModelJson | null;
  /** branch picks made in the UI, keyed by choice-node id */
  pending: Record<string, number>;
  /** last schedule the server accepted, verbatim */
  committed: ChoiceResult | null;
  /** user-facing nudge, e.g. after a selection went stale */
  prompt: string | null;
  error: string | null;
  busy: boolean;
}

export type ViewEvent =
  | { kind: "request-started" }
  | { kind: "session-created"; sessionId: string; estimator: string; stats: LogStats }
  | { kind: "model-loaded"; gamma: number; model: ModelJson }
  | { kind: "branch-picked"; node: string; branch: number }
  | { kind: "choice-committed"; result: ChoiceResult }
  | { kind: "choice-rejected"; status: number; message: string }
  | { kind: "failed"; message: string };

export function initialState(): ViewState {
  return {
    sessionId: null,
    estimator: "mean",
    stats: null,
    gamma: 0,
    model: null,
    pending: {},
    committed: null,
    prompt: null,
    error: null,
    busy: false,
  };
}

/** Choice nodes the current model still offers, with their live branches. */
export function liveBranches(model: ModelJson): Map<string, Set<number>> {
  const nodes = new Map<string, Set<number>>();
  for (const binding of model.xor_bindings) {
    const branches = nodes.get(binding.node) ?? new Set<number>();
    for (const index of Object.values(binding.branches)) branches.add(index);
    nodes.set(binding.node, branches);
  }
  return nodes;
}

/** True once every visible choice node has a pending pick. */
export function canCommit(state: ViewState): boolean {
  if (!state.model || state.busy || !state.sessionId) return false;
  const nodes = liveBranches(state.model);
  if (nodes.size === 0) return false;
  for (const node of nodes.keys()) {
    if (!(node in state.pending)) return false;
  }
  return true;
}

function reconcile(state: ViewState, model: ModelJson, gamma: number): ViewState {
  const live = liveBranches(model);
  const valid = (node: string, branch: number) =>
    live.get(node)?.has(branch) ?? false;

  const kept: Record<string, number> = {};
  const dropped: string[] = [];
  for (const [node, branch] of Object.entries(state.pending)) {
    (valid(node, branch) ? (kept[node] = branch) : dropped.push(node));
  }

  let committed = state.committed;
  if (
    committed &&
    !Object.entries(committed.choice.selections).every(([n, b]) => valid(n, b))
  ) {
    committed = null;
    if (dropped.length === 0) dropped.push("the committed plan");
  }

  const prompt = dropped.length
    ? `gamma=${gamma} filtered out ${dropped.join(", ")} — pick a live branch and commit again`
    : state.prompt;
  return { ...state, model, gamma, pending: kept, committed, prompt, busy: false, error: null };
}

export function reduce(state: ViewState, event: ViewEvent): ViewState {
  switch (event.kind) {
    case "request-started":
      return { ...state, busy: true, error: null };
    case "session-created":
      return {
        ...initialState(),
        sessionId: event.sessionId,
        estimator: event.estimator,
        stats: event.stats,
      };
    case "model-loaded":
      return reconcile(state, event.model, event.gamma);
    case "branch-picked":
      return {
        ...state,
        pending: { ...state.pending, [event.node]: event.branch },
        prompt: null,
      };
    case "choice-committed":
      return {
        ...state,
        busy: false,
        committed: event.result,
        pending: { ...event.result.choice.selections },
        prompt: null,
        error: null,
      };
    case "choice-rejected":
      if (event.status === 409) {
        // the gamma moved underneath the selection; never keep it silently
        return {
          ...state,
          busy: false,
          pending: {},
          committed: null,
          prompt: `${event.message} — pick a live branch and commit again`,
        };
      }
      return { ...state, busy: false, error: event.message };
    case "failed":
      return { ...state, busy: false, error: event.message };
  }
}
