import { ApiClient, ServiceError } from "./api.js";
import { renderSchedule } from "./gantt.js";
import { RenderError, renderNet } from "./netview.js";
import {
  canCommit,
  initialState,
  reduce,
  type ViewEvent,
  type ViewState,
} from "./state.js";

// DOM wiring: one state record, one dispatch, full re-render per event.
// At most one request is in flight — every action bails while `busy`.

const SHELL = `
  <header>
    <label class="upload">event log CSV
      <input id="log-file" type="file" accept=".csv,text/csv">
    </label>
    <label>durations
      <select id="estimator">
        <option value="mean" selected>mean</option>
        <option value="median">median</option>
        <option value="p90">p90</option>
      </select>
    </label>
    <label class="gamma">&gamma; <input id="gamma" type="range" min="0" max="1" step="0.01" value="0">
      <span id="gamma-value">0</span>
    </label>
    <button id="commit" disabled>commit choice</button>
    <span id="spinner" hidden>working&hellip;</span>
  </header>
  <div id="prompt" class="banner prompt" hidden></div>
  <div id="error" class="banner error" hidden></div>
  <p id="stats" class="stats"></p>
  <section id="net" class="net-panel"><p class="hint">Upload a log to mine its model.</p></section>
  <section id="schedule" class="schedule-panel"></section>
`;

function failure(err: unknown): ViewEvent {
  if (err instanceof ServiceError) {
    return { kind: "choice-rejected", status: err.status, message: err.message };
  }
  return { kind: "failed", message: err instanceof Error ? err.message : String(err) };
}

export function mountApp(root: HTMLElement, client: ApiClient): void {
  root.innerHTML = SHELL;
  const pick = <T extends HTMLElement>(selector: string) =>
    root.querySelector(selector) as T;
  const fileInput = pick<HTMLInputElement>("#log-file");
  const estimatorInput = pick<HTMLSelectElement>("#estimator");
  const slider = pick<HTMLInputElement>("#gamma");
  const sliderValue = pick<HTMLSpanElement>("#gamma-value");
  const commitButton = pick<HTMLButtonElement>("#commit");
  const spinner = pick<HTMLSpanElement>("#spinner");
  const promptBanner = pick<HTMLDivElement>("#prompt");
  const errorBanner = pick<HTMLDivElement>("#error");
  const statsLine = pick<HTMLParagraphElement>("#stats");
  const netPanel = pick<HTMLElement>("#net");
  const schedulePanel = pick<HTMLElement>("#schedule");

  let state: ViewState = initialState();

  function render(): void {
    spinner.hidden = !state.busy;
    promptBanner.hidden = !state.prompt;
    promptBanner.textContent = state.prompt ?? "";
    errorBanner.hidden = !state.error;
    errorBanner.textContent = state.error ?? "";
    slider.value = String(state.gamma);
    sliderValue.textContent = String(state.gamma);
    slider.disabled = !state.sessionId || state.busy;
    commitButton.disabled = !canCommit(state);
    statsLine.textContent = state.stats
      ? `${state.stats.cases} cases, ${state.stats.variants.length} variants` +
        (state.sessionId ? ` — session ${state.sessionId}` : "")
      : "";

    if (state.model) {
      try {
        netPanel.innerHTML = renderNet(state.model);
        for (const [node, branch] of Object.entries(state.pending)) {
          const edge = netPanel.querySelector(
            `[data-node="${node}"][data-branch="${branch}"]`,
          );
          edge?.classList.add("selected");
        }
      } catch (err) {
        if (err instanceof RenderError) {
          netPanel.innerHTML = "";
          errorBanner.hidden = false;
          errorBanner.textContent = err.message;
        } else {
          throw err;
        }
      }
    }

    if (state.committed) {
      schedulePanel.innerHTML = renderSchedule(state.committed);
    } else if (state.model) {
      schedulePanel.innerHTML =
        '<p class="hint">Click a branch at each choice, then commit.</p>';
    } else {
      schedulePanel.innerHTML = "";
    }
  }

  function dispatch(event: ViewEvent): void {
    state = reduce(state, event);
    render();
  }

  function rememberInUrl(): void {
    if (state.sessionId) {
      window.location.hash = `session=${state.sessionId}&gamma=${state.gamma}`;
    }
  }

  async function loadModel(gamma: number): Promise<void> {
    if (!state.sessionId || state.busy) return;
    const sessionId = state.sessionId;
    dispatch({ kind: "request-started" });
    try {
      const model = await client.getModel(sessionId, gamma);
      dispatch({ kind: "model-loaded", gamma, model });
      rememberInUrl();
    } catch (err) {
      dispatch(failure(err));
    }
  }

  fileInput.addEventListener("change", async () => {
    const file = fileInput.files?.[0];
    if (!file || state.busy) return;
    dispatch({ kind: "request-started" });
    try {
      const created = await client.createSession(
        await file.text(),
        estimatorInput.value,
      );
      dispatch({
        kind: "session-created",
        sessionId: created.session_id,
        estimator: created.estimator,
        stats: created.stats,
      });
      await loadModel(0);
    } catch (err) {
      dispatch(failure(err));
    }
  });

  slider.addEventListener("change", () => {
    void loadModel(Number(slider.value));
  });

  netPanel.addEventListener("click", (event) => {
    const edge = (event.target as Element).closest("[data-node]");
    if (!edge) return;
    dispatch({
      kind: "branch-picked",
      node: edge.getAttribute("data-node")!,
      branch: Number(edge.getAttribute("data-branch")),
    });
  });

  commitButton.addEventListener("click", async () => {
    if (!canCommit(state)) return;
    const sessionId = state.sessionId!;
    const selections = { ...state.pending };
    dispatch({ kind: "request-started" });
    try {
      const result = await client.postChoice(sessionId, selections);
      dispatch({ kind: "choice-committed", result });
    } catch (err) {
      dispatch(failure(err));
    }
  });

  render();

  // the session id in the URL is the only thing that survives a reload
  const params = new URLSearchParams(window.location.hash.slice(1));
  const resumed = params.get("session");
  if (resumed) {
    const gamma = Number(params.get("gamma") ?? "0");
    state = { ...state, sessionId: resumed };
    void loadModel(Number.isFinite(gamma) ? gamma : 0);
  }
}
