// Application shell: preset loading, solve loop, and panel wiring.

import { ApiClient, conflictJobId } from "./api";
import { renderEditor } from "./editor";
import { renderPlanView } from "./planview";
import { pollJob } from "./poll";
import { Store } from "./state";
import { renderSweepChart, renderSweepForm } from "./sweep";
import type {
  PresetEntry,
  ScenarioDoc,
  SolveResult,
  SweepPointDoc,
  SweepResult,
} from "./types";

export interface AppOptions {
  baseUrl?: string;
  pollIntervalMs?: number;
}

export interface App {
  store: Store;
  loadPresets(): Promise<PresetEntry[]>;
  loadPreset(id: string): Promise<void>;
  submit(): Promise<string | null>;
  solve(): Promise<void>;
  runSweep(parameter: string, values: number[]): Promise<void>;
  root: HTMLElement;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K, cls?: string, text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (cls) node.className = cls;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function createApp(root: HTMLElement, opts: AppOptions = {}): App {
  const api = new ApiClient(opts.baseUrl ?? "");
  const store = new Store(api);
  const pollInterval = opts.pollIntervalMs ?? 1000;

  root.textContent = "";
  const header = el("header", "app-header");
  header.appendChild(el("h1", undefined, "nfvplan what-if explorer"));
  const presetBox = el("div", "preset-box");
  const presetSelect = el("select");
  presetSelect.dataset.testid = "preset-select";
  const loadBtn = el("button", undefined, "Load preset");
  loadBtn.dataset.testid = "preset-load";
  presetBox.append(presetSelect, loadBtn);
  header.appendChild(presetBox);
  root.appendChild(header);

  const layout = el("main", "layout");
  const editorPane = el("section", "pane editor-pane");
  const rightPane = el("section", "pane right-pane");
  const solveBtn = el("button", "solve-btn", "Solve");
  solveBtn.dataset.testid = "solve";
  const planPane = el("div", "plan-pane");
  planPane.dataset.testid = "plan-pane";
  const sweepForm = el("div", "sweep-form");
  const sweepPane = el("div", "sweep-pane");
  rightPane.append(solveBtn, planPane, sweepForm, sweepPane);
  layout.append(editorPane, rightPane);
  root.appendChild(layout);

  let presets: PresetEntry[] = [];
  let sweepBusy = false;

  const rerender = () => {
    renderEditor(editorPane, store);
    solveBtn.disabled =
      store.current.draft.uploadedId === null || store.current.solving;
    solveBtn.textContent = store.current.solving ? "Solving…" : "Solve";
    renderSweepForm(sweepForm, { onRun: (p, v) => void app.runSweep(p, v) },
      sweepBusy);
    const doc = store.current.draft.doc;
    if (doc && store.current.lastSolveStatus) {
      renderPlanView(planPane, {
        doc,
        status: store.current.lastSolveStatus,
        plan: store.current.lastPlan,
        error: store.current.lastSolveError,
      });
    }
    if (store.current.sweep) {
      renderSweepChart(sweepPane, store.current.sweep, (p) => pickPoint(p));
    }
  };
  store.subscribe(rerender);

  const pickPoint = (point: SweepPointDoc) => {
    void store.dispatch((s) => {
      if (point.status === "optimal" && point.plan) {
        s.lastPlan = point.plan;
        s.lastSolveStatus = "optimal";
      } else {
        s.lastPlan = null;
        s.lastSolveStatus = "infeasible";
      }
    });
  };

  const app: App = {
    store,
    root,

    async loadPresets() {
      presets = (await api.presets()).filter((p) => p.kind === "scenario");
      presetSelect.textContent = "";
      for (const p of presets) {
        const opt = el("option", undefined, p.id);
        opt.value = p.id;
        presetSelect.appendChild(opt);
      }
      return presets;
    },

    async loadPreset(id: string) {
      const preset = presets.find((p) => p.id === id);
      if (!preset || !preset.scenario) {
        throw new Error(`unknown scenario preset ${id}`);
      }
      await store.loadScenario(id, preset.scenario as ScenarioDoc);
    },

    submit() {
      return store.submitScenario();
    },

    async solve() {
      const id = store.current.draft.uploadedId;
      if (!id) return;
      await store.dispatch((s) => {
        s.solving = true;
      });
      try {
        let jobId: string;
        try {
          jobId = await api.startSolve(id);
        } catch (err) {
          const prior = conflictJobId(err);
          if (prior === null) throw err;
          jobId = prior; // identical request already ran; reuse its job
        }
        const job = await pollJob(api, jobId, { intervalMs: pollInterval });
        await store.dispatch((s) => {
          if (job.status === "failed") {
            s.lastSolveStatus = "failed";
            s.lastSolveError = job.error ?? "job failed";
            s.lastPlan = null;
            return;
          }
          const result = job.result as SolveResult;
          s.lastSolveStatus = result.status;
          s.lastPlan = result.status === "optimal" ? result.plan ?? null : null;
          s.lastSolveError = null;
        });
      } finally {
        await store.dispatch((s) => {
          s.solving = false;
        });
      }
    },

    async runSweep(parameter: string, values: number[]) {
      const id = store.current.draft.uploadedId;
      if (!id) return;
      sweepBusy = true;
      rerender();
      try {
        let jobId: string;
        try {
          jobId = await api.startSweep(id, parameter, values);
        } catch (err) {
          const prior = conflictJobId(err);
          if (prior === null) throw err;
          jobId = prior;
        }
        const job = await pollJob(api, jobId, { intervalMs: pollInterval });
        await store.dispatch((s) => {
          s.sweep = job.status === "done" ? (job.result as SweepResult) : null;
        });
      } finally {
        sweepBusy = false;
        rerender();
      }
    },
  };

  loadBtn.addEventListener("click", () => {
    void app.loadPreset(presetSelect.value);
  });
  solveBtn.addEventListener("click", () => void app.solve());

  rerender();
  return app;
}

// Browser entry point (tests build the app explicitly instead).
const mount = document.getElementById("app");
if (mount && !("__NFVPLAN_TEST__" in window)) {
  const app = createApp(mount);
  void app.loadPresets().then(() => {
    const first = mount.querySelector<HTMLSelectElement>(
      '[data-testid="preset-select"]');
    if (first && first.value) {
      return app.loadPreset(first.value);
    }
  });
}
