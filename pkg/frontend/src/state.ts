// Editable scenario draft and app state. All mutations are dispatched
// through one serialized event queue, so concurrent async handlers can
// never interleave partial updates.

import { ApiClient, ApiError } from "./api";
import type {
  PlanDoc,
  PlatformKind,
  ScenarioDoc,
  SweepResult,
  Violation,
} from "./types";

export type VariabilityChoice =
  | { kind: "none" }
  | { kind: "single_spike"; epoch: number; factor: number }
  | { kind: "uniform_jitter"; alpha: number; seed: number };

export interface DraftState {
  doc: ScenarioDoc | null;
  baseVolumes: Record<string, number[]>;
  presetId: string | null;
  dirty: boolean;
  violations: Violation[];
  uploadedId: string | null;
  enabledKinds: Set<PlatformKind>;
  variability: VariabilityChoice;
  networkError: string | null;
}

export interface AppState {
  draft: DraftState;
  solving: boolean;
  lastPlan: PlanDoc | null;
  lastSolveStatus: "optimal" | "infeasible" | "failed" | null;
  lastSolveError: string | null;
  sweep: SweepResult | null;
}

export function initialState(): AppState {
  return {
    draft: {
      doc: null,
      baseVolumes: {},
      presetId: null,
      dirty: false,
      violations: [],
      uploadedId: null,
      enabledKinds: new Set(["dedicated", "flexhw", "cloud"]),
      variability: { kind: "none" },
      networkError: null,
    },
    solving: false,
    lastPlan: null,
    lastSolveStatus: null,
    lastSolveError: null,
    sweep: null,
  };
}

/** Deterministic small PRNG for the client-side jitter picker. */
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

type Listener = (state: AppState) => void;

export class Store {
  private state = initialState();
  private listeners: Listener[] = [];
  private queue: Promise<void> = Promise.resolve();

  constructor(readonly api: ApiClient) {}

  get current(): AppState {
    return this.state;
  }

  subscribe(fn: Listener): () => void {
    this.listeners.push(fn);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== fn);
    };
  }

  /** Serialize every update through one queue. */
  dispatch(action: (state: AppState) => void | Promise<void>): Promise<void> {
    this.queue = this.queue.then(async () => {
      await action(this.state);
      for (const fn of this.listeners) {
        fn(this.state);
      }
    });
    return this.queue;
  }

  // -- draft edits ----------------------------------------------------------

  loadScenario(presetId: string | null, doc: ScenarioDoc): Promise<void> {
    return this.dispatch((s) => {
      s.draft.doc = structuredClone(doc);
      s.draft.baseVolumes = Object.fromEntries(
        doc.classes.map((c) => [c.id, [...c.volumes]]),
      );
      s.draft.presetId = presetId;
      s.draft.dirty = true;
      s.draft.violations = [];
      s.draft.uploadedId = null;
      s.draft.enabledKinds = new Set(["dedicated", "flexhw", "cloud"]);
      s.draft.variability = { kind: "none" };
      s.draft.networkError = null;
      s.lastPlan = null;
      s.lastSolveStatus = null;
      s.sweep = null;
    });
  }

  private touch(s: AppState): void {
    s.draft.dirty = true;
    s.draft.violations = [];
    s.draft.uploadedId = null;
  }

  setKindCost(
    kind: PlatformKind,
    field: "fixed" | "var" | "elas",
    value: number,
  ): Promise<void> {
    return this.dispatch((s) => {
      if (!s.draft.doc) return;
      for (const entry of s.draft.doc.costs) {
        if (entry.kind === kind) {
          entry[field] = value;
        }
      }
      this.touch(s);
    });
  }

  setThreshold(classId: string, thresholdMs: number | null): Promise<void> {
    return this.dispatch((s) => {
      if (!s.draft.doc) return;
      for (const cls of s.draft.doc.classes) {
        if (cls.id === classId) {
          cls.latency_threshold = thresholdMs;
        }
      }
      this.touch(s);
    });
  }

  setVariability(choice: VariabilityChoice): Promise<void> {
    return this.dispatch((s) => {
      if (!s.draft.doc) return;
      s.draft.variability = choice;
      for (const cls of s.draft.doc.classes) {
        const base = s.draft.baseVolumes[cls.id] ?? cls.volumes;
        let vols = [...base];
        if (choice.kind === "single_spike") {
          vols = vols.map((v, i) => (i === choice.epoch - 1 ? v * choice.factor : v));
        } else if (choice.kind === "uniform_jitter") {
          const rand = mulberry32(choice.seed + cls.id.length);
          vols = vols.map((v) => v * (1 - choice.alpha + 2 * choice.alpha * rand()));
        }
        cls.volumes = vols;
      }
      this.touch(s);
    });
  }

  toggleKind(kind: PlatformKind, enabled: boolean): Promise<void> {
    return this.dispatch((s) => {
      if (enabled) {
        s.draft.enabledKinds.add(kind);
      } else {
        s.draft.enabledKinds.delete(kind);
      }
      this.touch(s);
    });
  }

  /** The document as it will be uploaded (deployment toggles applied). */
  buildUploadDoc(): ScenarioDoc | null {
    const d = this.state.draft;
    if (!d.doc) return null;
    const doc = structuredClone(d.doc);
    doc.instances = doc.instances.filter((p) => d.enabledKinds.has(p.kind));
    return doc;
  }

  get submitDisabled(): boolean {
    const d = this.state.draft;
    return !d.doc || d.violations.length > 0 || (!d.dirty && d.uploadedId !== null);
  }

  // -- server interactions -----------------------------------------------------

  /** Upload the draft; stores violations inline on a 400. */
  submitScenario(): Promise<string | null> {
    let out: string | null = null;
    return this.dispatch(async (s) => {
      const doc = this.buildUploadDoc();
      if (!doc) return;
      try {
        const res = await this.api.uploadScenario(doc);
        s.draft.uploadedId = res.id;
        s.draft.violations = [];
        s.draft.dirty = false;
        s.draft.networkError = null;
        out = res.id;
      } catch (err) {
        if (err instanceof ApiError && err.status === 400) {
          s.draft.violations = err.violations.length
            ? err.violations
            : [{ entity: "scenario", rule: "rejected", detail: err.message }];
          s.draft.networkError = null;
        } else {
          // Draft preserved; banner offers retry.
          s.draft.networkError = String(
            err instanceof Error ? err.message : err,
          );
        }
      }
    }).then(() => out);
  }
}
