// Thin typed client for the planning service. Every number the UI shows
// comes through here; the UI itself never optimizes anything locally.

import type {
  JobDoc,
  PresetEntry,
  ScenarioDoc,
  Violation,
} from "./types";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    message: string,
    readonly status: number,
    readonly violations: Violation[] = [],
  ) {
    super(message);
  }
}

export interface UploadResult {
  id: string;
  violations: Violation[];
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (u, i) => fetch(u, i),
  ) {}

  private async request(path: string, init?: RequestInit): Promise<unknown> {
    let resp: Response;
    try {
      resp = await this.fetchImpl(this.baseUrl + path, init);
    } catch (err) {
      throw new ApiError(`network failure: ${String(err)}`, 0);
    }
    const body = await resp.json().catch(() => ({}));
    if (!resp.ok) {
      const violations = (body as { violations?: Violation[] }).violations ?? [];
      const detail =
        (body as { detail?: unknown }).detail !== undefined
          ? JSON.stringify((body as { detail: unknown }).detail)
          : resp.statusText;
      throw new ApiError(`${resp.status}: ${detail}`, resp.status, violations);
    }
    return body;
  }

  async presets(): Promise<PresetEntry[]> {
    return (await this.request("/presets")) as PresetEntry[];
  }

  async uploadScenario(doc: ScenarioDoc): Promise<UploadResult> {
    const body = (await this.request("/scenarios", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(doc),
    })) as UploadResult;
    return body;
  }

  async getScenario(id: string): Promise<ScenarioDoc> {
    return (await this.request(`/scenarios/${id}`)) as ScenarioDoc;
  }

  async startSolve(id: string, force = false): Promise<string> {
    const body = (await this.request(
      `/solve/${id}?force=${force}`,
      { method: "POST", headers: { "content-type": "application/json" }, body: "{}" },
    )) as { job_id: string };
    return body.job_id;
  }

  async startSweep(
    id: string,
    parameter: string,
    values: number[],
    force = false,
  ): Promise<string> {
    const body = (await this.request(`/sweep/${id}?force=${force}`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ parameter, values }),
    })) as { job_id: string };
    return body.job_id;
  }

  async getJob(jobId: string): Promise<JobDoc> {
    return (await this.request(`/jobs/${jobId}`)) as JobDoc;
  }
}

/** Resubmitting an identical request yields 409 with the prior job id. */
export function conflictJobId(err: unknown): string | null {
  if (err instanceof ApiError && err.status === 409) {
    const m = /"job_id"\s*:\s*"([^"]+)"/.exec(err.message);
    return m ? m[1] : null;
  }
  return null;
}
