// Job polling: fixed base interval with multiplicative backoff, capped.

import type { ApiClient } from "./api";
import type { JobDoc } from "./types";

export interface PollOptions {
  intervalMs?: number;
  backoff?: number;
  maxIntervalMs?: number;
  onTick?: (job: JobDoc) => void;
}

const sleep = (ms: number) => new Promise((r) => setTimeout(r, ms));

export async function pollJob(
  api: ApiClient,
  jobId: string,
  opts: PollOptions = {},
): Promise<JobDoc> {
  const base = opts.intervalMs ?? 1000;
  const backoff = opts.backoff ?? 1.5;
  const cap = opts.maxIntervalMs ?? 10_000;
  let wait = base;
  for (;;) {
    const job = await api.getJob(jobId);
    opts.onTick?.(job);
    if (job.status === "done" || job.status === "failed") {
      return job;
    }
    await sleep(wait);
    wait = Math.min(cap, wait * backoff);
  }
}
