// Run status polling registry. One interval per watched run; stops on a
// terminal status. Tools with at least one running/queued run get the
// green dot.

import type { RunRecord, RunStatus } from "./types.js";

const TERMINAL: RunStatus[] = ["succeeded", "failed", "cancelled"];

export type StatusFetcher = (runId: string) => Promise<RunRecord>;
export type RunListener = (record: RunRecord) => void;

export class RunPoller {
  private timers = new Map<string, ReturnType<typeof setInterval>>();
  private latest = new Map<string, RunRecord>();

  constructor(
    private fetchStatus: StatusFetcher,
    public intervalMs = 2000,
  ) {}

  /** Start watching a run; the listener fires on every poll result. */
  watch(record: RunRecord, listener: RunListener): void {
    this.latest.set(record.run_id, record);
    listener(record);
    if (TERMINAL.includes(record.status)) return;
    if (this.timers.has(record.run_id)) return;
    const timer = setInterval(async () => {
      let update: RunRecord;
      try {
        update = await this.fetchStatus(record.run_id);
      } catch {
        this.stop(record.run_id);
        return;
      }
      this.latest.set(record.run_id, update);
      listener(update);
      if (TERMINAL.includes(update.status)) this.stop(record.run_id);
    }, this.intervalMs);
    this.timers.set(record.run_id, timer);
  }

  stop(runId: string): void {
    const timer = this.timers.get(runId);
    if (timer !== undefined) {
      clearInterval(timer);
      this.timers.delete(runId);
    }
  }

  stopAll(): void {
    for (const runId of [...this.timers.keys()]) this.stop(runId);
  }

  watching(runId: string): boolean {
    return this.timers.has(runId);
  }

  /** Green-dot rule: any watched run of the tool is queued or running. */
  toolIsActive(toolId: string): boolean {
    for (const record of this.latest.values()) {
      if (record.tool_id === toolId && !TERMINAL.includes(record.status)) return true;
    }
    return false;
  }
}
