// Session view state machine. The server is the single source of truth:
// every mutation round-trips through the service and the view is rebuilt
// from the responses, so reconnecting yields the same state.

import { ApiClient, HttpError, Metrics, PendingRow, SessionSummary } from "./api.js";

export interface UiSessionView {
  sessionId: string;
  classNames: string[];
  pending: PendingRow[];
  progress: { labeled: number; total: number };
  poolRemaining: number;
  accuracySeries: number[];
  hasHoldout: boolean;
  error: string | null;
  toast: string | null;
  queuedCount: number;
}

interface QueuedLabel {
  id: number;
  label: number;
}

export class LabelerSession {
  private summary: SessionSummary | null = null;
  private metrics: Metrics | null = null;
  private pending: PendingRow[] = [];
  private error: string | null = null;
  private toast: string | null = null;
  // dedup: ids for which a submit is in flight or already accepted
  private submitted = new Set<number>();
  private queue: QueuedLabel[] = [];

  constructor(private api: ApiClient, private sessionId: string) {}

  view(): UiSessionView {
    const total = this.summary
      ? this.summary.pool_remaining + this.summary.labeled + this.pending.length
      : 0;
    return {
      sessionId: this.sessionId,
      classNames: this.summary?.class_names ?? [],
      pending: this.pending.filter((r) => !this.submitted.has(r.id)),
      progress: { labeled: this.metrics?.human_labeled ?? 0, total },
      poolRemaining: this.summary?.pool_remaining ?? 0,
      accuracySeries: this.metrics?.accuracy_series ?? [],
      hasHoldout: (this.metrics?.accuracy_series.length ?? 0) > 0,
      error: this.error,
      toast: this.toast,
      queuedCount: this.queue.length,
    };
  }

  async connect(): Promise<UiSessionView> {
    try {
      this.summary = await this.api.summary(this.sessionId);
      this.metrics = await this.api.metrics(this.sessionId);
      await this.ensureBatch();
      this.error = null;
      await this.flushQueue();
    } catch (e) {
      this.error = describe(e);
    }
    return this.view();
  }

  /** Label one pending row. Repeat clicks on an already-submitted row are
   * suppressed client-side so one human click maps to one label POST. */
  async label(rowId: number, classIndex: number): Promise<UiSessionView> {
    this.toast = null;
    if (this.submitted.has(rowId) || !this.pending.some((r) => r.id === rowId)) {
      return this.view();
    }
    this.submitted.add(rowId);
    try {
      this.metrics = await this.api.submitLabels(this.sessionId, [
        { id: rowId, label: classIndex },
      ]);
      this.pending = this.pending.filter((r) => r.id !== rowId);
      this.submitted.delete(rowId);
      this.summary = await this.api.summary(this.sessionId);
      await this.ensureBatch();
      this.error = null;
      await this.flushQueue();
    } catch (e) {
      this.submitted.delete(rowId);
      if (e instanceof HttpError && e.status === 409) {
        this.toast = "instance already labeled";
        await this.refresh();
      } else if (e instanceof HttpError) {
        this.toast = e.detail;
      } else {
        // network failure: queue the submission for the next reconnect
        this.queue.push({ id: rowId, label: classIndex });
        this.error = describe(e);
      }
    }
    return this.view();
  }

  /** Re-sync from the server; also flushes queued offline submissions. */
  async refresh(): Promise<UiSessionView> {
    return this.connect();
  }

  private async ensureBatch(): Promise<void> {
    if (this.summary && this.summary.pending.length > 0) {
      // the server already has a staged batch; re-request it verbatim
      this.pending = (await this.api.query(this.sessionId, this.summary.pending.length)).rows;
      return;
    }
    if (!this.summary || this.summary.pool_remaining === 0) {
      this.pending = [];
      return;
    }
    try {
      this.pending = (await this.api.query(this.sessionId)).rows;
      this.summary = await this.api.summary(this.sessionId);
    } catch (e) {
      if (e instanceof HttpError && e.status === 410) {
        this.pending = [];
      } else {
        throw e;
      }
    }
  }

  private async flushQueue(): Promise<void> {
    while (this.queue.length > 0) {
      const item = this.queue[0];
      try {
        this.metrics = await this.api.submitLabels(this.sessionId, [item]);
      } catch (e) {
        if (e instanceof HttpError) {
          // stale queued label (e.g. batch was cancelled meanwhile): drop it
          this.queue.shift();
          continue;
        }
        return; // still offline, keep the queue
      }
      this.queue.shift();
      this.pending = this.pending.filter((r) => r.id !== item.id);
    }
  }
}

function describe(e: unknown): string {
  return e instanceof Error ? e.message : String(e);
}

/** Proba bar widths in integer percent; they sum to 100 exactly by giving
 * the remainder to the largest entry. */
export function probaPercents(proba: number[]): number[] {
  const raw = proba.map((p) => Math.round(p * 100));
  const drift = 100 - raw.reduce((a, b) => a + b, 0);
  if (drift !== 0) {
    const biggest = proba.indexOf(Math.max(...proba));
    raw[biggest] += drift;
  }
  return raw;
}

export function shouldShowScatter(nFeatures: number): boolean {
  return nFeatures >= 2;
}
