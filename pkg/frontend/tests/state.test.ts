import { describe, expect, it } from "vitest";

import { ApiClient, FetchLike, Metrics, PendingRow, SessionSummary } from "../src/api.js";
import { LabelerSession, probaPercents, shouldShowScatter } from "../src/state.js";
import { renderBanner, renderClassButtons, renderPending, renderProbaBars } from "../src/render.js";

// In-memory fake of the annotation service, mirroring its status codes.
class FakeService {
  pool: number[];
  pending: number[] = [];
  labeled: { id: number; label: number }[] = [];
  accuracy: number[] = [0.5];
  labelPosts = 0;
  offline = false;

  constructor(
    public classNames: string[],
    poolSize: number,
    public nFeatures = 2,
    public hasHoldout = true,
  ) {
    this.pool = Array.from({ length: poolSize }, (_, i) => i);
  }

  fetch: FetchLike = async (url, init) => {
    if (this.offline) throw new TypeError("fetch failed");
    const method = init?.method ?? "GET";
    const path = new URL(url, "http://x").pathname;
    const q = new URL(url, "http://x").searchParams;
    if (path === "/sessions/s1" && method === "GET") return json(200, this.summary());
    if (path === "/sessions/s1/metrics") return json(200, this.metrics());
    if (path === "/sessions/s1/query" && method === "POST") {
      const n = Number(q.get("n") ?? 0) || 1;
      if (this.pending.length > 0) {
        if (n !== this.pending.length) return json(409, { detail: "pending batch exists" });
      } else {
        if (n > this.pool.length) return json(410, { detail: "pool exhausted" });
        this.pending = this.pool.slice(0, n);
        this.pool = this.pool.slice(n);
      }
      return json(200, { rows: this.pending.map((id) => this.row(id)) });
    }
    if (path === "/sessions/s1/labels" && method === "POST") {
      this.labelPosts += 1;
      const { labels } = JSON.parse(String(init?.body));
      for (const { id } of labels) {
        if (!this.pending.includes(id)) return json(409, { detail: `row ${id} is not pending` });
      }
      for (const item of labels) {
        this.labeled.push(item);
        this.pending = this.pending.filter((p) => p !== item.id);
      }
      if (this.hasHoldout) this.accuracy.push(Math.min(0.5 + this.labeled.length * 0.03, 1));
      return json(200, this.metrics());
    }
    return json(404, { detail: "unknown session" });
  };

  private row(id: number): PendingRow {
    return {
      id,
      features: Array.from({ length: this.nFeatures }, (_, i) => id + i / 10),
      proba: this.classNames.map((_, i) => (i === 0 ? 0.7 : 0.3 / (this.classNames.length - 1))),
    };
  }

  private summary(): SessionSummary {
    return {
      id: "s1",
      strategy: "least_confident",
      estimator: "gnb",
      class_names: this.classNames,
      batch_size: 1,
      n_features: this.nFeatures,
      pool_remaining: this.pool.length,
      pending: [...this.pending],
      labeled: this.labeled.length + 2,
    };
  }

  private metrics(): Metrics {
    return {
      labeled: this.labeled.length + 2,
      human_labeled: this.labeled.length,
      pool_remaining: this.pool.length,
      pending: [...this.pending],
      class_counts: this.classNames.map(() => 0),
      accuracy_series: this.hasHoldout ? [...this.accuracy] : [],
    };
  }
}

function json(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

function makeSession(svc: FakeService): LabelerSession {
  return new LabelerSession(new ApiClient("", svc.fetch), "s1");
}

describe("connect", () => {
  it("populates the view and requests a first batch", async () => {
    const svc = new FakeService(["cat", "dog"], 20);
    const view = await makeSession(svc).connect();
    expect(view.error).toBeNull();
    expect(view.classNames).toEqual(["cat", "dog"]);
    expect(view.pending).toHaveLength(1);
    expect(view.progress).toEqual({ labeled: 0, total: 22 });
  });

  it("dead service yields an error banner, not a crash", async () => {
    const svc = new FakeService(["a", "b"], 5);
    svc.offline = true;
    const view = await makeSession(svc).connect();
    expect(view.error).toMatch(/fetch failed/);
    expect(renderBanner(view)).toContain("Retry");
  });

  it("renders one button per class for a 3-class session", async () => {
    const svc = new FakeService(["a", "b", "c"], 10);
    const view = await makeSession(svc).connect();
    const html = renderClassButtons(view, view.pending[0].id);
    expect(html.match(/<button/g)).toHaveLength(3);
  });

  it("re-requests a server-staged batch instead of a new one", async () => {
    const svc = new FakeService(["a", "b"], 10);
    svc.pending = [3, 4];
    svc.pool = svc.pool.filter((i) => i !== 3 && i !== 4);
    const view = await makeSession(svc).connect();
    expect(view.pending.map((r) => r.id)).toEqual([3, 4]);
  });
});

describe("labeling", () => {
  it("increments progress and shows the next instance", async () => {
    const svc = new FakeService(["a", "b"], 20);
    const session = makeSession(svc);
    const v0 = await session.connect();
    const first = v0.pending[0].id;
    const v1 = await session.label(first, 1);
    expect(v1.progress.labeled).toBe(1);
    expect(v1.pending).toHaveLength(1);
    expect(v1.pending[0].id).not.toBe(first);
    expect(svc.labeled).toEqual([{ id: first, label: 1 }]);
  });

  it("suppresses the second submit of a double-click", async () => {
    const svc = new FakeService(["a", "b"], 20);
    const session = makeSession(svc);
    const v0 = await session.connect();
    const id = v0.pending[0].id;
    const posts = svc.labelPosts;
    // simulate a double-click: two label calls without awaiting in between
    await Promise.all([session.label(id, 0), session.label(id, 0)]);
    expect(svc.labelPosts).toBe(posts + 1);
    expect(svc.labeled).toHaveLength(1);
  });

  it("10 labels with holdout add 10 chart points", async () => {
    const svc = new FakeService(["a", "b"], 30);
    const session = makeSession(svc);
    let view = await session.connect();
    const before = view.accuracySeries.length;
    for (let i = 0; i < 10; i++) {
      view = await session.label(view.pending[0].id, i % 2);
    }
    expect(view.accuracySeries.length).toBe(before + 10);
    expect(view.progress.labeled).toBe(10);
  });

  it("surfaces 409 as a toast", async () => {
    const svc = new FakeService(["a", "b"], 10);
    const session = makeSession(svc);
    const v0 = await session.connect();
    const id = v0.pending[0].id;
    svc.pending = []; // someone else labeled it server-side
    svc.pool.unshift(99);
    const v1 = await session.label(id, 0);
    expect(v1.toast).toBe("instance already labeled");
  });

  it("queues offline submissions and flushes on reconnect", async () => {
    const svc = new FakeService(["a", "b"], 20);
    const session = makeSession(svc);
    const v0 = await session.connect();
    const id = v0.pending[0].id;
    svc.offline = true;
    const v1 = await session.label(id, 1);
    expect(v1.queuedCount).toBe(1);
    expect(svc.labeled).toHaveLength(0);
    svc.offline = false;
    const v2 = await session.refresh();
    expect(v2.queuedCount).toBe(0);
    expect(svc.labeled).toEqual([{ id, label: 1 }]);
  });
});

describe("view helpers", () => {
  it("proba percents sum to exactly 100", () => {
    for (const proba of [[0.333, 0.333, 0.334], [0.5, 0.5], [0.299, 0.701], [0.1, 0.2, 0.7]]) {
      const pct = probaPercents(proba);
      expect(pct.reduce((a, b) => a + b, 0)).toBe(100);
    }
  });

  it("proba bars render one row per class", async () => {
    const svc = new FakeService(["x", "y"], 5);
    const view = await makeSession(svc).connect();
    const html = renderProbaBars(view.pending[0], view.classNames);
    expect(html.match(/proba-row/g)).toHaveLength(2);
    expect(html).toContain("70%");
  });

  it("scatter shows for >= 2 features, hides for 1", () => {
    expect(shouldShowScatter(2)).toBe(true);
    expect(shouldShowScatter(5)).toBe(true);
    expect(shouldShowScatter(1)).toBe(false);
  });

  it("renders an empty-pool message when nothing is pending", async () => {
    const svc = new FakeService(["a", "b"], 0);
    const view = await makeSession(svc).connect();
    expect(renderPending(view)).toContain("No pending instances");
  });
});
