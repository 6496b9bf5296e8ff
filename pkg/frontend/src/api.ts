// Thin typed client over the annotation service's HTTP/JSON endpoints.

export interface SessionSummary {
  id: string;
  strategy: string;
  estimator: string;
  class_names: string[];
  batch_size: number;
  n_features: number;
  pool_remaining: number;
  pending: number[];
  labeled: number;
}

export interface Metrics {
  labeled: number;
  human_labeled: number;
  pool_remaining: number;
  pending: number[];
  class_counts: number[];
  accuracy_series: number[];
  holdout_accuracy?: number;
}

export interface PendingRow {
  id: number;
  features: number[];
  proba: number[];
}

export class HttpError extends Error {
  constructor(public status: number, public detail: string) {
    super(`HTTP ${status}: ${detail}`);
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private baseUrl: string,
    private fetchFn: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const res = await this.fetchFn(this.baseUrl + path, init);
    if (!res.ok) {
      let detail = res.statusText;
      try {
        const body = await res.json();
        if (typeof body.detail === "string") detail = body.detail;
      } catch {
        // non-JSON error body, keep statusText
      }
      throw new HttpError(res.status, detail);
    }
    return res.json() as Promise<T>;
  }

  summary(sessionId: string): Promise<SessionSummary> {
    return this.request(`/sessions/${sessionId}`);
  }

  metrics(sessionId: string): Promise<Metrics> {
    return this.request(`/sessions/${sessionId}/metrics`);
  }

  query(sessionId: string, n?: number): Promise<{ rows: PendingRow[] }> {
    const qs = n ? `?n=${n}` : "";
    return this.request(`/sessions/${sessionId}/query${qs}`, { method: "POST" });
  }

  submitLabels(sessionId: string, labels: { id: number; label: number }[]): Promise<Metrics> {
    return this.request(`/sessions/${sessionId}/labels`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ labels }),
    });
  }

  cancelPending(sessionId: string): Promise<{ pool_remaining: number }> {
    return this.request(`/sessions/${sessionId}/pending`, { method: "DELETE" });
  }
}
