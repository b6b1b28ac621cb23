/** Client for the suggestion service with latest-wins cancellation. */

export interface Suggestion {
  word: string;
  theta: number;
}

export interface SuggestResponse {
  suggestions: Suggestion[];
  latency_ms: number;
}

export interface SuggestRequest {
  /** Context words before the gap, nearest the gap first. */
  before?: string[];
  after?: string[];
  candidates?: string[];
  k?: number;
  alpha?: number;
}

export class ServiceError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
    this.name = "ServiceError";
  }
}

export function isAbort(err: unknown): boolean {
  return err instanceof DOMException && err.name === "AbortError";
}

/**
 * At most one request in flight: issuing a new one aborts the previous,
 * so a slow older response can never overwrite a newer one.
 */
export class SuggestClient {
  private inflight: AbortController | null = null;

  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  async suggest(req: SuggestRequest): Promise<SuggestResponse> {
    this.inflight?.abort();
    const ctrl = new AbortController();
    this.inflight = ctrl;
    try {
      const res = await this.fetchFn(`${this.baseUrl}/suggest`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(req),
        signal: ctrl.signal,
      });
      if (!res.ok) {
        let detail = `HTTP ${res.status}`;
        try {
          const body = (await res.json()) as { error?: string };
          if (body.error) detail = body.error;
        } catch {
          // non-JSON error body: keep the status text
        }
        throw new ServiceError(res.status, detail);
      }
      return (await res.json()) as SuggestResponse;
    } finally {
      if (this.inflight === ctrl) this.inflight = null;
    }
  }
}
