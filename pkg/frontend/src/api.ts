import type { AvailableResponse, LineageResponse, StatsResponse, VizDocument } from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string
  ) {
    super(message);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/**
 * Thin typed client for the /api/* endpoints. All graph semantics live on
 * the server; this client never post-processes beyond JSON decoding.
 */
export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchFn: FetchLike = (input, init) => fetch(input, init)
  ) {}

  async graph(): Promise<VizDocument> {
    return this.request("/api/graph");
  }

  async lineage(id: string): Promise<LineageResponse> {
    return this.request(`/api/lineage/${encodeURIComponent(id)}`);
  }

  async available(selected: string[], mode: string): Promise<AvailableResponse> {
    return this.request("/api/available", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ selected, mode }),
    });
  }

  async node(id: string): Promise<Record<string, unknown>> {
    return this.request(`/api/nodes/${encodeURIComponent(id)}`);
  }

  async stats(): Promise<StatsResponse> {
    return this.request("/api/stats");
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, init);
    if (!response.ok) {
      let code = "error";
      let message = `${response.status}`;
      try {
        const payload = (await response.json()) as { error?: string; message?: string };
        code = payload.error ?? code;
        message = payload.message ?? message;
      } catch {
        // non-JSON error body; keep the fallback
      }
      throw new ApiError(response.status, code, message);
    }
    return (await response.json()) as T;
  }
}
