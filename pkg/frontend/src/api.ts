// Typed API client. The fetch function is injectable so tests can replay
// recorded fixtures; all numbers shown in the UI come from these bodies
// verbatim.

import type {
  ConfigDoc,
  GraphResponse,
  MatrixResponse,
  RunDoc,
  SignaturePage,
  TimelineResponse,
} from "./types.js";
import { FilterState, filterQuery } from "./state.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public code: string,
    message: string,
    public status: number,
  ) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, init);
    const body = await response.json();
    if (!response.ok) {
      const error = body?.error ?? { code: "unknown", message: "request failed" };
      throw new ApiError(error.code, error.message, response.status);
    }
    return body as T;
  }

  listRuns(): Promise<{ runs: RunDoc[] }> {
    return this.request("/runs");
  }

  getGraph(runId: string, filter: FilterState, layout: string): Promise<GraphResponse> {
    const params = filterQuery(filter);
    params.set("layout", layout);
    return this.request(`/runs/${runId}/graph?${params.toString()}`);
  }

  redirectToGraph(runId: string, filter: FilterState, layout: string): Promise<GraphResponse> {
    const params = filterQuery(filter);
    params.set("layout", layout);
    return this.request(`/runs/${runId}/redirect?${params.toString()}`);
  }

  getTimeline(
    runId: string,
    perspective: string,
    host?: string,
    window?: [string, string],
  ): Promise<TimelineResponse> {
    const params = new URLSearchParams({ perspective });
    if (host) params.set("host", host);
    if (window) {
      params.set("from_ts", window[0]);
      params.set("to_ts", window[1]);
    }
    return this.request(`/runs/${runId}/timeline?${params.toString()}`);
  }

  getMatrix(runId: string, filter: FilterState): Promise<MatrixResponse> {
    const params = filterQuery(filter);
    const query = params.toString();
    return this.request(`/runs/${runId}/matrix${query ? "?" + query : ""}`);
  }

  getSignatures(runId: string, nodeKey: string, page = 1): Promise<SignaturePage> {
    return this.request(
      `/runs/${runId}/nodes/${encodeURIComponent(nodeKey)}/signatures?page=${page}`,
    );
  }

  getConfig(): Promise<ConfigDoc> {
    return this.request("/config");
  }

  putConfig(config: ConfigDoc): Promise<ConfigDoc> {
    return this.request("/config", {
      method: "PUT",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(config),
    });
  }
}
