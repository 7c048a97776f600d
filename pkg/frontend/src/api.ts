/**
 * Typed client for the profiling-session HTTP API.
 *
 * Every value the UI renders comes straight out of these response documents;
 * the client never recomputes patterns, plans, previews, or counts.
 */

export interface ClusterNode {
  id: string;
  pattern: string;
  regex: string;
  count: number;
  sample: string[];
  children: ClusterNode[];
  /** Present on post-transform nodes only. */
  unmatched_members?: number;
}

export interface HierarchyDoc {
  session_id: string;
  column: string;
  row_count: number;
  roots: ClusterNode[];
  empty_rows: number;
}

export type PlanExpr = { const: string } | { extract: [number, number] };

export interface Alternate {
  plan: PlanExpr[];
  dl: number;
}

export interface Branch {
  source: string;
  default_index: number;
  default: PlanExpr[];
  truncated: boolean;
  alternates: Alternate[];
}

export interface StatusCounts {
  transformed: number;
  already_conforming: number;
  unmatched: number;
}

export interface PostTransform {
  roots: ClusterNode[];
  empty_rows: number;
  status_counts: StatusCounts;
}

export interface ProgramDoc {
  session_id: string;
  target: string;
  script: string[];
  branches: Branch[];
  unmatched: string[];
  post_transform?: PostTransform;
}

export interface PreviewEntry {
  row: number;
  before: string;
  after: string;
  status: string;
  branch: number | null;
}

export interface PreviewDoc {
  session_id: string;
  column: string;
  row_count: number;
  counts: StatusCounts;
  entries: PreviewEntry[];
}

export interface TargetSelector {
  pattern?: string;
  cluster_id?: string;
  k?: number;
}

export type ExportFormat = "script" | "transformed-data" | "program-json";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    detail: string,
  ) {
    super(detail);
    this.name = "ApiError";
  }
}

/** Structural subset of fetch(), so tests can intercept requests. */
export type FetchLike = (
  input: string,
  init?: RequestInit,
) => Promise<{ ok: boolean; status: number; json(): Promise<unknown> }>;

export class SessionApi {
  constructor(
    private readonly base: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchFn(this.base + path, init);
    if (!resp.ok) {
      let code = "error";
      let detail = `request failed with status ${resp.status}`;
      try {
        const body = (await resp.json()) as { error?: string; detail?: string };
        if (body.error) code = body.error;
        if (body.detail) detail = body.detail;
      } catch {
        // non-JSON error body; keep the fallback message
      }
      throw new ApiError(resp.status, code, detail);
    }
    return (await resp.json()) as T;
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  createSession(rows: string[], column?: string): Promise<HierarchyDoc> {
    return this.post("/sessions", column ? { rows, column } : { rows });
  }

  getHierarchy(sessionId: string): Promise<HierarchyDoc> {
    return this.request(`/sessions/${sessionId}/hierarchy`);
  }

  setTarget(sessionId: string, selector: TargetSelector): Promise<ProgramDoc> {
    return this.post(`/sessions/${sessionId}/target`, selector);
  }

  getProgram(sessionId: string): Promise<ProgramDoc> {
    return this.request(`/sessions/${sessionId}/program`);
  }

  getPreview(sessionId: string, limit?: number): Promise<PreviewDoc> {
    const query = limit === undefined ? "" : `?limit=${limit}`;
    return this.request(`/sessions/${sessionId}/preview${query}`);
  }

  repair(sessionId: string, source: string, index: number): Promise<ProgramDoc> {
    return this.post(`/sessions/${sessionId}/repair`, { source, index });
  }

  exportUrl(sessionId: string, format: ExportFormat): string {
    return `${this.base}/sessions/${sessionId}/export?format=${format}`;
  }
}
