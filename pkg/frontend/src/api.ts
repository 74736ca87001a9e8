// Typed client for the document service. Every mutating call names the
// version it was computed against; stale writes surface as ApiError 409.

export interface SpanInfo {
  startLine: number;
  startCol: number;
  endLine: number;
  endCol: number;
}

export interface ErrorBody {
  error?: string;
  message?: string;
  span?: SpanInfo;
  expected?: string[];
  found?: string;
  currentVersion?: number;
}

export class ApiError extends Error {
  constructor(public status: number, public body: ErrorBody) {
    super(body.message ?? `HTTP ${status}`);
  }

  get span(): SpanInfo | undefined {
    return this.body.span;
  }
}

export interface DomainInfo {
  id: string;
  displayName: string;
  valueKind: string;
  params: Record<string, unknown>;
  hasRootPredicate: boolean;
}

export interface RawNode {
  id: string;
  label: string;
  refinement: "AND" | "OR";
  children: RawNode[];
  counter: RawNode | null;
  folded: boolean;
}

export interface RawDocument {
  rootRole: string;
  root: RawNode;
  domains: Array<{
    instanceId: string;
    domainId: string;
    params: Record<string, unknown>;
    valuations: Record<string, unknown>;
  }>;
}

export interface EvaluationView {
  version: number;
  perNode: Record<string, unknown>;
  rootValue: unknown;
  rootDisplay: unknown;
  dependenceWarning: boolean;
  values: Record<string, unknown>;
  provenance: Record<string, string>;
}

export interface LayoutView {
  positions: Record<string, [number, number]>;
  bounds: [number, number, number, number];
}

export interface MappingSummary {
  matched: number;
  inserted: number;
  deleted: number;
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private fetchFn: FetchLike;

  constructor(public base: string, fetchFn?: FetchLike) {
    this.fetchFn = fetchFn ?? ((url, init) => fetch(url, init));
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "Content-Type": "application/json" };
      init.body = typeof body === "string" ? body : JSON.stringify(body);
    }
    const response = await this.fetchFn(this.base + path, init);
    if (!response.ok) {
      const errorBody = (await response.json().catch(() => ({}))) as ErrorBody;
      throw new ApiError(response.status, errorBody);
    }
    return (await response.json()) as T;
  }

  createDocument(adtBody?: string): Promise<{ docId: string; version: number }> {
    return this.request("POST", "/documents", adtBody);
  }

  getDocument(id: string): Promise<{ docId: string; version: number; document: RawDocument }> {
    return this.request("GET", `/documents/${id}`);
  }

  postEdit(
    id: string,
    baseVersion: number,
    op: string,
    args: Record<string, unknown>,
  ): Promise<{ version: number; changedNodeIds: string[] }> {
    return this.request("POST", `/documents/${id}/edits`, { baseVersion, op, args });
  }

  getTerm(id: string): Promise<{ text: string; version: number }> {
    return this.request("GET", `/documents/${id}/term`);
  }

  putTerm(
    id: string,
    baseVersion: number,
    text: string,
  ): Promise<{ version: number; mapping: MappingSummary }> {
    return this.request("PUT", `/documents/${id}/term`, { baseVersion, text });
  }

  getDomains(): Promise<{ domains: DomainInfo[] }> {
    return this.request("GET", "/domains");
  }

  attachDomain(
    id: string,
    baseVersion: number,
    domainId: string,
    params: Record<string, unknown>,
  ): Promise<{ instanceId: string; version: number }> {
    return this.request("POST", `/documents/${id}/domains`, { domainId, params, baseVersion });
  }

  putValuation(
    id: string,
    instanceId: string,
    baseVersion: number,
    player: string,
    label: string,
    value: unknown,
  ): Promise<{ version: number }> {
    return this.request("PUT", `/documents/${id}/valuations/${instanceId}`, {
      baseVersion,
      player,
      label,
      value,
    });
  }

  getEvaluation(id: string, instanceId: string): Promise<EvaluationView> {
    return this.request("GET", `/documents/${id}/evaluation/${instanceId}`);
  }

  getLayout(id: string, fold: boolean): Promise<LayoutView> {
    return this.request("GET", `/documents/${id}/layout?fold=${fold}`);
  }

  async exportBytes(id: string, format: "adt" | "svg" | "tikz", instanceId?: string): Promise<string> {
    const query = instanceId ? `&instanceId=${encodeURIComponent(instanceId)}` : "";
    const response = await this.fetchFn(
      `${this.base}/documents/${id}/export?format=${format}${query}`,
      { method: "GET" },
    );
    if (!response.ok) {
      throw new ApiError(response.status, (await response.json().catch(() => ({}))) as ErrorBody);
    }
    return response.text();
  }
}
