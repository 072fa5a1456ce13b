import type {
  ChoiceBody,
  ChoiceResult,
  ModelJson,
  ParseProblems,
  RulesJson,
  SessionCreated,
  VariantsJson,
} from "./types.js";

/** HTTP failure carrying the service's status code and `detail` payload. */
export class ServiceError extends Error {
  constructor(
    readonly status: number,
    readonly detail: unknown,
  ) {
    super(describeDetail(status, detail));
    this.name = "ServiceError";
  }
}

function describeDetail(status: number, detail: unknown): string {
  if (typeof detail === "string") return detail;
  if (detail && typeof detail === "object" && "message" in detail) {
    const parsed = detail as ParseProblems;
    const rows = (parsed.problems ?? [])
      .map((p) => `row ${p.row}: ${p.message}`)
      .join("; ");
    return rows ? `${parsed.message} (${rows})` : parsed.message;
  }
  return `service returned ${status}`;
}

/** Thin typed wrapper over the service endpoints; every call is one request. */
export class ApiClient {
  constructor(
    readonly baseUrl: string,
    private readonly fetchImpl: typeof fetch = fetch,
  ) {}

  async createSession(csv: string, estimator = "mean"): Promise<SessionCreated> {
    return this.request(
      "POST",
      `/sessions?durations=${encodeURIComponent(estimator)}`,
      csv,
      "text/csv",
    );
  }

  async getModel(sessionId: string, gamma: number): Promise<ModelJson> {
    return this.request("GET", `/sessions/${sessionId}/model?gamma=${gamma}`);
  }

  async getRules(sessionId: string): Promise<RulesJson> {
    return this.request("GET", `/sessions/${sessionId}/rules`);
  }

  async getVariants(sessionId: string, limit?: number): Promise<VariantsJson> {
    const query = limit === undefined ? "" : `?limit=${limit}`;
    return this.request("GET", `/sessions/${sessionId}/variants${query}`);
  }

  async postChoice(
    sessionId: string,
    selections: Record<string, number>,
    unrolls: Record<string, number> = {},
  ): Promise<ChoiceResult> {
    const body: ChoiceBody = { selections, unrolls };
    return this.request(
      "POST",
      `/sessions/${sessionId}/choice`,
      JSON.stringify(body),
      "application/json",
    );
  }

  async getDot(sessionId: string): Promise<string> {
    const response = await this.fetchImpl(
      `${this.baseUrl}/sessions/${sessionId}/export/dot`,
    );
    if (!response.ok) {
      throw new ServiceError(response.status, await response.text());
    }
    return response.text();
  }

  private async request<T>(
    method: string,
    path: string,
    body?: string,
    contentType?: string,
  ): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method,
      body,
      headers: contentType ? { "Content-Type": contentType } : undefined,
    });
    const text = await response.text();
    let payload: unknown = null;
    try {
      payload = text ? JSON.parse(text) : null;
    } catch {
      payload = text;
    }
    if (!response.ok) {
      const detail =
        payload && typeof payload === "object" && "detail" in payload
          ? (payload as { detail: unknown }).detail
          : payload;
      throw new ServiceError(response.status, detail);
    }
    return payload as T;
  }
}
