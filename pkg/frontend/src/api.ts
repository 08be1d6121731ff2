import type { LogRecord, SessionConfig, SessionSummary, StepResponse } from "./types";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly error: string,
    public readonly detail: string,
  ) {
    super(`${error}: ${detail}`);
  }
}

export type FetchLike = typeof fetch;

const defaultBase = "";

async function request<T>(
  fetchImpl: FetchLike,
  url: string,
  init?: RequestInit,
): Promise<T> {
  let response: Response;
  try {
    response = await fetchImpl(url, init);
  } catch (err) {
    throw new ApiError(0, "network_error", String(err));
  }
  const body = await response.json().catch(() => ({}));
  if (!response.ok) {
    throw new ApiError(
      response.status,
      body.error ?? "unknown_error",
      body.detail ?? response.statusText,
    );
  }
  return body as T;
}

/** Thin client for the pilot-engine HTTP API. */
export class PilotApi {
  constructor(
    private readonly apiBase: string = defaultBase,
    private readonly fetchImpl: FetchLike = fetch,
  ) {}

  createSession(config: SessionConfig): Promise<{ session_id: string }> {
    return request(this.fetchImpl, `${this.apiBase}/sessions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(config),
    });
  }

  step(sessionId: string, atcoText: string): Promise<StepResponse> {
    return request(this.fetchImpl, `${this.apiBase}/sessions/${sessionId}/step`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ atco_text: atcoText }),
    });
  }

  getLog(sessionId: string): Promise<{ records: LogRecord[] }> {
    return request(this.fetchImpl, `${this.apiBase}/sessions/${sessionId}/log`);
  }

  endSession(sessionId: string): Promise<SessionSummary> {
    return request(this.fetchImpl, `${this.apiBase}/sessions/${sessionId}`, {
      method: "DELETE",
    });
  }

  health(): Promise<{ status: string }> {
    return request(this.fetchImpl, `${this.apiBase}/health`);
  }
}
