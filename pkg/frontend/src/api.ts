import type {
  CreateSessionResponse,
  GraspDict,
  MessageResponse,
  SessionView,
  StepResult,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let code = "http_error";
  let message = `${response.status} ${response.statusText}`;
  try {
    const body = await response.json();
    const detail = body.detail ?? body;
    if (typeof detail === "object" && detail !== null) {
      code = detail.code ?? code;
      message = detail.message ?? JSON.stringify(detail);
    } else if (typeof detail === "string") {
      message = detail;
    }
  } catch {
    // non-JSON error body; keep the status line
  }
  return new ApiError(response.status, code, message);
}

/** Thin typed client over the session service; the UI never recomputes what
 * the server already reports. */
export class PartGraspClient {
  constructor(
    readonly baseUrl: string,
    private readonly fetchImpl: typeof fetch = fetch,
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    if (!response.ok) {
      throw await parseError(response);
    }
    return (await response.json()) as T;
  }

  private post<T>(path: string, body?: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
  }

  health(): Promise<{ status: string }> {
    return this.request("/healthz");
  }

  createSession(scene: unknown, seed?: number): Promise<CreateSessionResponse> {
    return this.post("/sessions", seed === undefined ? { scene } : { scene, seed });
  }

  getSession(id: string): Promise<SessionView> {
    return this.request(`/sessions/${id}`);
  }

  postMessage(id: string, text: string): Promise<MessageResponse> {
    return this.post(`/sessions/${id}/messages`, { text });
  }

  nextStep(id: string): Promise<StepResult> {
    return this.post(`/sessions/${id}/steps/next`);
  }

  grasps(id: string, step: number, top?: number): Promise<GraspDict[]> {
    const query = top === undefined ? "" : `?top=${top}`;
    return this.request(`/sessions/${id}/grasps/${step}${query}`);
  }

  frameUrl(id: string): string {
    return `${this.baseUrl}/sessions/${id}/frame`;
  }

  maskUrl(id: string, step: number, kind: "target" | "expanded" = "target"): string {
    return `${this.baseUrl}/sessions/${id}/masks/${step}?kind=${kind}`;
  }
}
