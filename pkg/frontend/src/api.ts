// Thin client for the session HTTP API. Every number the UI shows comes
// out of these responses; no envelope math happens in the browser.

export interface SessionConfig {
  p_star: number;
  lambda: number;
  alpha: number;
  a?: number;
}

export interface SessionData {
  ids: string[];
  p: number[];
  x?: unknown[] | null;
}

export interface EnvelopePoint {
  k: number;
  size: number;
  v_hat: number;
  v_bar: number;
  fdp_bar_raw: number;
  fdp_bar: number;
}

export interface RemainingEntry {
  id: string;
  x: unknown;
  g_p: number;
}

export interface PrefixEntry {
  id: string;
  p: number;
  included: boolean;
}

export interface SessionState {
  config: { p_star: number; lam: number; alpha: number; a: number };
  constant: { c: number; alpha: number; a: number; family: string };
  remaining: RemainingEntry[];
  prefix: PrefixEntry[];
  envelope: EnvelopePoint[];
  log: unknown[];
}

export interface SelectResponse {
  id: string;
  p_unmasked: number;
  included: boolean;
  envelope_point: EnvelopePoint;
  remaining: string[];
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function raise(res: Response): Promise<never> {
  let detail = `${res.status} ${res.statusText}`;
  try {
    const body = await res.json();
    if (body && typeof body.detail === "string") detail = body.detail;
  } catch {
    // non-JSON error body; keep the status line
  }
  throw new ApiError(res.status, detail);
}

export class ApiClient {
  constructor(private base: string = "") {}

  private async getJson<T>(path: string): Promise<T> {
    const res = await fetch(this.base + path);
    if (!res.ok) await raise(res);
    return (await res.json()) as T;
  }

  private async postJson<T>(path: string, body: unknown): Promise<T> {
    const res = await fetch(this.base + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!res.ok) await raise(res);
    return (await res.json()) as T;
  }

  async createSession(config: SessionConfig, data: SessionData): Promise<string> {
    const out = await this.postJson<{ session_id: string }>("/sessions", {
      config,
      data,
    });
    return out.session_id;
  }

  getState(sessionId: string): Promise<SessionState> {
    return this.getJson(`/sessions/${sessionId}`);
  }

  select(sessionId: string, hypId: string): Promise<SelectResponse> {
    return this.postJson(`/sessions/${sessionId}/select`, { id: hypId });
  }

  async envelopeCsv(sessionId: string): Promise<string> {
    const res = await fetch(`${this.base}/sessions/${sessionId}/envelope.csv`);
    if (!res.ok) await raise(res);
    return res.text();
  }
}
