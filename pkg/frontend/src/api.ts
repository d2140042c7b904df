/** Thin client for the session API; all behavior lives on the server. */

import { Diagnostic, Snapshot, isSnapshot } from "./types.js";

export class ApiError extends Error {
  constructor(
    message: string,
    public readonly status: number,
    public readonly diagnostics: Diagnostic[] = [],
  ) {
    super(message);
  }
}

async function parseError(res: Response): Promise<ApiError> {
  let detail = res.statusText;
  let diagnostics: Diagnostic[] = [];
  try {
    const body = await res.json();
    if (Array.isArray(body.diagnostics)) {
      diagnostics = body.diagnostics as Diagnostic[];
      detail = "model rejected";
    } else if (typeof body.detail === "string") {
      detail = body.detail;
    }
  } catch {
    /* non-JSON error body; keep the status text */
  }
  return new ApiError(detail, res.status, diagnostics);
}

async function snapshotFrom(res: Response): Promise<Snapshot> {
  if (!res.ok) throw await parseError(res);
  const body = await res.json();
  if (!isSnapshot(body)) {
    throw new ApiError("malformed snapshot from server", res.status);
  }
  return body;
}

export class ApiClient {
  constructor(private readonly base: string = "") {}

  async defaultModel(): Promise<{ name: string; source: string } | null> {
    const res = await fetch(`${this.base}/api/default-model`);
    if (res.status === 404) return null;
    if (!res.ok) throw await parseError(res);
    return res.json();
  }

  async createSession(source: string): Promise<Snapshot> {
    const res = await fetch(`${this.base}/api/sessions`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ source }),
    });
    return snapshotFrom(res);
  }

  async getSession(id: string): Promise<Snapshot> {
    return snapshotFrom(await fetch(`${this.base}/api/sessions/${id}`));
  }

  async deleteSession(id: string): Promise<void> {
    await fetch(`${this.base}/api/sessions/${id}`, { method: "DELETE" });
  }

  async fire(id: string, trigger: string): Promise<Snapshot> {
    const res = await fetch(`${this.base}/api/sessions/${id}/fire`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ trigger }),
    });
    return snapshotFrom(res);
  }

  async reset(id: string): Promise<Snapshot> {
    const res = await fetch(`${this.base}/api/sessions/${id}/reset`, {
      method: "POST",
    });
    return snapshotFrom(res);
  }
}
