/** Typed client for the monitoring service HTTP surface.
 *
 * The dashboard holds no business logic: every number it shows comes out of
 * one of these calls, never from local recomputation.
 */

export interface TaskOutcome {
  task_id: string;
  status: "pass" | "fail" | "unsupported" | "error";
  detail: string;
  evaluated_at: number;
  snapshot_hash: string;
}

export interface CheckpointCell {
  completion: number;
  outcomes: TaskOutcome[];
}

export interface ProgressPayload {
  t_ms: number | null;
  checkpoints: string[];
  students: Record<string, Record<string, CheckpointCell>>;
}

export interface SnapshotPayload {
  student_id: string;
  t_ms: number | null;
  files: Record<string, string>;
  content_hash: string | null;
  active_file: { file_path: string; t_ms: number } | null;
}

export interface StatsPayload {
  class_size: number;
  t_ms: number | null;
  task_pass_counts: Record<string, number>;
  checkpoint_summary: Record<string, { min: number; median: number; max: number }>;
}

export interface DistributionPayload {
  kind: "distribution";
  selector: string;
  property: string;
  timestamp_ms: number | null;
  buckets: Record<string, string[]>;
}

export interface ClustersPayload {
  kind: "clusters";
  selector: string;
  timestamp_ms: number | null;
  pre_interaction: boolean;
  clusters: { digest: string; representative: string | null; members: string[] }[];
}

export type InspectPayload = DistributionPayload | ClustersPayload;

export interface VerificationReport {
  checkpoint_id: string;
  passed: boolean;
  tasks: { task_id: string; outcome: string; detail: string }[];
}

export interface SuggestionPayload {
  interaction: unknown[];
  assertions: Record<string, unknown>[];
  provider: string;
  low_confidence: boolean;
}

export interface IngestVerdict {
  accepted: boolean;
  error?: string;
  detail?: string;
}

export interface Update {
  kind: "StudentEdited" | "TickReady" | "StatsChanged";
  [key: string]: unknown;
}

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(`HTTP ${status}: ${detail}`);
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly token?: string,
  ) {}

  private headers(): Record<string, string> {
    const headers: Record<string, string> = { "content-type": "application/json" };
    if (this.token) headers["X-Spark-Token"] = this.token;
    return headers;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      method,
      headers: this.headers(),
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      throw new ApiError(response.status, await response.text());
    }
    return (await response.json()) as T;
  }

  postEvents(events: Record<string, unknown>[]): Promise<IngestVerdict[]> {
    return this.request("POST", "/events", events);
  }

  progress(t?: number): Promise<ProgressPayload> {
    const query = t === undefined ? "" : `?t=${t}`;
    return this.request("GET", `/progress${query}`);
  }

  snapshot(studentId: string, t?: number): Promise<SnapshotPayload> {
    const query = t === undefined ? "" : `?t=${t}`;
    return this.request("GET", `/students/${encodeURIComponent(studentId)}/snapshot${query}`);
  }

  stats(): Promise<StatsPayload> {
    return this.request("GET", "/stats");
  }

  inspect(taskId: string, selector: string, property?: string): Promise<InspectPayload> {
    const body: Record<string, unknown> = { task_id: taskId, selector };
    if (property !== undefined) body.property = property;
    return this.request("POST", "/inspect", body);
  }

  verify(checkpointId: string): Promise<VerificationReport> {
    return this.request("POST", "/checkpoints/verify", { checkpoint_id: checkpointId });
  }

  suggest(description: string): Promise<SuggestionPayload> {
    return this.request("POST", "/checkpoints/suggest", { description });
  }

  startReplay(logPath: string, speed: number | "max"): Promise<{ started: boolean }> {
    return this.request("POST", "/replay", { log_path: logPath, speed });
  }

  replayStatus(): Promise<{ active: boolean; cursor_ms: number | null }> {
    return this.request("GET", "/replay/status");
  }

  /** Yields updates from the NDJSON push channel until aborted. */
  async *updates(signal?: AbortSignal): AsyncGenerator<Update> {
    const response = await fetch(this.baseUrl + "/updates", {
      headers: this.headers(),
      signal,
    });
    if (!response.ok || response.body === null) {
      throw new ApiError(response.status, "update stream unavailable");
    }
    const reader = response.body.getReader();
    const decoder = new TextDecoder();
    let pending = "";
    for (;;) {
      const { done, value } = await reader.read();
      if (done) return;
      pending += decoder.decode(value, { stream: true });
      let newline;
      while ((newline = pending.indexOf("\n")) >= 0) {
        const line = pending.slice(0, newline).trim();
        pending = pending.slice(newline + 1);
        if (line.length > 0) yield JSON.parse(line) as Update;
      }
    }
  }
}
