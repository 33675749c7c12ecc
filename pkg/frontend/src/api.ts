/**
 * Client for the compile service. The playground talks to exactly two
 * endpoints, /compile and /health, and never anywhere else.
 */

export type Mode = "check" | "draw" | "animate";

export interface Diagnostic {
  severity: "error" | "warning" | "info";
  code: string;
  message: string;
  line: number;
  col: number;
  suggestion?: string;
}

export interface CompileRequest {
  source: string;
  mode: Mode;
  fuel?: number;
  fps?: number;
  duration?: number;
}

export interface CompileResponse {
  ok: boolean;
  diagnostics: Diagnostic[];
  svg?: string;
  frames?: string[];
  lint?: unknown;
}

export interface HealthResponse {
  status: string;
  version: string;
}

/** Posts compile requests; a new run cancels the one still in flight. */
export class CompileClient {
  private inflight: AbortController | null = null;

  constructor(private readonly baseUrl: string = "") {}

  async compile(request: CompileRequest): Promise<CompileResponse> {
    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;
    try {
      const response = await fetch(this.baseUrl + "/compile", {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(request),
        signal: controller.signal,
      });
      if (!response.ok) {
        throw new Error(`the service answered ${response.status}`);
      }
      return (await response.json()) as CompileResponse;
    } finally {
      if (this.inflight === controller) {
        this.inflight = null;
      }
    }
  }

  async health(): Promise<HealthResponse> {
    const response = await fetch(this.baseUrl + "/health");
    if (!response.ok) {
      throw new Error(`the service answered ${response.status}`);
    }
    return (await response.json()) as HealthResponse;
  }
}
