import type {
  EntryDraft,
  SessionDetailDto,
  SessionDto,
  StageDto,
  SystemDetail,
  SystemSummary,
  TileInfo,
} from './types.js';

/** A failed API call, keeping the server's detail string for inline display. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    detail: string,
  ) {
    super(detail);
    this.name = 'ApiError';
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** Thin typed wrapper over the proof API; the fetch function is injectable
 * so tests can run without a server. */
export class ApiClient {
  constructor(
    private readonly base: string = '',
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(this.base + path, init);
    } catch (cause) {
      throw new ApiError(0, `cannot reach the prover: ${String(cause)}`);
    }
    if (!response.ok) {
      let detail = `${response.status} ${response.statusText}`;
      try {
        const body = (await response.json()) as { detail?: unknown };
        if (typeof body.detail === 'string') detail = body.detail;
        else if (body.detail !== undefined) detail = JSON.stringify(body.detail);
      } catch {
        // non-JSON error body; keep the status line
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  private post<T>(path: string, body?: unknown): Promise<T> {
    return this.request<T>(path, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
  }

  listSystems(): Promise<SystemSummary[]> {
    return this.request('/api/systems');
  }

  getSystem(id: number): Promise<SystemDetail> {
    return this.request(`/api/systems/${id}`);
  }

  listTiles(): Promise<TileInfo[]> {
    return this.request('/api/tiles');
  }

  createSession(systemId: number): Promise<SessionDto> {
    return this.post('/api/sessions', { systemId });
  }

  getSession(sessionId: string): Promise<SessionDetailDto> {
    return this.request(`/api/sessions/${sessionId}`);
  }

  analyze(sessionId: string, entries: EntryDraft[]): Promise<StageDto> {
    return this.post(`/api/sessions/${sessionId}/analyze`, {
      entries: entries.map((e) => ({
        tileId: e.tileId,
        weight: e.weight,
        class: e.klass,
      })),
    });
  }

  undo(sessionId: string): Promise<SessionDto> {
    return this.post(`/api/sessions/${sessionId}/undo`);
  }
}
