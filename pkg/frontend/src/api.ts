// Typed client for the topicgrids read-only API. The UI never computes risk
// or layout values; everything rendered comes verbatim from these payloads.

export interface WindowRange {
  start: string;
  end: string;
}

export interface GridCell {
  k: number;
  col: number;
  row: number;
  label: string;
  current: number;
  self_history: number;
  self_risk: number;
  peer_history: number;
  peer_risk: number;
}

export interface TopicGridSet {
  user: string;
  window: WindowRange;
  h: number;
  cells: GridCell[];
  totals: { self_risk: number; peer_risk: number };
}

export interface TopicWord {
  word: string;
  p: number;
}

export interface TopicInfo {
  k: number;
  label: string;
  col: number;
  row: number;
  words: TopicWord[];
}

export interface AccessEntry {
  ts: string;
  user: string;
  action: string;
  path: string;
  meta: string;
  group: string | null;
}

export interface AccessPage {
  k: number;
  total: number;
  offset: number;
  limit: number;
  entries: AccessEntry[];
}

export interface UserInfo {
  id: string;
  group: string | null;
  entries: number;
}

export interface SnapshotMeta {
  format_version: number;
  k: number;
  h: number;
  window: WindowRange;
  benchmark_start: string;
  entry_count: number;
  vocabulary_size: number;
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

type FetchLike = (url: string) => Promise<Response>;

export class ApiClient {
  private topicCache = new Map<number, Promise<TopicInfo>>();

  constructor(
    private base: string = "",
    private fetchFn: FetchLike = (url) => fetch(url),
  ) {}

  private async get<T>(path: string): Promise<T> {
    const response = await this.fetchFn(this.base + path);
    if (!response.ok) {
      let message = `HTTP ${response.status}`;
      try {
        const body = (await response.json()) as { error?: string };
        if (body.error) message = body.error;
      } catch {
        // non-JSON error body; keep the status message
      }
      throw new ApiError(response.status, message);
    }
    return (await response.json()) as T;
  }

  users(): Promise<{ users: UserInfo[] }> {
    return this.get("/api/users");
  }

  meta(): Promise<SnapshotMeta> {
    return this.get("/api/meta");
  }

  grids(user: string, window?: WindowRange): Promise<TopicGridSet> {
    const query = window
      ? `?window=${encodeURIComponent(`${window.start}/${window.end}`)}`
      : "";
    return this.get(`/api/users/${encodeURIComponent(user)}/grids${query}`);
  }

  /** Topic details are cached for the whole session: hovering the same cell
   *  again (even while the first request is still in flight) never issues a
   *  second request. */
  topic(k: number): Promise<TopicInfo> {
    let cached = this.topicCache.get(k);
    if (!cached) {
      cached = this.get<TopicInfo>(`/api/topics/${k}`);
      cached.catch(() => this.topicCache.delete(k)); // do not cache failures
      this.topicCache.set(k, cached);
    }
    return cached;
  }

  accesses(
    k: number,
    opts: { user?: string; scope?: string; offset?: number; limit?: number } = {},
  ): Promise<AccessPage> {
    const params = new URLSearchParams();
    if (opts.user !== undefined) params.set("user", opts.user);
    if (opts.scope !== undefined) params.set("scope", opts.scope);
    if (opts.offset !== undefined) params.set("offset", String(opts.offset));
    if (opts.limit !== undefined) params.set("limit", String(opts.limit));
    const query = params.toString();
    return this.get(`/api/topics/${k}/accesses${query ? "?" + query : ""}`);
  }
}

/** Last-write-wins guard for a view slot: responses that arrive after a newer
 *  request was issued resolve to undefined instead of clobbering the view. */
export class RequestSlot {
  private seq = 0;

  async run<T>(fn: () => Promise<T>): Promise<T | undefined> {
    const ticket = ++this.seq;
    const value = await fn();
    return ticket === this.seq ? value : undefined;
  }

  /** True when no request newer than the caller's has started. */
  isCurrent(ticket: number): boolean {
    return ticket === this.seq;
  }

  ticket(): number {
    return ++this.seq;
  }
}
