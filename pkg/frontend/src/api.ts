// Typed client for the atcg HTTP bridge. The bridge is the single source of
// truth: every marking the UI shows comes from one of these responses.

export interface PlacePayload {
  id: string;
  name: string;
  capacity: number;
  position: [number, number];
}

export interface TransitionPayload {
  id: string;
  name: string;
  guard: string | null;
  silent: boolean;
  position: [number, number];
}

export interface ArcPayload {
  id: string;
  source: string;
  target: string;
  inscription: string[];
}

export interface NetPayload {
  id: string;
  places: PlacePayload[];
  transitions: TransitionPayload[];
  arcs: ArcPayload[];
}

/** place id -> token strings ("Default" or "(UID)"). Empty places omitted. */
export type Marking = Record<string, string[]>;

export interface FiringEntry {
  index: number;
  transition: string;
  name: string;
  silent: boolean;
  binding: Record<string, string>;
  label: string;
}

export interface StatePayload {
  marking: Marking;
  enabled: FiringEntry[];
  history: FiringEntry[];
}

export interface TreeVertex {
  marking: Marking;
  leaf: string | null;
  children: TreeVertex[];
  // absent on the root vertex
  transition?: string;
  name?: string;
  silent?: boolean;
  binding?: Record<string, string>;
  label?: string;
}

export interface TreePayload {
  root: TreeVertex;
  truncated: boolean;
}

export class BridgeError extends Error {
  readonly status: number;

  constructor(status: number, code: string) {
    super(`bridge error ${status}: ${code}`);
    this.status = status;
    this.code = code;
  }

  readonly code: string;
}

export class BridgeClient {
  private readonly base: string;
  private readonly session: string;
  // Mutations are serialized: each request chains on the previous one, so at
  // most one fire/reset is in flight at a time.
  private chain: Promise<unknown> = Promise.resolve();

  constructor(base = "", session = "default") {
    this.base = base.replace(/\/$/, "");
    this.session = session;
  }

  private url(path: string, params: Record<string, string> = {}): string {
    const q = new URLSearchParams({ session: this.session, ...params });
    return `${this.base}${path}?${q.toString()}`;
  }

  private async request<T>(path: string, params: Record<string, string>,
                           init?: RequestInit): Promise<T> {
    const res = await fetch(this.url(path, params), init);
    const body = await res.json();
    if (!res.ok) {
      throw new BridgeError(res.status, (body && body.error) || "unknown");
    }
    return body as T;
  }

  net(): Promise<NetPayload> {
    return this.request<NetPayload>("/net", {});
  }

  state(): Promise<StatePayload> {
    return this.request<StatePayload>("/state", {});
  }

  tree(maxDepth?: number): Promise<TreePayload> {
    const params: Record<string, string> = {};
    if (maxDepth !== undefined) params.maxDepth = String(maxDepth);
    return this.request<TreePayload>("/tree", params);
  }

  tests(all = false): Promise<{ text: string }> {
    return this.request<{ text: string }>("/tests", all ? { all: "1" } : {});
  }

  private mutate(path: string, body: unknown): Promise<StatePayload> {
    const next = this.chain.then(() =>
      this.request<StatePayload>(path, {}, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(body),
      }));
    // Keep the chain alive even when a mutation fails.
    this.chain = next.catch(() => undefined);
    return next;
  }

  fire(index: number): Promise<StatePayload> {
    return this.mutate("/fire", { index });
  }

  reset(): Promise<StatePayload> {
    return this.mutate("/reset", {});
  }
}

/** True when two bindings map the same variables to the same values. */
export function sameBinding(a: Record<string, string>,
                            b: Record<string, string>): boolean {
  const ka = Object.keys(a).sort();
  const kb = Object.keys(b).sort();
  return ka.length === kb.length &&
    ka.every((k, i) => k === kb[i] && a[k] === b[k]);
}
