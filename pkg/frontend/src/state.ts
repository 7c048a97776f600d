import {
  SessionApi,
  type HierarchyDoc,
  type ProgramDoc,
  type PreviewDoc,
  type TargetSelector,
  type ClusterNode,
} from "./api.js";

export interface ViewState {
  sessionId: string | null;
  hierarchy: HierarchyDoc | null;
  expanded: Set<string>;
  program: ProgramDoc | null;
  preview: PreviewDoc | null;
  busy: boolean;
  error: string | null;
}

export type Listener = (state: ViewState) => void;

function collectIds(nodes: ClusterNode[], into: Set<string>): void {
  for (const node of nodes) {
    into.add(node.id);
    collectIds(node.children, into);
  }
}

/**
 * Holds the UI state for one profiling session.
 *
 * Server responses are stored verbatim: after any mutation the displayed
 * program and preview are exactly what the service returned, so the panels
 * always agree with what an export would contain.
 */
export class SessionController {
  private state: ViewState = {
    sessionId: null,
    hierarchy: null,
    expanded: new Set(),
    program: null,
    preview: null,
    busy: false,
    error: null,
  };
  private listeners: Listener[] = [];

  constructor(private readonly api: SessionApi) {}

  getState(): ViewState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    listener(this.state);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private emit(): void {
    for (const listener of this.listeners) {
      listener(this.state);
    }
  }

  private async mutate(work: () => Promise<void>): Promise<void> {
    if (this.state.busy) {
      throw new Error("another request is still in flight");
    }
    this.state = { ...this.state, busy: true, error: null };
    this.emit();
    try {
      await work();
    } catch (err) {
      this.state = {
        ...this.state,
        error: err instanceof Error ? err.message : String(err),
      };
    } finally {
      this.state = { ...this.state, busy: false };
      this.emit();
    }
  }

  async upload(rows: string[], column?: string): Promise<void> {
    await this.mutate(async () => {
      const hierarchy = await this.api.createSession(rows, column);
      const expanded = new Set<string>();
      collectIds(hierarchy.roots, expanded);
      this.state = {
        ...this.state,
        sessionId: hierarchy.session_id,
        hierarchy,
        expanded,
        program: null,
        preview: null,
      };
    });
  }

  private async applyTarget(selector: TargetSelector): Promise<void> {
    await this.mutate(async () => {
      const sessionId = this.requireSession();
      const program = await this.api.setTarget(sessionId, selector);
      const preview = await this.api.getPreview(sessionId);
      this.state = { ...this.state, program, preview };
    });
  }

  labelCluster(clusterId: string): Promise<void> {
    return this.applyTarget({ cluster_id: clusterId });
  }

  labelPattern(pattern: string): Promise<void> {
    return this.applyTarget({ pattern });
  }

  async repairBranch(source: string, index: number): Promise<void> {
    await this.mutate(async () => {
      const sessionId = this.requireSession();
      const program = await this.api.repair(sessionId, source, index);
      const preview = await this.api.getPreview(sessionId);
      this.state = { ...this.state, program, preview };
    });
  }

  toggle(nodeId: string): void {
    const expanded = new Set(this.state.expanded);
    if (expanded.has(nodeId)) {
      expanded.delete(nodeId);
    } else {
      expanded.add(nodeId);
    }
    this.state = { ...this.state, expanded };
    this.emit();
  }

  private requireSession(): string {
    if (this.state.sessionId === null) {
      throw new Error("no session yet");
    }
    return this.state.sessionId;
  }
}
