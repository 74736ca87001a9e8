// One open document: authoritative state lives on the service, this class
// tracks the current version, runs mutations against it, and refetches the
// dependent views (tree, layout, term, evaluations) after every accepted
// write. A 409 never overwrites silently: the conflict handler decides
// whether to reload-and-retry.

import {
  ApiClient,
  ApiError,
  type DomainInfo,
  type EvaluationView,
  type LayoutView,
  type MappingSummary,
} from "./api.js";
import { decodeTree, type TreeIndex } from "./model.js";

export interface InstanceState {
  instanceId: string;
  domainId: string;
  params: Record<string, unknown>;
  evaluation: EvaluationView;
}

export type ConflictDecision = "retry" | "giveUp";
export type ConflictHandler = (currentVersion: number) => Promise<ConflictDecision>;

export class DocumentSession {
  version = 0;
  tree!: TreeIndex;
  layout!: LayoutView;
  termText = "";
  domains: DomainInfo[] = [];
  instances: InstanceState[] = [];
  selectedInstance: string | null = null;
  conflicts = 0;
  /** Number of committed refreshes; bumps once the views are consistent. */
  refreshes = 0;

  /** Called on 409; the default reloads but does not retry the edit. */
  onConflict: ConflictHandler = async () => "giveUp";

  private listeners = new Set<() => void>();
  private refreshSeq = 0;

  private constructor(public api: ApiClient, public docId: string) {}

  static async create(api: ApiClient, adtBody?: string): Promise<DocumentSession> {
    const created = await api.createDocument(adtBody);
    return DocumentSession.open(api, created.docId);
  }

  static async open(api: ApiClient, docId: string): Promise<DocumentSession> {
    const session = new DocumentSession(api, docId);
    session.domains = (await api.getDomains()).domains;
    await session.refresh();
    return session;
  }

  onChange(listener: () => void): () => void {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) listener();
  }

  /** Pull every view the panels render from; displayed state ends up at the
   * service's current version. A refresh that another one overtook commits
   * nothing, so views never move backwards. */
  async refresh(): Promise<void> {
    const seq = ++this.refreshSeq;
    const snapshot = await this.api.getDocument(this.docId);
    const layout = await this.api.getLayout(this.docId, true);
    const termText = (await this.api.getTerm(this.docId)).text;
    const instances: InstanceState[] = [];
    for (const record of snapshot.document.domains) {
      instances.push({
        instanceId: record.instanceId,
        domainId: record.domainId,
        params: record.params,
        evaluation: await this.api.getEvaluation(this.docId, record.instanceId),
      });
    }
    if (seq !== this.refreshSeq) return; // superseded by a newer refresh
    this.version = snapshot.version;
    this.tree = decodeTree(snapshot.document.root);
    this.layout = layout;
    this.termText = termText;
    this.instances = instances;
    if (this.selectedInstance && !instances.some((i) => i.instanceId === this.selectedInstance)) {
      this.selectedInstance = null;
    }
    if (!this.selectedInstance && instances.length) {
      this.selectedInstance = instances[0].instanceId;
    }
    this.refreshes += 1;
    this.emit();
  }

  instance(instanceId: string): InstanceState | undefined {
    return this.instances.find((i) => i.instanceId === instanceId);
  }

  get selected(): InstanceState | undefined {
    return this.selectedInstance ? this.instance(this.selectedInstance) : undefined;
  }

  selectInstance(instanceId: string | null): void {
    this.selectedInstance = instanceId;
    this.emit();
  }

  private async mutate<T>(run: (baseVersion: number) => Promise<T & { version: number }>): Promise<T> {
    for (;;) {
      try {
        const result = await run(this.version);
        this.version = result.version;
        await this.refresh();
        return result;
      } catch (error) {
        if (error instanceof ApiError && error.status === 409) {
          this.conflicts += 1;
          const current = error.body.currentVersion ?? this.version;
          const decision = await this.onConflict(current);
          await this.refresh(); // never keep stale state around
          if (decision === "retry") continue;
        }
        throw error;
      }
    }
  }

  edit(op: string, args: Record<string, unknown>): Promise<{ changedNodeIds: string[] }> {
    return this.mutate((base) => this.api.postEdit(this.docId, base, op, args));
  }

  applyTerm(text: string): Promise<{ mapping: MappingSummary }> {
    return this.mutate((base) => this.api.putTerm(this.docId, base, text));
  }

  async attachDomain(domainId: string, params: Record<string, unknown>): Promise<string> {
    const result = await this.mutate((base) =>
      this.api.attachDomain(this.docId, base, domainId, params),
    );
    this.selectedInstance = result.instanceId;
    this.emit();
    return result.instanceId;
  }

  setValue(instanceId: string, player: string, label: string, value: unknown): Promise<unknown> {
    return this.mutate((base) =>
      this.api.putValuation(this.docId, instanceId, base, player, label, value),
    );
  }
}
