import { ApiClient, ApiError } from './api.js';
import { buildBatchScript, buildTranscriptJson } from './export.js';
import type {
  EntryDraft,
  MorphismClassLetter,
  SessionDto,
  StageDto,
  SystemDetail,
  SystemSummary,
  TileInfo,
} from './types.js';

export type View = 'catalogue' | 'proof';

export interface ExplorerState {
  view: View;
  /** True while a request is in flight; every stage waits for the server. */
  busy: boolean;
  error: string | null;
  systems: SystemSummary[];
  tiles: TileInfo[];
  system: SystemDetail | null;
  session: SessionDto | null;
  stages: StageDto[];
  draft: EntryDraft[];
}

type Listener = (state: ExplorerState) => void;

/** All client state and the transitions between catalogue and proof mode.
 *
 * The store never computes analysis numbers: stages are stored exactly as
 * the server returned them and the view interpolates their fields.
 */
export class ExplorerStore {
  private listeners: Listener[] = [];

  readonly state: ExplorerState = {
    view: 'catalogue',
    busy: false,
    error: null,
    systems: [],
    tiles: [],
    system: null,
    session: null,
    stages: [],
    draft: [],
  };

  constructor(private readonly api: ApiClient) {}

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private emit(): void {
    for (const listener of this.listeners) listener(this.state);
  }

  private async guarded(action: () => Promise<void>): Promise<void> {
    if (this.state.busy) return;
    this.state.busy = true;
    this.state.error = null;
    this.emit();
    try {
      await action();
    } catch (failure) {
      this.state.error =
        failure instanceof ApiError ? failure.message : `unexpected error: ${String(failure)}`;
    } finally {
      this.state.busy = false;
      this.emit();
    }
  }

  loadCatalogue(): Promise<void> {
    return this.guarded(async () => {
      const [systems, tiles] = await Promise.all([
        this.api.listSystems(),
        this.api.listTiles(),
      ]);
      this.state.systems = systems;
      this.state.tiles = tiles;
    });
  }

  openSystem(systemId: number): Promise<void> {
    return this.guarded(async () => {
      const [system, session] = await Promise.all([
        this.api.getSystem(systemId),
        this.api.createSession(systemId),
      ]);
      this.state.system = system;
      this.state.session = session;
      this.state.stages = [];
      this.state.view = 'proof';
      const firstTile = this.state.tiles[0];
      this.state.draft = firstTile ? [{ tileId: firstTile.id, weight: 1, klass: 'm' }] : [];
    });
  }

  closeProof(): void {
    this.state.view = 'catalogue';
    this.state.system = null;
    this.state.session = null;
    this.state.stages = [];
    this.state.draft = [];
    this.state.error = null;
    this.emit();
  }

  addDraftRow(): void {
    const firstTile = this.state.tiles[0];
    if (!firstTile) return;
    this.state.draft.push({ tileId: firstTile.id, weight: 1, klass: 'm' });
    this.emit();
  }

  removeDraftRow(index: number): void {
    if (index < 0 || index >= this.state.draft.length) return;
    this.state.draft.splice(index, 1);
    this.emit();
  }

  setDraftTile(index: number, tileId: number): void {
    const row = this.state.draft[index];
    if (!row || !this.state.tiles.some((t) => t.id === tileId)) return;
    row.tileId = tileId;
    this.emit();
  }

  /** Weights must be positive integers; anything else is rejected at the
   * input and the previous value stands. */
  setDraftWeight(index: number, raw: string | number): boolean {
    const row = this.state.draft[index];
    if (!row) return false;
    const value = typeof raw === 'number' ? raw : Number(raw.trim());
    if (!Number.isInteger(value) || value < 1) {
      this.emit(); // let the view reset the input box
      return false;
    }
    row.weight = value;
    this.emit();
    return true;
  }

  setDraftClass(index: number, klass: string): void {
    const row = this.state.draft[index];
    if (!row || !['h', 'm', 'r'].includes(klass)) return;
    row.klass = klass as MorphismClassLetter;
    this.emit();
  }

  runAnalysis(): Promise<void> {
    return this.guarded(async () => {
      const session = this.state.session;
      if (!session) throw new ApiError(0, 'no open session');
      if (this.state.draft.length === 0) throw new ApiError(0, 'add at least one tile');
      const stage = await this.api.analyze(session.sessionId, this.state.draft);
      this.state.stages.push(stage);
      session.remaining = [...stage.remaining];
      session.terminated = stage.terminated;
      session.stageCount = this.state.stages.length;
    });
  }

  undoStage(): Promise<void> {
    return this.guarded(async () => {
      const session = this.state.session;
      if (!session || this.state.stages.length === 0) return;
      const summary = await this.api.undo(session.sessionId);
      this.state.stages.pop();
      session.remaining = [...summary.remaining];
      session.terminated = summary.terminated;
      session.stageCount = summary.stageCount;
    });
  }

  get terminated(): boolean {
    return this.state.session?.terminated ?? false;
  }

  get canExport(): boolean {
    return this.state.stages.length > 0;
  }

  exportScript(): string {
    const { session, system } = this.state;
    if (!session || !system || !this.canExport) {
      throw new Error('nothing to export');
    }
    return buildBatchScript(system.id, system.name, this.state.stages);
  }

  exportTranscript(): string {
    const session = this.state.session;
    if (!session || !this.canExport) throw new Error('nothing to export');
    return buildTranscriptJson(session, this.state.stages);
  }
}

export type { SessionDto, StageDto, SystemDetail, SystemSummary, TileInfo };
