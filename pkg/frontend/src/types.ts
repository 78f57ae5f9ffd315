/** JSON payload shapes of the proof API, mirrored field for field.
 *
 * Every counter shown anywhere in the UI comes straight out of these
 * objects; the client never derives numbers of its own.
 */

export interface VertexDto {
  id: string;
  label: string;
}

export interface EdgeDto {
  id: string;
  src: string;
  tgt: string;
  label: string;
}

export interface GraphDto {
  vertices: VertexDto[];
  edges: EdgeDto[];
}

/** Vertex-id and edge-id maps of a graph morphism. */
export interface MorphismDto {
  vertices: Record<string, string>;
  edges: Record<string, string>;
}

export type RuleGraphName = 'L' | 'K' | 'R' | 'LPrime' | 'KPrime' | 'RPrime';
export type RuleMorphismName = 'l' | 'r' | 'tL' | 'tK' | 'tR' | 'lPrime' | 'rPrime';

export interface RuleDto {
  name: string;
  graphs: Record<RuleGraphName, GraphDto>;
  morphisms: Record<RuleMorphismName, MorphismDto>;
}

export interface SystemSummary {
  id: number;
  name: string;
  ruleCount: number;
}

export interface SystemDetail {
  id: number;
  name: string;
  source: string;
  rules: RuleDto[];
}

export interface TileInfo {
  id: number;
  name: string;
  source: string;
  graph: GraphDto;
}

export type MorphismClassLetter = 'h' | 'm' | 'r';

export interface TileReportDto {
  tile: string;
  weight: number;
  class: string;
  homIntoR1: number;
  valid: number;
  isoInR: number;
  nonisoInR: number;
  waysToSlide: number;
  deltaSize: number;
  graph: GraphDto;
}

export type Verdict = 'Decreasing' | 'NonIncreasing' | 'Unknown';

export interface ReportDto {
  rule: string;
  status: Verdict;
  slideSuccessful: boolean;
  slideFailure: string | null;
  deltaWeight: number;
  rWeight: number;
  notes: string[];
  tiles: TileReportDto[];
}

export interface StageEntryDto {
  tileId: number;
  tile: string;
  weight: number;
  class: string;
}

export interface StageDto {
  entries: StageEntryDto[];
  reports: ReportDto[];
  pruneApplied: boolean;
  pruned: string[];
  remaining: string[];
  terminated: boolean;
}

export interface SessionDto {
  sessionId: string;
  systemId: number;
  system: string;
  remaining: string[];
  terminated: boolean;
  stageCount: number;
}

export interface SessionDetailDto extends SessionDto {
  created: number;
  updated: number;
  stages: StageDto[];
}

/** One row of the tile palette before it is posted to /analyze. */
export interface EntryDraft {
  tileId: number;
  weight: number;
  klass: MorphismClassLetter;
}
