/** Wire types mirroring the server's canonical JSON schema (v1). */

export type RelationType = 'sequence' | 'inclusion' | 'association' | 'similarity';
export type ConceptKind = 'concept' | 'example' | 'test' | 'proposition';
export type PropositionSource = 'transcript_only' | 'slide_assisted' | 'user_edited';

export interface Proposition {
  id: string;
  title: string;
  start_ms: number;
  end_ms: number;
  color_index: number;
  source: PropositionSource;
}

export interface Concept {
  id: string;
  proposition_id: string;
  label: string;
  kind: ConceptKind;
  spans: [number, number][];
  parent_id: string | null;
  stems: string[];
  importance: number;
  style_durations: Record<string, number>;
  sub_distribution: [string, number, number][];
}

export interface Relation {
  type: RelationType;
  src_id: string;
  dst_id: string;
  evidence: Record<string, unknown>;
}

export interface ConceptMap {
  schema_version: number;
  video_id: string;
  duration_ms: number;
  propositions: Proposition[];
  concepts: Concept[];
  relations: Relation[];
  provenance: { pipeline_version: string; config_hash: string; llm_used: boolean };
  revision?: number;
}

export interface SunburstArc {
  kind: 'proposition' | 'concept' | 'gap';
  id: string | null;
  parent_id: string | null;
  label: string;
  start_ms: number;
  end_ms: number;
  start_angle: number;
  angle: number;
  color_index: number | null;
  importance_class: number | null;
  radius_class: number | null;
}

export interface NavigationBar {
  concept_id: string;
  label: string;
  depth: number;
  start_ms: number;
  end_ms: number;
  color_index: number;
  kind: ConceptKind;
}

export interface RiverSegment {
  style: string;
  start_ms: number;
  end_ms: number;
}

export interface SparklineBins {
  bin_ms: number;
  values: number[];
}

export interface NavigationPayload {
  video_id: string;
  duration_ms: number;
  sunburst: { rings: SunburstArc[][] };
  bars: NavigationBar[];
  river: RiverSegment[];
  sparklines: Record<string, SparklineBins>;
  revision?: number;
}

export interface EditOp {
  op: string;
  payload: Record<string, unknown>;
  author?: string;
  timestamp_ms?: number;
  expected_revision: number;
}

export interface ApiError {
  code: string;
  message: string;
  path: string;
}
