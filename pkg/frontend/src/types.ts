/** Shapes of the gateway's JSON payloads. */

export interface TemporalRuler {
  container_id: string;
  start_ms: number;
  end_ms: number | null;
}

export interface TemporalSegment {
  type: "temporal";
  signal_id: string;
  start_ms: number;
  end_ms: number;
}

export interface TextIndex {
  type: "text";
  signal_id: string;
  start_char: number;
  stop_char: number;
}

export interface BoundingBox {
  type: "bbox";
  signal_id: string;
  x0: number;
  y0: number;
  x1: number;
  y1: number;
}

export type Segment = TemporalSegment | TextIndex | BoundingBox;

export interface Annotation {
  type: string;
  value: unknown;
  source: string;
  timestamp: number;
}

export interface Mention {
  id: string;
  segments: Segment[];
  annotations: Annotation[];
}

export interface Signal {
  id: string;
  modality: "text" | "audio" | "image" | "rdf";
  time: TemporalRuler;
  source: string;
  text: string | null;
  file: string | null;
  data: Record<string, unknown> | null;
  dims: [number, number] | null;
  mentions: Mention[];
}

export interface ScenarioMeta {
  id: string;
  ruler: TemporalRuler;
  agent: string;
  speaker: string;
  context_id: string;
}

export interface Bundle {
  scenario: ScenarioMeta;
  text: Signal[];
  audio: Signal[];
  image: Signal[];
  rdf: Signal[];
}

/** RDF literals come back as {value, datatype}; IRIs as plain strings. */
export type Term = string | { value: string; datatype: string | null };

export type Binding = Record<string, Term>;

export interface ChatMessage {
  direction: "user" | "agent";
  text: string;
  timestamp: number;
  scenario_id?: string | null;
  signal_id?: string | null;
}
