// API document types, mirroring the server's JSON bodies verbatim.
// The UI never recomputes scores or prevalence; it displays these fields.

export interface RunCounts {
  alerts: number;
  skipped: number;
  episodes: number;
  nodes: number;
  edges: number;
  objective_graphs: number;
}

export interface RunDoc {
  run_id: string;
  status: string;
  created_at: string;
  filename: string;
  counts: RunCounts;
  options: { gap_threshold: number; merge_min_count: number };
}

export interface GraphNodeDoc {
  key: string;
  micro: string;
  service: string;
  context_id: number;
  severity: string | null;
  macro: string | null;
  shape: "ellipse" | "box" | "hexagon";
  color_class: string;
  is_start: boolean;
  is_end: boolean;
  is_root: boolean;
  episode_refs: number[];
  highlight?: boolean;
}

export interface EdgeProvenanceDoc {
  attacker_ip: string;
  victim_ip: string;
  src_episode: number;
  dst_episode: number | null;
  start_ts: string;
  end_ts: string;
}

export interface GraphEdgeDoc {
  from: string;
  to: string;
  attacker_ip: string;
  victim_ip: string;
  elapsed_seconds: number;
  label: string;
  multiplicity: number;
  provenance: EdgeProvenanceDoc[];
}

export interface GraphDoc {
  format: string;
  root: string;
  nodes: GraphNodeDoc[];
  edges: GraphEdgeDoc[];
  levels?: Record<string, number>;
}

export interface FilterDoc {
  attacker_ip: string | null;
  victim_ip: string | null;
  service: string | null;
  micro: string | null;
  window: [string, string] | null;
}

export interface GraphResponse {
  run_id: string;
  filter: FilterDoc;
  layout: "directed" | "hubsize";
  highlight_micro: string | null;
  graph: GraphDoc;
}

export interface TimelineSegmentDoc {
  lane: string;
  counterpart_ip: string;
  row_label: string;
  micro: string;
  service: string;
  macro: string;
  severity: string;
  context_id: number;
  episode_id: number;
  alert_count: number;
  start_ts: string;
  end_ts: string;
  tooltip: { signature: string; frequency: number }[];
}

export interface TimelineResponse {
  run_id: string;
  perspective: "attacker" | "victim";
  host: string | null;
  window: [string, string] | null;
  lanes: string[];
  segments: TimelineSegmentDoc[];
}

export interface MatrixCellDoc {
  micro: string;
  macro: string;
  urgency_score: number;
  urgency_class: "Minor" | "Major" | "Critical" | "Zero";
  alert_count: number;
  node_count: number;
  severity_level: string;
  severity_weight: number;
}

export interface MatrixResponse {
  run_id: string;
  filter: FilterDoc;
  empty_node_set: boolean;
  total_nodes: number;
  total_alerts: number;
  columns: { macro: string; cells: MatrixCellDoc[] }[];
}

export interface SignatureRowDoc {
  signature: string;
  start_ts: string;
  end_ts: string;
  attacker_ip: string;
  victim_ip: string;
  frequency: number;
}

export interface SignaturePage {
  run_id: string;
  node_key: string;
  page: number;
  page_size: number;
  total_rows: number;
  rows: SignatureRowDoc[];
}

export interface ConfigDoc {
  severity_levels: Record<string, string>;
  severity_weights: Record<string, number>;
  urgency_ranges: Record<string, [number, number]>;
}

export interface ApiErrorBody {
  error: { code: string; message: string };
}
