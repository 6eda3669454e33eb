// View state and its URL query-string form, so investigations are
// shareable and the back button works. Pure functions; the App owns the
// history integration.

export type ViewName = "graph" | "timeline" | "matrix";

export interface FilterState {
  attacker_ip?: string;
  victim_ip?: string;
  service?: string;
  micro?: string;
  from_ts?: string;
  to_ts?: string;
}

export interface ViewState {
  view: ViewName;
  filter: FilterState;
  layout: "hubsize" | "directed";
  perspective: "attacker" | "victim";
  host?: string;
  selectedNode?: string;
  highlightMicro?: string;
}

export const DEFAULT_STATE: ViewState = {
  view: "graph",
  filter: {},
  layout: "hubsize",
  perspective: "victim",
};

const FILTER_KEYS: (keyof FilterState)[] = [
  "attacker_ip",
  "victim_ip",
  "service",
  "micro",
  "from_ts",
  "to_ts",
];

export function encodeState(state: ViewState): string {
  const params = new URLSearchParams();
  params.set("view", state.view);
  for (const key of FILTER_KEYS) {
    const value = state.filter[key];
    if (value) params.set(key, value);
  }
  if (state.layout !== "hubsize") params.set("layout", state.layout);
  if (state.perspective !== "victim") params.set("perspective", state.perspective);
  if (state.host) params.set("host", state.host);
  if (state.selectedNode) params.set("node", state.selectedNode);
  if (state.highlightMicro) params.set("highlight", state.highlightMicro);
  return params.toString();
}

export function decodeState(query: string): ViewState {
  const params = new URLSearchParams(query);
  const filter: FilterState = {};
  for (const key of FILTER_KEYS) {
    const value = params.get(key);
    if (value) filter[key] = value;
  }
  const view = params.get("view");
  const layout = params.get("layout");
  const perspective = params.get("perspective");
  return {
    view: view === "timeline" || view === "matrix" ? view : "graph",
    filter,
    layout: layout === "directed" ? "directed" : "hubsize",
    perspective: perspective === "attacker" ? "attacker" : "victim",
    host: params.get("host") ?? undefined,
    selectedNode: params.get("node") ?? undefined,
    highlightMicro: params.get("highlight") ?? undefined,
  };
}

export function filterQuery(filter: FilterState): URLSearchParams {
  const params = new URLSearchParams();
  for (const key of FILTER_KEYS) {
    const value = filter[key];
    if (value) params.set(key, value);
  }
  return params;
}
