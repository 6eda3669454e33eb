// Application controller: owns the view state, keeps it in the URL, talks
// to the API, and renders the active view. At most one in-flight request
// matters per view; responses arriving after a newer request are dropped.

import { ApiClient, ApiError } from "./api.js";
import { h, VNode } from "./render.js";
import { DEFAULT_STATE, FilterState, ViewName, ViewState, encodeState } from "./state.js";
import type {
  ConfigDoc,
  GraphResponse,
  MatrixCellDoc,
  MatrixResponse,
  SignaturePage,
  TimelineResponse,
} from "./types.js";
import { renderGraphView } from "./views/graph.js";
import { renderMatrixView } from "./views/matrix.js";
import { renderTimelineView } from "./views/timeline.js";

export interface AppData {
  graph: GraphResponse | null;
  timeline: TimelineResponse | null;
  matrix: MatrixResponse | null;
  signatures: SignaturePage | null;
  config: ConfigDoc | null;
}

export class App {
  state: ViewState = { ...DEFAULT_STATE, filter: {} };
  runId: string | null = null;
  data: AppData = { graph: null, timeline: null, matrix: null, signatures: null, config: null };
  error: string | null = null;
  configError: string | null = null;
  configDraft: ConfigDoc | null = null;
  private sequence = 0;

  constructor(
    private api: ApiClient,
    private onChange: (app: App) => void = () => {},
    private pushUrl: (query: string) => void = () => {},
  ) {}

  private notify(): void {
    this.pushUrl(encodeState(this.state));
    this.onChange(this);
  }

  private nextSeq(): number {
    this.sequence += 1;
    return this.sequence;
  }

  private fresh(seq: number): boolean {
    return seq === this.sequence;
  }

  async init(runId: string, initial?: ViewState): Promise<void> {
    this.runId = runId;
    if (initial) this.state = initial;
    try {
      this.data.config = await this.api.getConfig();
    } catch (exc) {
      this.error = String(exc);
    }
    await this.refresh();
  }

  async refresh(): Promise<void> {
    if (!this.runId) return;
    const seq = this.nextSeq();
    const runId = this.runId;
    try {
      if (this.state.view === "graph") {
        const response = this.state.highlightMicro
          ? await this.api.redirectToGraph(runId, this.state.filter, this.state.layout)
          : await this.api.getGraph(runId, this.state.filter, this.state.layout);
        if (!this.fresh(seq)) return;
        this.data.graph = response;
      } else if (this.state.view === "timeline") {
        const window = this.brushWindow();
        const response = await this.api.getTimeline(
          runId, this.state.perspective, this.state.host, window,
        );
        if (!this.fresh(seq)) return;
        this.data.timeline = response;
      } else {
        const response = await this.api.getMatrix(runId, this.state.filter);
        if (!this.fresh(seq)) return;
        this.data.matrix = response;
      }
      this.error = null;
    } catch (exc) {
      if (!this.fresh(seq)) return;
      this.error = exc instanceof ApiError ? `${exc.code}: ${exc.message}` : String(exc);
    }
    this.notify();
  }

  private brushWindow(): [string, string] | undefined {
    const { from_ts, to_ts } = this.state.filter;
    return from_ts && to_ts ? [from_ts, to_ts] : undefined;
  }

  async show(view: ViewName): Promise<void> {
    this.state = { ...this.state, view, selectedNode: undefined };
    this.data.signatures = null;
    await this.refresh();
  }

  async applyFilter(filter: FilterState): Promise<void> {
    this.state = { ...this.state, filter, highlightMicro: undefined, selectedNode: undefined };
    this.data.signatures = null;
    await this.refresh();
  }

  async setLayout(layout: "hubsize" | "directed"): Promise<void> {
    this.state = { ...this.state, layout };
    await this.refresh();
  }

  // Graph Explorer: a single click on a node opens its signature table.
  async clickNode(key: string): Promise<void> {
    if (!this.runId) return;
    try {
      const page = await this.api.getSignatures(this.runId, key);
      this.state = { ...this.state, selectedNode: key };
      this.data.signatures = page;
      this.error = null;
    } catch (exc) {
      this.error = exc instanceof ApiError ? `${exc.code}: ${exc.message}` : String(exc);
    }
    this.notify();
  }

  // Matrix: non-zero cells redirect to the Graph Explorer with the micro
  // highlighted; zero cells never navigate (the caller guards too).
  async clickMatrixCell(cell: MatrixCellDoc): Promise<void> {
    if (cell.urgency_score <= 0 || !this.runId) return;
    this.state = {
      ...this.state,
      view: "graph",
      filter: { ...this.state.filter, micro: cell.micro },
      highlightMicro: cell.micro,
      selectedNode: undefined,
    };
    this.data.signatures = null;
    await this.refresh();
  }

  // Timeline: carries the displayed attacker/victim host, window, and
  // service into the Graph Explorer.
  async goToGraphFromTimeline(): Promise<void> {
    const timeline = this.data.timeline;
    if (!timeline) return;
    const filter: FilterState = { ...this.state.filter };
    if (this.state.host) {
      if (this.state.perspective === "victim") filter.victim_ip = this.state.host;
      else filter.attacker_ip = this.state.host;
    }
    if (timeline.window) {
      filter.from_ts = timeline.window[0];
      filter.to_ts = timeline.window[1];
    }
    this.state = { ...this.state, view: "graph", filter, highlightMicro: undefined };
    await this.refresh();
  }

  async setPerspective(perspective: "attacker" | "victim"): Promise<void> {
    this.state = { ...this.state, perspective, host: undefined };
    await this.refresh();
  }

  async setHost(host: string | undefined): Promise<void> {
    this.state = { ...this.state, host };
    await this.refresh();
  }

  async setBrush(fromTs: string | undefined, toTs: string | undefined): Promise<void> {
    this.state = {
      ...this.state,
      filter: { ...this.state.filter, from_ts: fromTs, to_ts: toTs },
    };
    await this.refresh();
  }

  // Config editing: field updates mutate a draft of the last-known config;
  // submit sends the whole draft. A rejected draft is kept for fixing.
  editConfigField(path: string, value: string): void {
    if (!this.configDraft) {
      const base = this.data.config;
      this.configDraft = base
        ? JSON.parse(JSON.stringify(base))
        : { severity_levels: {}, severity_weights: {}, urgency_ranges: {} };
    }
    const draft = this.configDraft!;
    const [kind, name] = path.split(".", 2) as [string, string];
    if (kind === "weight") {
      draft.severity_weights[name] = Number(value);
    } else if (kind === "level") {
      draft.severity_levels[name] = value;
    } else if (kind === "range") {
      const [lo, hi] = value.split(",").map(Number);
      draft.urgency_ranges[name] = [lo ?? 0, hi ?? 1];
    }
    this.onChange(this);
  }

  async submitConfig(): Promise<void> {
    if (!this.configDraft) return;
    try {
      const accepted = await this.api.putConfig(this.configDraft);
      this.data.config = accepted;
      this.configDraft = null;
      this.configError = null;
      if (this.state.view === "matrix") await this.refresh();
      else this.notify();
    } catch (exc) {
      // keep the draft so the analyst can fix it in place
      this.configError = exc instanceof ApiError ? exc.message : String(exc);
      this.notify();
    }
  }

  render(): VNode {
    const menu = h(
      "nav",
      { class: "menu" },
      (["graph", "timeline", "matrix"] as const).map((view) =>
        h(
          "button",
          { class: "menu-item" + (this.state.view === view ? " active" : ""), "data-view": view },
          [view],
          { click: () => void this.show(view) },
        ),
      ),
    );
    const banner = this.error
      ? [h("div", { class: "error-banner", role: "alert" }, [this.error])]
      : [];
    return h("div", { class: "app" }, [menu, ...banner, this.activeView()]);
  }

  private activeView(): VNode {
    if (this.state.view === "graph" && this.data.graph) {
      return renderGraphView(this.data.graph, this.data.signatures, {
        onNodeClick: (key) => void this.clickNode(key),
        onLayoutChange: (layout) => void this.setLayout(layout),
      });
    }
    if (this.state.view === "timeline" && this.data.timeline) {
      return renderTimelineView(this.data.timeline, {
        onPerspectiveChange: (p) => void this.setPerspective(p),
        onHostChange: (host) => void this.setHost(host),
        onBrush: (from, to) => void this.setBrush(from, to),
        onGoToGraph: () => void this.goToGraphFromTimeline(),
      });
    }
    if (this.state.view === "matrix" && this.data.matrix) {
      const config = this.configDraft ?? this.data.config ?? {
        severity_levels: {}, severity_weights: {}, urgency_ranges: {},
      };
      return renderMatrixView(this.data.matrix, config, this.configError, {
        onCellClick: (cell) => void this.clickMatrixCell(cell),
        onConfigField: (path, value) => this.editConfigField(path, value),
        onConfigSubmit: () => void this.submitConfig(),
      });
    }
    return h("section", { class: "view loading" }, ["Loading..."]);
  }
}
