// Timeline Viewer rendering: one swimlane per host (for the chosen
// perspective), rows labeled "micro | service" inside each lane, segment
// color by tactic. The brush window is a pair of datetime inputs; the
// "Go to Graph Explorer" button carries exactly what is displayed.

import { h, VNode } from "../render.js";
import type { TimelineResponse, TimelineSegmentDoc } from "../types.js";

export interface TimelineHandlers {
  onPerspectiveChange: (perspective: "attacker" | "victim") => void;
  onHostChange: (host: string | undefined) => void;
  onBrush: (fromTs: string | undefined, toTs: string | undefined) => void;
  onGoToGraph: () => void;
}

function spanPercent(
  segment: TimelineSegmentDoc,
  start: number,
  total: number,
): { left: string; width: string } {
  const s = Date.parse(segment.start_ts);
  const e = Date.parse(segment.end_ts);
  const left = total > 0 ? (100 * (s - start)) / total : 0;
  const width = total > 0 ? Math.max((100 * (e - s)) / total, 0.4) : 100;
  return { left: `${left.toFixed(3)}%`, width: `${width.toFixed(3)}%` };
}

function tooltipText(segment: TimelineSegmentDoc): string {
  const lines = segment.tooltip.map((t) => `${t.signature} (${t.frequency})`);
  return [`${segment.row_label}`, `${segment.start_ts} .. ${segment.end_ts}`, ...lines].join("\n");
}

export function renderTimelineView(
  response: TimelineResponse,
  handlers: TimelineHandlers,
): VNode {
  const times = response.segments.flatMap((s) => [Date.parse(s.start_ts), Date.parse(s.end_ts)]);
  const start = times.length ? Math.min(...times) : 0;
  const total = times.length ? Math.max(...times) - start : 0;

  const lanes = response.lanes.map((lane) => {
    const laneSegments = response.segments.filter((s) => s.lane === lane);
    const rowLabels = [...new Set(laneSegments.map((s) => s.row_label))].sort();
    const rows = rowLabels.map((label) => {
      const rowSegments = laneSegments.filter((s) => s.row_label === label);
      return h("div", { class: "timeline-row", "data-label": label }, [
        h("span", { class: "row-label" }, [label]),
        h(
          "div",
          { class: "row-track" },
          rowSegments.map((segment) => {
            const { left, width } = spanPercent(segment, start, total);
            return h("div", {
              class: `timeline-segment macro-${segment.macro.replace(/\s+/g, "-")}`,
              style: `left:${left};width:${width}`,
              "data-episode": String(segment.episode_id),
              "data-counterpart": segment.counterpart_ip,
              title: tooltipText(segment),
            });
          }),
        ),
      ]);
    });
    return h("div", { class: "timeline-lane", "data-lane": lane }, [
      h("h3", { class: "lane-title" }, [lane]),
      ...rows,
    ]);
  });

  const perspectiveToggle = h(
    "div",
    { class: "perspective-toggle" },
    (["attacker", "victim"] as const).map((p) =>
      h(
        "button",
        { class: "perspective-option" + (response.perspective === p ? " active" : "") },
        [p],
        { click: () => handlers.onPerspectiveChange(p) },
      ),
    ),
  );

  const brush = h("div", { class: "timeline-brush" }, [
    h("input", {
      class: "brush-from", type: "text",
      placeholder: "window start (RFC3339)",
      value: response.window?.[0] ?? "",
    }, [], {
      change: (ev) =>
        handlers.onBrush(
          (ev as { target?: { value?: string } })?.target?.value || undefined,
          response.window?.[1],
        ),
    }),
    h("input", {
      class: "brush-to", type: "text",
      placeholder: "window end (RFC3339)",
      value: response.window?.[1] ?? "",
    }, [], {
      change: (ev) =>
        handlers.onBrush(
          response.window?.[0],
          (ev as { target?: { value?: string } })?.target?.value || undefined,
        ),
    }),
  ]);

  const content = response.segments.length
    ? lanes
    : [h("p", { class: "empty-state" }, ["No episodes match the current view."])];

  return h("section", { class: "view timeline-view" }, [
    perspectiveToggle,
    h("input", {
      class: "host-filter", type: "text",
      placeholder: `${response.perspective} host`,
      value: response.host ?? "",
    }, [], {
      change: (ev) =>
        handlers.onHostChange((ev as { target?: { value?: string } })?.target?.value || undefined),
    }),
    brush,
    h("button", { class: "go-to-graph" }, ["Go to Graph Explorer"], {
      click: () => handlers.onGoToGraph(),
    }),
    h("div", { class: "timeline-lanes" }, content),
  ]);
}
