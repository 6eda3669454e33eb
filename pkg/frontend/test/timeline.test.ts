import { describe, expect, it } from "vitest";

import { findByClass } from "../src/render.js";
import { renderTimelineView } from "../src/views/timeline.js";
import type { GraphResponse, TimelineResponse } from "../src/types.js";
import { FakeFetch, RUN_ID, fixture, makeApp } from "./helpers.js";

const attackerView = fixture<TimelineResponse>("timeline_attacker.json");
const victimView = fixture<TimelineResponse>("timeline_victim.json");
const victim22 = fixture<TimelineResponse>("timeline_victim22.json");
const victim22Window = fixture<TimelineResponse>("timeline_victim22_window.json");
const graphForWindow = fixture<GraphResponse>("graph_victim22_window.json");

const noHandlers = {
  onPerspectiveChange: () => {},
  onHostChange: () => {},
  onBrush: () => {},
  onGoToGraph: () => {},
};

describe("timeline rendering", () => {
  it("renders one segment per episode and one lane per host", () => {
    const tree = renderTimelineView(victim22, noHandlers);
    expect(findByClass(tree, "timeline-lane").length).toBe(victim22.lanes.length);
    expect(findByClass(tree, "timeline-segment").length).toBe(victim22.segments.length);
  });

  it("labels rows with micro | service", () => {
    const tree = renderTimelineView(victim22, noHandlers);
    const labels = findByClass(tree, "timeline-row").map((r) => r.attrs["data-label"]);
    const expected = [...new Set(victim22.segments.map((s) => s.row_label))].sort();
    expect(labels).toEqual(expected);
    for (const label of labels) {
      expect(label).toMatch(/^.+ \| .+$/);
    }
  });

  it("tooltips carry the signature excerpts", () => {
    const tree = renderTimelineView(victim22, noHandlers);
    const segments = findByClass(tree, "timeline-segment");
    const byEpisode = new Map(segments.map((s) => [Number(s.attrs["data-episode"]), s]));
    for (const doc of victim22.segments) {
      const tooltip = byEpisode.get(doc.episode_id)!.attrs["title"]!;
      for (const line of doc.tooltip) {
        expect(tooltip).toContain(line.signature);
      }
    }
  });

  it("brushing to a window keeps only intersecting segments", () => {
    const windowed = new Set(victim22Window.segments.map((s) => s.episode_id));
    const t0 = Date.parse("2018-11-04T00:00:00+00:00");
    const t1 = Date.parse("2018-11-04T02:00:00+00:00");
    for (const segment of victim22.segments) {
      const intersects = Date.parse(segment.end_ts) >= t0 && Date.parse(segment.start_ts) <= t1;
      expect(windowed.has(segment.episode_id)).toBe(intersects);
    }
    const tree = renderTimelineView(victim22Window, noHandlers);
    expect(findByClass(tree, "timeline-segment").length).toBe(victim22Window.segments.length);
  });

  it("perspective toggle regroups lanes but preserves the segment multiset", () => {
    const attackerEpisodes = attackerView.segments.map((s) => s.episode_id).sort((a, b) => a - b);
    const victimEpisodes = victimView.segments.map((s) => s.episode_id).sort((a, b) => a - b);
    expect(attackerEpisodes).toEqual(victimEpisodes);
    expect(attackerView.lanes).not.toEqual(victimView.lanes);
    const attackerLanes = new Set(attackerView.segments.map((s) => s.lane));
    const victimLanes = new Set(victimView.segments.map((s) => s.lane));
    expect([...attackerLanes].every((lane) => lane.startsWith("10.0.254."))).toBe(true);
    expect([...victimLanes].every((lane) => lane.startsWith("10.0.0."))).toBe(true);
  });

  it("shows an explicit empty state when nothing matches", () => {
    const empty: TimelineResponse = { ...victim22, lanes: [], segments: [] };
    const tree = renderTimelineView(empty, noHandlers);
    expect(findByClass(tree, "empty-state").length).toBe(1);
  });
});

describe("go to graph explorer", () => {
  it("redirects with the displayed host, window, and service", async () => {
    const fake = new FakeFetch()
      .get("/config", "config.json")
      .get(`/runs/${RUN_ID}/timeline`, "timeline_victim22_window.json")
      .get(`/runs/${RUN_ID}/graph`, "graph_victim22_window.json");
    const app = makeApp(fake);
    await app.init(RUN_ID, {
      view: "timeline",
      filter: {
        from_ts: "2018-11-04T00:00:00+00:00",
        to_ts: "2018-11-04T02:00:00+00:00",
      },
      layout: "hubsize",
      perspective: "victim",
      host: "10.0.0.22",
    });
    expect(app.data.timeline).toEqual(victim22Window);

    await app.goToGraphFromTimeline();

    expect(app.state.view).toBe("graph");
    expect(app.state.filter.victim_ip).toBe("10.0.0.22");
    expect(app.state.filter.from_ts).toBe("2018-11-04T00:00:00+00:00");
    expect(app.data.graph).toEqual(graphForWindow);
    const call = fake.requests.find((r) => r.url.includes("/graph"));
    expect(call!.url).toContain("victim_ip=10.0.0.22");
    expect(call!.url).toContain("from_ts=");
    // the graph the redirect produced contains exactly the after-hours
    // etlservicemgr path
    const services = new Set(
      graphForWindow.graph.nodes.filter((n) => !n.is_root).map((n) => n.service),
    );
    expect(services).toEqual(new Set(["etlservicemgr"]));
  });
});
