import { describe, expect, it } from "vitest";

import { findByClass } from "../src/render.js";
import { DEFAULT_STATE, decodeState, encodeState } from "../src/state.js";
import type { GraphResponse } from "../src/types.js";
import { FakeFetch, RUN_ID, fixture, makeApp } from "./helpers.js";

describe("url state", () => {
  it("round-trips through the query string", () => {
    const state = {
      view: "timeline" as const,
      filter: { victim_ip: "10.0.0.22", micro: "Data Exfiltration" },
      layout: "directed" as const,
      perspective: "attacker" as const,
      host: "10.0.254.202",
      selectedNode: "Data Exfiltration|mongodb|8",
      highlightMicro: undefined,
    };
    expect(decodeState(encodeState(state))).toEqual(state);
  });

  it("decodes garbage to usable defaults", () => {
    expect(decodeState("view=banana&layout=spiral")).toEqual({
      ...DEFAULT_STATE,
      filter: {},
      host: undefined,
      selectedNode: undefined,
      highlightMicro: undefined,
    });
  });
});

describe("app request lifecycle", () => {
  it("replays of the same fixtures produce the same rendered structure", async () => {
    const build = async () => {
      const fake = new FakeFetch()
        .get("/config", "config.json")
        .get(`/runs/${RUN_ID}/graph`, "graph.json");
      const app = makeApp(fake);
      await app.init(RUN_ID);
      return JSON.stringify(app.render());
    };
    expect(await build()).toBe(await build());
  });

  it("discards stale responses superseded by a newer filter", async () => {
    const graph = fixture<GraphResponse>("graph.json");
    const exfil = fixture<GraphResponse>("graph_exfil.json");
    let resolveSlow: (() => void) | null = null;
    const slow = new Promise<void>((resolve) => {
      resolveSlow = resolve;
    });
    const fake = new FakeFetch().get("/config", "config.json");
    fake.route("GET", `/runs/${RUN_ID}/graph`, (url) => {
      return url.includes("micro=")
        ? { status: 200, body: exfil }
        : { status: 200, body: graph };
    });
    const app = makeApp(fake);
    app.runId = RUN_ID;
    app.data.config = fixture("config.json");

    // first request is delayed past the second one
    const originalFetch = fake.fn();
    const gated: typeof originalFetch = async (url, init) => {
      if (!url.includes("micro=") && url.includes("/graph")) {
        await slow;
      }
      return originalFetch(url, init);
    };
    (app as unknown as { api: { fetchFn: unknown } }).api = new (
      await import("../src/api.js")
    ).ApiClient("", gated);

    const first = app.refresh();
    const second = app.applyFilter({ micro: "Data Exfiltration" });
    await second;
    resolveSlow!();
    await first;

    expect(app.data.graph).toEqual(exfil);
  });

  it("api failures leave a banner and the previous data intact", async () => {
    const fake = new FakeFetch()
      .get("/config", "config.json")
      .get(`/runs/${RUN_ID}/graph`, "graph.json");
    const app = makeApp(fake);
    await app.init(RUN_ID);
    const graphBefore = app.data.graph;

    await app.show("matrix"); // no matrix fixture registered -> 404
    expect(app.error).toContain("not_found");
    expect(app.data.graph).toBe(graphBefore);
    expect(findByClass(app.render(), "error-banner").length).toBe(1);
  });
});
