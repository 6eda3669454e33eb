import { describe, expect, it } from "vitest";

import { findAll, findByClass, textOf } from "../src/render.js";
import { renderGraphView, renderSignatureTable } from "../src/views/graph.js";
import type { GraphResponse, SignaturePage } from "../src/types.js";
import { FakeFetch, RUN_ID, fixture, makeApp } from "./helpers.js";

const graphResponse = fixture<GraphResponse>("graph.json");
const redirectResponse = fixture<GraphResponse>("redirect_exfil.json");
const signaturePage = fixture<SignaturePage>("signatures_exfil_mongodb.json");

const noHandlers = { onNodeClick: () => {}, onLayoutChange: () => {} };

describe("graph view rendering", () => {
  it("renders one element per node with server-provided shape classes", () => {
    const tree = renderGraphView(graphResponse, null, noHandlers);
    const nodes = findByClass(tree, "graph-node");
    expect(nodes.length).toBe(graphResponse.graph.nodes.length);
    const byKey = new Map(nodes.map((n) => [n.attrs["data-key"], n]));
    for (const doc of graphResponse.graph.nodes) {
      const rendered = byKey.get(doc.key)!;
      expect(rendered.attrs["data-shape"]).toBe(doc.shape);
      const shapeTag = doc.shape === "box" ? "rect" : doc.shape === "hexagon" ? "polygon" : "ellipse";
      expect(findAll(rendered, (n) => n.tag === shapeTag).length).toBe(1);
    }
  });

  it("marks start and end nodes with dotted borders", () => {
    const tree = renderGraphView(graphResponse, null, noHandlers);
    for (const doc of graphResponse.graph.nodes) {
      const rendered = findAll(
        tree,
        (n) => n.attrs["data-key"] === doc.key,
      )[0]!;
      const shape = findAll(rendered, (n) => "stroke-dasharray" in n.attrs);
      expect(shape.length > 0).toBe(doc.is_start || doc.is_end);
    }
  });

  it("renders every edge with its elapsed label", () => {
    const tree = renderGraphView(graphResponse, null, noHandlers);
    const edges = findByClass(tree, "graph-edge");
    expect(edges.length).toBe(graphResponse.graph.edges.length);
    const labels = new Set(edges.map((e) => textOf(e)));
    for (const edge of graphResponse.graph.edges) {
      const expected = edge.multiplicity > 1 ? `${edge.label} (x${edge.multiplicity})` : edge.label;
      expect(labels.has(expected)).toBe(true);
    }
  });

  it("honors the highlight flag as a style token", () => {
    const tree = renderGraphView(redirectResponse, null, noHandlers);
    const highlighted = findByClass(tree, "highlighted");
    const expected = redirectResponse.graph.nodes.filter((n) => n.highlight);
    expect(highlighted.map((n) => n.attrs["data-key"]).sort()).toEqual(
      expected.map((n) => n.key).sort(),
    );
    expect(expected.every((n) => n.micro === "Data Exfiltration")).toBe(true);
    expect(expected.length).toBeGreaterThan(0);
  });

  it("is a pure function of the response (stable snapshot)", () => {
    const once = JSON.stringify(renderGraphView(graphResponse, null, noHandlers));
    const twice = JSON.stringify(renderGraphView(graphResponse, null, noHandlers));
    expect(once).toBe(twice);
  });
});

describe("node click shows the signature table", () => {
  it("fetches and renders exactly the endpoint's rows", async () => {
    const fake = new FakeFetch()
      .get("/config", "config.json")
      .get(`/runs/${RUN_ID}/graph`, "graph.json")
      .get(`/runs/${RUN_ID}/nodes/`, "signatures_exfil_mongodb.json");
    const app = makeApp(fake);
    await app.init(RUN_ID);

    await app.clickNode(signaturePage.node_key);
    expect(app.data.signatures).toEqual(signaturePage);

    const tree = app.render();
    const rows = findByClass(tree, "signature-row");
    expect(rows.length).toBe(signaturePage.rows.length);
    rows.forEach((row, i) => {
      const doc = signaturePage.rows[i]!;
      const cells = findAll(row, (n) => n.tag === "td").map(textOf);
      expect(cells).toEqual([
        doc.signature,
        doc.start_ts,
        doc.end_ts,
        doc.attacker_ip,
        doc.victim_ip,
        String(doc.frequency),
      ]);
    });
    const mongo = signaturePage.rows.some((r) =>
      r.signature.includes("MongoDB Database numeration"),
    );
    expect(mongo).toBe(true);
  });

  it("keeps the prior view and shows a banner when the fetch fails", async () => {
    const fake = new FakeFetch()
      .get("/config", "config.json")
      .get(`/runs/${RUN_ID}/graph`, "graph.json");
    const app = makeApp(fake);
    await app.init(RUN_ID);
    const before = app.data.graph;

    await app.clickNode("No|such|99");
    expect(app.error).toContain("not_found");
    expect(app.data.graph).toBe(before);
    const banner = findByClass(app.render(), "error-banner");
    expect(banner.length).toBe(1);
  });
});

describe("signature table rendering", () => {
  it("shows total row count in the heading", () => {
    const tree = renderSignatureTable(signaturePage);
    expect(textOf(tree)).toContain(`${signaturePage.total_rows} rows`);
  });
});
