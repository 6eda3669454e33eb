// Graph Explorer rendering. All visual classes come from the server
// document: shape by severity, color class by tactic, dotted borders for
// path starts/ends, and the highlight flag is honored as a style token so
// the theme decides the literal color.

import { h, VNode } from "../render.js";
import type { GraphNodeDoc, GraphResponse, SignaturePage } from "../types.js";

export interface GraphHandlers {
  onNodeClick: (key: string) => void;
  onLayoutChange: (layout: "hubsize" | "directed") => void;
}

const LEVEL_HEIGHT = 110;
const SLOT_WIDTH = 170;
const MARGIN = 70;

function nodePositions(response: GraphResponse): Map<string, [number, number]> {
  const levels = response.graph.levels ?? {};
  const byLevel = new Map<number, string[]>();
  for (const node of response.graph.nodes) {
    const level = levels[node.key] ?? 0;
    const bucket = byLevel.get(level) ?? [];
    bucket.push(node.key);
    byLevel.set(level, bucket);
  }
  const positions = new Map<string, [number, number]>();
  for (const [level, keys] of byLevel) {
    keys.sort();
    keys.forEach((key, slot) => {
      positions.set(key, [MARGIN + slot * SLOT_WIDTH, MARGIN + level * LEVEL_HEIGHT]);
    });
  }
  return positions;
}

function shapeElement(node: GraphNodeDoc, x: number, y: number): VNode {
  const classes = ["node-shape", `macro-${node.color_class.replace(/\s+/g, "-")}`];
  if (node.highlight) classes.push("highlight");
  const attrs: Record<string, string> = { class: classes.join(" ") };
  if (node.is_start || node.is_end) attrs["stroke-dasharray"] = "4 3";
  if (node.shape === "box") {
    return h("rect", { ...attrs, x: String(x - 46), y: String(y - 20), width: "92", height: "40" });
  }
  if (node.shape === "hexagon") {
    const points = [
      [x - 50, y], [x - 25, y - 24], [x + 25, y - 24],
      [x + 50, y], [x + 25, y + 24], [x - 25, y + 24],
    ].map((p) => p.join(",")).join(" ");
    return h("polygon", { ...attrs, points });
  }
  return h("ellipse", { ...attrs, cx: String(x), cy: String(y), rx: "50", ry: "22" });
}

function nodeElement(
  node: GraphNodeDoc,
  position: [number, number],
  handlers: GraphHandlers,
): VNode {
  const [x, y] = position;
  const label = node.is_root ? "root" : `${node.micro}`;
  const sublabel = node.is_root ? "" : `${node.service} | ${node.context_id}`;
  return h(
    "g",
    {
      class: "graph-node" + (node.highlight ? " highlighted" : ""),
      "data-key": node.key,
      "data-shape": node.shape,
      "data-severity": node.severity ?? "",
    },
    [
      shapeElement(node, x, y),
      h("text", { x: String(x), y: String(y - 2), class: "node-label" }, [label]),
      h("text", { x: String(x), y: String(y + 12), class: "node-sublabel" }, [sublabel]),
      h("title", {}, [node.is_root ? "artificial root" : `${node.micro} (${node.macro})`]),
    ],
    { click: () => handlers.onNodeClick(node.key) },
  );
}

export function renderSignatureTable(page: SignaturePage): VNode {
  const header = ["signature", "start", "end", "attacker", "victim", "frequency"];
  return h("div", { class: "signature-table", "data-node": page.node_key }, [
    h("h3", {}, [`Signatures for ${page.node_key} (${page.total_rows} rows)`]),
    h("table", {}, [
      h("thead", {}, [h("tr", {}, header.map((c) => h("th", {}, [c])))]),
      h(
        "tbody",
        {},
        page.rows.map((row) =>
          h("tr", { class: "signature-row" }, [
            h("td", { class: "sig-text" }, [row.signature]),
            h("td", {}, [row.start_ts]),
            h("td", {}, [row.end_ts]),
            h("td", {}, [row.attacker_ip]),
            h("td", {}, [row.victim_ip]),
            h("td", { class: "sig-frequency" }, [String(row.frequency)]),
          ]),
        ),
      ),
    ]),
  ]);
}

export function renderGraphView(
  response: GraphResponse,
  signatures: SignaturePage | null,
  handlers: GraphHandlers,
): VNode {
  const positions = nodePositions(response);
  const maxX = Math.max(...[...positions.values()].map((p) => p[0]), MARGIN) + MARGIN + 60;
  const maxY = Math.max(...[...positions.values()].map((p) => p[1]), MARGIN) + MARGIN;
  const edges = response.graph.edges.map((edge) => {
    const src = positions.get(edge.from)!;
    const dst = positions.get(edge.to)!;
    const label = edge.multiplicity > 1 ? `${edge.label} (x${edge.multiplicity})` : edge.label;
    return h("g", { class: "graph-edge", "data-from": edge.from, "data-to": edge.to }, [
      h("line", {
        x1: String(src[0]), y1: String(src[1]), x2: String(dst[0]), y2: String(dst[1]),
        class: "edge-line", "marker-end": "url(#arrow)",
      }),
      h("text", {
        x: String((src[0] + dst[0]) / 2),
        y: String((src[1] + dst[1]) / 2 - 4),
        class: "edge-label",
      }, [label]),
    ]);
  });
  const nodes = response.graph.nodes.map((node) =>
    nodeElement(node, positions.get(node.key)!, handlers),
  );
  const layoutToggle = h("div", { class: "layout-toggle" }, (["hubsize", "directed"] as const).map(
    (method) =>
      h(
        "button",
        {
          class: "layout-option" + (response.layout === method ? " active" : ""),
          "data-layout": method,
        },
        [method],
        { click: () => handlers.onLayoutChange(method) },
      ),
  ));
  return h("section", { class: "view graph-view" }, [
    layoutToggle,
    h(
      "svg",
      { viewBox: `0 0 ${maxX} ${maxY}`, class: "graph-canvas", width: "100%" },
      [...edges, ...nodes],
    ),
    ...(signatures ? [renderSignatureTable(signatures)] : []),
  ]);
}
