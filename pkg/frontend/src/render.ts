// Minimal render tree: views are pure functions from API documents to
// VNode structures, which makes them snapshot-testable without a browser.
// mount() realizes a tree into a real DOM when one exists.

export type Handler = (event?: unknown) => void;

export interface VNode {
  tag: string;
  attrs: Record<string, string>;
  on: Record<string, Handler>;
  children: (VNode | string)[];
}

export function h(
  tag: string,
  attrs: Record<string, string> = {},
  children: (VNode | string)[] = [],
  on: Record<string, Handler> = {},
): VNode {
  return { tag, attrs, on, children };
}

const SVG_TAGS = new Set([
  "svg", "g", "rect", "circle", "ellipse", "polygon", "line", "path", "text", "title",
]);

export function mount(node: VNode | string, doc: Document): Node {
  if (typeof node === "string") return doc.createTextNode(node);
  const el = SVG_TAGS.has(node.tag)
    ? doc.createElementNS("http://www.w3.org/2000/svg", node.tag)
    : doc.createElement(node.tag);
  for (const [name, value] of Object.entries(node.attrs)) {
    el.setAttribute(name, value);
  }
  for (const [event, handler] of Object.entries(node.on)) {
    el.addEventListener(event, (ev) => handler(ev));
  }
  for (const child of node.children) {
    el.appendChild(mount(child, doc));
  }
  return el;
}

// Test helpers: walk a tree without a DOM.

export function findAll(node: VNode | string, predicate: (n: VNode) => boolean): VNode[] {
  if (typeof node === "string") return [];
  const hits: VNode[] = [];
  if (predicate(node)) hits.push(node);
  for (const child of node.children) {
    hits.push(...findAll(child, predicate));
  }
  return hits;
}

export function findByClass(node: VNode, className: string): VNode[] {
  return findAll(node, (n) => (n.attrs["class"] ?? "").split(" ").includes(className));
}

export function textOf(node: VNode | string): string {
  if (typeof node === "string") return node;
  return node.children.map(textOf).join("");
}
