// Browser entry: wires the App to the real DOM, fetch, and history.

import { ApiClient } from "./api.js";
import { App } from "./app.js";
import { mount } from "./render.js";
import { decodeState } from "./state.js";

async function start(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app element");

  const api = new ApiClient("");
  const app = new App(
    api,
    (current) => {
      root.replaceChildren(mount(current.render(), document));
    },
    (query) => {
      const url = new URL(window.location.href);
      url.search = query;
      window.history.replaceState(null, "", url);
    },
  );

  const runs = await api.listRuns();
  const latest = runs.runs[runs.runs.length - 1];
  if (!latest) {
    root.textContent = "No analysis runs yet. Upload alerts via POST /runs or `agdash ingest`.";
    return;
  }
  await app.init(latest.run_id, decodeState(window.location.search));
}

void start();
