// Fixture loading and a fetch stub that replays recorded API responses.

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { ApiClient, FetchLike } from "../src/api.js";
import { App } from "../src/app.js";

const FIXTURE_DIR = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

export function fixture<T = unknown>(name: string): T {
  return JSON.parse(readFileSync(join(FIXTURE_DIR, name), "utf-8")) as T;
}

export const RUN_ID: string = fixture<{ run_id: string }>("manifest.json").run_id;

interface Route {
  match: (url: string, method: string) => boolean;
  respond: (url: string, init?: RequestInit) => { status: number; body: unknown };
}

export class FakeFetch {
  requests: { url: string; method: string; body?: string }[] = [];
  private routes: Route[] = [];

  /** Replay a fixture for GETs whose path+query starts with the prefix. */
  get(prefix: string, fixtureName: string): this {
    this.routes.push({
      match: (url, method) => method === "GET" && url.startsWith(prefix),
      respond: () => ({ status: 200, body: fixture(fixtureName) }),
    });
    return this;
  }

  route(
    method: string,
    prefix: string,
    respond: (url: string, init?: RequestInit) => { status: number; body: unknown },
  ): this {
    this.routes.push({
      match: (url, m) => m === method && url.startsWith(prefix),
      respond,
    });
    return this;
  }

  fn(): FetchLike {
    return async (url: string, init?: RequestInit) => {
      const method = init?.method ?? "GET";
      this.requests.push({ url, method, body: init?.body as string | undefined });
      for (const route of this.routes) {
        if (route.match(url, method)) {
          const { status, body } = route.respond(url, init);
          return new Response(JSON.stringify(body), {
            status,
            headers: { "content-type": "application/json" },
          });
        }
      }
      return new Response(
        JSON.stringify({ error: { code: "not_found", message: `no fixture for ${method} ${url}` } }),
        { status: 404, headers: { "content-type": "application/json" } },
      );
    };
  }
}

export function makeApp(fake: FakeFetch): App {
  return new App(new ApiClient("", fake.fn()));
}

export function flush(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}
