import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { Store, initialState, nextUnsolved } from "../src/state.js";
import { renderGrid } from "../src/render.js";

describe("store", () => {
  it("notifies subscribers with merged state", () => {
    const store = new Store();
    const seen: string[] = [];
    store.subscribe((state) => seen.push(state.editor));
    store.update({ editor: "move\n" });
    store.update({ promptBanner: true });
    expect(seen).toEqual(["move\n", "move\n"]);
    expect(store.get().promptBanner).toBe(true);
  });

  it("starts blank", () => {
    expect(initialState().session).toBeNull();
  });
});

describe("nextUnsolved", () => {
  const tasks = [
    { id: "T01", solved: true, attempts: 1, feedback_requests: 0, prompt_shown: false },
    { id: "T02", solved: false, attempts: 0, feedback_requests: 0, prompt_shown: false },
    { id: "T03", solved: false, attempts: 0, feedback_requests: 0, prompt_shown: false },
  ];

  it("finds the first unsolved task", () => {
    expect(nextUnsolved(tasks)).toBe("T02");
  });

  it("continues after the given task and wraps", () => {
    expect(nextUnsolved(tasks, "T02")).toBe("T03");
    expect(nextUnsolved(tasks, "T03")).toBe("T02");
  });

  it("returns null when everything is solved", () => {
    expect(nextUnsolved(tasks.map((t) => ({ ...t, solved: true })))).toBeNull();
  });
});

describe("api client queue", () => {
  it("serializes mutations in order and retries network failures", async () => {
    const calls: string[] = [];
    let failedOnce = false;
    const fetchFn = (async (url: RequestInfo | URL, init?: RequestInit) => {
      const path = String(url);
      if (path.endsWith("/attempts") && !failedOnce) {
        failedOnce = true;
        throw new TypeError("network down"); // offline: must retry, not drop
      }
      calls.push(path.replace("http://test", "") + ":" + (init?.method ?? "GET"));
      return new Response(JSON.stringify({ ok: true }), { status: 200 });
    }) as typeof fetch;

    const api = new ApiClient("http://test", { fetchFn, retryDelayMs: 1 });
    const first = api.attempt("tok", "T01", "move", 1);
    const second = api.adopt("tok", "T01", true, 1);
    await Promise.all([first, second]);
    expect(calls).toEqual([
      "/sessions/tok/tasks/T01/attempts:POST",
      "/sessions/tok/tasks/T01/adopt:POST",
    ]);
  });

  it("surfaces server errors without retrying", async () => {
    let hits = 0;
    const fetchFn = (async () => {
      hits++;
      return new Response(JSON.stringify({ detail: "nope" }), { status: 409 });
    }) as typeof fetch;
    const api = new ApiClient("http://test", { fetchFn, retryDelayMs: 1 });
    await expect(api.attempt("tok", "T01", "move", 1)).rejects.toThrow("nope");
    expect(hits).toBe(1);
  });
});

describe("grid rendering", () => {
  it("marks walls, goal, and the avatar", () => {
    const host = renderGrid({ rows: ["S.#", "..G"], start_dir: "E" });
    expect(host.querySelectorAll(".cell").length).toBe(6);
    expect(host.querySelectorAll(".cell.wall").length).toBe(1);
    expect(host.querySelectorAll(".cell.goal").length).toBe(1);
    expect(host.querySelector(".cell.avatar")?.textContent).toBe("→");
  });

  it("places the avatar from a pose", () => {
    const host = renderGrid({ rows: ["S.", ".G"], start_dir: "E" }, [1, 0, "S"]);
    const avatar = host.querySelector(".cell.avatar");
    expect(avatar?.textContent).toBe("↓");
  });
});
