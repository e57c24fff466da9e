import { describe, expect, it } from "vitest";

import { appendExchange, entriesFromServer, mirrorsServer } from "../src/transcript.js";

describe("transcript state", () => {
  it("appends exchanges immutably", () => {
    const first = appendExchange([], "hello", "hi there");
    const second = appendExchange(first, "grab the pen", "will do");
    expect(first).toHaveLength(2);
    expect(second).toHaveLength(4);
    expect(second[2]).toEqual({ role: "user", text: "grab the pen" });
  });

  it("mirrors the server turn list exactly", () => {
    const turns = [
      { user: "a", reply: "b" },
      { user: "c", reply: "d" },
    ];
    expect(mirrorsServer(entriesFromServer(turns), turns)).toBe(true);
  });

  it("detects divergence in order or content", () => {
    const turns = [{ user: "a", reply: "b" }];
    expect(mirrorsServer(appendExchange([], "a", "WRONG"), turns)).toBe(false);
    expect(mirrorsServer(appendExchange([], "a", "b").slice(0, 1), turns)).toBe(false);
  });
});
