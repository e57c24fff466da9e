/**
 * Live smoke flow against the real service: create a session, exchange two
 * messages, confirm execution, run every step, and verify the transcript
 * mirrors the server plus the top-grasp marker projection matches the
 * server's echoed pixel within 1 px.
 */

import { spawn, type ChildProcess } from "node:child_process";
import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { PartGraspClient } from "../src/api.js";
import { projectionErrorPx } from "../src/projection.js";
import { appendExchange, mirrorsServer, type ChatEntry } from "../src/transcript.js";
import type { Intrinsics } from "../src/types.js";

const ROOT = join(dirname(fileURLToPath(import.meta.url)), "..", "..");
const PORT = 8077;
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess | null = null;

async function waitForHealth(client: PartGraspClient, timeoutMs = 30000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  let lastError: unknown = null;
  while (Date.now() < deadline) {
    try {
      const health = await client.health();
      if (health.status === "ok") return;
    } catch (err) {
      lastError = err;
    }
    await new Promise((r) => setTimeout(r, 250));
  }
  throw new Error(`service never became healthy: ${lastError}`);
}

beforeAll(async () => {
  server = spawn(
    "python3",
    [
      "-m", "partgrasp.cli", "serve",
      "--host", "127.0.0.1",
      "--port", String(PORT),
      "--backend", "mock",
      "--fixtures", join(ROOT, "assets", "mock_replies.json"),
    ],
    { cwd: ROOT, stdio: ["ignore", "pipe", "pipe"] },
  );
  server.stderr?.on("data", (chunk) => process.stderr.write(chunk));
  await waitForHealth(new PartGraspClient(BASE));
}, 60000);

afterAll(() => {
  server?.kill("SIGTERM");
});

describe("operator console smoke flow", () => {
  it("drives a session end to end against the live service", async () => {
    const client = new PartGraspClient(BASE);
    const scene = JSON.parse(readFileSync(join(ROOT, "assets", "scenes", "pen_desktop.json"), "utf-8"));

    const created = await client.createSession(scene, 3);
    expect(created.state).toBe("dialogue");
    expect(created.inventory.map(([name]) => name)).toContain("pen");

    let entries: ChatEntry[] = [];
    const first = await client.postMessage(created.session_id, "Pick up the pen");
    expect(first.reply).toBeTruthy();
    entries = appendExchange(entries, "Pick up the pen", first.reply!);

    const second = await client.postMessage(created.session_id, "Is it the pen on the table?");
    expect(second.reply).toBeTruthy();
    entries = appendExchange(entries, "Is it the pen on the table?", second.reply!);

    const confirmed = await client.postMessage(created.session_id, "Confirm execution");
    expect(confirmed.sequence).toBeTruthy();
    expect(confirmed.sequence!.steps[0].target.object).toBe("pen");
    // the confirmation exchange lands in the history as text
    const view1 = await client.getSession(created.session_id);
    entries = appendExchange(entries, "Confirm execution", view1.transcript[2].reply);

    let state = view1.state;
    expect(state).toBe("sequence_ready");
    while (state === "sequence_ready" || state === "executing") {
      const result = await client.nextStep(created.session_id);
      expect(result.failure).toBeUndefined();
      state = (await client.getSession(created.session_id)).state;
    }
    expect(state).toBe("done");

    const view = await client.getSession(created.session_id);
    expect(mirrorsServer(entries, view.transcript)).toBe(true);

    // top-1 marker reprojection agrees with the server-echoed pixel
    const grasps = await client.grasps(created.session_id, 1, 15);
    expect(grasps.length).toBeGreaterThan(0);
    const intr: Intrinsics = view.intrinsics;
    expect(projectionErrorPx(grasps[0], intr)).toBeLessThanOrEqual(1.0);
    for (const grasp of grasps) {
      expect(projectionErrorPx(grasp, intr)).toBeLessThanOrEqual(1.0);
    }

    // overlay inputs exist: frame and both masks are served as PNGs
    for (const url of [
      client.frameUrl(created.session_id),
      client.maskUrl(created.session_id, 1, "target"),
      client.maskUrl(created.session_id, 1, "expanded"),
    ]) {
      const response = await fetch(url);
      expect(response.status).toBe(200);
      expect(response.headers.get("content-type")).toBe("image/png");
    }
  }, 120000);
});
