import { ApiError, PartGraspClient } from "./api.js";
import { drawGraspMarkers, drawMaskTint, RING_FILL, TARGET_FILL } from "./overlay.js";
import { mirrorsServer, type ChatEntry } from "./transcript.js";
import type { Intrinsics, SequenceDict, SessionView, StepResult } from "./types.js";

interface UiState {
  client: PartGraspClient;
  sessionId: string | null;
  entries: ChatEntry[];
  intrinsics: Intrinsics | null;
  sequence: SequenceDict | null;
  stepStatus: Map<number, string>;
}

const state: UiState = {
  client: new PartGraspClient(defaultBaseUrl()),
  sessionId: null,
  entries: [],
  intrinsics: null,
  sequence: null,
  stepStatus: new Map(),
};

function defaultBaseUrl(): string {
  const params = new URLSearchParams(window.location.search);
  return params.get("server") ?? window.location.origin;
}

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function setStatus(text: string, isError = false): void {
  const bar = el<HTMLDivElement>("status");
  bar.textContent = text;
  bar.className = isError ? "status error" : "status";
}

function renderTranscript(): void {
  const list = el<HTMLDivElement>("transcript");
  list.innerHTML = "";
  for (const entry of state.entries) {
    const bubble = document.createElement("div");
    bubble.className = `bubble ${entry.role}`;
    bubble.textContent = entry.text;
    list.appendChild(bubble);
  }
  list.scrollTop = list.scrollHeight;
}

function renderSequence(): void {
  const table = el<HTMLTableElement>("sequence");
  table.innerHTML = "";
  if (!state.sequence) return;
  const header = table.insertRow();
  for (const title of ["#", "action", "target", "status"]) {
    const cell = document.createElement("th");
    cell.textContent = title;
    header.appendChild(cell);
  }
  for (const step of state.sequence.steps) {
    const row = table.insertRow();
    const target = step.target.part ? `${step.target.object} / ${step.target.part}` : step.target.object;
    const status = state.stepStatus.get(step.index) ?? "pending";
    for (const text of [String(step.index), step.action, target, status]) {
      row.insertCell().textContent = text;
    }
    row.className = status.startsWith("failed") ? "failed" : status === "pending" ? "" : "done";
  }
}

async function refreshFromServer(): Promise<SessionView | null> {
  if (!state.sessionId) return null;
  const view = await state.client.getSession(state.sessionId);
  state.intrinsics = view.intrinsics;
  state.sequence = view.sequence ?? state.sequence;
  // server history is the source of truth; rebuild rather than patch
  state.entries = view.transcript.flatMap((t) => [
    { role: "user" as const, text: t.user },
    { role: "assistant" as const, text: t.reply },
  ]);
  if (!mirrorsServer(state.entries, view.transcript)) {
    setStatus("transcript diverged from server", true);
  }
  for (const step of view.steps) {
    state.stepStatus.set(step.index, step.failure ? `failed: ${step.failure.code}` : "done");
  }
  renderTranscript();
  renderSequence();
  el<HTMLSpanElement>("state").textContent = view.state;
  return view;
}

async function createSession(): Promise<void> {
  const sceneText = el<HTMLTextAreaElement>("scene").value;
  const seedText = el<HTMLInputElement>("seed").value;
  state.client = new PartGraspClient(el<HTMLInputElement>("server").value.replace(/\/$/, ""));
  let scene: unknown;
  try {
    scene = JSON.parse(sceneText);
  } catch {
    setStatus("scene is not valid JSON", true);
    return;
  }
  try {
    const created = await state.client.createSession(scene, seedText ? Number(seedText) : undefined);
    state.sessionId = created.session_id;
    state.entries = [];
    state.sequence = null;
    state.stepStatus = new Map();
    el<HTMLImageElement>("frame").src = state.client.frameUrl(created.session_id);
    clearOverlay();
    setStatus(`session ${created.session_id.slice(0, 8)}… created (${created.state})`);
    await refreshFromServer();
  } catch (err) {
    reportError(err);
  }
}

async function sendMessage(): Promise<void> {
  if (!state.sessionId) {
    setStatus("create a session first", true);
    return;
  }
  const input = el<HTMLInputElement>("message");
  const text = input.value.trim();
  if (!text) return;
  try {
    const outcome = await state.client.postMessage(state.sessionId, text);
    input.value = "";
    if (outcome.sequence) {
      state.sequence = outcome.sequence;
      setStatus(`sequence ready: ${outcome.sequence.steps.length} steps`);
    }
    await refreshFromServer();
  } catch (err) {
    reportError(err);
  }
}

function clearOverlay(): void {
  const canvas = el<HTMLCanvasElement>("overlay");
  const ctx = canvas.getContext("2d")!;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
}

function loadImage(url: string): Promise<HTMLImageElement> {
  return new Promise((resolve, reject) => {
    const img = new Image();
    img.crossOrigin = "anonymous";
    img.onload = () => resolve(img);
    img.onerror = () => reject(new Error(`failed to load ${url}`));
    img.src = url;
  });
}

async function runStep(): Promise<void> {
  if (!state.sessionId) {
    setStatus("create a session first", true);
    return;
  }
  try {
    const result: StepResult = await state.client.nextStep(state.sessionId);
    state.stepStatus.set(result.index, result.failure ? `failed: ${result.failure.code}` : "done");
    if (result.failure) {
      setStatus(`step ${result.index} failed: ${result.failure.code}`, true);
      clearOverlay();
    } else if (result.roi) {
      await drawStepOverlay(result);
      const grasped = result.grasps ? `, top score ${result.grasps.top.score.toFixed(3)}` : "";
      setStatus(`step ${result.index} ${result.action} done${grasped}`);
    } else {
      setStatus(`step ${result.index} ${result.action} done (annotation)`);
      clearOverlay();
    }
    await refreshFromServer();
  } catch (err) {
    reportError(err);
  }
}

async function drawStepOverlay(result: StepResult): Promise<void> {
  if (!state.sessionId || !state.intrinsics) return;
  const canvas = el<HTMLCanvasElement>("overlay");
  canvas.width = state.intrinsics.width;
  canvas.height = state.intrinsics.height;
  const ctx = canvas.getContext("2d")!;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const [expanded, target] = await Promise.all([
    loadImage(state.client.maskUrl(state.sessionId, result.index, "expanded")),
    loadImage(state.client.maskUrl(state.sessionId, result.index, "target")),
  ]);
  drawMaskTint(ctx, expanded, canvas.width, canvas.height, RING_FILL);
  drawMaskTint(ctx, target, canvas.width, canvas.height, TARGET_FILL);
  if (result.grasps) {
    const grasps = await state.client.grasps(state.sessionId, result.index, 15);
    drawGraspMarkers(ctx, grasps, state.intrinsics);
  }
}

function reportError(err: unknown): void {
  if (err instanceof ApiError) {
    setStatus(`[${err.code}] ${err.message}`, true);
  } else {
    setStatus(String(err), true);
  }
}

export function wire(): void {
  el<HTMLButtonElement>("create").addEventListener("click", () => void createSession());
  el<HTMLButtonElement>("send").addEventListener("click", () => void sendMessage());
  el<HTMLInputElement>("message").addEventListener("keydown", (event) => {
    if (event.key === "Enter") void sendMessage();
  });
  el<HTMLButtonElement>("step").addEventListener("click", () => void runStep());
  el<HTMLInputElement>("server").value = state.client.baseUrl;
  const existing = new URLSearchParams(window.location.search).get("session");
  if (existing) {
    state.sessionId = existing;
    el<HTMLImageElement>("frame").src = state.client.frameUrl(existing);
    void refreshFromServer();
  }
}

if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", wire);
}
