import type { TranscriptTurn } from "./types.js";

export interface ChatEntry {
  role: "user" | "assistant";
  text: string;
}

/** Append one completed exchange; entries are immutable history. */
export function appendExchange(
  entries: readonly ChatEntry[],
  user: string,
  reply: string,
): ChatEntry[] {
  return [...entries, { role: "user", text: user }, { role: "assistant", text: reply }];
}

/** Flatten the server's turn list into chat entries. */
export function entriesFromServer(turns: readonly TranscriptTurn[]): ChatEntry[] {
  const out: ChatEntry[] = [];
  for (const turn of turns) {
    out.push({ role: "user", text: turn.user });
    out.push({ role: "assistant", text: turn.reply });
  }
  return out;
}

/** The local transcript must mirror the server history exactly (same turns,
 * same order); the UI keeps no state of its own beyond this. */
export function mirrorsServer(
  local: readonly ChatEntry[],
  turns: readonly TranscriptTurn[],
): boolean {
  const server = entriesFromServer(turns);
  if (local.length !== server.length) {
    return false;
  }
  return local.every((e, i) => e.role === server[i].role && e.text === server[i].text);
}
