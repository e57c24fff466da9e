/** Append one completed exchange; entries are immutable history. */
export function appendExchange(entries, user, reply) {
    return [...entries, { role: "user", text: user }, { role: "assistant", text: reply }];
}
/** Flatten the server's turn list into chat entries. */
export function entriesFromServer(turns) {
    const out = [];
    for (const turn of turns) {
        out.push({ role: "user", text: turn.user });
        out.push({ role: "assistant", text: turn.reply });
    }
    return out;
}
/** The local transcript must mirror the server history exactly (same turns,
 * same order); the UI keeps no state of its own beyond this. */
export function mirrorsServer(local, turns) {
    const server = entriesFromServer(turns);
    if (local.length !== server.length) {
        return false;
    }
    return local.every((e, i) => e.role === server[i].role && e.text === server[i].text);
}
