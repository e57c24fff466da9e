export class ApiError extends Error {
    status;
    code;
    constructor(status, code, message) {
        super(message);
        this.status = status;
        this.code = code;
    }
}
async function parseError(response) {
    let code = "http_error";
    let message = `${response.status} ${response.statusText}`;
    try {
        const body = await response.json();
        const detail = body.detail ?? body;
        if (typeof detail === "object" && detail !== null) {
            code = detail.code ?? code;
            message = detail.message ?? JSON.stringify(detail);
        }
        else if (typeof detail === "string") {
            message = detail;
        }
    }
    catch {
        // non-JSON error body; keep the status line
    }
    return new ApiError(response.status, code, message);
}
/** Thin typed client over the session service; the UI never recomputes what
 * the server already reports. */
export class PartGraspClient {
    baseUrl;
    fetchImpl;
    constructor(baseUrl, fetchImpl = fetch) {
        this.baseUrl = baseUrl;
        this.fetchImpl = fetchImpl;
    }
    async request(path, init) {
        const response = await this.fetchImpl(`${this.baseUrl}${path}`, init);
        if (!response.ok) {
            throw await parseError(response);
        }
        return (await response.json());
    }
    post(path, body) {
        return this.request(path, {
            method: "POST",
            headers: { "content-type": "application/json" },
            body: body === undefined ? undefined : JSON.stringify(body),
        });
    }
    health() {
        return this.request("/healthz");
    }
    createSession(scene, seed) {
        return this.post("/sessions", seed === undefined ? { scene } : { scene, seed });
    }
    getSession(id) {
        return this.request(`/sessions/${id}`);
    }
    postMessage(id, text) {
        return this.post(`/sessions/${id}/messages`, { text });
    }
    nextStep(id) {
        return this.post(`/sessions/${id}/steps/next`);
    }
    grasps(id, step, top) {
        const query = top === undefined ? "" : `?top=${top}`;
        return this.request(`/sessions/${id}/grasps/${step}${query}`);
    }
    frameUrl(id) {
        return `${this.baseUrl}/sessions/${id}/frame`;
    }
    maskUrl(id, step, kind = "target") {
        return `${this.baseUrl}/sessions/${id}/masks/${step}?kind=${kind}`;
    }
}
