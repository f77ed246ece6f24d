// Typed client for the tutoring chat API. The UI never derives quiz logic
// itself; everything comes from these responses.
export class ApiError extends Error {
    constructor(status, body) {
        super(body.message ?? `API error ${status}`);
        this.status = status;
        this.body = body;
    }
}
export class ApiClient {
    constructor(baseUrl = "", fetchFn = (input, init) => fetch(input, init)) {
        this.baseUrl = baseUrl;
        this.fetchFn = fetchFn;
    }
    async request(method, path, body) {
        const response = await this.fetchFn(`${this.baseUrl}${path}`, {
            method,
            headers: body === undefined ? undefined : { "Content-Type": "application/json" },
            body: body === undefined ? undefined : JSON.stringify(body),
        });
        const payload = await response.json().catch(() => ({}));
        if (!response.ok) {
            throw new ApiError(response.status, payload);
        }
        return payload;
    }
    createSession(focus, seed) {
        const body = { focus };
        if (seed !== undefined)
            body.seed = seed;
        return this.request("POST", "/v1/sessions", body);
    }
    postAction(sessionId, action) {
        return this.request("POST", `/v1/sessions/${encodeURIComponent(sessionId)}/actions`, action);
    }
    getSession(sessionId) {
        return this.request("GET", `/v1/sessions/${encodeURIComponent(sessionId)}`);
    }
    poolStats() {
        return this.request("GET", "/v1/pool/stats");
    }
    imageUrl(imageRef) {
        if (!imageRef)
            return null;
        if (/^https?:\/\//.test(imageRef))
            return imageRef;
        return `${this.baseUrl}/v1/images/${encodeURIComponent(imageRef)}`;
    }
}
