/**
 * Thin client for the read-only burden API plus the request-sequencing
 * helper the app uses to drop stale responses.
 */
import { requestParams } from "./state.js";
/** An error response the engine produced deliberately (4xx/5xx JSON body). */
export class ApiRequestError extends Error {
    code;
    status;
    constructor(status, body) {
        super(body.message);
        this.code = body.code;
        this.status = status;
    }
}
async function getJson(fetcher, url) {
    const response = await fetcher(url);
    if (!response.ok) {
        let body;
        try {
            body = (await response.json());
        }
        catch {
            throw new Error(`request failed with status ${response.status}`);
        }
        throw new ApiRequestError(response.status, body);
    }
    return (await response.json());
}
export class ApiClient {
    base;
    fetcher;
    /**
     * @param base origin prefix, e.g. "http://127.0.0.1:8080"; empty string
     *   for same-origin use when the dashboard is served by the engine.
     */
    constructor(base = "", fetcher = (url) => fetch(url)) {
        this.base = base.replace(/\/$/, "");
        this.fetcher = fetcher;
    }
    layers() {
        return getJson(this.fetcher, `${this.base}/api/layers`);
    }
    burden(state) {
        return getJson(this.fetcher, `${this.base}/api/burden?${requestParams(state)}`);
    }
    schools(state) {
        return getJson(this.fetcher, `${this.base}/api/schools?${requestParams(state)}`);
    }
}
/**
 * Last-write-wins gate for in-flight requests. Each request takes a
 * ticket; when a response lands, it is applied only if no newer ticket
 * has been issued since. Responses arriving out of order are discarded.
 */
export class LatestGate {
    seq = 0;
    issue() {
        this.seq += 1;
        return this.seq;
    }
    isCurrent(ticket) {
        return ticket === this.seq;
    }
}
