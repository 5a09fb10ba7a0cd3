/**
 * Typed client for the diagram service.
 *
 * Documents are validated locally before every PUT, so the server never
 * sees an IR this editor would itself flag. Optimistic concurrency rides
 * on the X-Base-Version header: a stale write surfaces as
 * StaleVersionError carrying the version the server holds now.
 */
import { serializeDocument, validateDiagram } from "./ir.js";
export class ApiError extends Error {
    status;
    detail;
    constructor(status, detail) {
        super(typeof detail === "string" ? detail : `request failed (${status})`);
        this.status = status;
        this.detail = detail;
        this.name = "ApiError";
    }
}
export class StaleVersionError extends Error {
    current;
    constructor(current) {
        super(`the diagram changed on the server (now at version ${current})`);
        this.current = current;
        this.name = "StaleVersionError";
    }
}
export class LocalValidationError extends Error {
    violations;
    constructor(violations) {
        super(violations.map((v) => `${v.rule} (${v.element})`).join("; "));
        this.violations = violations;
        this.name = "LocalValidationError";
    }
}
async function detailOf(response) {
    try {
        const body = (await response.json());
        return body && typeof body === "object" && "detail" in body ? body.detail : body;
    }
    catch {
        return null;
    }
}
export class ApiClient {
    baseUrl;
    fetchImpl;
    constructor(baseUrl = "", fetchImpl = globalThis.fetch) {
        this.baseUrl = baseUrl;
        this.fetchImpl = fetchImpl;
    }
    async request(method, path, options = {}) {
        const headers = { ...options.headers };
        if (options.body !== undefined) {
            headers["Content-Type"] = "application/json";
        }
        const response = await this.fetchImpl(this.baseUrl + path, {
            method,
            headers,
            body: options.body,
        });
        if (response.status >= 200 && response.status < 300) {
            return (await response.json());
        }
        const detail = await detailOf(response);
        if (response.status === 409 && typeof detail === "object" && detail !== null) {
            const { current } = detail;
            if (typeof current === "number") {
                throw new StaleVersionError(current);
            }
        }
        throw new ApiError(response.status, detail);
    }
    health() {
        return this.request("GET", "/health");
    }
    async listDiagrams() {
        const body = await this.request("GET", "/diagrams");
        return body.diagrams;
    }
    getDiagram(id) {
        return this.request("GET", `/diagrams/${encodeURIComponent(id)}`);
    }
    /**
     * Store a document. Throws LocalValidationError instead of sending
     * anything when the diagram breaks a structural rule. `baseVersion`
     * opts into optimistic concurrency; omitting it means last write wins.
     */
    putDiagram(id, diagram, layout = {}, baseVersion) {
        const violations = validateDiagram(diagram);
        if (violations.length > 0) {
            throw new LocalValidationError(violations);
        }
        const headers = {};
        if (baseVersion !== undefined) {
            headers["X-Base-Version"] = String(baseVersion);
        }
        return this.request("PUT", `/diagrams/${encodeURIComponent(id)}`, {
            body: serializeDocument(diagram, layout),
            headers,
        });
    }
    postPaths(id, config = {}) {
        return this.request("POST", `/diagrams/${encodeURIComponent(id)}/paths`, {
            body: JSON.stringify({ config }),
        });
    }
    postModes(id, config = {}, dialect = "generic") {
        return this.request("POST", `/diagrams/${encodeURIComponent(id)}/modes`, {
            body: JSON.stringify({ config, dialect }),
        });
    }
    postClausespace(id, config = {}, options = {}) {
        const body = { config };
        if (options.maxLen !== undefined)
            body.max_len = options.maxLen;
        if (options.cap !== undefined)
            body.cap = options.cap;
        return this.request("POST", `/diagrams/${encodeURIComponent(id)}/clausespace`, {
            body: JSON.stringify(body),
        });
    }
}
