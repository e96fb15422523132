// Typed client for the categorization service. Every response carries the
// service revision; errors arrive as {code, message, location} JSON.

export type KindLetter = "P" | "A" | "D";

export interface NodeInfo {
    id: string;
    kind: KindLetter;
    label: string;
    code: string;
    sources: string[];
    grouped: boolean;
}

export interface PoolEntry extends NodeInfo {
    reviewed: boolean;
}

export interface CategoryInfo {
    id: string;
    kind: KindLetter;
    label: string;
    category_code: string;
    members: string[];
    parent: string | null;
}

export interface MetricRow {
    label: string;
    category_code: string;
    numerator: number;
    denominator: number;
    percent: string;
}

export interface MetricTable {
    metric: string;
    kind: KindLetter;
    denominators: Record<string, number>;
    rows: MetricRow[];
}

export interface StatsResponse {
    revision: number;
    tables: Record<string, MetricTable> | null;
    status?: string;
    avg_challenges?: { numerator: number; denominator: number };
}

export interface CorpusDocument {
    research_units: { id: string; citation: string; triads: { p: string; a: string; d: string }[] }[];
    nodes: Omit<NodeInfo, "grouped">[];
    categories: CategoryInfo[];
}

export class ApiError extends Error {
    constructor(
        public status: number,
        public code: string,
        message: string,
        public location: string,
    ) {
        super(message);
    }
}

async function asJson(response: Response): Promise<any> {
    const body = await response.json();
    if (!response.ok) {
        throw new ApiError(
            response.status,
            body.code ?? "error",
            body.message ?? response.statusText,
            body.location ?? "",
        );
    }
    return body;
}

export class ApiClient {
    constructor(private base: string = "") {}

    private async get(path: string): Promise<any> {
        return asJson(await fetch(this.base + path));
    }

    private async post(path: string, payload: unknown): Promise<any> {
        return asJson(
            await fetch(this.base + path, {
                method: "POST",
                headers: { "Content-Type": "application/json" },
                body: JSON.stringify(payload),
            }),
        );
    }

    corpus(): Promise<{ revision: number; corpus: CorpusDocument }> {
        return this.get("/api/corpus");
    }

    pool(kind: KindLetter): Promise<{ revision: number; entries: PoolEntry[] }> {
        return this.get(`/api/pool?kind=${kind}`);
    }

    stats(): Promise<StatsResponse> {
        return this.get("/api/stats");
    }

    async dagDocument(): Promise<{ revision: number; text: string }> {
        const response = await fetch(this.base + "/api/graphs/dag.dot");
        if (!response.ok) {
            throw new ApiError(response.status, "error", await response.text(), "/api/graphs/dag.dot");
        }
        return {
            revision: Number(response.headers.get("X-Revision") ?? "0"),
            text: await response.text(),
        };
    }

    // Long-poll: resolves with the current revision once it passes `since`
    // or the server-side timeout elapses.
    changes(since: number, timeoutSeconds = 25): Promise<{ revision: number }> {
        return this.get(`/api/changes?since=${since}&timeout=${timeoutSeconds}`);
    }

    addCode(kind: KindLetter, text: string, ru: string): Promise<{ revision: number; node: NodeInfo }> {
        return this.post("/api/codes", { kind, text, ru });
    }

    group(
        subject: string,
        neighbor: string,
        categoryText?: string,
    ): Promise<{ revision: number; category: CategoryInfo }> {
        const payload: Record<string, string> = { subject, neighbor };
        if (categoryText !== undefined) payload.category_text = categoryText;
        return this.post("/api/group", payload);
    }

    spawn(subject: string, neighbor: string, categoryText: string): Promise<{ revision: number; category: CategoryInfo }> {
        return this.post("/api/spawn", { subject, neighbor, category_text: categoryText });
    }

    orphan(node: string): Promise<{ revision: number }> {
        return this.post("/api/orphan", { node });
    }

    save(path?: string): Promise<{ revision: number; path: string }> {
        return this.post("/api/save", path ? { path } : {});
    }
}
