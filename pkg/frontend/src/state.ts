// View state and the studio controller. The view is a pure function of the
// last fetched state; every mutation goes to the service and the state is
// refetched, never patched locally.

import { ApiClient, ApiError, CategoryInfo, KindLetter, PoolEntry, StatsResponse } from "./api.js";
import { DotGraph, parseDot } from "./dot.js";

export const KINDS: KindLetter[] = ["P", "A", "D"];

export interface ViewState {
    revision: number;
    pools: Record<KindLetter, PoolEntry[]>;
    categories: Record<KindLetter, CategoryInfo[]>;
    stats: StatsResponse | null;
    selectedMetric: string;
    dag: DotGraph | null;
    dagRaw: string;
    error: string | null;
}

export function emptyState(): ViewState {
    return {
        revision: -1,
        pools: { P: [], A: [], D: [] },
        categories: { P: [], A: [], D: [] },
        stats: null,
        selectedMetric: "f_p",
        dag: null,
        dagRaw: "",
        error: null,
    };
}

export type Listener = (state: ViewState) => void;

export class Studio {
    state: ViewState = emptyState();
    private listeners: Listener[] = [];
    private polling = false;

    constructor(private api: ApiClient) {}

    onChange(listener: Listener): void {
        this.listeners.push(listener);
    }

    private emit(): void {
        for (const listener of this.listeners) listener(this.state);
    }

    selectMetric(metric: string): void {
        this.state = { ...this.state, selectedMetric: metric };
        this.emit();
    }

    // Fetch everything the panels show. The final revision is the corpus
    // response's; panels refetched here are all at least that fresh.
    async refresh(): Promise<ViewState> {
        const corpus = await this.api.corpus();
        const pools: ViewState["pools"] = { P: [], A: [], D: [] };
        for (const kind of KINDS) {
            pools[kind] = (await this.api.pool(kind)).entries;
        }
        const categories: ViewState["categories"] = { P: [], A: [], D: [] };
        for (const category of corpus.corpus.categories) {
            categories[category.kind].push(category);
        }
        const stats = await this.api.stats();
        const dagResponse = await this.api.dagDocument();
        let dag: DotGraph | null = null;
        try {
            dag = parseDot(dagResponse.text);
        } catch {
            dag = null; // the raw document is still shown
        }
        this.state = {
            ...this.state,
            revision: corpus.revision,
            pools,
            categories,
            stats,
            dag,
            dagRaw: dagResponse.text,
            error: null,
        };
        this.emit();
        return this.state;
    }

    // One long-poll cycle: wait for a newer revision, then refetch.
    async pollOnce(timeoutSeconds = 25): Promise<ViewState> {
        const since = this.state.revision;
        await this.api.changes(Math.max(since, 0), timeoutSeconds);
        return this.refresh();
    }

    startPolling(timeoutSeconds = 25): void {
        if (this.polling) return;
        this.polling = true;
        const loop = async () => {
            while (this.polling) {
                try {
                    await this.pollOnce(timeoutSeconds);
                } catch {
                    await new Promise((resolve) => setTimeout(resolve, 1000));
                }
            }
        };
        void loop();
    }

    stopPolling(): void {
        this.polling = false;
    }

    private async mutate(action: () => Promise<unknown>): Promise<boolean> {
        try {
            await action();
            await this.refresh();
            return true;
        } catch (error) {
            // Conflicts refetch first (the panels must show what the service
            // actually holds), then surface inline on top of the fresh view.
            const message =
                error instanceof ApiError ? `${error.code}: ${error.message}` : String(error);
            try {
                await this.refresh();
            } catch {
                /* service unreachable; still surface the original error */
            }
            this.state = { ...this.state, error: message };
            this.emit();
            return false;
        }
    }

    addCode(kind: KindLetter, text: string, ru: string): Promise<boolean> {
        return this.mutate(() => this.api.addCode(kind, text, ru));
    }

    groupOntoCode(subject: string, neighbor: string, categoryText?: string): Promise<boolean> {
        return this.mutate(() => this.api.group(subject, neighbor, categoryText));
    }

    // Dropping onto a category joins it through any of its members.
    joinCategory(subject: string, category: CategoryInfo, revisedText?: string): Promise<boolean> {
        if (category.members.length === 0) {
            this.state = { ...this.state, error: `category ${category.label} has no members to join through` };
            this.emit();
            return Promise.resolve(false);
        }
        return this.mutate(() => this.api.group(subject, category.members[0], revisedText));
    }

    orphan(node: string): Promise<boolean> {
        return this.mutate(() => this.api.orphan(node));
    }
}
