// Parser for the service's graph documents: the digraph dialect the backend
// emits (rank-grouped named nodes, directed edges with label/penwidth/color
// attributes). Columns come from the rank groups in document order.

export interface DotNode {
    name: string;
    text: string;
    column: number;
}

export interface DotEdge {
    source: string;
    target: string;
    penwidth: number;
    label: string;
    color: string;
}

export interface DotGraph {
    name: string;
    columns: string[];
    nodes: DotNode[];
    edges: DotEdge[];
    rankdir: string;
}

function unquote(raw: string): string {
    return raw.replace(/\\(["\\])/g, "$1");
}

function parseAttrs(body: string): Record<string, string> {
    const attrs: Record<string, string> = {};
    // Attributes are comma separated; values are quoted strings or bare tokens.
    const pattern = /(\w+)=("(?:[^"\\]|\\.)*"|[^,\]]+)/g;
    let match: RegExpExecArray | null;
    while ((match = pattern.exec(body)) !== null) {
        const raw = match[2];
        attrs[match[1]] = raw.startsWith('"') ? unquote(raw.slice(1, -1)) : raw.trim();
    }
    return attrs;
}

export function parseDot(text: string): DotGraph {
    const graph: DotGraph = { name: "", columns: [], nodes: [], edges: [], rankdir: "LR" };
    const header = text.match(/digraph\s+(\w+)\s*\{/);
    if (!header) {
        throw new Error("not a digraph document");
    }
    graph.name = header[1];

    let column = -1;
    let inRankGroup = false;
    for (const rawLine of text.split("\n")) {
        const line = rawLine.trim();
        if (line.startsWith("rankdir=")) {
            graph.rankdir = line.replace("rankdir=", "").replace(";", "");
            continue;
        }
        const rankStart = line.match(/^\{\s*rank=same;\s*(?:\/\*\s*(.*?)\s*\*\/)?/);
        if (rankStart) {
            column += 1;
            inRankGroup = true;
            graph.columns.push(rankStart[1] ?? `column ${column}`);
            continue;
        }
        if (inRankGroup && line === "}") {
            inRankGroup = false;
            continue;
        }
        const edge = line.match(/^("(?:[^"\\]|\\.)*")\s*->\s*("(?:[^"\\]|\\.)*")\s*\[(.*)\];$/);
        if (edge) {
            const attrs = parseAttrs(edge[3]);
            graph.edges.push({
                source: unquote(edge[1].slice(1, -1)),
                target: unquote(edge[2].slice(1, -1)),
                penwidth: Number(attrs.penwidth ?? "1"),
                label: attrs.label ?? "",
                color: attrs.color ?? "",
            });
            continue;
        }
        if (inRankGroup) {
            const node = line.match(/^("(?:[^"\\]|\\.)*")\s*\[label=("(?:[^"\\]|\\.)*")\];$/);
            if (node) {
                graph.nodes.push({
                    name: unquote(node[1].slice(1, -1)),
                    text: unquote(node[2].slice(1, -1)),
                    column,
                });
            }
        }
    }
    return graph;
}
