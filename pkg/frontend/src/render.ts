// Client-side SVG rendering of a parsed graph document. The layout mirrors
// the backend's layered fallback: fixed columns, even vertical spacing,
// straight edges with penwidth strokes.

import { DotGraph } from "./dot.js";

const NODE_W = 220;
const NODE_H = 36;
const COL_GAP = 160;
const ROW_GAP = 28;
const MARGIN = 40;

function esc(text: string): string {
    return text
        .replace(/&/g, "&amp;")
        .replace(/</g, "&lt;")
        .replace(/>/g, "&gt;")
        .replace(/"/g, "&quot;");
}

export function renderGraph(graph: DotGraph): string {
    const byColumn = new Map<number, typeof graph.nodes>();
    for (const node of graph.nodes) {
        const bucket = byColumn.get(node.column) ?? [];
        bucket.push(node);
        byColumn.set(node.column, bucket);
    }
    const nCols = Math.max(graph.columns.length, byColumn.size, 1);
    const tallest = Math.max(1, ...[...byColumn.values()].map((v) => v.length));
    const horizontal = graph.rankdir === "LR";

    const width = horizontal
        ? MARGIN * 2 + nCols * NODE_W + (nCols - 1) * COL_GAP
        : MARGIN * 2 + tallest * (NODE_W + ROW_GAP);
    const height = horizontal
        ? MARGIN * 2 + tallest * (NODE_H + ROW_GAP)
        : MARGIN * 2 + nCols * (NODE_H + COL_GAP / 2);

    const boxes = new Map<string, [number, number]>();
    for (const [column, members] of [...byColumn.entries()].sort((a, b) => a[0] - b[0])) {
        members.forEach((node, row) => {
            const x = horizontal ? MARGIN + column * (NODE_W + COL_GAP) : MARGIN + row * (NODE_W + ROW_GAP);
            const y = horizontal ? MARGIN + row * (NODE_H + ROW_GAP) : MARGIN + column * (NODE_H + COL_GAP / 2);
            boxes.set(node.name, [x, y]);
        });
    }

    const parts: string[] = [
        `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}" font-family="monospace" font-size="12">`,
    ];
    for (const edge of graph.edges) {
        const from = boxes.get(edge.source);
        const to = boxes.get(edge.target);
        if (!from || !to) continue;
        const [sx, sy] = from;
        const [tx, ty] = to;
        const x1 = horizontal ? sx + NODE_W : sx + NODE_W / 2;
        const y1 = horizontal ? sy + NODE_H / 2 : sy + NODE_H;
        const x2 = horizontal ? tx : tx + NODE_W / 2;
        const y2 = horizontal ? ty + NODE_H / 2 : ty;
        const color = edge.color || "#555555";
        parts.push(
            `<line x1="${x1}" y1="${y1}" x2="${x2}" y2="${y2}" stroke="${esc(color)}" stroke-width="${edge.penwidth}"/>`,
        );
        if (edge.label) {
            parts.push(
                `<text x="${(x1 + x2) / 2}" y="${(y1 + y2) / 2 - 4}" text-anchor="middle">${esc(edge.label)}</text>`,
            );
        }
    }
    for (const node of graph.nodes) {
        const box = boxes.get(node.name);
        if (!box) continue;
        const [x, y] = box;
        parts.push(`<rect x="${x}" y="${y}" width="${NODE_W}" height="${NODE_H}" fill="#f7f7f7" stroke="#333"/>`);
        parts.push(`<text x="${x + 8}" y="${y + NODE_H / 2 + 4}">${esc(node.text)}</text>`);
    }
    parts.push("</svg>");
    return parts.join("\n");
}
