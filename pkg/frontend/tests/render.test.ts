import { describe, expect, it } from "vitest";

import { parseDot } from "../src/dot.js";
import { renderGraph } from "../src/render.js";

const DOC = `digraph causality {
  rankdir=LR;
  node [shape=box];
  { rank=same; /* P */
    "P1" [label="P1: first <problem>"];
  }
  { rank=same; /* A */
    "A1" [label="A1: approach"];
  }
  { rank=same; /* D */
    "D1" [label="D1: development"];
  }
  "P1" -> "A1" [penwidth=2.00];
  "A1" -> "D1" [label="50.0%", penwidth=4.00];
}
`;

describe("renderGraph", () => {
    it("draws one rect per node and one line per edge", () => {
        const svg = renderGraph(parseDot(DOC));
        expect(svg.match(/<rect /g)).toHaveLength(3);
        expect(svg.match(/<line /g)).toHaveLength(2);
    });

    it("carries penwidth into stroke-width", () => {
        const svg = renderGraph(parseDot(DOC));
        expect(svg).toContain('stroke-width="2"');
        expect(svg).toContain('stroke-width="4"');
    });

    it("escapes markup in node text and shows edge labels", () => {
        const svg = renderGraph(parseDot(DOC));
        expect(svg).toContain("first &lt;problem&gt;");
        expect(svg).toContain("50.0%");
    });

    it("is deterministic", () => {
        const graph = parseDot(DOC);
        expect(renderGraph(graph)).toBe(renderGraph(graph));
    });

    it("lays columns left to right", () => {
        const svg = renderGraph(parseDot(DOC));
        const xs = [...svg.matchAll(/<rect x="(\d+)"/g)].map((m) => Number(m[1]));
        expect(xs).toHaveLength(3);
        expect(xs[0]).toBeLessThan(xs[1]);
        expect(xs[1]).toBeLessThan(xs[2]);
    });
});
