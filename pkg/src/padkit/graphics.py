"""Graphic devices over a categorized corpus.

Four deterministic documents: the tripartite causality DAG, the triads
graphic, per-problem dyad stars, and taxonomy forests. Each is built as a
small column-layout graph, emitted as DOT text, and renderable to SVG
either through an external layout tool or a built-in layered fallback.
"""

from __future__ import annotations

import os
import shlex
import subprocess
from dataclasses import dataclass
from fractions import Fraction
from xml.sax.saxutils import escape, quoteattr

from .metrics import category_share, percent_string
from .model import CategoryNode, Corpus, Kind, KINDS, PadkitError, render_label


class GraphicsError(PadkitError):
    pass


@dataclass(frozen=True)
class AggregatedLink:
    """One inter-category link bundling every node-level link it covers."""

    source: str
    target: str
    count: int
    thickness: float


@dataclass(frozen=True)
class CategoryTriad:
    p: str
    a: str
    d: str
    count: int


@dataclass(frozen=True)
class GraphNode:
    name: str
    text: str
    column: int


@dataclass(frozen=True)
class GraphEdge:
    source: str
    target: str
    penwidth: float
    label: str = ""
    color: str = ""


@dataclass(frozen=True)
class GraphDoc:
    """Column-layered graph: the shared shape behind DOT and fallback SVG."""

    name: str
    columns: tuple[str, ...]
    nodes: tuple[GraphNode, ...]
    edges: tuple[GraphEdge, ...]
    rankdir: str = "LR"

    def to_dot(self) -> str:
        return to_dot(self)

    def to_svg(self, layout_cmd: str | None = None) -> str:
        return render_svg(self, layout_cmd)


def thickness_scale(counts: list[int], min_w: float = 1.0, max_w: float = 6.0) -> dict[int, float]:
    """Affine map from the count range onto [min_w, max_w] display units.

    A degenerate range (all counts equal) maps everything to min_w.
    """
    if not counts:
        raise GraphicsError("cannot scale an empty count set")
    if min_w >= max_w:
        raise GraphicsError(f"width range [{min_w}, {max_w}] is not increasing")
    lo, hi = min(counts), max(counts)
    if lo == hi:
        return {lo: min_w}
    span = (max_w - min_w) / (hi - lo)
    return {c: min_w + (c - lo) * span for c in sorted(set(counts))}


def _label_key(text: str) -> tuple:
    from .model import parse_label

    label = parse_label(text)
    return (label.kind.column, label.category, label.subcategory or 0, label.item or 0)


def _category_of(corpus: Corpus, node_id: str, where: str):
    node = corpus.node_index()[node_id]
    if not node.is_grouped:
        raise GraphicsError(
            f"{where}: node {render_label(node.label)} is ungrouped; "
            "category-level graphics need categorized triads"
        )
    return node.label.category


def aggregate_links(corpus: Corpus, node_level: bool = False,
                    min_width: float = 1.0, max_width: float = 6.0) -> list[AggregatedLink]:
    """Count problem->approach and approach->development links.

    Category level bundles all node links between two categories; node level
    keeps individual nodes apart.
    """
    counts: dict[tuple[str, str], int] = {}
    nodes = corpus.node_index()
    for ru, i, triad in corpus.triad_census():
        where = f"ru:{ru.id}/triad:{i}"
        if node_level:
            pa = (render_label(nodes[triad.p].label), render_label(nodes[triad.a].label))
            ad = (render_label(nodes[triad.a].label), render_label(nodes[triad.d].label))
        else:
            p_cat = _category_of(corpus, triad.p, where)
            a_cat = _category_of(corpus, triad.a, where)
            d_cat = _category_of(corpus, triad.d, where)
            pa = (f"P{p_cat}", f"A{a_cat}")
            ad = (f"A{a_cat}", f"D{d_cat}")
        counts[pa] = counts.get(pa, 0) + 1
        counts[ad] = counts.get(ad, 0) + 1
    if not counts:
        return []
    scale = thickness_scale(list(counts.values()), min_width, max_width)
    ordered = sorted(counts, key=lambda pair: (_label_key(pair[0]), _label_key(pair[1])))
    return [AggregatedLink(src, dst, counts[(src, dst)], scale[counts[(src, dst)]]) for src, dst in ordered]


def category_triads(corpus: Corpus) -> list[CategoryTriad]:
    """Distinct category-level triads with their occurrence counts."""
    counts: dict[tuple[int, int, int], int] = {}
    for ru, i, triad in corpus.triad_census():
        where = f"ru:{ru.id}/triad:{i}"
        key = (
            _category_of(corpus, triad.p, where),
            _category_of(corpus, triad.a, where),
            _category_of(corpus, triad.d, where),
        )
        counts[key] = counts.get(key, 0) + 1
    return [
        CategoryTriad(f"P{p}", f"A{a}", f"D{d}", counts[(p, a, d)])
        for p, a, d in sorted(counts)
    ]


def _top_categories(corpus: Corpus, kind: Kind) -> list[CategoryNode]:
    cats = [c for c in corpus.categories if c.kind is kind and c.label.subcategory is None]
    cats.sort(key=lambda c: c.label.category)
    return cats


def _category_columns(corpus: Corpus) -> list[GraphNode]:
    nodes = []
    for kind in KINDS:
        for cat in _top_categories(corpus, kind):
            name = render_label(cat.label)
            nodes.append(GraphNode(name, f"{name}: {cat.category_code}", kind.column))
    return nodes


def emit_causality_dag(corpus: Corpus, node_level: bool = False,
                       min_width: float = 1.0, max_width: float = 6.0) -> GraphDoc:
    """The tripartite causality DAG: three ranked columns linked by
    thickness-weighted aggregator edges."""
    if node_level:
        nodes = []
        for node in sorted(corpus.nodes, key=lambda n: _label_key(render_label(n.label))):
            name = render_label(node.label)
            nodes.append(GraphNode(name, f"{name}: {node.code}", node.kind.column))
    else:
        nodes = _category_columns(corpus)
    links = aggregate_links(corpus, node_level, min_width, max_width)
    edges = tuple(GraphEdge(l.source, l.target, l.thickness) for l in links)
    return GraphDoc("causality", ("P", "A", "D"), tuple(nodes), edges)


# Fixed categorical palette; triad polylines cycle through it.
PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
)


def emit_triads_graphic(corpus: Corpus, min_width: float = 1.0, max_width: float = 6.0) -> GraphDoc:
    """One polyline per distinct category triad, bending at its approach
    node, with the most used triads drawn thickest."""
    triads = category_triads(corpus)
    nodes = _category_columns(corpus)
    edges: list[GraphEdge] = []
    if triads:
        scale = thickness_scale([t.count for t in triads], min_width, max_width)
        for i, triad in enumerate(triads):
            width = scale[triad.count]
            color = PALETTE[i % len(PALETTE)]
            edges.append(GraphEdge(triad.p, triad.a, width, color=color))
            edges.append(GraphEdge(triad.a, triad.d, width, color=color))
    return GraphDoc("triads", ("P", "A", "D"), tuple(nodes), tuple(edges))


def pa_dyad_shares(corpus: Corpus, problem_label: str,
                   count_mode: str = "occurrence") -> list[tuple[str, int, Fraction]]:
    """Approach categories paired with one problem category, each with its
    raw count and share of that problem's pairings.

    count_mode "occurrence" counts triads; "ru-binary" counts research units
    containing the dyad at least once.
    """
    if count_mode not in ("occurrence", "ru-binary"):
        raise GraphicsError(f"unknown dyad count mode {count_mode!r}")
    from .model import parse_label

    wanted = parse_label(problem_label)
    if wanted.kind is not Kind.PROBLEM:
        raise GraphicsError(f"{problem_label} is not a problem-category label")
    tops = {c.label.category for c in _top_categories(corpus, Kind.PROBLEM)}
    if wanted.subcategory is not None or wanted.item is not None or wanted.category not in tops:
        raise GraphicsError(f"no problem category labeled {problem_label}")

    counts: dict[int, int] = {}
    if count_mode == "occurrence":
        for ru, i, triad in corpus.triad_census():
            where = f"ru:{ru.id}/triad:{i}"
            if _category_of(corpus, triad.p, where) != wanted.category:
                continue
            a_cat = _category_of(corpus, triad.a, where)
            counts[a_cat] = counts.get(a_cat, 0) + 1
    else:
        for ru in corpus.research_units:
            seen: set[int] = set()
            for i, triad in enumerate(ru.triads):
                where = f"ru:{ru.id}/triad:{i}"
                if _category_of(corpus, triad.p, where) != wanted.category:
                    continue
                seen.add(_category_of(corpus, triad.a, where))
            for a_cat in seen:
                counts[a_cat] = counts.get(a_cat, 0) + 1
    total = sum(counts.values())
    return [
        (f"A{a_cat}", counts[a_cat], Fraction(counts[a_cat], total))
        for a_cat in sorted(counts)
    ]


def emit_pa_dyads(corpus: Corpus, problem_label: str, count_mode: str = "occurrence",
                  min_width: float = 1.0, max_width: float = 6.0) -> GraphDoc:
    """Star graphic for one problem category: every approach category used
    against it, with percentage labels that sum to 100 up to rounding."""
    shares = pa_dyad_shares(corpus, problem_label, count_mode)
    categories = {render_label(c.label): c for c in corpus.categories}
    problem = categories[problem_label]
    nodes = [GraphNode(problem_label, f"{problem_label}: {problem.category_code}", 0)]
    edges: list[GraphEdge] = []
    if shares:
        scale = thickness_scale([count for _, count, _ in shares], min_width, max_width)
        for a_label, count, share in shares:
            cat = categories[a_label]
            nodes.append(GraphNode(a_label, f"{a_label}: {cat.category_code}", 1))
            edges.append(
                GraphEdge(problem_label, a_label, scale[count], label=f"{percent_string(share)}%")
            )
    return GraphDoc(f"dyads_{problem_label}", ("P", "A"), tuple(nodes), tuple(edges))


def emit_taxonomy(corpus: Corpus, kind: Kind) -> GraphDoc:
    """Forest of category-nodes of one kind via parent links, each node
    annotated with its occurrence share."""
    cats = [c for c in corpus.categories if c.kind is kind]
    by_id = {c.id: c for c in cats}

    def depth(cat: CategoryNode) -> int:
        steps = 0
        seen = {cat.id}
        cursor = cat.parent
        while cursor is not None:
            if cursor in seen or cursor not in by_id:
                raise GraphicsError(f"broken or cyclic parent chain at category {cat.id}")
            seen.add(cursor)
            steps += 1
            cursor = by_id[cursor].parent
        return steps

    levels = {c.id: depth(c) for c in cats}
    max_depth = max(levels.values(), default=0)
    nodes = []
    for cat in sorted(cats, key=lambda c: _label_key(render_label(c.label))):
        name = render_label(cat.label)
        share = category_share(corpus, cat)
        nodes.append(
            GraphNode(name, f"{name}: {cat.category_code} ({percent_string(share)}%)", levels[cat.id])
        )
    edges = []
    for cat in cats:
        if cat.parent is not None:
            edges.append(GraphEdge(render_label(by_id[cat.parent].label), render_label(cat.label), 1.0))
    edges.sort(key=lambda e: (_label_key(e.source), _label_key(e.target)))
    columns = tuple(f"level {i}" for i in range(max_depth + 1)) or ("level 0",)
    return GraphDoc(f"taxonomy_{kind.letter}", columns, tuple(nodes), tuple(edges), rankdir="TB")


# -- DOT emission ---------------------------------------------------------


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(doc: GraphDoc) -> str:
    """Deterministic DOT text: stable ordering, no timestamps."""
    lines = [f"digraph {doc.name} {{"]
    lines.append(f"  rankdir={doc.rankdir};")
    lines.append("  node [shape=box];")
    for column, title in enumerate(doc.columns):
        lines.append(f"  {{ rank=same; /* {title} */")
        for node in doc.nodes:
            if node.column == column:
                lines.append(f"    {_quote(node.name)} [label={_quote(node.text)}];")
        lines.append("  }")
    for edge in doc.edges:
        attrs = []
        if edge.color:
            attrs.append(f"color={_quote(edge.color)}")
        if edge.label:
            attrs.append(f"label={_quote(edge.label)}")
        attrs.append(f"penwidth={edge.penwidth:.2f}")
        lines.append(f"  {_quote(edge.source)} -> {_quote(edge.target)} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- SVG rendering --------------------------------------------------------

_NODE_W = 220
_NODE_H = 36
_COL_GAP = 160
_ROW_GAP = 28
_MARGIN = 40


def builtin_svg(doc: GraphDoc) -> str:
    """Layered fallback renderer: fixed columns, even spacing, straight edges."""
    columns: dict[int, list[GraphNode]] = {}
    for node in doc.nodes:
        columns.setdefault(node.column, []).append(node)
    n_cols = max(len(doc.columns), (max(columns) + 1) if columns else 0)
    tallest = max((len(v) for v in columns.values()), default=0)

    horizontal = doc.rankdir == "LR"
    if horizontal:
        width = _MARGIN * 2 + n_cols * _NODE_W + (n_cols - 1) * _COL_GAP
        height = _MARGIN * 2 + max(tallest, 1) * (_NODE_H + _ROW_GAP)
    else:
        width = _MARGIN * 2 + max(tallest, 1) * (_NODE_W + _ROW_GAP)
        height = _MARGIN * 2 + n_cols * (_NODE_H + _COL_GAP // 2)

    boxes: dict[str, tuple[float, float]] = {}
    for column, members in sorted(columns.items()):
        for row, node in enumerate(members):
            if horizontal:
                x = _MARGIN + column * (_NODE_W + _COL_GAP)
                y = _MARGIN + row * (_NODE_H + _ROW_GAP)
            else:
                x = _MARGIN + row * (_NODE_W + _ROW_GAP)
                y = _MARGIN + column * (_NODE_H + _COL_GAP // 2)
            boxes[node.name] = (x, y)

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f"  <title>{escape(doc.name)}</title>",
        '  <g font-family="monospace" font-size="12">',
    ]
    for edge in doc.edges:
        if edge.source not in boxes or edge.target not in boxes:
            continue
        sx, sy = boxes[edge.source]
        tx, ty = boxes[edge.target]
        if horizontal:
            x1, y1 = sx + _NODE_W, sy + _NODE_H / 2
            x2, y2 = tx, ty + _NODE_H / 2
        else:
            x1, y1 = sx + _NODE_W / 2, sy + _NODE_H
            x2, y2 = tx + _NODE_W / 2, ty
        color = edge.color or "#555555"
        parts.append(
            f'    <line x1="{x1:.1f}" y1="{y1:.1f}" x2="{x2:.1f}" y2="{y2:.1f}" '
            f'stroke={quoteattr(color)} stroke-width="{edge.penwidth:.2f}"/>'
        )
        if edge.label:
            mx, my = (x1 + x2) / 2, (y1 + y2) / 2 - 4
            parts.append(
                f'    <text x="{mx:.1f}" y="{my:.1f}" text-anchor="middle">{escape(edge.label)}</text>'
            )
    for node in doc.nodes:
        x, y = boxes[node.name]
        parts.append(
            f'    <rect x="{x:.1f}" y="{y:.1f}" width="{_NODE_W}" height="{_NODE_H}" '
            'fill="#f5f5f5" stroke="#333333"/>'
        )
        parts.append(
            f'    <text x="{x + 8:.1f}" y="{y + _NODE_H / 2 + 4:.1f}">{escape(node.text)}</text>'
        )
    parts.append("  </g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render_svg(doc: GraphDoc, layout_cmd: str | None = None) -> str:
    """Render to SVG through an external layout tool when one is reachable,
    falling back to the built-in layered layout otherwise.

    The tool defaults to ``dot`` and can be overridden with the
    PADKIT_LAYOUT_CMD environment variable.
    """
    command = layout_cmd if layout_cmd is not None else os.environ.get("PADKIT_LAYOUT_CMD", "dot")
    if command:
        try:
            result = subprocess.run(
                [*shlex.split(command), "-Tsvg"],
                input=doc.to_dot().encode("utf-8"),
                capture_output=True,
                timeout=30,
            )
            if result.returncode == 0 and result.stdout:
                return result.stdout.decode("utf-8")
        except (OSError, subprocess.SubprocessError):
            pass
    return builtin_svg(doc)
