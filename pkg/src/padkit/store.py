"""Corpus persistence: CSV tables for nodes and triads, canonical JSON.

The CSV pair mirrors published per-study spreadsheets (one node per row,
one triad per row); the JSON document is the lossless canonical form and
round-trips a corpus exactly.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import IO

from .model import (
    KINDS,
    CategoryNode,
    Corpus,
    Kind,
    Label,
    LabelError,
    Node,
    PadkitError,
    ResearchUnit,
    Triad,
    parse_label,
    render_label,
    validate_corpus,
)

NODES_HEADER = ("label", "code", "category_code")
TRIADS_HEADER = ("ru_id", "p", "a", "d")


class StoreError(PadkitError):
    """Raised for unreadable tables, schema violations and failed assembly."""


class CsvError(StoreError):
    def __init__(self, row: int, message: str):
        super().__init__(f"row {row}: {message}")
        self.row = row


class SchemaError(StoreError):
    def __init__(self, pointer: str, message: str):
        super().__init__(f"{pointer}: {message}")
        self.pointer = pointer


class AssemblyError(StoreError):
    pass


@dataclass(frozen=True)
class NodesTableRow:
    label: str
    code: str
    category_code: str
    row: int = 0


@dataclass(frozen=True)
class TriadsTableRow:
    ru_id: str
    p_label: str
    a_label: str
    d_label: str
    row: int = 0


def _reader(stream: bytes | str | IO[bytes]) -> csv.reader:
    if isinstance(stream, bytes):
        text = stream.decode("utf-8")
    elif isinstance(stream, str):
        text = stream
    else:
        text = stream.read().decode("utf-8")
    return csv.reader(io.StringIO(text))


def _check_fields(row_no: int, fields: list[str], expected: int) -> list[str]:
    if len(fields) != expected:
        raise CsvError(row_no, f"expected {expected} columns, found {len(fields)}")
    cleaned = [f.strip() for f in fields]
    for f in cleaned:
        if "\n" in f or "\r" in f:
            raise CsvError(row_no, "embedded newlines are not allowed")
    return cleaned


def load_nodes_csv(stream: bytes | str | IO[bytes]) -> list[NodesTableRow]:
    """Read the one-node-per-row table. Header: ``label,code,category_code``."""
    rows: list[NodesTableRow] = []
    reader = _reader(stream)
    header = next(reader, None)
    if header is None or tuple(f.strip() for f in header) != NODES_HEADER:
        raise CsvError(1, f"missing or wrong header, expected {','.join(NODES_HEADER)}")
    for row_no, fields in enumerate(reader, start=2):
        if not fields:
            continue
        label, code, category_code = _check_fields(row_no, fields, 3)
        try:
            parse_label(label)
        except LabelError as exc:
            raise CsvError(row_no, str(exc)) from exc
        if not code:
            raise CsvError(row_no, "code text is empty")
        rows.append(NodesTableRow(label, code, category_code, row_no))
    return rows


def load_triads_csv(stream: bytes | str | IO[bytes]) -> list[TriadsTableRow]:
    """Read the one-triad-per-row table. Header: ``ru_id,p,a,d``."""
    rows: list[TriadsTableRow] = []
    reader = _reader(stream)
    header = next(reader, None)
    if header is None or tuple(f.strip() for f in header) != TRIADS_HEADER:
        raise CsvError(1, f"missing or wrong header, expected {','.join(TRIADS_HEADER)}")
    for row_no, fields in enumerate(reader, start=2):
        if not fields:
            continue
        ru_id, p, a, d = _check_fields(row_no, fields, 4)
        if not ru_id:
            raise CsvError(row_no, "ru_id is empty")
        for text, kind in ((p, Kind.PROBLEM), (a, Kind.APPROACH), (d, Kind.DEVELOPMENT)):
            try:
                label = parse_label(text)
            except LabelError as exc:
                raise CsvError(row_no, str(exc)) from exc
            if label.kind is not kind:
                raise CsvError(
                    row_no,
                    f"{text} is a {label.kind.letter}-label but sits in the {kind.letter.lower()} column",
                )
        rows.append(TriadsTableRow(ru_id, p, a, d, row_no))
    return rows


def assemble_corpus(
    nodes: list[NodesTableRow], triads: list[TriadsTableRow]
) -> Corpus:
    """Build a validated corpus from the two tables.

    Category-nodes are inferred from grouped labels plus the category_code
    column; node provenance is derived from triad membership. Assembly fails
    if the result would not pass validation.
    """
    node_objects: list[Node] = []
    by_label: dict[tuple[Kind, str], str] = {}
    for i, row in enumerate(nodes, start=1):
        label = parse_label(row.label)
        rendered = render_label(label)
        key = (label.kind, rendered)
        if key in by_label:
            raise AssemblyError(f"row {row.row}: duplicate label {rendered}")
        if label.item is None and row.category_code:
            raise AssemblyError(f"row {row.row}: ungrouped node {rendered} must leave category_code empty")
        if label.item is not None and not row.category_code:
            raise AssemblyError(f"row {row.row}: grouped node {rendered} is missing its category_code")
        node_id = f"n{i}"
        by_label[key] = node_id
        node_objects.append(Node(node_id, label.kind, row.code, label))

    # Infer category-nodes from grouped labels. Keys: (kind, x) and (kind, x, y).
    texts: dict[tuple, str] = {}
    members: dict[tuple, list[tuple[int, str]]] = {}
    for node, row in zip(node_objects, nodes):
        label = node.label
        if label.item is None:
            continue
        top = (label.kind, label.category)
        members.setdefault(top, [])
        owner = top if label.subcategory is None else (label.kind, label.category, label.subcategory)
        members.setdefault(owner, []).append((label.item, node.id))
        previous = texts.get(owner)
        if previous is None:
            texts[owner] = row.category_code
        elif previous != row.category_code:
            raise AssemblyError(
                f"row {row.row}: category text {row.category_code!r} disagrees with {previous!r}"
            )

    category_objects: list[CategoryNode] = []
    cat_ids: dict[tuple, str] = {}
    ordered_keys = sorted(members, key=lambda k: (k[0].column, k[1], k[2] if len(k) > 2 else 0))
    for i, key in enumerate(ordered_keys, start=1):
        cat_ids[key] = f"c{i}"
    for key in ordered_keys:
        kind, category = key[0], key[1]
        sub = key[2] if len(key) > 2 else None
        label = Label(kind, category, subcategory=sub)
        # A top-level category whose members all sit in subcategories never
        # appears in the category_code column; its label stands in as text.
        text = texts.get(key) or render_label(label)
        ordered_members = tuple(nid for _, nid in sorted(members[key]))
        parent = cat_ids.get((kind, category)) if sub is not None else None
        category_objects.append(CategoryNode(cat_ids[key], kind, text, label, ordered_members, parent))

    # Research units, in file order, rejecting duplicate triads inside one RU.
    ru_order: list[str] = []
    ru_triads: dict[str, list[Triad]] = {}
    sources: dict[str, set[str]] = {}
    for row in triads:
        triad_ids = []
        for text in (row.p_label, row.a_label, row.d_label):
            rendered = render_label(parse_label(text))
            key = (parse_label(text).kind, rendered)
            node_id = by_label.get(key)
            if node_id is None:
                raise AssemblyError(f"row {row.row}: triad references unknown label {rendered}")
            triad_ids.append(node_id)
            sources.setdefault(node_id, set()).add(row.ru_id)
        triad = Triad(*triad_ids)
        if row.ru_id not in ru_triads:
            ru_order.append(row.ru_id)
            ru_triads[row.ru_id] = []
        if triad in ru_triads[row.ru_id]:
            raise AssemblyError(f"row {row.row}: duplicate triad within {row.ru_id}")
        ru_triads[row.ru_id].append(triad)

    node_objects = [
        Node(n.id, n.kind, n.code, n.label, tuple(sorted(sources.get(n.id, ()))))
        for n in node_objects
    ]
    research_units = tuple(
        ResearchUnit(ru_id, "", tuple(ru_triads[ru_id])) for ru_id in ru_order
    )

    ungrouped_seq = {k.letter: 0 for k in KINDS}
    category_seq = {k.letter: 0 for k in KINDS}
    subcategory_seq: dict[str, int] = {}
    for node in node_objects:
        if not node.is_grouped:
            letter = node.kind.letter
            ungrouped_seq[letter] = max(ungrouped_seq[letter], node.label.category)
    for cat in category_objects:
        letter = cat.kind.letter
        category_seq[letter] = max(category_seq[letter], cat.label.category)
        if cat.label.subcategory is not None:
            top = render_label(Label(cat.kind, cat.label.category))
            subcategory_seq[top] = max(subcategory_seq.get(top, 0), cat.label.subcategory)

    corpus = Corpus(
        research_units=research_units,
        nodes=tuple(node_objects),
        categories=tuple(category_objects),
        ungrouped_seq=ungrouped_seq,
        category_seq=category_seq,
        subcategory_seq=subcategory_seq,
        node_id_seq=len(node_objects),
        category_id_seq=len(category_objects),
    )
    report = validate_corpus(corpus)
    if not report.ok:
        details = "; ".join(f"{i.location}: {i.message}" for i in report.errors)
        raise AssemblyError(f"assembled corpus fails validation: {details}")
    return corpus


def save_nodes_csv(corpus: Corpus) -> bytes:
    """Emit the nodes table in registry order, LF line endings."""
    owner_text: dict[str, str] = {}
    for cat in corpus.categories:
        for member in cat.members:
            owner_text[member] = cat.category_code
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(NODES_HEADER)
    for node in corpus.nodes:
        writer.writerow([render_label(node.label), node.code, owner_text.get(node.id, "")])
    return out.getvalue().encode("utf-8")


def save_triads_csv(corpus: Corpus) -> bytes:
    """Emit the triads table in research-unit order, LF line endings."""
    nodes = corpus.node_index()
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(TRIADS_HEADER)
    for ru in corpus.research_units:
        for triad in ru.triads:
            writer.writerow(
                [ru.id] + [render_label(nodes[nid].label) for nid in (triad.p, triad.a, triad.d)]
            )
    return out.getvalue().encode("utf-8")


def corpus_document(corpus: Corpus) -> dict:
    """The corpus as a plain JSON-ready dictionary."""
    return {
        "research_units": [
            {
                "id": ru.id,
                "citation": ru.citation,
                "triads": [{"p": t.p, "a": t.a, "d": t.d} for t in ru.triads],
            }
            for ru in corpus.research_units
        ],
        "nodes": [
            {
                "id": n.id,
                "kind": n.kind.letter,
                "label": render_label(n.label),
                "code": n.code,
                "sources": list(n.sources),
            }
            for n in corpus.nodes
        ],
        "categories": [
            {
                "id": c.id,
                "kind": c.kind.letter,
                "label": render_label(c.label),
                "category_code": c.category_code,
                "members": list(c.members),
                "parent": c.parent,
            }
            for c in corpus.categories
        ],
        "counters": {
            "ungrouped": dict(sorted(corpus.ungrouped_seq.items())),
            "category": dict(sorted(corpus.category_seq.items())),
            "subcategory": dict(sorted(corpus.subcategory_seq.items())),
            "node_id": corpus.node_id_seq,
            "category_id": corpus.category_id_seq,
        },
    }


def save_corpus_json(corpus: Corpus) -> bytes:
    """Canonical JSON document: sorted keys, registry-ordered arrays, LF-terminated."""
    document = corpus_document(corpus)
    return (json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def _expect(value, types, pointer: str, what: str):
    if not isinstance(value, types):
        raise SchemaError(pointer, f"expected {what}")
    return value


def _expect_str(value, pointer: str, allow_empty: bool = True) -> str:
    text = _expect(value, str, pointer, "a string")
    if not allow_empty and not text:
        raise SchemaError(pointer, "must not be empty")
    return text


def load_corpus_json(stream: bytes | str | IO[bytes]) -> Corpus:
    """Parse the canonical JSON document back into a corpus.

    Schema violations raise with a JSON-pointer-style location. Counters are
    optional in the document; missing ones are rebuilt from the registries.
    """
    if isinstance(stream, bytes):
        text = stream.decode("utf-8")
    elif isinstance(stream, str):
        text = stream
    else:
        text = stream.read().decode("utf-8")
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("/", f"not valid JSON: {exc}") from exc

    root = _expect(document, dict, "/", "an object")
    for key in ("research_units", "nodes", "categories"):
        if key not in root:
            raise SchemaError(f"/{key}", "missing required member")

    nodes: list[Node] = []
    for i, entry in enumerate(_expect(root["nodes"], list, "/nodes", "an array")):
        pointer = f"/nodes/{i}"
        obj = _expect(entry, dict, pointer, "an object")
        node_id = _expect_str(obj.get("id"), f"{pointer}/id", allow_empty=False)
        kind_letter = _expect_str(obj.get("kind"), f"{pointer}/kind", allow_empty=False)
        try:
            kind = Kind.from_letter(kind_letter)
            label = parse_label(_expect_str(obj.get("label"), f"{pointer}/label"))
        except LabelError as exc:
            raise SchemaError(pointer, str(exc)) from exc
        code = _expect_str(obj.get("code"), f"{pointer}/code")
        raw_sources = _expect(obj.get("sources", []), list, f"{pointer}/sources", "an array")
        sources = tuple(
            _expect_str(s, f"{pointer}/sources/{j}") for j, s in enumerate(raw_sources)
        )
        nodes.append(Node(node_id, kind, code, label, sources))

    categories: list[CategoryNode] = []
    for i, entry in enumerate(_expect(root["categories"], list, "/categories", "an array")):
        pointer = f"/categories/{i}"
        obj = _expect(entry, dict, pointer, "an object")
        cat_id = _expect_str(obj.get("id"), f"{pointer}/id", allow_empty=False)
        kind_letter = _expect_str(obj.get("kind"), f"{pointer}/kind", allow_empty=False)
        try:
            kind = Kind.from_letter(kind_letter)
            label = parse_label(_expect_str(obj.get("label"), f"{pointer}/label")).as_category()
        except LabelError as exc:
            raise SchemaError(pointer, str(exc)) from exc
        text = _expect_str(obj.get("category_code"), f"{pointer}/category_code")
        raw_members = _expect(obj.get("members", []), list, f"{pointer}/members", "an array")
        members = tuple(
            _expect_str(m, f"{pointer}/members/{j}") for j, m in enumerate(raw_members)
        )
        parent = obj.get("parent")
        if parent is not None:
            parent = _expect_str(parent, f"{pointer}/parent")
        categories.append(CategoryNode(cat_id, kind, text, label, members, parent))

    research_units: list[ResearchUnit] = []
    for i, entry in enumerate(_expect(root["research_units"], list, "/research_units", "an array")):
        pointer = f"/research_units/{i}"
        obj = _expect(entry, dict, pointer, "an object")
        ru_id = _expect_str(obj.get("id"), f"{pointer}/id", allow_empty=False)
        citation = _expect_str(obj.get("citation", ""), f"{pointer}/citation")
        triads = []
        for j, t in enumerate(_expect(obj.get("triads", []), list, f"{pointer}/triads", "an array")):
            tp = f"{pointer}/triads/{j}"
            tobj = _expect(t, dict, tp, "an object")
            triads.append(
                Triad(
                    _expect_str(tobj.get("p"), f"{tp}/p", allow_empty=False),
                    _expect_str(tobj.get("a"), f"{tp}/a", allow_empty=False),
                    _expect_str(tobj.get("d"), f"{tp}/d", allow_empty=False),
                )
            )
        research_units.append(ResearchUnit(ru_id, citation, tuple(triads)))

    counters = root.get("counters", {})
    _expect(counters, dict, "/counters", "an object")

    def counter_map(name: str, fallback: dict[str, int]) -> dict[str, int]:
        raw = counters.get(name)
        if raw is None:
            return fallback
        obj = _expect(raw, dict, f"/counters/{name}", "an object")
        out: dict[str, int] = {}
        for key, value in obj.items():
            out[key] = _expect(value, int, f"/counters/{name}/{key}", "an integer")
        return out

    derived_ungrouped = {k.letter: 0 for k in KINDS}
    derived_category = {k.letter: 0 for k in KINDS}
    derived_sub: dict[str, int] = {}
    for n in nodes:
        if n.label.item is None and n.label.subcategory is None:
            derived_ungrouped[n.kind.letter] = max(
                derived_ungrouped[n.kind.letter], n.label.category
            )
    for c in categories:
        derived_category[c.kind.letter] = max(derived_category[c.kind.letter], c.label.category)
        if c.label.subcategory is not None:
            top = render_label(Label(c.kind, c.label.category))
            derived_sub[top] = max(derived_sub.get(top, 0), c.label.subcategory)

    ungrouped_seq = {**derived_ungrouped, **counter_map("ungrouped", derived_ungrouped)}
    category_seq = {**derived_category, **counter_map("category", derived_category)}
    subcategory_seq = {**derived_sub, **counter_map("subcategory", derived_sub)}

    node_id_seq = counters.get("node_id", len(nodes))
    category_id_seq = counters.get("category_id", len(categories))
    _expect(node_id_seq, int, "/counters/node_id", "an integer")
    _expect(category_id_seq, int, "/counters/category_id", "an integer")

    return Corpus(
        research_units=tuple(research_units),
        nodes=tuple(nodes),
        categories=tuple(categories),
        ungrouped_seq=ungrouped_seq,
        category_seq=category_seq,
        subcategory_seq=subcategory_seq,
        node_id_seq=node_id_seq,
        category_id_seq=category_id_seq,
    )


# Desk-scale fixture: three research units, six triads, seven categories.
# Small enough to enumerate by hand, rich enough that member-presence and
# triad-occurrence counting rules give different answers.
MINI3_NODES_CSV = b"""label,code,category_code
P1.1,attribute power to VMs,power model formulation
P1.2,model accuracy drift,power model formulation
P2.1,compare hypervisor energy,cross-genre comparison
A1.1,counter-based profiling,resource instrumentation
A1.2,perf event sampling,resource instrumentation
A2.1,external power meter,direct measurement
D1.1,linear regression model,regression power models
D1.2,piecewise model,regression power models
D2.1,synthetic workload suite,benchmark suites
D3.1,profiling toolkit,measurement toolkits
"""

MINI3_TRIADS_CSV = b"""ru_id,p,a,d
RU1,P1.1,A1.1,D1.1
RU1,P1.1,A2.1,D2.1
RU2,P2.1,A1.1,D1.1
RU2,P2.1,A1.1,D2.1
RU3,P1.2,A1.1,D3.1
RU3,P2.1,A1.2,D1.2
"""


def mini3_corpus() -> Corpus:
    """Assemble the MINI3 fixture through the regular CSV loaders."""
    return assemble_corpus(load_nodes_csv(MINI3_NODES_CSV), load_triads_csv(MINI3_TRIADS_CSV))
