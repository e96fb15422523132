"""Domain model for structural-coding corpora.

A corpus holds research units (RUs), each mined into causal triads of
problem, approach and development codes. Codes live in nodes, nodes are
grouped under category-nodes, and every entity carries a printable label
such as ``P7``, ``A1.23`` or ``D12.3.14``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field


class PadkitError(Exception):
    """Base class for all errors raised by this package."""


class LabelError(PadkitError):
    """A label string or label structure is malformed."""


class Kind(enum.Enum):
    """Structural code type. Column order Problem < Approach < Development is fixed."""

    PROBLEM = "P"
    APPROACH = "A"
    DEVELOPMENT = "D"

    @property
    def letter(self) -> str:
        return self.value

    @property
    def column(self) -> int:
        return _KIND_ORDER[self.value]

    @classmethod
    def from_letter(cls, letter: str) -> "Kind":
        try:
            return cls(letter)
        except ValueError:
            raise LabelError(f"unknown kind letter {letter!r}, expected one of P, A, D") from None

    def __lt__(self, other: "Kind") -> bool:
        return self.column < other.column


_KIND_ORDER = {"P": 0, "A": 1, "D": 2}

KINDS = (Kind.PROBLEM, Kind.APPROACH, Kind.DEVELOPMENT)


@dataclass(frozen=True)
class Label:
    """Structured identifier rendered as ``P/A/Dx.yz``.

    ``category`` is always present. ``subcategory`` and ``item`` are optional:
    a category-node label has no item, an ungrouped node's label has neither.
    """

    kind: Kind
    category: int
    subcategory: int | None = None
    item: int | None = None

    def __post_init__(self) -> None:
        for name in ("category", "subcategory", "item"):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise LabelError(f"label {name} must be a positive integer, got {value}")

    @property
    def is_category(self) -> bool:
        return self.item is None

    def render(self) -> str:
        return render_label(self)

    def as_category(self) -> "Label":
        """Reinterpret a parsed string as a category-node label.

        The one-dot form is shared: ``A1.2`` read as a node means item 2 of
        category 1, read as a category-node it means subcategory 2. Callers
        that know they are in category context use this to shift the reading.
        """
        if self.subcategory is not None and self.item is not None:
            raise LabelError(f"{self.render()!r} carries an item and cannot name a category")
        if self.item is not None:
            return Label(self.kind, self.category, subcategory=self.item)
        return self


def parse_label(text: str) -> Label:
    """Parse a label string such as ``P7``, ``A1.23`` or ``D12.3.14``.

    Grammar: a kind letter, a category number, then up to two dot-separated
    components. A one-dot suffix of exactly two digits after a single-digit
    category is the compact subcategory+item form (``A1.23`` means 1.2.3);
    any other one-dot suffix is an item. An empty middle component
    (``P1..12``) marks an absent subcategory next to a multi-digit item.
    """
    text = text.strip()
    if not text:
        raise LabelError("label is empty")
    kind = Kind.from_letter(text[0])
    body = text[1:]
    if not body:
        raise LabelError(f"label {text!r} is missing its category number")
    parts = body.split(".")
    if len(parts) > 3:
        raise LabelError(f"label {text!r} has more than three components")

    category = _parse_component(text, "category", parts[0])
    if len(parts) == 1:
        return Label(kind, category)
    if len(parts) == 3:
        item = _parse_component(text, "item", parts[2])
        if parts[1] == "":
            return Label(kind, category, item=item)
        return Label(kind, category, _parse_component(text, "subcategory", parts[1]), item)

    suffix = parts[1]
    if len(parts[0]) == 1 and len(suffix) == 2:
        # Compact x.yz form: both digits are components of their own.
        sub = _parse_component(text, "subcategory", suffix[0])
        item = _parse_component(text, "item", suffix[1])
        return Label(kind, category, sub, item)
    return Label(kind, category, item=_parse_component(text, "item", suffix))


def _parse_component(label: str, name: str, digits: str) -> int:
    if not digits:
        raise LabelError(f"label {label!r} has an empty {name} component")
    if not digits.isdigit():
        raise LabelError(f"label {label!r} has a non-numeric {name} component {digits!r}")
    if len(digits) > 1 and digits[0] == "0":
        raise LabelError(f"label {label!r} has a leading zero in its {name} component")
    value = int(digits)
    if value < 1:
        raise LabelError(f"label {label!r} has a zero {name} component")
    return value


def render_label(label: Label) -> str:
    """Canonical string form. Single-digit components render compact (``A1.23``),
    multi-digit components force explicit dots (``D12.3.14``)."""
    k, x, y, z = label.kind.letter, label.category, label.subcategory, label.item
    if y is None and z is None:
        return f"{k}{x}"
    if z is None:
        return f"{k}{x}.{y}"
    if y is None:
        if x <= 9 and 10 <= z <= 99:
            # One-dot two-digit suffixes belong to the compact x.yz reading,
            # so the absent subcategory keeps an explicit empty slot.
            return f"{k}{x}..{z}"
        return f"{k}{x}.{z}"
    if x <= 9 and y <= 9 and z <= 9:
        return f"{k}{x}.{y}{z}"
    return f"{k}{x}.{y}.{z}"


@dataclass(frozen=True)
class Node:
    """One mined code: kind, code text, display label and RU provenance."""

    id: str
    kind: Kind
    code: str
    label: Label
    sources: tuple[str, ...] = ()

    @property
    def is_grouped(self) -> bool:
        return self.label.item is not None


@dataclass(frozen=True)
class CategoryNode:
    """Category code text plus the ordered member nodes it groups."""

    id: str
    kind: Kind
    category_code: str
    label: Label
    members: tuple[str, ...] = ()
    parent: str | None = None


@dataclass(frozen=True)
class Triad:
    """One causal chain problem -> approach -> development inside an RU."""

    p: str
    a: str
    d: str

    def slot(self, kind: Kind) -> str:
        return {Kind.PROBLEM: self.p, Kind.APPROACH: self.a, Kind.DEVELOPMENT: self.d}[kind]


@dataclass(frozen=True)
class ResearchUnit:
    id: str
    citation: str = ""
    triads: tuple[Triad, ...] = ()


def _zero_counters() -> dict[str, int]:
    return {"P": 0, "A": 0, "D": 0}


@dataclass(frozen=True)
class Corpus:
    """Immutable corpus snapshot: RU registry, node and category registries,
    and the monotone counters behind label and id allocation.

    Counter dicts are treated as immutable; mutation goes through the
    categorizer session, which builds fresh snapshots.
    """

    research_units: tuple[ResearchUnit, ...] = ()
    nodes: tuple[Node, ...] = ()
    categories: tuple[CategoryNode, ...] = ()
    ungrouped_seq: dict[str, int] = field(default_factory=_zero_counters)
    category_seq: dict[str, int] = field(default_factory=_zero_counters)
    subcategory_seq: dict[str, int] = field(default_factory=dict)
    node_id_seq: int = 0
    category_id_seq: int = 0

    def node_index(self) -> dict[str, Node]:
        return {n.id: n for n in self.nodes}

    def category_index(self) -> dict[str, CategoryNode]:
        return {c.id: c for c in self.categories}

    def triad_census(self):
        """Yield (ru, index, triad) over the whole corpus in registry order."""
        for ru in self.research_units:
            for i, triad in enumerate(ru.triads):
                yield ru, i, triad


@dataclass(frozen=True)
class Issue:
    severity: str  # "error" or "warning"
    location: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    issues: tuple[Issue, ...] = ()

    @property
    def errors(self) -> tuple[Issue, ...]:
        return tuple(i for i in self.issues if i.severity == "error")

    @property
    def warnings(self) -> tuple[Issue, ...]:
        return tuple(i for i in self.issues if i.severity == "warning")

    @property
    def ok(self) -> bool:
        return not self.errors

    def render(self) -> str:
        if not self.issues:
            return "corpus valid: no issues\n"
        lines = [f"{i.severity}: {i.location}: {i.message}" for i in self.issues]
        return "\n".join(lines) + "\n"


def validate_corpus(corpus: Corpus) -> ValidationReport:
    """Check every corpus invariant and report violations as data.

    A clean corpus yields an empty report. Research units still waiting for
    triads are reported at warning severity only, since they are legal during
    data entry.
    """
    issues: list[Issue] = []

    def error(location: str, message: str) -> None:
        issues.append(Issue("error", location, message))

    def warning(location: str, message: str) -> None:
        issues.append(Issue("warning", location, message))

    nodes = corpus.node_index()
    categories = corpus.category_index()
    if len(nodes) != len(corpus.nodes):
        seen: set[str] = set()
        for n in corpus.nodes:
            if n.id in seen:
                error(f"node:{n.id}", "duplicate node id")
            seen.add(n.id)
    if len(categories) != len(corpus.categories):
        seen = set()
        for c in corpus.categories:
            if c.id in seen:
                error(f"category:{c.id}", "duplicate category id")
            seen.add(c.id)

    # Research units and triads.
    ru_ids: set[str] = set()
    for ru in corpus.research_units:
        loc = f"ru:{ru.id}"
        if ru.id in ru_ids:
            error(loc, "duplicate research unit id")
        ru_ids.add(ru.id)
        if not ru.triads:
            warning(loc, "research unit has no triads yet")
        seen_triads: set[Triad] = set()
        for i, triad in enumerate(ru.triads):
            if triad in seen_triads:
                error(f"{loc}/triad:{i}", "duplicate triad within one research unit")
            seen_triads.add(triad)
            for kind in KINDS:
                slot = kind.letter.lower()
                node_id = triad.slot(kind)
                node = nodes.get(node_id)
                if node is None:
                    error(f"{loc}/triad:{i}/{slot}", f"references missing node id {node_id!r}")
                elif node.kind is not kind:
                    error(
                        f"{loc}/triad:{i}/{slot}",
                        f"node {node_id!r} has kind {node.kind.letter}, slot requires {kind.letter}",
                    )

    # Nodes.
    rendered: dict[tuple[Kind, str], str] = {}
    membership: dict[str, list[str]] = {}
    for cat in corpus.categories:
        for member in cat.members:
            membership.setdefault(member, []).append(cat.id)
    for node in corpus.nodes:
        loc = f"node:{node.id}"
        if not node.code.strip():
            error(loc, "code text is empty")
        if node.label.kind is not node.kind:
            error(loc, f"label {node.label.render()} does not match node kind {node.kind.letter}")
        text = node.label.render()
        key = (node.kind, text)
        if key in rendered:
            error(loc, f"label {text} already used by node {rendered[key]}")
        else:
            rendered[key] = node.id
        owners = membership.get(node.id, [])
        if node.is_grouped:
            if not owners:
                error(loc, f"grouped node {text} belongs to no category")
            elif len(owners) > 1:
                error(loc, f"node {text} belongs to several categories: {', '.join(sorted(owners))}")
        else:
            if node.label.subcategory is not None:
                error(loc, f"ungrouped label {text} must not carry a subcategory")
            if owners:
                error(loc, f"ungrouped node {text} appears in category {owners[0]}")
            if node.label.category > corpus.ungrouped_seq.get(node.kind.letter, 0):
                error(loc, f"provisional number {node.label.category} is ahead of the pool counter")

    # Categories.
    rendered_cats: dict[tuple[Kind, str], str] = {}
    for cat in corpus.categories:
        loc = f"category:{cat.id}"
        if not cat.category_code.strip():
            error(loc, "category code text is empty")
        if cat.label.kind is not cat.kind:
            error(loc, f"label {cat.label.render()} does not match category kind {cat.kind.letter}")
        if cat.label.item is not None:
            error(loc, f"category label {cat.label.render()} must not carry an item")
        text = cat.label.render()
        key = (cat.kind, text)
        if key in rendered_cats:
            error(loc, f"label {text} already used by category {rendered_cats[key]}")
        else:
            rendered_cats[key] = cat.id
        for position, member_id in enumerate(cat.members, start=1):
            member = nodes.get(member_id)
            mloc = f"{loc}/member:{position}"
            if member is None:
                error(mloc, f"references missing node id {member_id!r}")
                continue
            if member.kind is not cat.kind:
                error(mloc, f"member {member_id} has kind {member.kind.letter}")
                continue
            expected = Label(cat.kind, cat.label.category, cat.label.subcategory, position)
            if member.label != expected:
                error(
                    mloc,
                    f"member {member_id} is labeled {member.label.render()}, "
                    f"expected {expected.render()} for its position",
                )
        if cat.label.category > corpus.category_seq.get(cat.kind.letter, 0):
            error(loc, f"category number {cat.label.category} is ahead of the category counter")
        if cat.label.subcategory is not None:
            parent_label = render_label(Label(cat.kind, cat.label.category))
            if cat.label.subcategory > corpus.subcategory_seq.get(parent_label, 0):
                error(loc, f"subcategory number {cat.label.subcategory} is ahead of its counter")

    # Parent links: same kind, top-level parents, no cycles.
    for cat in corpus.categories:
        loc = f"category:{cat.id}"
        if cat.parent is None:
            continue
        parent = categories.get(cat.parent)
        if parent is None:
            error(loc, f"parent {cat.parent!r} does not exist")
            continue
        if parent.kind is not cat.kind:
            error(loc, f"parent {parent.id} has kind {parent.kind.letter}")
        if parent.label.subcategory is not None:
            error(loc, f"parent {parent.label.render()} is itself a subcategory")
        if cat.label.subcategory is not None and parent.label.category != cat.label.category:
            error(
                loc,
                f"subcategory {cat.label.render()} must hang under {cat.label.category}, "
                f"not {parent.label.render()}",
            )
    for cat in corpus.categories:
        seen_ids = {cat.id}
        cursor = cat.parent
        while cursor is not None:
            if cursor in seen_ids:
                issues.append(Issue("error", f"category:{cat.id}", "cycle in parent links"))
                break
            seen_ids.add(cursor)
            parent = categories.get(cursor)
            cursor = parent.parent if parent else None

    issues.sort(key=lambda i: (i.location, i.severity, i.message))
    return ValidationReport(tuple(issues))
