"""Frequency statistics over a categorized corpus.

Seven statistics at category granularity: challenge frequency and research
interest for problems, approach diversity per problem, occurrence and
utility for approaches, occurrence for developments, plus the constant
challenges-per-RU ratio. All arithmetic is exact rational; percentages are
rendered to one decimal place only at the edge.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction

from .model import CategoryNode, Corpus, Kind, Node, PadkitError, render_label


class MetricsError(PadkitError):
    pass


class EmptyCorpusError(MetricsError):
    """The corpus has no research units or no triads to count."""


@dataclass(frozen=True)
class MetricRow:
    label: str
    category_code: str
    value: Fraction
    percent: str


@dataclass(frozen=True)
class MetricTable:
    metric: str
    kind: Kind
    rows: tuple[MetricRow, ...]
    denominators: dict[str, int]

    def value_of(self, label: str) -> Fraction:
        for row in self.rows:
            if row.label == label:
                return row.value
        raise KeyError(label)

    def as_mapping(self) -> dict[str, Fraction]:
        return {row.label: row.value for row in self.rows}

    def total(self) -> Fraction:
        return sum((row.value for row in self.rows), Fraction(0))

    def to_csv(self) -> bytes:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["label", "category_code", "value_numerator", "value_denominator", "percent"])
        for row in self.rows:
            writer.writerow(
                [row.label, row.category_code, row.value.numerator, row.value.denominator, row.percent]
            )
        return out.getvalue().encode("utf-8")


def percent_string(value: Fraction) -> str:
    """Render a [0,1] rational as a percentage with one decimal, half-up."""
    tenths = int(value * 1000 + Fraction(1, 2))
    return f"{tenths // 10}.{tenths % 10}"


class _View:
    """Category-level view of a corpus: every triad node resolved to the
    top-level category number of its kind."""

    def __init__(self, corpus: Corpus):
        self.corpus = corpus
        self.nodes = corpus.node_index()
        self.top: dict[Kind, list[CategoryNode]] = {k: [] for k in Kind}
        for cat in corpus.categories:
            if cat.label.subcategory is None:
                self.top[cat.kind].append(cat)
        for cats in self.top.values():
            cats.sort(key=lambda c: c.label.category)

    def require_triads(self) -> None:
        if not self.corpus.research_units:
            raise EmptyCorpusError("corpus has no research units")
        if not any(ru.triads for ru in self.corpus.research_units):
            raise EmptyCorpusError("corpus has no triads")

    def category_of(self, node_id: str, where: str) -> int:
        node = self.nodes[node_id]
        if not node.is_grouped:
            raise MetricsError(
                f"{where}: node {render_label(node.label)} is still ungrouped; "
                "metrics need a fully categorized corpus"
            )
        return node.label.category

    def table(self, metric: str, kind: Kind, numerators: dict[int, int],
              denominator: int, denominators: dict[str, int]) -> MetricTable:
        rows = []
        for cat in self.top[kind]:
            value = Fraction(numerators.get(cat.label.category, 0), denominator)
            rows.append(
                MetricRow(render_label(cat.label), cat.category_code, value, percent_string(value))
            )
        return MetricTable(metric, kind, tuple(rows), denominators)


def _ru_category_presence(view: _View, kind: Kind) -> dict[int, int]:
    """Per category: number of RUs containing at least one triad of it."""
    counts: dict[int, int] = {}
    for ru in view.corpus.research_units:
        present: set[int] = set()
        for i, triad in enumerate(ru.triads):
            where = f"ru:{ru.id}/triad:{i}"
            present.add(view.category_of(triad.slot(kind), where))
        for category in present:
            counts[category] = counts.get(category, 0) + 1
    return counts


def _member_presence(view: _View, kind: Kind) -> tuple[dict[int, int], int]:
    """Per category: member-node presences summed over RUs, each member
    counting at most once per RU however many triads repeat it."""
    counts: dict[int, int] = {}
    total = 0
    for ru in view.corpus.research_units:
        present: set[str] = set()
        for i, triad in enumerate(ru.triads):
            where = f"ru:{ru.id}/triad:{i}"
            node_id = triad.slot(kind)
            view.category_of(node_id, where)
            present.add(node_id)
        for node_id in present:
            category = view.nodes[node_id].label.category
            counts[category] = counts.get(category, 0) + 1
            total += 1
    return counts, total


def f_p(corpus: Corpus) -> MetricTable:
    """Fraction of research units tackling each problem category."""
    view = _View(corpus)
    view.require_triads()
    counts = _ru_category_presence(view, Kind.PROBLEM)
    n_ru = len(corpus.research_units)
    return view.table("f_p", Kind.PROBLEM, counts, n_ru, {"research_units": n_ru})


def r_p(corpus: Corpus) -> MetricTable:
    """Research interest: each problem category's share of all challenge presences."""
    view = _View(corpus)
    view.require_triads()
    counts = _ru_category_presence(view, Kind.PROBLEM)
    total = sum(counts.values())
    return view.table("r_p", Kind.PROBLEM, counts, total, {"category_presences": total})


def avg_challenges_per_ru(corpus: Corpus) -> Fraction:
    """Total challenge-category presences over the RU count. Equals the
    constant ratio between the two problem tables wherever both are nonzero."""
    view = _View(corpus)
    view.require_triads()
    counts = _ru_category_presence(view, Kind.PROBLEM)
    return Fraction(sum(counts.values()), len(corpus.research_units))


def w_p(corpus: Corpus, node_level: bool = False) -> MetricTable:
    """Approach diversity: each problem category's share of the unique
    problem-approach dyad set. Dyads pair categories by default; pass
    node_level=True to pair individual nodes instead."""
    view = _View(corpus)
    view.require_triads()
    dyads: set[tuple] = set()
    for ru, i, triad in corpus.triad_census():
        where = f"ru:{ru.id}/triad:{i}"
        p_cat = view.category_of(triad.p, where)
        view.category_of(triad.a, where)
        if node_level:
            dyads.add((p_cat, triad.p, triad.a))
        else:
            dyads.add((p_cat, view.nodes[triad.a].label.category))
    counts: dict[int, int] = {}
    for dyad in dyads:
        counts[dyad[0]] = counts.get(dyad[0], 0) + 1
    total = len(dyads)
    return view.table("w_p", Kind.PROBLEM, counts, total, {"unique_dyads": total})


def r_a(corpus: Corpus) -> MetricTable:
    """Occurrence share of each approach category, counted per member per RU."""
    view = _View(corpus)
    view.require_triads()
    counts, total = _member_presence(view, Kind.APPROACH)
    return view.table("r_a", Kind.APPROACH, counts, total, {"member_presences": total})


def u_a(corpus: Corpus) -> MetricTable:
    """Utility share of each approach category: its fraction of all triads."""
    view = _View(corpus)
    view.require_triads()
    counts: dict[int, int] = {}
    total = 0
    for ru, i, triad in corpus.triad_census():
        category = view.category_of(triad.a, f"ru:{ru.id}/triad:{i}")
        counts[category] = counts.get(category, 0) + 1
        total += 1
    return view.table("u_a", Kind.APPROACH, counts, total, {"triads": total})


def r_d(corpus: Corpus) -> MetricTable:
    """Occurrence share of each development category, counted per member per RU."""
    view = _View(corpus)
    view.require_triads()
    counts, total = _member_presence(view, Kind.DEVELOPMENT)
    return view.table("r_d", Kind.DEVELOPMENT, counts, total, {"member_presences": total})


TABLE_METRICS = ("f_p", "r_p", "w_p", "r_a", "u_a", "r_d")


def all_tables(corpus: Corpus) -> dict[str, MetricTable]:
    return {
        "f_p": f_p(corpus),
        "r_p": r_p(corpus),
        "w_p": w_p(corpus),
        "r_a": r_a(corpus),
        "u_a": u_a(corpus),
        "r_d": r_d(corpus),
    }


def category_share(corpus: Corpus, category: CategoryNode) -> Fraction:
    """Occurrence share of one category-node, used to annotate taxonomies.

    Problems use RU-presence of the category prefix; approaches and
    developments use member presences, mirroring their tables. Top-level
    category-nodes therefore match their table rows; subcategories get the
    share of their own slice.
    """
    view = _View(corpus)
    try:
        view.require_triads()
    except EmptyCorpusError:
        return Fraction(0)

    def in_scope(node: Node) -> bool:
        if not node.is_grouped or node.kind is not category.kind:
            return False
        if node.label.category != category.label.category:
            return False
        sub = category.label.subcategory
        return sub is None or node.label.subcategory == sub

    if category.kind is Kind.PROBLEM:
        hits = 0
        total = 0
        presence = _ru_category_presence(view, Kind.PROBLEM)
        total = sum(presence.values())
        for ru in view.corpus.research_units:
            if any(in_scope(view.nodes[t.p]) for t in ru.triads):
                hits += 1
        return Fraction(hits, total) if total else Fraction(0)

    kind = category.kind
    counts, total = _member_presence(view, kind)
    if not total:
        return Fraction(0)
    hits = 0
    for ru in view.corpus.research_units:
        present = {t.slot(kind) for t in ru.triads}
        hits += sum(1 for node_id in present if in_scope(view.nodes[node_id]))
    return Fraction(hits, total)
