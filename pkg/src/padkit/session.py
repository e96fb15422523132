"""Transactional categorization sessions.

Humans decide which codes are close in meaning; the session does the
bookkeeping: provisional numbering for the ungrouped pool, category
creation, item renumbering, and an append-only log that can replay the
whole run from the initial corpus.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, replace

from .model import (
    CategoryNode,
    Corpus,
    Kind,
    Label,
    Node,
    PadkitError,
    render_label,
    validate_corpus,
)


class SessionError(PadkitError):
    pass


class UnknownIdError(SessionError):
    pass


class AlreadyGroupedError(SessionError):
    pass


class NotGroupedError(SessionError):
    pass


class KindMismatchError(SessionError):
    pass


class MissingTextError(SessionError):
    pass


@dataclass(frozen=True)
class RelabelEntry:
    node_id: str
    old_label: str
    new_label: str
    reason: str


@dataclass(frozen=True)
class JournalEntry:
    """One committed operation with the arguments needed to re-run it."""

    op: str
    args: dict


@dataclass(frozen=True)
class PoolEntry:
    node: Node
    reviewed: bool


# The five answers a human can give for a code under review.
@dataclass(frozen=True)
class NoNeighbor:
    pass


@dataclass(frozen=True)
class KeepOrphan:
    pass


@dataclass(frozen=True)
class NearestIs:
    node_id: str


@dataclass(frozen=True)
class JoinCategory:
    category_id: str


@dataclass(frozen=True)
class SpawnNew:
    member_ids: tuple[str, ...]
    text: str


GroupingDecision = NoNeighbor | KeepOrphan | NearestIs | JoinCategory | SpawnNew


class Session:
    """Single-writer working state over an immutable corpus snapshot.

    Every operation either commits a snapshot that passes validation or
    raises and leaves the session untouched. Readers may hold on to
    ``session.corpus`` safely; it is never mutated in place.
    """

    def __init__(self, corpus: Corpus | None = None):
        corpus = corpus if corpus is not None else Corpus()
        report = validate_corpus(corpus)
        if not report.ok:
            raise SessionError(f"initial corpus is invalid: {report.errors[0].message}")
        self.initial_corpus = corpus
        self.corpus = corpus
        self.relabel_log: list[RelabelEntry] = []
        self.journal: list[JournalEntry] = []
        self.reviewed: set[str] = set()

    # -- lookups ---------------------------------------------------------

    def _node(self, node_id: str) -> Node:
        node = self.corpus.node_index().get(node_id)
        if node is None:
            raise UnknownIdError(f"no node with id {node_id!r}")
        return node

    def _category(self, category_id: str) -> CategoryNode:
        cat = self.corpus.category_index().get(category_id)
        if cat is None:
            raise UnknownIdError(f"no category with id {category_id!r}")
        return cat

    def _direct_owner(self, node_id: str) -> CategoryNode | None:
        for cat in self.corpus.categories:
            if node_id in cat.members:
                return cat
        return None

    def pool(self, kind: Kind) -> list[PoolEntry]:
        """Ungrouped codes of one kind, newest first, with review badges."""
        entries = [n for n in self.corpus.nodes if n.kind is kind and not n.is_grouped]
        entries.sort(key=lambda n: n.label.category, reverse=True)
        return [PoolEntry(n, n.id in self.reviewed) for n in entries]

    # -- commit machinery ------------------------------------------------

    def _commit(self, candidate: Corpus, entry: JournalEntry,
                relabels: list[RelabelEntry]) -> None:
        report = validate_corpus(candidate)
        if not report.ok:
            first = report.errors[0]
            raise SessionError(f"operation would corrupt the corpus: {first.location}: {first.message}")
        self.corpus = candidate
        self.journal.append(entry)
        self.relabel_log.extend(relabels)

    @staticmethod
    def _swap_nodes(corpus: Corpus, updates: dict[str, Node],
                    appended: tuple[Node, ...] = ()) -> tuple[Node, ...]:
        return tuple(updates.get(n.id, n) for n in corpus.nodes) + appended

    @staticmethod
    def _swap_categories(corpus: Corpus, updates: dict[str, CategoryNode],
                         appended: tuple[CategoryNode, ...] = (),
                         dropped: frozenset[str] = frozenset()) -> tuple[CategoryNode, ...]:
        kept = tuple(
            updates.get(c.id, c) for c in corpus.categories if c.id not in dropped
        )
        return kept + appended

    # -- operations ------------------------------------------------------

    def add_code(self, kind: Kind, text: str, source_ru: str) -> Node:
        """Add a mined code to the ungrouped pool of its kind.

        Re-adding the exact same code text merges into the existing node and
        only extends its provenance; indistinguishable codes are one node.
        """
        text = text.strip()
        if not text:
            raise MissingTextError("code text must not be empty")
        for node in self.corpus.nodes:
            if node.kind is kind and node.code == text:
                merged = replace(node, sources=tuple(sorted({*node.sources, source_ru})))
                candidate = replace(self.corpus, nodes=self._swap_nodes(self.corpus, {node.id: merged}))
                self._commit(
                    candidate,
                    JournalEntry("add_code", {"kind": kind.letter, "text": text, "ru": source_ru}),
                    [],
                )
                return merged
        number = self.corpus.ungrouped_seq.get(kind.letter, 0) + 1
        node = Node(
            id=f"n{self.corpus.node_id_seq + 1}",
            kind=kind,
            code=text,
            label=Label(kind, number),
            sources=(source_ru,),
        )
        candidate = replace(
            self.corpus,
            nodes=self._swap_nodes(self.corpus, {}, (node,)),
            ungrouped_seq={**self.corpus.ungrouped_seq, kind.letter: number},
            node_id_seq=self.corpus.node_id_seq + 1,
        )
        self._commit(
            candidate,
            JournalEntry("add_code", {"kind": kind.letter, "text": text, "ru": source_ru}),
            [],
        )
        return node

    def group_pair(self, subject_id: str, neighbor_id: str,
                   category_text: str | None = None) -> CategoryNode:
        """Group an ungrouped subject with its nearest neighbor.

        An ungrouped neighbor spawns a fresh category holding neighbor as
        item 1 and subject as item 2; a grouped neighbor pulls the subject
        into its category at the next free item, optionally revising the
        category text to cover the newcomer.
        """
        subject = self._node(subject_id)
        neighbor = self._node(neighbor_id)
        if subject_id == neighbor_id:
            raise SessionError("a code cannot be grouped with itself")
        if subject.is_grouped:
            raise AlreadyGroupedError(f"{render_label(subject.label)} is already grouped")
        if neighbor.kind is not subject.kind:
            raise KindMismatchError(
                f"cannot group {subject.kind.letter}-code with {neighbor.kind.letter}-code"
            )
        entry = JournalEntry(
            "group_pair",
            {"subject": subject_id, "neighbor": neighbor_id, "category_text": category_text},
        )

        if not neighbor.is_grouped:
            if not category_text or not category_text.strip():
                raise MissingTextError("a new category needs its proximating-meaning text")
            category_text = category_text.strip()
            number = self.corpus.category_seq.get(subject.kind.letter, 0) + 1
            label = Label(subject.kind, number)
            category = CategoryNode(
                id=f"c{self.corpus.category_id_seq + 1}",
                kind=subject.kind,
                category_code=category_text,
                label=label,
                members=(neighbor_id, subject_id),
            )
            relabeled = {
                neighbor_id: replace(neighbor, label=Label(subject.kind, number, item=1)),
                subject_id: replace(subject, label=Label(subject.kind, number, item=2)),
            }
            relabels = [
                RelabelEntry(
                    neighbor_id, render_label(neighbor.label),
                    render_label(relabeled[neighbor_id].label),
                    f"founding member of {render_label(label)} ({category_text})",
                ),
                RelabelEntry(
                    subject_id, render_label(subject.label),
                    render_label(relabeled[subject_id].label),
                    f"grouped into {render_label(label)} ({category_text})",
                ),
            ]
            candidate = replace(
                self.corpus,
                nodes=self._swap_nodes(self.corpus, relabeled),
                categories=self._swap_categories(self.corpus, {}, (category,)),
                category_seq={**self.corpus.category_seq, subject.kind.letter: number},
                category_id_seq=self.corpus.category_id_seq + 1,
            )
            self._commit(candidate, entry, relabels)
            self.reviewed.discard(subject_id)
            self.reviewed.discard(neighbor_id)
            return category

        owner = self._direct_owner(neighbor_id)
        assert owner is not None  # grouped nodes always have one (validated)
        return self._join(subject, owner, category_text, entry)

    def _join(self, subject: Node, owner: CategoryNode, category_text: str | None,
              entry: JournalEntry) -> CategoryNode:
        item = len(owner.members) + 1
        new_label = Label(owner.kind, owner.label.category, owner.label.subcategory, item)
        updated_owner = replace(owner, members=owner.members + (subject.id,))
        if category_text and category_text.strip():
            updated_owner = replace(updated_owner, category_code=category_text.strip())
        relabels = [
            RelabelEntry(
                subject.id, render_label(subject.label), render_label(new_label),
                f"joined {render_label(owner.label)} as item {item}",
            )
        ]
        candidate = replace(
            self.corpus,
            nodes=self._swap_nodes(self.corpus, {subject.id: replace(subject, label=new_label)}),
            categories=self._swap_categories(self.corpus, {owner.id: updated_owner}),
        )
        self._commit(candidate, entry, relabels)
        self.reviewed.discard(subject.id)
        return updated_owner

    def join_category(self, subject_id: str, category_id: str,
                      category_text: str | None = None) -> CategoryNode:
        """Put an ungrouped subject straight into a known category."""
        subject = self._node(subject_id)
        category = self._category(category_id)
        if subject.is_grouped:
            raise AlreadyGroupedError(f"{render_label(subject.label)} is already grouped")
        if category.kind is not subject.kind:
            raise KindMismatchError(
                f"cannot put {subject.kind.letter}-code into {category.kind.letter}-category"
            )
        entry = JournalEntry(
            "join_category",
            {"subject": subject_id, "category": category_id, "category_text": category_text},
        )
        return self._join(subject, category, category_text, entry)

    def spawn_category(self, subject_id: str, neighbor_id: str, category_text: str) -> CategoryNode:
        """Pull a grouped neighbor out of its category into a fresh one with
        the subject, when the old category's meaning cannot stretch.

        Survivors of the old category are renumbered to close the item gap;
        a category left empty is deleted and its number retired.
        """
        subject = self._node(subject_id)
        neighbor = self._node(neighbor_id)
        if subject.is_grouped:
            raise AlreadyGroupedError(f"{render_label(subject.label)} is already grouped")
        if not neighbor.is_grouped:
            raise NotGroupedError(
                f"{render_label(neighbor.label)} is ungrouped; use group_pair instead"
            )
        if neighbor.kind is not subject.kind:
            raise KindMismatchError(
                f"cannot group {subject.kind.letter}-code with {neighbor.kind.letter}-code"
            )
        if not category_text or not category_text.strip():
            raise MissingTextError("a new category needs its proximating-meaning text")
        category_text = category_text.strip()

        old = self._direct_owner(neighbor_id)
        assert old is not None
        nodes = self.corpus.node_index()
        relabels: list[RelabelEntry] = []
        updates: dict[str, Node] = {}

        survivors = tuple(m for m in old.members if m != neighbor_id)
        for position, member_id in enumerate(survivors, start=1):
            member = nodes[member_id]
            wanted = Label(old.kind, old.label.category, old.label.subcategory, position)
            if member.label != wanted:
                updates[member_id] = replace(member, label=wanted)
                relabels.append(
                    RelabelEntry(
                        member_id, render_label(member.label), render_label(wanted),
                        f"renumbered after departure from {render_label(old.label)}",
                    )
                )

        number = self.corpus.category_seq.get(subject.kind.letter, 0) + 1
        label = Label(subject.kind, number)
        category = CategoryNode(
            id=f"c{self.corpus.category_id_seq + 1}",
            kind=subject.kind,
            category_code=category_text,
            label=label,
            members=(neighbor_id, subject_id),
        )
        for node, item in ((neighbor, 1), (subject, 2)):
            wanted = Label(subject.kind, number, item=item)
            updates[node.id] = replace(node, label=wanted)
            relabels.append(
                RelabelEntry(
                    node.id, render_label(node.label), render_label(wanted),
                    f"regrouped into {render_label(label)} ({category_text})",
                )
            )

        has_children = any(c.parent == old.id for c in self.corpus.categories)
        dropped = frozenset({old.id}) if not survivors and not has_children else frozenset()
        cat_updates = {} if old.id in dropped else {old.id: replace(old, members=survivors)}
        candidate = replace(
            self.corpus,
            nodes=self._swap_nodes(self.corpus, updates),
            categories=self._swap_categories(self.corpus, cat_updates, (category,), dropped),
            category_seq={**self.corpus.category_seq, subject.kind.letter: number},
            category_id_seq=self.corpus.category_id_seq + 1,
        )
        entry = JournalEntry(
            "spawn_category",
            {"subject": subject_id, "neighbor": neighbor_id, "category_text": category_text},
        )
        self._commit(candidate, entry, relabels)
        self.reviewed.discard(subject_id)
        return category

    def keep_orphan(self, node_id: str) -> None:
        """Record that this pass found no close-enough neighbor for a code."""
        node = self._node(node_id)
        if node.is_grouped:
            raise AlreadyGroupedError(f"{render_label(node.label)} is grouped, not an orphan")
        self.journal.append(JournalEntry("keep_orphan", {"node": node_id}))
        self.reviewed.add(node_id)

    def create_subcategory(self, category_id: str, member_ids: list[str],
                           text: str) -> CategoryNode:
        """Split direct members of a category into a labeled sub-cluster."""
        category = self._category(category_id)
        if category.label.subcategory is not None:
            raise SessionError(
                f"{render_label(category.label)} is already a subcategory; labels cap at one level"
            )
        if not member_ids:
            raise SessionError("a subcategory needs at least one member")
        if not text or not text.strip():
            raise MissingTextError("a subcategory needs its proximating-meaning text")
        text = text.strip()
        chosen = set(member_ids)
        if len(chosen) != len(member_ids):
            raise SessionError("duplicate member ids")
        outside = chosen - set(category.members)
        if outside:
            raise SessionError(
                f"not direct members of {render_label(category.label)}: {', '.join(sorted(outside))}"
            )

        top_label = render_label(category.label)
        sub_number = self.corpus.subcategory_seq.get(top_label, 0) + 1
        sub_label = Label(category.kind, category.label.category, sub_number)
        nodes = self.corpus.node_index()
        updates: dict[str, Node] = {}
        relabels: list[RelabelEntry] = []

        moved = tuple(m for m in category.members if m in chosen)
        for position, member_id in enumerate(moved, start=1):
            member = nodes[member_id]
            wanted = Label(category.kind, category.label.category, sub_number, position)
            updates[member_id] = replace(member, label=wanted)
            relabels.append(
                RelabelEntry(
                    member_id, render_label(member.label), render_label(wanted),
                    f"moved into subcategory {render_label(sub_label)} ({text})",
                )
            )
        remaining = tuple(m for m in category.members if m not in chosen)
        for position, member_id in enumerate(remaining, start=1):
            member = nodes[member_id]
            wanted = Label(category.kind, category.label.category, None, position)
            if member.label != wanted:
                updates[member_id] = replace(member, label=wanted)
                relabels.append(
                    RelabelEntry(
                        member_id, render_label(member.label), render_label(wanted),
                        f"renumbered after split of {top_label}",
                    )
                )

        sub = CategoryNode(
            id=f"c{self.corpus.category_id_seq + 1}",
            kind=category.kind,
            category_code=text,
            label=sub_label,
            members=moved,
            parent=category.id,
        )
        candidate = replace(
            self.corpus,
            nodes=self._swap_nodes(self.corpus, updates),
            categories=self._swap_categories(
                self.corpus, {category.id: replace(category, members=remaining)}, (sub,)
            ),
            subcategory_seq={**self.corpus.subcategory_seq, top_label: sub_number},
            category_id_seq=self.corpus.category_id_seq + 1,
        )
        entry = JournalEntry(
            "create_subcategory",
            {"category": category_id, "members": list(member_ids), "text": text},
        )
        self._commit(candidate, entry, relabels)
        return sub

    def revise_category_text(self, category_id: str, text: str) -> CategoryNode:
        """Replace a category's proximating-meaning text."""
        category = self._category(category_id)
        if not text or not text.strip():
            raise MissingTextError("category text must not be empty")
        text = text.strip()
        updated = replace(category, category_code=text)
        candidate = replace(
            self.corpus, categories=self._swap_categories(self.corpus, {category_id: updated})
        )
        self._commit(
            candidate,
            JournalEntry("revise_category_text", {"category": category_id, "text": text}),
            [],
        )
        return updated

    def decide(self, subject_id: str, decision: GroupingDecision,
               category_text: str | None = None):
        """Apply one human grouping decision to a pool code."""
        if isinstance(decision, (NoNeighbor, KeepOrphan)):
            return self.keep_orphan(subject_id)
        if isinstance(decision, NearestIs):
            return self.group_pair(subject_id, decision.node_id, category_text)
        if isinstance(decision, JoinCategory):
            return self.join_category(subject_id, decision.category_id, category_text)
        if isinstance(decision, SpawnNew):
            if len(decision.member_ids) != 1:
                raise SessionError("spawn takes exactly one grouped neighbor")
            return self.spawn_category(subject_id, decision.member_ids[0], decision.text)
        raise SessionError(f"unknown decision {decision!r}")


def replay_journal(initial: Corpus, journal: list[JournalEntry]) -> Session:
    """Re-run a session's committed operations against its initial corpus."""
    session = Session(initial)
    for entry in journal:
        args = entry.args
        if entry.op == "add_code":
            session.add_code(Kind.from_letter(args["kind"]), args["text"], args["ru"])
        elif entry.op == "group_pair":
            session.group_pair(args["subject"], args["neighbor"], args.get("category_text"))
        elif entry.op == "join_category":
            session.join_category(args["subject"], args["category"], args.get("category_text"))
        elif entry.op == "spawn_category":
            session.spawn_category(args["subject"], args["neighbor"], args["category_text"])
        elif entry.op == "keep_orphan":
            session.keep_orphan(args["node"])
        elif entry.op == "create_subcategory":
            session.create_subcategory(args["category"], args["members"], args["text"])
        elif entry.op == "revise_category_text":
            session.revise_category_text(args["category"], args["text"])
        else:
            raise SessionError(f"unknown journal op {entry.op!r}")
    return session


def relabel_log_csv(session: Session) -> bytes:
    """Relabel log as CSV: ``node_id,old_label,new_label,reason``."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["node_id", "old_label", "new_label", "reason"])
    for entry in session.relabel_log:
        writer.writerow([entry.node_id, entry.old_label, entry.new_label, entry.reason])
    return out.getvalue().encode("utf-8")
