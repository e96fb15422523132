"""Random small corpora: a hypothesis strategy and a plain-RNG builder.

Corpora are built directly from the model constructors: up to a handful of
research units and categories per kind, every triad referencing grouped
nodes, optional stray ungrouped codes in the pool. Desk scale on purpose,
so brute-force oracles stay trivially checkable.
"""

from __future__ import annotations

import random

from hypothesis import strategies as st

from padkit.model import (
    KINDS,
    CategoryNode,
    Corpus,
    Kind,
    Label,
    Node,
    ResearchUnit,
    Triad,
    validate_corpus,
)


@st.composite
def corpora(draw, max_rus: int = 8, max_categories: int = 4,
            max_members: int = 3, allow_ungrouped_pool: bool = True) -> Corpus:
    nodes: list[Node] = []
    categories: list[CategoryNode] = []
    grouped_ids: dict[Kind, list[str]] = {k: [] for k in KINDS}
    node_counter = 0
    category_counter = 0
    category_seq = {k.letter: 0 for k in KINDS}
    ungrouped_seq = {k.letter: 0 for k in KINDS}

    for kind in KINDS:
        n_cats = draw(st.integers(min_value=1, max_value=max_categories))
        for cat_number in range(1, n_cats + 1):
            category_counter += 1
            n_members = draw(st.integers(min_value=1, max_value=max_members))
            member_ids = []
            for item in range(1, n_members + 1):
                node_counter += 1
                node_id = f"n{node_counter}"
                member_ids.append(node_id)
                nodes.append(
                    Node(
                        id=node_id,
                        kind=kind,
                        code=f"{kind.letter.lower()} code {cat_number}.{item}",
                        label=Label(kind, cat_number, item=item),
                    )
                )
            categories.append(
                CategoryNode(
                    id=f"c{category_counter}",
                    kind=kind,
                    category_code=f"{kind.letter.lower()} category {cat_number}",
                    label=Label(kind, cat_number),
                    members=tuple(member_ids),
                )
            )
            grouped_ids[kind].append(member_ids)
            category_seq[kind.letter] = cat_number

    # Flatten per kind for triad drawing.
    flat = {k: [nid for members in grouped_ids[k] for nid in members] for k in KINDS}

    n_rus = draw(st.integers(min_value=1, max_value=max_rus))
    research_units: list[ResearchUnit] = []
    for ru_number in range(1, n_rus + 1):
        n_triads = draw(st.integers(min_value=0 if ru_number > 1 else 1, max_value=3))
        triads: list[Triad] = []
        for _ in range(n_triads):
            triad = Triad(
                draw(st.sampled_from(flat[Kind.PROBLEM])),
                draw(st.sampled_from(flat[Kind.APPROACH])),
                draw(st.sampled_from(flat[Kind.DEVELOPMENT])),
            )
            if triad not in triads:
                triads.append(triad)
        research_units.append(ResearchUnit(f"RU{ru_number}", "", tuple(triads)))

    if allow_ungrouped_pool:
        for kind in KINDS:
            extra = draw(st.integers(min_value=0, max_value=2))
            for number in range(1, extra + 1):
                node_counter += 1
                nodes.append(
                    Node(
                        id=f"n{node_counter}",
                        kind=kind,
                        code=f"pool {kind.letter.lower()} {number}",
                        label=Label(kind, number),
                    )
                )
                ungrouped_seq[kind.letter] = number

    sources: dict[str, set[str]] = {}
    for ru in research_units:
        for triad in ru.triads:
            for node_id in (triad.p, triad.a, triad.d):
                sources.setdefault(node_id, set()).add(ru.id)
    nodes = [
        Node(n.id, n.kind, n.code, n.label, tuple(sorted(sources.get(n.id, ()))))
        for n in nodes
    ]

    corpus = Corpus(
        research_units=tuple(research_units),
        nodes=tuple(nodes),
        categories=tuple(categories),
        ungrouped_seq=ungrouped_seq,
        category_seq=category_seq,
        subcategory_seq={},
        node_id_seq=node_counter,
        category_id_seq=category_counter,
    )
    assert validate_corpus(corpus).ok
    # The first RU always draws at least one triad, so metrics are defined.
    assert any(ru.triads for ru in corpus.research_units)
    return corpus


def random_corpus(rng: random.Random, max_rus: int = 8, max_categories: int = 4,
                  max_members: int = 3) -> Corpus:
    """Same shape as the hypothesis strategy, driven by a seeded RNG."""
    nodes: list[Node] = []
    categories: list[CategoryNode] = []
    flat: dict[Kind, list[str]] = {k: [] for k in KINDS}
    node_counter = 0
    category_counter = 0
    category_seq = {k.letter: 0 for k in KINDS}

    for kind in KINDS:
        for cat_number in range(1, rng.randint(1, max_categories) + 1):
            category_counter += 1
            member_ids = []
            for item in range(1, rng.randint(1, max_members) + 1):
                node_counter += 1
                node_id = f"n{node_counter}"
                member_ids.append(node_id)
                flat[kind].append(node_id)
                nodes.append(
                    Node(node_id, kind, f"{kind.letter.lower()} code {cat_number}.{item}",
                         Label(kind, cat_number, item=item))
                )
            categories.append(
                CategoryNode(f"c{category_counter}", kind,
                             f"{kind.letter.lower()} category {cat_number}",
                             Label(kind, cat_number), tuple(member_ids))
            )
            category_seq[kind.letter] = cat_number

    research_units = []
    for ru_number in range(1, rng.randint(1, max_rus) + 1):
        triads: list[Triad] = []
        for _ in range(rng.randint(1 if ru_number == 1 else 0, 3)):
            triad = Triad(
                rng.choice(flat[Kind.PROBLEM]),
                rng.choice(flat[Kind.APPROACH]),
                rng.choice(flat[Kind.DEVELOPMENT]),
            )
            if triad not in triads:
                triads.append(triad)
        research_units.append(ResearchUnit(f"RU{ru_number}", "", tuple(triads)))

    sources: dict[str, set[str]] = {}
    for ru in research_units:
        for triad in ru.triads:
            for node_id in (triad.p, triad.a, triad.d):
                sources.setdefault(node_id, set()).add(ru.id)
    nodes = [
        Node(n.id, n.kind, n.code, n.label, tuple(sorted(sources.get(n.id, ()))))
        for n in nodes
    ]

    return Corpus(
        research_units=tuple(research_units),
        nodes=tuple(nodes),
        categories=tuple(categories),
        ungrouped_seq={k.letter: 0 for k in KINDS},
        category_seq=category_seq,
        subcategory_seq={},
        node_id_seq=node_counter,
        category_id_seq=category_counter,
    )
