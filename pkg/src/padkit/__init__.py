"""Toolkit for structural-coding literature corpora.

Codes mined from research units carry one of three structural types
(problem, approach, development) and chain into causal triads. The package
models such corpora, drives the iterative categorization workflow, computes
the frequency statistics, and emits the causality DAG, triads graphic,
per-problem dyad graphics and taxonomies as deterministic documents.
"""

from .model import (
    KINDS,
    CategoryNode,
    Corpus,
    Issue,
    Kind,
    Label,
    LabelError,
    Node,
    PadkitError,
    ResearchUnit,
    Triad,
    ValidationReport,
    parse_label,
    render_label,
    validate_corpus,
)
from .store import (
    assemble_corpus,
    load_corpus_json,
    load_nodes_csv,
    load_triads_csv,
    mini3_corpus,
    save_corpus_json,
    save_nodes_csv,
    save_triads_csv,
)
from .metrics import (
    EmptyCorpusError,
    MetricTable,
    all_tables,
    avg_challenges_per_ru,
    f_p,
    r_a,
    r_d,
    r_p,
    u_a,
    w_p,
)
from .session import Session, replay_journal
from .graphics import (
    aggregate_links,
    category_triads,
    emit_causality_dag,
    emit_pa_dyads,
    emit_taxonomy,
    emit_triads_graphic,
    thickness_scale,
)

__version__ = "0.1.0"

__all__ = [
    "KINDS",
    "CategoryNode",
    "Corpus",
    "EmptyCorpusError",
    "Issue",
    "Kind",
    "Label",
    "LabelError",
    "MetricTable",
    "Node",
    "PadkitError",
    "ResearchUnit",
    "Session",
    "Triad",
    "ValidationReport",
    "aggregate_links",
    "all_tables",
    "assemble_corpus",
    "avg_challenges_per_ru",
    "category_triads",
    "emit_causality_dag",
    "emit_pa_dyads",
    "emit_taxonomy",
    "emit_triads_graphic",
    "f_p",
    "load_corpus_json",
    "load_nodes_csv",
    "load_triads_csv",
    "mini3_corpus",
    "parse_label",
    "r_a",
    "r_d",
    "r_p",
    "render_label",
    "replay_journal",
    "save_corpus_json",
    "save_nodes_csv",
    "save_triads_csv",
    "thickness_scale",
    "u_a",
    "validate_corpus",
    "w_p",
]
