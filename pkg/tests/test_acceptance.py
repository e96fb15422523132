"""Acceptance gate: one test per release criterion, at its stated tolerance.

Every criterion prints a PASS line when it holds; tolerances are pinned
here, not configured. The random-corpus checks run over a fixed set of 200
seeded corpora (up to 8 research units, up to 4 categories per kind).
"""

import random
import time
from fractions import Fraction

import pytest

from padkit.cli import main as cli_main
from padkit.graphics import (
    aggregate_links,
    emit_causality_dag,
    emit_pa_dyads,
    emit_triads_graphic,
)
from padkit.metrics import all_tables, avg_challenges_per_ru, f_p, r_a, r_p, u_a
from padkit.model import Kind, render_label, validate_corpus
from padkit.session import Session, replay_journal
from padkit.store import (
    MINI3_NODES_CSV,
    MINI3_TRIADS_CSV,
    assemble_corpus,
    load_corpus_json,
    load_nodes_csv,
    load_triads_csv,
    mini3_corpus,
    save_corpus_json,
    save_nodes_csv,
    save_triads_csv,
)

GENERATED_COUNT = 200


@pytest.fixture(scope="module")
def generated_corpora():
    rng = random.Random(20240601)
    return [random_corpus_checked(rng) for _ in range(GENERATED_COUNT)]


def random_corpus_checked(rng):
    from strategies import random_corpus

    corpus = random_corpus(rng)
    assert validate_corpus(corpus).ok
    return corpus


def report(name: str) -> None:
    print(f"ACCEPTANCE {name}: PASS")


def test_metric_normalization(generated_corpora):
    """Sum of every normalized table is exactly 1 (rational equality, zero
    tolerance) on MINI3 and on the 200 generated corpora, within 5 seconds."""
    started = time.monotonic()
    for corpus in [mini3_corpus(), *generated_corpora]:
        tables = all_tables(corpus)
        for name in ("r_p", "w_p", "r_a", "u_a", "r_d"):
            assert tables[name].total() == 1, f"{name} does not sum to 1"
    elapsed = time.monotonic() - started
    assert elapsed < 5.0, f"normalization sweep took {elapsed:.2f}s"
    report(f"metric normalization ({GENERATED_COUNT} corpora in {elapsed:.2f}s)")


def test_ratio_identity(generated_corpora):
    """F over R is one constant across categories and equals
    total presences / research unit count, exactly."""
    for corpus in [mini3_corpus(), *generated_corpora]:
        average = avg_challenges_per_ru(corpus)
        f_table = f_p(corpus).as_mapping()
        presences = 0
        ratios = set()
        for label, r_value in r_p(corpus).as_mapping().items():
            if r_value > 0:
                ratios.add(f_table[label] / r_value)
        assert ratios == {average}
        table = r_p(corpus)
        presences = table.denominators["category_presences"]
        assert average == Fraction(presences, len(corpus.research_units))
    report("challenges-per-unit ratio identity")


def test_mini3_golden_values():
    """All seven statistics reproduce the hand-enumerated fixture values."""
    corpus = mini3_corpus()
    tables = all_tables(corpus)
    expected = {
        "f_p": {"P1": Fraction(2, 3), "P2": Fraction(2, 3)},
        "r_p": {"P1": Fraction(1, 2), "P2": Fraction(1, 2)},
        "w_p": {"P1": Fraction(2, 3), "P2": Fraction(1, 3)},
        "r_a": {"A1": Fraction(4, 5), "A2": Fraction(1, 5)},
        "u_a": {"A1": Fraction(5, 6), "A2": Fraction(1, 6)},
        "r_d": {"D1": Fraction(1, 2), "D2": Fraction(1, 3), "D3": Fraction(1, 6)},
    }
    for name, values in expected.items():
        assert tables[name].as_mapping() == values, name
    assert avg_challenges_per_ru(corpus) == Fraction(4, 3)
    report("MINI3 golden values")


def test_r_a_u_a_discrimination():
    """The fixture separates member-presence counting from triad counting."""
    corpus = mini3_corpus()
    assert r_a(corpus).value_of("A1") == Fraction(4, 5)
    assert u_a(corpus).value_of("A1") == Fraction(5, 6)
    assert r_a(corpus).value_of("A1") != u_a(corpus).value_of("A1")
    report("R_A vs U_A discrimination")


def test_categorizer_semantics():
    """Neighbor takes item 1 and subject item 2; items stay contiguous after
    every operation; replaying the log reproduces the corpus byte for byte."""
    session = Session(mini3_corpus())

    def items_contiguous():
        nodes = session.corpus.node_index()
        for category in session.corpus.categories:
            items = [nodes[m].label.item for m in category.members]
            assert items == list(range(1, len(items) + 1))

    beta = session.add_code(Kind.PROBLEM, "noisy energy counters", "RU4")
    alpha = session.add_code(Kind.PROBLEM, "sampling jitter", "RU5")
    items_contiguous()
    category = session.group_pair(alpha.id, beta.id, "measurement noise")
    nodes = session.corpus.node_index()
    assert render_label(nodes[beta.id].label) == "P3.1"
    assert render_label(nodes[alpha.id].label) == "P3.2"
    items_contiguous()

    gamma = session.add_code(Kind.PROBLEM, "sensor drift", "RU6")
    session.group_pair(gamma.id, beta.id)
    items_contiguous()
    delta = session.add_code(Kind.PROBLEM, "calibration gaps", "RU6")
    session.spawn_category(delta.id, gamma.id, "instrument calibration")
    items_contiguous()
    session.create_subcategory(category.id, [beta.id], "counter noise")
    items_contiguous()
    session.revise_category_text(category.id, "noise in measurement")
    orphan = session.add_code(Kind.PROBLEM, "unclear units", "RU7")
    session.keep_orphan(orphan.id)

    replayed = replay_journal(session.initial_corpus, session.journal)
    assert save_corpus_json(replayed.corpus) == save_corpus_json(session.corpus)
    report("categorizer semantics and replay")


def test_graphics_criteria(generated_corpora):
    """DAG tripartite and acyclic everywhere; MINI3 census exact; dyad
    percentages sum to 100 within 0.1 per edge; emission byte-identical."""
    for corpus in generated_corpora:
        doc = emit_causality_dag(corpus)
        column = {n.name: n.column for n in doc.nodes}
        for edge in doc.edges:
            assert column[edge.target] == column[edge.source] + 1

    corpus = mini3_corpus()
    doc = emit_causality_dag(corpus)
    assert len(doc.nodes) == 7
    assert len(doc.edges) == 7
    census = {(l.source, l.target): l.count for l in aggregate_links(corpus)}
    assert census == {
        ("P1", "A1"): 2, ("P1", "A2"): 1, ("P2", "A1"): 3,
        ("A1", "D1"): 3, ("A1", "D2"): 1, ("A1", "D3"): 1, ("A2", "D2"): 1,
    }

    for corpus_under_test in [corpus, *generated_corpora[:40]]:
        problems = sorted(
            c.label.render()
            for c in corpus_under_test.categories
            if c.kind is Kind.PROBLEM and c.label.subcategory is None
        )
        for label in problems:
            dyads = emit_pa_dyads(corpus_under_test, label)
            if not dyads.edges:
                continue
            total = sum(float(e.label.rstrip("%")) for e in dyads.edges)
            assert abs(total - 100.0) <= 0.1 * len(dyads.edges)

    assert emit_causality_dag(corpus).to_dot() == emit_causality_dag(corpus).to_dot()
    assert emit_triads_graphic(corpus).to_dot() == emit_triads_graphic(corpus).to_dot()
    assert emit_pa_dyads(corpus, "P2").to_dot() == emit_pa_dyads(corpus, "P2").to_dot()
    report("graphics: tripartite, census, dyad sums, determinism")


def test_persistence_round_trips(generated_corpora):
    """JSON round-trip is structural identity; CSV round-trip preserves the
    row multiset."""
    for corpus in [mini3_corpus(), *generated_corpora]:
        assert load_corpus_json(save_corpus_json(corpus)) == corpus
    for corpus in [mini3_corpus(), *generated_corpora[:50]]:
        nodes_csv = save_nodes_csv(corpus)
        triads_csv = save_triads_csv(corpus)
        rebuilt = assemble_corpus(load_nodes_csv(nodes_csv), load_triads_csv(triads_csv))
        assert sorted(save_nodes_csv(rebuilt).splitlines()) == sorted(nodes_csv.splitlines())
        assert sorted(save_triads_csv(rebuilt).splitlines()) == sorted(triads_csv.splitlines())
    report("persistence round trips")


def test_cli_end_to_end(tmp_path):
    """stats, dag and dyads on the fixture produce the golden files with the
    documented exit codes."""
    nodes = tmp_path / "nodes.csv"
    triads = tmp_path / "triads.csv"
    nodes.write_bytes(MINI3_NODES_CSV)
    triads.write_bytes(MINI3_TRIADS_CSV)
    out = tmp_path / "out"

    base = ["--nodes", str(nodes), "--triads", str(triads), "--out", str(out)]
    assert cli_main(["stats", *base]) == 0
    assert cli_main(["dag", *base]) == 0
    assert cli_main(["dyads", "--problem", "P2", *base]) == 0

    assert (out / "f_p.csv").read_bytes() == (
        b"label,category_code,value_numerator,value_denominator,percent\n"
        b"P1,power model formulation,2,3,66.7\n"
        b"P2,cross-genre comparison,2,3,66.7\n"
    )
    assert (out / "r_p.csv").read_bytes() == (
        b"label,category_code,value_numerator,value_denominator,percent\n"
        b"P1,power model formulation,1,2,50.0\n"
        b"P2,cross-genre comparison,1,2,50.0\n"
    )
    assert (out / "w_p.csv").read_bytes() == (
        b"label,category_code,value_numerator,value_denominator,percent\n"
        b"P1,power model formulation,2,3,66.7\n"
        b"P2,cross-genre comparison,1,3,33.3\n"
    )
    assert (out / "r_a.csv").read_bytes() == (
        b"label,category_code,value_numerator,value_denominator,percent\n"
        b"A1,resource instrumentation,4,5,80.0\n"
        b"A2,direct measurement,1,5,20.0\n"
    )
    assert (out / "u_a.csv").read_bytes() == (
        b"label,category_code,value_numerator,value_denominator,percent\n"
        b"A1,resource instrumentation,5,6,83.3\n"
        b"A2,direct measurement,1,6,16.7\n"
    )
    assert (out / "r_d.csv").read_bytes() == (
        b"label,category_code,value_numerator,value_denominator,percent\n"
        b"D1,regression power models,1,2,50.0\n"
        b"D2,benchmark suites,1,3,33.3\n"
        b"D3,measurement toolkits,1,6,16.7\n"
    )
    assert (out / "avg_challenges.txt").read_bytes() == b"4/3\n1.3333333333\n"

    dag = (out / "dag.dot").read_text()
    assert dag.count("->") == 7
    dyads = (out / "dyads_P2.dot").read_text()
    assert dyads.count("->") == 1 and "100.0%" in dyads

    # Exit codes: 0 handled above; 1 for invalid data; 2 for usage errors.
    bad = tmp_path / "bad.csv"
    bad.write_bytes(b"ru_id,p,a,d\nRU1,A1.1,P1.1,D1.1\n")
    assert cli_main(["validate", "--nodes", str(nodes), "--triads", str(bad)]) == 1
    assert cli_main(["stats", "--out", str(out)]) == 2
    assert cli_main(["dyads", "--problem", "P9", *base]) == 2
    report("CLI end to end")
