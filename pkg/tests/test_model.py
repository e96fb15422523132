"""Label grammar and corpus validation."""

import pytest
from hypothesis import given, strategies as st

from padkit.model import (
    Corpus,
    Kind,
    Label,
    LabelError,
    Node,
    ResearchUnit,
    Triad,
    parse_label,
    render_label,
    validate_corpus,
)
from padkit.store import mini3_corpus


class TestParseLabel:
    def test_category_only(self):
        assert parse_label("P7") == Label(Kind.PROBLEM, 7)

    def test_compact_subcategory_item(self):
        assert parse_label("A1.23") == Label(Kind.APPROACH, 1, 2, 3)

    def test_explicit_dots(self):
        assert parse_label("D12.3.14") == Label(Kind.DEVELOPMENT, 12, 3, 14)

    def test_single_item(self):
        assert parse_label("P1.1") == Label(Kind.PROBLEM, 1, item=1)

    def test_absent_subcategory_slot(self):
        assert parse_label("P1..12") == Label(Kind.PROBLEM, 1, item=12)

    def test_multi_digit_category_one_dot(self):
        # No compact reading is possible once the category has two digits.
        assert parse_label("P12.34") == Label(Kind.PROBLEM, 12, item=34)

    def test_whitespace_tolerated(self):
        assert parse_label("  A2 ") == Label(Kind.APPROACH, 2)

    @pytest.mark.parametrize(
        "bad",
        ["", "X1", "P", "P0", "Px", "P1.2.3.4", "P1.", "P01", "A1.05", "A1.x", "P-1"],
    )
    def test_malformed(self, bad):
        with pytest.raises(LabelError):
            parse_label(bad)


class TestRenderLabel:
    def test_category_only(self):
        assert render_label(Label(Kind.PROBLEM, 2)) == "P2"

    def test_multi_digit_category(self):
        assert render_label(Label(Kind.APPROACH, 10)) == "A10"

    def test_compact_form(self):
        assert render_label(Label(Kind.DEVELOPMENT, 1, 1, 2)) == "D1.12"

    def test_item_without_subcategory(self):
        assert render_label(Label(Kind.PROBLEM, 3, item=4)) == "P3.4"

    def test_two_digit_item_forces_empty_slot(self):
        assert render_label(Label(Kind.PROBLEM, 1, item=12)) == "P1..12"

    def test_multi_digit_component_forces_explicit(self):
        assert render_label(Label(Kind.APPROACH, 1, 2, 34)) == "A1.2.34"

    def test_subcategory_label(self):
        assert render_label(Label(Kind.APPROACH, 1, 2)) == "A1.2"

    def test_nonpositive_component_rejected(self):
        with pytest.raises(LabelError):
            Label(Kind.PROBLEM, 0)


_label_strategy = st.builds(
    Label,
    kind=st.sampled_from(list(Kind)),
    category=st.integers(min_value=1, max_value=120),
    subcategory=st.one_of(st.none(), st.integers(min_value=1, max_value=120)),
    item=st.integers(min_value=1, max_value=120),
)


@given(_label_strategy)
def test_node_label_round_trip(label):
    """Any node label survives render -> parse untouched."""
    assert parse_label(render_label(label)) == label


@given(_label_strategy)
def test_string_round_trip_is_stable(label):
    text = render_label(label)
    assert parse_label(render_label(parse_label(text))) == parse_label(text)


def test_category_reading_shifts_item():
    assert parse_label("A1.2").as_category() == Label(Kind.APPROACH, 1, 2)
    assert parse_label("A3").as_category() == Label(Kind.APPROACH, 3)
    with pytest.raises(LabelError):
        parse_label("A1.23").as_category()


def test_kind_ordering_matches_columns():
    assert Kind.PROBLEM < Kind.APPROACH < Kind.DEVELOPMENT
    assert [k.column for k in (Kind.PROBLEM, Kind.APPROACH, Kind.DEVELOPMENT)] == [0, 1, 2]


class TestValidateCorpus:
    def test_empty_corpus_is_clean(self):
        assert validate_corpus(Corpus()).ok
        assert validate_corpus(Corpus()).issues == ()

    def test_mini3_is_clean(self, mini3):
        report = validate_corpus(mini3)
        assert report.ok
        assert report.issues == ()

    def test_missing_node_reference(self):
        corpus = Corpus(
            research_units=(ResearchUnit("RU1", "", (Triad("ghost-p", "ghost-a", "ghost-d"),)),),
        )
        report = validate_corpus(corpus)
        assert not report.ok
        locations = [i.location for i in report.errors]
        assert "ru:RU1/triad:0/p" in locations
        assert "ru:RU1/triad:0/a" in locations
        assert "ru:RU1/triad:0/d" in locations

    def test_kind_mismatch_in_slot(self, mini3):
        nodes = mini3.node_index()
        a_node = next(n for n in mini3.nodes if n.kind is Kind.APPROACH)
        bad_triad = Triad(a_node.id, a_node.id, next(n for n in mini3.nodes if n.kind is Kind.DEVELOPMENT).id)
        ru = ResearchUnit("RUX", "", (bad_triad,))
        corpus = Corpus(
            research_units=mini3.research_units + (ru,),
            nodes=mini3.nodes,
            categories=mini3.categories,
            ungrouped_seq=mini3.ungrouped_seq,
            category_seq=mini3.category_seq,
            subcategory_seq=mini3.subcategory_seq,
            node_id_seq=mini3.node_id_seq,
            category_id_seq=mini3.category_id_seq,
        )
        report = validate_corpus(corpus)
        assert not report.ok
        assert any("slot requires P" in e.message for e in report.errors)
        del nodes

    def test_duplicate_triad_in_ru_is_error(self, mini3):
        first = mini3.research_units[0]
        doubled = ResearchUnit(first.id, first.citation, first.triads + (first.triads[0],))
        corpus = Corpus(
            research_units=(doubled,) + mini3.research_units[1:],
            nodes=mini3.nodes,
            categories=mini3.categories,
            ungrouped_seq=mini3.ungrouped_seq,
            category_seq=mini3.category_seq,
            subcategory_seq=mini3.subcategory_seq,
            node_id_seq=mini3.node_id_seq,
            category_id_seq=mini3.category_id_seq,
        )
        report = validate_corpus(corpus)
        assert any("duplicate triad" in e.message for e in report.errors)

    def test_empty_triads_is_warning_only(self):
        corpus = Corpus(research_units=(ResearchUnit("RU1"),))
        report = validate_corpus(corpus)
        assert report.ok
        assert any("no triads" in w.message for w in report.warnings)

    def test_member_position_mismatch(self, mini3):
        # Swap the two members of the first P category: labels no longer
        # match their 1-based positions.
        cat = next(c for c in mini3.categories if len(c.members) == 2)
        flipped = tuple(reversed(cat.members))
        categories = tuple(
            c if c.id != cat.id else
            type(c)(c.id, c.kind, c.category_code, c.label, flipped, c.parent)
            for c in mini3.categories
        )
        corpus = Corpus(
            research_units=mini3.research_units,
            nodes=mini3.nodes,
            categories=categories,
            ungrouped_seq=mini3.ungrouped_seq,
            category_seq=mini3.category_seq,
            subcategory_seq=mini3.subcategory_seq,
            node_id_seq=mini3.node_id_seq,
            category_id_seq=mini3.category_id_seq,
        )
        report = validate_corpus(corpus)
        assert any("expected" in e.message for e in report.errors)

    def test_duplicate_rendered_label(self):
        n1 = Node("n1", Kind.PROBLEM, "one", Label(Kind.PROBLEM, 1))
        n2 = Node("n2", Kind.PROBLEM, "two", Label(Kind.PROBLEM, 1))
        corpus = Corpus(nodes=(n1, n2), ungrouped_seq={"P": 1, "A": 0, "D": 0})
        report = validate_corpus(corpus)
        assert any("already used" in e.message for e in report.errors)

    def test_report_ordering_is_deterministic(self):
        corpus = Corpus(
            research_units=(
                ResearchUnit("RU2", "", (Triad("x", "y", "z"),)),
                ResearchUnit("RU1", "", (Triad("x", "y", "z"),)),
            ),
        )
        report_a = validate_corpus(corpus)
        report_b = validate_corpus(corpus)
        assert report_a == report_b
        assert [i.location for i in report_a.issues] == sorted(i.location for i in report_a.issues)


def test_mini3_category_census():
    corpus = mini3_corpus()
    by_kind = {}
    for cat in corpus.categories:
        by_kind.setdefault(cat.kind, []).append(cat)
    assert len(by_kind[Kind.PROBLEM]) == 2
    assert len(by_kind[Kind.APPROACH]) == 2
    assert len(by_kind[Kind.DEVELOPMENT]) == 3
