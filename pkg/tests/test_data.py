from __future__ import annotations

import io
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fock_concepts import data
from fock_concepts.data import Kind, Label, MembershipRow, Rating
from fock_concepts.errors import (
    EmptyInput,
    InvalidRating,
    MalformedLine,
    MissingCombination,
    OutOfRangeValue,
    UnknownLabel,
)

HEADER = "participant_id,pair_id,exemplar,concept_label,rating\n"


class TestRatingsToWeight:
    def test_mixed(self):
        assert data.ratings_to_weight([3, 1, -2]) == pytest.approx(0.666667, abs=1e-6)

    def test_neutral_half_credit(self):
        assert data.ratings_to_weight([0, 0]) == 0.5

    def test_160_ratings_one_negative(self):
        assert data.ratings_to_weight([2] * 159 + [-1]) == 0.99375

    def test_half_credit_needed_for_forty_subjects(self):
        # 29 positive, 1 neutral, 10 negative -> 29.5 / 40.
        assert data.ratings_to_weight([1] * 29 + [0] + [-3] * 10) == 0.7375

    def test_accepts_rating_objects(self):
        rs = [Rating("p", "x", "e", Label.A, v) for v in (3, -3)]
        assert data.ratings_to_weight(rs) == 0.5

    def test_empty(self):
        with pytest.raises(EmptyInput):
            data.ratings_to_weight([])

    @pytest.mark.parametrize("bad", [4, -4, 1.5, "2", True])
    def test_invalid(self, bad):
        with pytest.raises(InvalidRating) as exc:
            data.ratings_to_weight([1, bad])
        assert exc.value.value == bad

    @settings(max_examples=300)
    @given(st.lists(st.integers(-3, 3), min_size=1, max_size=60))
    def test_range_and_extremes(self, values):
        w = data.ratings_to_weight(values)
        assert 0.0 <= w <= 1.0
        assert (w == 1.0) == all(v > 0 for v in values)
        assert (w == 0.0) == all(v < 0 for v in values)
        expected = Fraction(sum(2 if v > 0 else (1 if v == 0 else 0) for v in values), 2 * len(values))
        assert w == float(expected)


class TestRating:
    def test_label_coerced(self):
        assert Rating("p", "x", "e", "AandNotB", 1).concept_label is Label.A_AND_NOT_B

    def test_bad_label(self):
        with pytest.raises(UnknownLabel):
            Rating("p", "x", "e", "C", 1)

    def test_bad_value(self):
        with pytest.raises(InvalidRating):
            Rating("p", "x", "e", Label.A, 7)


class TestParseRatings:
    def test_single_line(self):
        rs = data.parse_ratings(io.StringIO(HEADER + "p1,pair1,Apple,A,3\n"))
        assert rs == [Rating("p1", "pair1", "Apple", Label.A, 3)]

    def test_out_of_range(self):
        with pytest.raises(OutOfRangeValue) as exc:
            data.parse_ratings(io.StringIO(HEADER + "p1,pair1,Apple,A,2\np1,pair1,Apple,B,5\n"))
        assert exc.value.line_no == 3
        assert isinstance(exc.value, InvalidRating)

    def test_unknown_label(self):
        with pytest.raises(UnknownLabel) as exc:
            data.parse_ratings(io.StringIO(HEADER + "p1,pair1,Apple,C,1\n"))
        assert exc.value.line_no == 2
        assert exc.value.label == "C"

    @pytest.mark.parametrize("line", ["p1,pair1,Apple,A", "p1,pair1,Apple,A,x", "p1,pair1,Apple,A,1,2"])
    def test_malformed(self, line):
        with pytest.raises(MalformedLine) as exc:
            data.parse_ratings(io.StringIO(HEADER + line + "\n"))
        assert exc.value.line_no == 2

    def test_bad_header(self):
        with pytest.raises(MalformedLine) as exc:
            data.parse_ratings(io.StringIO("a,b,c\n"))
        assert exc.value.line_no == 1

    def test_header_only(self):
        assert data.parse_ratings(io.StringIO(HEADER)) == []

    def test_quoted_exemplar_with_comma(self):
        rs = data.parse_ratings(io.StringIO(HEADER + 'p1,pair1,"Salt, Sea",NotB,-1\n'))
        assert rs[0].exemplar == "Salt, Sea"

    @settings(max_examples=100)
    @given(st.lists(st.tuples(st.sampled_from(list(Label)), st.integers(-3, 3)), max_size=40))
    def test_round_trip_preserves_order(self, items):
        ratings = [Rating(f"p{i}", "pair", f"ex{i % 3}", lab, v) for i, (lab, v) in enumerate(items)]
        buf = io.StringIO()
        data.write_ratings(ratings, buf)
        buf.seek(0)
        assert data.parse_ratings(buf) == ratings


class TestMembershipRow:
    def test_requires_a_combination(self):
        with pytest.raises(MissingCombination):
            MembershipRow("p", "x", 0.5, 0.5)

    def test_negation_requires_not_b(self):
        with pytest.raises(MissingCombination):
            MembershipRow("p", "x", 0.5, 0.5, mu_a_and_not_b=0.3)

    def test_weight_range(self):
        with pytest.raises(ValueError):
            MembershipRow("p", "x", 1.2, 0.5, mu_a_and_b=0.3)

    def test_conjunction_only(self):
        row = MembershipRow("p", "x", 0.5, 0.4, mu_a_and_b=0.3)
        assert row.kinds() == [Kind.CONJUNCTION]
        with pytest.raises(MissingCombination):
            row.weights_for(Kind.NEGATION)


class TestAggregate:
    def test_three_labels(self):
        rs = [Rating("p1", "pair", "Apple", Label.A, 3), Rating("p2", "pair", "Apple", Label.A, -1),
              Rating("p1", "pair", "Apple", Label.B, 0), Rating("p1", "pair", "Apple", Label.A_AND_B, 2)]
        ds = data.aggregate(rs)
        assert len(ds) == 1
        row = ds.rows[0]
        assert (row.mu_a, row.mu_b, row.mu_a_and_b) == (0.5, 0.5, 1.0)
        assert row.mu_not_b is None and row.mu_a_and_not_b is None

    def test_missing_combination(self):
        rs = [Rating("p1", "pair", "Apple", Label.A, 3), Rating("p1", "pair", "Apple", Label.B, 3)]
        with pytest.raises(MissingCombination):
            data.aggregate(rs)

    def test_missing_marginal(self):
        rs = [Rating("p1", "pair", "Apple", Label.A, 3), Rating("p1", "pair", "Apple", Label.A_AND_B, 3)]
        with pytest.raises(MissingCombination):
            data.aggregate(rs)

    def test_grouping_across_pairs_first_appearance_order(self):
        rs = []
        for pair, ex in (("p2", "Olive"), ("p1", "Olive"), ("p2", "Apple")):
            for lab in (Label.A, Label.B, Label.A_AND_B):
                rs.append(Rating("s", pair, ex, lab, 1))
        rs.append(Rating("t", "p1", "Olive", Label.A, -1))
        ds = data.aggregate(rs)
        assert [r.key for r in ds] == [("p2", "Olive"), ("p1", "Olive"), ("p2", "Apple")]
        assert ds.row("p1", "Olive").mu_a == 0.5
        assert ds.row("p2", "Olive").mu_a == 1.0
        assert [p.pair_id for p in ds.pairs] == ["p2", "p1"]

    def test_empty(self):
        with pytest.raises(EmptyInput):
            data.aggregate([])


class TestSimulate:
    ROW = MembershipRow("fv", "Apple", 1.0, 0.225, mu_a_and_b=0.6)

    def test_certain(self):
        rs = data.simulate_ratings(MembershipRow("p", "x", 1.0, 0.0, mu_a_and_b=0.0), 10, seed=1)
        assert [r.value for r in rs if r.concept_label is Label.A] == [3] * 10
        assert [r.value for r in rs if r.concept_label is Label.B] == [-3] * 10
        assert len(rs) == 30

    def test_law_of_large_numbers(self):
        row = MembershipRow("p", "x", 0.6, 0.6, mu_a_and_b=0.6)
        rs = [r for r in data.simulate_ratings(row, 100_000, seed=7) if r.concept_label is Label.A]
        assert abs(data.ratings_to_weight(rs) - 0.6) <= 0.01

    def test_deterministic(self):
        a = data.simulate_ratings(self.ROW, 50, seed=3)
        b = data.simulate_ratings(self.ROW, 50, seed=3)
        c = data.simulate_ratings(self.ROW, 50, seed=4)
        assert a == b and a != c

    def test_round_trip_apple(self):
        ds = data.aggregate(data.simulate_ratings(self.ROW, 100_000, seed=42))
        row = ds.rows[0]
        np.testing.assert_allclose([row.mu_a, row.mu_b, row.mu_a_and_b], [1.0, 0.225, 0.6], atol=0.01)

    @pytest.mark.parametrize("n", [100, 1000, 10_000])
    def test_convergence_rate(self, n):
        row = MembershipRow("p", "x", 0.3, 0.7, 0.4, 0.2, 0.15)
        back = data.aggregate(data.simulate_ratings(row, n, seed=11)).rows[0]
        for lab, mu in row.present_weights().items():
            assert abs(back.present_weights()[lab] - mu) <= 3 / np.sqrt(n)

    def test_needs_participants(self):
        with pytest.raises(ValueError):
            data.simulate_ratings(self.ROW, 0, seed=0)


class TestWeightsCsv:
    def test_round_trip(self):
        ds = data.load_bundled_dataset()
        text = data.weights_to_string(ds)
        back = data.read_weights(io.StringIO(text))
        assert back.rows == ds.rows

    def test_empty_field_absent(self):
        text = "pair_id,exemplar,mu_A,mu_B,mu_notB,mu_AandB,mu_AandNotB\np,x,0.5,0.5,,0.25,\n"
        row = data.read_weights(io.StringIO(text)).rows[0]
        assert row.mu_not_b is None and row.mu_a_and_not_b is None

    def test_malformed_number(self):
        text = "pair_id,exemplar,mu_A,mu_B,mu_notB,mu_AandB,mu_AandNotB\np,x,0.5,0.5,,0.25,\np,y,0.5,abc,,0.2,\n"
        with pytest.raises(MalformedLine) as exc:
            data.read_weights(io.StringIO(text))
        assert exc.value.line_no == 3

    def test_incomplete_row_reports_line(self):
        text = "pair_id,exemplar,mu_A,mu_B,mu_notB,mu_AandB,mu_AandNotB\np,x,0.5,0.5,,,\n"
        with pytest.raises(MalformedLine) as exc:
            data.read_weights(io.StringIO(text))
        assert exc.value.line_no == 2

    def test_duplicate(self):
        text = "pair_id,exemplar,mu_A,mu_B,mu_notB,mu_AandB,mu_AandNotB\np,x,0.5,0.5,,0.2,\np,x,0.5,0.5,,0.2,\n"
        with pytest.raises(MalformedLine):
            data.read_weights(io.StringIO(text))

    def test_missing_column(self):
        with pytest.raises(MalformedLine):
            data.read_weights(io.StringIO("pair_id,exemplar,mu_A\n"))


class TestFormatReal:
    @pytest.mark.parametrize("value,text", [
        (0.9, "0.90000"), (0.99375, "0.99375"), (1 / 3, "0.3333333333"), (-0.0, "0.00000"),
        (0.1 + 0.2, "0.30000"), (-1e-13, "0.00000"), (0.29375, "0.29375"), (None, ""),
    ])
    def test_values(self, value, text):
        assert data.format_real(value) == text


class TestBundled:
    def test_shape(self):
        ds = data.load_bundled_dataset()
        assert len(ds.pairs) == 4
        assert len(ds) == 96
        for p in ds.pairs:
            assert len(ds.rows_for_pair(p.pair_id)) == 24
        assert len({r.key for r in ds}) == 96

    def test_pair_names(self):
        names = [(p.concept_a, p.concept_b) for p in data.load_bundled_dataset().pairs]
        assert names == [("Home Furnishing", "Furniture"), ("Spices", "Herbs"),
                         ("Pets", "Farmyard Animals"), ("Fruits", "Vegetables")]

    def test_weights_on_grid(self):
        for row in data.load_bundled_dataset():
            for v in row.present_weights().values():
                assert abs(v * 160 - round(v * 160)) < 1e-9

    @pytest.mark.parametrize("pair,exemplar,weights", [
        ("spices_herbs", "Pepper", (0.99375, None, None, None, None)),
        ("fruits_vegetables", "Apple", (1.0, 0.225, None, 0.6, None)),
        ("fruits_vegetables", "Olive", (0.53125, 0.63125, None, 0.65, None)),
        ("spices_herbs", "Molasses", (0.3625, 0.13125, None, None, None)),
        ("fruits_vegetables", "Elderberry", (0.50625, 0.39375, 0.60625, None, 0.4125)),
        ("spices_herbs", "Vanilla", (0.7625, 0.5125, 0.4875, None, 0.6125)),
        ("home_furnishing_furniture", "Window Seat", (0.5, 0.48125, None, 0.45, None)),
        ("home_furnishing_furniture", "Mantelpiece", (0.9, 0.6125, None, 0.7125, None)),
        ("pets_farmyard_animals", "Prize Bull", (0.13125, 0.7625, 0.2625, 0.425, 0.275)),
        ("pets_farmyard_animals", "Goldfish", (0.925, 0.16875, None, 0.425, None)),
        ("spices_herbs", "Chili Pepper", (0.975, 0.53125, 0.5625, 0.8, 0.9)),
    ])
    def test_table_cells(self, pair, exemplar, weights):
        row = data.load_bundled_dataset().row(pair, exemplar)
        got = (row.mu_a, row.mu_b, row.mu_not_b, row.mu_a_and_b, row.mu_a_and_not_b)
        for g, w in zip(got, weights):
            if w is not None:
                assert g == w

    def test_fitted(self):
        fitted = data.load_bundled_fitted()
        assert len(fitted) == 192
        assert len({f.key for f in fitted}) == 192
        out_of_range = {(f.pair_id, f.exemplar, f.kind.value) for f in fitted if not f.in_range}
        assert out_of_range == {("spices_herbs", "Chili Pepper", "negation"),
                                ("fruits_vegetables", "Broccoli", "conjunction")}

    def test_fitted_round_trip(self):
        fitted = data.load_bundled_fitted()
        buf = io.StringIO()
        data.write_fitted(fitted, buf)
        buf.seek(0)
        assert data.read_fitted(buf) == fitted

    def test_published_diagnostics(self):
        pub = data.load_published_diagnostics()
        assert len(pub) == 192
        assert all((p.l is None) == (p.kind is Kind.CONJUNCTION) for p in pub)
