"""Agreement statistics against brute-force oracles and known fixtures."""

from __future__ import annotations

import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import UNDEFINED, alpha_oracle, kappa_oracle, spearman_oracle
from streamaudit.agreement import (
    GRADE_SCALE,
    AgreementError,
    AlphaMetric,
    KappaWeighting,
    RaterMatrix,
    cohen_kappa,
    disagreement_digest,
    krippendorff_alpha,
    percent_agreement,
    spearman_rho,
)

matrix_of = lambda columns, items=None: RaterMatrix(
    items=tuple(items or [f"item{i}" for i in range(len(columns[0]))]),
    raters=tuple(f"r{j}" for j in range(len(columns))),
    values=tuple(tuple(col[i] for col in columns) for i in range(len(columns[0]))),
)

grade = st.sampled_from([0.0, 0.5, 1.0])
column4 = st.lists(grade, min_size=4, max_size=4)


class TestPercentAgreement:
    def test_identical_columns(self):
        result = percent_agreement(matrix_of([[1, 1, 0, 0], [1, 1, 0, 0]]))
        assert result.value == 1.0

    def test_three_of_four_match(self):
        # hand count: items 1, 3, 4 match exactly
        result = percent_agreement(matrix_of([[1, 1, 0, 0], [1, 0, 0, 0]]))
        assert result.value == 0.75

    def test_all_missing_column_is_an_error(self):
        with pytest.raises(AgreementError, match="no complete pairs"):
            percent_agreement(matrix_of([[1, 1, 0, 0], [None, None, None, None]]))

    def test_missing_entries_excluded_pairwise(self):
        result = percent_agreement(matrix_of([[1, 1, 0], [1, None, 1]]))
        assert result.value == 0.5
        assert result.n_items_used == 2


class TestCohenKappa:
    def test_identical_varied_ratings_are_exactly_one(self):
        assert cohen_kappa([1, 0.5, 0, 1], [1, 0.5, 0, 1]).value == 1.0

    def test_hand_contingency_value(self):
        # p_o = 0.75; marginals give p_e = 0.5; kappa = 0.5
        result = cohen_kappa([1, 1, 0, 0], [1, 0, 0, 0])
        assert result.value == pytest.approx(0.5, abs=1e-12)

    def test_constant_equal_raters_undefined(self):
        result = cohen_kappa([1, 1, 1, 1], [1, 1, 1, 1])
        assert result.undefined
        assert "no variation" in result.note

    def test_constant_but_different_raters_defined(self):
        result = cohen_kappa([1, 1, 1, 1], [0, 0, 0, 0])
        assert result.value == 0.0

    def test_linear_weighting(self):
        # frozen from the hand-worked table: unweighted 0.6, linear 0.75,
        # quadratic 6/7
        a, b = [0, 0.5, 1, 0], [0, 1, 1, 0]
        assert cohen_kappa(a, b).value == pytest.approx(0.6, abs=1e-12)
        assert cohen_kappa(a, b, KappaWeighting.LINEAR).value == pytest.approx(0.75, abs=1e-12)
        assert cohen_kappa(a, b, KappaWeighting.QUADRATIC).value == pytest.approx(6 / 7, abs=1e-12)

    def test_too_few_pairs(self):
        with pytest.raises(AgreementError):
            cohen_kappa([1], [1])
        with pytest.raises(AgreementError):
            cohen_kappa([1, None], [1, 1])

    @settings(max_examples=300, deadline=None)
    @given(a=column4, b=column4)
    def test_matches_oracle(self, a, b):
        expected = kappa_oracle(a, b, GRADE_SCALE)
        result = cohen_kappa(a, b)
        if expected is UNDEFINED:
            assert result.undefined
        else:
            assert result.value == pytest.approx(expected, abs=1e-9)

    @settings(max_examples=200, deadline=None)
    @given(a=column4, b=column4)
    def test_symmetric_under_rater_swap(self, a, b):
        assert cohen_kappa(a, b).value == cohen_kappa(b, a).value


class TestKrippendorffAlpha:
    def test_identical_varied_columns_exactly_one(self):
        assert krippendorff_alpha(matrix_of([[1, 0.5, 0], [1, 0.5, 0]])).value == 1.0

    def test_frozen_interval_fixture(self):
        # 4 items x 2 raters: [[1,1],[0.5,0.5],[0,0],[1,0]]; the pair
        # enumeration gives D_o = 1/4, D_e = 3/7, alpha = 5/12
        matrix = matrix_of([[1, 0.5, 0, 1], [1, 0.5, 0, 0]])
        expected = alpha_oracle(matrix.values, "interval")
        assert expected == pytest.approx(5 / 12, abs=1e-12)
        assert krippendorff_alpha(matrix).value == pytest.approx(5 / 12, abs=1e-12)

    def test_constant_matrix_undefined(self):
        result = krippendorff_alpha(matrix_of([[1, 1, 1], [1, 1, 1]]))
        assert result.undefined
        assert "no variation" in result.note

    def test_missing_entries_via_coincidence_matrix(self):
        rows = (
            (1.0, 1.0, None),
            (0.5, 0.5, 0.5),
            (0.0, None, 0.0),
            (1.0, 0.5, 1.0),
            (None, None, 1.0),  # single rating: skipped
        )
        matrix = RaterMatrix(
            items=("a", "b", "c", "d", "e"), raters=("r1", "r2", "r3"), values=rows
        )
        for metric in AlphaMetric:
            expected = alpha_oracle(rows, metric.value)
            assert krippendorff_alpha(matrix, metric).value == pytest.approx(expected, abs=1e-12)

    def test_no_pairable_units_is_an_error(self):
        with pytest.raises(AgreementError, match="two or more ratings"):
            krippendorff_alpha(matrix_of([[1, 1], [None, None]]))

    def test_interval_equals_ordinal_on_balanced_marginals(self):
        # equal category frequencies make ordinal rank gaps proportional to
        # the interval gaps on the evenly spaced scale
        matrix = matrix_of([[0, 0.5, 1], [0.5, 1, 0]])
        interval = krippendorff_alpha(matrix, AlphaMetric.INTERVAL).value
        ordinal = krippendorff_alpha(matrix, AlphaMetric.ORDINAL).value
        assert interval == pytest.approx(ordinal, abs=1e-12)

    @settings(max_examples=300, deadline=None)
    @given(a=column4, b=column4)
    def test_matches_oracle_two_raters(self, a, b):
        matrix = matrix_of([a, b])
        expected = alpha_oracle(matrix.values, "interval")
        if expected is UNDEFINED:
            assert krippendorff_alpha(matrix).undefined
        else:
            assert krippendorff_alpha(matrix).value == pytest.approx(expected, abs=1e-9)

    @settings(max_examples=150, deadline=None)
    @given(a=column4, b=column4, data=st.data())
    def test_permutation_invariant_over_items(self, a, b, data):
        matrix = matrix_of([a, b])
        perm = data.draw(st.permutations(range(4)))
        shuffled = RaterMatrix(
            items=tuple(matrix.items[i] for i in perm),
            raters=matrix.raters,
            values=tuple(matrix.values[i] for i in perm),
        )
        first = krippendorff_alpha(matrix)
        second = krippendorff_alpha(shuffled)
        assert (first.value is None) == (second.value is None)
        if first.value is not None:
            assert first.value == pytest.approx(second.value, abs=1e-12)


class TestSpearman:
    def test_increasing_vs_increasing(self):
        assert spearman_rho([0, 0.5, 1], [0, 0.5, 1]).value == pytest.approx(1.0, abs=1e-12)

    def test_increasing_vs_decreasing(self):
        assert spearman_rho([0, 0.5, 1], [1, 0.5, 0]).value == pytest.approx(-1.0, abs=1e-12)

    def test_frozen_tie_fixture(self):
        # average-rank computation gives 5/6
        x, y = [0, 0.5, 0.5, 1], [0, 1, 0.5, 1]
        assert spearman_oracle(x, y) == pytest.approx(5 / 6, abs=1e-12)
        assert spearman_rho(x, y).value == pytest.approx(5 / 6, abs=1e-12)

    def test_zero_variance_undefined(self):
        assert spearman_rho([1, 1, 1], [0, 0.5, 1]).undefined

    @settings(max_examples=300, deadline=None)
    @given(a=column4, b=column4)
    def test_matches_oracle(self, a, b):
        expected = spearman_oracle(a, b)
        result = spearman_rho(a, b)
        if expected is UNDEFINED:
            assert result.undefined
        else:
            assert result.value == pytest.approx(expected, abs=1e-9)


class TestDigest:
    def test_identical_columns_empty(self):
        digest = disagreement_digest(matrix_of([[1, 0.5, 0], [1, 0.5, 0]]))
        assert digest.entries == ()
        assert digest.header == ""

    def test_one_discordant_item_named(self):
        digest = disagreement_digest(
            matrix_of([[1, 0.5, 0], [1, 1, 0]], items=["E1:1(i)", "E1:1(ii)", "E1:1(iii)"])
        )
        assert len(digest.entries) == 1
        assert digest.entries[0].item == "E1:1(ii)"

    def test_sorted_by_spread(self):
        digest = disagreement_digest(matrix_of([[1, 1, 0.5], [0, 0.5, 0]]))
        assert [e.spread for e in digest.entries] == [1.0, 0.5, 0.5]

    def test_constant_matrix_gets_fallback_header(self):
        digest = disagreement_digest(matrix_of([[1, 1], [1, 1]]))
        assert "statistics unsuitable" in digest.header


class TestRaterMatrix:
    def test_row_shape_enforced(self):
        with pytest.raises(AgreementError):
            RaterMatrix(items=("a",), raters=("r1", "r2"), values=((1.0,),))

    def test_scale_enforced(self):
        with pytest.raises(AgreementError, match="scale"):
            RaterMatrix(items=("a",), raters=("r1", "r2"), values=((1.0, 0.7),))

    def test_round_trip_dict(self):
        matrix = matrix_of([[1, 0.5, None], [0, 0.5, 1]])
        raw = matrix.to_dict()
        again = RaterMatrix(
            items=tuple(raw["items"]),
            raters=tuple(raw["raters"]),
            values=tuple(tuple(row) for row in raw["values"]),
            scale=tuple(raw["scale"]),
        )
        assert again == matrix


def test_perfect_agreement_with_variation_is_exact():
    for column in ([0, 0.5, 1, 1], [1, 0, 0, 0.5], [0.5, 0, 1, 0.5]):
        assert cohen_kappa(column, column).value == 1.0
        assert krippendorff_alpha(matrix_of([column, column])).value == 1.0
        rho = spearman_rho(column, column)
        assert rho.value == pytest.approx(1.0, abs=1e-12)


def test_exhaustive_sample_against_oracles():
    # a deterministic slice of the full 3^8 sweep (the acceptance suite runs
    # the whole thing)
    cols = list(itertools.product(GRADE_SCALE, repeat=4))
    for a in cols[::11]:
        for b in cols[::13]:
            expected = kappa_oracle(a, b, GRADE_SCALE)
            result = cohen_kappa(a, b)
            if expected is UNDEFINED:
                assert result.undefined
            else:
                assert math.isclose(result.value, expected, abs_tol=1e-9)
