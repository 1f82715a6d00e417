"""
Tests for the exact arithmetic module.
"""

import random
from decimal import Decimal, localcontext
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rootmult.arith import (
    InvalidWindowError,
    Ordering,
    SurdWindow,
    WindowPosition,
    in_imaginary_window,
    leq_upper_surd,
    rat_cmp,
    surd_lower_decimal,
    surd_upper_decimal,
    window_position,
)


class TestRatCmp:
    """Test rational comparison."""

    def test_equal_after_reduction(self):
        assert rat_cmp(Fraction(1, 3), Fraction(2, 6)) == Ordering.EQUAL

    def test_less_and_greater(self):
        assert rat_cmp(Fraction(1, 2), Fraction(2, 3)) == Ordering.LESS
        assert rat_cmp(Fraction(-1, 2), Fraction(-2, 3)) == Ordering.GREATER

    @given(
        st.fractions(min_value=-1000, max_value=1000, max_denominator=10**6),
        st.fractions(min_value=-1000, max_value=1000, max_denominator=10**6),
    )
    def test_agrees_with_fraction_ordering(self, x, y):
        expected = Ordering.LESS if x < y else Ordering.GREATER if x > y else Ordering.EQUAL
        assert rat_cmp(x, y) == expected


class TestSurdWindow:
    """Test window construction."""

    def test_from_sum_of_squares(self):
        w = SurdWindow.from_sum_of_squares(5)
        assert (w.S, w.K) == (5, 5)

    def test_inconsistent_k_rejected(self):
        with pytest.raises(InvalidWindowError, match="K must equal"):
            SurdWindow(S=5, K=4)

    def test_negative_k_rejected(self):
        with pytest.raises(InvalidWindowError, match="no real endpoints"):
            SurdWindow.from_sum_of_squares(2)

    def test_nonpositive_s_rejected(self):
        with pytest.raises(InvalidWindowError):
            SurdWindow(S=0, K=0)


class TestLeqUpperSurd:
    """Test the exact comparison against 1/2 + √K/(2S)."""

    def test_s5_upper_endpoint(self):
        w = SurdWindow.from_sum_of_squares(5)
        # 1/2 + √5/10 = 0.72360679...
        assert leq_upper_surd(7236, 10000, w)
        assert not leq_upper_surd(7237, 10000, w)
        assert not leq_upper_surd(3, 4, w)

    def test_half_and_zero_always_below(self):
        w = SurdWindow.from_sum_of_squares(8)
        assert leq_upper_surd(1, 2, w)
        assert leq_upper_surd(0, 7, w)

    def test_degenerate_window(self):
        w = SurdWindow.from_sum_of_squares(4)
        assert leq_upper_surd(1, 2, w)
        assert not leq_upper_surd(3, 5, w)

    def test_nonpositive_denominator_rejected(self):
        with pytest.raises(ValueError, match="denominator"):
            leq_upper_surd(1, 0, SurdWindow.from_sum_of_squares(5))

    @given(
        st.fractions(min_value=0, max_value=2, max_denominator=10**4),
        st.fractions(min_value=0, max_value=2, max_denominator=10**4),
        st.sampled_from([4, 5, 8, 10, 13, 17]),
    )
    def test_monotone(self, x, y, S):
        w = SurdWindow.from_sum_of_squares(S)
        lo, hi = min(x, y), max(x, y)
        if leq_upper_surd(hi.numerator, hi.denominator, w):
            assert leq_upper_surd(lo.numerator, lo.denominator, w)

    def test_matches_high_precision_evaluation(self):
        """10^4 random rationals against a 100-digit decimal evaluation."""
        rng = random.Random(20240605)
        with localcontext() as ctx:
            ctx.prec = 100
            for _ in range(10_000):
                S = rng.choice([5, 8, 10, 13, 17, 20])
                w = SurdWindow.from_sum_of_squares(S)
                num = rng.randint(0, 10**6)
                den = rng.randint(1, 10**6)
                upper = Decimal(1) / 2 + Decimal(w.K).sqrt() / (2 * S)
                assert leq_upper_surd(num, den, w) == (Decimal(num) / Decimal(den) <= upper)


class TestWindowPosition:
    """Test three-way placement relative to the open window."""

    def test_positions_for_s5(self):
        w = SurdWindow.from_sum_of_squares(5)
        assert window_position(1, 4, w) == WindowPosition.BELOW
        assert window_position(1, 2, w) == WindowPosition.INSIDE
        assert window_position(3, 4, w) == WindowPosition.ABOVE

    def test_in_imaginary_window(self):
        w = SurdWindow.from_sum_of_squares(5)
        assert in_imaginary_window(1, 2, w)
        assert not in_imaginary_window(1, 4, w)

    def test_in_imaginary_window_needs_positive_width(self):
        with pytest.raises(ValueError, match="must be positive"):
            in_imaginary_window(1, 0, SurdWindow.from_sum_of_squares(5))

    @given(
        st.integers(0, 10**4),
        st.integers(1, 10**4),
        st.sampled_from([4, 5, 8, 10, 13, 17, 20]),
    )
    def test_quadratic_form_agrees(self, num, den, S):
        """r = num/den is inside exactly when S·r² − S·r + 1 < 0."""
        w = SurdWindow.from_sum_of_squares(S)
        quadratic = S * num * num - S * num * den + den * den
        assert in_imaginary_window(num, den, w) == (quadratic < 0)

    @pytest.mark.parametrize("s,t", [(2, 1), (2, 2), (3, 1), (1, 3)])
    def test_reflection_moves_below_to_above(self, s, t):
        """If a/(sb+tc) is below the window, the ratio of (a, sa−b, ta−c) is above it."""
        S = s * s + t * t
        w = SurdWindow.from_sum_of_squares(S)
        for a in range(1, 25):
            for b in range(s * a + 1):
                for c in range(t * a + 1):
                    width = s * b + t * c
                    reflected_width = S * a - width
                    if width == 0 or reflected_width <= 0:
                        continue
                    if window_position(a, width, w) == WindowPosition.BELOW:
                        assert window_position(a, reflected_width, w) == WindowPosition.ABOVE


class TestDecimals:
    """Test display-only decimal endpoints."""

    def test_upper(self):
        assert surd_upper_decimal(SurdWindow.from_sum_of_squares(5), 4) == "0.7236"
        assert surd_upper_decimal(SurdWindow.from_sum_of_squares(8), 4) == "0.8536"

    def test_lower(self):
        assert surd_lower_decimal(SurdWindow.from_sum_of_squares(5), 4) == "0.2764"
        assert surd_lower_decimal(SurdWindow.from_sum_of_squares(8), 4) == "0.1464"

    def test_negative_digits_rejected(self):
        with pytest.raises(ValueError):
            surd_upper_decimal(SurdWindow.from_sum_of_squares(5), -1)
