"""
Exact arithmetic: rational comparison and the surd window 1/2 ± √K/(2S).

Every boolean returned here is decided with integers only. Decimal values
are produced for display and never feed back into a decision.
"""

from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from enum import Enum
from fractions import Fraction


Rational = Fraction


class Ordering(str, Enum):
    """Result of a three-way comparison."""
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"


class WindowPosition(str, Enum):
    """Placement of a ratio relative to the open window."""
    BELOW = "below"
    INSIDE = "inside"
    ABOVE = "above"


class InvalidWindowError(ValueError):
    """Raised when S and K do not describe a real-valued window."""
    pass


def rat_cmp(x: Fraction, y: Fraction) -> Ordering:
    """
    Compare two rationals by cross-multiplication.

    Args:
        x: Left operand
        y: Right operand

    Returns:
        Ordering of x relative to y
    """
    left = x.numerator * y.denominator
    right = y.numerator * x.denominator
    if left < right:
        return Ordering.LESS
    if left > right:
        return Ordering.GREATER
    return Ordering.EQUAL


@dataclass(frozen=True)
class SurdWindow:
    """
    The constants S = s²+t² and K = S²−4S of a hyperbolic shape.

    The window is the open interval (1/2 − √K/(2S), 1/2 + √K/(2S)).
    """
    S: int
    K: int

    def __post_init__(self):
        if self.S <= 0:
            raise InvalidWindowError(f"S must be positive, got {self.S}")
        if self.K != self.S * self.S - 4 * self.S:
            raise InvalidWindowError(
                f"K must equal S^2 - 4S = {self.S * self.S - 4 * self.S}, got {self.K}"
            )
        if self.K < 0:
            raise InvalidWindowError(
                f"S = {self.S} gives K = {self.K} < 0: the window has no real endpoints"
            )

    @classmethod
    def from_sum_of_squares(cls, S: int) -> "SurdWindow":
        """Build the window for S = s²+t²."""
        return cls(S=S, K=S * S - 4 * S)


def _offset(num: int, den: int, w: SurdWindow) -> int:
    # L = 2·S·num − S·den; the ratio sits at 1/2 + L/(2·S·den)
    if den <= 0:
        raise ValueError(f"denominator must be positive, got {den}")
    return 2 * w.S * num - w.S * den


def leq_upper_surd(num: int, den: int, w: SurdWindow) -> bool:
    """
    Decide num/den ≤ 1/2 + √K/(2S) exactly.

    Args:
        num: Nonnegative numerator
        den: Positive denominator
        w: The window

    Returns:
        True when the ratio does not exceed the upper endpoint
    """
    offset = _offset(num, den, w)
    if offset <= 0:
        return True
    return offset * offset <= den * den * w.K


def window_position(num: int, den: int, w: SurdWindow) -> WindowPosition:
    """
    Place num/den below, inside or above the open window.

    The ratio is inside exactly when |L| < den·√K, i.e. L² < den²·K, where
    L = 2·S·num − S·den. Endpoints count as outside.
    """
    offset = _offset(num, den, w)
    if offset * offset < den * den * w.K:
        return WindowPosition.INSIDE
    return WindowPosition.ABOVE if offset > 0 else WindowPosition.BELOW


def in_imaginary_window(a: int, wdt: int, w: SurdWindow) -> bool:
    """
    Decide 1/2 − √K/(2S) < a/wdt < 1/2 + √K/(2S) exactly.

    Args:
        a: Coefficient of α1
        wdt: Weighted width s·b + t·c, must be positive
        w: The window

    Returns:
        True when the ratio lies strictly inside the window

    Raises:
        ValueError: If wdt is not positive
    """
    if wdt <= 0:
        raise ValueError(f"weighted width s*b + t*c must be positive, got {wdt}")
    return window_position(a, wdt, w) == WindowPosition.INSIDE


def _decimal_endpoint(w: SurdWindow, digits: int, sign: int) -> str:
    if digits < 0:
        raise ValueError(f"digits must be nonnegative, got {digits}")
    with localcontext() as ctx:
        ctx.prec = digits + 30
        value = Decimal(1) / 2 + sign * Decimal(w.K).sqrt() / (2 * w.S)
        quantum = Decimal(1).scaleb(-digits)
        return str(value.quantize(quantum, rounding=ROUND_HALF_EVEN))


def surd_upper_decimal(w: SurdWindow, digits: int) -> str:
    """Decimal expansion of 1/2 + √K/(2S), rounded to `digits` places. Display only."""
    return _decimal_endpoint(w, digits, 1)


def surd_lower_decimal(w: SurdWindow, digits: int) -> str:
    """Decimal expansion of 1/2 − √K/(2S), rounded to `digits` places. Display only."""
    return _decimal_endpoint(w, digits, -1)
