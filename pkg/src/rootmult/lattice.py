"""
The rank-3 root lattice: bilinear form, simple reflections and root classification.

Node 1 is the centre of the diagram, joined to node 2 by s edges and to
node 3 by t edges. Node indices are 1, 2, 3 throughout the public API.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Sequence

from rootmult.arith import InvalidWindowError, SurdWindow, in_imaginary_window


NODES = (1, 2, 3)


class InvalidShapeError(InvalidWindowError):
    """Raised when (s, t) does not give a hyperbolic rank-3 shape."""
    pass


class InvalidNodeError(ValueError):
    """Raised for a node index outside {1, 2, 3}."""
    pass


class NotImaginaryError(ValueError):
    """Raised when an operation needs an imaginary root and gets something else."""
    pass


@dataclass(frozen=True)
class Shape:
    """Edge multiplicities of the diagram 2 =s= 1 =t= 3."""
    s: int
    t: int

    def __post_init__(self):
        if self.s < 1 or self.t < 1:
            raise InvalidShapeError(f"s and t must be positive integers, got s={self.s}, t={self.t}")
        if self.K < 0:
            raise InvalidShapeError(
                f"s^2 + t^2 = {self.S} < 4: no real window, the shape is not hyperbolic"
            )

    @property
    def S(self) -> int:
        return self.s * self.s + self.t * self.t

    @property
    def K(self) -> int:
        return self.S * self.S - 4 * self.S

    @property
    def window(self) -> SurdWindow:
        return SurdWindow(S=self.S, K=self.K)

    @property
    def is_symmetric(self) -> bool:
        """True when swapping nodes 2 and 3 is a diagram automorphism."""
        return self.s == self.t


@dataclass(frozen=True, order=True)
class LatticeVector:
    """β = a·α1 + b·α2 + c·α3."""
    a: int
    b: int
    c: int

    @classmethod
    def parse(cls, text: str) -> "LatticeVector":
        """
        Parse "a,b,c" (optionally wrapped in parentheses).

        Raises:
            ValueError: If the text is not three comma-separated integers
        """
        cleaned = text.strip().strip("()")
        parts = [p.strip() for p in cleaned.split(",")]
        if len(parts) != 3:
            raise ValueError(f"Expected 'a,b,c', got {text!r}")
        try:
            a, b, c = (int(p) for p in parts)
        except ValueError:
            raise ValueError(f"Root coefficients must be integers, got {text!r}")
        return cls(a, b, c)

    @classmethod
    def simple(cls, i: int) -> "LatticeVector":
        """The simple root α_i."""
        _check_node(i)
        return cls(*(1 if j == i else 0 for j in NODES))

    def coefficient(self, i: int) -> int:
        _check_node(i)
        return (self.a, self.b, self.c)[i - 1]

    def replace(self, i: int, value: int) -> "LatticeVector":
        coeffs = [self.a, self.b, self.c]
        coeffs[i - 1] = value
        return LatticeVector(*coeffs)

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    @property
    def height(self) -> int:
        return self.a + self.b + self.c

    def is_nonnegative(self) -> bool:
        return self.a >= 0 and self.b >= 0 and self.c >= 0

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0 and self.c == 0

    def __add__(self, other: "LatticeVector") -> "LatticeVector":
        return LatticeVector(self.a + other.a, self.b + other.b, self.c + other.c)

    def __sub__(self, other: "LatticeVector") -> "LatticeVector":
        return LatticeVector(self.a - other.a, self.b - other.b, self.c - other.c)

    def scaled_down(self, k: int) -> "LatticeVector":
        """β/k; the caller guarantees k divides every coefficient."""
        return LatticeVector(self.a // k, self.b // k, self.c // k)

    def __str__(self) -> str:
        return f"({self.a}, {self.b}, {self.c})"


class RootTag(str, Enum):
    """Classification of a nonnegative lattice vector."""
    REAL = "RealRoot"
    IMAGINARY = "ImaginaryRoot"
    NOT_ROOT = "NotRoot"


@dataclass(frozen=True)
class RootClass:
    """Result of walking a vector towards the fundamental domain."""
    tag: RootTag
    representative: LatticeVector
    reflection_word: tuple[int, ...]


def _check_node(i: int) -> None:
    if i not in NODES:
        raise InvalidNodeError(f"Node index must be 1, 2 or 3, got {i}")


def pairing(x: LatticeVector, y: LatticeVector, sh: Shape) -> int:
    """Symmetric bilinear form with Cartan matrix [[2,-s,-t],[-s,2,0],[-t,0,2]]."""
    return (
        2 * (x.a * y.a + x.b * y.b + x.c * y.c)
        - sh.s * (x.a * y.b + x.b * y.a)
        - sh.t * (x.a * y.c + x.c * y.a)
    )


def norm(x: LatticeVector, sh: Shape) -> int:
    """(x, x)."""
    return pairing(x, x, sh)


def simple_pairing(i: int, x: LatticeVector, sh: Shape) -> int:
    """⟨α_i, x⟩, computed without building α_i."""
    if i == 1:
        return 2 * x.a - sh.s * x.b - sh.t * x.c
    if i == 2:
        return 2 * x.b - sh.s * x.a
    if i == 3:
        return 2 * x.c - sh.t * x.a
    raise InvalidNodeError(f"Node index must be 1, 2 or 3, got {i}")


def reflect(i: int, x: LatticeVector, sh: Shape) -> LatticeVector:
    """s_i(x) = x − ⟨α_i, x⟩·α_i."""
    p = simple_pairing(i, x, sh)
    return x.replace(i, x.coefficient(i) - p)


def orbit_walk(x: LatticeVector, word: Sequence[int], sh: Shape) -> LatticeVector:
    """Apply reflections in order, first element first."""
    for i in word:
        x = reflect(i, x, sh)
    return x


def orbit_trace(x: LatticeVector, word: Sequence[int], sh: Shape) -> list[LatticeVector]:
    """Every intermediate vector of `orbit_walk`, starting with x itself."""
    trace = [x]
    for i in word:
        x = reflect(i, x, sh)
        trace.append(x)
    return trace


def _is_simple(x: LatticeVector) -> bool:
    return sorted(x.as_tuple()) == [0, 0, 1]


def _support_connected(x: LatticeVector) -> bool:
    # node 1 bridges 2 and 3
    return not (x.a == 0 and x.b != 0 and x.c != 0)


def classify(x: LatticeVector, sh: Shape) -> RootClass:
    """
    Classify a nonnegative vector as a real root, an imaginary root or a non-root.

    Reflects at the smallest node with positive pairing until the vector is
    a simple root, turns negative somewhere, or reaches the fundamental
    domain. Each reflection strictly lowers the height, so the walk ends.

    Args:
        x: Vector with all coefficients ≥ 0, not zero
        sh: The shape

    Returns:
        RootClass whose reflection_word maps x to its representative

    Raises:
        ValueError: If x is zero or has a negative coefficient
    """
    if not x.is_nonnegative():
        raise ValueError(f"classify needs nonnegative coefficients, got {x}")
    if x.is_zero():
        raise ValueError("classify needs a nonzero vector")

    word: list[int] = []
    y = x
    while True:
        if _is_simple(y):
            return RootClass(RootTag.REAL, y, tuple(word))
        if not y.is_nonnegative():
            return RootClass(RootTag.NOT_ROOT, y, tuple(word))
        node = next((i for i in NODES if simple_pairing(i, y, sh) > 0), None)
        if node is None:
            tag = RootTag.IMAGINARY if _support_connected(y) else RootTag.NOT_ROOT
            return RootClass(tag, y, tuple(word))
        y = reflect(node, y, sh)
        word.append(node)


def is_anti_dominant(x: LatticeVector, sh: Shape) -> bool:
    """True when ⟨α_i, x⟩ ≤ 0 for every node."""
    return all(simple_pairing(i, x, sh) <= 0 for i in NODES)


def is_minimal(x: LatticeVector, sh: Shape) -> bool:
    """
    True when the imaginary root x is its own anti-dominant representative.

    Raises:
        NotImaginaryError: If x is not an imaginary root
    """
    if not x.is_nonnegative() or x.is_zero() or classify(x, sh).tag != RootTag.IMAGINARY:
        raise NotImaginaryError(f"{x} is not an imaginary root for s={sh.s}, t={sh.t}")
    return is_anti_dominant(x, sh)


def minimal_representative(x: LatticeVector, sh: Shape) -> RootClass:
    """
    The anti-dominant element in the orbit of the imaginary root x.

    Raises:
        NotImaginaryError: If x is not an imaginary root
    """
    result = classify(x, sh)
    if result.tag != RootTag.IMAGINARY:
        raise NotImaginaryError(f"{x} is not an imaginary root for s={sh.s}, t={sh.t}")
    return result


def gcd3(x: LatticeVector) -> int:
    return math.gcd(math.gcd(abs(x.a), abs(x.b)), abs(x.c))


def vectors_of_height(h: int) -> Iterator[LatticeVector]:
    """All nonnegative vectors of height h in lexicographic order."""
    for a in range(h + 1):
        for b in range(h - a + 1):
            yield LatticeVector(a, b, h - a - b)


def sort_key(x: LatticeVector) -> tuple[int, int, int, int]:
    """Height first, then lexicographic."""
    return (x.height, x.a, x.b, x.c)


def has_full_support(x: LatticeVector) -> bool:
    return x.a > 0 and x.b > 0 and x.c > 0


def scan_minimal_roots(
    max_height: int, sh: Shape, full_support: bool = True
) -> list[LatticeVector]:
    """
    Minimal imaginary roots of height ≤ max_height, sorted by height then lexicographically.

    Minimal roots with a zero coefficient are multiples of the null root of an
    affine subdiagram (s = 2 or t = 2); they are skipped unless `full_support`
    is False.
    """
    found = []
    for h in range(1, max_height + 1):
        for x in vectors_of_height(h):
            if full_support and not has_full_support(x):
                continue
            if is_anti_dominant(x, sh) and classify(x, sh).tag == RootTag.IMAGINARY:
                found.append(x)
    return found


def window_holds(x: LatticeVector, sh: Shape) -> bool:
    """Necessary condition for positive imaginary roots: a/(sb+tc) inside the window."""
    return in_imaginary_window(x.a, sh.s * x.b + sh.t * x.c, sh.window)


def sort_vectors(vectors: Iterable[LatticeVector]) -> list[LatticeVector]:
    return sorted(vectors, key=sort_key)
