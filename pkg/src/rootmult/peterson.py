"""
Exact root multiplicities via the Peterson recurrence.

With (ρ, α_i) = 1 and c_β = Σ_{k|β} m_{β/k}/k, every non-simple β ≥ 0 satisfies

    ((β,β) − 2·ht(β))·c_β = Σ_{β′+β″=β} (β′,β″)·c_{β′}·c_{β″},

and m_β = c_β − Σ_{k≥2, k|β} m_{β/k}/k. Where the left factor vanishes
(and the right-hand side with it) m_β is 0 and c_β is the divisor sum,
e.g. c_{(2,0,2)} = 1/2 for s=2, t=1. Tables are filled by ascending
height with `fractions.Fraction`; every multiplicity is checked to be a
nonnegative integer as it is stored.
"""

import csv
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

from rootmult.lattice import LatticeVector, Shape, norm, vectors_of_height


Triple = tuple[int, int, int]

CACHE_COLUMNS = ["s", "t", "a", "b", "c", "mult"]


class PetersonConsistencyError(RuntimeError):
    """Raised when the recurrence produces a value that cannot be a multiplicity."""
    pass


class CacheFormatError(ValueError):
    """Raised when a multiplicity cache file cannot be used for a shape."""
    pass


@dataclass
class MultTable:
    """
    Memoized multiplicities and c-coefficients for one shape.

    Keys are coefficient triples (a, b, c). Every vector of height
    ≤ frontier is present; nothing above it is.
    """
    shape: Shape
    multiplicities: dict[Triple, int] = field(default_factory=dict)
    c_coeffs: dict[Triple, Fraction] = field(default_factory=dict)
    frontier: int = 0

    def __contains__(self, x: LatticeVector) -> bool:
        return x.as_tuple() in self.multiplicities


def denominator(x: LatticeVector, sh: Shape) -> int:
    """(x, x) − 2·ht(x), the factor in front of c_x."""
    return norm(x, sh) - 2 * x.height


def _divisor_correction(key: Triple, mults: dict[Triple, int]) -> Fraction:
    # Σ_{k≥2, k|β} m_{β/k}/k
    a, b, c = key
    total = Fraction(0)
    for k in range(2, max(key) + 1):
        if a % k == 0 and b % k == 0 and c % k == 0:
            m = mults[(a // k, b // k, c // k)]
            if m:
                total += Fraction(m, k)
    return total


def decomposition_sum(x: LatticeVector, table: MultTable, ordered: bool = False) -> Fraction:
    """
    Right-hand side Σ (β′,β″)·c_{β′}·c_{β″} over β′+β″ = x, both parts nonzero.

    The default walks each unordered pair once and doubles it, adding the
    diagonal β′ = β″ once. `ordered=True` walks every ordered pair and is
    kept for cross-checking.

    All parts must already be in the table.
    """
    s, t = table.shape.s, table.shape.t
    coeffs = table.c_coeffs
    a, b, c = x.a, x.b, x.c
    total = Fraction(0)
    for a1 in range(a + 1):
        a2 = a - a1
        for b1 in range(b + 1):
            b2 = b - b1
            for c1 in range(c + 1):
                c2 = c - c1
                first = (a1, b1, c1)
                second = (a2, b2, c2)
                if not ordered and first > second:
                    continue
                if (a1 | b1 | c1) == 0 or (a2 | b2 | c2) == 0:
                    continue
                cp = coeffs[first]
                if not cp:
                    continue
                cpp = coeffs[second]
                if not cpp:
                    continue
                form = (
                    2 * (a1 * a2 + b1 * b2 + c1 * c2)
                    - s * (a1 * b2 + b1 * a2)
                    - t * (a1 * c2 + c1 * a2)
                )
                if not form:
                    continue
                weight = 1 if (ordered or first == second) else 2
                total += weight * form * cp * cpp
    return total


def _store(table: MultTable, key: Triple, c_value: Fraction) -> None:
    m = c_value - _divisor_correction(key, table.multiplicities)
    if m.denominator != 1 or m < 0:
        raise PetersonConsistencyError(
            f"multiplicity of {key} for s={table.shape.s}, t={table.shape.t} came out as {m}"
        )
    table.c_coeffs[key] = c_value
    table.multiplicities[key] = int(m)


def fill(table: MultTable, height: int) -> MultTable:
    """
    Extend the table so that every vector of height ≤ `height` is present.

    Raises:
        PetersonConsistencyError: On a negative or fractional multiplicity, or a
            vanishing denominator with a nonzero right-hand side
    """
    sh = table.shape
    for h in range(table.frontier + 1, height + 1):
        for x in vectors_of_height(h):
            key = x.as_tuple()
            if h == 1:
                _store(table, key, Fraction(1))
                continue
            rhs = decomposition_sum(x, table)
            d = denominator(x, sh)
            if d == 0:
                if rhs != 0:
                    raise PetersonConsistencyError(
                        f"zero denominator with nonzero right-hand side {rhs} at {x}"
                    )
                # m_x = 0, so c_x is the divisor sum alone
                _store(table, key, _divisor_correction(key, table.multiplicities))
            else:
                _store(table, key, rhs / d)
        table.frontier = h
    return table


def _check_shape(sh: Shape, table: MultTable) -> None:
    if sh != table.shape:
        raise ValueError(
            f"table is for s={table.shape.s}, t={table.shape.t}, not s={sh.s}, t={sh.t}"
        )


def multiplicity(x: LatticeVector, sh: Shape, table: MultTable) -> int:
    """
    Exact root multiplicity of x: 0 for non-roots and for vectors with a negative coefficient.

    Args:
        x: The vector
        sh: The shape, must match the table
        table: Memo table, extended in place as needed

    Returns:
        The multiplicity m_x
    """
    _check_shape(sh, table)
    if not x.is_nonnegative() or x.is_zero():
        return 0
    if x.height > table.frontier:
        fill(table, x.height)
    return table.multiplicities[x.as_tuple()]


def c_coefficient(x: LatticeVector, sh: Shape, table: MultTable) -> Fraction:
    """
    The auxiliary coefficient c_x = Σ_{k|x} m_{x/k}/k.

    Raises:
        ValueError: If x is zero or has a negative coefficient
    """
    _check_shape(sh, table)
    if not x.is_nonnegative() or x.is_zero():
        raise ValueError(f"c-coefficients are defined for nonzero x ≥ 0, got {x}")
    if x.height > table.frontier:
        fill(table, x.height)
    return table.c_coeffs[x.as_tuple()]


# ============================================================================
# CSV cache
# ============================================================================

def save_cache(table: MultTable, path: Path) -> Path:
    """
    Write every stored multiplicity as `s,t,a,b,c,mult` rows.

    Returns:
        The path written
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    sh = table.shape
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(CACHE_COLUMNS)
        for h in range(1, table.frontier + 1):
            for x in vectors_of_height(h):
                writer.writerow([sh.s, sh.t, x.a, x.b, x.c, table.multiplicities[x.as_tuple()]])
    return path


def load_cache(path: Path, sh: Shape) -> MultTable:
    """
    Rebuild a table from a cache file.

    The frontier becomes the largest height whose vectors are all present;
    c-coefficients are recomputed from the stored multiplicities.

    Raises:
        CacheFormatError: If the header, shape or values are wrong
    """
    stored: dict[Triple, int] = {}
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames != CACHE_COLUMNS:
            raise CacheFormatError(f"{path}: expected header {','.join(CACHE_COLUMNS)}")
        for line_no, row in enumerate(reader, start=2):
            try:
                s, t = int(row["s"]), int(row["t"])
                key = (int(row["a"]), int(row["b"]), int(row["c"]))
                mult = int(row["mult"])
            except (TypeError, ValueError):
                raise CacheFormatError(f"{path}:{line_no}: non-integer field")
            if (s, t) != (sh.s, sh.t):
                raise CacheFormatError(
                    f"{path}:{line_no}: cache is for s={s}, t={t}, not s={sh.s}, t={sh.t}"
                )
            if mult < 0:
                raise CacheFormatError(f"{path}:{line_no}: negative multiplicity")
            stored[key] = mult

    table = MultTable(shape=sh)
    h = 1
    while all(x.as_tuple() in stored for x in vectors_of_height(h)):
        for x in vectors_of_height(h):
            key = x.as_tuple()
            table.multiplicities[key] = stored[key]
            table.c_coeffs[key] = stored[key] + _divisor_correction(key, table.multiplicities)
        table.frontier = h
        h += 1
    return table


def open_table(sh: Shape, cache: Optional[Path] = None) -> MultTable:
    """A table for `sh`, resumed from `cache` when that file exists."""
    if cache is not None and cache.exists():
        return load_cache(cache, sh)
    return MultTable(shape=sh)
