"""
rootmult: root multiplicity bounds for rank-3 hyperbolic Kac-Moody algebras.
"""

from rootmult.arith import SurdWindow, in_imaginary_window, leq_upper_surd, rat_cmp
from rootmult.config import Settings, get_settings
from rootmult.lattice import LatticeVector, RootTag, Shape, classify, is_minimal, reflect
from rootmult.paths import (
    EnumOptions,
    TouchRule,
    brute_enumerate,
    check_basic,
    check_refined,
    count_bounds,
    enumerate_words,
    parse_word,
)
from rootmult.peterson import MultTable, multiplicity
from rootmult.reference import TableRow, build_row, load_reference

__version__ = "0.1.0"
__all__ = [
    "SurdWindow",
    "in_imaginary_window",
    "leq_upper_surd",
    "rat_cmp",
    "Settings",
    "get_settings",
    "LatticeVector",
    "RootTag",
    "Shape",
    "classify",
    "is_minimal",
    "reflect",
    # Word counting
    "EnumOptions",
    "TouchRule",
    "brute_enumerate",
    "check_basic",
    "check_refined",
    "count_bounds",
    "enumerate_words",
    "parse_word",
    # Tables
    "MultTable",
    "multiplicity",
    "TableRow",
    "build_row",
    "load_reference",
]
