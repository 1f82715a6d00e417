"""
Table rows, the embedded reference tables, and the CSV/JSON codecs.

Uses CSV files for persistence: header `s,t,a,b,c,mult,refined,basic`,
UTF-8, LF line endings.
"""

import csv
import io
import json
from dataclasses import dataclass, replace
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional

from rootmult.lattice import LatticeVector, RootTag, Shape, classify, gcd3, sort_key
from rootmult.paths import EnumOptions, count_bounds
from rootmult.peterson import MultTable, fill, multiplicity


TABLE_COLUMNS = ["s", "t", "a", "b", "c", "mult", "refined", "basic"]
REFERENCE_COLUMNS = TABLE_COLUMNS + ["source"]

# Reference rows from this source take hours to reproduce
DEEP_SOURCE = "s2t2-deep"

# Published values known to be misprinted, keyed by (s, t, a, b, c), with the
# value the row should carry. The reference CSV keeps the printed value.
ERRATA: dict[tuple[int, int, int, int, int], dict[str, int]] = {
    # printed basic 35 repeats the (6, 5, 1) entry
    (2, 2, 6, 1, 5): {"basic": 52},
}


class OutputFormat(str, Enum):
    PRETTY = "pretty"
    CSV = "csv"
    JSON = "json"


class TableFormatError(ValueError):
    """Raised when a roots file or table CSV does not have the expected columns."""
    pass


class BoundOrderError(RuntimeError):
    """Raised when mult ≤ refined ≤ basic fails for a primitive imaginary root."""
    pass


@dataclass(frozen=True)
class TableRow:
    """One root with its multiplicity and both word-count bounds."""
    s: int
    t: int
    a: int
    b: int
    c: int
    mult: int
    refined: int
    basic: int

    @property
    def key(self) -> tuple[int, int, int, int, int]:
        return (self.s, self.t, self.a, self.b, self.c)

    @property
    def root(self) -> LatticeVector:
        return LatticeVector(self.a, self.b, self.c)

    @property
    def excess(self) -> int:
        """refined − mult: how far the sharper bound is from exact."""
        return self.refined - self.mult

    def as_list(self) -> list[int]:
        return [self.s, self.t, self.a, self.b, self.c, self.mult, self.refined, self.basic]


@dataclass
class ReferenceSet:
    """Published rows, verbatim and with repeats, each tagged with the table it came from."""
    rows: list[TableRow]
    provenance: list[str]

    def deduplicated(self, sh: Optional[Shape] = None, full: bool = False) -> dict[tuple, TableRow]:
        """
        Rows keyed by (s, t, a, b, c), first occurrence wins.

        Args:
            sh: Keep only rows of this shape
            full: Include the rows that take hours to reproduce
        """
        keyed: dict[tuple, TableRow] = {}
        for row, source in zip(self.rows, self.provenance):
            if sh is not None and (row.s, row.t) != (sh.s, sh.t):
                continue
            if source == DEEP_SOURCE and not full:
                continue
            keyed.setdefault(row.key, row)
        return keyed

    def roots(self, sh: Shape, full: bool = False) -> list[LatticeVector]:
        return [row.root for row in self.deduplicated(sh, full).values()]


@dataclass(frozen=True)
class Mismatch:
    expected: TableRow
    actual: TableRow

    @property
    def fields(self) -> list[str]:
        return [
            name
            for name in ("mult", "refined", "basic")
            if getattr(self.expected, name) != getattr(self.actual, name)
        ]

    @property
    def known_erratum(self) -> bool:
        """True when the printed row is a listed misprint and the computed row has the corrected values."""
        return corrected(self.expected) == self.actual != self.expected


@dataclass(frozen=True)
class SymmetryPair:
    """Rows (a, k, ℓ) and (a, ℓ, k) of a symmetric shape."""
    first: TableRow
    second: TableRow

    @property
    def mult_equal(self) -> bool:
        return self.first.mult == self.second.mult

    @property
    def bounds_differ(self) -> bool:
        return (self.first.refined, self.first.basic) != (self.second.refined, self.second.basic)


# ============================================================================
# Building and comparing rows
# ============================================================================

def corrected(row: TableRow) -> TableRow:
    """The row with any listed erratum applied."""
    return replace(row, **ERRATA.get(row.key, {}))



def build_row(
    root: LatticeVector, sh: Shape, table: MultTable, opts: EnumOptions = EnumOptions()
) -> TableRow:
    """
    Compute mult, refined and basic for one root.

    Raises:
        BoundOrderError: If mult ≤ refined ≤ basic fails while gcd(a, b, c) = 1
            and the root is imaginary
    """
    mult = multiplicity(root, sh, table)
    basic, refined = count_bounds(root, sh, opts)
    row = TableRow(sh.s, sh.t, root.a, root.b, root.c, mult, refined, basic)

    if gcd3(root) == 1 and classify(root, sh).tag == RootTag.IMAGINARY:
        if not mult <= refined <= basic:
            raise BoundOrderError(
                f"{root}: mult={mult}, refined={refined}, basic={basic} are out of order"
            )
    return row


def build_rows(
    roots: Iterable[LatticeVector],
    sh: Shape,
    table: MultTable,
    opts: EnumOptions = EnumOptions(),
) -> list[TableRow]:
    """Rows for every root, sorted by height then lexicographically; repeated roots appear once."""
    ordered = sorted(set(roots), key=sort_key)
    if ordered:
        fill(table, max(x.height for x in ordered))
    return [build_row(x, sh, table, opts) for x in ordered]


def compare_rows(rows: Iterable[TableRow], reference: dict[tuple, TableRow]) -> list[Mismatch]:
    """
    Computed rows that disagree with the reference entry of the same key.

    Listed misprints are still returned; `Mismatch.known_erratum` marks them.
    """
    mismatches = []
    for row in rows:
        expected = reference.get(row.key)
        if expected is not None and expected != row:
            mismatches.append(Mismatch(expected=expected, actual=row))
    return mismatches


def symmetry_report(rows: Iterable[TableRow]) -> list[SymmetryPair]:
    """Pairs (a, k, ℓ)/(a, ℓ, k) with k < ℓ among rows of shapes with s = t."""
    by_key = {row.key: row for row in rows if row.s == row.t}
    pairs = []
    for key, row in sorted(by_key.items()):
        s, t, a, b, c = key
        if b < c and (s, t, a, c, b) in by_key:
            pairs.append(SymmetryPair(first=row, second=by_key[(s, t, a, c, b)]))
    return pairs


# ============================================================================
# CSV / JSON codecs
# ============================================================================

def _read_int_rows(reader: csv.DictReader, columns: list[str], origin: str) -> Iterable[tuple[int, dict]]:
    for line_no, record in enumerate(reader, start=2):
        try:
            yield line_no, {name: int(record[name]) for name in columns}
        except (TypeError, ValueError):
            raise TableFormatError(f"{origin}:{line_no}: non-integer field")


def format_csv(rows: Iterable[TableRow]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(TABLE_COLUMNS)
    for row in rows:
        writer.writerow(row.as_list())
    return buffer.getvalue()


def parse_csv(text: str, origin: str = "<table>") -> list[TableRow]:
    """
    Parse a table CSV produced by `format_csv`.

    Raises:
        TableFormatError: If the header is not exactly s,t,a,b,c,mult,refined,basic
    """
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames != TABLE_COLUMNS:
        raise TableFormatError(f"{origin}: expected header {','.join(TABLE_COLUMNS)}")
    return [TableRow(**values) for _, values in _read_int_rows(reader, TABLE_COLUMNS, origin)]


def format_json(rows: Iterable[TableRow], sh: Shape) -> str:
    data = {
        "shape": {"s": sh.s, "t": sh.t},
        "rows": [
            {
                "root": [row.a, row.b, row.c],
                "mult": row.mult,
                "refined": row.refined,
                "basic": row.basic,
            }
            for row in rows
        ],
    }
    return json.dumps(data, indent=2)


def parse_json(text: str) -> list[TableRow]:
    data = json.loads(text)
    s, t = data["shape"]["s"], data["shape"]["t"]
    return [
        TableRow(s, t, *entry["root"], entry["mult"], entry["refined"], entry["basic"])
        for entry in data["rows"]
    ]


def read_roots_file(path: Path) -> list[LatticeVector]:
    """
    Read roots from a CSV with columns a, b, c; other columns are ignored.

    Raises:
        TableFormatError: If a column is missing or a value is not an integer
    """
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        fieldnames = reader.fieldnames or []
        missing = [name for name in ("a", "b", "c") if name not in fieldnames]
        if missing:
            raise TableFormatError(f"{path}: missing column(s) {', '.join(missing)}")
        roots = []
        for line_no, values in _read_int_rows(reader, ["a", "b", "c"], str(path)):
            root = LatticeVector(values["a"], values["b"], values["c"])
            if not root.is_nonnegative() or root.is_zero() or root.a < 1:
                raise TableFormatError(f"{path}:{line_no}: {root} is not a valid target")
            roots.append(root)
    return roots


def load_reference() -> ReferenceSet:
    """The reference tables shipped with the package."""
    text = resources.files("rootmult").joinpath("data/reference.csv").read_text(encoding="utf-8")
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames != REFERENCE_COLUMNS:
        raise TableFormatError(f"reference.csv: expected header {','.join(REFERENCE_COLUMNS)}")

    rows: list[TableRow] = []
    provenance: list[str] = []
    for record in reader:
        rows.append(TableRow(**{name: int(record[name]) for name in TABLE_COLUMNS}))
        provenance.append(record["source"])
    return ReferenceSet(rows=rows, provenance=provenance)
