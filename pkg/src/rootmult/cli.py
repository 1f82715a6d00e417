"""
CLI tool for rootmult.
"""

import json
import warnings
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Optional

import typer
from rich.console import Console
from rich.table import Table

from rootmult.arith import surd_lower_decimal, surd_upper_decimal
from rootmult.config import Settings, get_settings
from rootmult.lattice import (
    InvalidNodeError,
    LatticeVector,
    RootTag,
    Shape,
    classify,
    is_anti_dominant,
    minimal_representative,
    norm,
    orbit_trace,
    scan_minimal_roots,
    sort_vectors,
    vectors_of_height,
)
from rootmult.paths import (
    BlockWord,
    EmitMode,
    EnumOptions,
    TouchRule,
    brute_enumerate,
    check_basic,
    check_refined,
    enumerate_words,
    lattice_points,
    parse_word,
    warn_if_not_bounding,
)
from rootmult.peterson import PetersonConsistencyError, multiplicity, open_table, save_cache
from rootmult.reference import (
    BoundOrderError,
    OutputFormat,
    TableRow,
    build_rows,
    compare_rows,
    format_csv,
    format_json,
    load_reference,
    read_roots_file,
    symmetry_report,
)


EXIT_INVALID = 2
EXIT_INCONSISTENT = 3

app = typer.Typer(
    name="rootmult",
    help="Root multiplicity bounds for rank-3 hyperbolic Kac-Moody algebras",
    add_completion=False,
)
console = Console()
err_console = Console(stderr=True)


# ============================================================================
# Shared options and helpers
# ============================================================================

def _s_option():
    return typer.Option(None, "--s", help="Edges between nodes 1 and 2", envvar="ROOTMULT_S")


def _t_option():
    return typer.Option(None, "--t", help="Edges between nodes 1 and 3", envvar="ROOTMULT_T")


def _root_option():
    return typer.Option(
        ..., "--root", "-r", help="Root as a,b,c (coefficients of α1, α2, α3)", envvar="ROOTMULT_ROOT"
    )


def _config_option():
    return typer.Option(
        None, "--config", help="Settings file (default: rootmult.yaml searched upward)",
        envvar="ROOTMULT_CONFIG",
    )


def _fail(message: str, code: int = EXIT_INVALID) -> None:
    err_console.print(f"[red]Error:[/red] {message}")
    raise typer.Exit(code)


def _setup(config: Optional[Path], s: Optional[int], t: Optional[int]) -> tuple[Settings, Shape]:
    try:
        settings = get_settings(config)
        sh = Shape(s if s is not None else settings.s, t if t is not None else settings.t)
    except ValueError as e:
        _fail(str(e))
    return settings, sh


def _parse_root(text: str, target: bool = False) -> LatticeVector:
    try:
        root = LatticeVector.parse(text)
    except ValueError as e:
        _fail(str(e))
    if target and (not root.is_nonnegative() or root.a < 1):
        _fail(f"Root {root} must have nonnegative coefficients and a ≥ 1")
    return root


@contextmanager
def _surface_warnings() -> Iterator[None]:
    """Print warnings raised inside the block to stderr."""
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        yield
    for w in caught:
        err_console.print(f"[yellow]Warning:[/yellow] {w.message}")


def _block_text(word: BlockWord) -> str:
    return " ".join(bl.letters for bl in word.blocks)


# ============================================================================
# Commands
# ============================================================================

@app.command()
def bound(
    s: Optional[int] = _s_option(),
    t: Optional[int] = _t_option(),
    root: str = _root_option(),
    list_words: bool = typer.Option(
        False, "--list", "-l", help="Print every word passing the basic conditions", envvar="ROOTMULT_LIST",
    ),
    as_json: bool = typer.Option(False, "--json", help="Emit one JSON object", envvar="ROOTMULT_JSON"),
    verbose: bool = typer.Option(
        False, "--verbose", "-v", help="With --list, also print each drawn path", envvar="ROOTMULT_VERBOSE",
    ),
    refined: Optional[bool] = typer.Option(
        None, "--refined/--no-refined", help="Also count words passing the refined conditions",
        envvar="ROOTMULT_REFINED",
    ),
    touch_rule: Optional[TouchRule] = typer.Option(
        None, "--touch-rule", help="Comparison at diagonal touch points", envvar="ROOTMULT_TOUCH_RULE",
    ),
    workers: Optional[int] = typer.Option(
        None, "--workers", "-w", min=1, help="Worker processes for the search", envvar="ROOTMULT_WORKERS",
    ),
    check: bool = typer.Option(
        False, "--check", help="Cross-check the counts against exhaustive enumeration", envvar="ROOTMULT_CHECK",
    ),
    config: Optional[Path] = _config_option(),
) -> None:
    """
    Count the words bounding the multiplicity of a root.

    Prints the basic count (conditions C1-C6) and the refined count
    (C1-C6 plus R1-R2).
    """
    settings, sh = _setup(config, s, t)
    target = _parse_root(root, target=True)
    use_refined = settings.refined if refined is None else refined
    rule = touch_rule or settings.touch_rule
    n_workers = workers or settings.workers
    emit = EmitMode.LIST_WORDS if list_words else EmitMode.COUNT_ONLY

    with _surface_warnings():
        warn_if_not_bounding(target, sh)

    try:
        basic_result = enumerate_words(target, sh, EnumOptions(False, rule, emit, n_workers))
        refined_result = (
            enumerate_words(target, sh, EnumOptions(True, rule, emit, n_workers))
            if use_refined
            else None
        )
        if check:
            brute_basic = brute_enumerate(target, sh, EnumOptions(False, rule), cap=settings.brute_cap)
            brute_refined = brute_enumerate(target, sh, EnumOptions(True, rule), cap=settings.brute_cap)
    except ValueError as e:
        _fail(str(e))

    if check:
        pruned = (basic_result.count, refined_result.count if refined_result else brute_refined.count)
        if pruned != (brute_basic.count, brute_refined.count):
            _fail(
                f"pruned search gives {pruned}, exhaustive enumeration gives "
                f"{(brute_basic.count, brute_refined.count)}",
                EXIT_INCONSISTENT,
            )

    if as_json:
        data = {
            "shape": {"s": sh.s, "t": sh.t},
            "root": list(target.as_tuple()),
            "basic": basic_result.count,
        }
        if refined_result is not None:
            data["refined"] = refined_result.count
        if list_words:
            data["words"] = [w.text for w in basic_result.words]
            if refined_result is not None:
                data["refined_words"] = [w.text for w in refined_result.words]
        typer.echo(json.dumps(data, indent=2))
        return

    console.print(f"[bold]Root {target}[/bold] for s={sh.s}, t={sh.t} (touch rule: {rule.value})")
    console.print(f"  Basic bound:   [cyan]{basic_result.count}[/cyan]")
    if refined_result is not None:
        console.print(f"  Refined bound: [green]{refined_result.count}[/green]")
    if check:
        console.print("[green]✓[/green] Exhaustive enumeration agrees")

    if not list_words:
        return

    table = Table(title="Words passing the basic conditions")
    table.add_column("Word", style="cyan")
    table.add_column("Blocks", style="dim")
    if refined_result is not None:
        table.add_column("Refined", style="yellow")
    for word in basic_result.words:
        cells = [word.text, _block_text(word)]
        if refined_result is not None:
            report = check_refined(word)
            if report.passed:
                cells.append("[green]✓[/green]")
            else:
                i, j = report.position
                cells.append(f"[red]✗[/red] {report.failed_condition.value} at ({i}, {j})")
        table.add_row(*cells)
    console.print(table)

    if verbose:
        for word in basic_result.words:
            points = " ".join(f"({x},{y})" for x, y in lattice_points(word))
            console.print(f"[cyan]{word.text}[/cyan] {points}")


@app.command("check")
def check_word_command(
    s: Optional[int] = _s_option(),
    t: Optional[int] = _t_option(),
    root: str = _root_option(),
    word: str = typer.Option(..., "--word", help="Letter string over 1, 2, 3", envvar="ROOTMULT_WORD"),
    touch_rule: Optional[TouchRule] = typer.Option(
        None, "--touch-rule", help="Comparison at diagonal touch points", envvar="ROOTMULT_TOUCH_RULE",
    ),
    config: Optional[Path] = _config_option(),
) -> None:
    """
    Check one word against the basic and refined conditions.

    Exits with code 1 when the word fails.
    """
    settings, sh = _setup(config, s, t)
    target = _parse_root(root, target=True)
    rule = touch_rule or settings.touch_rule
    try:
        parsed = parse_word(word, target, sh)
    except ValueError as e:
        _fail(str(e))

    console.print(f"[bold]{parsed.text}[/bold]  blocks: {_block_text(parsed)}")
    report = check_basic(parsed, rule)
    stage = "basic"
    if report.passed:
        report = check_refined(parsed)
        stage = "refined"

    if report.passed:
        console.print("[green]✓[/green] Passes the basic and refined conditions")
        return

    console.print(
        f"[red]✗[/red] Fails {report.failed_condition.value} ({stage}) at {report.position}: {report.detail}"
    )
    raise typer.Exit(1)


@app.command()
def mult(
    s: Optional[int] = _s_option(),
    t: Optional[int] = _t_option(),
    root: str = _root_option(),
    cache: Optional[Path] = typer.Option(
        None, "--cache", help="CSV file to resume from and save the multiplicity table to",
        envvar="ROOTMULT_CACHE",
    ),
    as_json: bool = typer.Option(False, "--json", help="Emit one JSON object", envvar="ROOTMULT_JSON"),
    config: Optional[Path] = _config_option(),
) -> None:
    """
    Compute the exact multiplicity of a root with the Peterson recurrence.
    """
    settings, sh = _setup(config, s, t)
    target = _parse_root(root)
    cache_path = cache or settings.cache

    try:
        table = open_table(sh, cache_path)
        value = multiplicity(target, sh, table)
    except PetersonConsistencyError as e:
        _fail(str(e), EXIT_INCONSISTENT)
    except ValueError as e:
        _fail(str(e))

    if cache_path is not None:
        save_cache(table, cache_path)

    if as_json:
        data = {"shape": {"s": sh.s, "t": sh.t}, "root": list(target.as_tuple()), "mult": value}
        typer.echo(json.dumps(data, indent=2))
        return

    console.print(f"Multiplicity of {target} for s={sh.s}, t={sh.t}: [bold green]{value}[/bold green]")
    if cache_path is not None:
        console.print(f"[dim]Table up to height {table.frontier} saved to {cache_path}[/dim]")


@app.command()
def orbit(
    s: Optional[int] = _s_option(),
    t: Optional[int] = _t_option(),
    root: str = _root_option(),
    word: str = typer.Option(
        "", "--word", help="Comma list of nodes to reflect at, applied left to right", envvar="ROOTMULT_WORD",
    ),
    config: Optional[Path] = _config_option(),
) -> None:
    """
    Walk a vector through simple reflections and classify it.
    """
    _, sh = _setup(config, s, t)
    start = _parse_root(root)
    try:
        nodes = [int(part) for part in word.split(",") if part.strip()]
        trace = orbit_trace(start, nodes, sh)
    except InvalidNodeError as e:
        _fail(str(e))
    except ValueError:
        _fail(f"Word must be a comma list of node indices, got {word!r}")

    table = Table(title=f"Orbit walk (s={sh.s}, t={sh.t})")
    table.add_column("Step", justify="right")
    table.add_column("Reflection", style="dim")
    table.add_column("Vector", style="cyan")
    table.add_row("0", "", str(start))
    for step, (node, vector) in enumerate(zip(nodes, trace[1:]), start=1):
        table.add_row(str(step), f"s{node}", str(vector))
    console.print(table)
    console.print(f"Final: {trace[-1]}")
    console.print(f"Norm (β,β) = {norm(start, sh)}")

    if not start.is_nonnegative() or start.is_zero():
        console.print("[yellow]![/yellow] Not a nonzero nonnegative vector, no classification")
        return

    result = classify(start, sh)
    console.print(f"Class: [bold]{result.tag.value}[/bold]")
    if result.tag == RootTag.IMAGINARY:
        representative = minimal_representative(start, sh).representative
        if is_anti_dominant(start, sh):
            console.print("[green]✓[/green] Minimal (anti-dominant)")
        else:
            path = ",".join(str(i) for i in result.reflection_word)
            console.print(f"Minimal representative {representative} via reflections {path}")


def _select_roots(
    sh: Shape,
    roots_file: Optional[Path],
    max_height: Optional[int],
    minimal_only: bool,
    compare_reference: bool,
    full: bool,
) -> list[LatticeVector]:
    if roots_file is not None and max_height is not None:
        _fail("Use either --roots-file or --max-height, not both")
    if minimal_only and max_height is None:
        _fail("--minimal-only needs --max-height")

    if roots_file is not None:
        if not roots_file.exists():
            _fail(f"Roots file not found: {roots_file}")
        return read_roots_file(roots_file)
    if max_height is not None:
        if minimal_only:
            return scan_minimal_roots(max_height, sh)
        return [
            x
            for h in range(1, max_height + 1)
            for x in vectors_of_height(h)
            if x.a >= 1 and classify(x, sh).tag == RootTag.IMAGINARY
        ]
    if compare_reference:
        return load_reference().roots(sh, full)
    _fail("Select roots with --roots-file, --max-height or --compare-reference")


def _pretty_rows(rows: list[TableRow], sh: Shape) -> Table:
    table = Table(title=f"Root multiplicities and bounds (s={sh.s}, t={sh.t})")
    table.add_column("Root", style="cyan")
    table.add_column("mult", justify="right", style="green")
    table.add_column("refined", justify="right")
    table.add_column("basic", justify="right")
    table.add_column("excess", justify="right", style="yellow")
    for row in rows:
        table.add_row(str(row.root), str(row.mult), str(row.refined), str(row.basic), str(row.excess))
    return table


@app.command("table")
def table_command(
    s: Optional[int] = _s_option(),
    t: Optional[int] = _t_option(),
    roots_file: Optional[Path] = typer.Option(
        None, "--roots-file", help="CSV with columns a,b,c", envvar="ROOTMULT_ROOTS_FILE",
    ),
    max_height: Optional[int] = typer.Option(
        None, "--max-height", min=1, help="Scan imaginary roots up to this height", envvar="ROOTMULT_MAX_HEIGHT",
    ),
    minimal_only: bool = typer.Option(
        False, "--minimal-only", help="With --max-height, keep minimal roots only", envvar="ROOTMULT_MINIMAL_ONLY",
    ),
    output_format: OutputFormat = typer.Option(
        OutputFormat.PRETTY, "--format", "-f", help="Output format", envvar="ROOTMULT_FORMAT",
    ),
    compare_reference: bool = typer.Option(
        False, "--compare-reference", help="Diff against the published tables, exit 3 on mismatch",
        envvar="ROOTMULT_COMPARE_REFERENCE",
    ),
    full: bool = typer.Option(
        False, "--full", help="Include reference rows that take hours to reproduce", envvar="ROOTMULT_FULL",
    ),
    symmetry: bool = typer.Option(
        False, "--symmetry", help="Report (a,k,l)/(a,l,k) pairs for s = t", envvar="ROOTMULT_SYMMETRY",
    ),
    touch_rule: Optional[TouchRule] = typer.Option(
        None, "--touch-rule", help="Comparison at diagonal touch points", envvar="ROOTMULT_TOUCH_RULE",
    ),
    workers: Optional[int] = typer.Option(
        None, "--workers", "-w", min=1, help="Worker processes for the search", envvar="ROOTMULT_WORKERS",
    ),
    cache: Optional[Path] = typer.Option(
        None, "--cache", help="CSV file to resume from and save the multiplicity table to",
        envvar="ROOTMULT_CACHE",
    ),
    config: Optional[Path] = _config_option(),
) -> None:
    """
    Build a table of multiplicities and both bounds for many roots.
    """
    settings, sh = _setup(config, s, t)
    opts = EnumOptions(
        refined=True,
        touch_rule=touch_rule or settings.touch_rule,
        workers=workers or settings.workers,
    )
    cache_path = cache or settings.cache
    report = console if output_format == OutputFormat.PRETTY else err_console

    try:
        roots = _select_roots(sh, roots_file, max_height, minimal_only, compare_reference, full)
    except ValueError as e:
        _fail(str(e))

    reference = load_reference()
    if compare_reference and not full:
        deep = set(reference.deduplicated(sh, full=True)) - set(reference.deduplicated(sh))
        skipped = [x for x in roots if (sh.s, sh.t, *x.as_tuple()) in deep]
        if skipped:
            roots = [x for x in roots if x not in skipped]
            err_console.print(
                f"[yellow]Warning:[/yellow] skipping {len(skipped)} long-running reference row(s); "
                "use --full to include them"
            )

    with _surface_warnings():
        for x in sort_vectors(set(roots)):
            warn_if_not_bounding(x, sh)
            if x.is_nonnegative() and classify(x, sh).tag == RootTag.IMAGINARY and not is_anti_dominant(x, sh):
                representative = minimal_representative(x, sh).representative
                warnings.warn(f"{x} is not minimal; its orbit representative is {representative}")

    try:
        table = open_table(sh, cache_path)
        rows = build_rows(roots, sh, table, opts)
    except (BoundOrderError, PetersonConsistencyError) as e:
        _fail(str(e), EXIT_INCONSISTENT)
    except ValueError as e:
        _fail(str(e))

    if cache_path is not None:
        save_cache(table, cache_path)

    if output_format == OutputFormat.CSV:
        typer.echo(format_csv(rows), nl=False)
    elif output_format == OutputFormat.JSON:
        typer.echo(format_json(rows, sh))
    else:
        console.print(_pretty_rows(rows, sh))
        lo, hi = surd_lower_decimal(sh.window, 4), surd_upper_decimal(sh.window, 4)
        console.print(f"[dim]Imaginary window for a/(sb+tc): ({lo}, {hi})[/dim]")

    if symmetry:
        pairs = symmetry_report(rows)
        if not sh.is_symmetric:
            report.print("[yellow]![/yellow] Symmetry report needs s = t")
        elif pairs:
            sym = Table(title="Diagram symmetry b ↔ c")
            sym.add_column("Pair", style="cyan")
            sym.add_column("mult", justify="right")
            sym.add_column("refined", justify="right")
            sym.add_column("basic", justify="right")
            for pair in pairs:
                first, second = pair.first, pair.second
                sym.add_row(
                    f"{first.root} / {second.root}",
                    f"{first.mult} / {second.mult}",
                    f"{first.refined} / {second.refined}",
                    f"{first.basic} / {second.basic}",
                )
            report.print(sym)
        else:
            report.print("[dim]No (a,k,l)/(a,l,k) pairs among the rows[/dim]")

    if compare_reference:
        mismatches = compare_rows(rows, reference.deduplicated(sh, full=True))
        for m in mismatches:
            diffs = ", ".join(
                f"{name} expected {getattr(m.expected, name)} got {getattr(m.actual, name)}"
                for name in m.fields
            )
            if m.known_erratum:
                err_console.print(
                    f"[yellow]Known erratum:[/yellow] {m.actual.root}: {diffs} (printed value is a misprint)"
                )
            else:
                err_console.print(f"[red]Mismatch:[/red] {m.actual.root}: {diffs}")
        if any(not m.known_erratum for m in mismatches):
            raise typer.Exit(EXIT_INCONSISTENT)
        matched = sum(1 for row in rows if row.key in reference.deduplicated(sh, full=True))
        err_console.print(f"[green]✓[/green] {matched} row(s) match the reference")


if __name__ == "__main__":
    app()
