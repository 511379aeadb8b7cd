import csv
import functools
import io
import logging
import sys

import click

from config import Config
from .dsl import parse_construct, read_edge_file
from .errors import LapcodeError, NotReflexiveError, OracleMismatchError, ParseError
from .families import (
    FAMILIES, asymptotic_report, complete_dual_equivalence, rate_family_scan, tau_wstar_eigen,
    whisker_hstar, wstar_mds_matrices,
)
from .report import AnalysisOptions, build_report, jsonable, to_json
from .scan import CSV_HEADER, ScanFilters, oracle_check, parse_range, scan
from .simplex import build_simplex, hstar

logger = logging.getLogger(__name__)


def handle_errors(command):
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except LapcodeError as e:
            logger.error(str(e))
            sys.exit(e.exit_code)
    return wrapper


def _int_list(text: str) -> list[int]:
    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise ParseError(f"expected a comma-separated list of integers, got {text!r}")


def _csv_cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return value


def _emit_table(rows: list[dict], as_json: bool):
    if as_json:
        click.echo(to_json(rows), nl=False)
        return
    if not rows:
        return
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    header = list(rows[0])
    writer.writerow(header)
    for row in rows:
        values = jsonable(row)
        writer.writerow([_csv_cell(values[k]) for k in header])
    click.echo(buffer.getvalue(), nl=False)


@click.group()
@click.option("--log-level", default=None, help="Override LOG_LEVEL for this run.")
@click.version_option(version=Config.APP_VERSION, prog_name="lapcode")
def cli(log_level):
    """Laplacian simplices of graphs and their codes over Z_n."""
    if log_level:
        logging.getLogger().setLevel(getattr(logging, log_level.upper(), logging.WARNING))


@cli.command()
@click.option("--graph", "graph_file", type=click.Path(exists=True, dir_okay=False), help="Edge-list file.")
@click.option("--construct", "expression", help='Construction expression, e.g. "B(C3,T:P6)".')
@click.option("--json", "output", flag_value="json", default=True, help="JSON report (default).")
@click.option("--csv", "output", flag_value="csv", help="One CSV row of the headline figures.")
@click.option("--fast", is_flag=True, help="Only tau, h* and reflexivity.")
@click.option("--no-distance", is_flag=True, help="Skip minimum distance and weight distribution.")
@click.option("--no-duality", is_flag=True, help="Skip the geometric duality check.")
@click.option("--require-code", is_flag=True, help="Fail with exit code 4 if no code exists.")
@handle_errors
def analyze(graph_file, expression, output, fast, no_distance, no_duality, require_code):
    """Report on one graph."""
    if bool(graph_file) == bool(expression):
        raise ParseError("give exactly one of --graph or --construct")
    g = read_edge_file(graph_file) if graph_file else parse_construct(expression)
    options = AnalysisOptions(
        fast=fast, distance=not no_distance, duality=not no_duality, require_code=require_code
    )
    report = build_report(g, options)
    if output == "json":
        click.echo(to_json(report), nl=False)
        return
    code = report.code or {}
    _emit_table([{
        "n": report.graph["n"],
        "m": report.graph["m"],
        "construction": report.graph["construction"],
        "tau": report.tau,
        "volume": report.volume,
        "hstar": " ".join(str(h) for h in report.hstar),
        "reflexive": report.reflexive["cofactor"],
        "unimodal": report.unimodal,
        "code_size": code.get("cardinality") if report.reflexive["cofactor"] else None,
        "distance": code.get("distance") if isinstance(code.get("distance"), int) else None,
        "mds": code.get("mds"),
    }], as_json=False)


@cli.command("scan")
@click.option("--n", "n_range", required=True, help="Vertex range A..B (at most 7).")
@click.option("--reflexive", is_flag=True)
@click.option("--non-unimodal", is_flag=True)
@click.option("--self-dual", is_flag=True)
@click.option("--mds", is_flag=True)
@click.option("--fast", is_flag=True, help="Skip minimum distances.")
@click.option("--workers", type=int, default=None, help="Worker processes (default LAPCODE_WORKERS).")
@handle_errors
def scan_command(n_range, reflexive, non_unimodal, self_dual, mds, fast, workers):
    """One CSV row per isomorphism class of connected graphs."""
    filters = ScanFilters(reflexive=reflexive, non_unimodal=non_unimodal, self_dual=self_dual, mds=mds)
    rows = scan(parse_range(n_range), filters, workers=workers, fast=fast)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    writer.writerows(row.as_csv_row() for row in rows)
    click.echo(buffer.getvalue(), nl=False)


@cli.command("oracle-check")
@click.option("--n-max", type=int, default=5, show_default=True)
@click.option("--inject-corruption", is_flag=True, hidden=True)
@handle_errors
def oracle_check_command(n_max, inject_corruption):
    """Cross-check the kernel pipeline against independent computations."""
    summary = oracle_check(n_max, corrupt=inject_corruption)
    click.echo(to_json(summary), nl=False)
    if not summary.passed:
        raise OracleMismatchError(f"{len(summary.failures)} of {summary.checked} checks failed")


@cli.group()
def family():
    """Tables for the closed-form families."""


@family.command("rate")
@click.option("--a", "a", type=int, required=True)
@click.option("--b", "b", type=int, required=True)
@click.option("--n", "ns", default="3,5,7", show_default=True, help="Odd vertex counts.")
@click.option("--json", "as_json", is_flag=True)
@handle_errors
def family_rate(a, b, ns, as_json):
    """B(C_n x (b-a), K_n x a): cardinality formula and rate."""
    rows = rate_family_scan(a, b, _int_list(ns))
    _emit_table([row.as_dict() for row in rows], as_json)
    if not all(row.reflexive for row in rows):
        raise NotReflexiveError(f"rate family ({a},{b}) has non-reflexive members")
    if not all(row.formula_holds for row in rows):
        raise OracleMismatchError(f"rate family ({a},{b}): |C| differs from b·n^(a(n-3)+b+1)")


@family.command("asymptotic")
@click.argument("name", type=click.Choice(FAMILIES))
@click.option("--range", "indices", default=None, help="Comma-separated indices.")
@click.option("--json", "as_json", is_flag=True)
@handle_errors
def family_asymptotic(name, indices, as_json):
    """Rate and relative distance along a family."""
    rows = asymptotic_report(name, _int_list(indices) if indices else None)
    _emit_table([row.as_dict() for row in rows], as_json)


@family.command("whisker-hstar")
@click.argument("expression")
@click.option("--k", "k", type=int, default=1, show_default=True)
@click.option("--json", "as_json", is_flag=True)
@handle_errors
def family_whisker_hstar(expression, k, as_json):
    """h* of W_k(G) from h* of G, next to the direct computation."""
    g = parse_construct(expression)
    predicted = whisker_hstar(hstar(build_simplex(g)), k)
    direct = hstar(build_simplex(parse_construct(f"W{k}({expression})")))
    _emit_table([{
        "graph": g.label,
        "k": k,
        "predicted": " ".join(map(str, predicted.coefficients)),
        "direct": " ".join(map(str, direct.coefficients)),
        "agree": predicted == direct,
    }], as_json)


@family.command("wstar-mds")
@click.option("--n", "n", type=int, required=True, help="n with 2n+1 prime.")
@handle_errors
def family_wstar_mds(n):
    """Generator and parity-check matrices of C(P_{W*(K_n)})."""
    generator, parity = wstar_mds_matrices(n)
    click.echo(to_json({"modulus": 2 * n + 1, "generator": generator.to_rows(), "parity_check": parity.to_rows()}), nl=False)


@family.command("complete-dual")
@click.option("--n", "n", type=int, required=True)
@handle_errors
def family_complete_dual(n):
    """Dual vertices of P_{K_n} mapped onto the star tree."""
    equivalence = complete_dual_equivalence(n)
    click.echo(to_json({
        "n": n,
        "transform": equivalence.transform.to_rows(),
        "dual": equivalence.dual.to_rows(),
        "image": equivalence.image.to_rows(),
        "star_tree": equivalence.star_tree.to_rows(),
        "holds": equivalence.holds,
    }), nl=False)


@family.command("tau-wstar")
@click.option("--n", "ns", default="3,4,5,6", show_default=True)
@click.option("--k", "k", type=int, default=1, show_default=True)
@click.option("--json", "as_json", is_flag=True)
@handle_errors
def family_tau_wstar(ns, k, as_json):
    """Spanning trees of W*_k(K_n): determinant route against ((k+1)n+1)^(n-1)."""
    rows = []
    for n in _int_list(ns):
        value = tau_wstar_eigen(n, k)
        rows.append({"n": n, "k": k, "tau": value, "formula": ((k + 1) * n + 1) ** (n - 1)})
    _emit_table(rows, as_json)
