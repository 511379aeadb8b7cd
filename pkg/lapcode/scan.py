import logging
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from sympy import isprime
from tqdm import tqdm

from config import Config
from .codes import (
    code_from_simplex, dual_code, is_mds, minimum_distance, prime_dimension_report, self_relation,
    verify_code_duality,
)
from .errors import InvalidGraphError, MatrixError, ParseError
from .exactmat import IntMatrix
from .families import lambda_complete, lambda_odd_cycle
from .graphs import Graph, canonical_form, complete, cycle, enumerate_connected
from .simplex import (
    build_simplex, hstar, is_reflexive_cofactor, is_reflexive_hibi, is_unimodal, lambda_set,
    parallelepiped_points,
)

logger = logging.getLogger(__name__)

CSV_HEADER = (
    "n", "m", "key", "edges", "tau", "volume", "hstar", "reflexive", "unimodal",
    "code_size", "distance", "mds", "self_relation",
)


@dataclass(frozen=True)
class ScanRow:
    n: int
    m: int
    key: str
    edges: str
    tau: int
    volume: int
    hstar: tuple[int, ...]
    reflexive: bool
    unimodal: bool
    code_size: int | None = None
    distance: int | None = None
    mds: str | None = None
    self_relation: str | None = None

    def as_csv_row(self) -> list[str]:
        def cell(value):
            if value is None:
                return ""
            if isinstance(value, bool):
                return "true" if value else "false"
            return str(value)

        return [
            cell(self.n), cell(self.m), self.key, self.edges, cell(self.tau), cell(self.volume),
            " ".join(str(h) for h in self.hstar), cell(self.reflexive), cell(self.unimodal),
            cell(self.code_size), cell(self.distance), cell(self.mds), cell(self.self_relation),
        ]

    def as_dict(self) -> dict:
        return dict(zip(CSV_HEADER, self.as_csv_row()))


@dataclass(frozen=True)
class ScanFilters:
    reflexive: bool = False
    non_unimodal: bool = False
    self_dual: bool = False
    mds: bool = False

    def accepts(self, row: ScanRow) -> bool:
        if self.reflexive and not row.reflexive:
            return False
        if self.non_unimodal and row.unimodal:
            return False
        if self.self_dual and row.self_relation != "self_dual":
            return False
        if self.mds and row.mds != "mds":
            return False
        return True


def parse_range(text: str) -> range:
    """"A..B" (inclusive) or a single "A"."""
    try:
        if ".." in text:
            low, high = (int(part) for part in text.split("..", 1))
        else:
            low = high = int(text)
    except ValueError:
        raise ParseError(f"expected a vertex range like 3..6, got {text!r}")
    if low > high:
        raise ParseError(f"vertex range {text!r} is empty: {low} > {high}")
    return range(low, high + 1)


def analyze_for_scan(g: Graph, fast: bool = False) -> ScanRow:
    s = build_simplex(g)
    h = hstar(s)
    reflexive = bool(is_reflexive_cofactor(s))
    row = dict(
        n=g.n,
        m=g.edge_count,
        key=canonical_form(g).key,
        edges=" ".join(f"{u}-{v}" for u, v in g.edge_list),
        tau=s.tau,
        volume=s.volume,
        hstar=h.coefficients,
        reflexive=reflexive,
        unimodal=is_unimodal(h),
    )
    if reflexive:
        code = code_from_simplex(s)
        row.update(code_size=code.cardinality, self_relation=self_relation(code).value)
        if not fast and code.cardinality <= Config.GUARD_LIMIT:
            distance = minimum_distance(code)
            row.update(distance=distance, mds=is_mds(code, distance).value)
    return ScanRow(**row)


def _fan_out(task: Callable, items: Sequence, workers: int, desc: str) -> list:
    progress = tqdm(total=len(items), desc=desc, disable=not Config.PROGRESS)
    results = []
    if workers <= 1:
        for item in items:
            results.append(task(item))
            progress.update(1)
        progress.close()
        return results
    with ProcessPoolExecutor(max_workers=workers) as executor:
        futures = {executor.submit(task, item): item for item in items}
        for future in as_completed(futures):
            try:
                results.append(future.result())
            except Exception as e:
                logger.error(f"{desc} failed on {futures[future].label}: {e}")
                raise
            progress.update(1)
    progress.close()
    return results


def scan(
    ns: Iterable[int],
    filters: ScanFilters = ScanFilters(),
    workers: int | None = None,
    fast: bool = False,
) -> list[ScanRow]:
    workers = Config.WORKERS if workers is None else workers
    graphs = [g for n in ns for g in enumerate_connected(n)]
    logger.info(f"scanning {len(graphs)} isomorphism classes with {workers} worker(s)")
    task = _scan_fast if fast else analyze_for_scan
    rows = _fan_out(task, graphs, workers, "scan")
    return sorted((r for r in rows if filters.accepts(r)), key=lambda r: (r.n, r.key))


def _scan_fast(g: Graph) -> ScanRow:
    return analyze_for_scan(g, fast=True)


@dataclass
class OracleSummary:
    checked: int = 0
    skipped: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, ok: bool, message: str):
        self.checked += 1
        if not ok:
            self.failures.append(message)
            logger.error(message)

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "checked": self.checked,
            "skipped": self.skipped,
            "failures": self.failures,
        }


def _corrupted(m: IntMatrix) -> IntMatrix:
    entries = list(m.entries)
    entries[m.cols - 1] += 1
    return IntMatrix(m.rows, m.cols, tuple(entries))


def _check_graph(g: Graph, summary: OracleSummary, corrupt: bool):
    label = g.label
    s = build_simplex(g)
    lam = lambda_set(s)

    if s.volume <= Config.oracle_limit():
        lifted = _corrupted(s.lifted_matrix) if corrupt else s.lifted_matrix
        try:
            geometric = parallelepiped_points(lifted)
            summary.record(geometric == lam, f"{label}: Λ differs from the geometric scan")
        except MatrixError as e:
            summary.record(False, f"{label}: geometric scan failed: {e}")
    else:
        summary.skipped += 1

    reflexive = bool(is_reflexive_cofactor(s))
    h = hstar(s)
    summary.record(reflexive == is_reflexive_hibi(h), f"{label}: cofactor and h* reflexivity disagree")

    for i in range(1, g.n):
        summary.record(lambda_set(build_simplex(g, i)) == lam, f"{label}: Λ changes when deleting column {i}")

    if not reflexive:
        return
    n = g.n
    numerators = lam.numerator_set()
    for element in lam:
        mirrored = tuple(n - 1 - x for x in element.numerators)
        summary.record(
            mirrored in numerators and sum(mirrored) // n == n - 1 - element.height,
            f"{label}: height bijection fails at {element.numerators}",
        )
        summary.record(
            element.height + element.inverse().height == len(element.support),
            f"{label}: support identity fails at {element.numerators}",
        )

    code = code_from_simplex(s)
    summary.record(code.contains((1,) * n), f"{label}: all-ones word missing from the code")
    dual = dual_code(code)
    summary.record(code.cardinality * dual.cardinality == n ** n, f"{label}: |C|·|C^⊥| != n^n")
    if n ** (n - 1) // s.tau <= Config.dual_limit():
        summary.record(bool(verify_code_duality(s)), f"{label}: dual simplex and dual code disagree")
    else:
        summary.skipped += 1
    if isprime(n):
        summary.record(prime_dimension_report(s).holds, f"{label}: tau is not p^(k-1)")


def _check_families(n_max: int, summary: OracleSummary):
    for n in range(3, n_max + 1):
        summary.record(
            lambda_complete(n) == lambda_set(build_simplex(complete(n))),
            f"K{n}: closed-form Λ differs from the kernel",
        )
        if n % 2:
            summary.record(
                lambda_odd_cycle(n) == lambda_set(build_simplex(cycle(n))),
                f"C{n}: closed-form Λ differs from the kernel",
            )


def oracle_check(n_max: int, corrupt: bool = False) -> OracleSummary:
    if n_max < 2:
        raise InvalidGraphError(f"oracle check needs n_max >= 2, got {n_max}")
    summary = OracleSummary()
    graphs = [g for n in range(2, n_max + 1) for g in enumerate_connected(n)]
    for g in tqdm(graphs, desc="oracle-check", disable=not Config.PROGRESS):
        _check_graph(g, summary, corrupt)
    _check_families(n_max, summary)
    logger.info(f"oracle check: {summary.checked} checks, {len(summary.failures)} failures")
    return summary
