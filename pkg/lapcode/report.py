import json
import logging
import time
from dataclasses import dataclass, field
from decimal import Decimal
from enum import Enum
from fractions import Fraction

import psutil

from config import Config
from .codes import (
    code_from_simplex, dual_code, is_cyclic, is_mds, log_cardinality, minimum_distance, rate,
    self_relation, verify_code_duality, weight_distribution,
)
from .errors import NotReflexiveError, ResourceGuardError
from .graphs import Graph
from .simplex import (
    build_simplex, dual_vertex_matrix, dual_volume, ehrhart_polynomial, hstar,
    hyperplane_check, interior_point_count, is_reflexive_cofactor, is_reflexive_hibi,
    is_unimodal, lattice_point_count,
)

logger = logging.getLogger(__name__)

JSON_SAFE_INTEGER = 2 ** 53


@dataclass(frozen=True)
class AnalysisOptions:
    fast: bool = False
    distance: bool = True
    duality: bool = True
    require_code: bool = False


@dataclass
class AnalysisReport:
    graph: dict
    tau: int
    volume: int
    hstar: list[int]
    reflexive: dict
    unimodal: bool
    lattice: dict = field(default_factory=dict)
    dual: dict | None = None
    code: dict | None = None
    duality: dict | None = None
    low_rate_code: dict | None = None
    timing: dict = field(default_factory=dict)
    version: str = Config.APP_VERSION

    def as_dict(self) -> dict:
        return {
            "graph": self.graph,
            "tau": self.tau,
            "volume": self.volume,
            "hstar": self.hstar,
            "reflexive": self.reflexive,
            "unimodal": self.unimodal,
            "lattice": self.lattice,
            "dual": self.dual,
            "code": self.code,
            "duality": self.duality,
            "low_rate_code": self.low_rate_code,
            "timing": self.timing,
            "version": self.version,
        }


def jsonable(value):
    """Plain JSON types; big integers, fractions and decimals become strings."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return str(value) if abs(value) > JSON_SAFE_INTEGER else value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, Decimal):
        return str(value)
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if hasattr(value, "as_dict"):
        return jsonable(value.as_dict())
    raise TypeError(f"cannot serialise {type(value).__name__}")


def to_json(value) -> str:
    return json.dumps(jsonable(value), sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def _guarded(what: str, compute):
    try:
        return compute()
    except ResourceGuardError as e:
        logger.warning(f"skipping {what}: {e}")
        return {"skipped": str(e)}


def build_report(g: Graph, options: AnalysisOptions = AnalysisOptions()) -> AnalysisReport:
    started = time.perf_counter()
    s = build_simplex(g)
    h = hstar(s)
    certificate = is_reflexive_cofactor(s)
    hibi = is_reflexive_hibi(h)
    if bool(certificate) != hibi:
        logger.error(f"reflexivity criteria disagree on {g.label}: cofactor {bool(certificate)}, hibi {hibi}")
    if options.require_code and not certificate:
        raise NotReflexiveError(f"{g.label} is not reflexive; no code over Z_{g.n} exists")

    report = AnalysisReport(
        graph={
            "n": g.n,
            "m": g.edge_count,
            "construction": g.label,
            "edges": [list(e) for e in g.edge_list],
        },
        tau=s.tau,
        volume=s.volume,
        hstar=list(h.coefficients),
        reflexive={
            "cofactor": bool(certificate),
            "hibi": hibi,
            "offending_cofactor": list(certificate.offending) if certificate.offending else None,
        },
        unimodal=is_unimodal(h),
    )

    if not options.fast:
        report.lattice = {
            "lattice_points": lattice_point_count(h),
            "interior_points": interior_point_count(h),
            "ehrhart_polynomial": ehrhart_polynomial(h),
        }
        if certificate:
            report.dual = {
                "vertex_matrix": dual_vertex_matrix(s).to_rows(),
                "volume": dual_volume(s),
                "hyperplanes_tight": hyperplane_check(s),
            }
            report.code = _code_block(s, options)
            if options.duality:
                report.duality = _guarded("duality check", lambda: verify_code_duality(s).as_dict())
        else:
            report.low_rate_code = {
                "note": "not reflexive: only the Z_(n·tau) code of rate 1/n exists; no code object built",
                "modulus": s.volume,
                "cardinality": s.volume,
                "rate": Fraction(1, s.n),
            }

    report.timing = {
        "seconds": f"{time.perf_counter() - started:.3f}",
        "rss_bytes": psutil.Process().memory_info().rss,
    }
    logger.info(f"analysed {g.label} in {report.timing['seconds']} s")
    return report


def _code_block(s, options: AnalysisOptions) -> dict:
    code = code_from_simplex(s)
    dual = dual_code(code)
    block = {
        "modulus": code.modulus,
        "length": code.length,
        "cardinality": code.cardinality,
        "dual_cardinality": dual.cardinality,
        "dimension": log_cardinality(code),
        "rate": rate(code),
        "cyclic": is_cyclic(code),
        "self_relation": self_relation(code),
    }
    if options.distance:
        distance = _guarded("minimum distance", lambda: minimum_distance(code))
        block["distance"] = distance
        block["mds"] = is_mds(code, distance) if isinstance(distance, int) else None
        block["weight_distribution"] = _guarded("weight distribution", lambda: weight_distribution(code))
    return block
