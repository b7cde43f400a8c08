"""Batch experiment drivers with seeded reproducibility and JSON reports.

Each runner takes an ExperimentConfig and returns a plain-dict report;
identical configs produce byte-identical serialized reports.  The CLI in
``cli`` is a thin shell around these functions.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import asdict, dataclass, field
from random import Random

from . import __version__
from .dist import (
    Fixture,
    Sampler,
    builtin_fixture_catalog,
    sampler_bernoulli,
    sampler_dirac_diagonal,
    sampler_equicorrelated_gaussian,
    sampler_mixture_iid,
    sampler_normal,
    sampler_uniform,
    sampler_urn,
)
from .estimands import (
    Estimand,
    catalog_estimands,
    coordinate_max,
    coordinate_product,
    coordinate_projection,
    coordinate_sum,
    first_coord_threshold,
    set_indicator,
    weighted_sum,
)
from .oracle import compare_conditional, verify_identity_eq1
from .perm import Perm, Point, rank_vector
from .stats import chi_square_sf
from .symcore import sorted_point
from .symmetrize import (
    DEFAULT_MC_DRAWS,
    rao_blackwell_compare,
    symmetrize_exact,
    symmetrize_mc,
)

DEFAULT_SEED = 0
ORACLE_TOL = 1e-12
SEED_ENV_VAR = "EXSUFF_SEED"

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_USAGE = 2


class UsageError(ValueError):
    """Bad flags, unresolvable specs, or malformed input files."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Echoed verbatim into every report for provenance."""

    command: str
    seed: int = DEFAULT_SEED
    n: int = 2
    samples: int = 1
    sampler_spec: str = ""
    estimand_spec: str = ""
    output_path: str = ""
    format: str = "json"

    def __post_init__(self):
        if self.samples < 1:
            raise UsageError("samples must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise UsageError("seed must fit in an unsigned 64-bit integer")
        if self.format not in ("json", "csv"):
            raise UsageError(f"unknown format {self.format!r}")


def derive_stream(master_seed: int, index: int) -> Random:
    """Independent substream for replicate ``index`` of a master seed."""
    digest = hashlib.sha256(f"{master_seed}:{index}".encode()).digest()
    return Random(int.from_bytes(digest[:8], "big"))


# ---------------------------------------------------------------------------
# Spec-string catalogs.


def parse_sampler(spec: str, n: int) -> Sampler:
    """Resolve a sampler spec like ``uniform``, ``equicorr:0.5``, ``urn:1,1,2``."""
    name, _, arg = spec.partition(":")
    try:
        if name == "uniform":
            return sampler_uniform(n)
        if name == "normal":
            return sampler_normal(n)
        if name == "bernoulli":
            return sampler_bernoulli(float(arg), n)
        if name == "equicorr":
            return sampler_equicorrelated_gaussian(n, float(arg))
        if name == "urn":
            values = [float(v) for v in arg.split(",") if v]
            return sampler_urn(values, n)
        if name == "dirac":
            return sampler_dirac_diagonal(float(arg), n)
        if name == "mixnormal":
            w, mu1, mu2 = (float(v) for v in arg.split(","))
            components = [
                (w, lambda rng: rng.gauss(mu1, 1.0)),
                (1.0 - w, lambda rng: rng.gauss(mu2, 1.0)),
            ]
            return sampler_mixture_iid(components, n, name="mixnormal", params=(w, mu1, mu2))
    except UsageError:
        raise
    except ValueError as exc:
        raise UsageError(f"bad sampler spec {spec!r}: {exc}") from exc
    raise UsageError(f"unknown sampler {name!r}")


def parse_estimand(spec: str) -> Estimand:
    """Resolve an estimand spec like ``proj:1``, ``wsum:2,1``, ``thresh:0.5``."""
    name, _, arg = spec.partition(":")
    try:
        if name == "proj":
            k = int(arg) if arg else 1
            if k < 1:
                raise UsageError("proj coordinate is 1-based and must be >= 1")
            return coordinate_projection(k - 1)
        if name == "sum":
            return coordinate_sum()
        if name == "wsum":
            return weighted_sum(float(v) for v in arg.split(","))
        if name == "product":
            return coordinate_product()
        if name == "max":
            return coordinate_max()
        if name == "thresh":
            return first_coord_threshold(float(arg))
        if name == "indicator":
            points = []
            for chunk in arg.split("|"):
                if chunk:
                    points.append(tuple(float(v) for v in chunk.replace(",", " ").split()))
            return set_indicator(points)
    except UsageError:
        raise
    except ValueError as exc:
        raise UsageError(f"bad estimand spec {spec!r}: {exc}") from exc
    raise UsageError(f"unknown estimand {name!r}")


# ---------------------------------------------------------------------------
# Rank-uniformity experiment.


@dataclass(frozen=True)
class RankUniformityReport:
    cell_counts: dict[Perm, int]
    excluded_ties: int
    chi2: float
    df: int
    p_value: float
    samples: int
    degenerate: bool = field(default=False)


def run_rank_uniformity(cfg: ExperimentConfig) -> RankUniformityReport:
    """Chi-square test that the sorting permutation is uniform over n! cells.

    Draws with exactly tied coordinates carry no rank information and are
    excluded from the tally (but counted); for continuous samplers they
    occur with probability zero.
    """
    n = cfg.n
    if not 2 <= n <= 6:
        raise UsageError(f"rank uniformity needs 2 <= n <= 6, got {n}")
    n_cells = math.factorial(n)
    if cfg.samples < 20 * n_cells:
        raise UsageError(
            f"samples={cfg.samples} is under the 20 * n! = {20 * n_cells} minimum"
        )
    sampler = parse_sampler(cfg.sampler_spec, n)
    rng = Random(cfg.seed)
    counts: dict[Perm, int] = {}
    excluded = 0
    draw = sampler.draw
    for _ in range(cfg.samples):
        rv = rank_vector(draw(rng))
        if rv.tie_flag:
            excluded += 1
        else:
            counts[rv.perm] = counts.get(rv.perm, 0) + 1
    kept = cfg.samples - excluded
    df = n_cells - 1
    if kept == 0:
        return RankUniformityReport(
            cell_counts=counts, excluded_ties=excluded, chi2=0.0, df=df,
            p_value=1.0, samples=cfg.samples, degenerate=True,
        )
    expected = kept / n_cells
    from .perm import enumerate_permutations_lex

    chi2 = math.fsum(
        (counts.get(p, 0) - expected) ** 2 / expected
        for p in enumerate_permutations_lex(n)
    )
    return RankUniformityReport(
        cell_counts=counts, excluded_ties=excluded, chi2=chi2, df=df,
        p_value=chi_square_sf(chi2, df), samples=cfg.samples,
    )


# ---------------------------------------------------------------------------
# Conditional-law verification suite.


def run_conditional_verify(cfg: ExperimentConfig, fixtures: list[Fixture] | None = None,
                           tol: float = ORACLE_TOL) -> list[dict]:
    """Exhaustive fiber checks plus averaging-identity checks per fixture.

    Returns one record per (fixture, check) pair.  A record passes when an
    exchangeable fixture stays within tolerance, and when a deliberate
    negative control exceeds it (the suite must be able to see failure).
    """
    if fixtures is None:
        fixtures = builtin_fixture_catalog()
    if not fixtures:
        raise UsageError("empty fixture catalog: refusing to report a vacuous pass")
    records = []
    for fx in fixtures:
        report = compare_conditional(fx.pmf, tol=tol)
        ok = report.passed if fx.exchangeable else not report.passed
        records.append({
            "fixture": fx.name,
            "check": "conditional-law",
            "expected_fail": not fx.exchangeable,
            "max_abs_discrepancy": report.max_abs_discrepancy,
            "cases_checked": report.cases_checked,
            "worst_case": report.worst_case,
            "passed": ok,
        })
        worst = 0.0
        cases = 0
        worst_case = "all identities within tolerance"
        rng = derive_stream(cfg.seed, hash_name(fx.name))
        support = fx.pmf.support()
        for g in catalog_estimands(fx.pmf.dimension, indicator_points=support[:2]):
            for _ in range(5):
                b = [rng.choice(support) for _ in range(rng.randint(1, 3))]
                gap = verify_identity_eq1(fx.pmf, g, b)
                cases += 1
                if gap > worst:
                    worst = gap
                    worst_case = f"estimand {g.spec()} with set {sorted(set(b))}"
        ok = worst <= tol if fx.exchangeable else True
        records.append({
            "fixture": fx.name,
            "check": "averaging-identity",
            "expected_fail": False,
            "max_abs_discrepancy": worst,
            "cases_checked": cases,
            "worst_case": worst_case,
            "passed": ok,
        })
    return records


def hash_name(name: str) -> int:
    return int.from_bytes(hashlib.sha256(name.encode()).digest()[:4], "big")


# ---------------------------------------------------------------------------
# Rao-Blackwell comparison experiment.


def run_rao_blackwell(cfg: ExperimentConfig) -> dict:
    """Raw-vs-symmetrized variance comparison for one sampler/estimand pair."""
    if cfg.samples < 2:
        raise UsageError("rao-blackwell needs samples >= 2")
    sampler = parse_sampler(cfg.sampler_spec, cfg.n)
    g = parse_estimand(cfg.estimand_spec)
    rng = Random(cfg.seed)
    rb = rao_blackwell_compare(sampler.draw, g, cfg.samples, rng)
    out = asdict(rb)
    ratio = rb.variance_ratio
    out["variance_ratio"] = ratio if ratio is not None else "undefined"
    return out


# ---------------------------------------------------------------------------
# Row-wise symmetrization of user data.


def parse_rows(text: str) -> list[tuple[int, list[float] | str]]:
    """Numeric rows, comma or whitespace separated; ``#`` starts a comment.

    Returns (line_number, coords) for good rows and (line_number, message)
    for malformed ones, preserving input order.
    """
    rows: list[tuple[int, list[float] | str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            coords = [float(v) for v in line.replace(",", " ").split()]
        except ValueError as exc:
            rows.append((lineno, f"parse error: {exc}"))
            continue
        if not coords:
            rows.append((lineno, "no numeric fields"))
            continue
        rows.append((lineno, coords))
    return rows


def run_symmetrize(cfg: ExperimentConfig, input_text: str) -> list[dict]:
    """Symmetrize an estimand over each input row.

    Rows up to the exact-enumeration cap get the exact average; longer rows
    fall back to Monte Carlo with ``samples`` draws and a standard error.
    Malformed or dimension-mismatched rows produce error records and a
    nonzero exit, but do not stop the run.
    """
    g = parse_estimand(cfg.estimand_spec)
    rows = parse_rows(input_text)
    if not rows:
        raise UsageError("no input rows")
    records = []
    dimension: int | None = None
    for index, (lineno, parsed) in enumerate(rows):
        if isinstance(parsed, str):
            records.append({"row": lineno, "error": parsed})
            continue
        if dimension is None:
            dimension = len(parsed)
        if len(parsed) != dimension:
            records.append({
                "row": lineno,
                "error": f"dimension {len(parsed)} != first row's {dimension}",
            })
            continue
        y = sorted_point(tuple(parsed))
        if len(y) <= 10:
            records.append({
                "row": lineno, "value": symmetrize_exact(g, y),
                "std_error": 0.0, "exact": True,
            })
        else:
            m = cfg.samples if cfg.samples > 1 else DEFAULT_MC_DRAWS
            est = symmetrize_mc(g, y, m, derive_stream(cfg.seed, index))
            records.append({
                "row": lineno, "value": est.value,
                "std_error": est.std_error, "exact": False, "draws": est.draws,
            })
    return records


# ---------------------------------------------------------------------------
# Report serialization.


def _jsonable(value):
    if isinstance(value, dict):
        return {_key(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _key(k):
    if isinstance(k, tuple):
        return ",".join(str(v) for v in k)
    return str(k)


def build_report(cfg: ExperimentConfig, result) -> dict:
    if hasattr(result, "__dataclass_fields__"):
        result = asdict(result)
    return {
        "tool": "exsuff",
        "version": __version__,
        "config": asdict(cfg),
        "result": _jsonable(result),
    }


def report_to_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def _flatten(prefix: str, value, out: dict) -> None:
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, out)
    elif isinstance(value, list):
        out[prefix] = json.dumps(value, sort_keys=True)
    else:
        out[prefix] = value


def report_to_csv(report: dict) -> str:
    """Flattened one-row (or one-row-per-record) convenience export."""
    result = report["result"]
    base: dict = {}
    _flatten("config", report["config"], base)
    base["version"] = report["version"]
    rows = []
    if isinstance(result, list):
        for record in result:
            row = dict(base)
            _flatten("", record, row)
            rows.append(row)
    else:
        row = dict(base)
        _flatten("", result, row)
        rows.append(row)
    fieldnames = sorted({k for row in rows for k in row})
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fieldnames, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def render_report(cfg: ExperimentConfig, result) -> str:
    report = build_report(cfg, result)
    if cfg.format == "csv":
        return report_to_csv(report)
    return report_to_json(report)
