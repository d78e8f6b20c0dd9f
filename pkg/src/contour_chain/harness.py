"""Brute-force verification of the structural claims over parameter grids.

Each claim is checked by exhaustive enumeration at every grid point whose
state space fits the budget. A violated verdict always carries a witness
initial state that reproduces the violation under ``find_cycle``.

Claim identifiers:

    collapse-dichotomy         l <= m: no collapse anywhere; l > m: collapse from everywhere
    free-movement-existence    velocity 1 is realised iff l <= m
    free-movement-threshold    N odd and N*l < m, or N even and N*l < 2m: always free
    velocity-uniformity        every cluster has the same velocity on a cycle
    delay-type-purity          a delayed cycle has delays of a single type
    first-delay-end-gap        gap m-l at the end of every first-type delay
    second-delay-end-gap       gap m+l (mod 2m) at the end of every second-type delay
    delay-chain-timing         chained delay starts are m+l steps apart
    period-divides-accounting  delayed minimal period divides N(m+l)
    velocity-lower-bound       delayed velocity in [2/3, 1), above 2/3 when l < m
    spectrum-count-bound       at most floor(N/3) sub-unit velocities
    candidate-soundness        every sub-unit velocity is a balance candidate
    decomposition-sufficiency  every feasible first-type decomposition is realised

Report-only findings: ``threshold-boundary``, ``chained-duration-order`` and
``second-type-realizability``.
"""

from __future__ import annotations

import ast
import functools
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .chain import ChainParams, DelayType, State
from .orbit import BudgetExceededError, Purity, velocities, verify_delay_structure
from .spectrum import (
    DEFAULT_BUDGET,
    SCHEMA_VERSION,
    ConstructionError,
    SpectrumReport,
    candidate_velocities,
    construct_cycle_state,
    empirical_spectrum,
    feasible_decompositions,
    fraction_str,
)

CLAIMS = (
    "collapse-dichotomy",
    "free-movement-existence",
    "free-movement-threshold",
    "velocity-uniformity",
    "delay-type-purity",
    "first-delay-end-gap",
    "second-delay-end-gap",
    "delay-chain-timing",
    "period-divides-accounting",
    "velocity-lower-bound",
    "spectrum-count-bound",
    "candidate-soundness",
    "decomposition-sufficiency",
)

HOLDS = "holds"
VIOLATED = "violated"
SKIPPED = "skipped"
NOT_APPLICABLE = "not-applicable"


@dataclass(frozen=True)
class Verdict:
    status: str
    witness: State | None = None
    detail: str = ""

    def __post_init__(self):
        if self.status == VIOLATED and self.witness is None:
            raise ValueError("a violated verdict needs a witness state")

    def to_dict(self):
        out = {"verdict": self.status}
        if self.witness is not None:
            out["witness"] = list(self.witness)
        if self.detail:
            out["detail"] = self.detail
        return out


def _holds(detail=""):
    return Verdict(HOLDS, detail=detail)


def _violated(witness, detail):
    return Verdict(VIOLATED, tuple(witness), detail)


def _na(detail):
    return Verdict(NOT_APPLICABLE, detail=detail)


@dataclass
class PointReport:
    params: ChainParams
    verdicts: dict[str, Verdict] = field(default_factory=dict)
    findings: list[dict] = field(default_factory=list)

    @property
    def violated(self) -> list[str]:
        return [c for c, v in self.verdicts.items() if v.status == VIOLATED]

    def to_dict(self):
        n, m, l = self.params.as_tuple()
        return {
            "params": {"contours": n, "half_cells": m, "cluster_len": l},
            "claims": [{"claim": c, **self.verdicts[c].to_dict()} for c in CLAIMS if c in self.verdicts],
            "findings": self.findings,
        }


@dataclass
class ClaimReport:
    claim: str
    verdicts: list[tuple[ChainParams, Verdict]]

    @property
    def violated(self) -> bool:
        return any(v.status == VIOLATED for _, v in self.verdicts)


# -- grids ------------------------------------------------------------------


class GridSyntaxError(ValueError):
    pass


_ALLOWED_NODES = (
    ast.Expression, ast.BinOp, ast.UnaryOp, ast.Constant, ast.Name, ast.Load,
    ast.Add, ast.Sub, ast.Mult, ast.FloorDiv, ast.USub, ast.UAdd,
)


def _eval_bound(text: str, env: dict[str, int]) -> int:
    # "2m-1" -> "2*m-1"
    src = re.sub(r"(\d)\s*([A-Za-z(])", r"\1*\2", text.strip())
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise GridSyntaxError(f"bad bound expression {text!r}") from exc
    for node in ast.walk(tree):
        if not isinstance(node, _ALLOWED_NODES):
            raise GridSyntaxError(f"unsupported syntax in {text!r}")
        if isinstance(node, ast.Constant) and not isinstance(node.value, int):
            raise GridSyntaxError(f"non-integer constant in {text!r}")
        if isinstance(node, ast.Name) and node.id not in env:
            raise GridSyntaxError(f"unknown name {node.id!r} in {text!r}")
    return eval(compile(tree, "<grid>", "eval"), {"__builtins__": {}}, dict(env))


def _range_values(text: str, env: dict[str, int]) -> list[int]:
    values = []
    for part in text.split("|"):
        lo, sep, hi = part.partition("..")
        if sep:
            values.extend(range(_eval_bound(lo, env), _eval_bound(hi, env) + 1))
        else:
            values.append(_eval_bound(lo, env))
    return values


@dataclass(frozen=True)
class GridSpec:
    """Ranges for N, m, l; l bounds may refer to N and m, e.g. ``1..2m-1``."""

    n_range: str = "2..5"
    m_range: str = "1..4"
    l_range: str = "1..2m-1"
    budget: int = DEFAULT_BUDGET

    @classmethod
    def parse(cls, text: str, budget: int = DEFAULT_BUDGET) -> "GridSpec":
        """Parse ``N=2..5,m=1..4,l=1..2m-1``; omitted variables take defaults."""
        fields = {}
        names = {"N": "n_range", "m": "m_range", "l": "l_range"}
        text = text.strip()
        if text:
            for item in text.split(","):
                name, sep, rng = item.partition("=")
                name = name.strip()
                if not sep or name not in names or not rng.strip():
                    raise GridSyntaxError(f"bad grid item {item!r}")
                if names[name] in fields:
                    raise GridSyntaxError(f"{name} given twice")
                fields[names[name]] = rng.strip()
        grid = cls(**fields, budget=budget)
        grid.points()  # surface syntax errors early
        return grid

    def points(self) -> list[tuple[int, int, int]]:
        """Raw (N, m, l) triples in canonical order; not yet validated."""
        out = []
        for n in _range_values(self.n_range, {}):
            for m in _range_values(self.m_range, {"N": n}):
                for l in _range_values(self.l_range, {"N": n, "m": m}):
                    out.append((n, m, l))
        return sorted(set(out))

    def params(self) -> list[ChainParams]:
        return [ChainParams(*p) for p in self.points()]

    def to_dict(self):
        return {"N": self.n_range, "m": self.m_range, "l": self.l_range, "budget": self.budget}


# -- per-point checks -------------------------------------------------------


@functools.lru_cache(maxsize=4)
def _spectrum(params: ChainParams, budget: int) -> SpectrumReport:
    return empirical_spectrum(params, budget=budget)


def _sub_unit(report: SpectrumReport) -> list[Fraction]:
    return [v for v in report.velocities if 0 < v < 1]


def _entry_state(report: SpectrumReport, v: Fraction) -> State:
    return next(e.representative for e in report.entries if e.velocity == v)


def _zero_state(params):
    return (0,) * params.n_contours


def check_collapse(params: ChainParams, budget: int = DEFAULT_BUDGET) -> Verdict:
    report = _spectrum(params, budget)
    if params.cluster_len <= params.half_cells:
        if Fraction(0) in report.velocities:
            return _violated(_entry_state(report, Fraction(0)), "collapse cycle with l <= m")
        return _holds("no collapse cycle")
    moving = [v for v in report.velocities if v != 0]
    if moving:
        return _violated(_entry_state(report, moving[0]), "non-collapse cycle with l > m")
    return _holds(f"all {report.admissible_count} admissible states collapse")


def free_movement_condition(params: ChainParams) -> str:
    """'strict', 'boundary' or 'none' for the free-movement threshold."""
    n, m, l = params.as_tuple()
    bound = m if n % 2 else 2 * m
    if n * l < bound:
        return "strict"
    if n * l == bound:
        return "boundary"
    return "none"


def check_free_movement_thresholds(
    params: ChainParams, budget: int = DEFAULT_BUDGET
) -> tuple[Verdict, dict | None]:
    """Verdict for strict threshold points; a finding for boundary points."""
    cond = free_movement_condition(params)
    if cond == "none":
        return _na("threshold condition not met"), None
    report = _spectrum(params, budget)
    all_free = report.velocities == [Fraction(1)]
    if cond == "boundary":
        finding = {
            "finding": "threshold-boundary",
            "all_free": all_free,
            "spectrum": [fraction_str(v) for v in report.velocities],
        }
        return _na("boundary equality: recorded as finding"), finding
    if not all_free:
        slow = next(v for v in report.velocities if v != 1)
        return _violated(_entry_state(report, slow), f"velocity {fraction_str(slow)} below threshold")
    return _holds("free movement from every admissible state"), None


def check_spectrum_claims(
    params: ChainParams, budget: int = DEFAULT_BUDGET
) -> tuple[dict[str, Verdict], list[dict]]:
    n, m, l = params.as_tuple()
    report = _spectrum(params, budget)
    out: dict[str, Verdict] = {}
    findings: list[dict] = []

    has_free = Fraction(1) in report.velocities
    if (l <= m) == has_free:
        out["free-movement-existence"] = _holds()
    elif l <= m:
        out["free-movement-existence"] = _violated(_zero_state(params), "no velocity-1 cycle")
    else:
        out["free-movement-existence"] = _violated(
            _entry_state(report, Fraction(1)), "velocity-1 cycle with l > m"
        )

    if l > m:
        for claim in ("velocity-lower-bound", "spectrum-count-bound", "decomposition-sufficiency"):
            out[claim] = _na("requires l <= m")
    else:
        lo = Fraction(2, 3)
        bad = [
            v for v in _sub_unit(report)
            if v < lo or (l < m and v == lo)
        ]
        out["velocity-lower-bound"] = (
            _violated(_entry_state(report, bad[0]), f"velocity {fraction_str(bad[0])}")
            if bad else _holds()
        )
        sub = _sub_unit(report)
        out["spectrum-count-bound"] = (
            _violated(_entry_state(report, sub[-1]), f"{len(sub)} sub-unit values > {n // 3}")
            if len(sub) > n // 3 else _holds(f"{len(sub)} <= {n // 3}")
        )
        out["decomposition-sufficiency"], realised = _check_constructions(params, DelayType.FIRST)
        if l >= 2:
            _, realised2 = _check_constructions(params, DelayType.SECOND)
            findings.append({"finding": "second-type-realizability", **realised2})

    candidates = set(candidate_velocities(params))
    stray = [v for v in _sub_unit(report) if v not in candidates]
    out["candidate-soundness"] = (
        _violated(_entry_state(report, stray[0]), f"velocity {fraction_str(stray[0])} not a candidate")
        if stray else _holds()
    )
    return out, findings


def _check_constructions(params, kind):
    total = realised = 0
    failure = None
    for dec in feasible_decompositions(params, kind):
        if dec.total_delay == 0:
            continue  # free movement, covered elsewhere
        total += 1
        try:
            construct_cycle_state(params, dec)
        except ConstructionError as exc:
            if failure is None:
                failure = (dec, exc)
        else:
            realised += 1
    summary = {"type": kind.value, "decompositions": total, "realised": realised}
    if failure is None:
        return _holds(f"{realised}/{total} decompositions realised"), summary
    dec, exc = failure
    return _violated(exc.state, f"k={list(dec.k)}: {exc}"), summary


def check_cycle_structure(
    params: ChainParams, budget: int = DEFAULT_BUDGET
) -> tuple[dict[str, Verdict], list[dict]]:
    report = _spectrum(params, budget)
    total = params.accounting_period
    failures: dict[str, tuple[State, str]] = {}

    def fail(claim, state, detail):
        failures.setdefault(claim, (state, detail))

    pairs = nonincreasing = 0
    for code in sorted(report.cycles):
        analysis = report.cycles[code]
        state = analysis.canonical_state(params)
        if not velocities(analysis).uniform:
            fail("velocity-uniformity", state, f"moves {analysis.moves_per_cluster}")
        if total % analysis.period:
            fail("period-divides-accounting", state, f"period {analysis.period} vs N(m+l)={total}")
        s = verify_delay_structure(analysis, params)
        if s.purity is Purity.MIXED:
            fail("delay-type-purity", state, "mixed delay types")
        for t, i, kind, got, want in s.gap_violations:
            claim = "first-delay-end-gap" if kind is DelayType.FIRST else "second-delay-end-gap"
            fail(claim, state, f"cluster {i} at cycle time {t}: gap {got}, expected {want}")
        if s.chain_violations:
            t, i, kind = s.chain_violations[0]
            fail("delay-chain-timing", state, f"{kind.value}-type delay of cluster {i} at {t} has no successor")
        pairs += len(s.chained_durations)
        nonincreasing += s.nonincreasing_pairs

    n_cycles = len(report.cycles)
    out = {}
    for claim in (
        "velocity-uniformity",
        "delay-type-purity",
        "first-delay-end-gap",
        "second-delay-end-gap",
        "delay-chain-timing",
        "period-divides-accounting",
    ):
        if claim in failures:
            out[claim] = _violated(*failures[claim])
        else:
            out[claim] = _holds(f"{n_cycles} delayed cycles")
    findings = []
    if pairs:
        findings.append(
            {"finding": "chained-duration-order", "pairs": pairs, "nonincreasing": nonincreasing}
        )
    return out, findings


def run_point(params: ChainParams, budget: int = DEFAULT_BUDGET) -> PointReport:
    point = PointReport(params)
    if params.n_states > budget:
        reason = f"(2m)^N = {params.n_states} exceeds budget {budget}"
        point.verdicts = {c: Verdict(SKIPPED, detail=reason) for c in CLAIMS}
        return point
    try:
        point.verdicts["collapse-dichotomy"] = check_collapse(params, budget)
        verdict, finding = check_free_movement_thresholds(params, budget)
        point.verdicts["free-movement-threshold"] = verdict
        if finding:
            point.findings.append(finding)
        for check in (check_spectrum_claims, check_cycle_structure):
            verdicts, findings = check(params, budget)
            point.verdicts.update(verdicts)
            point.findings.extend(findings)
    except BudgetExceededError as exc:
        point.verdicts = {c: Verdict(SKIPPED, detail=str(exc)) for c in CLAIMS}
    finally:
        _spectrum.cache_clear()
    point.verdicts = {c: point.verdicts[c] for c in CLAIMS if c in point.verdicts}
    return point


def run_points(
    grid: GridSpec, progress: Callable[[ChainParams], None] | None = None
) -> list[PointReport]:
    out = []
    for params in grid.params():
        if progress:
            progress(params)
        out.append(run_point(params, grid.budget))
    return out


def claim_reports(points: Iterable[PointReport]) -> list[ClaimReport]:
    points = list(points)
    return [
        ClaimReport(c, [(p.params, p.verdicts[c]) for p in points if c in p.verdicts])
        for c in CLAIMS
    ]


def run_suite(grid: GridSpec) -> list[ClaimReport]:
    """Run every check at every grid point; one report per claim, grid order."""
    return claim_reports(run_points(grid))


def suite_document(points: list[PointReport], grid: GridSpec, config: dict | None = None) -> dict:
    counts = {HOLDS: 0, VIOLATED: 0, SKIPPED: 0, NOT_APPLICABLE: 0}
    for p in points:
        for v in p.verdicts.values():
            counts[v.status] += 1
    doc = {"schema_version": SCHEMA_VERSION}
    if config is not None:
        doc["config"] = config
    doc.update(
        {
            "grid": grid.to_dict(),
            "points": [p.to_dict() for p in points],
            "summary": {**counts, "all_hold": counts[VIOLATED] == 0},
        }
    )
    return doc


def suite_json(points, grid, config=None) -> str:
    return json.dumps(suite_document(points, grid, config), indent=2) + "\n"
