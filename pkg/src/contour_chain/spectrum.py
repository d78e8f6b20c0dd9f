"""Velocity spectra: theoretical candidates, enumeration, cycle construction."""

from __future__ import annotations

import csv
import io
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from . import kernels
from .chain import (
    ChainParams,
    DelayType,
    State,
    decode,
    encode,
    is_admissible,
    require_admissible,
)
from .orbit import BudgetExceededError, CycleAnalysis, Purity, Regime, find_cycle

SCHEMA_VERSION = 1
DEFAULT_BUDGET = 10**6
SAMPLER = "python-random-mt19937"


class InfeasibleDecompositionError(ValueError):
    def __init__(self, message, residual=0):
        super().__init__(message)
        self.residual = residual


class ConstructionError(RuntimeError):
    """A constructed state did not reproduce the requested cycle."""

    def __init__(self, message, state):
        super().__init__(message)
        self.state = state


def fraction_str(v: Fraction) -> str:
    return f"{v.numerator}/{v.denominator}"


def parse_fraction(text: str) -> Fraction:
    num, _, den = text.partition("/")
    return Fraction(int(num), int(den or 1))


# -- candidate velocities ---------------------------------------------------


def candidate_velocities(params: ChainParams) -> list[Fraction]:
    """Velocities permitted by the turn/delay balance, in descending order.

    With l > m only 0 is possible. Otherwise 1 together with every
    2mr / (N(m+l)) whose total delay N(m+l) - 2mr lies in [1, r*l].
    """
    n, m, l = params.as_tuple()
    if l > m:
        return [Fraction(0)]
    total = params.accounting_period
    out = {Fraction(1)}
    for r in range(1, total // (2 * m) + 1):
        slack = total - 2 * m * r
        if 1 <= slack <= r * l:
            out.add(Fraction(2 * m * r, total))
    return sorted(out, reverse=True)


# -- delay decompositions and cycle construction ----------------------------


@dataclass(frozen=True)
class DelayDecomposition:
    """Per-turn delay durations ``k`` over one accounting period N(m+l)."""

    k: tuple[int, ...]
    type: DelayType = DelayType.FIRST

    @property
    def r(self) -> int:
        return len(self.k)

    def residual(self, params: ChainParams) -> int:
        """Delay left unassigned: N(m+l) - 2mr - sum(k)."""
        return params.accounting_period - 2 * params.half_cells * self.r - sum(self.k)

    def max_delay(self, params: ChainParams) -> int:
        l = params.cluster_len
        return l if self.type is DelayType.FIRST else l - 1

    def validate(self, params: ChainParams) -> None:
        if self.r < 1:
            raise InfeasibleDecompositionError("at least one turn is required")
        hi = self.max_delay(params)
        bad = [k for k in self.k if not 0 <= k <= hi]
        if bad:
            raise InfeasibleDecompositionError(
                f"{self.type.value}-type delays must lie in [0, {hi}]; got {bad}"
            )
        residual = self.residual(params)
        if residual:
            raise InfeasibleDecompositionError(
                f"2m*r + sum(k) = {params.accounting_period - residual} but "
                f"N(m+l) = {params.accounting_period}: residual {residual} unassigned",
                residual,
            )

    @property
    def total_delay(self) -> int:
        return sum(self.k)


def feasible_decompositions(
    params: ChainParams, kind: DelayType = DelayType.FIRST
) -> Iterator[DelayDecomposition]:
    """Every ordered decomposition satisfying the balance and the delay caps."""
    m, l = params.half_cells, params.cluster_len
    hi = l if kind is DelayType.FIRST else l - 1
    total = params.accounting_period

    def compositions(amount, parts):
        if parts == 0:
            if amount == 0:
                yield ()
            return
        for k in range(min(hi, amount) + 1):
            if amount - k <= (parts - 1) * hi:
                for rest in compositions(amount - k, parts - 1):
                    yield (k,) + rest

    for r in range(1, total // (2 * m) + 1):
        slack = total - 2 * m * r
        if 0 <= slack <= r * hi:
            for ks in compositions(slack, r):
                yield DelayDecomposition(ks, kind)


def _leader_schedule(params: ChainParams, ks: Sequence[int], wait: int) -> list[int]:
    """Cell of one leader over N(m+l) steps; turn i waits k_i extra steps at ``wait``."""
    cells = params.cells
    out = []
    for k in ks:
        x = 1
        for _ in range(cells):
            out.extend([x] * (k + 1 if x == wait else 1))
            x = (x + 1) % cells
    return out


def construct_cycle_state(
    params: ChainParams, decomposition: DelayDecomposition
) -> State:
    """Build a state on a cycle realising ``decomposition``.

    Cluster j replays cluster 0's schedule delayed by j(m+l) steps; the
    leader waits at cell m for first-type delays. For second-type delays
    the leader waits at cell 0 and the assembled state is mirrored. The result is simulated and checked for
    period dividing N(m+l), velocity 1 - sum(k)/(N(m+l)) and delay type.
    """
    if params.cluster_len > params.half_cells:
        raise InfeasibleDecompositionError("cycles with motion need l <= m")
    decomposition.validate(params)

    total = params.accounting_period
    shift = params.half_cells + params.cluster_len
    first = decomposition.type is DelayType.FIRST
    sched = _leader_schedule(params, decomposition.k, params.half_cells if first else 0)
    assert len(sched) == total
    state = tuple(sched[(-j * shift) % total] for j in range(params.n_contours))
    if not first:
        state = state[::-1]  # the unmirrored tuple need not be admissible

    if not is_admissible(state, params):
        raise ConstructionError(f"constructed state {state} is not admissible", state)
    analysis = find_cycle(state, params, keep_states=False)
    expected_v = 1 - Fraction(decomposition.total_delay, total)
    if decomposition.total_delay == 0:
        expected_purity = Purity.NONE
    elif decomposition.type is DelayType.FIRST:
        expected_purity = Purity.FIRST_ONLY
    else:
        expected_purity = Purity.SECOND_ONLY
    problems = []
    if analysis.transient_len != 0:
        problems.append(f"transient {analysis.transient_len}")
    if total % analysis.period:
        problems.append(f"period {analysis.period} does not divide {total}")
    if not analysis.uniform or analysis.velocity != expected_v:
        problems.append(f"velocity {analysis.moves_per_cluster}/{analysis.period}")
    if analysis.delay_type_purity is not expected_purity:
        problems.append(f"delay types {analysis.delay_type_purity.value}")
    if problems:
        raise ConstructionError(
            f"state {state} does not realise {decomposition}: " + ", ".join(problems),
            state,
        )
    return state


def mirror_state(state: Sequence[int], params: ChainParams) -> State:
    """Reverse the contour order of an admissible state."""
    return tuple(reversed(require_admissible(state, params)))


# -- enumeration ------------------------------------------------------------


@dataclass(frozen=True)
class CycleSummary:
    """A limit cycle found by the sweep, keyed by its smallest encoding."""

    rep_code: int
    period: int
    total_moves: int  # summed over clusters and one period
    basin_count: int  # admissible states whose orbit ends here

    def representative(self, params: ChainParams) -> State:
        return decode(self.rep_code, params)

    def regime(self, params: ChainParams) -> Regime:
        if self.total_moves == 0:
            return Regime.COLLAPSE
        if self.total_moves == params.n_contours * self.period:
            return Regime.FREE_MOVEMENT
        return Regime.DELAYED

    def analyse(self, params: ChainParams, keep_states: bool = True) -> CycleAnalysis:
        return find_cycle(self.representative(params), params, keep_states=keep_states)


@dataclass(frozen=True)
class Enumeration:
    params: ChainParams
    states_examined: int
    admissible_count: int
    cycles: tuple[CycleSummary, ...]


def enumerate_cycles(params: ChainParams, budget: int = DEFAULT_BUDGET) -> Enumeration:
    """Map every admissible state to its limit cycle using the sweep kernels."""
    size = params.n_states
    if size > budget:
        raise BudgetExceededError(
            f"{params} has {size} states, above the budget {budget}; use sampling"
        )
    succ, moves, adm = kernels.successor_table(*params.as_tuple())
    rep, trans = kernels.label_cycles(succ, adm)
    mask = adm.astype(bool)
    reps, inverse, counts = np.unique(rep[mask], return_inverse=True, return_counts=True)

    slot = np.full(size, -1, dtype=np.int64)
    slot[np.flatnonzero(mask)] = inverse
    on_cycle = mask & (trans == 0)
    periods = np.bincount(slot[on_cycle], minlength=len(reps))
    totals = np.bincount(
        slot[on_cycle], weights=moves[on_cycle].astype(np.float64), minlength=len(reps)
    )
    cycles = tuple(
        CycleSummary(int(r), int(p), int(round(t)), int(c))
        for r, p, t, c in zip(reps, periods, totals, counts)
    )
    return Enumeration(params, size, int(mask.sum()), cycles)


# -- spectrum reports -------------------------------------------------------


@dataclass(frozen=True)
class Exploration:
    mode: str  # "exhaustive" or "sampled"
    budget_or_count: int
    seed: int | None = None

    def to_dict(self):
        out = {"mode": self.mode, "budget_or_count": self.budget_or_count, "seed": self.seed}
        if self.mode == "sampled":
            out["generator"] = SAMPLER
        return out


@dataclass(frozen=True)
class SpectrumEntry:
    velocity: Fraction
    basin_count: int
    representative: State
    period: int
    regime: Regime
    delay_type_purity: Purity

    def to_dict(self):
        return {
            "velocity": fraction_str(self.velocity),
            "basin_count": self.basin_count,
            "representative": list(self.representative),
            "period": self.period,
            "regime": self.regime.value,
            "delay_type": self.delay_type_purity.value,
        }


@dataclass
class SpectrumReport:
    params: ChainParams
    exploration: Exploration
    states_examined: int
    admissible_count: int
    entries: list[SpectrumEntry]
    candidates: list[Fraction]
    # analyses of the delayed cycles met, keyed by canonical encoding
    cycles: dict[int, CycleAnalysis] = field(default_factory=dict, repr=False)

    @property
    def velocities(self) -> list[Fraction]:
        return [e.velocity for e in self.entries]

    def to_dict(self):
        n, m, l = self.params.as_tuple()
        return {
            "schema_version": SCHEMA_VERSION,
            "params": {"contours": n, "half_cells": m, "cluster_len": l},
            "exploration": self.exploration.to_dict(),
            "states_examined": self.states_examined,
            "admissible_count": self.admissible_count,
            "spectrum": [e.to_dict() for e in self.entries],
            "candidates": [fraction_str(v) for v in self.candidates],
        }

    def to_json(self, extra: dict | None = None) -> str:
        doc = self.to_dict()
        if extra:
            doc.update(extra)
        return json.dumps(doc, indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["N", "m", "l", "velocity", "basin_count", "period", "regime"])
        n, m, l = self.params.as_tuple()
        for e in self.entries:
            writer.writerow(
                [n, m, l, fraction_str(e.velocity), e.basin_count, e.period, e.regime.value]
            )
        return buf.getvalue()


def _aggregate(params, tallies, analyse):
    """Merge per-cycle tallies (canonical code -> (basin count, velocity))."""
    by_velocity: dict[Fraction, list] = {}
    for code in sorted(tallies):
        count, v = tallies[code]
        slot = by_velocity.setdefault(v, [0, code])
        slot[0] += count
    entries = []
    for v in sorted(by_velocity, reverse=True):
        count, code = by_velocity[v]
        analysis = analyse(code)
        entries.append(
            SpectrumEntry(
                v,
                count,
                decode(code, params),
                analysis.period,
                analysis.regime,
                analysis.delay_type_purity,
            )
        )
    return entries


def empirical_spectrum(
    params: ChainParams,
    *,
    budget: int = DEFAULT_BUDGET,
    sample: int | None = None,
    seed: int = 0,
) -> SpectrumReport:
    """Aggregate limit-cycle velocities over admissible initial states.

    Exhaustive by default. With ``sample`` set, draws that many admissible
    states uniformly (rejection of inadmissible draws) from
    ``random.Random(seed)``. Distinct cycles of equal velocity are merged;
    each entry keeps the cycle with the smallest canonical encoding.
    """
    if sample is None:
        return _exhaustive(params, budget)
    return _sampled(params, sample, seed)


def _exhaustive(params, budget):
    enum = enumerate_cycles(params, budget)
    tallies = {}
    analyses = {}
    for c in enum.cycles:
        regime = c.regime(params)
        if regime is Regime.DELAYED:
            analysis = c.analyse(params)
            analyses[c.rep_code] = analysis
            v = analysis.velocity
        else:
            # every cluster moves at every step, or none ever does
            v = Fraction(1) if regime is Regime.FREE_MOVEMENT else Fraction(0)
        tallies[c.rep_code] = (c.basin_count, v)

    def analyse(code):
        return analyses.get(code) or find_cycle(decode(code, params), params)

    return SpectrumReport(
        params,
        Exploration("exhaustive", budget),
        enum.states_examined,
        enum.admissible_count,
        _aggregate(params, tallies, analyse),
        candidate_velocities(params),
        analyses,
    )


def _sampled(params, count, seed):
    if count <= 0:
        raise ValueError("sample count must be positive")
    rng = random.Random(seed)
    n, cells = params.n_contours, params.cells
    max_draws = 1000 * count
    draws = 0
    tallies: dict[int, list] = {}
    analyses: dict[int, CycleAnalysis] = {}
    got = 0
    while got < count:
        if draws >= max_draws:
            raise RuntimeError(
                f"only {got} admissible states in {draws} draws for {params}"
            )
        draws += 1
        state = tuple(rng.randrange(cells) for _ in range(n))
        if not is_admissible(state, params):
            continue
        got += 1
        analysis = find_cycle(state, params)
        code = encode(analysis.canonical_state(params), params)
        if code not in tallies:
            tallies[code] = [0, analysis.velocity]
            analyses[code] = find_cycle(decode(code, params), params)
        tallies[code][0] += 1
    return SpectrumReport(
        params,
        Exploration("sampled", count, seed),
        draws,
        count,
        _aggregate(params, {k: tuple(v) for k, v in tallies.items()}, analyses.__getitem__),
        candidate_velocities(params),
        {k: a for k, a in analyses.items() if a.regime is Regime.DELAYED},
    )
