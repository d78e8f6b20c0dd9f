"""Limit-cycle detection, exact velocities and delay-structure checks."""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, NamedTuple, Sequence, TextIO

from .chain import (
    ChainParams,
    DelayType,
    State,
    delta,
    encode,
    require_admissible,
    step,
)


class BudgetExceededError(RuntimeError):
    """The step budget ran out before the trajectory repeated a state."""


class Regime(enum.Enum):
    FREE_MOVEMENT = "free-movement"
    COLLAPSE = "collapse"
    DELAYED = "delayed"


class Purity(enum.Enum):
    NONE = "none"
    FIRST_ONLY = "first-only"
    SECOND_ONLY = "second-only"
    MIXED = "mixed"


class DelayRecord(NamedTuple):
    """One blocked step of one cluster; ``time`` counts from the cycle entry."""

    time: int
    cluster: int
    type: DelayType
    node: int


@dataclass(frozen=True)
class CycleAnalysis:
    transient_len: int
    period: int
    moves_per_cluster: tuple[int, ...]
    velocity: Fraction
    uniform: bool
    regime: Regime
    delay_log: tuple[DelayRecord, ...]
    delay_type_purity: Purity
    cycle_states: tuple[State, ...] | None = field(default=None, repr=False)

    @property
    def entry_state(self) -> State | None:
        return self.cycle_states[0] if self.cycle_states else None

    def canonical_state(self, params: ChainParams) -> State:
        """The cycle state with the smallest encoding."""
        if not self.cycle_states:
            raise ValueError("cycle states were not retained")
        return min(self.cycle_states, key=lambda s: encode(s, params))


def _brent(x0: State, params: ChainParams, budget: int) -> tuple[int, int]:
    """Constant-memory (transient, period) via Brent's algorithm."""
    used = 0

    def f(s):
        nonlocal used
        used += 1
        if used > 3 * budget:
            raise BudgetExceededError(f"no repetition within budget {budget}")
        return step(s, params).next

    power = lam = 1
    tortoise, hare = x0, f(x0)
    while tortoise != hare:
        if power == lam:
            tortoise = hare
            power *= 2
            lam = 0
        hare = f(hare)
        lam += 1
    if lam > budget:
        raise BudgetExceededError(f"period {lam} exceeds budget {budget}")

    tortoise = hare = x0
    for _ in range(lam):
        hare = f(hare)
    mu = 0
    while tortoise != hare:
        tortoise = f(tortoise)
        hare = f(hare)
        mu += 1
    return mu, lam


def _visited(x0: State, params: ChainParams, budget: int) -> tuple[int, int]:
    seen = {encode(x0, params): 0}
    s = x0
    for t in range(1, budget + 1):
        s = step(s, params).next
        key = encode(s, params)
        first = seen.get(key)
        if first is not None:
            return first, t - first
        seen[key] = t
    raise BudgetExceededError(f"no repetition within budget {budget}")


def find_cycle(
    initial: Sequence[int],
    params: ChainParams,
    budget: int | None = None,
    *,
    mode: str = "visited",
    keep_states: bool = True,
) -> CycleAnalysis:
    """Follow ``initial`` into its limit cycle and analyse one period.

    ``mode="visited"`` indexes every state seen (exact transient, memory
    proportional to transient + period); ``mode="brent"`` uses constant
    memory. Both report the minimal period. ``budget`` bounds the number of
    distinct states explored and defaults to the state-space size, which
    always suffices.
    """
    x0 = require_admissible(initial, params)
    if budget is None:
        budget = params.n_states
    if mode == "visited":
        transient, period = _visited(x0, params, budget)
    elif mode == "brent":
        transient, period = _brent(x0, params, budget)
    else:
        raise ValueError(f"unknown cycle-detection mode {mode!r}")

    s = x0
    for _ in range(transient):
        s = step(s, params).next

    n = params.n_contours
    moves = [0] * n
    log = []
    states = []
    for t in range(period):
        states.append(s)
        res = step(s, params)
        for i, ok in enumerate(res.moved):
            moves[i] += ok
        log.extend(DelayRecord(t, d.cluster, d.type, d.node) for d in res.delays)
        s = res.next

    return CycleAnalysis(
        transient_len=transient,
        period=period,
        moves_per_cluster=tuple(moves),
        velocity=Fraction(moves[0], period),
        uniform=len(set(moves)) == 1,
        regime=_classify(moves, period),
        delay_log=tuple(log),
        delay_type_purity=_purity(log),
        cycle_states=tuple(states) if keep_states else None,
    )


def _classify(moves: Sequence[int], period: int) -> Regime:
    if all(k == 0 for k in moves):
        return Regime.COLLAPSE
    if all(k == period for k in moves):
        return Regime.FREE_MOVEMENT
    return Regime.DELAYED


def _purity(log: Sequence[DelayRecord]) -> Purity:
    kinds = {r.type for r in log}
    if not kinds:
        return Purity.NONE
    if len(kinds) == 2:
        return Purity.MIXED
    return Purity.FIRST_ONLY if DelayType.FIRST in kinds else Purity.SECOND_ONLY


class Velocities(NamedTuple):
    values: tuple[Fraction, ...]
    uniform: bool


def velocities(analysis: CycleAnalysis) -> Velocities:
    """Per-cluster exact velocities over the cycle, with a uniformity flag."""
    values = tuple(Fraction(k, analysis.period) for k in analysis.moves_per_cluster)
    return Velocities(values, len(set(values)) == 1)


class DelayEpisode(NamedTuple):
    """A maximal run of consecutive blocked steps of one cluster."""

    start: int
    cluster: int
    type: DelayType
    duration: int
    end: int  # first cycle time at which the cluster moves again


def delay_episodes(analysis: CycleAnalysis, n_contours: int) -> list[DelayEpisode]:
    """Group the delay log into episodes, wrapping around the cycle."""
    period = analysis.period
    table: list[list[DelayType | None]] = [[None] * n_contours for _ in range(period)]
    for rec in analysis.delay_log:
        table[rec.time][rec.cluster] = rec.type
    out = []
    for i in range(n_contours):
        column = [row[i] for row in table]
        if all(column):
            continue  # never moves: no episode boundaries
        for t in range(period):
            kind = column[t]
            if kind is None or column[t - 1] is not None:
                continue
            d = 0
            while column[(t + d) % period] is not None:
                d += 1
            out.append(DelayEpisode(t, i, kind, d, (t + d) % period))
    out.sort(key=lambda e: (e.start, e.cluster))
    return out


@dataclass
class DelayStructureReport:
    purity: Purity
    episodes: int = 0
    # (cycle time, cluster, type, observed gap, expected gap) at delay ends
    gap_violations: list[tuple] = field(default_factory=list)
    # (start time, cluster, type) whose chained successor delay is missing
    chain_violations: list[tuple] = field(default_factory=list)
    # durations of consecutive delays along a chain; informational only
    chained_durations: list[tuple[int, int]] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return (
            self.purity is not Purity.MIXED
            and not self.gap_violations
            and not self.chain_violations
        )

    @property
    def nonincreasing_pairs(self) -> int:
        return sum(1 for up, down in self.chained_durations if up >= down)


def verify_delay_structure(
    analysis: CycleAnalysis, params: ChainParams
) -> DelayStructureReport:
    """Check gap values at delay ends and the chain timing of delay starts.

    First-type delays propagate rightwards: a delay of cluster i starting at
    t is followed by one of cluster i+1 starting at t + m + l. Second-type
    delays propagate leftwards, from cluster i+1 to cluster i. Gaps are
    compared modulo 2m, so m + l reads as 0 when l = m.
    """
    if analysis.cycle_states is None:
        raise ValueError("verify_delay_structure needs cycle_states")
    report = DelayStructureReport(analysis.delay_type_purity)
    if analysis.regime is not Regime.DELAYED:
        return report

    n, m, l = params.as_tuple()
    cells, period = params.cells, analysis.period
    episodes = delay_episodes(analysis, n)
    report.episodes = len(episodes)
    starts = {(e.start, e.cluster, e.type): e.duration for e in episodes}

    for e in episodes:
        state = analysis.cycle_states[e.end]
        if e.type is DelayType.FIRST:
            observed, expected = delta(state, e.cluster - 1, params), (m - l) % cells
            nxt = (e.cluster + 1) % n
        else:
            observed, expected = delta(state, e.cluster, params), (m + l) % cells
            nxt = (e.cluster - 1) % n
        if observed != expected:
            report.gap_violations.append((e.end, e.cluster, e.type, observed, expected))
        follower = starts.get(((e.start + m + l) % period, nxt, e.type))
        if follower is None:
            report.chain_violations.append((e.start, e.cluster, e.type))
        else:
            report.chained_durations.append((e.duration, follower))
    return report


def trace(
    initial: Sequence[int], params: ChainParams, steps: int
) -> Iterator[tuple[int, State, tuple[bool, ...], tuple]]:
    """Yield ``(t, state, moved, delays)`` for t = 0 .. steps.

    The row for the final time carries the state only; moved/delays are
    those decided at time t.
    """
    s = require_admissible(initial, params)
    for t in range(steps):
        res = step(s, params)
        yield t, s, res.moved, res.delays
        s = res.next
    yield steps, s, (), ()


def write_trace(
    initial: Sequence[int], params: ChainParams, steps: int, fp: TextIO
) -> None:
    """Write a CSV trace: ``t,positions,moved,delays``.

    positions and moved are ';'-joined per cluster (moved as 1/0); delays
    are ';'-joined ``cluster:type:node`` triples.
    """
    writer = csv.writer(fp, lineterminator="\n")
    writer.writerow(["t", "positions", "moved", "delays"])
    for t, s, moved, delays in trace(initial, params, steps):
        writer.writerow(
            [
                t,
                ";".join(map(str, s)),
                ";".join("1" if k else "0" for k in moved),
                ";".join(f"{d.cluster}:{d.type.value}:{d.node}" for d in delays),
            ]
        )
