"""Exit criteria. Exact arithmetic throughout: every tolerance is equality.

A one-line PASS/FAIL summary per criterion is printed at the end of the
pytest run (see conftest.py).
"""

from fractions import Fraction

import pytest

from contour_chain.chain import ChainParams, step
from contour_chain.cli import main
from contour_chain.harness import HOLDS, NOT_APPLICABLE, SKIPPED, GridSpec, free_movement_condition, run_points
from contour_chain.orbit import Purity, Regime, find_cycle, velocities
from contour_chain.spectrum import empirical_spectrum, enumerate_cycles
from oracles import oracle_spectrum

F = Fraction
GRID = "N=2..5,m=1..4,l=1..2m-1"
BUDGET = 10**6

# Published leader sequences of the worked example, in the coordinates where
# the waiting cell is m-1; adding 1 mod 2m maps them onto ours.
PUBLISHED = [
    [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 0, 1, 2, 3, 4, 4, 5, 6, 7, 8, 9],
    [4, 4, 5, 6, 7, 8, 9, 0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 0, 1, 2, 3],
    [7, 8, 9, 0, 1, 2, 3, 4, 4, 5, 6, 7, 8, 9, 0, 1, 2, 3, 4, 5, 6],
]


@pytest.fixture(scope="module")
def grid_points():
    grid = GridSpec.parse(GRID, budget=BUDGET)
    points = run_points(grid)
    assert len(points) == 64
    assert all(v.status != SKIPPED for p in points for v in p.verdicts.values())
    return points


def _claim_statuses(points, claim):
    return {p.params.as_tuple(): p.verdicts[claim].status for p in points}


def test_criterion_1_example_one_reproduction():
    params = ChainParams(3, 5, 2)
    a = find_cycle((1, 5, 8), params)
    assert a.transient_len == 0
    assert a.period == 21
    v = velocities(a)
    assert v.uniform and v.values == (F(20, 21),) * 3
    assert a.delay_type_purity is Purity.FIRST_ONLY

    expected = [[(x + 1) % 10 for x in seq] for seq in PUBLISHED]
    s = (1, 5, 8)
    got = [[], [], []]
    for _ in range(21):
        for i in range(3):
            got[i].append(s[i])
        s = step(s, params).next
    assert got == expected
    assert s == (1, 5, 8)


def test_criterion_2_mirrored_cycle():
    a = find_cycle((8, 5, 1), ChainParams(3, 5, 2))
    assert velocities(a).uniform
    assert a.velocity == F(20, 21)
    assert a.delay_type_purity is Purity.SECOND_ONLY


def test_criterion_3_example_one_spectrum():
    report = empirical_spectrum(ChainParams(3, 5, 2))
    assert report.exploration.mode == "exhaustive"
    assert set(report.velocities) == {F(1), F(20, 21)}


@pytest.mark.parametrize("n", range(3, 9))
def test_criterion_4_binary_chain(n):
    expected = {1 - F(k, n) for k in range(n // 3 + 1)}
    report = empirical_spectrum(ChainParams(n, 1, 1))
    assert set(report.velocities) == expected
    # independent brute-force route
    assert set(oracle_spectrum(n, 1, 1)) == expected


def test_criterion_5_collapse_dichotomy(grid_points):
    assert set(_claim_statuses(grid_points, "collapse-dichotomy").values()) == {HOLDS}
    for p in grid_points:
        n, m, l = p.params.as_tuple()
        cycles = enumerate_cycles(p.params, BUDGET).cycles
        regimes = {c.regime(p.params) for c in cycles}
        if l > m:
            assert regimes == {Regime.COLLAPSE}
            assert all(c.period == 1 for c in cycles)
        else:
            assert Regime.COLLAPSE not in regimes


@pytest.mark.parametrize(
    "claim",
    [
        "delay-type-purity",
        "first-delay-end-gap",
        "second-delay-end-gap",
        "delay-chain-timing",
        "velocity-uniformity",
        "period-divides-accounting",
    ],
)
def test_criterion_6_cycle_structure(grid_points, claim):
    assert set(_claim_statuses(grid_points, claim).values()) == {HOLDS}


@pytest.mark.parametrize(
    "claim",
    ["velocity-lower-bound", "spectrum-count-bound", "candidate-soundness", "decomposition-sufficiency"],
)
def test_criterion_7_spectrum_bounds(grid_points, claim):
    for params, status in _claim_statuses(grid_points, claim).items():
        n, m, l = params
        if l <= m or claim == "candidate-soundness":
            assert status == HOLDS, params
        else:
            assert status == NOT_APPLICABLE, params


def test_criterion_8_free_movement_thresholds(grid_points):
    strict = boundary = 0
    for p in grid_points:
        cond = free_movement_condition(p.params)
        verdict = p.verdicts["free-movement-threshold"]
        if cond == "strict":
            strict += 1
            assert verdict.status == HOLDS, p.params
            report = empirical_spectrum(p.params)
            assert report.velocities == [F(1)]
        elif cond == "boundary":
            boundary += 1
            assert verdict.status == NOT_APPLICABLE
            assert any(f["finding"] == "threshold-boundary" for f in p.findings)
    assert strict > 0 and boundary > 0


def _cli_bytes(capsys, argv):
    assert main(argv) == 0
    return capsys.readouterr().out.encode()


@pytest.mark.parametrize(
    "argv",
    [
        ["spectrum", "-N", "3", "-m", "5", "-l", "2", "--format", "json"],
        ["spectrum", "-N", "4", "-m", "6", "-l", "5", "--sample", "5000", "--seed", "42"],
        ["verify", "--grid", GRID, "--budget", str(BUDGET)],
    ],
    ids=["spectrum", "spectrum-sampled", "verify"],
)
def test_criterion_9_determinism(capsys, argv):
    first = _cli_bytes(capsys, argv)
    second = _cli_bytes(capsys, argv)
    assert first == second and len(first) > 0
