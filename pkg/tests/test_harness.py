import pytest

from contour_chain.chain import ChainParams
from contour_chain.harness import (
    CLAIMS,
    HOLDS,
    NOT_APPLICABLE,
    SKIPPED,
    VIOLATED,
    GridSpec,
    GridSyntaxError,
    Verdict,
    check_collapse,
    check_cycle_structure,
    check_free_movement_thresholds,
    check_spectrum_claims,
    free_movement_condition,
    run_point,
    run_points,
    run_suite,
    suite_json,
)


def test_grid_parse_default():
    grid = GridSpec.parse("N=2..5,m=1..4,l=1..2m-1")
    pts = grid.points()
    assert pts[0] == (2, 1, 1)
    assert (5, 4, 7) in pts and (2, 1, 2) not in pts
    assert len(pts) == 4 * (1 + 3 + 5 + 7)


@pytest.mark.parametrize(
    "text, expected",
    [
        ("N=3,m=2,l=3", [(3, 2, 3)]),
        ("N=3|5,m=1,l=1", [(3, 1, 1), (5, 1, 1)]),
        ("N=2,m=2,l=m", [(2, 2, 2)]),
        ("N=4,m=2..3,l=m-1..m", [(4, 2, 1), (4, 2, 2), (4, 3, 2), (4, 3, 3)]),
    ],
)
def test_grid_parse(text, expected):
    assert GridSpec.parse(text).points() == expected


@pytest.mark.parametrize("text", ["N=2..", "Q=3", "N=3,N=4", "N=__import__('os')", "N=1.5", "m"])
def test_grid_syntax_errors(text):
    with pytest.raises(GridSyntaxError):
        GridSpec.parse(text)


def test_grid_invalid_params():
    with pytest.raises(ValueError):
        GridSpec.parse("N=1,m=2,l=1").params()


def test_verdict_needs_witness():
    with pytest.raises(ValueError):
        Verdict(VIOLATED)


@pytest.mark.parametrize("args", [(3, 2, 3), (3, 5, 2), (2, 1, 1)])
def test_check_collapse(args):
    assert check_collapse(ChainParams(*args)).status == HOLDS


@pytest.mark.parametrize(
    "args, cond",
    [((3, 4, 1), "strict"), ((3, 5, 2), "none"), ((2, 2, 1), "strict"), ((4, 2, 1), "boundary"), ((3, 3, 1), "boundary")],
)
def test_threshold_condition(args, cond):
    assert free_movement_condition(ChainParams(*args)) == cond


def test_check_thresholds():
    v, finding = check_free_movement_thresholds(ChainParams(3, 4, 1))
    assert v.status == HOLDS and finding is None
    v, finding = check_free_movement_thresholds(ChainParams(2, 2, 1))
    assert v.status == HOLDS
    v, finding = check_free_movement_thresholds(ChainParams(3, 5, 2))
    assert v.status == NOT_APPLICABLE
    v, finding = check_free_movement_thresholds(ChainParams(4, 2, 1))
    assert v.status == NOT_APPLICABLE
    assert finding["finding"] == "threshold-boundary" and finding["all_free"] is True


def test_check_spectrum_claims():
    verdicts, findings = check_spectrum_claims(ChainParams(3, 5, 2))
    assert all(v.status == HOLDS for v in verdicts.values())
    assert verdicts["spectrum-count-bound"].detail == "1 <= 1"

    verdicts, _ = check_spectrum_claims(ChainParams(3, 2, 3))
    assert verdicts["free-movement-existence"].status == HOLDS
    assert verdicts["velocity-lower-bound"].status == NOT_APPLICABLE

    for n in range(3, 9):
        verdicts, _ = check_spectrum_claims(ChainParams(n, 1, 1))
        assert all(v.status == HOLDS for v in verdicts.values()), n


@pytest.mark.parametrize("args", [(3, 5, 2), (3, 1, 1), (3, 4, 1)])
def test_check_cycle_structure(args):
    verdicts, _ = check_cycle_structure(ChainParams(*args))
    assert all(v.status == HOLDS for v in verdicts.values())


def test_six_contour_binary_chain_count_bound():
    reports = run_suite(GridSpec.parse("N=6,m=1,l=1"))
    bound = next(r for r in reports if r.claim == "spectrum-count-bound")
    (params, verdict), = bound.verdicts
    assert params == ChainParams(6, 1, 1)
    assert verdict.status == HOLDS and verdict.detail == "2 <= 2"


def test_empty_grid():
    grid = GridSpec.parse("N=3..2")
    assert grid.points() == []
    assert all(r.verdicts == [] for r in run_suite(grid))


def test_budget_skips_point():
    point = run_point(ChainParams(3, 5, 2), budget=100)
    assert set(point.verdicts) == set(CLAIMS)
    assert all(v.status == SKIPPED for v in point.verdicts.values())


def test_suite_deterministic():
    grid = GridSpec.parse("N=3..4,m=1..2,l=1..2m-1")
    a = suite_json(run_points(grid), grid)
    b = suite_json(run_points(grid), grid)
    assert a == b


def test_run_suite_order_and_coverage():
    grid = GridSpec.parse("N=3,m=1..2,l=1..2m-1")
    reports = run_suite(grid)
    assert [r.claim for r in reports] == list(CLAIMS)
    for r in reports:
        assert [p.as_tuple() for p, _ in r.verdicts] == grid.points()
        assert not r.violated
