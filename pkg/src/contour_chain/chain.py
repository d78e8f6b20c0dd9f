"""State space and single-step dynamics of the closed chain of contours.

Contour ``i`` has ``2m`` cells numbered in the direction of motion. The node
shared by contours ``i`` and ``i+1`` (node index ``i``) sits between cells
0 and 1 of contour ``i`` and between cells ``m`` and ``m+1`` of contour
``i+1``. A state is the tuple of leading-particle cells, one per contour.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple, Sequence

State = tuple[int, ...]


class InadmissibleStateError(ValueError):
    """Raised when a state places two clusters on one node."""


@dataclass(frozen=True)
class ChainParams:
    """The triple (N, m, l): contours, half the cells per contour, cluster length."""

    n_contours: int
    half_cells: int
    cluster_len: int

    def __post_init__(self):
        for name in ("n_contours", "half_cells", "cluster_len"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise TypeError(f"{name} must be an int, got {value!r}")
        if self.n_contours < 2:
            raise ValueError(f"N >= 2 required (got N={self.n_contours})")
        if self.half_cells < 1:
            raise ValueError(f"m >= 1 required (got m={self.half_cells})")
        if not 1 <= self.cluster_len <= 2 * self.half_cells - 1:
            raise ValueError(
                f"1 <= l <= 2m-1 required (got l={self.cluster_len}, m={self.half_cells})"
            )

    @property
    def cells(self) -> int:
        return 2 * self.half_cells

    @property
    def n_states(self) -> int:
        """Size of the full (admissible or not) state space, (2m)**N."""
        return self.cells**self.n_contours

    @property
    def accounting_period(self) -> int:
        """N(m+l): the period every delayed cycle's minimal period divides."""
        return self.n_contours * (self.half_cells + self.cluster_len)

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.n_contours, self.half_cells, self.cluster_len)

    def __str__(self):
        return f"(N={self.n_contours}, m={self.half_cells}, l={self.cluster_len})"


class DelayType(enum.Enum):
    FIRST = "first"  # waiting at cell m behind the left neighbour
    SECOND = "second"  # waiting at cell 0 while the right neighbour occupies the node


class Delay(NamedTuple):
    cluster: int
    type: DelayType
    node: int


class StepResult(NamedTuple):
    next: State
    moved: tuple[bool, ...]
    delays: tuple[Delay, ...]


def check_state(state: Sequence[int], params: ChainParams) -> State:
    """Return ``state`` as a tuple, raising ValueError if it is malformed."""
    state = tuple(state)
    if len(state) != params.n_contours:
        raise ValueError(
            f"state has {len(state)} entries, expected N={params.n_contours}"
        )
    for i, x in enumerate(state):
        if isinstance(x, bool) or not isinstance(x, int):
            raise ValueError(f"state entry {i} is not an int: {x!r}")
        if not 0 <= x < params.cells:
            raise ValueError(f"state entry {i}={x} outside [0, {params.cells})")
    return state


def occupies_right_node(x: int, params: ChainParams) -> bool:
    """True if a cluster whose leader is in cell ``x`` straddles its right node."""
    return 1 <= x <= params.cluster_len - 1


def occupies_left_node(x: int, params: ChainParams) -> bool:
    """True if a cluster whose leader is in cell ``x`` straddles its left node.

    The occupied cells are m+1 .. m+l-1 taken modulo 2m, which wraps past
    cell 0 when l > m.
    """
    m, l = params.half_cells, params.cluster_len
    return 1 <= (x - m) % params.cells <= l - 1


def is_admissible(state: Sequence[int], params: ChainParams) -> bool:
    state = check_state(state, params)
    n = len(state)
    return not any(
        occupies_right_node(state[i], params)
        and occupies_left_node(state[(i + 1) % n], params)
        for i in range(n)
    )


def require_admissible(state: Sequence[int], params: ChainParams) -> State:
    state = check_state(state, params)
    if not is_admissible(state, params):
        raise InadmissibleStateError(f"state {state} is not admissible for {params}")
    return state


def blocked(state: Sequence[int], i: int, params: ChainParams) -> DelayType | None:
    """Delay type suffered by cluster ``i`` at this step, or None if it moves.

    A cluster at cell m yields when its left neighbour sits in 0..l-1: cell 0
    is a lost simultaneous arrival (left priority), 1..l-1 is occupancy.
    """
    n = len(state)
    x = state[i]
    if x == 0 and occupies_left_node(state[(i + 1) % n], params):
        return DelayType.SECOND
    if x == params.half_cells and 0 <= state[(i - 1) % n] <= params.cluster_len - 1:
        return DelayType.FIRST
    return None


def delay_node(i: int, kind: DelayType, n_contours: int) -> int:
    """Index of the node at which cluster ``i`` waits for a delay of ``kind``."""
    return i if kind is DelayType.SECOND else (i - 1) % n_contours


def step(state: Sequence[int], params: ChainParams) -> StepResult:
    """Synchronous update: every decision reads the time-t state only."""
    state = tuple(state)
    n, cells = len(state), params.cells
    nxt = []
    moved = []
    delays = []
    for i, x in enumerate(state):
        kind = blocked(state, i, params)
        if kind is None:
            nxt.append((x + 1) % cells)
            moved.append(True)
        else:
            nxt.append(x)
            moved.append(False)
            delays.append(Delay(i, kind, delay_node(i, kind, n)))
    return StepResult(tuple(nxt), tuple(moved), tuple(delays))


def delta(state: Sequence[int], i: int, params: ChainParams) -> int:
    """Gap x[i+1] - x[i] modulo 2m (cluster index modulo N)."""
    n = len(state)
    return (state[(i + 1) % n] - state[i % n]) % params.cells


def encode(state: Sequence[int], params: ChainParams) -> int:
    """Little-endian mixed-radix index of ``state`` with base 2m."""
    state = check_state(state, params)
    code = 0
    for x in reversed(state):
        code = code * params.cells + x
    return code


def decode(index: int, params: ChainParams) -> State:
    if not 0 <= index < params.n_states:
        raise ValueError(f"index {index} outside [0, {params.n_states})")
    out = []
    for _ in range(params.n_contours):
        index, x = divmod(index, params.cells)
        out.append(x)
    return tuple(out)
