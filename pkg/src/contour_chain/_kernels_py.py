"""Pure-Python kernels for exhaustive state-space sweeps.

Both functions work on the little-endian mixed-radix encoding of states
(base 2m). The compiled ``_kernels`` extension implements the same contract.
"""

import numpy as np


def successor_table(n, m, l):
    """Tabulate the one-step map over all (2m)**n encoded states.

    Returns ``(succ, moves, admissible)``: the successor index of every
    state, the number of clusters that move, and the admissibility flag.
    Successors of inadmissible states are computed by the same rule but
    carry no meaning.
    """
    cells = 2 * m
    size = cells**n
    place = [cells**i for i in range(n)]
    succ = [0] * size
    moves = [0] * size
    adm = [0] * size
    for code in range(size):
        x = []
        rest = code
        for _ in range(n):
            rest, d = divmod(rest, cells)
            x.append(d)
        left_occ = [1 <= (xi - m) % cells <= l - 1 for xi in x]

        ok = 1
        for i in range(n):
            if 1 <= x[i] <= l - 1 and left_occ[(i + 1) % n]:
                ok = 0
                break
        adm[code] = ok

        nxt = code
        moved = 0
        for i in range(n):
            xi = x[i]
            if xi == 0 and left_occ[(i + 1) % n]:
                continue
            if xi == m and x[i - 1] <= l - 1:
                continue
            moved += 1
            nxt += -xi * place[i] if xi == cells - 1 else place[i]
        succ[code] = nxt
        moves[code] = moved
    return (
        np.asarray(succ, dtype=np.int64),
        np.asarray(moves, dtype=np.int8),
        np.asarray(adm, dtype=np.uint8),
    )


def label_cycles(succ, admissible):
    """Resolve the functional graph restricted to admissible starts.

    Returns ``(rep, transient)``. ``rep[s]`` is the smallest encoded state on
    the limit cycle reached from ``s`` and ``transient[s]`` the number of
    steps before the cycle is entered; both are -1 where ``s`` is
    inadmissible and unreached.
    """
    succ = [int(v) for v in succ]
    adm = [bool(v) for v in admissible]
    size = len(succ)
    rep = [-1] * size
    trans = [-1] * size
    colour = [0] * size  # 0 unvisited, 1 on current path, 2 resolved

    for start in range(size):
        if not adm[start] or colour[start]:
            continue
        path = []
        cur = start
        while colour[cur] == 0:
            colour[cur] = 1
            path.append(cur)
            cur = succ[cur]
        if colour[cur] == 1:
            j = path.index(cur)
            cycle = path[j:]
            lo = min(cycle)
            for s in cycle:
                rep[s] = lo
                trans[s] = 0
                colour[s] = 2
            del path[j:]
        for s in reversed(path):
            nxt = succ[s]
            rep[s] = rep[nxt]
            trans[s] = trans[nxt] + 1
            colour[s] = 2
    return np.asarray(rep, dtype=np.int64), np.asarray(trans, dtype=np.int64)
