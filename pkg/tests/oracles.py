"""Independent reference models used only by the tests.

The step oracle works from the physical picture: a cluster is the set of
cells ``x-l+1 .. x`` and a node is the pair of cells it separates. It shares
no code with ``contour_chain.chain``.
"""

from fractions import Fraction
from itertools import product


def cluster_cells(x, m, l):
    return {(x - j) % (2 * m) for j in range(l)}


def straddles(x, a, m, l):
    """True if the cluster covers both cell a and cell a+1."""
    cells = cluster_cells(x, m, l)
    return a in cells and (a + 1) % (2 * m) in cells


def oracle_step(state, m, l):
    n = len(state)
    nxt = list(state)
    for i, x in enumerate(state):
        right, left = state[(i + 1) % n], state[(i - 1) % n]
        stay = False
        if x == 0:
            # right node: cells m, m+1 of contour i+1
            stay = straddles(right, m, m, l)
        elif x == m:
            # left node: cells 0, 1 of contour i-1; a simultaneous arrival
            # (left neighbour also at this node) goes to the left cluster
            stay = straddles(left, 0, m, l) or left == 0
        if not stay:
            nxt[i] = (x + 1) % (2 * m)
    return tuple(nxt)


def oracle_admissible(state, m, l):
    n = len(state)
    return not any(
        straddles(state[i], 0, m, l) and straddles(state[(i + 1) % n], m, m, l)
        for i in range(n)
    )


def oracle_cycle(state, m, l):
    """(transient, period, per-cluster moves over one period) by list search."""
    traj = [tuple(state)]
    while True:
        s = oracle_step(traj[-1], m, l)
        if s in traj:
            t0 = traj.index(s)
            cyc = traj[t0:]
            moves = [0] * len(state)
            for a in cyc:
                b = oracle_step(a, m, l)
                for i in range(len(a)):
                    moves[i] += a[i] != b[i]
            return t0, len(cyc), moves
        traj.append(s)


def oracle_spectrum(n, m, l):
    """velocity -> basin count over all admissible states, by brute force."""
    out = {}
    for s in product(range(2 * m), repeat=n):
        if not oracle_admissible(s, m, l):
            continue
        _, period, moves = oracle_cycle(s, m, l)
        v = Fraction(moves[0], period)
        out[v] = out.get(v, 0) + 1
    return out


def oracle_candidates(n, m, l):
    """Velocities 1 - sum(k)/T over all k-tuples with 0 <= k_i <= l."""
    if l > m:
        return {Fraction(0)}
    total = n * (m + l)
    out = {Fraction(1)}
    for r in range(1, total // (2 * m) + 1):
        for ks in product(range(l + 1), repeat=r):
            if sum(ks) >= 1 and 2 * m * r + sum(ks) == total:
                out.add(1 - Fraction(sum(ks), total))
    return out
