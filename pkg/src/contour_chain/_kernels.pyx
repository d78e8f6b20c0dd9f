# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for exhaustive state-space sweeps.

Mirrors ``_kernels_py`` exactly; see that module for the contract.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef cnp.int64_t i64


def successor_table(int n, int m, int l):
    cdef int cells = 2 * m
    cdef i64 size = 1
    cdef int i
    for i in range(n):
        size *= cells

    succ_arr = np.empty(size, dtype=np.int64)
    moves_arr = np.empty(size, dtype=np.int8)
    adm_arr = np.empty(size, dtype=np.uint8)
    cdef i64[::1] succ = succ_arr
    cdef cnp.int8_t[::1] moves = moves_arr
    cdef cnp.uint8_t[::1] adm = adm_arr

    cdef i64[::1] x = np.empty(n, dtype=np.int64)
    cdef i64[::1] place = np.empty(n, dtype=np.int64)
    cdef i64 code, rest, nxt, xi, right, left
    cdef int moved, ok, stay

    place[0] = 1
    for i in range(1, n):
        place[i] = place[i - 1] * cells

    for code in range(size):
        rest = code
        for i in range(n):
            x[i] = rest % cells
            rest = rest // cells

        ok = 1
        for i in range(n):
            right = x[(i + 1) % n]
            if 1 <= x[i] <= l - 1 and 1 <= (right - m + cells) % cells <= l - 1:
                ok = 0
                break
        adm[code] = ok

        nxt = code
        moved = 0
        for i in range(n):
            xi = x[i]
            stay = 0
            if xi == 0:
                right = x[(i + 1) % n]
                if 1 <= (right - m + cells) % cells <= l - 1:
                    stay = 1
            if not stay and xi == m:
                left = x[(i + n - 1) % n]
                if left <= l - 1:
                    stay = 1
            if not stay:
                moved += 1
                if xi == cells - 1:
                    nxt -= xi * place[i]
                else:
                    nxt += place[i]
        succ[code] = nxt
        moves[code] = moved

    return succ_arr, moves_arr, adm_arr


def label_cycles(succ_in, admissible_in):
    cdef const i64[::1] succ = np.ascontiguousarray(succ_in, dtype=np.int64)
    cdef const cnp.uint8_t[::1] adm = np.ascontiguousarray(admissible_in, dtype=np.uint8)
    cdef i64 size = succ.shape[0]

    rep_arr = np.full(size, -1, dtype=np.int64)
    trans_arr = np.full(size, -1, dtype=np.int64)
    cdef i64[::1] rep = rep_arr
    cdef i64[::1] trans = trans_arr
    # 0 unvisited, 1 on the current path, 2 resolved
    cdef cnp.uint8_t[::1] colour = np.zeros(size, dtype=np.uint8)
    cdef i64[::1] path = np.empty(size, dtype=np.int64)

    cdef i64 start, cur, depth, j, k, lo, head, nxt_state

    for start in range(size):
        if not adm[start] or colour[start]:
            continue
        depth = 0
        cur = start
        while colour[cur] == 0:
            colour[cur] = 1
            path[depth] = cur
            depth += 1
            cur = succ[cur]
        if colour[cur] == 1:
            # new cycle: path[j..depth) with path[j] == cur
            j = depth - 1
            while path[j] != cur:
                j -= 1
            lo = cur
            for k in range(j, depth):
                if path[k] < lo:
                    lo = path[k]
            for k in range(j, depth):
                rep[path[k]] = lo
                trans[path[k]] = 0
                colour[path[k]] = 2
            depth = j
        k = depth - 1
        while k >= 0:
            head = path[k]
            nxt_state = succ[head]
            rep[head] = rep[nxt_state]
            trans[head] = trans[nxt_state] + 1
            colour[head] = 2
            k -= 1

    return rep_arr, trans_arr
