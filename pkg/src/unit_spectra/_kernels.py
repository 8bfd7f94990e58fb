"""Hot loops with a numba path and a pure numpy/Python fallback.

Set ``UNIT_SPECTRA_PURE_NUMPY=1`` to force the fallback. Both paths consume
the same inputs (including pre-drawn uniforms) and return identical results.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

ENV_FLAG = "UNIT_SPECTRA_PURE_NUMPY"


def numba_enabled() -> bool:
    return HAVE_NUMBA and os.environ.get(ENV_FLAG, "").strip().lower() not in ("1", "true", "yes", "on")


def backend_name() -> str:
    return "numba" if numba_enabled() else "numpy"


def cumulative_rows(P: np.ndarray) -> np.ndarray:
    """Row-wise CDF with every entry at or past the last positive probability pinned to 1.0."""
    cum = np.cumsum(P, axis=1)
    for s in range(P.shape[0]):
        nz = np.flatnonzero(P[s] > 0)
        if nz.size:
            cum[s, nz[-1]:] = 1.0
    return np.ascontiguousarray(cum)


# --- random walk -------------------------------------------------------------


def _trajectory_py(cum, start, uniforms):
    steps = uniforms.shape[0]
    out = np.empty(steps + 1, dtype=np.int64)
    out[0] = start
    s = start
    for k in range(steps):
        s = int(np.searchsorted(cum[s], uniforms[k], side="right"))
        out[k + 1] = s
    return out


def _first_hits_np(cum, start, target, uniforms):
    runs, t_max = uniforms.shape
    state = np.full(runs, start, dtype=np.int64)
    hit = np.zeros(runs, dtype=np.int64)
    alive = np.ones(runs, dtype=bool)
    for t in range(t_max):
        idx = np.flatnonzero(alive)
        if idx.size == 0:
            break
        rows = cum[state[idx]]
        state[idx] = (rows <= uniforms[idx, t][:, None]).sum(axis=1)
        reached = idx[state[idx] == target]
        hit[reached] = t + 1
        alive[reached] = False
    return hit


if HAVE_NUMBA:

    @njit(cache=True)
    def _next_state(cum, s, u):
        row = cum[s]
        j = 0
        while j < row.shape[0] - 1 and row[j] <= u:
            j += 1
        return j

    @njit(cache=True)
    def _trajectory_nb(cum, start, uniforms):
        steps = uniforms.shape[0]
        out = np.empty(steps + 1, dtype=np.int64)
        out[0] = start
        s = start
        for k in range(steps):
            s = _next_state(cum, s, uniforms[k])
            out[k + 1] = s
        return out

    @njit(cache=True)
    def _first_hits_nb(cum, start, target, uniforms):
        runs, t_max = uniforms.shape
        hit = np.zeros(runs, dtype=np.int64)
        for r in range(runs):
            s = start
            for t in range(t_max):
                s = _next_state(cum, s, uniforms[r, t])
                if s == target:
                    hit[r] = t + 1
                    break
        return hit


def trajectory(cum: np.ndarray, start: int, uniforms: np.ndarray) -> np.ndarray:
    if numba_enabled():
        return _trajectory_nb(cum, np.int64(start), uniforms)
    return _trajectory_py(cum, start, uniforms)


def first_hit_times(cum: np.ndarray, start: int, target: int, uniforms: np.ndarray) -> np.ndarray:
    """First step (1-based) at which each run sits on ``target``; 0 when not within the horizon."""
    if numba_enabled():
        return _first_hits_nb(cum, np.int64(start), np.int64(target), uniforms)
    return _first_hits_np(cum, start, target, uniforms)


# --- exact hypergraph colouring ----------------------------------------------


def _k_colorable_py(k, order, vptr, vedges, eptr, emem):
    n = order.shape[0]
    colors = np.full(n, -1, dtype=np.int64)
    maxused = np.full(n + 1, -1, dtype=np.int64)
    pos = 0
    while 0 <= pos < n:
        v = order[pos]
        limit = min(k - 1, maxused[pos] + 1)
        c = colors[v] + 1
        placed = False
        while c <= limit:
            colors[v] = c
            if _vertex_ok_py(v, colors, vptr, vedges, eptr, emem):
                placed = True
                break
            c += 1
        if placed:
            maxused[pos + 1] = max(maxused[pos], c)
            pos += 1
        else:
            colors[v] = -1
            pos -= 1
    if pos == n:
        return colors
    return None


def _vertex_ok_py(v, colors, vptr, vedges, eptr, emem):
    cv = colors[v]
    for a in range(vptr[v], vptr[v + 1]):
        e = vedges[a]
        mono = True
        for b in range(eptr[e], eptr[e + 1]):
            if colors[emem[b]] != cv:
                mono = False
                break
        if mono:
            return False
    return True


if HAVE_NUMBA:

    @njit(cache=True)
    def _vertex_ok_nb(v, colors, vptr, vedges, eptr, emem):
        cv = colors[v]
        for a in range(vptr[v], vptr[v + 1]):
            e = vedges[a]
            mono = True
            for b in range(eptr[e], eptr[e + 1]):
                if colors[emem[b]] != cv:
                    mono = False
                    break
            if mono:
                return False
        return True

    @njit(cache=True)
    def _k_colorable_nb(k, order, vptr, vedges, eptr, emem):
        n = order.shape[0]
        colors = np.full(n, -1, dtype=np.int64)
        maxused = np.full(n + 1, -1, dtype=np.int64)
        pos = 0
        while pos >= 0 and pos < n:
            v = order[pos]
            limit = min(k - 1, maxused[pos] + 1)
            c = colors[v] + 1
            placed = False
            while c <= limit:
                colors[v] = c
                if _vertex_ok_nb(v, colors, vptr, vedges, eptr, emem):
                    placed = True
                    break
                c += 1
            if placed:
                maxused[pos + 1] = max(maxused[pos], c)
                pos += 1
            else:
                colors[v] = -1
                pos -= 1
        return colors, pos == n


def k_coloring(k: int, order, vptr, vedges, eptr, emem) -> np.ndarray | None:
    """A proper k-colouring found by ordered backtracking, or None.

    Edges are given in CSR form (``eptr``/``emem``) together with the
    vertex-to-edge incidence (``vptr``/``vedges``).
    """
    if numba_enabled():
        colors, ok = _k_colorable_nb(np.int64(k), order, vptr, vedges, eptr, emem)
        return colors if ok else None
    return _k_colorable_py(k, order, vptr, vedges, eptr, emem)


# --- maximum clique ----------------------------------------------------------


def _max_clique_py(adj):
    n = len(adj)
    best = 0
    stack = [((1 << n) - 1, 0)]
    while stack:
        P, size = stack.pop()
        if P == 0:
            best = max(best, size)
            continue
        if size + bin(P).count("1") <= best:
            continue
        v = (P & -P).bit_length() - 1
        stack.append((P & ~(1 << v), size))
        stack.append((P & adj[v], size + 1))
    return best


if HAVE_NUMBA:

    @njit(cache=True)
    def _popcount(x):
        c = 0
        while x:
            x &= x - np.uint64(1)
            c += 1
        return c

    @njit(cache=True)
    def _max_clique_nb(adj):
        n = adj.shape[0]
        best = 0
        cap = n * n + 2
        stackP = np.zeros(cap, dtype=np.uint64)
        stackS = np.zeros(cap, dtype=np.int64)
        full = np.uint64(0)
        for i in range(n):
            full |= np.uint64(1) << np.uint64(i)
        stackP[0] = full
        top = 1
        while top > 0:
            top -= 1
            P = stackP[top]
            size = stackS[top]
            if P == np.uint64(0):
                if size > best:
                    best = size
                continue
            if size + _popcount(P) <= best:
                continue
            v = np.uint64(0)
            while not (P >> v) & np.uint64(1):
                v += np.uint64(1)
            bit = np.uint64(1) << v
            stackP[top] = P & ~bit
            stackS[top] = size
            top += 1
            stackP[top] = P & adj[v]
            stackS[top] = size + 1
            top += 1
        return best


def max_clique_size(adj_rows: list[int]) -> int:
    """Clique number of a graph given as neighbour bitmasks (numba path up to 64 vertices)."""
    n = len(adj_rows)
    if n == 0:
        return 0
    if numba_enabled() and n <= 64:
        return int(_max_clique_nb(np.array(adj_rows, dtype=np.uint64)))
    return _max_clique_py(list(adj_rows))
