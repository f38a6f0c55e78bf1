"""Hot loops of the search engine.

Two interchangeable backends compute the same memo table:

* ``numba``: an explicit-stack DFS compiled with ``@njit``; Σ-sets live in a
  single uint64 (so |G| <= 64) and value masks in a few uint64 words.
* ``python``: the same recursion on Python ints (arbitrary width), driven by
  numpy-built lookup tables.

``CROSSNUM_JIT=0`` forces the python backend; it is also used whenever numba
is missing or the group does not fit a 64-bit Σ mask.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass

import numpy as np

try:
    import numba
    from numba import njit, types
    from numba.typed import Dict

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False


def jit_enabled() -> bool:
    return HAVE_NUMBA and os.environ.get("CROSSNUM_JIT", "1").lower() not in ("0", "false", "no", "off")


def backend_for(size: int, backend: str | None = None) -> str:
    if backend is None:
        backend = "numba" if jit_enabled() else "python"
    if backend == "numba" and (not HAVE_NUMBA or size > 64):
        backend = "python"
    return backend


class BudgetExceeded(Exception):
    """Raised by a kernel when the state or time budget runs out."""

    def __init__(self, states: int, path: list[int], reason: str):
        super().__init__(reason)
        self.states = states
        self.path = path
        self.reason = reason


@dataclass
class Budget:
    max_states: int = 10**8
    max_seconds: float = 1800.0

    def deadline(self) -> float:
        return time.monotonic() + self.max_seconds


def translation_tables(add: np.ndarray) -> np.ndarray:
    """trans[g, b, v] = image under x -> x+g of the elements encoded by byte v at byte slot b."""
    N = add.shape[0]
    nbytes = (N + 7) // 8
    trans = np.zeros((N, nbytes, 256), dtype=np.uint64)
    vals = np.arange(256)
    for b in range(nbytes):
        for bit in range(8):
            i = 8 * b + bit
            if i >= N:
                break
            hit = (vals >> bit) & 1 == 1
            trans[:, b, hit] |= (np.uint64(1) << add[i, :].astype(np.uint64))[:, None]
    return trans


def translation_tables_py(add: np.ndarray) -> list[list[list[int]]]:
    N = add.shape[0]
    nbytes = (N + 7) // 8
    out = []
    for g in range(N):
        slots = []
        for b in range(nbytes):
            base = [0] * 8
            for bit in range(8):
                i = 8 * b + bit
                if i < N:
                    base[bit] = 1 << int(add[i, g])
            row = [0] * 256
            for v in range(1, 256):
                low = v & -v
                row[v] = row[v ^ low] | base[low.bit_length() - 1]
            slots.append(row)
        out.append(slots)
    return out


# ---------------------------------------------------------------------------
# python backend


def dag_python(add, neg, weight, allowed, budget: Budget):
    """Memo over (Σ, σ) -> (w-mask, W-mask, max extra length).

    w-mask bit t: some admissible continuation T has exp*k(T) = t (T may be empty).
    W-mask bit t: some continuation T has exp*k(T) + exp/ord(σ+σ(T)) = t.
    """
    N = add.shape[0]
    trans = translation_tables_py(add)
    add_l = add.tolist()
    neg_l = neg.tolist()
    wt = weight.tolist()
    children = [g for g in range(N) if allowed[g]]
    memo: dict = {}
    path: list[int] = []
    deadline = budget.deadline()
    max_states = budget.max_states

    def translate(S, g):
        t = trans[g]
        out = 0
        b = 0
        while S:
            byte = S & 255
            if byte:
                out |= t[b][byte]
            S >>= 8
            b += 1
        return out

    def visit(S, s):
        mw = 1
        mW = 1 << wt[s]
        ml = 0
        for g in children:
            if S >> neg_l[g] & 1:
                continue
            S2 = S | translate(S, g) | (1 << g)
            s2 = add_l[s][g]
            r = memo.get((S2, s2))
            if r is None:
                path.append(g)
                r = visit(S2, s2)
                path.pop()
            w = wt[g]
            mw |= r[0] << w
            mW |= r[1] << w
            if r[2] + 1 > ml:
                ml = r[2] + 1
        res = (mw, mW, ml)
        memo[(S, s)] = res
        n = len(memo)
        if n >= max_states:
            raise BudgetExceeded(n, list(path), f"state budget {max_states} exceeded")
        if n & 4095 == 0 and time.monotonic() > deadline:
            raise BudgetExceeded(n, list(path), f"time budget {budget.max_seconds}s exceeded")
        return res

    root = visit(0, 0)
    return root, len(memo)


# ---------------------------------------------------------------------------
# numba backend

_DONE, _PAUSED, _GROW = 0, 1, 2

if HAVE_NUMBA:
    _key_type = types.UniTuple(types.uint64, 2)

    @njit(cache=True, inline="always")
    def _translate_nb(trans, S, g):
        out = np.uint64(0)
        b = 0
        while S != np.uint64(0):
            byte = S & np.uint64(255)
            if byte != np.uint64(0):
                out |= trans[g, b, byte]
            S = S >> np.uint64(8)
            b += 1
        return out

    @njit(cache=True, inline="always")
    def _or_shifted(dst, src, nw, shift):
        # dst |= src << shift, both halves (w words, W words); overflow dropped
        ws = shift // 64
        bs = np.uint64(shift % 64)
        for half in range(2):
            o = half * nw
            for k in range(nw - 1, ws - 1, -1):
                v = src[o + k - ws] << bs
                if bs != np.uint64(0) and k - ws - 1 >= 0:
                    v |= src[o + k - ws - 1] >> (np.uint64(64) - bs)
                dst[o + k] |= v

    @njit(cache=True)
    def _dag_kernel(trans, add, neg, weight, allowed, nw, memo, rows, lens, ctr,
                    st_S, st_s, st_g, st_acc, st_len, max_new):
        # ctr = [nrows, depth, status]; st_acc[d] holds w words then W words
        N = add.shape[0]
        nrows = ctr[0]
        depth = ctr[1]
        new = 0
        one = np.uint64(1)
        while depth >= 0:
            S = st_S[depth]
            s = st_s[depth]
            g = st_g[depth]
            pushed = False
            while g < N:
                if allowed[g] and ((S >> np.uint64(neg[g])) & one) == np.uint64(0):
                    S2 = S | _translate_nb(trans, S, g) | (one << np.uint64(g))
                    s2 = add[s, g]
                    key = (S2, np.uint64(s2))
                    if key in memo:
                        r = memo[key]
                        _or_shifted(st_acc[depth], rows[r], nw, weight[g])
                        if lens[r] + 1 > st_len[depth]:
                            st_len[depth] = lens[r] + 1
                        g += 1
                    else:
                        st_g[depth] = g
                        d2 = depth + 1
                        st_S[d2] = S2
                        st_s[d2] = s2
                        st_g[d2] = 0
                        for k in range(2 * nw):
                            st_acc[d2, k] = np.uint64(0)
                        st_acc[d2, 0] = one
                        ws = weight[s2]
                        st_acc[d2, nw + ws // 64] |= one << np.uint64(ws % 64)
                        st_len[d2] = 0
                        depth = d2
                        pushed = True
                        break
                else:
                    g += 1
            if pushed:
                continue
            # node finished
            if nrows == rows.shape[0]:
                st_g[depth] = N
                ctr[0] = nrows
                ctr[1] = depth
                ctr[2] = _GROW
                return new
            for k in range(2 * nw):
                rows[nrows, k] = st_acc[depth, k]
            lens[nrows] = st_len[depth]
            memo[(S, np.uint64(s))] = nrows
            r = nrows
            nrows += 1
            new += 1
            depth -= 1
            if depth >= 0:
                gp = st_g[depth]
                _or_shifted(st_acc[depth], rows[r], nw, weight[gp])
                if lens[r] + 1 > st_len[depth]:
                    st_len[depth] = lens[r] + 1
                st_g[depth] = gp + 1
            if new >= max_new:
                ctr[0] = nrows
                ctr[1] = depth
                ctr[2] = _PAUSED if depth >= 0 else _DONE
                return new
        ctr[0] = nrows
        ctr[1] = depth
        ctr[2] = _DONE
        return new


def _words_to_int(words) -> int:
    out = 0
    for k, w in enumerate(words):
        out |= int(w) << (64 * k)
    return out


def dag_numba(add, neg, weight, allowed, value_bits: int, budget: Budget, chunk: int = 1 << 18):
    """Same contract as dag_python; Σ-sets must fit 64 bits."""
    N = add.shape[0]
    if N > 64:
        raise ValueError("numba backend needs |G| <= 64")
    nw = value_bits // 64 + 1
    trans = translation_tables(add)
    add = np.ascontiguousarray(add, dtype=np.int64)
    neg = np.ascontiguousarray(neg, dtype=np.int64)
    weight = np.ascontiguousarray(weight, dtype=np.int64)
    allowed = np.ascontiguousarray(allowed, dtype=np.bool_)
    memo = Dict.empty(_key_type, types.int64)
    cap = 1 << 14
    rows = np.zeros((cap, 2 * nw), dtype=np.uint64)
    lens = np.zeros(cap, dtype=np.int64)
    depth_cap = N + 2
    st_S = np.zeros(depth_cap, dtype=np.uint64)
    st_s = np.zeros(depth_cap, dtype=np.int64)
    st_g = np.zeros(depth_cap, dtype=np.int64)
    st_acc = np.zeros((depth_cap, 2 * nw), dtype=np.uint64)
    st_len = np.zeros(depth_cap, dtype=np.int64)
    st_acc[0, 0] = 1
    st_acc[0, nw + weight[0] // 64] = np.uint64(1) << np.uint64(weight[0] % 64)
    ctr = np.array([0, 0, _PAUSED], dtype=np.int64)
    deadline = budget.deadline()
    while True:
        step = min(chunk, max(1, budget.max_states - int(ctr[0])))
        _dag_kernel(trans, add, neg, weight, allowed, nw, memo, rows, lens, ctr,
                    st_S, st_s, st_g, st_acc, st_len, step)
        status = int(ctr[2])
        if status == _DONE:
            break
        if status == _GROW:
            rows = np.concatenate([rows, np.zeros_like(rows)])
            lens = np.concatenate([lens, np.zeros_like(lens)])
            # the finishing node had st_g set to N; resume re-enters the store step
            continue
        nrows = int(ctr[0])
        path = [int(st_g[d]) for d in range(int(ctr[1]))]
        if nrows >= budget.max_states:
            raise BudgetExceeded(nrows, path, f"state budget {budget.max_states} exceeded")
        if time.monotonic() > deadline:
            raise BudgetExceeded(nrows, path, f"time budget {budget.max_seconds}s exceeded")
    root = memo[(np.uint64(0), np.uint64(0))]
    res = (_words_to_int(rows[root, :nw]), _words_to_int(rows[root, nw:]), int(lens[root]))
    return res, int(ctr[0])
