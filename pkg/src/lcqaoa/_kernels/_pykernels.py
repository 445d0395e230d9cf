"""Pure-Python / numpy implementations of the hot kernels.

Every function here has an identically named, identically behaving twin in
``_ckernels.pyx``. State-vector kernels mutate ``state`` in place; basis index
``z`` stores qubit ``q`` in bit ``q``.
"""

from __future__ import annotations

import math

import numpy as np


def _split(state: np.ndarray, q: int) -> np.ndarray:
    lo = 1 << q
    return state.reshape(-1, 2, lo)


def _split2(state: np.ndarray, a: int, b: int) -> np.ndarray:
    lo, hi = (a, b) if a < b else (b, a)
    return state.reshape(-1, 2, 1 << (hi - lo - 1), 2, 1 << lo)


def apply_1q(state, n, q, m00, m01, m10, m11):
    v = _split(state, q)
    a0 = v[:, 0, :].copy()
    a1 = v[:, 1, :]
    v[:, 0, :] = m00 * a0 + m01 * a1
    v[:, 1, :] = m10 * a0 + m11 * a1


def apply_1q_all(state, n, m00, m01, m10, m11):
    for q in range(n):
        apply_1q(state, n, q, m00, m01, m10, m11)


def apply_rzz(state, n, a, b, theta):
    v = _split2(state, a, b)
    same = complex(math.cos(theta / 2), -math.sin(theta / 2))
    diff = same.conjugate()
    v[:, 0, :, 0, :] *= same
    v[:, 1, :, 1, :] *= same
    v[:, 0, :, 1, :] *= diff
    v[:, 1, :, 0, :] *= diff


def apply_swap(state, n, a, b):
    v = _split2(state, a, b)
    tmp = v[:, 0, :, 1, :].copy()
    v[:, 0, :, 1, :] = v[:, 1, :, 0, :]
    v[:, 1, :, 0, :] = tmp


def apply_phase_table(state, index, table):
    state *= table[index]


def expectation_diag(state, values):
    probs = state.real * state.real + state.imag * state.imag
    return float(np.dot(probs, values))


def build_diagonal(n, us, vs, ws):
    z = np.arange(1 << n, dtype=np.int64)
    out = np.zeros(1 << n, dtype=np.float64)
    for u, v, w in zip(us.tolist(), vs.tolist(), ws.tolist()):
        parity = ((z >> u) ^ (z >> v)) & 1
        out += w * (1 - 2 * parity)
    return out


def bit_flip_sweep(indptr, nbrs, weights, x, order):
    """Strict-improvement single-bit local search on ``x`` (int8, in place).

    Returns ``(accepted_flips, sweeps)``; the last sweep is the one that
    accepted nothing.
    """
    indptr = indptr.tolist()
    nbrs = nbrs.tolist()
    weights = weights.tolist()
    order = order.tolist()
    bits = x.tolist()
    accepted = 0
    sweeps = 0
    while True:
        sweeps += 1
        changed = False
        for i in order:
            xi = bits[i]
            gain = 0.0
            for k in range(indptr[i], indptr[i + 1]):
                gain += weights[k] if bits[nbrs[k]] == xi else -weights[k]
            if gain > 0.0:
                bits[i] = 1 - xi
                accepted += 1
                changed = True
        if not changed:
            break
    x[:] = bits
    return accepted, sweeps


def maxcut_bnb(n, indptr, nbrs, weights, incumbent, best_x, eps):
    """Depth-first branch and bound over vertices 0..n-1 with vertex 0 fixed to side 0.

    Branches try side 0 before side 1, so leaves are visited in lexicographic
    order of their bitstrings; the first leaf reaching the optimum is kept.
    ``incumbent`` is a lower bound (value of ``best_x`` on entry). Returns the
    optimum value; ``best_x`` is overwritten with the lexicographically
    smallest optimal assignment.
    """
    indptr = indptr.tolist()
    nbrs = nbrs.tolist()
    weights = weights.tolist()
    to0 = [0.0] * n
    to1 = [0.0] * n
    side = [-1] * n
    remaining = 0.0
    for i in range(n):
        for k in range(indptr[i], indptr[i + 1]):
            if nbrs[k] > i:
                remaining += weights[k]
    best = [incumbent, False, list(best_x.tolist())]

    def assign(v, s):
        side[v] = s
        gained = to1[v] if s == 0 else to0[v]
        internal = 0.0
        for k in range(indptr[v], indptr[v + 1]):
            u = nbrs[k]
            if side[u] < 0:
                internal += weights[k]
                if s == 0:
                    to0[u] += weights[k]
                else:
                    to1[u] += weights[k]
        return gained, internal

    def unassign(v, s):
        side[v] = -1
        for k in range(indptr[v], indptr[v + 1]):
            u = nbrs[k]
            if side[u] < 0:
                if s == 0:
                    to0[u] -= weights[k]
                else:
                    to1[u] -= weights[k]

    def recurse(v, cut, remaining):
        if v == n:
            if cut > best[0] + eps or (not best[1] and cut >= best[0] - eps):
                best[0] = cut
                best[1] = True
                best[2] = side[:]
            return
        bound = cut + remaining
        for u in range(v, n):
            bound += to0[u] if to0[u] > to1[u] else to1[u]
        if best[1]:
            if bound <= best[0] + eps:
                return
        elif bound < best[0] - eps:
            return
        for s in (0, 1):
            gained, internal = assign(v, s)
            recurse(v + 1, cut + gained, remaining - internal)
            unassign(v, s)

    gained, internal = assign(0, 0)
    recurse(1, gained, remaining - internal)
    best_x[:] = best[2]
    return best[0]
