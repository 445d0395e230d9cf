"""Hot-kernel backend selection.

The compiled ``_ckernels`` extension is used when it was built; otherwise the
numpy/pure-Python ``_pykernels`` module is used. Setting the environment
variable ``LCQAOA_PURE_PYTHON=1`` forces the fallback. Both backends expose the
same functions with the same semantics; tests run against each available one.

Integer arrays passed to the kernels are ``np.int_`` (C ``long``), index
arrays are ``np.intp``, bit arrays are ``np.int8``.
"""

from __future__ import annotations

import os
from importlib import import_module

_NAMES = {"cython": "._ckernels", "python": "._pykernels"}


def _load(name):
    return import_module(_NAMES[name], __name__)


def available_backends() -> list[str]:
    found = []
    for name in _NAMES:
        try:
            _load(name)
        except ImportError:
            continue
        found.append(name)
    return found


def get_backend(name: str):
    return _load(name)


def _default():
    if os.environ.get("LCQAOA_PURE_PYTHON", "") not in ("", "0"):
        return "python"
    return "cython" if "cython" in available_backends() else "python"


BACKEND = _default()
_impl = _load(BACKEND)


def set_backend(name: str) -> str:
    """Switch the active backend; returns the previous one."""
    global BACKEND, _impl
    previous = BACKEND
    _impl = _load(name)
    BACKEND = name
    return previous


def apply_1q(state, n, q, m00, m01, m10, m11):
    _impl.apply_1q(state, n, q, m00, m01, m10, m11)


def apply_1q_all(state, n, m00, m01, m10, m11):
    _impl.apply_1q_all(state, n, m00, m01, m10, m11)


def apply_rzz(state, n, a, b, theta):
    _impl.apply_rzz(state, n, a, b, theta)


def apply_swap(state, n, a, b):
    _impl.apply_swap(state, n, a, b)


def apply_phase_table(state, index, table):
    _impl.apply_phase_table(state, index, table)


def expectation_diag(state, values) -> float:
    return _impl.expectation_diag(state, values)


def build_diagonal(n, us, vs, ws):
    return _impl.build_diagonal(n, us, vs, ws)


def bit_flip_sweep(indptr, nbrs, weights, x, order):
    return _impl.bit_flip_sweep(indptr, nbrs, weights, x, order)


def maxcut_bnb(n, indptr, nbrs, weights, incumbent, best_x, eps=1e-9):
    return _impl.maxcut_bnb(n, indptr, nbrs, weights, incumbent, best_x, eps)
