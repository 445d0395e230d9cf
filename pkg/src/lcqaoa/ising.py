"""MaxCut as a diagonal Ising cost Hamiltonian.

``H_C = sum_(u,v) w_uv Z_u Z_v`` with spin ``s_i = +1`` for bit 0 and ``-1``
for bit 1, so that ``cut(x) = offset - energy(x) / 2`` with
``offset = sum(w) / 2``. Minimising ``<H_C>`` maximises the expected cut.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _kernels
from .errors import DimMismatch, TooLarge
from .graph import Bits, Graph, as_bits

SIMULATOR_LIMIT = 24


@dataclass(frozen=True)
class IsingModel:
    n: int
    couplings: tuple[tuple[int, int, float], ...]
    offset: float


@dataclass(frozen=True, eq=False)
class CostDiagonal:
    """Energies of all ``2**n`` basis states, ``values[z] = energy(z)``."""

    n: int
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != (1 << self.n,):
            raise DimMismatch(f"diagonal has shape {self.values.shape}, expected ({1 << self.n},)")
        self.values.setflags(write=False)

    @cached_property
    def levels(self) -> tuple[np.ndarray, np.ndarray]:
        """Distinct energies and the per-basis-state index into them.

        MaxCut diagonals take few distinct values, so ``exp(-i gamma values)``
        is evaluated once per level and gathered.
        """
        levels, index = np.unique(self.values, return_inverse=True)
        return levels, np.ascontiguousarray(index.reshape(-1), dtype=np.intp)

    def phase_table(self, gamma: float) -> np.ndarray:
        levels, _ = self.levels
        return np.exp(-1j * gamma * levels)


def build_ising(g: Graph) -> IsingModel:
    return IsingModel(g.n, tuple(g.edges), g.total_weight / 2)


def energy(m: IsingModel, x: Bits) -> float:
    """Diagonal element <x|H_C|x>."""
    bits = as_bits(x, m.n)
    return math.fsum(w if bits[u] == bits[v] else -w for u, v, w in m.couplings)


def cut_from_energy(m: IsingModel, e):
    return m.offset - e / 2


def build_diagonal(m: IsingModel, limit: int = SIMULATOR_LIMIT) -> CostDiagonal:
    if m.n > limit:
        raise TooLarge(f"diagonal limited to n <= {limit}, got n={m.n}")
    us = np.array([u for u, _, _ in m.couplings], dtype=np.int_)
    vs = np.array([v for _, v, _ in m.couplings], dtype=np.int_)
    ws = np.array([w for _, _, w in m.couplings], dtype=np.float64)
    return CostDiagonal(m.n, _kernels.build_diagonal(m.n, us, vs, ws))
