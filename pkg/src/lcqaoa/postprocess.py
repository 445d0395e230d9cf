"""Bit-flip local search on sampled bitstrings.

Bits are visited in a fixed order; a flip is kept only when it strictly
increases the cut, and full sweeps repeat until one accepts nothing. After a
kept flip the scan continues with the next bit.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .graph import Graph, as_bits, bits_to_str, cut_value, exact_maxcut
from .rng import SplitMix64
from .simulator import SampleSet


@dataclass(frozen=True)
class FlipResult:
    input: str
    output: str
    input_cut: float
    output_cut: float
    flips_accepted: int
    sweeps: int


def scan_order(n: int, order_seed: int | None = None) -> np.ndarray:
    """Ascending by default; a seeded permutation when ``order_seed`` is given."""
    if order_seed is None:
        return np.arange(n, dtype=np.int_)
    return np.asarray(SplitMix64(order_seed).permutation(n), dtype=np.int_)


def bit_flip_sweep(g: Graph, x, order_seed: int | None = None) -> FlipResult:
    bits = np.asarray(as_bits(x, g.n), dtype=np.int8)
    before = bits_to_str(bits)
    indptr, nbrs, weights = g.csr
    flips, sweeps = _kernels.bit_flip_sweep(indptr, nbrs, weights, bits, scan_order(g.n, order_seed))
    after = bits_to_str(bits)
    return FlipResult(before, after, cut_value(g, before), cut_value(g, after), int(flips), int(sweeps))


@dataclass(frozen=True)
class PostProcessSummary:
    maxcut: float
    mean_ar_before: float
    best_ar_before: float
    mean_ar_after: float
    best_ar_after: float
    distinct: int

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def post_process_set(g: Graph, s: SampleSet, maxcut: float | None = None,
                     order_seed: int | None = None) -> tuple[SampleSet, PostProcessSummary, dict[str, FlipResult]]:
    """Sweep every distinct bitstring once and carry multiplicities over.

    Returns the processed set, the before/after AR summary and the per-input
    results (keyed by input bitstring).
    """
    maxcut = exact_maxcut(g).value if maxcut is None else maxcut
    results = {x: bit_flip_sweep(g, x, order_seed) for x in sorted(s.counts)}
    counts: Counter = Counter()
    for x, k in s.items():
        counts[results[x].output] += k
    out = SampleSet(dict(counts), s.shots, s.seed)

    def mean_cut(pick):
        return math.fsum(pick(results[x]) * k for x, k in s.items()) / s.shots

    summary = PostProcessSummary(
        maxcut,
        mean_cut(lambda r: r.input_cut) / maxcut,
        max(r.input_cut for r in results.values()) / maxcut,
        mean_cut(lambda r: r.output_cut) / maxcut,
        max(r.output_cut for r in results.values()) / maxcut,
        len(results),
    )
    return out, summary, results
