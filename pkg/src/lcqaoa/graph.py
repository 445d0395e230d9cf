"""Weighted graphs, cut evaluation, exact MaxCut and chain extraction.

Bitstrings everywhere follow one convention: character ``i`` (left to right)
is the side of vertex ``i``. The same holds for simulator basis indices, where
vertex ``i`` lives in bit ``i`` of the integer index.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import (
    ChainInvalid,
    EmptyGraph,
    GenerationFailed,
    InvalidGraph,
    InvalidParams,
    LengthMismatch,
    TooLarge,
)
from .rng import SplitMix64, derive_seed

WEIGHT_PALETTE = (0.25, 0.5, 0.75, 1.0)
MAXCUT_LIMIT = 24
ENUMERATION_BELOW = 16
DEFAULT_RESTARTS = 32

Bits = str | Sequence[int]


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph with positive edge weights.

    ``edges`` holds ``(u, v, w)`` with ``u < v``; ``meta`` records provenance
    (generator, degree, seed, weighted flag).
    """

    n: int
    edges: tuple[tuple[int, int, float], ...]
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        edges = tuple((int(u), int(v), float(w)) for u, v, w in self.edges)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "meta", dict(self.meta))
        problem = _find_invariant_violation(self.n, edges, self.meta)
        if problem is not None:
            raise InvalidGraph(f"{problem[0]}: {problem[1]}")

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def total_weight(self) -> float:
        return math.fsum(w for _, _, w in self.edges)

    @property
    def is_weighted(self) -> bool:
        return any(w != 1.0 for _, _, w in self.edges)

    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, float], ...], ...]:
        adj: list[list[tuple[int, float]]] = [[] for _ in range(self.n)]
        for u, v, w in self.edges:
            adj[u].append((v, w))
            adj[v].append((u, w))
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def _weight_map(self) -> dict[tuple[int, int], float]:
        return {(u, v): w for u, v, w in self.edges}

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self._weight_map

    def weight(self, u: int, v: int) -> float:
        return self._weight_map[(min(u, v), max(u, v))]

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(indptr, neighbours, weights)`` arrays in kernel dtypes."""
        indptr = np.zeros(self.n + 1, dtype=np.int_)
        nbrs, weights = [], []
        for v, row in enumerate(self.adjacency):
            indptr[v + 1] = indptr[v] + len(row)
            nbrs.extend(u for u, _ in row)
            weights.extend(w for _, w in row)
        return indptr, np.asarray(nbrs, dtype=np.int_), np.asarray(weights, dtype=np.float64)

    def to_dict(self) -> dict:
        return {"n": self.n, "edges": [[u, v, w] for u, v, w in self.edges], "meta": self.meta}


def _find_invariant_violation(n, edges, meta):
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        return "n", f"must be a non-negative integer, got {n!r}"
    seen = set()
    degree = [0] * n
    for i, (u, v, w) in enumerate(edges):
        for j, x in enumerate((u, v)):
            if not 0 <= x < n:
                return f"edges[{i}][{j}]", f"vertex {x} out of range [0, {n})"
        if u == v:
            return f"edges[{i}]", f"self-loop on vertex {u}"
        if u > v:
            return f"edges[{i}]", f"endpoints must satisfy u < v, got ({u}, {v})"
        if (u, v) in seen:
            return f"edges[{i}]", f"duplicate edge ({u}, {v})"
        if not (w > 0 and math.isfinite(w)):
            return f"edges[{i}][2]", f"weight must be positive and finite, got {w!r}"
        seen.add((u, v))
        degree[u] += 1
        degree[v] += 1
    d = meta.get("degree")
    if d is not None:
        for v, k in enumerate(degree):
            if k != d:
                return "meta.degree", f"vertex {v} has degree {k}, expected {d}"
    if meta.get("weighted") is False and any(w != 1.0 for _, _, w in edges):
        return "meta.weighted", "unweighted graph has a weight other than 1"
    return None


@dataclass(frozen=True)
class Chain:
    """Simple path of vertices inside ``graph``."""

    vertices: tuple[int, ...]
    graph: Graph = field(repr=False)

    def __post_init__(self):
        verts = tuple(int(v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if len(set(verts)) != len(verts):
            raise ChainInvalid("chain repeats a vertex")
        for v in verts:
            if not 0 <= v < self.graph.n:
                raise ChainInvalid(f"vertex {v} not in graph with n={self.graph.n}")
        for a, b in zip(verts, verts[1:]):
            if not self.graph.has_edge(a, b):
                raise ChainInvalid(f"consecutive vertices {a} and {b} are not adjacent")

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def edges(self) -> list[tuple[int, int, float]]:
        return [(a, b, self.graph.weight(a, b)) for a, b in zip(self.vertices, self.vertices[1:])]

    @property
    def num_edges(self) -> int:
        return max(len(self.vertices) - 1, 0)


@dataclass(frozen=True)
class Cut:
    assignment: str
    value: float


# -- bitstrings ---------------------------------------------------------------

def as_bits(x: Bits, n: int) -> list[int]:
    if isinstance(x, str):
        bits = [1 if c == "1" else 0 for c in x]
        if any(c not in "01" for c in x):
            raise ValueError(f"bitstring may only contain 0/1: {x!r}")
    else:
        bits = [int(b) for b in x]
    if len(bits) != n:
        raise LengthMismatch(f"bitstring has length {len(bits)}, expected {n}")
    return bits


def bits_to_str(bits: Sequence[int]) -> str:
    return "".join("1" if b else "0" for b in bits)


def complement(x: str) -> str:
    return x.translate(str.maketrans("01", "10"))


def index_to_bits(z: int, n: int) -> str:
    return "".join("1" if (z >> i) & 1 else "0" for i in range(n))


def bits_to_index(x: Bits) -> int:
    bits = [1 if c == "1" else 0 for c in x] if isinstance(x, str) else list(x)
    return sum(b << i for i, b in enumerate(bits))


# -- generation ---------------------------------------------------------------

def generate_random_regular(n: int, d: int, seed: int, weighted: bool = False,
                            max_retries: int = 1000) -> Graph:
    """Random ``d``-regular simple graph on ``n`` vertices.

    Stub pairing: all ``n*d`` stubs are shuffled and paired; pairs forming a
    self-loop or a repeated edge are rejected and their stubs re-shuffled and
    re-paired. If the leftover stubs admit no valid pair the attempt restarts,
    at most ``max_retries`` times. Weighted graphs then draw each edge weight
    uniformly from ``WEIGHT_PALETTE`` (edges in sorted order).
    """
    if n < 2 or d < 0 or d >= n or (n * d) % 2:
        raise InvalidParams(f"need n >= 2, 0 <= d < n and n*d even; got n={n}, d={d}")
    rng = SplitMix64(seed)
    for _ in range(max_retries):
        edges = _try_pairing(n, d, rng)
        if edges is not None:
            break
    else:
        raise GenerationFailed(f"no simple {d}-regular pairing on {n} vertices after {max_retries} attempts")
    ordered = sorted(edges)
    if weighted:
        triples = [(u, v, WEIGHT_PALETTE[rng.randbelow(len(WEIGHT_PALETTE))]) for u, v in ordered]
    else:
        triples = [(u, v, 1.0) for u, v in ordered]
    meta = {"generator": "random_regular", "degree": d, "seed": seed, "weighted": bool(weighted)}
    return Graph(n, tuple(triples), meta)


def _try_pairing(n, d, rng):
    edges = set()
    stubs = [v for v in range(n) for _ in range(d)]
    while stubs:
        rng.shuffle(stubs)
        leftover: dict[int, int] = {}
        for i in range(0, len(stubs), 2):
            a, b = stubs[i], stubs[i + 1]
            if a > b:
                a, b = b, a
            if a != b and (a, b) not in edges:
                edges.add((a, b))
            else:
                leftover[a] = leftover.get(a, 0) + 1
                leftover[b] = leftover.get(b, 0) + 1
        if leftover and not _pairable(edges, sorted(leftover)):
            return None
        stubs = [v for v in sorted(leftover) for _ in range(leftover[v])]
    return edges


def _pairable(edges, vertices):
    for i, a in enumerate(vertices):
        for b in vertices[i + 1:]:
            if (a, b) not in edges:
                return True
    return False


# -- cuts -----------------------------------------------------------------------

def cut_value(g: Graph, x: Bits) -> float:
    bits = as_bits(x, g.n)
    return math.fsum(w for u, v, w in g.edges if bits[u] != bits[v])


def random_baseline(g: Graph) -> float:
    """Expected cut of a uniformly random assignment."""
    return g.total_weight / 2


def exact_maxcut(g: Graph, limit: int = MAXCUT_LIMIT) -> Cut:
    """Globally optimal cut.

    Vertex 0 is pinned to side 0 (the complement of any cut has the same
    value). Among optimal assignments the lexicographically smallest bitstring
    is returned. Below ``ENUMERATION_BELOW`` vertices every assignment is
    tabulated; larger graphs use branch and bound seeded with a greedy
    local-search incumbent.
    """
    if g.n > limit:
        raise TooLarge(f"exact MaxCut limited to n <= {limit}, got n={g.n}")
    if g.n == 0:
        return Cut("", 0.0)
    if g.n < ENUMERATION_BELOW:
        return _maxcut_enumerate(g)
    return _maxcut_branch_and_bound(g)


def _maxcut_enumerate(g: Graph) -> Cut:
    n = g.n
    if not g.edges:
        return Cut("0" * n, 0.0)
    us, vs, ws = _edge_arrays(g)
    # cut(z) = (total - sum_e w_e s_u s_v) / 2; only even z (vertex 0 on side 0)
    diag = _kernels.build_diagonal(n, us, vs, ws)[0::2]
    cuts = (g.total_weight - diag) / 2
    best = cuts.max()
    candidates = np.flatnonzero(cuts >= best - 1e-9) * 2
    assignment = min(index_to_bits(int(z), n) for z in candidates)
    return Cut(assignment, cut_value(g, assignment))


def _maxcut_branch_and_bound(g: Graph) -> Cut:
    indptr, nbrs, weights = g.csr
    seed_bits = greedy_cut(g)
    if seed_bits[0] == 1:
        seed_bits = 1 - seed_bits
    incumbent = cut_value(g, seed_bits)
    best = seed_bits.astype(np.int8)
    _kernels.maxcut_bnb(g.n, indptr, nbrs, weights, incumbent, best)
    assignment = bits_to_str(best.tolist())
    return Cut(assignment, cut_value(g, assignment))


def greedy_cut(g: Graph) -> np.ndarray:
    """Greedy construction (each vertex joins the side cutting more weight) then 1-flip local search."""
    x = np.zeros(g.n, dtype=np.int8)
    for v in range(g.n):
        to_side = [0.0, 0.0]
        for u, w in g.adjacency[v]:
            if u < v:
                to_side[x[u]] += w
        x[v] = 1 if to_side[0] > to_side[1] else 0
    indptr, nbrs, weights = g.csr
    _kernels.bit_flip_sweep(indptr, nbrs, weights, x, np.arange(g.n, dtype=np.int_))
    return x


def _edge_arrays(g: Graph):
    us = np.array([u for u, _, _ in g.edges], dtype=np.int_)
    vs = np.array([v for _, v, _ in g.edges], dtype=np.int_)
    ws = np.array([w for _, _, w in g.edges], dtype=np.float64)
    return us, vs, ws


# -- chains ---------------------------------------------------------------------

def find_chain(g: Graph, restarts: int = DEFAULT_RESTARTS, seed: int = 0,
               budget: int | None = None) -> Chain:
    """Longest simple path found by greedy depth-first search.

    Each restart picks a random start vertex and a random tie-break rank per
    vertex, then runs a depth-first search that always descends first into
    the unvisited neighbour with the fewest unvisited neighbours of its own
    (ties by rank). The search backtracks until ``budget`` descents have been
    made (default ``16 * n``); the deepest path seen is then extended greedily
    from its start end. The longest result over all restarts wins, ties going
    to the earlier restart. No optimality guarantee.
    """
    if g.n == 0:
        raise EmptyGraph("cannot extract a chain from an empty graph")
    if budget is None:
        budget = 16 * g.n
    nbrs = [[u for u, _ in row] for row in g.adjacency]
    best: list[int] = []
    for r in range(max(restarts, 1)):
        rng = SplitMix64(derive_seed(seed, r))
        start = rng.randbelow(g.n)
        rank = rng.permutation(g.n)
        path = _greedy_dfs(nbrs, start, rank, budget)
        path.reverse()
        _extend(nbrs, path, rank)
        if len(path) > len(best):
            best = path
            if len(best) == g.n:
                break
    return Chain(tuple(best), g)


def _candidates(nbrs, v, on_path, rank):
    free = [u for u in nbrs[v] if not on_path[u]]
    key = {u: (sum(1 for t in nbrs[u] if not on_path[t]), rank[u]) for u in free}
    # popped from the end, so most preferred last
    return sorted(free, key=key.__getitem__, reverse=True)


def _greedy_dfs(nbrs, start, rank, budget):
    n = len(nbrs)
    on_path = [False] * n
    on_path[start] = True
    path = [start]
    best = [start]
    stack = [_candidates(nbrs, start, on_path, rank)]
    steps = 0
    while stack:
        cands = stack[-1]
        if cands:
            if steps >= budget:
                break
            nxt = cands.pop()
            steps += 1
            on_path[nxt] = True
            path.append(nxt)
            if len(path) > len(best):
                best = path[:]
                if len(best) == n:
                    break
            stack.append(_candidates(nbrs, nxt, on_path, rank))
        else:
            stack.pop()
            on_path[path.pop()] = False
    return best


def _extend(nbrs, path, rank):
    on_path = [False] * len(nbrs)
    for v in path:
        on_path[v] = True
    while True:
        cands = _candidates(nbrs, path[-1], on_path, rank)
        if not cands:
            return
        nxt = cands[-1]
        on_path[nxt] = True
        path.append(nxt)


def chain_prefix(c: Chain, fraction: float) -> Chain:
    """Prefix sub-path keeping ``round(fraction * (len - 1))`` edges (halves round up)."""
    if not 0.0 <= fraction <= 1.0:
        raise InvalidParams(f"fraction must lie in [0, 1], got {fraction}")
    keep = math.floor(fraction * c.num_edges + 0.5)
    return Chain(c.vertices[: keep + 1], c.graph)


# -- files ----------------------------------------------------------------------

def graph_from_json(text: str) -> Graph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidGraph(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise InvalidGraph("<root>: expected a JSON object")
    if "n" not in data:
        raise InvalidGraph("n: missing")
    n = data["n"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise InvalidGraph(f"n: must be an integer, got {n!r}")
    raw = data.get("edges", [])
    if not isinstance(raw, list):
        raise InvalidGraph("edges: expected a list")
    edges = []
    for i, e in enumerate(raw):
        if not isinstance(e, list) or len(e) not in (2, 3):
            raise InvalidGraph(f"edges[{i}]: expected [u, v] or [u, v, w]")
        for j, x in enumerate(e[:2]):
            if not isinstance(x, int) or isinstance(x, bool):
                raise InvalidGraph(f"edges[{i}][{j}]: vertex must be an integer, got {x!r}")
        w = e[2] if len(e) == 3 else 1.0
        if not isinstance(w, (int, float)) or isinstance(w, bool):
            raise InvalidGraph(f"edges[{i}][2]: weight must be a number, got {w!r}")
        edges.append((e[0], e[1], float(w)))
    meta = data.get("meta", {})
    if not isinstance(meta, dict):
        raise InvalidGraph("meta: expected an object")
    return Graph(n, tuple(edges), meta)


def graph_to_json(g: Graph) -> str:
    return json.dumps(g.to_dict(), indent=1, sort_keys=True)


def load_graph(path) -> Graph:
    with open(path) as fh:
        return graph_from_json(fh.read())


def save_graph(g: Graph, path) -> None:
    with open(path, "w") as fh:
        fh.write(graph_to_json(g) + "\n")
