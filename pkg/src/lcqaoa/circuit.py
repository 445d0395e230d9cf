"""Layered gate IR, QAOA ansatz builders, coupling maps, SWAP routing and metrics.

Angle conventions: ``RZZ(t) = exp(-i t/2 Z⊗Z)``, ``RX(t) = exp(-i t/2 X)``.
The QAOA cost gate for an edge of weight ``w`` at layer ``k`` is
``RZZ(2 w gamma_k)`` and the mixer is ``RX(2 beta_k)``. Parameter vectors are
interleaved ``(gamma_1, beta_1, ..., gamma_p, beta_p)``: slot ``2k`` holds
``gamma_(k+1)`` and slot ``2k + 1`` holds ``beta_(k+1)``.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import ChainInvalid, InvalidDims, InvalidParams, Unroutable
from .graph import Chain, Graph, find_chain

ONE_QUBIT = ("H", "RX")
TWO_QUBIT = ("RZZ", "SWAP")
PARAMETRIC = ("RX", "RZZ")


@dataclass(frozen=True)
class Gate:
    """One gate. Parametric gates carry either a fixed ``theta`` or a
    parameter ``slot``; in the latter case the bound angle is
    ``coeff * params[slot]``."""

    kind: str
    qubits: tuple[int, ...]
    theta: float | None = None
    slot: int | None = None
    coeff: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if self.kind in ONE_QUBIT:
            arity = 1
        elif self.kind in TWO_QUBIT:
            arity = 2
        else:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if len(self.qubits) != arity or len(set(self.qubits)) != arity:
            raise ValueError(f"{self.kind} needs {arity} distinct qubits, got {self.qubits}")
        if self.kind in PARAMETRIC:
            if (self.theta is None) == (self.slot is None):
                raise ValueError(f"{self.kind} needs exactly one of theta or slot")
            if self.theta is not None and not math.isfinite(self.theta):
                raise ValueError("theta must be finite")
            if not math.isfinite(self.coeff):
                raise ValueError("coeff must be finite")
        elif self.theta is not None or self.slot is not None:
            raise ValueError(f"{self.kind} takes no angle")

    def angle(self, params: Sequence[float]) -> float:
        if self.theta is not None:
            return self.theta
        return self.coeff * params[self.slot]

    def on(self, *qubits: int) -> "Gate":
        return Gate(self.kind, qubits, self.theta, self.slot, self.coeff)

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "qubits": list(self.qubits)}
        if self.theta is not None:
            out["theta"] = self.theta
        if self.slot is not None:
            out["slot"] = self.slot
            out["coeff"] = self.coeff
        return out


@dataclass(frozen=True)
class Circuit:
    n: int
    layers: tuple[tuple[Gate, ...], ...]
    param_slots: int = 0

    def __post_init__(self):
        layers = tuple(tuple(layer) for layer in self.layers)
        object.__setattr__(self, "layers", layers)
        for i, layer in enumerate(layers):
            used: set[int] = set()
            for gate in layer:
                for q in gate.qubits:
                    if not 0 <= q < self.n:
                        raise ValueError(f"layer {i}: qubit {q} outside [0, {self.n})")
                    if q in used:
                        raise ValueError(f"layer {i}: qubit {q} used twice")
                    used.add(q)
                if gate.slot is not None and not 0 <= gate.slot < self.param_slots:
                    raise ValueError(f"layer {i}: slot {gate.slot} outside [0, {self.param_slots})")

    def gates(self) -> Iterator[Gate]:
        for layer in self.layers:
            yield from layer

    def count(self, kind: str) -> int:
        return sum(1 for g in self.gates() if g.kind == kind)

    @property
    def depth(self) -> int:
        return len(self.layers)

    def to_json(self) -> str:
        return json.dumps([[g.to_dict() for g in layer] for layer in self.layers])


def circuit_from_json(text: str, n: int, param_slots: int) -> Circuit:
    layers = []
    for layer in json.loads(text):
        layers.append(tuple(Gate(d["kind"], tuple(d["qubits"]), d.get("theta"), d.get("slot"),
                                 d.get("coeff", 1.0)) for d in layer))
    return Circuit(n, tuple(layers), param_slots)


def gamma_slot(k: int) -> int:
    return 2 * k


def beta_slot(k: int) -> int:
    return 2 * k + 1


def _mixer(n: int, k: int) -> tuple[Gate, ...]:
    return tuple(Gate("RX", (q,), slot=beta_slot(k), coeff=2.0) for q in range(n))


def _hadamards(n: int) -> tuple[Gate, ...]:
    return tuple(Gate("H", (q,)) for q in range(n))


def pack_first_fit(gates: Iterable[Gate]) -> list[tuple[Gate, ...]]:
    """Greedy first-fit packing into qubit-disjoint layers.

    Gates may move ahead of earlier gates on the same qubit, which is only
    valid for commuting gates such as one cost block of ``RZZ``.
    """
    layers: list[list[Gate]] = []
    used: list[set[int]] = []
    for gate in gates:
        for layer, busy in zip(layers, used):
            if busy.isdisjoint(gate.qubits):
                layer.append(gate)
                busy.update(gate.qubits)
                break
        else:
            layers.append([gate])
            used.append(set(gate.qubits))
    return [tuple(layer) for layer in layers]


def build_original_ansatz(g: Graph, p: int) -> Circuit:
    """QAOA with one ``RZZ`` per graph edge in every cost block."""
    if p < 1:
        raise InvalidParams(f"p must be >= 1, got {p}")
    layers = [_hadamards(g.n)]
    for k in range(p):
        cost = [Gate("RZZ", (u, v), slot=gamma_slot(k), coeff=2.0 * w) for u, v, w in g.edges]
        layers.extend(pack_first_fit(cost))
        layers.append(_mixer(g.n, k))
    return Circuit(g.n, tuple(layers), 2 * p)


def build_lc_ansatz(chain: Chain, n: int | None = None, p: int = 1) -> Circuit:
    """Linear-chain QAOA: ``RZZ`` only on consecutive chain vertices.

    Chain edges at even positions form the first cost sub-layer and odd
    positions the second (the brick wall), so the cost block has depth 2
    for any chain with at least two edges. The mixer acts on all ``n`` qubits.
    """
    if p < 1:
        raise InvalidParams(f"p must be >= 1, got {p}")
    n = chain.graph.n if n is None else n
    if any(not 0 <= v < n for v in chain.vertices):
        raise ChainInvalid(f"chain vertices must lie in [0, {n})")
    edges = chain.edges
    layers = [_hadamards(n)]
    for k in range(p):
        for parity in (0, 1):
            sub = tuple(Gate("RZZ", (u, v), slot=gamma_slot(k), coeff=2.0 * w)
                        for i, (u, v, w) in enumerate(edges) if i % 2 == parity)
            if sub:
                layers.append(sub)
        layers.append(_mixer(n, k))
    return Circuit(n, tuple(layers), 2 * p)


# -- coupling maps ------------------------------------------------------------------

@dataclass(frozen=True)
class CouplingMap:
    num_qubits: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.num_qubits < 1:
            raise InvalidDims("a coupling map needs at least one qubit")
        norm = sorted({(min(a, b), max(a, b)) for a, b in self.edges})
        for a, b in norm:
            if a == b or not 0 <= a < b < self.num_qubits:
                raise InvalidDims(f"bad coupling ({a}, {b})")
        object.__setattr__(self, "edges", tuple(norm))

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.num_qubits)]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def _edge_set(self) -> frozenset:
        return frozenset(self.edges)

    def adjacent(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self._edge_set

    def _bfs(self, src: int) -> list[int]:
        parent = [-2] * self.num_qubits
        parent[src] = -1
        queue = deque([src])
        while queue:
            x = queue.popleft()
            for y in self.neighbors[x]:
                if parent[y] == -2:
                    parent[y] = x
                    queue.append(y)
        return parent

    @cached_property
    def _parents(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(self._bfs(s)) for s in range(self.num_qubits))

    def shortest_path(self, a: int, b: int) -> list[int] | None:
        """Physical path ``a -> b`` (inclusive), or None when disconnected."""
        parent = self._parents[b]
        if parent[a] == -2:
            return None
        path = [a]
        while path[-1] != b:
            path.append(parent[path[-1]])
        return path

    def connected(self, qubits: Iterable[int]) -> bool:
        qubits = list(qubits)
        if not qubits:
            return True
        parent = self._parents[qubits[0]]
        return all(parent[q] != -2 for q in qubits)

    def as_graph(self) -> Graph:
        return Graph(self.num_qubits, tuple((a, b, 1.0) for a, b in self.edges))


def linear_map(n: int) -> CouplingMap:
    return CouplingMap(n, tuple((i, i + 1) for i in range(n - 1)))


def heavy_hex_like(rows: int, cols: int) -> CouplingMap:
    """Synthetic heavy-hex-style lattice.

    ``rows`` lines of ``cols`` qubits each, consecutive lines joined through
    bridge qubits placed every 4 columns with the offset alternating 0, 2 (so
    no qubit exceeds degree 3). Not a replica of any device.
    """
    if rows < 1 or cols < 1:
        raise InvalidDims(f"rows and cols must be >= 1, got {rows}x{cols}")
    edges = []
    for r in range(rows):
        base = r * cols
        edges.extend((base + c, base + c + 1) for c in range(cols - 1))
    nxt = rows * cols
    for r in range(rows - 1):
        columns = list(range(0 if r % 2 == 0 else 2, cols, 4)) or [cols - 1]
        for c in columns:
            edges.append((r * cols + c, nxt))
            edges.append(((r + 1) * cols + c, nxt))
            nxt += 1
    return CouplingMap(nxt, tuple(edges))


# -- metrics --------------------------------------------------------------------------

@dataclass(frozen=True)
class DurationModel:
    """Per-gate durations in seconds. A SWAP costs ``swap_natives`` native
    two-qubit gates and, unless ``t_swap`` is given, that many times ``t_2q``."""

    t_1q: float = 50e-9
    t_2q: float = 300e-9
    swap_natives: int = 3
    t_swap: float | None = None

    def duration(self, gate: Gate) -> float:
        if gate.kind in ONE_QUBIT:
            return self.t_1q
        if gate.kind == "SWAP":
            return self.t_swap if self.t_swap is not None else self.swap_natives * self.t_2q
        return self.t_2q


@dataclass(frozen=True)
class CircuitMetrics:
    two_qubit_count: int
    depth: int
    duration: float
    rzz_count: int
    swap_count: int
    one_qubit_count: int

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def metrics(c: "Circuit | RoutedCircuit", model: DurationModel | None = None) -> CircuitMetrics:
    model = model or DurationModel()
    if isinstance(c, RoutedCircuit):
        c = c.circuit
    rzz = c.count("RZZ")
    swaps = c.count("SWAP")
    one = sum(1 for g in c.gates() if g.kind in ONE_QUBIT)
    duration = math.fsum(max((model.duration(g) for g in layer), default=0.0) for layer in c.layers)
    return CircuitMetrics(rzz + model.swap_natives * swaps, c.depth, duration, rzz, swaps, one)


# -- routing --------------------------------------------------------------------------

@dataclass(frozen=True)
class RoutedCircuit:
    """Physical circuit on ``map.num_qubits`` qubits.

    ``initial_layout[q]`` / ``final_permutation[q]`` give the physical qubit
    holding logical qubit ``q`` before the first and after the last gate.
    """

    circuit: Circuit
    initial_layout: tuple[int, ...]
    final_permutation: tuple[int, ...]
    metrics: CircuitMetrics = field(compare=False)

    @property
    def logical_n(self) -> int:
        return len(self.initial_layout)


def asap_layers(n: int, gates: Iterable[Gate]) -> list[tuple[Gate, ...]]:
    """Schedule a gate sequence as early as per-qubit ordering allows."""
    layers: list[list[Gate]] = []
    ready = [0] * n
    for gate in gates:
        at = max(ready[q] for q in gate.qubits)
        if at == len(layers):
            layers.append([])
        layers[at].append(gate)
        for q in gate.qubits:
            ready[q] = at + 1
    return [tuple(layer) for layer in layers]


def route_greedy(c: Circuit, cmap: CouplingMap, layout: Sequence[int] | None = None,
                 model: DurationModel | None = None) -> RoutedCircuit:
    """Make every two-qubit gate nearest-neighbour by inserting SWAPs.

    Gates are taken in layer order. When a two-qubit gate's physical qubits
    are not coupled, its first qubit is swapped step by step along a
    shortest physical path until the two are adjacent. No lookahead. The
    routed gate list is then re-scheduled ASAP.
    """
    if cmap.num_qubits < c.n:
        raise Unroutable(f"coupling map has {cmap.num_qubits} qubits, circuit needs {c.n}")
    l2p = list(range(c.n)) if layout is None else [int(q) for q in layout]
    if len(l2p) != c.n or len(set(l2p)) != c.n or any(not 0 <= q < cmap.num_qubits for q in l2p):
        raise InvalidParams("layout must map each logical qubit to a distinct physical qubit")
    initial = tuple(l2p)
    if not cmap.connected(l2p):
        raise Unroutable("coupling map is disconnected over the mapped qubits")
    p2l = {p: q for q, p in enumerate(l2p)}
    out: list[Gate] = []
    for gate in c.gates():
        if len(gate.qubits) == 2:
            a, b = gate.qubits
            if not cmap.adjacent(l2p[a], l2p[b]):
                path = cmap.shortest_path(l2p[a], l2p[b])
                for x, y in zip(path[:-2], path[1:-1]):
                    out.append(Gate("SWAP", (x, y)))
                    lx, ly = p2l.get(x), p2l.get(y)
                    p2l.pop(x, None)
                    p2l.pop(y, None)
                    if lx is not None:
                        l2p[lx] = y
                        p2l[y] = lx
                    if ly is not None:
                        l2p[ly] = x
                        p2l[x] = ly
        out.append(gate.on(*(l2p[q] for q in gate.qubits)))
    routed = Circuit(cmap.num_qubits, tuple(asap_layers(cmap.num_qubits, out)), c.param_slots)
    return RoutedCircuit(routed, initial, tuple(l2p), metrics(routed, model))


def chain_layout(chain: Chain, cmap: CouplingMap, n: int | None = None,
                 restarts: int = 32, seed: int = 0) -> list[int]:
    """Layout placing consecutive chain vertices on a physical path.

    Off-chain logical qubits take the remaining physical qubits, the rest of
    the path first and then ascending index.
    """
    n = chain.graph.n if n is None else n
    if cmap.edges == tuple((i, i + 1) for i in range(cmap.num_qubits - 1)):
        path = list(range(cmap.num_qubits))
    else:
        path = list(find_chain(cmap.as_graph(), restarts=restarts, seed=seed).vertices)
    if len(path) < len(chain):
        raise Unroutable(f"no physical path of {len(chain)} qubits found (longest {len(path)})")
    layout = [-1] * n
    for v, phys in zip(chain.vertices, path):
        layout[v] = phys
    taken = set(path[: len(chain)])
    free = [q for q in path[len(chain):]] + [q for q in range(cmap.num_qubits) if q not in set(path)]
    free_iter = iter(q for q in free if q not in taken)
    for v in range(n):
        if layout[v] < 0:
            try:
                layout[v] = next(free_iter)
            except StopIteration:
                raise Unroutable("coupling map has too few qubits") from None
    return layout
