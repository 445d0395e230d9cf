"""Exact state-vector simulation of the circuit IR.

Basis index ``z`` stores qubit ``q`` in bit ``q``; the matching bitstring has
qubit ``q`` at character ``q``. Kernels come from the active backend in
``lcqaoa._kernels``.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels
from .circuit import Circuit, Gate
from .errors import DimMismatch, ParamCountMismatch, TooLarge
from .graph import index_to_bits
from .ising import SIMULATOR_LIMIT, CostDiagonal, IsingModel, energy
from .rng import SplitMix64, derive_seed, uniform_block

DENSE_LIMIT = 6
SHOT_STREAM = 1
NOISE_STREAM = 2

_S = 1 / math.sqrt(2)
H_MATRIX = np.array([[_S, _S], [_S, -_S]], dtype=complex)
PAULIS = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def rx_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


@dataclass(eq=False)
class StateVector:
    n: int
    amplitudes: np.ndarray

    def copy(self) -> "StateVector":
        return StateVector(self.n, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        a = self.amplitudes
        return a.real * a.real + a.imag * a.imag


@dataclass
class SampleSet:
    counts: dict[str, int]
    shots: int
    seed: int | None = None

    def __post_init__(self):
        total = sum(self.counts.values())
        if total != self.shots:
            raise ValueError(f"multiplicities sum to {total}, shots = {self.shots}")

    def items(self):
        return sorted(self.counts.items())

    def mean(self, f) -> float:
        return math.fsum(f(x) * k for x, k in self.items()) / self.shots

    def to_csv(self) -> str:
        return "".join(f"{x},{k}\n" for x, k in self.items())


def samples_from_csv(text: str, seed: int | None = None) -> SampleSet:
    counts: dict[str, int] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#") or line == "bitstring,count":
            continue
        try:
            bits, k = line.split(",")
            k = int(k)
        except ValueError:
            raise ValueError(f"line {lineno}: expected 'bitstring,count', got {line!r}") from None
        if not bits or set(bits) - {"0", "1"} or k < 0:
            raise ValueError(f"line {lineno}: bad entry {line!r}")
        counts[bits] = counts.get(bits, 0) + k
    return SampleSet(counts, sum(counts.values()), seed)


@dataclass(frozen=True)
class NoiseSpec:
    """Depolarizing Pauli noise: after each one-qubit (two-qubit) native gate
    a uniformly random non-identity Pauli hits its qubit(s) with probability
    ``p1`` (``p2``)."""

    p1: float = 0.0
    p2: float = 0.0
    trajectories: int = 64
    swap_natives: int = 3

    def __post_init__(self):
        if not (0 <= self.p1 <= 1 and 0 <= self.p2 <= 1):
            raise ValueError("noise probabilities must lie in [0, 1]")
        if self.trajectories < 1:
            raise ValueError("need at least one trajectory")

    @property
    def noiseless(self) -> bool:
        return self.p1 == 0 and self.p2 == 0


def _check_size(n: int, limit: int = SIMULATOR_LIMIT):
    if n > limit:
        raise TooLarge(f"simulation limited to n <= {limit}, got n={n}")


def init_zero(n: int, limit: int = SIMULATOR_LIMIT) -> StateVector:
    _check_size(n, limit)
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(n, amps)


def init_plus(n: int, limit: int = SIMULATOR_LIMIT) -> StateVector:
    _check_size(n, limit)
    return StateVector(n, np.full(1 << n, 2.0 ** (-n / 2), dtype=np.complex128))


def _apply_gate(amps: np.ndarray, n: int, gate: Gate, params) -> None:
    kind = gate.kind
    if kind == "H":
        _kernels.apply_1q(amps, n, gate.qubits[0], *H_MATRIX.ravel())
    elif kind == "RX":
        _kernels.apply_1q(amps, n, gate.qubits[0], *rx_matrix(gate.angle(params)).ravel())
    elif kind == "RZZ":
        _kernels.apply_rzz(amps, n, gate.qubits[0], gate.qubits[1], gate.angle(params))
    else:
        _kernels.apply_swap(amps, n, gate.qubits[0], gate.qubits[1])


def _check_params(c: Circuit, params) -> np.ndarray:
    params = np.asarray(params, dtype=np.float64).reshape(-1)
    if params.size != c.param_slots:
        raise ParamCountMismatch(f"circuit has {c.param_slots} parameter slots, got {params.size}")
    return params


def apply_diagonal_phase(s: StateVector, d: CostDiagonal, gamma: float) -> StateVector:
    """``amp[z] *= exp(-i gamma values[z])``; returns a new state."""
    if d.n != s.n:
        raise DimMismatch(f"diagonal on {d.n} qubits, state on {s.n}")
    out = s.copy()
    _kernels.apply_phase_table(out.amplitudes, d.levels[1], d.phase_table(gamma))
    return out


def run_circuit(c: Circuit, params: Sequence[float] = (), start: StateVector | None = None) -> StateVector:
    """Apply every gate of ``c`` in layer order to a copy of ``start`` (default ``|0...0>``)."""
    params = _check_params(c, params)
    state = init_zero(c.n) if start is None else start.copy()
    if state.n != c.n:
        raise DimMismatch(f"circuit on {c.n} qubits, state on {state.n}")
    for gate in c.gates():
        _apply_gate(state.amplitudes, c.n, gate, params)
    return state


def _embed(op: np.ndarray, qubit: int, n: int) -> np.ndarray:
    # qubit n-1 is the leftmost Kronecker factor
    factors = [op if q == qubit else np.eye(2) for q in reversed(range(n))]
    out = factors[0]
    for f in factors[1:]:
        out = np.kron(out, f)
    return out


def gate_matrix(gate: Gate, params, n: int) -> np.ndarray:
    """Full ``2**n x 2**n`` matrix of ``gate`` built from Kronecker products of Paulis."""
    if gate.kind == "H":
        return _embed(H_MATRIX, gate.qubits[0], n)
    if gate.kind == "RX":
        return _embed(rx_matrix(gate.angle(params)), gate.qubits[0], n)
    a, b = gate.qubits
    if gate.kind == "RZZ":
        t = gate.angle(params)
        zz = _embed(PAULIS[3], a, n) @ _embed(PAULIS[3], b, n)
        return math.cos(t / 2) * np.eye(1 << n) - 1j * math.sin(t / 2) * zz
    # SWAP = (II + XX + YY + ZZ) / 2
    total = np.eye(1 << n, dtype=complex)
    for pauli in PAULIS[1:]:
        total = total + _embed(pauli, a, n) @ _embed(pauli, b, n)
    return total / 2


def dense_reference(c: Circuit, params: Sequence[float] = (), start: StateVector | None = None) -> StateVector:
    """Slow trusted oracle: multiplies full gate matrices."""
    if c.n > DENSE_LIMIT:
        raise TooLarge(f"dense reference limited to n <= {DENSE_LIMIT}")
    params = _check_params(c, params)
    state = init_zero(c.n) if start is None else start.copy()
    vec = state.amplitudes
    for gate in c.gates():
        vec = gate_matrix(gate, params, c.n) @ vec
    return StateVector(c.n, vec)


def fidelity(a: StateVector, b: StateVector) -> float:
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)


def permute_qubits(s: StateVector, perm: Sequence[int]) -> StateVector:
    """State with qubit ``perm[q]`` of ``s`` relabelled as qubit ``q``.

    Undoes a routing permutation when ``perm`` is ``final_permutation`` and
    the physical register has the same size as the logical one.
    """
    n = s.n
    if sorted(perm) != list(range(n)):
        raise DimMismatch("perm must be a permutation of all qubits")
    # numpy axis j of the reshaped tensor is qubit n-1-j
    tensor = s.amplitudes.reshape((2,) * n)
    axes = [n - 1 - perm[n - 1 - j] for j in range(n)]
    return StateVector(n, np.ascontiguousarray(tensor.transpose(axes)).reshape(-1))


def remap_samples(samples: SampleSet, final_permutation: Sequence[int]) -> SampleSet:
    """Physical bitstrings to logical ones: logical ``q`` is read at ``final_permutation[q]``."""
    counts: Counter = Counter()
    for x, k in samples.counts.items():
        counts["".join(x[p] for p in final_permutation)] += k
    return SampleSet(dict(counts), samples.shots, samples.seed)


def expectation_exact(s: StateVector, d: CostDiagonal) -> float:
    if d.n != s.n:
        raise DimMismatch(f"diagonal on {d.n} qubits, state on {s.n}")
    return _kernels.expectation_diag(s.amplitudes, d.values)


def _draw(probs: np.ndarray, seed: int, start: int, count: int) -> np.ndarray:
    cdf = np.cumsum(probs)
    u = uniform_block(derive_seed(seed, SHOT_STREAM), start, count) * cdf[-1]
    return np.minimum(np.searchsorted(cdf, u, side="right"), probs.size - 1)


def _tally(indices: np.ndarray, n: int, counts: Counter) -> None:
    values, mult = np.unique(indices, return_counts=True)
    for z, k in zip(values.tolist(), mult.tolist()):
        counts[index_to_bits(z, n)] += k


def sample(s: StateVector, shots: int, seed: int) -> SampleSet:
    """``shots`` i.i.d. draws from ``|amp|**2`` by inverse CDF.

    Shot ``k`` consumes output ``k`` of the shot stream derived from ``seed``,
    so any partition of shots (see :func:`noisy_run`) reproduces it exactly.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    counts: Counter = Counter()
    _tally(_draw(s.probabilities(), seed, 0, shots), s.n, counts)
    return SampleSet(dict(counts), shots, seed)


def estimate_energy(samples: SampleSet, m: IsingModel) -> float:
    return samples.mean(lambda x: energy(m, x))


def noisy_run(c: Circuit, params: Sequence[float], spec: NoiseSpec, seed: int, shots: int = 1024) -> SampleSet:
    """Monte Carlo Pauli trajectories from ``|0...0>``, pooled into one sample set.

    Trajectory ``t`` draws its errors from its own stream ``(seed, t)`` and
    measures the shots ``[t*shots//T, (t+1)*shots//T)`` of the common shot
    stream. A SWAP counts as ``spec.swap_natives`` native two-qubit gates,
    each followed by its own error draw.
    """
    params = _check_params(c, params)
    _check_size(c.n)
    trajectories = min(spec.trajectories, shots)
    counts: Counter = Counter()
    clean = None
    for t in range(trajectories):
        lo, hi = t * shots // trajectories, (t + 1) * shots // trajectories
        if hi == lo:
            continue
        if spec.noiseless:
            if clean is None:
                clean = run_circuit(c, params).probabilities()
            probs = clean
        else:
            probs = _trajectory(c, params, spec, SplitMix64(derive_seed(seed, NOISE_STREAM, t)))
        _tally(_draw(probs, seed, lo, hi - lo), c.n, counts)
    return SampleSet(dict(counts), shots, seed)


def _trajectory(c: Circuit, params, spec: NoiseSpec, rng: SplitMix64) -> np.ndarray:
    amps = init_zero(c.n).amplitudes
    for gate in c.gates():
        _apply_gate(amps, c.n, gate, params)
        if len(gate.qubits) == 1:
            if spec.p1 and rng.random() < spec.p1:
                _apply_pauli(amps, c.n, gate.qubits[0], 1 + rng.randbelow(3))
            continue
        for _ in range(spec.swap_natives if gate.kind == "SWAP" else 1):
            if spec.p2 and rng.random() < spec.p2:
                which = 1 + rng.randbelow(15)
                _apply_pauli(amps, c.n, gate.qubits[0], which % 4)
                _apply_pauli(amps, c.n, gate.qubits[1], which // 4)
    a = amps
    return a.real * a.real + a.imag * a.imag


def _apply_pauli(amps, n, q, which):
    if which:
        _kernels.apply_1q(amps, n, q, *PAULIS[which].ravel())


# -- compiled fast path ------------------------------------------------------------------

@dataclass(eq=False)
class CompiledCircuit:
    """A circuit re-expressed as whole-register operations.

    Runs of consecutive ``RZZ`` gates sharing one parameter slot become a
    single diagonal phase (they commute); layers that apply the same ``RX``
    or ``H`` to every qubit become one register-wide rotation. Results are
    identical to :func:`run_circuit` up to floating-point rounding.
    """

    circuit: Circuit
    ops: list = field(init=False)

    def __post_init__(self):
        c = self.circuit
        ops: list = []
        pending: list[Gate] = []

        def flush():
            if pending:
                ops.append(("phase", pending[0].slot, _rzz_diagonal(c.n, pending)))
                pending.clear()

        for layer in c.layers:
            kind = _uniform_layer(layer, c.n)
            if kind is not None:
                flush()
                ops.append(kind)
                continue
            for gate in layer:
                if gate.kind == "RZZ" and gate.slot is not None:
                    if pending and pending[0].slot != gate.slot:
                        flush()
                    pending.append(gate)
                else:
                    flush()
                    ops.append(("gate", gate))
        flush()
        self.ops = ops

    def run(self, params: Sequence[float], out: np.ndarray | None = None) -> np.ndarray:
        """Evolve ``|0...0>``; writes into and returns ``out`` when given."""
        params = _check_params(self.circuit, params)
        n = self.circuit.n
        amps = np.empty(1 << n, dtype=np.complex128) if out is None else out
        amps[:] = 0.0
        amps[0] = 1.0
        fresh = True
        for op in self.ops:
            tag = op[0]
            if tag == "h_all" and fresh:
                amps[:] = 2.0 ** (-n / 2)
            elif tag == "h_all":
                _kernels.apply_1q_all(amps, n, *H_MATRIX.ravel())
            elif tag == "rx_all":
                theta = op[2] * params[op[1]]
                _kernels.apply_1q_all(amps, n, *rx_matrix(theta).ravel())
            elif tag == "phase":
                diag = op[2]
                _kernels.apply_phase_table(amps, diag.levels[1], diag.phase_table(params[op[1]]))
            else:
                _apply_gate(amps, n, op[1], params)
            fresh = False
        return amps

    def state(self, params: Sequence[float]) -> StateVector:
        return StateVector(self.circuit.n, self.run(params))


def _uniform_layer(layer, n):
    if len(layer) != n or n == 0:
        return None
    first = layer[0]
    if first.kind == "H" and all(g.kind == "H" for g in layer):
        return ("h_all",)
    if first.kind == "RX" and first.slot is not None and all(
            g.kind == "RX" and g.slot == first.slot and g.coeff == first.coeff for g in layer):
        return ("rx_all", first.slot, first.coeff)
    return None


def _rzz_diagonal(n: int, gates: list[Gate]) -> CostDiagonal:
    # RZZ(coeff * gamma) = exp(-i gamma (coeff / 2) Z Z)
    us = np.array([g.qubits[0] for g in gates], dtype=np.int_)
    vs = np.array([g.qubits[1] for g in gates], dtype=np.int_)
    ws = np.array([g.coeff / 2 for g in gates], dtype=np.float64)
    return CostDiagonal(n, _kernels.build_diagonal(n, us, vs, ws))
