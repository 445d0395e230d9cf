"""The variational loop: objectives, QAOA optimisation and FOURIER initialisation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import _kernels
from .circuit import (
    Circuit,
    CouplingMap,
    RoutedCircuit,
    build_lc_ansatz,
    build_original_ansatz,
    chain_layout,
    linear_map,
    route_greedy,
)
from .errors import DimMismatch, InvalidParams
from .graph import Chain, Graph, cut_value, exact_maxcut
from .ising import CostDiagonal, build_diagonal, build_ising
from .optimize import OptRun, minimize_cobyla_like
from .rng import SplitMix64, derive_seed
from .simulator import (
    CompiledCircuit,
    NoiseSpec,
    SampleSet,
    StateVector,
    _draw,
    noisy_run,
    remap_samples,
    sample,
)

DEFAULT_TOL = 1e-3
DEFAULT_SHOTS = 1024


@dataclass(frozen=True)
class ParamSchedule:
    gammas: tuple[float, ...]
    betas: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "gammas", tuple(float(g) for g in self.gammas))
        object.__setattr__(self, "betas", tuple(float(b) for b in self.betas))
        if len(self.gammas) != len(self.betas):
            raise DimMismatch("gammas and betas differ in length")
        if not all(math.isfinite(v) for v in self.gammas + self.betas):
            raise InvalidParams("schedule angles must be finite")

    @property
    def p(self) -> int:
        return len(self.gammas)

    def to_vector(self) -> np.ndarray:
        """Interleaved ``(gamma_1, beta_1, ..., gamma_p, beta_p)``."""
        out = np.empty(2 * self.p)
        out[0::2] = self.gammas
        out[1::2] = self.betas
        return out

    @classmethod
    def from_vector(cls, x) -> "ParamSchedule":
        x = np.asarray(x, dtype=np.float64)
        if x.size % 2:
            raise DimMismatch("parameter vector length must be even")
        return cls(tuple(x[0::2]), tuple(x[1::2]))

    @classmethod
    def zeros(cls, p: int) -> "ParamSchedule":
        return cls((0.0,) * p, (0.0,) * p)


@dataclass(frozen=True)
class FourierCoeffs:
    u: tuple[float, ...]
    v: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "u", tuple(float(a) for a in self.u))
        object.__setattr__(self, "v", tuple(float(b) for b in self.v))
        if len(self.u) != len(self.v) or not self.u:
            raise DimMismatch("need q >= 1 coefficients for both u and v")

    @property
    def q(self) -> int:
        return len(self.u)


def _fourier_basis(p: int, q: int) -> tuple[np.ndarray, np.ndarray]:
    i = np.arange(1, p + 1)[:, None] - 0.5
    k = np.arange(1, q + 1)[None, :] - 0.5
    arg = k * i * np.pi / p
    return np.sin(arg), np.cos(arg)


def fourier_to_params(c: FourierCoeffs, p: int) -> ParamSchedule:
    """``gamma_i = sum_k u_k sin((k-1/2)(i-1/2) pi / p)``, ``beta_i = sum_k v_k cos(...)``."""
    if p < 1:
        raise DimMismatch("p must be >= 1")
    sin, cos = _fourier_basis(p, c.q)
    return ParamSchedule(tuple(sin @ np.array(c.u)), tuple(cos @ np.array(c.v)))


def params_to_fourier(s: ParamSchedule, q: int | None = None) -> FourierCoeffs:
    """Inverse of :func:`fourier_to_params`; exact for ``q == p``, least squares for ``q < p``."""
    q = s.p if q is None else q
    if not 1 <= q <= s.p:
        raise DimMismatch(f"need 1 <= q <= p={s.p}, got q={q}")
    sin, cos = _fourier_basis(s.p, q)
    if q == s.p:
        u = np.linalg.solve(sin, np.array(s.gammas))
        v = np.linalg.solve(cos, np.array(s.betas))
    else:
        u = np.linalg.lstsq(sin, np.array(s.gammas), rcond=None)[0]
        v = np.linalg.lstsq(cos, np.array(s.betas), rcond=None)[0]
    return FourierCoeffs(tuple(u), tuple(v))


def fourier_extend(prev: "OptRun | ParamSchedule") -> ParamSchedule:
    """Initial level-``p+1`` schedule from a level-``p`` optimum (FOURIER heuristic, no perturbation)."""
    s = ParamSchedule.from_vector(prev.x) if isinstance(prev, OptRun) else prev
    c = params_to_fourier(s)
    grown = FourierCoeffs(c.u + (0.0,), c.v + (0.0,))
    return fourier_to_params(grown, s.p + 1)


# -- objectives ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Mode:
    """``exact`` evaluates <H_C> from the state; ``shots`` estimates it from
    ``shots`` samples drawn with the same ``seed`` on every evaluation."""

    kind: str = "exact"
    shots: int = DEFAULT_SHOTS
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("exact", "shots"):
            raise InvalidParams(f"mode must be 'exact' or 'shots', got {self.kind!r}")
        if self.shots < 1:
            raise InvalidParams("shots must be >= 1")


EXACT = Mode()


def make_objective(ansatz: "Circuit | RoutedCircuit", cost: CostDiagonal, mode: Mode = EXACT,
                   noise: NoiseSpec | None = None) -> Callable[[np.ndarray], float]:
    """``params -> <H_C>`` (exact) or its shot estimate.

    With ``noise`` the ansatz runs as Pauli trajectories (shots mode only);
    a routed ansatz has its samples mapped back to logical qubits.
    """
    routed = ansatz if isinstance(ansatz, RoutedCircuit) else None
    circuit = routed.circuit if routed else ansatz
    logical_n = routed.logical_n if routed else circuit.n
    if logical_n != cost.n:
        raise DimMismatch(f"ansatz acts on {logical_n} qubits, cost on {cost.n}")
    if noise is not None and not noise.noiseless:
        if mode.kind != "shots":
            raise InvalidParams("noisy objectives need shots mode")
        values = cost.values
        from .graph import bits_to_index

        def noisy(params):
            s = noisy_run(circuit, params, noise, mode.seed, mode.shots)
            if routed:
                s = remap_samples(s, routed.final_permutation)
            return math.fsum(values[bits_to_index(x)] * k for x, k in s.items()) / s.shots

        return noisy
    if routed is not None:
        raise InvalidParams("noiseless objectives take the logical (unrouted) ansatz")
    compiled = CompiledCircuit(circuit)
    buf = np.empty(1 << circuit.n, dtype=np.complex128)
    if mode.kind == "exact":
        def exact(params):
            return _kernels.expectation_diag(compiled.run(params, buf), cost.values)

        return exact

    def shots(params):
        amps = compiled.run(params, buf)
        idx = _draw(amps.real ** 2 + amps.imag ** 2, mode.seed, 0, mode.shots)
        return float(cost.values[idx].mean())

    return shots


# -- full loop ----------------------------------------------------------------------------

@dataclass(frozen=True)
class AnsatzSpec:
    kind: str = "original"
    p: int = 1
    chain: Chain | None = None

    def __post_init__(self):
        if self.kind not in ("original", "lc"):
            raise InvalidParams(f"ansatz must be 'original' or 'lc', got {self.kind!r}")
        if self.kind == "lc" and self.chain is None:
            raise InvalidParams("the lc ansatz needs a chain")
        if self.p < 1:
            raise InvalidParams("p must be >= 1")

    def build(self, g: Graph, p: int | None = None) -> Circuit:
        p = self.p if p is None else p
        if self.kind == "lc":
            return build_lc_ansatz(self.chain, g.n, p)
        return build_original_ansatz(g, p)

    def layout(self, g: Graph, cmap: CouplingMap) -> list[int] | None:
        if self.kind == "lc":
            return chain_layout(self.chain, cmap, g.n)
        return None


@dataclass
class QAOAResult:
    p: int
    run: OptRun
    schedule: ParamSchedule
    circuit: Circuit
    state: StateVector
    samples: SampleSet
    maxcut: float
    expected_cut: float
    expected_ar: float
    mean_ar: float
    best_ar: float
    routed: RoutedCircuit | None = field(default=None, repr=False)


def ar_stats(g: Graph, samples: SampleSet, maxcut: float) -> tuple[float, float]:
    """Multiplicity-weighted mean and best approximation ratio of a sample set."""
    cuts = {x: cut_value(g, x) for x in samples.counts}
    mean = math.fsum(cuts[x] * k for x, k in samples.items()) / samples.shots
    return mean / maxcut, max(cuts.values()) / maxcut


def optimize_qaoa(g: Graph, spec: AnsatzSpec, mode: Mode = EXACT, tol: float = DEFAULT_TOL, *,
                  x0: ParamSchedule | None = None, max_iter: int | None = None, rhobeg: float = 1.0,
                  restarts: int = 0, restart_seed: int = 0, shots: int = DEFAULT_SHOTS,
                  sample_seed: int = 0, maxcut: float | None = None,
                  noise: NoiseSpec | None = None, cmap: CouplingMap | None = None,
                  cost: CostDiagonal | None = None) -> QAOAResult:
    """Optimise the ansatz from ``x0`` (zeros by default) and sample the result.

    ``noise`` (if any) applies to the routed circuit on ``cmap`` (default: a
    linear map); it enters the objective only in shots mode and always
    enters the final sampling.
    """
    circuit = spec.build(g)
    cost = build_diagonal(build_ising(g)) if cost is None else cost
    maxcut = exact_maxcut(g).value if maxcut is None else maxcut
    noisy = noise is not None and not noise.noiseless
    routed = None
    if noisy:
        cmap = cmap or linear_map(g.n)
        routed = route_greedy(circuit, cmap, spec.layout(g, cmap))
    if noisy and mode.kind == "shots":
        f = make_objective(routed, cost, mode, noise)
    else:
        f = make_objective(circuit, cost, mode)
    start = ParamSchedule.zeros(spec.p) if x0 is None else x0
    if start.p != spec.p:
        raise DimMismatch(f"x0 has p={start.p}, ansatz has p={spec.p}")
    run = minimize_cobyla_like(f, start.to_vector(), tol, max_iter, rhobeg)
    for r in range(restarts):
        rng = SplitMix64(derive_seed(restart_seed, r))
        guess = [(rng.random() - 0.5) * math.pi / 2 for _ in range(2 * spec.p)]
        other = minimize_cobyla_like(f, guess, tol, max_iter, rhobeg)
        if other.fun < run.fun:
            run = other
    schedule = ParamSchedule.from_vector(run.x)
    compiled = CompiledCircuit(circuit)
    state = compiled.state(run.x)
    energy = _kernels.expectation_diag(state.amplitudes, cost.values)
    expected_cut = g.total_weight / 2 - energy / 2
    if noisy:
        samples = remap_samples(noisy_run(routed.circuit, run.x, noise, sample_seed, shots),
                                routed.final_permutation)
    else:
        samples = sample(state, shots, sample_seed)
    mean_ar, best_ar = ar_stats(g, samples, maxcut)
    return QAOAResult(spec.p, run, schedule, circuit, state, samples, maxcut, expected_cut,
                      expected_cut / maxcut, mean_ar, best_ar, routed)


def fourier_ladder(g: Graph, spec: AnsatzSpec, mode: Mode = EXACT, tol: float = DEFAULT_TOL,
                   **kwargs) -> list[QAOAResult]:
    """Optimise levels ``1..spec.p``; level ``p+1`` starts from the FOURIER extension of level ``p``."""
    results: list[QAOAResult] = []
    x0 = None
    kwargs.setdefault("maxcut", exact_maxcut(g).value)
    kwargs.setdefault("cost", build_diagonal(build_ising(g)))
    for p in range(1, spec.p + 1):
        level = AnsatzSpec(spec.kind, p, spec.chain)
        result = optimize_qaoa(g, level, mode, tol, x0=x0, **kwargs)
        results.append(result)
        x0 = fourier_extend(result.schedule)
    return results

