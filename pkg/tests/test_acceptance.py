"""Acceptance criteria, one test per criterion.

Each check returns ``(passed, detail, data)``. ``data`` holds every number
the verdict depends on, so the determinism criterion can rerun all checks and
compare their data bit for bit. A PASS/FAIL line per criterion is printed in
the pytest terminal summary, or directly when this file is run as a script.

Run alone: ``pytest tests/test_acceptance.py -v`` or ``python3 tests/test_acceptance.py``.
"""

import math
import time

import numpy as np
import pytest

from lcqaoa.circuit import (Circuit, DurationModel, Gate, build_lc_ansatz, build_original_ansatz, linear_map,
                            metrics, route_greedy)
from lcqaoa.graph import Graph, chain_prefix, cut_value, exact_maxcut, find_chain, generate_random_regular
from lcqaoa.ising import build_ising, energy
from lcqaoa.postprocess import post_process_set
from lcqaoa.rng import SplitMix64
from lcqaoa.simulator import NoiseSpec, dense_reference, run_circuit
from lcqaoa.vqa import AnsatzSpec, ParamSchedule, fourier_ladder, fourier_to_params, optimize_qaoa, params_to_fourier

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script
    ACCEPTANCE_LINES = []

pytestmark = pytest.mark.acceptance

AMPLITUDE_TOL = 1e-8
SINGLE_EDGE_TOL = 1e-3
TREND_SLACK = 0.02
FRACTION_GAP = 0.01


# -- independent oracles ---------------------------------------------------------------

def enumerate_cuts(g):
    """All 2^n cut values by vectorised brute force (no package kernels)."""
    z = np.arange(1 << g.n, dtype=np.int64)
    total = np.zeros(z.size)
    for u, v, w in g.edges:
        total += w * (((z >> u) ^ (z >> v)) & 1)
    return total


def single_edge_grid_max_cut(points_per_axis=1000):
    from oracles import single_edge_energy_grid

    gammas = np.linspace(0, math.pi, points_per_axis, endpoint=False)
    betas = np.linspace(0, math.pi / 2, points_per_axis, endpoint=False)
    energies = single_edge_energy_grid(gammas, betas)
    return 0.5 - energies.min() / 2


def random_circuit(n, seed, depth=30):
    rng = SplitMix64(seed)
    layers = []
    for _ in range(depth):
        kind = ("H", "RX", "RZZ", "SWAP")[rng.randbelow(4 if n > 1 else 2)]
        if kind in ("H", "RX"):
            qubits = (rng.randbelow(n),)
        else:
            qubits = tuple(rng.permutation(n)[:2])
        if kind == "RX":
            gate = Gate(kind, qubits, slot=rng.randbelow(4), coeff=2.0)
        elif kind == "RZZ":
            gate = Gate(kind, qubits, slot=rng.randbelow(4), coeff=2.0 * (0.25 + rng.randbelow(4) * 0.25))
        else:
            gate = Gate(kind, qubits)
        layers.append((gate,))
    params = [(rng.random() - 0.5) * 2 * math.pi for _ in range(4)]
    return Circuit(n, tuple(layers), 4), params


def is_one_flip_maximal(g, x):
    value = cut_value(g, x)
    for i in range(g.n):
        y = x[:i] + ("1" if x[i] == "0" else "0") + x[i + 1:]
        if cut_value(g, y) > value:
            return False
    return True


# -- criteria --------------------------------------------------------------------------

def criterion_1():
    errors = []
    for k in range(100):
        c, params = random_circuit(1 + k % 6, seed=k)
        diff = run_circuit(c, params).amplitudes - dense_reference(c, params).amplitudes
        errors.append(float(np.abs(diff).max()))
    worst = max(errors)
    return worst <= AMPLITUDE_TOL, f"max per-amplitude error {worst:.2e} over 100 circuits (n <= 6)", errors


def criterion_2():
    identity_ok = True
    for n, seed in [(4, 0), (6, 1), (8, 2), (10, 3), (12, 4), (12, 5)]:
        g = generate_random_regular(n, 3, seed, weighted=seed % 2 == 1)
        m = build_ising(g)
        cuts = enumerate_cuts(g)
        for z in range(1 << n):
            x = "".join("1" if (z >> i) & 1 else "0" for i in range(n))
            if cuts[z] != m.offset - energy(m, x) / 2:
                identity_ok = False
    values = []
    matches = 0
    for k in range(20):
        n = (8, 10, 12, 14, 16)[k % 5]
        g = generate_random_regular(n, 3 + 2 * (k % 2 == 1 and n > 8), 100 + k, weighted=k % 3 == 0)
        cut = exact_maxcut(g)
        brute = float(enumerate_cuts(g).max())
        matches += cut.value == brute and cut_value(g, cut.assignment) == brute
        values.append((cut.value, brute))
    ok = identity_ok and matches == 20
    return ok, f"cut/energy identity exhaustive: {identity_ok}; exact_maxcut = enumeration on {matches}/20", values


def criterion_3():
    g = Graph(2, ((0, 1, 1.0),))
    r = optimize_qaoa(g, AnsatzSpec("original", 1))
    grid_best = single_edge_grid_max_cut()
    ok = abs(r.expected_cut - 1.0) <= SINGLE_EDGE_TOL and abs(grid_best - 1.0) <= 1e-9
    return ok, (f"expected cut {r.expected_cut:.6f} after {r.run.iterations} evaluations; "
                f"10^6-point grid optimum {grid_best:.9f}"), (r.expected_cut, r.run.x.tolist(), grid_best)


def criterion_4():
    sizes = (8, 12, 16, 20)
    model = DurationModel(t_1q=50e-9, t_2q=300e-9)
    lc_counts_ok = True
    lc_shapes = set()
    routed_means = []
    above_edges = True
    for n in sizes:
        routed = []
        for seed in range(10):
            g = generate_random_regular(n, 3, seed)
            chain = find_chain(g)
            lc = metrics(build_lc_ansatz(chain, n, 1), model)
            lc_counts_ok &= lc.two_qubit_count == n - 1
            lc_shapes.add((lc.depth, lc.duration))
            r = route_greedy(build_original_ansatz(g, 1), linear_map(n)).metrics.two_qubit_count
            above_edges &= r >= 3 * n // 2
            routed.append(r)
        routed_means.append(sum(routed) / len(routed))
    increasing = all(a < b for a, b in zip(routed_means, routed_means[1:]))
    ok = lc_counts_ok and len(lc_shapes) == 1 and increasing and above_edges
    depth, duration = next(iter(lc_shapes)) if len(lc_shapes) == 1 else (None, None)
    detail = (f"LC 2q = n-1: {lc_counts_ok}; LC (depth, duration) constant: {len(lc_shapes) == 1} "
              f"({depth}, {duration and round(duration * 1e9)} ns); routed original mean 2q {routed_means}")
    return ok, detail, (routed_means, sorted(lc_shapes))


def criterion_5():
    rows = []
    ok = True
    for d in (3, 5, 7):
        base, lc, orig = [], [], []
        for seed in range(10):
            g = generate_random_regular(16, d, seed)
            maxcut = exact_maxcut(g).value
            base.append(g.total_weight / 2 / maxcut)
            lc.append(optimize_qaoa(g, AnsatzSpec("lc", 1, find_chain(g)), maxcut=maxcut).expected_ar)
            orig.append(optimize_qaoa(g, AnsatzSpec("original", 1), maxcut=maxcut).expected_ar)
        b, l, o = (float(np.mean(v)) for v in (base, lc, orig))
        ok &= b < l <= o + TREND_SLACK
        rows.append((d, round(b, 4), round(l, 4), round(o, 4)))
    detail = "per d (baseline, LC_1, original_1): " + "; ".join(f"d={d}: {b}, {l}, {o}" for d, b, l, o in rows)
    return ok, detail, rows


def criterion_6():
    fractions = (0.0, 0.25, 1.0)
    expected = {f: [] for f in fractions}
    sampled = {f: [] for f in fractions}
    base = []
    for seed in range(10):
        g = generate_random_regular(16, 3, seed)
        maxcut = exact_maxcut(g).value
        base.append(g.total_weight / 2 / maxcut)
        chain = find_chain(g)
        for f in fractions:
            r = optimize_qaoa(g, AnsatzSpec("lc", 1, chain_prefix(chain, f)), maxcut=maxcut, sample_seed=seed)
            expected[f].append(r.expected_ar)
            sampled[f].append(r.mean_ar)
    b = float(np.mean(base))
    e = {f: float(np.mean(v)) for f, v in expected.items()}
    s = {f: float(np.mean(v)) for f, v in sampled.items()}
    ok = all(abs(m[0.0] - b) <= TREND_SLACK and m[1.0] - m[0.25] >= FRACTION_GAP for m in (e, s))
    detail = (f"baseline {b:.4f}; AR at fraction 0/0.25/1: expectation {e[0.0]:.4f}/{e[0.25]:.4f}/{e[1.0]:.4f}, "
              f"1024-shot {s[0.0]:.4f}/{s[0.25]:.4f}/{s[1.0]:.4f}")
    return ok, detail, (b, e, s)


def criterion_7():
    ladders = []
    ok = True
    for seed in range(5):
        g = generate_random_regular(12, 3, seed)
        ars = [r.expected_ar for r in fourier_ladder(g, AnsatzSpec("original", 3))]
        ok &= all(b >= a - TREND_SLACK for a, b in zip(ars, ars[1:]))
        ladders.append([round(a, 4) for a in ars])
    rng = np.random.default_rng(0)
    worst = 0.0
    for p in range(1, 9):
        s = ParamSchedule(tuple(rng.uniform(-2, 2, p)), tuple(rng.uniform(-2, 2, p)))
        back = fourier_to_params(params_to_fourier(s), p)
        worst = max(worst, float(np.abs(back.to_vector() - s.to_vector()).max()))
    ok &= worst <= 1e-10
    return ok, f"AR(p=1,2,3) per instance {ladders}; Fourier round-trip error {worst:.1e}", (ladders, worst)


def criterion_8():
    exact_hits = 0
    strings = 0
    violations = 0
    best = []
    for k in range(10):
        n = (10, 12, 14, 16)[k % 4]
        g = generate_random_regular(n, 3, 200 + k)
        maxcut = exact_maxcut(g).value
        r = optimize_qaoa(g, AnsatzSpec("lc", 1, find_chain(g)), maxcut=maxcut, shots=1024, sample_seed=k)
        _, summary, results = post_process_set(g, r.samples, maxcut)
        exact_hits += summary.best_ar_after == 1.0
        best.append(summary.best_ar_after)
        for res in results.values():
            strings += 1
            if res.output_cut < res.input_cut or not is_one_flip_maximal(g, res.output):
                violations += 1
    ok = exact_hits >= 9 and violations == 0
    return ok, (f"post-processed best AR = 1 on {exact_hits}/10 instances; "
                f"{violations} violations over {strings} processed strings"), (best, strings, violations)


def criterion_9():
    spec = NoiseSpec(p1=0.001, p2=0.01, trajectories=64)
    wins = 0
    pairs = []
    for seed in range(10):
        g = generate_random_regular(12, 3, seed)
        maxcut = exact_maxcut(g).value
        orig = optimize_qaoa(g, AnsatzSpec("original", 1), maxcut=maxcut, noise=spec, cmap=linear_map(12),
                             sample_seed=seed)
        lc = optimize_qaoa(g, AnsatzSpec("lc", 1, find_chain(g)), maxcut=maxcut, noise=spec, cmap=linear_map(12),
                           sample_seed=seed)
        wins += orig.mean_ar <= lc.mean_ar
        pairs.append((round(orig.mean_ar, 4), round(lc.mean_ar, 4)))
    return wins >= 7, f"routed original <= LC sampled mean AR on {wins}/10 seeds {pairs}", pairs


CHECKS = {
    1: ("oracle equivalence", criterion_1, 60),
    2: ("Ising identity and exact MaxCut", criterion_2, 120),
    3: ("single-edge QAOA_1 optimum", criterion_3, 10),
    4: ("gate-count and duration scaling", criterion_4, 60),
    5: ("LC vs original AR direction", criterion_5, 1800),
    6: ("chain fraction study", criterion_6, 1200),
    7: ("FOURIER ladder", criterion_7, 1200),
    8: ("bit-flip post-processing", criterion_8, 900),
    9: ("noise contrast", criterion_9, 1800),
}

FIRST_RUN: dict[int, object] = {}


def evaluate(k):
    name, check, limit = CHECKS[k]
    started = time.perf_counter()
    passed, detail, data = check()
    elapsed = time.perf_counter() - started
    passed = passed and elapsed < limit
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {k} ({name}): {detail} [{elapsed:.1f} s, limit {limit} s]"
    return passed, line, data


def record(line):
    ACCEPTANCE_LINES.append(line)
    print(line)


@pytest.mark.parametrize("k", sorted(CHECKS))
def test_criterion(k):
    passed, line, data = evaluate(k)
    FIRST_RUN[k] = data
    record(line)
    assert passed, line


def test_criterion_10_determinism():
    mismatched = []
    for k in sorted(CHECKS):
        first = FIRST_RUN.get(k)
        if first is None:
            first = CHECKS[k][1]()[2]
        again = CHECKS[k][1]()[2]
        if repr(first) != repr(again):
            mismatched.append(k)
    passed = not mismatched
    record(f"[{'PASS' if passed else 'FAIL'}] criterion 10 (determinism): reran criteria 1-9, "
           f"{'all bit-identical' if passed else f'differences in {mismatched}'}")
    assert passed


if __name__ == "__main__":
    import sys

    sys.path.insert(0, __file__.rsplit("/", 1)[0])
    results = []
    for k in sorted(CHECKS):
        passed, line, data = evaluate(k)
        FIRST_RUN[k] = data
        print(line, flush=True)
        results.append(passed)
    try:
        test_criterion_10_determinism()
        results.append(True)
    except AssertionError:
        results.append(False)
    sys.exit(0 if all(results) else 1)
