"""Time the compiled and pure-Python kernel backends on the same inputs.

    python3 benchmarks/bench_kernels.py [--n 16] [--repeat 5]

Prints one row per kernel with the best-of-``repeat`` time for each backend
and the speedup. Outputs are compared so a timing row is only printed for
kernels that agree.
"""

import argparse
import timeit

import numpy as np

from lcqaoa._kernels import available_backends, get_backend
from lcqaoa.graph import _edge_arrays, exact_maxcut, generate_random_regular


def cases(n):
    g = generate_random_regular(n, 3, seed=0, weighted=True)
    us, vs, ws = _edge_arrays(g)
    indptr, nbrs, weights = g.csr
    rng = np.random.default_rng(0)
    psi = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    psi /= np.linalg.norm(psi)
    c, s = np.cos(0.3), np.sin(0.3)
    bits = rng.integers(0, 2, size=(64, n)).astype(np.int8)
    order = np.arange(n, dtype=np.int_)
    diag = get_backend("python").build_diagonal(n, us, vs, ws)
    incumbent = exact_maxcut(g).value * 0.9

    def rx_all(k):
        state = psi.copy()
        k.apply_1q_all(state, n, c, -1j * s, -1j * s, c)
        return state

    def rzz_layer(k):
        state = psi.copy()
        for a, b, w in zip(us, vs, ws):
            k.apply_rzz(state, n, int(a), int(b), 0.7 * w)
        return state

    def flips(k):
        out = bits.copy()
        for row in out:
            k.bit_flip_sweep(indptr, nbrs, weights, row, order)
        return out

    def bnb(k):
        best = np.zeros(n, dtype=np.int8)
        return k.maxcut_bnb(n, indptr, nbrs, weights, incumbent, best, 1e-9)

    return {
        "build_diagonal": lambda k: k.build_diagonal(n, us, vs, ws),
        "apply_1q_all (RX)": rx_all,
        "apply_rzz x |E|": rzz_layer,
        "expectation_diag": lambda k: k.expectation_diag(psi, diag),
        "bit_flip_sweep x 64": flips,
        "maxcut_bnb": bnb,
    }


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    return np.allclose(np.asarray(a), np.asarray(b), atol=1e-10)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=16)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    names = available_backends()
    if "cython" not in names:
        print("compiled backend not built; only the Python fallback is available")
    kernels = {name: get_backend(name) for name in names}
    print(f"n = {args.n}, best of {args.repeat}")
    print(f"{'kernel':22s}" + "".join(f"{name:>12s}" for name in names) + ("     speedup" if len(names) > 1 else ""))
    for label, fn in cases(args.n).items():
        outputs = {name: fn(k) for name, k in kernels.items()}
        if len(names) > 1 and not same(outputs["cython"], outputs["python"]):
            print(f"{label:22s}  MISMATCH between backends")
            continue
        times = {name: min(timeit.repeat(lambda k=k: fn(k), number=1, repeat=args.repeat))
                 for name, k in kernels.items()}
        row = f"{label:22s}" + "".join(f"{times[name] * 1e3:10.3f}ms" for name in names)
        if len(names) > 1:
            row += f"{times['python'] / times['cython']:11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
