"""End-to-end runs, parameter sweeps and report files."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .. import __version__
from ..circuit import (CouplingMap, build_lc_ansatz, build_original_ansatz, chain_layout, heavy_hex_like,
                       linear_map, metrics, route_greedy)
from ..errors import ConfigError, LCQAOAError
from ..graph import Chain, Graph, chain_prefix, cut_value, exact_maxcut, find_chain, generate_random_regular, load_graph
from ..ising import build_diagonal, build_ising
from ..postprocess import post_process_set
from ..simulator import NoiseSpec, SampleSet
from ..vqa import AnsatzSpec, Mode, QAOAResult, fourier_ladder, optimize_qaoa
from .config import FIELD_PATHS, ExperimentConfig, coupling_dims

SCHEMA_VERSION = "1.0"
BIN_WIDTH = 0.01
NUM_BINS = 100


# -- pieces ---------------------------------------------------------------------------

def load_instance(cfg: ExperimentConfig) -> Graph:
    if cfg.graph_file is not None:
        return load_graph(cfg.graph_file)
    return generate_random_regular(cfg.n, cfg.d, cfg.seed, weighted=cfg.weighted)


def extract_chain(cfg: ExperimentConfig, g: Graph) -> tuple[Chain, Chain]:
    """The full extracted chain and the prefix actually used by the ansatz."""
    full = find_chain(g, cfg.chain_restarts, cfg.chain_seed)
    return full, chain_prefix(full, cfg.fraction)


def coupling_for(cfg: ExperimentConfig, n: int) -> CouplingMap:
    dims = coupling_dims(cfg.coupling)
    if dims is None:
        return linear_map(n)
    cmap = heavy_hex_like(*dims)
    if cmap.num_qubits < n:
        raise ConfigError(FIELD_PATHS["coupling"], f"{cmap.num_qubits} physical qubits < n={n}")
    return cmap


def histogram(g: Graph, s: SampleSet, maxcut: float) -> list[int]:
    """Shot counts per AR bin ``[k/100, (k+1)/100)``; AR = 1 falls in the last bin."""
    bins = [0] * NUM_BINS
    for x, k in s.items():
        ar = cut_value(g, x) / maxcut
        bins[min(math.floor(ar / BIN_WIDTH + 1e-9), NUM_BINS - 1)] += k
    return bins


def circuit_metrics(g: Graph, chain: Chain | None, p: int, cmap: CouplingMap) -> dict:
    """Logical and routed metrics for the original ansatz and (with a chain) the LC ansatz."""
    out = {}
    original = build_original_ansatz(g, p)
    out["original"] = metrics(original).to_dict()
    out["original_routed"] = metrics(route_greedy(original, cmap)).to_dict()
    if chain is not None:
        lc = build_lc_ansatz(chain, g.n, p)
        out["lc"] = metrics(lc).to_dict()
        out["lc_routed"] = metrics(route_greedy(lc, cmap, chain_layout(chain, cmap, g.n))).to_dict()
    return out


# -- solve ----------------------------------------------------------------------------

@dataclass
class Report:
    config: dict
    graph: dict
    true_maxcut: float
    baseline_ar: float
    chain: list[int] | None
    metrics: dict
    levels: list[dict]
    seeds: dict
    wall_time: float = field(default=0.0, compare=False)
    samples: SampleSet | None = field(default=None, compare=False, repr=False)

    @property
    def final(self) -> dict:
        return self.levels[-1]

    @property
    def mean_ar(self) -> float:
        return self.final["mean_ar"]

    @property
    def best_ar(self) -> float:
        return self.final["best_ar"]

    @property
    def expected_ar(self) -> float:
        return self.final["expected_ar"]

    def to_dict(self) -> dict:
        final = self.final
        return {
            "schema_version": SCHEMA_VERSION,
            "artifact_version": __version__,
            "config": self.config,
            "graph": self.graph,
            "true_maxcut": self.true_maxcut,
            "baseline_ar": self.baseline_ar,
            "chain": self.chain,
            "chain_length": None if self.chain is None else max(len(self.chain) - 1, 0),
            "metrics": self.metrics,
            "p": final["p"],
            "expected_ar": final["expected_ar"],
            "mean_ar": final["mean_ar"],
            "best_ar": final["best_ar"],
            "mean_ar_post": final["mean_ar_post"],
            "best_ar_post": final["best_ar_post"],
            "iterations": final["optimizer"]["iterations"],
            "levels": self.levels,
            "seeds": self.seeds,
            "wall_time": self.wall_time,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def _level_entry(g: Graph, r: QAOAResult, postprocess: bool) -> dict:
    entry = {
        "p": r.p,
        "optimizer": r.run.to_dict(),
        "expected_cut": r.expected_cut,
        "expected_ar": r.expected_ar,
        "mean_ar": r.mean_ar,
        "best_ar": r.best_ar,
        "distinct_samples": len(r.samples.counts),
        "histogram": histogram(g, r.samples, r.maxcut),
    }
    if postprocess:
        processed, summary, _ = post_process_set(g, r.samples, r.maxcut)
        entry.update(mean_ar_post=summary.mean_ar_after, best_ar_post=summary.best_ar_after,
                     histogram_post=histogram(g, processed, r.maxcut))
    else:
        entry.update(mean_ar_post=None, best_ar_post=None, histogram_post=None)
    return entry


def run_solve(cfg: ExperimentConfig) -> Report:
    """generate or load, extract chain (lc), build ansatz, optimise, sample, post-process."""
    started = time.perf_counter()
    g = load_instance(cfg)
    maxcut = exact_maxcut(g).value
    chain = None
    if cfg.ansatz == "lc":
        _, chain = extract_chain(cfg, g)
    spec = AnsatzSpec(cfg.ansatz, cfg.p, chain)
    mode = Mode(cfg.mode, cfg.shots, cfg.mode_seed)
    cmap = coupling_for(cfg, g.n)
    noise = NoiseSpec(cfg.p1, cfg.p2, cfg.trajectories) if cfg.noisy else None
    kwargs = dict(max_iter=cfg.max_iter, restarts=cfg.restarts, restart_seed=cfg.seed, shots=cfg.shots,
                  sample_seed=cfg.sample_seed, maxcut=maxcut, noise=noise, cmap=cmap,
                  cost=build_diagonal(build_ising(g)))
    if cfg.fourier_ladder:
        results = fourier_ladder(g, spec, mode, cfg.tol, **kwargs)
    else:
        results = [optimize_qaoa(g, spec, mode, cfg.tol, **kwargs)]
    levels = [_level_entry(g, r, cfg.postprocess) for r in results]
    report = Report(
        config=cfg.to_dict(),
        graph={"n": g.n, "num_edges": g.num_edges, "total_weight": g.total_weight,
               "weighted": g.is_weighted, "meta": dict(g.meta)},
        true_maxcut=maxcut,
        baseline_ar=g.total_weight / 2 / maxcut,
        chain=None if chain is None else list(chain.vertices),
        metrics=circuit_metrics(g, chain, cfg.p, cmap),
        levels=levels,
        seeds={"instance": cfg.seed, "chain": cfg.chain_seed, "mode": cfg.mode_seed,
               "sample": cfg.sample_seed},
        samples=results[-1].samples,
    )
    report.wall_time = time.perf_counter() - started
    return report


# -- reports --------------------------------------------------------------------------

LEVEL_COLUMNS = ["p", "iterations", "converged", "final_value", "expected_ar", "mean_ar", "best_ar",
                 "mean_ar_post", "best_ar_post", "distinct_samples"]


def report_csv(r: Report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(LEVEL_COLUMNS)
    for lv in r.levels:
        opt = lv["optimizer"]
        w.writerow([lv["p"], opt["iterations"], opt["converged"], opt["final_value"], lv["expected_ar"],
                    lv["mean_ar"], lv["best_ar"], lv["mean_ar_post"], lv["best_ar_post"],
                    lv["distinct_samples"]])
    return buf.getvalue()


def histogram_csv(r: Report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["bin_lo", "bin_hi", "count", "count_post"])
    post = r.final["histogram_post"] or [""] * NUM_BINS
    for k, (a, b) in enumerate(zip(r.final["histogram"], post)):
        w.writerow([f"{k * BIN_WIDTH:.2f}", f"{(k + 1) * BIN_WIDTH:.2f}", a, b])
    return buf.getvalue()


def emit_report(r: Report, fmt: str, out_dir: str, stem: str = "report") -> list[str]:
    """Write ``stem.json`` or ``stem.csv`` + ``stem_histogram.csv`` + ``stem_samples.csv``."""
    if fmt not in ("json", "csv"):
        raise ValueError(f"format must be 'json' or 'csv', got {fmt!r}")
    os.makedirs(out_dir, exist_ok=True)
    if fmt == "json":
        files = {f"{stem}.json": r.to_json()}
    else:
        files = {f"{stem}.csv": report_csv(r), f"{stem}_histogram.csv": histogram_csv(r)}
        if r.samples is not None:
            files[f"{stem}_samples.csv"] = "bitstring,count\n" + r.samples.to_csv()
    paths = []
    for name, text in files.items():
        path = os.path.join(out_dir, name)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        paths.append(path)
    return paths


# -- sweeps ---------------------------------------------------------------------------

SWEEP_METRICS = ["two_qubit_count", "depth", "duration", "swap_count"]
SWEEP_COLUMNS = (
    ["row", "status", "variant", "field", "value", "repeat", "seed", "n", "d", "p", "fraction",
     "num_edges", "chain_length"]
    + [f"{kind}_{m}" for kind in ("original", "original_routed", "lc", "lc_routed") for m in SWEEP_METRICS]
    + ["true_maxcut", "baseline_ar", "expected_ar", "mean_ar", "best_ar", "mean_ar_post", "best_ar_post",
       "iterations", "error"]
)
NUMERIC = SWEEP_COLUMNS[SWEEP_COLUMNS.index("n"):-1]


@dataclass
class SweepResult:
    field: str
    values: list
    repeats: int
    rows: list[dict]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, SWEEP_COLUMNS, lineterminator="\n", restval="")
        w.writeheader()
        for row in self.rows:
            w.writerow({k: _cell(v) for k, v in row.items()})
        return buf.getvalue()


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return v


def sweep_seed(template_seed: int, variant: int, repeat: int, repeats: int) -> int:
    """Injective over ``(variant, repeat)`` for ``0 <= repeat < repeats``."""
    return template_seed + variant * repeats + repeat


def _sweep_task(args) -> dict:
    cfg, metrics_only, row = args
    try:
        g = load_instance(cfg)
        _, chain = extract_chain(cfg, g)
        m = circuit_metrics(g, chain, cfg.p, coupling_for(cfg, g.n))
        for kind, values in m.items():
            for name in SWEEP_METRICS:
                row[f"{kind}_{name}"] = values[name]
        row.update(n=g.n, num_edges=g.num_edges, chain_length=chain.num_edges)
        if not metrics_only:
            rep = run_solve(cfg)
            d = rep.to_dict()
            row.update({k: d[k] for k in ("true_maxcut", "baseline_ar", "expected_ar", "mean_ar", "best_ar",
                                          "mean_ar_post", "best_ar_post", "iterations")})
        row["status"] = "ok"
    except (LCQAOAError, ValueError, ArithmeticError, MemoryError) as exc:
        row.update(status="error", error=f"{type(exc).__name__}: {exc}")
    return row


def run_sweep(template: ExperimentConfig, vary: str, values, repeats: int = 1, *, workers: int = 1,
              metrics_only: bool = False, paired: bool = False) -> SweepResult:
    """One row per ``(variant, repeat)`` then a ``mean`` and a ``std`` row per variant.

    Instance and sampling seeds are ``sweep_seed(template seed, variant, repeat)``;
    with ``paired`` the instance seed depends on the repeat only, so every
    variant sees the same instances.
    """
    name = vary if vary in FIELD_PATHS else {v: k for k, v in FIELD_PATHS.items()}.get(vary)
    if name is None or name in ("seed", "sample_seed", "output"):
        raise ConfigError(vary, "cannot be swept")
    if repeats < 1:
        raise ConfigError("repeats", "must be >= 1")
    values = list(values)
    tasks = []
    for i, value in enumerate(values):
        for r in range(repeats):
            seed = sweep_seed(template.seed, i, r, repeats)
            row = {"row": len(tasks), "variant": i, "field": FIELD_PATHS[name], "value": value, "repeat": r,
                   "seed": template.seed + r if paired else seed}
            try:
                cfg = template.replace(**{name: value, "seed": row["seed"],
                                          "sample_seed": template.sample_seed + seed})
            except LCQAOAError as exc:
                row.update(status="error", error=f"{type(exc).__name__}: {exc}")
                tasks.append((None, metrics_only, row))
                continue
            row.update(d=cfg.d, p=cfg.p, fraction=cfg.fraction if cfg.ansatz == "lc" else None)
            tasks.append((cfg, metrics_only, row))
    runnable = [t for t in tasks if t[0] is not None]
    if workers > 1 and len(runnable) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            done = list(pool.map(_sweep_task, runnable))
    else:
        done = [_sweep_task(t) for t in runnable]
    by_row = {row["row"]: row for row in done}
    rows = [by_row.get(t[2]["row"], t[2]) for t in tasks]
    out = []
    for i, value in enumerate(values):
        block = [r for r in rows if r["variant"] == i]
        out.extend(block)
        out.extend(_aggregate(block, i, FIELD_PATHS[name], value))
    return SweepResult(FIELD_PATHS[name], values, repeats, out)


def _aggregate(block: list[dict], variant: int, field_path: str, value) -> list[dict]:
    ok = [r for r in block if r.get("status") == "ok"]
    mean = {"row": None, "status": "mean", "variant": variant, "field": field_path, "value": value}
    std = {"row": None, "status": "std", "variant": variant, "field": field_path, "value": value}
    for col in NUMERIC:
        xs = [float(r[col]) for r in ok if r.get(col) is not None]
        mean[col] = statistics.fmean(xs) if xs else None
        std[col] = statistics.stdev(xs) if len(xs) > 1 else None
    if len(ok) < len(block):
        mean["error"] = std["error"] = f"{len(block) - len(ok)} of {len(block)} rows failed"
    return [mean, std]
