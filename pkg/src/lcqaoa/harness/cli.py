"""Command line: ``lcqaoa {gen,chain,metrics,solve,sweep,postprocess}``.

Flags mirror config fields; ``--config FILE`` loads an INI file first and
flags given on the command line override it. Exit codes: 0 success, 2
configuration error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from ..errors import ConfigError, LCQAOAError
from ..graph import graph_from_json, graph_to_json
from ..postprocess import post_process_set
from ..simulator import samples_from_csv
from .config import FIELD_PATHS, OUTPUT_ENV, _coerce, config_from_mapping, load_config
from .run import circuit_metrics, coupling_for, emit_report, extract_chain, load_instance, run_solve, run_sweep

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 2, 3

S = argparse.SUPPRESS


def _instance_flags(p):
    g = p.add_argument_group("instance")
    g.add_argument("--n", type=int, default=S, help="vertex count")
    g.add_argument("--d", type=int, default=S, help="degree")
    g.add_argument("--seed", type=int, default=S, help="instance seed")
    g.add_argument("--weighted", action="store_const", const=True, default=S)
    g.add_argument("--graph", dest="graph_file", default=S, help="graph JSON file instead of generating")


def _chain_flags(p):
    g = p.add_argument_group("chain")
    g.add_argument("--chain-restarts", dest="chain_restarts", type=int, default=S)
    g.add_argument("--chain-seed", dest="chain_seed", type=int, default=S)
    g.add_argument("--fraction", type=float, default=S, help="share of chain edges used by the LC ansatz")


def _ansatz_flags(p):
    g = p.add_argument_group("ansatz")
    g.add_argument("--ansatz", choices=("original", "lc"), default=S)
    g.add_argument("--p", type=int, default=S, help="QAOA depth")
    g.add_argument("--coupling", default=S, help="'linear' or 'heavy_hex:RxC'")


def _run_flags(p):
    g = p.add_argument_group("run")
    g.add_argument("--mode", choices=("exact", "shots"), default=S)
    g.add_argument("--shots", type=int, default=S)
    g.add_argument("--mode-seed", dest="mode_seed", type=int, default=S, help="objective sampling seed")
    g.add_argument("--sample-seed", dest="sample_seed", type=int, default=S, help="final sampling seed")
    g.add_argument("--p1", type=float, default=S, help="one-qubit depolarizing probability")
    g.add_argument("--p2", type=float, default=S, help="two-qubit depolarizing probability")
    g.add_argument("--trajectories", type=int, default=S)
    g.add_argument("--tol", type=float, default=S)
    g.add_argument("--max-iter", dest="max_iter", type=int, default=S)
    g.add_argument("--restarts", type=int, default=S)
    g.add_argument("--fourier-ladder", dest="fourier_ladder", action="store_const", const=True, default=S)
    g.add_argument("--no-postprocess", dest="postprocess", action="store_const", const=False, default=S)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lcqaoa", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, help, *groups):
        p = sub.add_parser(name, help=help)
        p.add_argument("--config", help="INI config file")
        p.add_argument("--output", default=S, help=f"output directory (default ${OUTPUT_ENV} or .)")
        for add in groups:
            add(p)
        return p

    command("gen", "generate a random regular graph", _instance_flags)
    command("chain", "extract a long chain from a graph", _instance_flags, _chain_flags)
    command("metrics", "gate counts, depth and duration of both ansatze", _instance_flags, _chain_flags,
            _ansatz_flags)
    command("solve", "run the full variational loop", _instance_flags, _chain_flags, _ansatz_flags, _run_flags)
    sweep = command("sweep", "repeat solves over one varied field", _instance_flags, _chain_flags,
                    _ansatz_flags, _run_flags)
    sweep.add_argument("--vary", required=True, help="FIELD=V1,V2,... (e.g. n=8,12,16)")
    sweep.add_argument("--repeats", type=int, default=1)
    sweep.add_argument("--workers", type=int, default=1)
    sweep.add_argument("--metrics-only", action="store_true")
    sweep.add_argument("--paired", action="store_true", help="same instance seeds for every variant")
    pp = sub.add_parser("postprocess", help="bit-flip local search over a sample CSV")
    pp.add_argument("--graph", required=True, help="graph JSON file")
    pp.add_argument("--samples", required=True, help="CSV of bitstring,count")
    pp.add_argument("--order-seed", type=int, default=None, help="random scan order (default ascending)")
    pp.add_argument("--output", default=S)
    return parser


def _config(args, **overrides):
    base = load_config(args.config) if getattr(args, "config", None) else None
    given = {k: v for k, v in vars(args).items() if k in FIELD_PATHS}
    given.update(overrides)
    return config_from_mapping(given, base)


def _out_dir(args) -> str | None:
    return getattr(args, "output", None) or os.environ.get(OUTPUT_ENV)


def _write(out_dir, name, text) -> str:
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, name)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return path


def _emit(args, name, text):
    out = _out_dir(args)
    if out is None:
        sys.stdout.write(text)
    else:
        print(_write(out, name, text))


def cmd_gen(args):
    cfg = _config(args)
    g = load_instance(cfg)
    _emit(args, f"graph_n{g.n}_d{cfg.d}_s{cfg.seed}.json", graph_to_json(g) + "\n")


def cmd_chain(args):
    cfg = _config(args, ansatz="lc")
    g = load_instance(cfg)
    full, used = extract_chain(cfg, g)
    doc = {"vertices": list(full.vertices), "length": full.num_edges, "used": list(used.vertices),
           "used_length": used.num_edges, "hamiltonian": len(full) == g.n}
    _emit(args, "chain.json", json.dumps(doc, indent=1) + "\n")


def cmd_metrics(args):
    cfg = _config(args, ansatz="lc") if getattr(args, "ansatz", "lc") == "lc" else _config(args)
    g = load_instance(cfg)
    _, chain = extract_chain(cfg, g)
    m = circuit_metrics(g, chain, cfg.p, coupling_for(cfg, g.n))
    _emit(args, "metrics.json", json.dumps(m, indent=1, sort_keys=True) + "\n")


def cmd_solve(args):
    cfg = _config(args)
    report = run_solve(cfg)
    paths = emit_report(report, "json", cfg.output_dir()) + emit_report(report, "csv", cfg.output_dir())
    d = report.to_dict()
    print(f"maxcut={d['true_maxcut']:g} expected_ar={d['expected_ar']:.4f} mean_ar={d['mean_ar']:.4f} "
          f"best_ar={d['best_ar']:.4f} mean_ar_post={d['mean_ar_post']} iterations={d['iterations']}")
    for path in paths:
        print(path)


def cmd_sweep(args):
    field, _, raw = args.vary.partition("=")
    if not raw:
        raise ConfigError("vary", f"expected FIELD=V1,V2,..., got {args.vary!r}")
    name = field if field in FIELD_PATHS else {v: k for k, v in FIELD_PATHS.items()}.get(field)
    if name is None:
        raise ConfigError("vary", f"unknown field {field!r}")
    values = [_coerce(name, v) for v in raw.split(",")]
    cfg = _config(args)
    result = run_sweep(cfg, name, values, args.repeats, workers=args.workers,
                       metrics_only=args.metrics_only, paired=args.paired)
    print(_write(cfg.output_dir(), f"sweep_{name}.csv", result.to_csv()))
    failed = sum(1 for r in result.rows if r.get("status") == "error")
    if failed:
        print(f"{failed} rows failed", file=sys.stderr)


def cmd_postprocess(args):
    with open(args.graph, encoding="utf-8") as fh:
        g = graph_from_json(fh.read())
    with open(args.samples, encoding="utf-8") as fh:
        samples = samples_from_csv(fh.read())
    processed, summary, _ = post_process_set(g, samples, order_seed=args.order_seed)
    out = _out_dir(args) or "."
    print(_write(out, "samples_post.csv", "bitstring,count\n" + processed.to_csv()))
    print(json.dumps(summary.to_dict(), sort_keys=True))


COMMANDS = {"gen": cmd_gen, "chain": cmd_chain, "metrics": cmd_metrics, "solve": cmd_solve,
            "sweep": cmd_sweep, "postprocess": cmd_postprocess}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (LCQAOAError, OSError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
