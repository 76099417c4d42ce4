"""Command-line entry point: ``crossmetric <command> [options]``.

Instances are read as JSON from ``--file`` or stdin.  Every command except
``gen`` and ``render`` prints a JSON report on stdout; diagnostics and
``--trace`` events go to stderr.
"""
from __future__ import annotations

import argparse
import base64
import json
import os
import statistics
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .ann import AnnConfig, mst_via_embedding
from .approx import SamplingConfig, approx_mst
from .embedding import EmbeddingConfig, embed_points, plan_embedding
from .errors import CrossMetricError
from .forest import SpanningForest
from .geometry import Instance, from_json, generate_instance, to_json
from .mst_exact import mst_bruteforce, mst_wavefront
from .render import render_svg
from .seeding import derive_seed

ALGORITHMS = ("wavefront", "approx", "ann")


def default_seed() -> int:
    return int(os.environ.get("CROSSMETRIC_SEED", "0"))


def read_instance(args) -> Instance:
    if args.file:
        with open(args.file) as fh:
            return from_json(fh.read())
    return from_json(sys.stdin.read())


def emit_trace(args):
    if not args.trace:
        return None

    def trace(event: dict) -> None:
        print(json.dumps(event, sort_keys=True), file=sys.stderr, flush=True)

    return trace


def ratio(weight: int, oracle: int) -> float | None:
    if oracle == 0:
        return 1.0 if weight == 0 else None
    return weight / oracle


def sampling_config(args, seed: int) -> SamplingConfig:
    return SamplingConfig(eps=args.epsilon, c_samp=args.c_samp, c_short=args.c_short, c_prop=args.c_prop,
                          c_est=args.c_est, seed=seed)


def run_algorithm(name: str, inst: Instance, args, seed: int, trace=None) -> dict:
    if name == "bruteforce":
        return {"forest": mst_bruteforce(inst).to_dict()}
    if name == "wavefront":
        return {"forest": mst_wavefront(inst).to_dict()}
    if name == "approx":
        res = approx_mst(inst, sampling_config(args, seed), trace=trace)
        return {"forest": res.forest.to_dict(), "M": res.M, "l0": res.l0,
                "stages": [s.to_dict() for s in res.stages]}
    if name == "ann":
        res = mst_via_embedding(inst, args.epsilon, AnnConfig(seed=seed))
        if trace:
            for rnd in res.rounds:
                trace({"event": "round", **rnd})
        return {"forest": res.forest.to_dict(), "ladder": res.ladder, "rounds": res.rounds,
                "eps_effective": res.eps_effective,
                "ladder_reading": "thresholds scanned upward with independent embeddings per rung"}
    raise ValueError(f"unknown algorithm {name!r}")


def cmd_gen(args) -> None:
    inst = generate_instance(args.dim, args.points, args.lines, args.range, args.seed)
    sys.stdout.write(to_json(inst) + "\n")


def mst_report(name: str):
    def run(args) -> dict:
        inst = read_instance(args)
        algo = getattr(args, "algo", None) or name
        out = run_algorithm(algo, inst, args, args.seed, emit_trace(args))
        out["weight"] = out["forest"]["weight"]
        if getattr(args, "oracle", False):
            out["ratio_vs_oracle"] = ratio(out["weight"], mst_bruteforce(inst).weight)
        return {"instance": inst, "parameters": {"algo": algo, **params(args)}, "outputs": out}

    return run


def cmd_embed(args) -> dict:
    inst = read_instance(args)
    spec = plan_embedding(inst, args.r, args.epsilon, EmbeddingConfig(seed=args.seed), strict=not args.allow_degenerate)
    e = embed_points(inst, spec)
    labels = np.ascontiguousarray(e.labels, dtype="<u8")
    return {
        "instance": inst,
        "parameters": params(args),
        "outputs": {
            "spec": spec.to_dict(),
            "labels": base64.b64encode(labels.tobytes()).decode(),
            "labels_shape": list(labels.shape),
            "binary": base64.b64encode(e.packed_binary.tobytes()).decode(),
            "binary_shape": list(e.binary.shape),
        },
    }


def _trial(job) -> dict:
    inst_json, algos, ns, seed = job
    inst = from_json(inst_json)
    args = argparse.Namespace(**ns)
    oracle = mst_bruteforce(inst).weight
    row = {"seed": seed, "oracle": oracle}
    for name in algos:
        w = run_algorithm(name, inst, args, seed)["forest"]["weight"]
        row[name] = {"weight": w, "ratio": ratio(w, oracle)}
    return row


def cmd_compare(args) -> dict:
    inst = read_instance(args)
    algos = [a for a in args.algos.split(",") if a]
    for a in algos:
        if a not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {a!r}; choose from {', '.join(ALGORITHMS)}")
    ns = {k: v for k, v in vars(args).items() if k != "func"}
    jobs = [(to_json(inst), algos, ns, derive_seed(args.seed, "trial", t)) for t in range(args.trials)]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            rows = list(pool.map(_trial, jobs))
    else:
        rows = [_trial(j) for j in jobs]
    trace = emit_trace(args)
    if trace:
        for t, row in enumerate(rows):
            trace({"event": "trial", "index": t, **row})
    summary = {}
    for a in algos:
        rs = [row[a]["ratio"] for row in rows]
        finite = [r for r in rs if r is not None]
        summary[a] = {
            "ratios": rs,
            "median_ratio": statistics.median(finite) if finite else None,
            "max_ratio": max(finite) if finite else None,
            "success_fraction": sum(r is not None and r <= args.ratio_bound for r in rs) / len(rs) if rs else None,
        }
    return {"instance": inst, "parameters": params(args),
            "outputs": {"oracle_weight": rows[0]["oracle"] if rows else mst_bruteforce(inst).weight,
                        "trials": rows, "summary": summary}}


def cmd_render(args) -> None:
    inst = read_instance(args)
    forest = None
    if args.mst != "none":
        algo = "bruteforce" if args.mst == "exact" else args.mst
        forest_dict = run_algorithm(algo, inst, args, args.seed)["forest"]
        forest = SpanningForest(inst.n)
        for a, b, w in forest_dict["edges"]:
            forest.add_edge(a, b, w)
    sys.stdout.write(render_svg(inst, forest))


def cmd_bench(args) -> dict:
    rows = []
    for size in (int(s) for s in args.sizes.split(",") if s):
        inst = generate_instance(2, size, size, args.range, derive_seed(args.seed, "bench", size))
        row = {"n": size, "m": size}
        for name in ["bruteforce", *ALGORITHMS]:
            t0 = time.perf_counter()
            w = run_algorithm(name, inst, args, args.seed)["forest"]["weight"]
            row[name] = {"weight": w, "seconds": round(time.perf_counter() - t0, 4)}
        rows.append(row)
    return {"instance": None, "parameters": params(args), "outputs": {"runs": rows}}


def params(args) -> dict:
    skip = {"func", "command", "file", "trace", "seed"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=default_seed(), help="master seed (default $CROSSMETRIC_SEED or 0)")
    common.add_argument("--trace", action="store_true", help="JSON-lines progress events on stderr")

    source = argparse.ArgumentParser(add_help=False)
    source.add_argument("--file", help="instance JSON (default: stdin)")

    eps = argparse.ArgumentParser(add_help=False)
    eps.add_argument("--epsilon", type=float, default=0.5)

    knobs = argparse.ArgumentParser(add_help=False)
    defaults = SamplingConfig()
    knobs.add_argument("--c-samp", type=float, default=defaults.c_samp)
    knobs.add_argument("--c-short", type=float, default=defaults.c_short)
    knobs.add_argument("--c-prop", type=float, default=defaults.c_prop)
    knobs.add_argument("--c-est", type=float, default=defaults.c_est)

    parser = argparse.ArgumentParser(prog="crossmetric", description="Minimum spanning trees under the line-crossing metric.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="generate a random instance")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--points", type=int, default=50)
    p.add_argument("--lines", type=int, default=50)
    p.add_argument("--range", type=int, default=1000)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("exact-mst", parents=[common, source, eps, knobs], help="exact MST")
    p.add_argument("--algo", choices=["wavefront", "bruteforce"], default="wavefront")
    p.set_defaults(func=mst_report("wavefront"))

    p = sub.add_parser("approx-mst", parents=[common, source, eps, knobs], help="sampling-based approximate MST")
    p.add_argument("--oracle", action="store_true", help="also report the ratio to the exact MST")
    p.set_defaults(func=mst_report("approx"))

    p = sub.add_parser("embed", parents=[common, source, eps], help="Hamming embedding at threshold r")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--allow-degenerate", action="store_true", help="emit labels even without a usable gap")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("ann-mst", parents=[common, source, eps], help="MST through the embedding ladder")
    p.add_argument("--oracle", action="store_true", help="also report the ratio to the exact MST")
    p.set_defaults(func=mst_report("ann"))

    p = sub.add_parser("compare", parents=[common, source, eps, knobs], help="ratios against the exact oracle")
    p.add_argument("--algos", default="wavefront,approx,ann")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--ratio-bound", type=float, default=1.5)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("render", parents=[common, source, eps, knobs], help="SVG drawing of a planar instance")
    p.add_argument("--mst", choices=["none", "exact", "approx", "ann"], default="exact")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("bench", parents=[common, eps, knobs], help="time every algorithm on generated instances")
    p.add_argument("--sizes", default="50,100,200")
    p.add_argument("--range", type=int, default=1000)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        result = args.func(args)
    except (CrossMetricError, ValueError, OSError) as exc:
        print(f"crossmetric {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if result is not None:
        inst = result["instance"]
        report = {
            "command": args.command,
            "digest": inst.digest() if inst is not None else None,
            "seed": args.seed,
            "parameters": result["parameters"],
            "outputs": result["outputs"],
            "wall_time": round(time.perf_counter() - start, 4),
        }
        sys.stdout.write(json.dumps(report, sort_keys=True) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
