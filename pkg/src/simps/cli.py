"""Command-line entry point: ``simps simulate|analyze|sweep|graph``."""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .analysis import (
    InsufficientDataError,
    ccdf,
    detect_cutoff,
    fit_power_law,
    fit_weibull_tail,
    write_ccdf_csv,
    write_fit_report,
)
from .contact import DurationSamples, read_durations_csv, write_durations_csv, write_events_csv
from .observers import ContactTracker, TraceWriter, TransitionLog
from .population import write_population_csv
from .scenario import Scenario, ScenarioError, format_scenario, load_scenario, parse_scenario
from .simulator import SimulationIOError, initialize, run
from .social_graph import EdgeWeight, format_graph, generate_random, generate_scale_free, save_graph
from .sweeps import ASPECTS, KINDS, fit_durations, simulate_durations, variants

OUTPUT_ENV = "SIMPS_OUTPUT_DIR"


class CliError(Exception):
    def __init__(self, message: str, code: int = 1):
        super().__init__(message)
        self.code = code


def _output_dir(arg: str | None) -> Path:
    out = Path(arg or os.environ.get(OUTPUT_ENV) or "simps_out")
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise CliError(f"cannot create output directory {out}: {exc.strerror}") from None
    return out


def _scenario(path: str | None, sets: list[str], seed: int | None) -> Scenario:
    base = load_scenario(path) if path else Scenario()
    if sets:
        for item in sets:
            if "=" not in item:
                raise CliError(f"--set expects key=value, got {item!r}", 2)
        base = parse_scenario("\n".join(sets), base=base)
    if seed is not None:
        base = base.replace(seed=seed)
    return base


# -- simulate ----------------------------------------------------------------

def cmd_simulate(args) -> int:
    sc = _scenario(args.scenario, args.set, args.seed)
    out = _output_dir(args.output)
    state = initialize(sc)
    (out / "scenario.resolved.txt").write_text(format_scenario(sc), encoding="utf-8")
    write_population_csv(list(state.context.people), out / "population.csv")
    save_graph(state.context.graph, out / "graph.txt")

    tracker = ContactTracker(sc.n, sc.contact_range, sc.contact_debounce, method=sc.neighbor_index)
    observers = [tracker, TransitionLog(out / "transitions.csv")]
    if args.trace:
        observers.append(TraceWriter(out / "trace.csv", decimate=args.decimate))
    run(sc, observers, state=state)

    write_events_csv(tracker.ledger.events(), out / "contacts.csv")
    samples = tracker.durations()
    write_durations_csv(samples, out / "durations.csv")
    print(f"{sc.steps} steps, {len(samples.contact)} contacts, {len(samples.intercontact)} inter-contacts -> {out}")
    return 0


# -- analyze -----------------------------------------------------------------

def _read_all(paths) -> DurationSamples:
    merged = DurationSamples()
    for p in paths:
        try:
            d = read_durations_csv(p)
        except OSError as exc:
            raise CliError(f"{p}: {exc.strerror or exc}") from None
        except ValueError as exc:
            raise CliError(f"{p}: {exc}") from None
        merged.contact.extend(d.contact)
        merged.intercontact.extend(d.intercontact)
    return merged


def cmd_analyze(args) -> int:
    samples = _read_all(args.durations)
    out = _output_dir(args.output)
    status = 0
    for kind in KINDS:
        values = getattr(samples, kind)
        if not values:
            print(f"{kind}: no samples")
            status = 1
            continue
        c = ccdf(values)
        write_ccdf_csv(c, out / f"ccdf_{kind}.csv")
        line = [f"{kind}: n={len(values)}"]
        for model, fitter in (("powerlaw", fit_power_law), ("weibull", fit_weibull_tail)):
            try:
                fit = fitter(c, args.x_min, args.x_max)
            except InsufficientDataError as exc:
                line.append(f"{model}: infeasible ({exc})")
                status = 1
                continue
            write_fit_report([fit], out / f"fit_{kind}_{model}.csv")
            line.append(f"{model} {'alpha' if model == 'powerlaw' else 'k'}={fit.parameter:.4f} r2={fit.r2:.4f}")
        try:
            cut = detect_cutoff(c)
            line.append(f"cut-off={'none' if cut is None else f'{cut:.4g}'}")
        except InsufficientDataError:
            pass
        print("  ".join(line))
    return status


# -- sweep -------------------------------------------------------------------

RUN_HEADER = ["aspect", "variant", "seed", "kind", "samples", "alpha", "alpha_r2", "weibull_k", "weibull_r2"]
SUMMARY_HEADER = ["variant", "kind", "runs", "alpha_mean", "alpha_std", "alpha_r2_mean", "weibull_k_mean",
                  "weibull_r2_mean"]


def _sweep_job(job):
    aspect, label, scenario, x_min, x_max = job
    fits = fit_durations(simulate_durations(scenario), x_min, x_max)
    return [[aspect, label, scenario.seed, f.kind, f.samples, f.alpha, f.alpha_r2, f.weibull_k, f.weibull_r2]
            for f in fits]


def _fmt(v) -> str:
    if isinstance(v, float):
        return "nan" if math.isnan(v) else f"{v:.6g}"
    return str(v)


def _mean_std(xs):
    xs = np.asarray([x for x in xs if not math.isnan(x)], dtype=float)
    if xs.size == 0:
        return float("nan"), float("nan")
    return float(xs.mean()), float(xs.std(ddof=1)) if xs.size > 1 else 0.0


def cmd_sweep(args) -> int:
    if args.aspect not in ASPECTS:
        raise CliError(f"unknown sweep aspect {args.aspect!r} (choose from {', '.join(ASPECTS)})", 2)
    if args.seeds < 1:
        raise CliError("--seeds must be >= 1", 2)
    base = _scenario(args.scenario, args.set, None)
    out = _output_dir(args.output)
    jobs = []
    for v in variants(args.aspect, base):
        sc = v.apply(base)  # validates every variant before anything runs
        for k in range(args.seeds):
            jobs.append((args.aspect, v.label, sc.replace(seed=args.seed_base + k), args.x_min, args.x_max))

    workers = args.jobs or os.cpu_count() or 1
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_job, jobs))
    else:
        results = [_sweep_job(j) for j in jobs]
    rows = [r for res in results for r in res]

    with open(out / f"sweep_{args.aspect}_runs.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RUN_HEADER)
        w.writerows([[_fmt(x) for x in r] for r in rows])

    summary = []
    for label in dict.fromkeys(r[1] for r in rows):
        for kind in KINDS:
            sel = [r for r in rows if r[1] == label and r[3] == kind]
            a_mean, a_std = _mean_std(r[5] for r in sel)
            summary.append([label, kind, len(sel), a_mean, a_std, _mean_std(r[6] for r in sel)[0],
                            _mean_std(r[7] for r in sel)[0], _mean_std(r[8] for r in sel)[0]])
    with open(out / f"sweep_{args.aspect}_summary.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_HEADER)
        w.writerows([[_fmt(x) for x in r] for r in summary])

    width = max(len(r[0]) for r in summary)
    print(f"{'variant':<{width}}  {'kind':<12}  alpha (mean +- std)   R2     weibull R2")
    for label, kind, n, am, asd, ar2, _, wr2 in summary:
        print(f"{label:<{width}}  {kind:<12}  {am:6.3f} +- {asd:<6.3f}  {n:>2} runs  {ar2:6.3f}  {wr2:6.3f}")
    return 0


# -- graph -------------------------------------------------------------------

def cmd_graph(args) -> int:
    try:
        weight = EdgeWeight.parse(args.edge_weight)
        gen = generate_random if args.type == "random" else generate_scale_free
        g = gen(args.n, args.d, args.seed, weight)
    except ValueError as exc:
        raise CliError(str(exc), 2) from None
    if args.output:
        save_graph(g, args.output)
    else:
        sys.stdout.write(format_graph(g))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="simps", description="Social-behavior mobility simulator and contact analyzer.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="run one simulation and record contacts")
    s.add_argument("scenario", nargs="?", help="key = value scenario file (defaults when omitted)")
    s.add_argument("-o", "--output", help=f"output directory (default ${OUTPUT_ENV} or ./simps_out)")
    s.add_argument("--seed", type=int)
    s.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override a scenario key")
    s.add_argument("--trace", action="store_true", help="also write the position trace")
    s.add_argument("--decimate", type=int, default=1, metavar="K", help="trace every K-th step")
    s.set_defaults(func=cmd_simulate)

    a = sub.add_parser("analyze", help="CCDFs and tail fits of duration files")
    a.add_argument("durations", nargs="+")
    a.add_argument("--x-min", type=float, default=10.0)
    a.add_argument("--x-max", type=float, default=300.0)
    a.add_argument("-o", "--output")
    a.set_defaults(func=cmd_analyze)

    w = sub.add_parser("sweep", help="run a named parameter sweep over several seeds")
    w.add_argument("aspect", help=", ".join(ASPECTS))
    w.add_argument("--seeds", type=int, default=5)
    w.add_argument("--seed-base", type=int, default=1)
    w.add_argument("--scenario", help="base scenario file")
    w.add_argument("--set", action="append", default=[], metavar="KEY=VALUE")
    w.add_argument("--x-min", type=float, default=10.0)
    w.add_argument("--x-max", type=float, default=300.0)
    w.add_argument("--jobs", type=int, default=0, help="worker processes (default: CPU count)")
    w.add_argument("-o", "--output")
    w.set_defaults(func=cmd_sweep)

    g = sub.add_parser("graph", help="generate a social graph edge list")
    g.add_argument("--type", choices=("random", "scale_free"), default="scale_free")
    g.add_argument("--n", type=int, default=100)
    g.add_argument("--d", type=float, default=5.0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--edge-weight", default="uniform")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_graph)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "decimate", 1) < 1:
        parser.error("--decimate must be >= 1")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SimulationIOError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        where = f"{exc.filename}: " if exc.filename else ""
        print(f"error: {where}{exc.strerror or exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
