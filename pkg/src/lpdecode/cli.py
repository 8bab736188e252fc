"""Command-line entry point.

Machine-readable output goes to stdout (JSON or CSV per subcommand); the
config echo and diagnostics go to stderr. Every run prints its effective
flags, so any output can be reproduced from the echo line alone.

Exit codes: 0 success (or: certificate holds), 1 domain failure (refuted
certificate, threshold condition fails, construction failure, ...),
2 invalid usage.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import bounds, channel, density, deviation, lp, sim, tanner

TABLE1_LEVELS = (0, 1, 2, 3, 4, 6, 8)
TABLE1_EXTENDED = (10, 12, 14, 18, 22)


def _echo_config(args: argparse.Namespace) -> None:
    shown = {k: v for k, v in vars(args).items() if k != "func" and v is not None}
    print(f"# config {json.dumps(shown, sort_keys=True)}", file=sys.stderr)


def _channel_or_die(parser, spec: str):
    try:
        return channel.parse_channel_spec(spec)
    except ValueError as exc:
        parser.error(str(exc))


def _quantization(args, ch):
    return channel.default_quantization(
        ch,
        delta=args.quant_delta,
        span_sigmas=args.quant_span_sigmas,
        tail_tolerance=args.tail_tol,
    )


def _read_vector(path, cast):
    with open(path, encoding="ascii") as fh:
        return [cast(tok) for tok in fh.read().split()]


def cmd_gen_graph(args, parser):
    g = tanner.build_regular_graph(args.n, args.dl, args.dr,
                                   min_girth=args.min_girth, seed=args.seed)
    if args.out:
        tanner.write_graph_file(g, args.out)
        print(json.dumps({"n": g.n, "m": g.m, "girth": tanner.girth(g), "out": args.out}))
    else:
        sys.stdout.write(f"{g.n} {g.m} {g.d_l} {g.d_r}\n")
        for row in g.chk_adj:
            sys.stdout.write(" ".join(map(str, row)) + "\n")
    return 0


def cmd_decode(args, parser):
    g = tanner.read_graph_file(args.graph)
    ch = _channel_or_die(parser, args.channel)
    problem = lp.build_polytope(g)
    rng = np.random.default_rng(args.seed)
    zero = np.zeros(g.n, dtype=np.int64)
    for trial in range(args.trials):
        y = channel.sample(ch, zero, rng)
        sol = lp.decode_word(g, ch, y, mode=args.mode, problem=problem)
        failed = not (sol.is_integral and sol.is_unique
                      and all(float(v) == 0.0 for v in sol.point))
        print(json.dumps({"trial": trial, "integral": sol.is_integral,
                          "unique": sol.is_unique, "failed": failed}))
    return 0


def cmd_certify(args, parser):
    g = tanner.read_graph_file(args.graph)
    lam = _read_vector(args.llr, float)
    word = _read_vector(args.word, int)
    if len(lam) != g.n or len(word) != g.n:
        parser.error("llr/word length does not match the graph")
    wv = deviation.WeightVector.preset(args.weights, args.depth, g.d_l)
    result = deviation.certify_local_optimality(g, word, lam, wv)
    if result.certified:
        print(json.dumps({"certified": True}))
        return 0
    print(json.dumps({
        "certified": False,
        "witness_root": result.witness_root,
        "witness_support": sorted(result.witness.support),
        "witness_cost": float(result.witness_cost),
    }))
    return 1


def cmd_threshold(args, parser):
    if args.channel == "biawgn":
        value, c_at = bounds.sigma0_search(args.dl, args.dr, args.s)
        rate = 1.0 - args.dl / args.dr
        out = {"channel": "biawgn", "s": args.s, "sigma0": round(value, 4),
               "eb_n0_db": round(bounds.eb_n0_db(value, rate), 3),
               "c_just_below": c_at(value - 0.01)}
    elif args.channel == "bsc":
        value, c_at = bounds.bsc_threshold_search(args.dl, args.dr, args.s)
        out = {"channel": "bsc", "s": args.s, "p0": round(value, 4),
               "c_just_below": c_at(value - 0.002)}
    else:
        parser.error("channel must be 'biawgn' or 'bsc'")
    print(json.dumps(out))
    return 0


def cmd_bound(args, parser):
    if args.regime == "nonuniform":
        ch = _channel_or_die(parser, args.channel)
        if not isinstance(ch, channel.BiAwgn):
            parser.error("the nonuniform bound is computed for biawgn channels")
        value = bounds.error_bound(args.n, args.girth, ch.sigma,
                                   args.dl, args.dr, args.s)
        report = bounds.nonuniform_condition(ch, args.dl, args.dr, args.s)
    else:
        ch = _channel_or_die(parser, args.channel)
        base = channel.llr_density(ch, _quantization(args, ch))
        report = bounds.mbios_condition(base, args.dl, args.dr, channel=str(ch))
        value = bounds.general_error_bound(args.n, args.girth, report)
    print(json.dumps({
        "bound": value, "c": report.c, "t_star": report.t_star,
        "prefactor": report.prefactor, "regime": report.regime,
        "T": bounds.max_depth_for_girth(args.girth), "s": report.s,
    }))
    return 0


def cmd_densities(args, parser):
    ch = _channel_or_die(parser, args.channel)
    base = channel.llr_density(ch, _quantization(args, ch))
    omegas = deviation.WeightVector.preset(args.weights, args.s + 1, args.dl).omegas()
    levels = density.evolve(base, omegas, args.dl, args.dr, args.s, return_levels=True)
    writer = csv.writer(sys.stdout)
    writer.writerow(["level", "kind", "x", "mass"])
    for level, f_x, f_y in levels:
        for kind, f in (("Y", f_y), ("X", f_x)):
            for x, p in zip(f.x, f.pdf):
                if p > 0:
                    writer.writerow([level, kind, f"{x:.9g}", f"{p:.9g}"])
    return 0


def cmd_laplace_curve(args, parser):
    ch = _channel_or_die(parser, args.channel)
    base = channel.llr_density(ch, _quantization(args, ch))
    omegas = deviation.WeightVector.geometric(args.s + 1, args.dl).omegas()
    f_x = density.evolve(base, omegas, args.dl, args.dr, args.s)
    writer = csv.writer(sys.stdout)
    writer.writerow(["t", "ln_laplace"])
    for t in np.linspace(0.0, args.t_max, args.points):
        writer.writerow([f"{t:.6g}", f"{density.log_laplace(f_x, float(t)):.9g}"])
    return 0


def cmd_simulate(args, parser):
    ch = _channel_or_die(parser, args.channel)
    if args.mode == "tree":
        wv = deviation.WeightVector.preset(args.weights, args.depth, args.dl)
        report = sim.simulate_tree_process(args.dl, args.dr, args.depth, wv, ch,
                                           args.trials, args.seed)
    else:
        if not args.graph:
            parser.error("--graph is required for --mode lp")
        g = tanner.read_graph_file(args.graph)
        report = sim.simulate_lp(g, ch, args.trials, args.seed, mode=args.lp_mode)
    print(json.dumps(report.to_dict()))
    return 0


def cmd_table1(args, parser):
    levels = [s for s in TABLE1_LEVELS if s <= args.max_s]
    levels += [s for s in TABLE1_EXTENDED if s <= args.max_s]
    rate = 1.0 - args.dl / args.dr

    def row(s):
        sigma0, _ = bounds.sigma0_search(args.dl, args.dr, s)
        return s, sigma0

    with ThreadPoolExecutor(max_workers=max(args.threads, 1)) as pool:
        rows = list(pool.map(row, levels))
    print(f"{'s':>3} {'sigma0':>8} {'Eb/N0[dB]':>10} {'reference':>10}")
    for s, sigma0 in rows:
        ref = bounds.REFERENCE_SIGMA0_36.get(s)
        ref_txt = f"{ref:.3f}" if ref is not None and (args.dl, args.dr) == (3, 6) else "-"
        rounded = round(sigma0 / 0.005) * 0.005
        print(f"{s:>3} {rounded:>8.3f} {bounds.eb_n0_db(sigma0, rate):>10.2f} {ref_txt:>10}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lpdecode",
        description="LP decoding of regular LDPC codes: certificates, "
                    "density evolution, thresholds, and error bounds.",
    )
    parser.add_argument("--threads", type=int, default=1,
                        help="parallel workers for independent probes (default 1)")
    parser.add_argument("--quant-delta", type=float, default=density.DEFAULT_DELTA,
                        help="quantization step for densities")
    parser.add_argument("--quant-span-sigmas", type=float,
                        default=density.DEFAULT_SPAN_SIGMAS,
                        help="half-width of the base grid in noise sigmas")
    parser.add_argument("--tail-tol", type=float, default=density.DEFAULT_TAIL_TOLERANCE,
                        help="allowed truncated tail mass per density")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-graph", help="sample a regular Tanner graph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dl", type=int, required=True)
    p.add_argument("--dr", type=int, required=True)
    p.add_argument("--min-girth", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output path (stdout when omitted)")
    p.set_defaults(func=cmd_gen_graph)

    p = sub.add_parser("decode", help="LP-decode noisy all-zero transmissions")
    p.add_argument("--graph", required=True)
    p.add_argument("--channel", required=True, help="bsc:P or biawgn:SIGMA")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--mode", choices=("exact", "float"), default="float")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("certify", help="local-optimality certificate for a word")
    p.add_argument("--graph", required=True)
    p.add_argument("--llr", required=True, help="whitespace-separated reals")
    p.add_argument("--word", required=True, help="whitespace-separated bits")
    p.add_argument("--T", dest="depth", type=int, required=True)
    p.add_argument("--weights", choices=("uniform", "geometric"), default="uniform")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("threshold", help="bisection search for the noise threshold")
    p.add_argument("--dl", type=int, default=3)
    p.add_argument("--dr", type=int, default=6)
    p.add_argument("--s", type=int, default=4)
    p.add_argument("--channel", choices=("biawgn", "bsc"), default="biawgn")
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("bound", help="word-error probability upper bound")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--girth", type=int, required=True)
    p.add_argument("--channel", required=True, help="bsc:P or biawgn:SIGMA")
    p.add_argument("--dl", type=int, default=3)
    p.add_argument("--dr", type=int, default=6)
    p.add_argument("--s", type=int, default=0)
    p.add_argument("--regime", choices=("nonuniform", "uniform"), default="nonuniform")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("densities", help="CSV of evolved level densities")
    p.add_argument("--channel", required=True)
    p.add_argument("--dl", type=int, default=3)
    p.add_argument("--dr", type=int, default=6)
    p.add_argument("--s", type=int, default=4)
    p.add_argument("--weights", choices=("uniform", "geometric"), default="geometric")
    p.set_defaults(func=cmd_densities)

    p = sub.add_parser("laplace-curve", help="CSV of ln E exp(-t X_s) over t")
    p.add_argument("--channel", required=True)
    p.add_argument("--dl", type=int, default=3)
    p.add_argument("--dr", type=int, default=6)
    p.add_argument("--s", type=int, default=4)
    p.add_argument("--t-max", type=float, default=0.5)
    p.add_argument("--points", type=int, default=200)
    p.set_defaults(func=cmd_laplace_curve)

    p = sub.add_parser("simulate", help="Monte Carlo failure-rate estimation")
    p.add_argument("--mode", choices=("tree", "lp"), required=True)
    p.add_argument("--channel", required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dl", type=int, default=3)
    p.add_argument("--dr", type=int, default=6)
    p.add_argument("--T", dest="depth", type=int, default=2)
    p.add_argument("--weights", choices=("uniform", "geometric"), default="geometric")
    p.add_argument("--graph", help="graph file (lp mode)")
    p.add_argument("--lp-mode", choices=("exact", "float"), default="float")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("table1", help="computed thresholds next to reference values")
    p.add_argument("--dl", type=int, default=3)
    p.add_argument("--dr", type=int, default=6)
    p.add_argument("--max-s", type=int, default=8)
    p.set_defaults(func=cmd_table1)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _echo_config(args)
    try:
        return args.func(args, parser)
    except (tanner.ConstructionError, bounds.BracketError, bounds.ConditionFailsError,
            bounds.SigmaAboveThresholdError, bounds.GirthTooSmallError,
            density.TailOverflowError, deviation.GirthViolationError,
            deviation.ExplosionGuardError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"invalid request: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
