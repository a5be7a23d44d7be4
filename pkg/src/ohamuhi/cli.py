"""Command-line front end.

Exit status: 0 on success, 1 on usage errors, 2 on data errors (unreadable
or malformed input, infeasible generator parameters).
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
import time
from contextlib import contextmanager
from pathlib import Path

from . import __version__
from .benchgen import (
    GeneratorError, LFRParams, gen_lfr_like, gen_planted_partition, metadata,
    write_edge_list, write_truth_cover, write_truth_nodewise,
)
from .disjoint import CommunityDefinition, detect_disjoint, write_partition
from .dss import DEFAULT_ITERATIONS, dss_fixed_point, dump_similarity, local_cosine
from .graph import GraphError, load_edge_list
from .metrics import (
    MetricError, nmi_sqrt, omega_adjusted, onmi, partition_to_cover,
    read_cover, read_partition,
)
from .overlap import (
    SWEEP_ALPHAS, alpha_cut, build_fuzzy_cover, write_crisp_cover,
    write_fuzzy_cover,
)

EXIT_USAGE = 1
EXIT_DATA = 2

BENCH_FIELDS = [
    "N", "avgk", "maxk", "tau1", "tau2", "minc", "maxc", "mu", "On", "Om",
    "seed", "similarity", "cd", "K", "T", "eps", "nodes", "edges",
    "nmi", "onmi", "omega", "best_alpha", "wall_time_s",
]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(x: float) -> str:
    return f"{x:.6f}"


@contextmanager
def _open_out(path: str):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="\n") as fh:
            yield fh


def _read_text(path: str) -> list[str]:
    if path == "-":
        return sys.stdin.read().splitlines()
    with open(path) as fh:
        return fh.read().splitlines()


# -- shared option groups ------------------------------------------------------

def _add_detection(p: argparse.ArgumentParser, eps_default):
    g = p.add_argument_group("detection")
    g.add_argument("--cd", default="most-weak", choices=["most-weak", "weak"],
                   help="community definition each community must meet "
                        "(default: most-weak, the setting of the LFR benchmark runs)")
    g.add_argument("-K", "--min-size", dest="K", type=int, default=2,
                   help="minimum community size (default: 2, the benchmark setting)")
    g.add_argument("-T", "--iterations", dest="T", type=int, default=DEFAULT_ITERATIONS,
                   help="DSS fixed-point iterations (default: 5; T does not grow "
                        "with graph size)")
    g.add_argument("--similarity", default="dss", choices=["dss", "cosine"],
                   help="edge similarity driving the merges (default: dss)")
    g.add_argument("--threads", type=int, default=1,
                   help="worker threads for the similarity kernels (default: 1); "
                        "results do not depend on it")
    eps_help = ("epsilon-core tolerance: freeze candidate communities whose "
                "adjacent communities are all within EPS of the most similar one")
    if eps_default is None:
        eps_help += " (default: off; bare --eps means 0)"
    else:
        eps_help += f" (default: {eps_default}, exact ties only; --no-eps disables)"
    g.add_argument("--eps", type=float, nargs="?", const=0.0, default=eps_default,
                   metavar="EPS", help=eps_help)
    if eps_default is not None:
        g.add_argument("--no-eps", dest="eps", action="store_const", const=None,
                       help="disable epsilon-core flagging")


def _add_lfr(p: argparse.ArgumentParser):
    d = LFRParams()
    g = p.add_argument_group("generator")
    g.add_argument("--N", type=int, default=d.N, help=f"node count (default: {d.N})")
    g.add_argument("--avgk", type=float, default=d.avgk,
                   help=f"average degree (default: {d.avgk:g})")
    g.add_argument("--maxk", type=int, default=d.maxk,
                   help=f"maximum degree (default: {d.maxk})")
    g.add_argument("--tau1", type=float, default=d.tau1,
                   help=f"degree exponent, negative (default: {d.tau1:g})")
    g.add_argument("--tau2", type=float, default=d.tau2,
                   help=f"community-size exponent, negative (default: {d.tau2:g})")
    g.add_argument("--minc", type=int, default=d.minc,
                   help=f"minimum community size (default: {d.minc})")
    g.add_argument("--maxc", type=int, default=d.maxc,
                   help=f"maximum community size (default: {d.maxc})")
    g.add_argument("--mu", type=float, default=d.mu,
                   help=f"mixing parameter (default: {d.mu:g})")
    g.add_argument("--on", dest="On", type=int, default=d.On,
                   help=f"overlapping node count (default: {d.On})")
    g.add_argument("--om", dest="Om", type=int, default=d.Om,
                   help=f"memberships per overlapping node (default: {d.Om})")
    g.add_argument("--seed", type=int, default=d.seed, help=f"random seed (default: {d.seed})")


def _lfr_params(args) -> LFRParams:
    return LFRParams(N=args.N, avgk=args.avgk, maxk=args.maxk, tau1=args.tau1,
                     tau2=args.tau2, minc=args.minc, maxc=args.maxc, mu=args.mu,
                     On=args.On, Om=args.Om, seed=args.seed)


def _check_detection(args):
    if args.K < 1:
        raise UsageError("-K must be >= 1")
    if args.T < 0:
        raise UsageError("-T must be >= 0")
    if args.threads < 1:
        raise UsageError("--threads must be >= 1")
    if args.eps is not None and args.eps < 0:
        raise UsageError("--eps must be >= 0")


def _similarity(g, args):
    if args.similarity == "cosine":
        return local_cosine(g)
    return dss_fixed_point(g, args.T, threads=args.threads)


def _load_graph(path: str):
    return load_edge_list(_read_text(path))


# -- subcommands -------------------------------------------------------------

def cmd_detect(args) -> int:
    _check_detection(args)
    g = _load_graph(args.input)
    sim = _similarity(g, args)
    if args.dump_similarity:
        with _open_out(args.dump_similarity) as fh:
            dump_similarity(sim, fh)
    p = detect_disjoint(g, sim, CommunityDefinition.parse(args.cd), args.K, args.eps)
    with _open_out(args.output) as fh:
        write_partition(p, fh)
    return 0


def _sweep_path(base: str, alpha: float) -> str:
    return f"{base}.alpha-{alpha:g}"


def cmd_detect_overlap(args) -> int:
    _check_detection(args)
    if not 0.0 <= args.alpha <= 1.0:
        raise UsageError("--alpha must lie in [0, 1]")
    g = _load_graph(args.input)
    sim = _similarity(g, args)
    p = detect_disjoint(g, sim, CommunityDefinition.parse(args.cd), args.K, args.eps)
    fc = build_fuzzy_cover(g, sim, p)
    with _open_out(args.fuzzy) as fh:
        write_fuzzy_cover(fc, fh)
    with _open_out(args.crisp) as fh:
        write_crisp_cover(alpha_cut(fc, args.alpha), fh)
    if args.alpha_sweep:
        if args.crisp == "-":
            raise UsageError("--alpha-sweep needs a --crisp file path")
        for a in SWEEP_ALPHAS:
            with open(_sweep_path(args.crisp, a), "w") as fh:
                write_crisp_cover(alpha_cut(fc, a), fh)
    return 0


def cmd_eval(args) -> int:
    if args.mode == "partition":
        a = read_partition(_read_text(args.detected))
        b = read_partition(_read_text(args.truth))
        print(f"nmi={_fmt(nmi_sqrt(a, b))}")
    else:
        a = read_cover(_read_text(args.detected), "cover")
        b = read_cover(_read_text(args.truth), args.gt_format)
        print(f"onmi={_fmt(onmi(a, b))} omega={_fmt(omega_adjusted(a, b))}")
    return 0


def cmd_gen(args) -> int:
    prefix = args.prefix
    if args.model == "planted":
        g, truth = gen_planted_partition(args.N, args.blocks, args.p_in,
                                         args.p_out, args.seed)
        params = {"model": "planted", "n": args.N, "k": args.blocks,
                  "p_in": args.p_in, "p_out": args.p_out, "seed": args.seed}
    else:
        params = _lfr_params(args)
        g, truth = gen_lfr_like(params)
    Path(prefix).parent.mkdir(parents=True, exist_ok=True)
    with open(f"{prefix}.edges", "w") as fh:
        write_edge_list(g, fh)
    with open(f"{prefix}.cover", "w") as fh:
        write_truth_cover(g, truth, fh)
    with open(f"{prefix}.nodewise", "w") as fh:
        write_truth_nodewise(g, truth, fh)
    with open(f"{prefix}.json", "w") as fh:
        fh.write(metadata(params, g, truth))
    return 0


def run_bench(args) -> dict:
    """Generate, detect and score one graph; returns a CSV row dict."""
    params = _lfr_params(args)
    g, truth = gen_lfr_like(params)
    start = time.perf_counter()
    sim = _similarity(g, args)
    cd = CommunityDefinition.parse(args.cd)
    truth_cover = truth.labeled(g)
    row = {k: getattr(params, k) for k in
           ("N", "avgk", "maxk", "tau1", "tau2", "minc", "maxc", "mu", "On", "Om", "seed")}
    row.update(similarity=args.similarity, cd=cd.value, K=args.K, T=args.T,
               nodes=g.node_count, edges=g.edge_count)
    overlapping = any(len(m) > 1 for m in truth.memberships(g.node_count))
    if overlapping:
        eps = args.eps
        p = detect_disjoint(g, sim, cd, args.K, eps)
        fc = build_fuzzy_cover(g, sim, p)
        best_omega, best_alpha, best_onmi = float("-inf"), None, float("-inf")
        for a in SWEEP_ALPHAS:
            cover = alpha_cut(fc, a).labeled()
            om = omega_adjusted(cover, truth_cover)
            best_onmi = max(best_onmi, onmi(cover, truth_cover))
            if om > best_omega:
                best_omega, best_alpha = om, a
        elapsed = time.perf_counter() - start
        row.update(eps="" if eps is None else eps, nmi="", onmi=_fmt(best_onmi),
                   omega=_fmt(best_omega), best_alpha=f"{best_alpha:g}")
    else:
        p = detect_disjoint(g, sim, cd, args.K, None)
        elapsed = time.perf_counter() - start
        detected = p.labeled()
        cover = partition_to_cover(detected)
        row.update(eps="", nmi=_fmt(nmi_sqrt(detected, truth.as_partition(g))),
                   onmi=_fmt(onmi(cover, truth_cover)),
                   omega=_fmt(omega_adjusted(cover, truth_cover)), best_alpha="")
    row["wall_time_s"] = "" if args.no_timing else f"{elapsed:.4f}"
    return row


def cmd_bench(args) -> int:
    _check_detection(args)
    row = run_bench(args)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=BENCH_FIELDS, lineterminator="\n")
    if args.output == "-":
        if not args.no_header:
            writer.writeheader()
        writer.writerow(row)
        sys.stdout.write(buf.getvalue())
        return 0
    exists = Path(args.output).exists() and Path(args.output).stat().st_size > 0
    if not (exists or args.no_header):
        writer.writeheader()
    writer.writerow(row)
    with open(args.output, "a") as fh:
        fh.write(buf.getvalue())
    return 0


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="ohamuhi",
        description="Disjoint and overlapping community detection with Dynamic "
                    "Structural Similarity and agglomerative merging.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("detect", help="edge list -> disjoint partition",
                       description="Detect disjoint communities. Output lines are "
                                   "'label community', sorted by label.")
    p.add_argument("input", help="edge list ('-' for stdin)")
    p.add_argument("-o", "--output", default="-", help="partition file (default: stdout)")
    p.add_argument("--dump-similarity", metavar="PATH",
                   help="also write 'u v similarity' per edge")
    _add_detection(p, eps_default=None)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("detect-overlap", help="edge list -> fuzzy and crisp covers",
                       description="Detect overlapping communities: a disjoint pass "
                                   "with epsilon-core flagging, then membership "
                                   "probabilities and an alpha-cut.")
    p.add_argument("input", help="edge list ('-' for stdin)")
    p.add_argument("--fuzzy", required=True,
                   help="fuzzy cover output: one community per line, 'label:probability'")
    p.add_argument("--crisp", required=True,
                   help="crisp cover output: one community per line of labels")
    p.add_argument("--alpha", type=float, default=0.0,
                   help="alpha-cut threshold; memberships >= alpha are kept "
                        "(default: 0, full support)")
    p.add_argument("--alpha-sweep", action="store_true",
                   help="also write CRISP.alpha-A for A in "
                        + ", ".join(f"{a:g}" for a in SWEEP_ALPHAS)
                        + " (the thresholds used on the overlapping LFR benchmarks)")
    _add_detection(p, eps_default=0.0)
    p.set_defaults(func=cmd_detect_overlap)

    p = sub.add_parser("eval", help="score detected communities against ground truth",
                       description="Prints one key=value line: nmi for partitions, "
                                   "onmi and omega for covers.")
    p.add_argument("detected")
    p.add_argument("truth")
    p.add_argument("--mode", choices=["partition", "cover"], default="partition",
                   help="partition files ('label community') or cover files "
                        "(default: partition)")
    p.add_argument("--gt-format", choices=["cover", "nodewise"], default="cover",
                   help="ground-truth cover layout in cover mode (default: cover)")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("gen", help="generate a benchmark graph with ground truth",
                       description="Writes PREFIX.edges, PREFIX.cover, PREFIX.nodewise "
                                   "and PREFIX.json (parameters, RNG, empirical mu).")
    p.add_argument("prefix", help="output path prefix")
    p.add_argument("--model", choices=["lfr", "planted"], default="lfr")
    p.add_argument("--blocks", type=int, default=4, help="planted model: block count")
    p.add_argument("--p-in", type=float, default=0.5, help="planted model: intra-block p")
    p.add_argument("--p-out", type=float, default=0.01, help="planted model: inter-block p")
    _add_lfr(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="generate, detect and evaluate; emit a CSV row",
                       description="Overlapping ground truth runs the overlap pipeline "
                                   "and reports the best onmi/omega over the alpha "
                                   "sweep; otherwise the disjoint pipeline with nmi.")
    p.add_argument("-o", "--output", default="-",
                   help="CSV file to append to (default: stdout)")
    p.add_argument("--no-header", action="store_true", help="omit the CSV header")
    p.add_argument("--no-timing", action="store_true",
                   help="leave wall_time_s empty so reruns are byte-identical")
    _add_lfr(p)
    _add_detection(p, eps_default=0.0)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"ohamuhi {args.command}: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"ohamuhi {args.command}: file not found: {exc.filename}", file=sys.stderr)
        return EXIT_DATA
    except GeneratorError as exc:
        print(f"ohamuhi {args.command}: infeasible generator parameters: {exc}",
              file=sys.stderr)
        return EXIT_DATA
    except (GraphError, MetricError) as exc:
        print(f"ohamuhi {args.command}: bad input: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
