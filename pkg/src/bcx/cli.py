"""Command-line entry point: ``bcx generate | compute | verify``.

Scores are unnormalized and count ordered pairs, so every undirected pair
{s, t} adds twice; divide by 2 for the unordered convention.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import graph as gmod
from .degree1 import endpoint_contribution, preprocess_1degree, removal_stats
from .degree2 import Mode, bc_with_heuristics
from .dist import make_mesh, message_stats, preprocess_1degree_distributed, run_distributed_bc
from .dist.mesh import MeshError
from .graph import Graph, InputError, RmatParams
from .serial import Tally, bc_exact, bc_oracle, format_scores, parse_scores, teps

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2
DEFAULT_TOL = 1e-6


class UsageError(Exception):
    pass


@dataclass
class RunReport:
    mode: str
    n: int
    m: int
    sources: int
    elapsed: float
    times: dict = field(default_factory=dict)
    breakdown: dict = field(default_factory=dict)
    candidates: dict = field(default_factory=dict)
    teps: float = 0.0
    expected_full_time: float | None = None
    mesh: str | None = None
    one_degree_stats: dict | None = None

    def lines(self) -> list[str]:
        out = [f"graph: n={self.n} m={self.m}  mode={self.mode}" + (f"  mesh={self.mesh}" if self.mesh else "")]
        out.append("time: " + "  ".join(f"{k}={v:.4f}s" for k, v in self.times.items()))
        out.append(f"rounds={self.breakdown.get('explicit', 0)}  sources={self.sources}  "
                   f"elapsed={self.elapsed:.4f}s  TEPS={self.teps:.4g}")
        if self.expected_full_time is not None:
            out.append(f"expected time for the whole graph: {self.expected_full_time:.4f}s")
        if self.one_degree_stats:
            st = self.one_degree_stats
            out.append(f"1-degree: removed {st['one_degree']} ({st['one_degree_pct']:.2f}%)  "
                       f"preprocessing={self.times.get('preprocess', 0.0):.4f}s")
        out.append(f"{'mode':<6}{'explicit':>18}{'1-degree':>18}{'2-degree':>18}{'isolated':>10}")
        b, c = self.breakdown, self.candidates
        out.append(f"{self.mode:<6}"
                   f"{b.get('explicit', 0):>10} ({c.get('explicit', 0):>5})"
                   f"{b.get('one_degree', 0):>10} ({c.get('one_degree', 0):>5})"
                   f"{b.get('two_degree', 0):>10} ({c.get('two_degree', 0):>5})"
                   f"{b.get('isolated', 0):>10}")
        return out


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _parse_mesh(text: str) -> tuple[int, int]:
    try:
        r, c = text.lower().split("x")
        return int(r), int(c)
    except ValueError:
        raise argparse.ArgumentTypeError(f"mesh must look like RxC, got {text!r}") from None


def load_graph(args) -> Graph:
    if getattr(args, "input", None):
        with open(args.input, "rb") as fh:
            head = fh.read(4)
        if head == gmod.BINARY_MAGIC:
            with open(args.input, "rb") as fh:
                return gmod.load_binary(fh)
        return gmod.build_undirected(gmod.read_edge_list(args.input))
    if getattr(args, "scale", None):
        return gmod.build_undirected(gmod.generate_rmat(RmatParams(args.scale, args.ef, seed=args.seed)))
    raise UsageError("give an input file (-i) or R-MAT parameters (--scale)")


def _candidates(g: Graph, mode: Mode) -> dict:
    deg = g.degrees
    two = int(np.count_nonzero(deg == 2))
    if mode is Mode.H3:
        two = int(np.count_nonzero(preprocess_1degree(g).graph.degrees == 2))
    return {"explicit": g.n, "one_degree": int(np.count_nonzero(deg == 1)), "two_degree": two}


def _select_sources(g: Graph, choice: str, seed: int):
    if choice == "all":
        return None
    pool = np.flatnonzero(g.degrees > 0)
    if "," in choice:
        try:
            chosen = sorted({int(x) for x in choice.split(",") if x.strip()})
        except ValueError:
            raise UsageError(f"bad --sources list {choice!r}") from None
        bad = [s for s in chosen if not 0 <= s < g.n or g.degrees[s] == 0]
        if bad:
            raise UsageError(f"--sources lists missing or isolated vertices {bad}")
        return chosen
    try:
        k = int(choice)
    except ValueError:
        raise UsageError(f"--sources takes 'all', a count or comma-separated ids, got {choice!r}") from None
    if not 1 <= k <= len(pool):
        raise UsageError(f"--sources {k} outside [1, {len(pool)}] (non-isolated vertices)")
    rng = np.random.default_rng(seed)
    return np.sort(rng.choice(pool, size=k, replace=False)).tolist()


def run_compute(g: Graph, mode: Mode, mesh=None, sources=None):
    """(scores, report, distributed run or None) for one configuration.

    A ``mesh`` selects the simulated distributed runtime.
    """
    tally = Tally()
    run = None
    t0 = time.perf_counter()
    one_stats = None
    mesh_label = None
    if mesh is not None:
        mesh_label = f"{mesh.R}x{mesh.C} fr={mesh.fr}"
        if mode is Mode.H0:
            run = run_distributed_bc(g, mesh, sources)
            scores = run.scores
            tally.isolated = int(np.count_nonzero(g.degrees == 0)) if sources is None else 0
        elif mode is Mode.H1:
            p0 = time.perf_counter()
            reduced = preprocess_1degree_distributed(g, mesh)
            tally.preprocess_time = time.perf_counter() - p0
            res, omega, gone = reduced.graph, reduced.omega.omega, reduced.removed_mask
            run = run_distributed_bc(res, mesh, omega=omega)
            scores = run.scores
            lone = (res.degrees == 0) & ~gone
            for s in np.flatnonzero(lone & (omega > 0)).tolist():
                scores[s] += endpoint_contribution(int(omega[s]), int(omega[s]) + 1)
            tally.one_degree = int(gone.sum())
            tally.isolated = int(np.count_nonzero(lone & (omega == 0)))
            tally.rounds += int(np.count_nonzero(lone & (omega > 0)))
            one_stats = removal_stats(g, reduced)
        else:
            raise UsageError("a mesh runs modes h0 and h1 only")
        tally.rounds += run.rounds
        tally.forward_time = run.timers["forward"]
        tally.backward_time = run.timers["backward"]
        comm = run.timers["communication"]
    else:
        comm = 0.0
        if sources is not None:
            if mode is not Mode.H0:
                raise UsageError("sampled sources run with mode h0 only")
            scores = bc_exact(g, sources, tally=tally)
        else:
            scores = bc_with_heuristics(g, mode, tally=tally)
            if mode in (Mode.H1, Mode.H3):
                one_stats = removal_stats(g, preprocess_1degree(g))
    elapsed = time.perf_counter() - t0

    n_eff = tally.rounds if sources is None else len(sources)
    report = RunReport(
        mode=mode.value, n=g.n, m=g.m, sources=n_eff, elapsed=elapsed,
        times={"preprocess": tally.preprocess_time, "forward": tally.forward_time,
               "backward": tally.backward_time, "communication": comm},
        breakdown=tally.breakdown, candidates=_candidates(g, mode),
        teps=teps(g.m, n_eff, elapsed) if elapsed > 0 else 0.0,
        mesh=mesh_label, one_degree_stats=one_stats,
    )
    if sources is not None:
        total = int(np.count_nonzero(g.degrees > 0))
        report.expected_full_time = elapsed * total / len(sources)
    return scores, report, run


def compare(scores: np.ndarray, truth: np.ndarray, tol: float = DEFAULT_TOL):
    """(ok, worst vertex, its relative error) under |x - y| <= tol * max(1, |y|)."""
    if scores.shape != truth.shape:
        return False, -1, float("inf")
    rel = np.abs(scores - truth) / np.maximum(1.0, np.abs(truth))
    if rel.size == 0:
        return True, -1, 0.0
    worst = int(np.argmax(rel))
    return bool(rel[worst] <= tol), worst, float(rel[worst])


def _mesh_from_args(args):
    if args.mesh is None:
        if args.fr != 1 or args.fd is not None:
            raise UsageError("--fd/--fr need --mesh")
        return None
    R, C = args.mesh
    try:
        return make_mesh(R * C * args.fr, R, C, args.fd if args.fd is not None else R * C)
    except MeshError as exc:
        raise UsageError(str(exc)) from None


def cmd_generate(args, out) -> int:
    params = RmatParams(args.scale, args.ef, args.a, args.b, args.c, args.d, seed=args.seed)
    edges = gmod.generate_rmat(params)
    g = gmod.build_undirected(edges)
    if args.binary:
        with open(args.output, "wb") as fh:
            gmod.save_binary(g, fh)
    else:
        with open(args.output, "w") as fh:
            gmod.write_edge_list(edges, fh)
    print(f"wrote {args.output}: n={params.num_vertices} raw_pairs={len(edges)} unique_edges={g.m}", file=out)
    return EXIT_OK


def cmd_compute(args, out) -> int:
    mode = Mode.parse(args.mode)
    mesh = _mesh_from_args(args)
    g = load_graph(args)
    sources = _select_sources(g, args.sources, args.seed)
    scores, report, run = run_compute(g, mode, mesh, sources)
    text = format_scores(scores, args.format)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        out.write(text)
    for line in report.lines():
        print(line, file=sys.stderr if not args.output else out)
    if args.report_json:
        with open(args.report_json, "a") as fh:
            fh.write(json.dumps(asdict(report)) + "\n")
    if args.stats_csv:
        if run is None:
            raise UsageError("--stats-csv needs --mesh")
        with open(args.stats_csv, "w") as fh:
            fh.write(message_stats(run).to_csv())
    if args.verify:
        if sources is not None:
            raise UsageError("--verify needs all sources")
        return _verify_against_oracle(g, {mode.value: scores}, args, out, tally=None)
    return EXIT_OK


def _verify_against_oracle(g, results: dict, args, out, tally) -> int:
    if g.n > args.oracle_limit and not args.force:
        print(f"refusing oracle on n={g.n} > --oracle-limit {args.oracle_limit} (use --force)", file=out)
        return EXIT_USAGE
    truth = bc_oracle(g)
    status = EXIT_OK
    for label, scores in results.items():
        ok, worst, err = compare(scores, truth, args.tol)
        extra = ""
        if tally is not None and label in tally:
            t = tally[label]
            skipped = g.n - t.rounds - int(np.count_nonzero(g.degrees == 0))
            extra = f"  {skipped} rounds skipped"
        verdict = "PASS" if ok else "FAIL"
        detail = f"worst vertex {worst} rel_err={err:.3e}" if worst >= 0 else "shape mismatch"
        print(f"{verdict} {label}: {detail}{extra}", file=out)
        if not ok:
            status = EXIT_MISMATCH
    return status


def cmd_verify(args, out) -> int:
    g = load_graph(args)
    if args.scores:
        with open(args.scores) as fh:
            results = {args.scores: parse_scores(fh.read())}
        if len(results[args.scores]) < g.n:
            results[args.scores] = np.pad(results[args.scores], (0, g.n - len(results[args.scores])))
        return _verify_against_oracle(g, results, args, out, None)
    modes = [Mode.parse(m) for m in args.modes.split(",")]
    results, tallies = {}, {}
    if g.n > args.oracle_limit and not args.force:
        return _verify_against_oracle(g, {}, args, out, None)
    for mode in modes:
        tally = Tally()
        results[mode.value] = bc_with_heuristics(g, mode, tally=tally)
        tallies[mode.value] = tally
    return _verify_against_oracle(g, results, args, out, tallies)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bcx",
        description="Exact betweenness centrality (unnormalized, ordered pairs: each undirected "
                    "pair counts twice).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def graph_source(p):
        p.add_argument("-i", "--input", help="edge list ('u v' lines) or BCX1 binary cache")
        p.add_argument("--scale", type=_positive_int, help="generate an R-MAT graph instead of reading one")
        p.add_argument("--ef", type=_positive_int, default=16, help="R-MAT edge factor")
        p.add_argument("--seed", type=int, default=0)

    gen = sub.add_parser("generate", help="write an R-MAT edge list")
    gen.add_argument("--scale", type=_positive_int, required=True)
    gen.add_argument("--ef", type=_positive_int, default=16)
    gen.add_argument("--seed", type=int, default=0)
    for name, default in zip("abcd", (0.57, 0.19, 0.19, 0.05)):
        gen.add_argument(f"-{name}", type=float, default=default)
    gen.add_argument("-o", "--output", required=True)
    gen.add_argument("--binary", action="store_true", help="write the BCX1 binary cache instead")

    comp = sub.add_parser("compute", help="compute BC scores")
    graph_source(comp)
    comp.add_argument("--mode", default="h0", choices=[m.value for m in Mode])
    comp.add_argument("--mesh", type=_parse_mesh, help="RxC mesh of simulated workers")
    comp.add_argument("--fd", type=_positive_int, help="workers per sub-cluster (must equal R*C)")
    comp.add_argument("--fr", type=_positive_int, default=1, help="number of sub-clusters")
    comp.add_argument("--sources", default="all", help="'all', a count k of random non-isolated sources or explicit ids like 3,7 ('5,' for one id)")
    comp.add_argument("-o", "--output")
    comp.add_argument("--format", default="txt", choices=["txt", "csv"])
    comp.add_argument("--verify", action="store_true", help="also check against the all-pairs oracle")
    comp.add_argument("--oracle-limit", type=int, default=512)
    comp.add_argument("--force", action="store_true")
    comp.add_argument("--tol", type=float, default=DEFAULT_TOL)
    comp.add_argument("--report-json", help="append the run report as one JSON line")
    comp.add_argument("--stats-csv", help="write message statistics (mesh runs)")

    ver = sub.add_parser("verify", help="compare modes (or a score file) with the all-pairs oracle")
    graph_source(ver)
    ver.add_argument("--modes", default="h0,h1,h2,h3")
    ver.add_argument("--scores", help="score file to check instead of computing")
    ver.add_argument("--oracle-limit", type=int, default=512)
    ver.add_argument("--force", action="store_true")
    ver.add_argument("--tol", type=float, default=DEFAULT_TOL)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"generate": cmd_generate, "compute": cmd_compute, "verify": cmd_verify}
    try:
        return handlers[args.command](args, out)
    except (UsageError, InputError, ValueError) as exc:
        print(f"bcx: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"bcx: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
