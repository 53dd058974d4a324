"""
Command-line entry point: ``maxcut-game <subcommand> [options]``.

Exit codes: 0 when every check passes, 2 when a counterexample or a failed
golden check is reported (or a strong deviation is found by ``verify-qse``),
1 on any error.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from .. import __version__
from ..concurrent import find_strong_deviation_parallel, max_cut_parallel
from ..core.dynamics import Schedule, run_best_response, run_coalition_dynamics
from ..core.equilibrium import PruningLevel, find_strong_deviation
from ..core.game import Coloring
from ..core.graph import load_graph_document
from ..core.solver import max_cut_exact
from .config import ExperimentConfig, config_from_mapping, load_config
from .report import EXIT_COUNTEREXAMPLE, EXIT_ERROR, EXIT_OK
from .runners import EXPERIMENTS, cmd_figure1_regression

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def setup_logging(level: str, log_file: Optional[str] = None) -> None:
    logging.basicConfig(level=getattr(logging, level.upper(), logging.INFO), format=LOG_FORMAT, stream=sys.stderr)
    if log_file:
        file_handler = logging.FileHandler(log_file, mode="w", encoding="utf-8")
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logging.getLogger().addHandler(file_handler)


def read_graph(path: str, k: Optional[int] = None):
    """Load a graph file; returns (graph, k, sigma) with ``--k`` overriding the file's k."""
    g, file_k, sigma = load_graph_document(Path(path).read_text(encoding="utf-8"))
    k = k if k is not None else file_k
    if k is None:
        raise ValueError(f"{path}: no k in the file; pass --k")
    return g, k, sigma


def read_coloring(path: str, k: int) -> Coloring:
    """A colouring file holds a JSON list, a JSON object with ``sigma``, or whitespace/comma separated colours."""
    text = Path(path).read_text(encoding="utf-8").strip()
    if text.startswith("[") or text.startswith("{"):
        data = json.loads(text)
        colors = data["sigma"] if isinstance(data, dict) else data
    else:
        colors = [int(token) for token in text.replace(",", " ").split()]
    return Coloring(tuple(colors), k)


def write_json(path: Optional[str], payload: Any) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if path:
        Path(path).write_text(text, encoding="utf-8")
        logger.info("Wrote %s", path)
    else:
        sys.stdout.write(text)


def build_config(args: argparse.Namespace) -> ExperimentConfig:
    config = load_config(args.config) if args.config else ExperimentConfig()
    overrides: Dict[str, Any] = {
        "seed": args.seed,
        "jobs": args.jobs,
        "out_dir": args.out_dir,
        "progress": True if args.progress else None,
    }
    for key in getattr(args, "config_keys", ()):
        overrides[key] = getattr(args, key, None)
    return config_from_mapping({key: value for key, value in overrides.items() if value is not None}, config)


def cmd_solve(args: argparse.Namespace) -> int:
    g, k, _ = read_graph(args.graph, args.k)
    if args.jobs and args.jobs > 1:
        if args.budget is not None:
            raise ValueError("--budget applies to the sequential solver only; drop it or use --jobs 1")
        optimum = max_cut_parallel(g, k, workers=args.jobs, enumerate_all=args.enumerate_all)
    else:
        optimum = max_cut_exact(g, k, args.budget, enumerate_all=args.enumerate_all)
    if not optimum.exhausted:
        logger.warning("Budget of %d nodes exhausted; best value %d is a lower bound", args.budget, optimum.best_value)
    witnesses = optimum.witnesses
    if args.enumerate_all and not args.canonical:
        witnesses = sorted({c for w in witnesses for c in w.relabelings()}, key=lambda c: c.colors)
    write_json(
        args.out,
        {
            "n": g.n,
            "m": g.m,
            "k": k,
            "best_value": optimum.best_value,
            "exhausted": optimum.exhausted,
            "count_labeled": optimum.count_labeled,
            "nodes_expanded": optimum.nodes_expanded,
            "witnesses": [w.to_list() for w in witnesses],
        },
    )
    return EXIT_OK


def cmd_verify_qse(args: argparse.Namespace) -> int:
    g, k, file_sigma = read_graph(args.graph, args.k)
    if args.from_solver:
        sigma = max_cut_exact(g, k).witnesses[0]
    elif args.coloring:
        sigma = read_coloring(args.coloring, k)
    elif file_sigma is not None:
        sigma = Coloring(tuple(file_sigma), k)
    else:
        raise ValueError("pass --coloring FILE or --from-solver")
    q = args.q if args.q is not None else min(7, g.n)
    if args.jobs and args.jobs > 1:
        result = find_strong_deviation_parallel(g, sigma, q, args.pruning, workers=args.jobs)
    else:
        result = find_strong_deviation(g, sigma, q, args.pruning)
    write_json(args.emit_certificate, result.to_dict())
    if result.found:
        logger.info("Strong deviation by coalition %s (delta_s=%d)", list(result.coalition), result.delta_s)
        return EXIT_COUNTEREXAMPLE
    logger.info("%d-strong equilibrium (%d coalitions scanned)", q, result.coalitions_scanned)
    return EXIT_OK


def cmd_dynamics(args: argparse.Namespace) -> int:
    g, k, file_sigma = read_graph(args.graph, args.k)
    if args.init == "mono":
        sigma0 = Coloring.monochromatic(g.n, k)
    elif args.init == "random":
        rng = np.random.Generator(np.random.PCG64(args.seed or 0))
        sigma0 = Coloring(tuple(int(c) for c in rng.integers(1, k + 1, size=g.n)), k)
    elif args.coloring:
        sigma0 = read_coloring(args.coloring, k)
    elif file_sigma is not None:
        sigma0 = Coloring(tuple(file_sigma), k)
    else:
        raise ValueError("--init file needs --coloring FILE or a sigma in the graph file")
    if args.mode == "br":
        trace = run_best_response(g, sigma0, args.schedule, args.max_steps, seed=args.seed)
    else:
        q = args.q if args.q is not None else min(7, g.n)
        trace = run_coalition_dynamics(g, sigma0, q, args.max_steps)
    logger.info("Dynamics ended %s after %d steps", trace.terminal.value, len(trace.steps))
    write_json(args.trace_out, trace.to_dict())
    return EXIT_OK


def cmd_experiment(args: argparse.Namespace) -> int:
    config = build_config(args)
    if args.command == "figure1" and getattr(args, "graph", None):
        g, _, _ = read_graph(args.graph, 3)
        report = cmd_figure1_regression(config, {Path(args.graph).stem: g})
    else:
        report = EXPERIMENTS[args.command](config)
    if config.out_dir:
        report.write(config.out_dir)
    else:
        sys.stdout.write(report.to_json())
    logger.info(
        "%s: %d golden checks, %d failed, %d counterexamples, %d findings",
        report.experiment,
        len(report.golden_checks),
        len(report.failed_checks),
        len(report.counterexamples),
        sum(report.finding_counts.values()),
    )
    return report.exit_code


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML file overriding configuration defaults")
    common.add_argument("--seed", type=int, help="Master seed")
    common.add_argument("--jobs", type=int, help="Worker count")
    common.add_argument("--out-dir", dest="out_dir", help="Directory for reports")
    common.add_argument("--log-level", default="INFO", help="DEBUG, INFO, WARNING or ERROR")
    common.add_argument("--log-file", help="Also log to this file")
    common.add_argument("--progress", action="store_true", help="Show progress bars")
    return common


def _experiment(subparsers, name: str, common: argparse.ArgumentParser, help_text: str, keys: Sequence[str] = ()):
    parser = subparsers.add_parser(name, parents=[common], help=help_text)
    parser.set_defaults(handler=cmd_experiment, config_keys=list(keys))
    return parser


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="maxcut-game", description="Max k-cut game engine and experiments")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    solve = subparsers.add_parser("solve", parents=[common], help="Exact maximum k-cut")
    solve.add_argument("--graph", required=True)
    solve.add_argument("--k", type=int)
    solve.add_argument("--enumerate-all", dest="enumerate_all", action="store_true")
    solve.add_argument("--canonical", action="store_true", help="One optimum per colour permutation class")
    solve.add_argument("--budget", type=int, help="Node-expansion budget (sequential solver only)")
    solve.add_argument("--out")
    solve.set_defaults(handler=cmd_solve)

    verify = subparsers.add_parser("verify-qse", parents=[common], help="Search a strong deviation of size <= q")
    verify.add_argument("--graph", required=True)
    verify.add_argument("--k", type=int)
    source = verify.add_mutually_exclusive_group()
    source.add_argument("--coloring")
    source.add_argument("--from-solver", dest="from_solver", action="store_true")
    verify.add_argument("--q", type=int)
    verify.add_argument("--pruning", type=int, choices=[int(level) for level in PruningLevel], default=0)
    verify.add_argument("--emit-certificate", dest="emit_certificate")
    verify.set_defaults(handler=cmd_verify_qse)

    dynamics = subparsers.add_parser("dynamics", parents=[common], help="Best-response or coalition dynamics")
    dynamics.add_argument("--graph", required=True)
    dynamics.add_argument("--k", type=int)
    dynamics.add_argument("--init", choices=["mono", "random", "file"], default="mono")
    dynamics.add_argument("--coloring")
    dynamics.add_argument("--mode", choices=["br", "coalition"], default="br")
    dynamics.add_argument("--schedule", choices=[schedule.value for schedule in Schedule], default="round-robin")
    dynamics.add_argument("--q", type=int)
    dynamics.add_argument("--max-steps", dest="max_steps", type=int)
    dynamics.add_argument("--trace-out", dest="trace_out")
    dynamics.set_defaults(handler=cmd_dynamics)

    figure1 = _experiment(subparsers, "figure1", common, "Worked-example regression")
    figure1.add_argument("--graph", help="Check this graph instead of the two reconstructions")
    _experiment(subparsers, "table1", common, "Coalition pair-count table")
    _experiment(subparsers, "triangle-claim", common, "Five-vertex triangle enumeration")
    _experiment(subparsers, "seven-member-configs", common, "Seven-member configuration bounds")

    theorems = _experiment(
        subparsers,
        "verify-theorems",
        common,
        "Optimal colourings as q-strong equilibria",
        ("mode", "graph_source", "n_max", "k_values", "sample_count", "budget", "max_optima"),
    )
    theorems.add_argument("--mode", choices=["seven_strong", "full_strong", "two_colors", "many_colors"])
    theorems.add_argument("--source", dest="graph_source", choices=["atlas", "labeled", "er"])
    theorems.add_argument("--n-max", dest="n_max", type=int)
    theorems.add_argument("--k-values", dest="k_values", type=int, nargs="+")
    theorems.add_argument("--count", dest="sample_count", type=int)
    theorems.add_argument("--budget", type=int)
    theorems.add_argument("--max-optima", dest="max_optima", type=int)

    er = _experiment(
        subparsers,
        "er-experiment",
        common,
        "Deviation sizes between optima of random graphs",
        ("er_n", "er_avg_degrees", "er_graphs_per_degree", "er_k", "budget"),
    )
    er.add_argument("--n", dest="er_n", type=int)
    er.add_argument("--avg-degrees", dest="er_avg_degrees", type=float, nargs="+")
    er.add_argument("--graphs-per-degree", dest="er_graphs_per_degree", type=int)
    er.add_argument("--k", dest="er_k", type=int)
    er.add_argument("--budget", type=int)

    fuzz = _experiment(
        subparsers,
        "identity-fuzz",
        common,
        "Exact identities on random and exhaustive instances",
        ("fuzz_count", "grid_n_max", "grid_k_max"),
    )
    fuzz.add_argument("--count", dest="fuzz_count", type=int)
    fuzz.add_argument("--grid-n-max", dest="grid_n_max", type=int)
    fuzz.add_argument("--grid-k-max", dest="grid_k_max", type=int)

    audit = _experiment(
        subparsers,
        "audit",
        common,
        "Pruning equivalence and minimal-deviation audit",
        ("audit_n_max", "audit_k_max", "audit_cap"),
    )
    audit.add_argument("--n-max", dest="audit_n_max", type=int)
    audit.add_argument("--k-max", dest="audit_k_max", type=int)
    audit.add_argument("--cap", dest="audit_cap", type=int)

    dyn_fuzz = _experiment(
        subparsers,
        "dynamics-fuzz",
        common,
        "Dynamics on random instances",
        ("dynamics_count", "dynamics_n_max", "dynamics_k_max"),
    )
    dyn_fuzz.add_argument("--count", dest="dynamics_count", type=int)
    dyn_fuzz.add_argument("--n-max", dest="dynamics_n_max", type=int)
    dyn_fuzz.add_argument("--k-max", dest="dynamics_k_max", type=int)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.log_level, args.log_file)
    try:
        return args.handler(args)
    except Exception:
        logger.exception("%s failed", args.command)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
