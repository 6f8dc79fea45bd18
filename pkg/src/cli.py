"""
Command-line front end: generate, evaluate, simulate, sweep and bounds.

Exit codes: 0 success, 2 usage or validation error, 3 I/O or code-file
error, 4 internal assertion.
"""

import argparse
import json
import logging
import math
import sys
import time
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from .analytics import expected_unique_syndromes, ideal_fraction, min_n_bounds, p_all_distinct, p_good
from .code import build_qrlc, load_code, recommended_gate_count, save_code
from .config import (
    DECODING_MODES,
    DISTRIBUTION_KINDS,
    EXIT_INTERNAL,
    EXIT_IO,
    EXIT_OK,
    EXIT_USAGE,
    MIN_GATES_CRITERIA,
    SWEEP_KINDS,
    RunConfig,
    load_config_file,
)
from .errors import CodeFormatError, DimensionError, QGrandError, ValidationError
from .experiments import (
    evaluate_code,
    min_gates_experiment,
    ordering_study,
    p_threshold_sweep,
    run_trials,
    sweep_rate,
    write_sidecar,
    write_sweep_csv,
)
from .gf2 import rank
from .noise import BernoulliNoise, NoiseModel, channel_entropy, entropy, load_noise_csv, pattern_counts
from .qgrand import write_trial_log

logger = logging.getLogger("src")

DEFAULTS = RunConfig()


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON config file; flags override its values")
    parser.add_argument("--verbose", action="store_true", help="debug logging on stderr")
    parser.add_argument("--quiet", action="store_true", help="only warnings and errors on stderr")
    parser.add_argument("--output", dest="output_path", help="output file path")


def _add_code_size(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int, help=f"physical qubits (default {DEFAULTS.n})")
    parser.add_argument("--k", type=int, help=f"logical qubits (default {DEFAULTS.k})")


def _add_noise(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--p", type=float, help=f"depolarizing probability per qubit (default {DEFAULTS.p})")
    parser.add_argument("--t", type=int, help=f"maximum error weight listed (default {DEFAULTS.t})")
    parser.add_argument("--noise-file", dest="noise_path", help="CSV of pauli,probability rows instead of --p/--t")


def _add_gates(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--gates", dest="num_gates", type=int,
        help="number of random C2 gates (default: ceil(m n log2(n)^2) with m from --gate-prefactor)",
    )
    parser.add_argument(
        "--gate-prefactor", dest="gate_prefactor", type=float,
        help=f"m used when --gates is absent (default {DEFAULTS.gate_prefactor})",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qgrand",
        description="Quantum random linear codes decoded by noise guessing (QGRAND)",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    generate = commands.add_parser("generate", help="build a random code and write its code file")
    _add_common(generate)
    _add_code_size(generate)
    _add_gates(generate)
    generate.add_argument("--seed", dest="master_seed", type=int, help="64-bit code seed (default 0)")

    evaluate = commands.add_parser("evaluate", help="semi-analytic BLER and correctable fractions of a code")
    _add_common(evaluate)
    evaluate.add_argument("--code", dest="code_path", required=True, help="code file written by generate")
    evaluate.add_argument("--n", type=int, help="expected qubit count; must match the code (default: the code's)")
    _add_noise(evaluate)
    evaluate.add_argument(
        "--conditional", action="store_true", default=None,
        help="headline BLER conditional on an error of weight <= t (default: residual counts as failure)",
    )
    evaluate.add_argument("--count-no-hit", dest="count_no_hit", action="store_true", default=None,
                          help="include the all-zero scan branch in the per-candidate cost")

    simulate = commands.add_parser("simulate", help="Monte Carlo decoding trials on a code")
    _add_common(simulate)
    simulate.add_argument("--code", dest="code_path", required=True, help="code file written by generate")
    _add_noise(simulate)
    simulate.add_argument("--trials", type=int, help=f"number of trials (default {DEFAULTS.trials})")
    simulate.add_argument("--mode", choices=DECODING_MODES, help=f"decoding mode (default {DEFAULTS.mode})")
    simulate.add_argument("--seed", dest="master_seed", type=int, help="trial seed (default 0)")
    simulate.add_argument("--abandon-after", dest="abandon_after", type=int,
                          help="give up after this many candidates beyond the identity (default: never)")
    simulate.add_argument("--precompute-limit", dest="precompute_limit", type=int,
                          help="patterns kept in the precomputed table (default: all)")
    simulate.add_argument("--count-no-hit", dest="count_no_hit", action="store_true", default=None,
                          help="include the all-zero scan branch in the closed-form cost")

    sweep = commands.add_parser("sweep", help="parameter sweeps over sampled codes, written as CSV + JSON")
    _add_common(sweep)
    sweep.add_argument("--kind", required=True, choices=SWEEP_KINDS, help="which sweep to run")
    _add_code_size(sweep)
    sweep.add_argument("--n-list", dest="n_list", type=int, nargs="+", help="qubit counts (min-gates, p-threshold)")
    sweep.add_argument("--k-list", dest="k_list", type=int, nargs="+",
                       help="logical qubits (rate: default 1..n-1; min-gates: one k per --n-list entry)")
    sweep.add_argument("--p", type=float, help=f"depolarizing probability (default {DEFAULTS.p})")
    sweep.add_argument("--p-grid", dest="p_grid", type=float, nargs="+", help="p values (p-threshold)")
    sweep.add_argument("--t", type=int, help=f"maximum error weight (default {DEFAULTS.t})")
    sweep.add_argument("--t-list", dest="t_list", type=int, nargs="+", help="weights compared (min-gates; default 1)")
    _add_gates(sweep)
    sweep.add_argument("--rate", type=float, help=f"code rate k/n (min-gates, p-threshold; default {DEFAULTS.rate})")
    sweep.add_argument("--samples", type=int, help=f"codes per point (default {DEFAULTS.samples})")
    sweep.add_argument("--seed", dest="master_seed", type=int, help="master seed (required)")
    sweep.add_argument("--threads", type=int, help=f"worker processes (default {DEFAULTS.threads})")
    sweep.add_argument("--delta", dest="delta_threshold", type=float,
                       help=f"relative deviation threshold (min-gates; default {DEFAULTS.delta_threshold})")
    sweep.add_argument("--criterion", choices=MIN_GATES_CRITERIA,
                       help=f"min-gates criterion (default {DEFAULTS.criterion})")
    sweep.add_argument("--entropy-grid", dest="entropy_grid", type=float, nargs="+",
                       help="noise entropies in bits (ordering; default 0..log2(3n+1))")
    sweep.add_argument("--kinds", nargs="+", choices=DISTRIBUTION_KINDS,
                       help="synthetic distribution kinds (ordering; default both)")

    bounds = commands.add_parser("bounds", help="minimum n estimates and ideal-model statistics")
    _add_common(bounds)
    _add_code_size(bounds)
    bounds.add_argument("--p", type=float, help=f"depolarizing probability (default {DEFAULTS.p})")
    bounds.add_argument("--t", type=int, help=f"maximum error weight (default {DEFAULTS.t})")
    bounds.add_argument("--epsilon", type=float, help=f"tolerated failure probability (default {DEFAULTS.epsilon})")
    return parser


def configure_logging(verbose: bool = False, quiet: bool = False) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    logger.handlers[:] = [handler]
    logger.setLevel(level)
    logger.propagate = False


def _write_json(data: Dict[str, Any], path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=2, default=str)
    return path


def _noise_for(config: RunConfig, n: int) -> NoiseModel:
    if config.noise_path:
        return load_noise_csv(config.noise_path)
    if config.t > n:
        raise ValidationError(f"t={config.t} exceeds the {n} qubits of the code")
    return BernoulliNoise(n, config.p, config.t)


def _gates(config: RunConfig, n: int) -> int:
    return config.num_gates if config.num_gates is not None else recommended_gate_count(n, config.gate_prefactor)


def cmd_generate(config: RunConfig) -> int:
    seed = config.master_seed or 0
    gates = _gates(config, config.n)
    start = time.time()
    code = build_qrlc(config.n, config.k, gates, seed=seed)
    path = Path(config.output_path or f"qrlc_n{config.n}_k{config.k}_seed{seed}.code")
    save_code(code, path)
    print(f"Generated ({code.n},{code.k}) code: {gates} gates, seed {seed}, "
          f"stabilizer rank {rank(code.parity_check)}/{code.s}")
    print(f"Code saved to: {path}")
    print(f"Processing time: {time.time() - start:.2f} seconds")
    return EXIT_OK


def cmd_evaluate(config: RunConfig, explicit: Dict[str, Any]) -> int:
    code = load_code(config.code_path)
    if "n" in explicit and explicit["n"] != code.n:
        raise DimensionError(f"--n {explicit['n']} does not match the {code.n}-qubit code")
    noise = _noise_for(config, code.n)
    if noise.n != code.n:
        raise DimensionError(f"noise acts on {noise.n} qubits, code on {code.n}")
    start = time.time()
    report = evaluate_code(code, noise, config.count_no_hit)
    headline = report.conditional_bler if config.conditional else report.bler
    path = Path(config.output_path or "evaluation.json")
    _write_json({
        "config": config.to_dict(),
        "headline_bler": "conditional_bler" if config.conditional else "bler",
        "report": report.to_dict(),
    }, path)
    table_path = path.with_suffix(".csv")
    with open(table_path, "w", encoding="utf-8") as f:
        f.write("weight,leaders,patterns,f\n")
        for t, f_t in report.f_by_weight.items():
            f.write(f"{t},{report.leaders_by_weight.get(t, 0)},{pattern_counts(code.n, t).A},{f_t:.17g}\n")
    print(f"Evaluated ({code.n},{code.k}) code against {len(noise)} patterns")
    print(f"BLER: {headline:.6g}  (F_min >= {1 - headline:.6g})")
    print(f"Unique syndromes: {report.unique_syndromes}, degenerate collisions: {report.degenerate_count}")
    print(f"Results saved to: {path} and {table_path}")
    print(f"Processing time: {time.time() - start:.2f} seconds")
    return EXIT_OK


def cmd_simulate(config: RunConfig) -> int:
    code = load_code(config.code_path)
    noise = _noise_for(config, code.n)
    start = time.time()
    records, summary = run_trials(
        code, noise, config.trials, config.master_seed or 0, config.mode,
        config.abandon_after, config.precompute_limit, config.count_no_hit,
    )
    log_path = Path(config.output_path or "trials.csv")
    write_trial_log(records, code.s, log_path)
    summary_path = _write_json(
        {"config": config.to_dict(), "summary": summary.to_dict()}, log_path.with_suffix(".json")
    )
    print(f"Simulated {summary.trials} trials ({summary.mode})")
    print(f"Success rate: {summary.success_rate:.6g}, mean iterations: {summary.mean_iterations:.4g}")
    print(f"Mean measurements: {summary.mean_measurements:.4g} (closed form {summary.measurement_cost.total_C:.4g})")
    print(f"Patterns precomputed: {summary.precomputed_patterns}, on the fly: {summary.on_the_fly_patterns} "
          f"({summary.on_the_fly_decodes} trials decoded there)")
    print(f"Results saved to: {log_path} and {summary_path}")
    print(f"Processing time: {time.time() - start:.2f} seconds")
    return EXIT_OK


def cmd_sweep(config: RunConfig) -> int:
    start = time.time()
    kind = config.kind
    if kind == "rate":
        result = sweep_rate(
            config.n, config.k_list or list(range(1, config.n)), config.t, config.p,
            _gates(config, config.n), config.samples, config.master_seed, config.threads,
        )
    elif kind == "min-gates":
        n_list = config.n_list or [16, 32]
        k_rule = dict(zip(n_list, config.k_list)).__getitem__ if config.k_list else None
        outcome = min_gates_experiment(
            n_list, config.rate, config.t_list or [1], config.delta_threshold,
            config.samples, config.master_seed, config.criterion, threads=config.threads, k_rule=k_rule,
        )
        result = outcome.sweep
        print(f"Minimum gate counts: {outcome.n_min} (fitted m = {outcome.m})")
    elif kind == "p-threshold":
        result = p_threshold_sweep(
            config.n_list or [16, 32], config.rate,
            config.p_grid or np.logspace(-3, -1, 5).tolist(), config.t, config.samples,
            config.master_seed, config.num_gates, config.gate_prefactor, config.threads,
        )
    else:
        result = ordering_study(
            config.n, config.k, config.entropy_grid, config.kinds, config.samples,
            config.master_seed, config.num_gates, config.threads,
        )
    path = Path(config.output_path or f"sweep_{kind}.csv")
    write_sweep_csv(result, path)
    sidecar = write_sidecar(result, path.with_suffix(".json"), config.to_dict(), time.time() - start)
    print(f"Sweep '{kind}': {len(result.points)} points x {result.samples} samples")
    print(f"Results saved to: {path} and {sidecar}")
    print(f"Processing time: {time.time() - start:.2f} seconds")
    return EXIT_OK


def cmd_bounds(config: RunConfig) -> int:
    noise = BernoulliNoise(config.n, config.p, config.t)
    N = pattern_counts(config.n, config.t).B - 1
    S = math.ldexp(1.0, config.n - config.k)
    L = math.ldexp(1.0, 2 * config.k)
    truncated, full = entropy(noise), channel_entropy(config.n, config.p)
    data = {
        "config": config.to_dict(),
        "patterns_N": N,
        "entropy_truncated_bits": truncated,
        "entropy_channel_bits": full,
        "bounds_truncated_entropy": min_n_bounds(config.k, max(N, 1), config.epsilon, truncated)._asdict(),
        "bounds_channel_entropy": min_n_bounds(config.k, max(N, 1), config.epsilon, full)._asdict(),
        "ideal": {
            "expected_unique_syndromes": expected_unique_syndromes(S, N),
            "ideal_fraction": ideal_fraction(S, N),
            "p_all_distinct": p_all_distinct(S, N)._asdict(),
            "p_good": p_good(S, N, L)._asdict(),
        },
    }
    print(f"N = {N} patterns of weight <= {config.t} on {config.n} qubits")
    print(f"H(truncated) = {truncated:.4f} bits, H(channel) = {full:.4f} bits")
    for label, key in (("truncated", "bounds_truncated_entropy"), ("channel", "bounds_channel_entropy")):
        print(f"min n ({label} entropy): {data[key]}")
    if config.output_path:
        print(f"Results saved to: {_write_json(data, Path(config.output_path))}")
    return EXIT_OK


def _explicit_flags(args: argparse.Namespace) -> Dict[str, Any]:
    skip = {"command", "config", "verbose", "quiet"}
    return {k: v for k, v in vars(args).items() if k not in skip and v is not None}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose, args.quiet)
    try:
        file_values = load_config_file(args.config) if args.config else {}
        explicit = _explicit_flags(args)
        config = RunConfig.from_sources(args.command, file_values, explicit)
        if args.command == "generate":
            return cmd_generate(config)
        if args.command == "evaluate":
            return cmd_evaluate(config, explicit)
        if args.command == "simulate":
            return cmd_simulate(config)
        if args.command == "sweep":
            return cmd_sweep(config)
        return cmd_bounds(config)
    except ValidationError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, CodeFormatError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except (AssertionError, QGrandError) as e:
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL
