"""
Semi-analytic evaluation of sampled codes and the sweep harness.

A code is evaluated by computing the syndrome of every listed pattern at once
(numpy XOR of per-letter syndrome words), taking first occurrences in noise
order as coset leaders and summing their probabilities. Sweeps derive one
seed per (axis point, sample) from the master seed, so results do not depend
on how samples are spread over worker processes.
"""

import csv
import json
import logging
import math
import platform
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy

from . import __version__
from .analytics import (
    decision_tree_recursion,
    ideal_fraction,
    ideal_success_probability,
    ideal_weight_fraction,
    p_all_distinct,
)
from .code import QuantumCode, build_qrlc, build_qrlc_series, recommended_gate_count
from .config import (
    BAND_METHOD,
    BAND_QUANTILES,
    DEFAULT_ENTROPY_POINTS,
    DISTRIBUTION_KINDS,
    GATE_PREFACTOR_GRID,
    GATE_PREFACTOR_MEAN,
    MIN_GATES_CRITERIA,
    REFERENCE_SAMPLES,
)
from .errors import DimensionError, ValidationError
from .noise import (
    BernoulliNoise,
    NoiseModel,
    channel_entropy,
    entropy,
    pattern_counts,
    synthetic_model,
    weight_one_patterns,
)
from .qgrand import (
    DecodeStatus,
    DecodingMode,
    MeasurementCost,
    SyndromeCalculator,
    TrialRecord,
    build_table,
    greedy_ordering,
    measurement_cost,
    random_ordering,
    row_keys,
    simulate_trial,
)

logger = logging.getLogger(__name__)


def derive_seed(master_seed: int, axis_index: int, sample_index: int) -> int:
    """64-bit seed of one sample, stable across runs and worker counts."""
    state = np.random.SeedSequence(master_seed, spawn_key=(axis_index, sample_index)).generate_state(2, np.uint32)
    return int(state[0]) | (int(state[1]) << 32)


def rate_to_k(n: int, rate: float) -> int:
    """round(R n) clamped to [1, n-1]."""
    return min(n - 1, max(1, int(math.floor(rate * n + 0.5))))


# --- single-code evaluation ------------------------------------------------

@dataclass(frozen=True)
class WeightProfile:
    """Leader statistics per pattern weight; enough to re-price any p of the same order."""

    leaders: Dict[int, int]
    counts: Dict[int, int]
    degenerate: Dict[int, int]
    unique_syndromes: int
    success_probability: float
    degenerate_probability: float

    def f_by_weight(self) -> Dict[int, float]:
        return {t: self.leaders.get(t, 0) / c for t, c in sorted(self.counts.items()) if t > 0 and c}

    def listed_fraction(self) -> Dict[int, float]:
        """Leaders among all patterns of weight <= t, as a fraction of them."""
        out, leaders, patterns = {}, 0, 0
        for t, c in sorted(self.counts.items()):
            leaders += self.leaders.get(t, 0)
            patterns += c
            if t > 0:
                out[t] = leaders / patterns
        return out

    def bernoulli_success(self, n: int, p: float) -> Tuple[float, float]:
        """(success, degenerate) probability under depolarizing noise of strength p."""
        noise_probability = {t: (p / 3) ** t * (1 - p) ** (n - t) for t in self.counts}
        success = math.fsum(self.leaders.get(t, 0) * q for t, q in noise_probability.items())
        degenerate = math.fsum(self.degenerate.get(t, 0) * q for t, q in noise_probability.items())
        return success, degenerate


def _bincount(values: np.ndarray, weights: Optional[np.ndarray] = None) -> Dict[int, int]:
    counts = np.bincount(values, weights=weights) if len(values) else np.zeros(0)
    return {int(t): int(c) for t, c in enumerate(counts) if c}


def weight_profile(code: QuantumCode, noise: NoiseModel) -> WeightProfile:
    """Coset leaders (first occurrences in noise order) and degenerate collisions."""
    if noise.n != code.n:
        raise DimensionError(f"noise acts on {noise.n} qubits, code on {code.n}")
    calculator = SyndromeCalculator(code)
    syndrome_words, signature_words = calculator.noise_words(noise)
    _, first, inverse = np.unique(row_keys(syndrome_words), return_index=True, return_inverse=True)
    leader_of = first[inverse.reshape(-1)]
    order = np.arange(len(leader_of))
    collided = leader_of != order
    degenerate = collided & np.all(signature_words == signature_words[leader_of], axis=1)
    weights = noise.weights()
    probabilities = noise.probabilities()
    return WeightProfile(
        leaders=_bincount(weights[first]),
        counts=_bincount(weights),
        degenerate=_bincount(weights[degenerate]),
        unique_syndromes=int(len(first)),
        success_probability=math.fsum(probabilities[first].tolist()),
        degenerate_probability=math.fsum(probabilities[degenerate].tolist()),
    )


@dataclass(frozen=True)
class EvalReport:
    n: int
    k: int
    num_gates: int
    seed: int
    patterns: int
    f_by_weight: Dict[int, float]
    leaders_by_weight: Dict[int, int]
    success_prob: float
    bler: float
    conditional_bler: float
    f_min_bound: float
    residual: float
    degenerate_count: int
    degenerate_probability: float
    unique_syndromes: int
    entropy_bits: float
    channel_entropy_bits: Optional[float] = None
    measurement_cost: Optional[MeasurementCost] = None

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["f_by_weight"] = {str(t): f for t, f in self.f_by_weight.items()}
        data["leaders_by_weight"] = {str(t): c for t, c in self.leaders_by_weight.items()}
        return data


def _report(
    n: int,
    k: int,
    num_gates: int,
    seed: int,
    noise: NoiseModel,
    profile: WeightProfile,
    success: float,
    degenerate_probability: float,
    cost: Optional[MeasurementCost],
) -> EvalReport:
    listed = 1.0 - noise.residual
    bler = min(1.0, max(0.0, 1.0 - success))
    conditional = min(1.0, max(0.0, 1.0 - success / listed)) if listed > 0 else 1.0
    return EvalReport(
        n=n,
        k=k,
        num_gates=num_gates,
        seed=seed,
        patterns=len(noise),
        f_by_weight=profile.f_by_weight(),
        leaders_by_weight={t: c for t, c in profile.leaders.items() if t > 0},
        success_prob=success,
        bler=bler,
        conditional_bler=conditional,
        f_min_bound=1.0 - bler,
        residual=noise.residual,
        degenerate_count=sum(profile.degenerate.values()),
        degenerate_probability=degenerate_probability,
        unique_syndromes=profile.unique_syndromes,
        entropy_bits=entropy(noise),
        channel_entropy_bits=channel_entropy(n, noise.p) if isinstance(noise, BernoulliNoise) else None,
        measurement_cost=cost,
    )


def evaluate_code(code: QuantumCode, noise: NoiseModel, count_no_hit: bool = False) -> EvalReport:
    """
    BLER = 1 - sum of leader probabilities; the residual mass and degenerate
    collisions count as failures (the latter are reported separately).
    """
    profile = weight_profile(code, noise)
    return _report(
        code.n, code.k, code.num_gates, code.seed, noise, profile,
        profile.success_probability, profile.degenerate_probability,
        measurement_cost(code.s, noise, count_no_hit),
    )


def trivial_report(n: int, noise: NoiseModel, seed: int = 0) -> EvalReport:
    """k = n: no stabilizers, one syndrome, only the first listed pattern is corrected."""
    weights = noise.weights()
    profile = WeightProfile(
        leaders={int(weights[0]): 1},
        counts=_bincount(weights),
        degenerate={},
        unique_syndromes=1,
        success_probability=noise.p0,
        degenerate_probability=0.0,
    )
    return _report(n, n, 0, seed, noise, profile, noise.p0, 0.0, None)


def reprice(code: QuantumCode, profile: WeightProfile, p: float, t_max: int) -> EvalReport:
    """EvalReport of a Bernoulli profile at another p (same class order)."""
    noise = BernoulliNoise(code.n, p, t_max)
    success, degenerate = profile.bernoulli_success(code.n, p)
    return _report(code.n, code.k, code.num_gates, code.seed, noise, profile, success, degenerate, None)


@dataclass(frozen=True)
class ScreenResult:
    code: Optional[QuantumCode]
    attempts: int
    report: Optional[EvalReport]


def screen_codes(
    n: int, k: int, num_gates: int, noise: NoiseModel, seed: int, max_attempts: int = 100
) -> ScreenResult:
    """Draw codes until one corrects every listed pattern (degenerate collisions allowed)."""
    for attempt in range(max_attempts):
        code = build_qrlc(n, k, num_gates, seed=derive_seed(seed, 0, attempt))
        profile = weight_profile(code, noise)
        if profile.unique_syndromes + sum(profile.degenerate.values()) == len(noise):
            logger.info("code accepted after %d attempt(s)", attempt + 1)
            return ScreenResult(code, attempt + 1, evaluate_code(code, noise))
    logger.warning("no code out of %d corrects every listed pattern", max_attempts)
    return ScreenResult(None, max_attempts, None)


# --- Monte Carlo decoding --------------------------------------------------

@dataclass(frozen=True)
class SimulationSummary:
    trials: int
    mode: str
    success_rate: float
    mean_iterations: float
    mean_measurements: float
    mean_measurements_per_rejected: Optional[float]
    abandoned: int
    measurement_cost: MeasurementCost
    precomputed_patterns: int = 0
    on_the_fly_patterns: int = 0
    on_the_fly_decodes: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def run_trials(
    code: QuantumCode,
    noise: NoiseModel,
    trials: int,
    seed: int,
    mode: Union[DecodingMode, str] = DecodingMode.MEMBERSHIP_TEST,
    abandon_after: Optional[int] = None,
    precompute_limit: Optional[int] = None,
    count_no_hit: bool = False,
) -> Tuple[List[TrialRecord], SimulationSummary]:
    table = build_table(code, noise, precompute_limit)
    rng = np.random.default_rng(seed)
    records = [simulate_trial(code, noise, table, rng, mode, abandon_after) for _ in range(trials)]
    rejected = sum(r.rejected_candidates for r in records)
    summary = SimulationSummary(
        trials=trials,
        mode=DecodingMode(mode).value,
        success_rate=sum(r.success for r in records) / trials,
        mean_iterations=sum(r.iterations for r in records) / trials,
        mean_measurements=sum(r.stabilizer_measurements for r in records) / trials,
        mean_measurements_per_rejected=(
            sum(r.rejected_measurements for r in records) / rejected if rejected else None
        ),
        abandoned=sum(r.status == DecodeStatus.ABANDONED for r in records),
        measurement_cost=measurement_cost(code.s, noise, count_no_hit),
        precomputed_patterns=table.n_p,
        on_the_fly_patterns=table.n_j,
        on_the_fly_decodes=sum(
            r.decoded_index is not None and not table.precomputed(r.decoded_index) for r in records
        ),
    )
    return records, summary


# --- sweep results ---------------------------------------------------------

@dataclass(frozen=True)
class SeriesStats:
    mean: float
    std: float
    p10: float
    p90: float
    samples: int


def summarize(values: Sequence[float]) -> SeriesStats:
    """Mean, sample std and the 80% band as order statistics."""
    data = np.asarray(values, dtype=float)
    low, high = BAND_QUANTILES
    return SeriesStats(
        mean=float(data.mean()),
        std=float(data.std(ddof=1)) if len(data) > 1 else 0.0,
        p10=float(np.quantile(data, low, method="lower")),
        p90=float(np.quantile(data, high, method="higher")),
        samples=int(len(data)),
    )


@dataclass
class SweepPoint:
    axis: Dict[str, Any]
    stats: Dict[str, SeriesStats]
    overlay: Dict[str, float] = field(default_factory=dict)


@dataclass
class SweepResult:
    kind: str
    master_seed: int
    samples: int
    points: List[SweepPoint] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)

    def columns(self) -> List[str]:
        if not self.points:
            return []
        first = self.points[0]
        columns = list(first.axis)
        for series in first.stats:
            columns += [f"{series}_{stat}" for stat in ("mean", "std", "p10", "p90")]
        columns.append("samples")
        columns += [f"ideal_{name}" for name in first.overlay]
        columns += ["band", "seed"]
        return columns

    def rows(self) -> Iterable[List[Any]]:
        for point in self.points:
            row: List[Any] = list(point.axis.values())
            for stats in point.stats.values():
                row += [stats.mean, stats.std, stats.p10, stats.p90]
            row.append(min((s.samples for s in point.stats.values()), default=0))
            row += list(point.overlay.values())
            row += [BAND_METHOD, self.master_seed]
            yield row

    def series(self, name: str) -> List[SeriesStats]:
        return [point.stats[name] for point in self.points]


def _cell(value: Any) -> str:
    if isinstance(value, (float, np.floating)):
        return "%.17g" % value
    return str(value)


def write_sweep_csv(result: SweepResult, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(result.columns())
        for row in result.rows():
            writer.writerow([_cell(v) for v in row])
    return path


def write_sidecar(
    result: SweepResult, path: Union[str, Path], config: Dict[str, Any], wall_time: float
) -> Path:
    """JSON metadata next to a sweep CSV: config, versions, timing, band method."""
    path = Path(path)
    notes = []
    if result.samples < REFERENCE_SAMPLES:
        notes.append(f"{result.samples} samples per point instead of {REFERENCE_SAMPLES}")
    data = {
        "kind": result.kind,
        "config": config,
        "master_seed": result.master_seed,
        "samples": result.samples,
        "band_method": BAND_METHOD,
        "seed_derivation": "SeedSequence(master_seed, spawn_key=(axis_index, sample_index))",
        "versions": {
            "qgrand": __version__,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "python": platform.python_version(),
        },
        "wall_time_seconds": round(wall_time, 3),
        "notes": notes,
        **result.metadata,
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=2, default=str)
    return path


def _run_tasks(fn: Callable[[Any], Any], tasks: Sequence[Any], threads: int) -> List[Any]:
    """Ordered map, in-process or over a process pool."""
    if threads <= 1 or len(tasks) <= 1:
        return [fn(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, tasks))


def _check_samples(samples: int) -> None:
    if samples < 1:
        raise ValidationError(f"samples must be positive, got {samples}")
    if samples < REFERENCE_SAMPLES:
        logger.warning("using %d samples per point (reference runs use %d)", samples, REFERENCE_SAMPLES)


# --- rate sweep ------------------------------------------------------------

def _rate_sample(task: Tuple[int, int, int, int, float, int]) -> Dict[str, float]:
    n, k, num_gates, seed, p, t = task
    noise = BernoulliNoise(n, p, t)
    if k == n:
        report = trivial_report(n, noise, seed)
    else:
        report = evaluate_code(build_qrlc(n, k, num_gates, seed=seed), noise)
    values = {"bler": report.bler, "conditional_bler": report.conditional_bler}
    for w in range(1, t + 1):
        values[f"f{w}"] = report.f_by_weight.get(w, 0.0)
    values["unique_syndromes"] = float(report.unique_syndromes)
    return values


def _ideal_overlay(n: int, k: int, p: float, t: int) -> Dict[str, float]:
    S = math.ldexp(1.0, n - k)
    overlay = {"bler": 1.0 - ideal_success_probability(S, n, p, t)}
    for w in range(1, t + 1):
        overlay[f"f{w}"] = ideal_weight_fraction(S, n, w).exact
    return overlay


def sweep_rate(
    n: int,
    k_list: Sequence[int],
    t: int,
    p: float,
    num_gates: int,
    samples: int,
    master_seed: int,
    threads: int = 1,
) -> SweepResult:
    """BLER and f(t) against the code rate, with ideal-model overlay."""
    _check_samples(samples)
    result = SweepResult("rate", master_seed, samples)
    tasks = [
        (n, k, num_gates, derive_seed(master_seed, a, i), p, t)
        for a, k in enumerate(k_list)
        for i in range(samples)
    ]
    outcomes = _run_tasks(_rate_sample, tasks, threads)
    for a, k in enumerate(k_list):
        chunk = outcomes[a * samples:(a + 1) * samples]
        stats = {name: summarize([o[name] for o in chunk]) for name in chunk[0]}
        result.points.append(SweepPoint({"n": n, "k": k, "rate": k / n}, stats, _ideal_overlay(n, k, p, t)))
        logger.info("rate sweep: k=%d bler=%.3g", k, stats["bler"].mean)
    result.metadata = {"n": n, "t": t, "p": p, "num_gates": num_gates}
    return result


# --- p threshold sweep -----------------------------------------------------

def _p_sample(task: Tuple[int, int, int, int, Tuple[float, ...], int]) -> List[float]:
    n, k, num_gates, seed, p_grid, t = task
    code = build_qrlc(n, k, num_gates, seed=seed)
    profile = weight_profile(code, BernoulliNoise(n, min(p_grid), t))
    return [reprice(code, profile, p, t).bler for p in p_grid]


def p_threshold_sweep(
    n_list: Sequence[int],
    rate: float,
    p_grid: Sequence[float],
    t: int,
    samples: int,
    master_seed: int,
    num_gates: Optional[int] = None,
    gate_prefactor: float = GATE_PREFACTOR_MEAN,
    threads: int = 1,
) -> SweepResult:
    """BLER against p at fixed rate for each n; one set of codes per n serves every p."""
    _check_samples(samples)
    result = SweepResult("p-threshold", master_seed, samples)
    p_grid = tuple(float(p) for p in p_grid)
    sizes = []
    tasks = []
    for a, n in enumerate(n_list):
        k = rate_to_k(n, rate)
        gates = num_gates if num_gates is not None else recommended_gate_count(n, gate_prefactor)
        sizes.append((n, k, gates))
        tasks += [(n, k, gates, derive_seed(master_seed, a, i), p_grid, t) for i in range(samples)]
    outcomes = _run_tasks(_p_sample, tasks, threads)
    for a, (n, k, gates) in enumerate(sizes):
        chunk = outcomes[a * samples:(a + 1) * samples]
        S = math.ldexp(1.0, n - k)
        for j, p in enumerate(p_grid):
            stats = {"bler": summarize([o[j] for o in chunk])}
            overlay = {"bler": 1.0 - ideal_success_probability(S, n, p, t)}
            result.points.append(SweepPoint({"n": n, "k": k, "num_gates": gates, "p": p}, stats, overlay))
        logger.info("p sweep: n=%d done", n)
    result.metadata = {"rate": rate, "t": t}
    return result


# --- minimum gate count ----------------------------------------------------

@dataclass
class MinGatesResult:
    sweep: SweepResult
    criterion: str
    n_min: Dict[int, Optional[int]]
    m_per_n: Dict[int, Optional[float]]
    m: Optional[float]

    @property
    def censored(self) -> List[int]:
        return [n for n, value in self.n_min.items() if value is None]


def _gates_sample(task: Tuple[int, int, Tuple[int, ...], int, Tuple[int, ...]]) -> List[Dict[str, float]]:
    n, k, gate_counts, seed, t_list = task
    noise = BernoulliNoise(n, 0.01, max(t_list))
    out = []
    for code in build_qrlc_series(n, k, gate_counts, seed=seed):
        profile = weight_profile(code, noise)
        f, listed = profile.f_by_weight(), profile.listed_fraction()
        values = {}
        for t in t_list:
            values[f"f{t}"] = f.get(t, 0.0)
            values[f"f_le{t}"] = listed[t]
        out.append(values)
    return out


def gate_grid(n: int, prefactors: Sequence[float] = GATE_PREFACTOR_GRID) -> List[int]:
    return sorted({0, *(recommended_gate_count(n, m) for m in prefactors)})


def min_gates_experiment(
    n_list: Sequence[int],
    rate: float,
    t_list: Sequence[int],
    delta_threshold: float,
    samples: int,
    master_seed: int,
    criterion: str = "mean",
    prefactors: Sequence[float] = GATE_PREFACTOR_GRID,
    threads: int = 1,
    k_rule: Optional[Callable[[int], int]] = None,
) -> MinGatesResult:
    """
    Smallest gate count whose codes behave like ideal random codes, per n,
    and m fitted through the origin against n log2(n)**2.

    ``mean``: max_t |delta_f| below threshold, where delta_f compares the mean
    fraction of distinct syndromes among patterns of weight <= t with the
    ideal u/(N+1) for that list.
    ``all_t1``: |delta_P| below threshold, delta_P being the ideal P(f(1)=1)
    minus the fraction of codes with f(1)=1. An n whose ideal P(f(1)=1) is
    already below the threshold cannot be told apart from a code with no
    gates at all and is reported censored.

    ``k_rule`` maps n to k; by default k = rate_to_k(n, rate).
    """
    if criterion not in MIN_GATES_CRITERIA:
        raise ValidationError(f"criterion must be one of {MIN_GATES_CRITERIA}, got {criterion!r}")
    _check_samples(samples)
    t_list = tuple(sorted(set(t_list)))
    sample_t = tuple(sorted({1, *t_list}))
    result = SweepResult("min-gates", master_seed, samples)
    n_min: Dict[int, Optional[int]] = {}
    uninformative = []
    for a, n in enumerate(n_list):
        k = rate_to_k(n, rate) if k_rule is None else int(k_rule(n))
        if not 0 < k < n:
            raise ValidationError(f"k rule gave k={k} for n={n}; need 0 < k < n")
        grid = tuple(gate_grid(n, prefactors))
        tasks = [(n, k, grid, derive_seed(master_seed, a, i), sample_t) for i in range(samples)]
        outcomes = _run_tasks(_gates_sample, tasks, threads)
        S = math.ldexp(1.0, n - k)
        ideal = {t: ideal_fraction(S, pattern_counts(n, t).B - 1) for t in t_list}
        ideal_by_weight = {t: ideal_weight_fraction(S, n, t).exact for t in t_list}
        p_ideal = p_all_distinct(S, pattern_counts(n, 1).B - 1).exact
        informative = criterion == "mean" or p_ideal >= delta_threshold
        if not informative:
            uninformative.append(n)
            logger.warning("min gates: n=%d has ideal P(f(1)=1) = %.3g below the threshold; censored", n, p_ideal)
        n_min[n] = None
        for g, gates in enumerate(grid):
            values = {name: [o[g][name] for o in outcomes] for name in outcomes[0][g]}
            stats = {name: summarize(values[name]) for name in values}
            delta_f = max(abs(ideal[t] - stats[f"f_le{t}"].mean) / ideal[t] for t in t_list)
            p_exp = float(np.mean([math.isclose(v, 1.0) for v in values["f1"]]))
            delta_p = abs(p_ideal - p_exp)
            overlay = {f"f_le{t}": ideal[t] for t in t_list}
            overlay.update({f"f{t}": ideal_by_weight[t] for t in t_list})
            overlay.update({"delta_f": delta_f, "delta_P": delta_p, "p_all_t1": p_ideal})
            result.points.append(SweepPoint({"n": n, "k": k, "num_gates": gates}, stats, overlay))
            delta = delta_f if criterion == "mean" else delta_p
            if informative and n_min[n] is None and delta < delta_threshold:
                n_min[n] = gates
        logger.info("min gates: n=%d -> %s", n, n_min[n])
    scale = {n: n * math.log2(n) ** 2 for n in n_list}
    m_per_n = {n: (None if n_min[n] is None else n_min[n] / scale[n]) for n in n_list}
    reached = [n for n in n_list if n_min[n] is not None]
    m = (
        sum(n_min[n] * scale[n] for n in reached) / sum(scale[n] ** 2 for n in reached)
        if reached else None
    )
    result.metadata = {
        "criterion": criterion, "delta_threshold": delta_threshold, "rate": rate,
        "n_min": n_min, "m_per_n": m_per_n, "m": m, "uninformative": uninformative,
    }
    return MinGatesResult(result, criterion, n_min, m_per_n, m)


# --- stabilizer ordering study ---------------------------------------------

def default_entropy_grid(N: int, points: int = DEFAULT_ENTROPY_POINTS) -> List[float]:
    return np.linspace(0.0, math.log2(N + 1), points).tolist()


def _ordering_sample(
    task: Tuple[int, int, int, int, int, Tuple[str, ...], Tuple[float, ...]]
) -> Dict[Tuple[str, float], Tuple[float, float]]:
    n, k, num_gates, code_seed, order_seed, kinds, grid = task
    code = build_qrlc(n, k, num_gates, seed=code_seed)
    patterns = weight_one_patterns(n)
    calculator = SyndromeCalculator(code)
    syndromes = [calculator.syndrome(e) for e in patterns]
    out = {}
    for kind in kinds:
        for h in grid:
            noise = synthetic_model(patterns, kind, h)
            _, greedy = greedy_ordering(code, noise, syndromes)
            _, baseline = random_ordering(code, noise, np.random.default_rng(order_seed), syndromes)
            out[(kind, h)] = (baseline, greedy)
    return out


def ordering_study(
    n: int,
    k: int,
    entropy_grid: Optional[Sequence[float]],
    kinds: Sequence[str],
    samples: int,
    master_seed: int,
    num_gates: Optional[int] = None,
    threads: int = 1,
) -> SweepResult:
    """
    Expected stabilizer measurements to single out a weight-1 pattern:
    a fixed random order against the greedy decision tree.

    Codes are drawn once per sample (axis index 0) and reused for every
    entropy point; the random order of sample i comes from axis index 1.
    """
    _check_samples(samples)
    for kind in kinds:
        if kind not in DISTRIBUTION_KINDS:
            raise ValidationError(f"kind must be one of {DISTRIBUTION_KINDS}, got {kind!r}")
    N = 3 * n
    s = n - k
    if s < 2:
        raise ValidationError(f"the ordering study needs n - k >= 2, got {s}")
    grid = tuple(float(h) for h in (entropy_grid if entropy_grid is not None else default_entropy_grid(N)))
    gates = num_gates if num_gates is not None else recommended_gate_count(n, 2 * GATE_PREFACTOR_MEAN)
    tasks = [
        (n, k, gates, derive_seed(master_seed, 0, i), derive_seed(master_seed, 1, i), tuple(kinds), grid)
        for i in range(samples)
    ]
    outcomes = _run_tasks(_ordering_sample, tasks, threads)
    recursion = decision_tree_recursion(N, s)
    result = SweepResult("ordering", master_seed, samples)
    for kind in kinds:
        for h in grid:
            stats = {
                "random": summarize([o[(kind, h)][0] for o in outcomes]),
                "greedy": summarize([o[(kind, h)][1] for o in outcomes]),
            }
            overlay = {
                "max_entropy": math.log2(N + 1),
                "recursion": recursion.interpolated,
                "savings_bound": math.log2(math.log2(s)) + 1,
            }
            result.points.append(SweepPoint({"kind": kind, "entropy_bits": h}, stats, overlay))
    result.metadata = {"n": n, "k": k, "num_gates": gates, "patterns": N + 1}
    return result
