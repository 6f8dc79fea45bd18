"""
QGRAND decoding over syndrome tables.

Syndromes and logical signatures are packed integers: bit i of a syndrome is
1 when the error anticommutes with stabilizer i, bit l of a signature is 1
when it anticommutes with logical operator l. Two errors with equal syndromes
differ by an element of the stabilizer group exactly when their signatures are
equal as well, which is how degeneracy is decided in bulk.
"""

import csv
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .code import QuantumCode
from .config import TRIAL_LOG_COLUMNS
from .errors import DimensionError, ValidationError
from .gf2 import solve
from .noise import BernoulliNoise, NoiseModel
from .pauli import PauliString, multiply

logger = logging.getLogger(__name__)

WORD_BITS = 64


def word_count(bits: int) -> int:
    return max(1, -(-bits // WORD_BITS))


def to_words(values: Sequence[int], width: int) -> np.ndarray:
    """Pack Python ints into a (len, width) uint64 array, least significant word first."""
    mask = (1 << WORD_BITS) - 1
    out = np.zeros((len(values), width), dtype=np.uint64)
    for w in range(width):
        out[:, w] = [(v >> (WORD_BITS * w)) & mask for v in values]
    return out


def from_words(array: np.ndarray) -> List[int]:
    if array.shape[1] == 1:
        return array[:, 0].tolist()
    columns = [array[:, w].tolist() for w in range(array.shape[1])]
    return [sum(int(v) << (WORD_BITS * w) for w, v in enumerate(row)) for row in zip(*columns)]


def row_keys(array: np.ndarray) -> np.ndarray:
    """One sortable key per row of a word array (for np.unique)."""
    if array.shape[1] == 1:
        return array[:, 0]
    contiguous = np.ascontiguousarray(array)
    return contiguous.view(np.dtype((np.void, contiguous.dtype.itemsize * contiguous.shape[1]))).ravel()


@dataclass(frozen=True)
class Syndrome:
    bits: int
    s: int

    @property
    def is_zero(self) -> bool:
        return self.bits == 0

    def bit(self, i: int) -> int:
        return (self.bits >> i) & 1

    def to_hex(self) -> str:
        return format(self.bits, f"0{max(1, (self.s + 3) // 4)}x")

    def __xor__(self, other: "Syndrome") -> "Syndrome":
        if self.s != other.s:
            raise DimensionError(f"syndrome lengths differ: {self.s} vs {other.s}")
        return Syndrome(self.bits ^ other.bits, self.s)

    def __int__(self) -> int:
        return self.bits


def _commutation_bits(e: PauliString, rows: Sequence[int]) -> int:
    m = e.symplectic()
    bits = 0
    for i, row in enumerate(rows):
        bits |= ((m & row).bit_count() & 1) << i
    return bits


def syndrome_of(code: QuantumCode, e: PauliString) -> Syndrome:
    """M_E A^T over GF(2)."""
    if e.n != code.n:
        raise DimensionError(f"error acts on {e.n} qubits, code on {code.n}")
    return Syndrome(_commutation_bits(e, code.parity_check), code.s)


class SyndromeCalculator:
    """Per-qubit, per-letter syndrome and signature tables of one code."""

    def __init__(self, code: QuantumCode):
        self.code = code
        self.n, self.s = code.n, code.s
        self.signature_bits = len(code.logicals)
        self.letter_syndromes = self._letter_table(code.stabilizers)
        self.letter_signatures = self._letter_table(code.logicals)
        self.syndrome_width = word_count(self.s)
        self.signature_width = word_count(self.signature_bits)
        self.syndrome_words = self._as_words(self.letter_syndromes, self.syndrome_width)
        self.signature_words = self._as_words(self.letter_signatures, self.signature_width)

    def _letter_table(self, rows: Sequence[PauliString]) -> List[Tuple[int, int, int]]:
        table = []
        for q in range(self.n):
            sx = sz = 0
            for i, p in enumerate(rows):
                sx |= ((p.z >> q) & 1) << i  # X_q anticommutes with Z and Y factors
                sz |= ((p.x >> q) & 1) << i
            table.append((sx, sx ^ sz, sz))
        return table

    def _as_words(self, table: Sequence[Tuple[int, int, int]], width: int) -> np.ndarray:
        flat = to_words([v for triple in table for v in triple], width)
        return flat.reshape(self.n, 3, width)

    def _fold(self, e: PauliString, table: Sequence[Tuple[int, int, int]]) -> int:
        if e.n != self.n:
            raise DimensionError(f"error acts on {e.n} qubits, code on {self.n}")
        bits = 0
        for q in e.support():
            letter = ((e.x >> q) & 1) | (((e.z >> q) & 1) << 1)  # 1 X, 3 Y, 2 Z
            bits ^= table[q][(0, 0, 2, 1)[letter]]
        return bits

    def syndrome(self, e: PauliString) -> int:
        return self._fold(e, self.letter_syndromes)

    def signature(self, e: PauliString) -> int:
        return self._fold(e, self.letter_signatures)

    def class_words(self, positions: np.ndarray, letters: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Syndrome and signature words of a Bernoulli weight class, in class order."""
        t = positions.shape[1]
        count = positions.shape[0] * letters.shape[0]
        syndromes = np.zeros((positions.shape[0], letters.shape[0], self.syndrome_width), dtype=np.uint64)
        signatures = np.zeros((positions.shape[0], letters.shape[0], self.signature_width), dtype=np.uint64)
        for j in range(t):
            q, c = positions[:, j][:, None], letters[:, j][None, :]
            syndromes ^= self.syndrome_words[q, c]
            signatures ^= self.signature_words[q, c]
        return syndromes.reshape(count, -1), signatures.reshape(count, -1)

    def noise_words(self, noise: NoiseModel) -> Tuple[np.ndarray, np.ndarray]:
        """Syndrome and signature words of every listed pattern, in noise order."""
        if noise.n != self.n:
            raise DimensionError(f"noise acts on {noise.n} qubits, code on {self.n}")
        if isinstance(noise, BernoulliNoise):
            parts = [self.class_words(*noise.class_arrays(t)) for t in noise.class_order]
            return np.concatenate([a for a, _ in parts]), np.concatenate([b for _, b in parts])
        patterns = [e for _, e in noise]
        return (
            to_words([self.syndrome(e) for e in patterns], self.syndrome_width),
            to_words([self.signature(e) for e in patterns], self.signature_width),
        )


def stabilizer_decomposition(code: QuantumCode, e: PauliString) -> Optional[Tuple[int, int]]:
    """
    Write ``e`` as i**phase times a product of stabilizer generators.

    Returns (generator mask, phase) or None when the phaseless part of ``e``
    is outside the stabilizer group.
    """
    mask = solve([p.symplectic() for p in code.stabilizers], e.symplectic())
    if mask is None:
        return None
    product = PauliString.identity(code.n)
    for i, p in enumerate(code.stabilizers):
        if (mask >> i) & 1:
            product = multiply(product, p)
    return mask, (e.phase - product.phase) % 4


# --- syndrome tables -------------------------------------------------------

@dataclass(frozen=True)
class CosetLeader:
    index: int
    probability: float


@dataclass(frozen=True)
class DegeneratePair:
    """Leader ``leader`` and pattern ``other`` share syndrome and logical action."""

    leader: int
    other: int
    stabilizer_mask: int
    phase: int


@dataclass
class SyndromeTable:
    code: QuantumCode
    noise: NoiseModel
    calculator: SyndromeCalculator
    syndromes: List[int]
    signatures: List[int]
    leaders: Dict[int, CosetLeader] = field(default_factory=dict)
    collisions: Dict[int, int] = field(default_factory=dict)
    degenerate_pairs: List[DegeneratePair] = field(default_factory=list)
    degenerate_count: int = 0
    n_p: int = 0
    n_j: int = 0

    @property
    def s(self) -> int:
        return self.code.s

    @property
    def unique_syndromes(self) -> int:
        return len(self.leaders)

    @property
    def success_probability(self) -> float:
        return math.fsum(leader.probability for leader in self.leaders.values())

    def precomputed(self, index: int) -> bool:
        """Whether pattern ``index`` belongs to the precomputed part N_P."""
        return index <= self.n_p

    def leader_pattern(self, syndrome: int) -> Optional[PauliString]:
        leader = self.leaders.get(syndrome)
        return None if leader is None else self.noise.pattern(leader.index)


def build_table(
    code: QuantumCode,
    noise: NoiseModel,
    precompute_limit: Optional[int] = None,
    max_recorded_pairs: int = 10_000,
) -> SyndromeTable:
    """
    Stream N in order; the first pattern of each syndrome becomes its leader.

    Every later pattern is a collision; it is degenerate when its signature
    matches the leader's. Up to ``max_recorded_pairs`` degenerate pairs are
    kept with their stabilizer decomposition, all of them are counted.
    """
    if noise.n != code.n:
        raise DimensionError(f"noise acts on {noise.n} qubits, code on {code.n}")
    calculator = SyndromeCalculator(code)
    syndrome_words, signature_words = calculator.noise_words(noise)
    table = SyndromeTable(
        code=code,
        noise=noise,
        calculator=calculator,
        syndromes=from_words(syndrome_words),
        signatures=from_words(signature_words),
    )
    probabilities = noise.probabilities()
    leaders, collisions = table.leaders, table.collisions
    for index, (syndrome, signature) in enumerate(zip(table.syndromes, table.signatures)):
        leader = leaders.get(syndrome)
        if leader is None:
            leaders[syndrome] = CosetLeader(index, float(probabilities[index]))
            continue
        collisions[syndrome] = collisions.get(syndrome, 0) + 1
        if signature == table.signatures[leader.index]:
            table.degenerate_count += 1
            if len(table.degenerate_pairs) < max_recorded_pairs:
                product = multiply(noise.pattern(leader.index), noise.pattern(index))
                decomposition = stabilizer_decomposition(code, product)
                if decomposition is None:
                    raise AssertionError(
                        f"patterns {leader.index} and {index} share syndrome and signature "
                        "but differ by a non-stabilizer"
                    )
                mask, phase = decomposition
                table.degenerate_pairs.append(DegeneratePair(leader.index, index, mask, phase))
    table.n_p = noise.N if precompute_limit is None else min(noise.N, precompute_limit)
    table.n_j = noise.N - table.n_p
    logger.debug(
        "syndrome table: %d patterns, %d occupied syndromes, %d degenerate collisions",
        len(table.syndromes), len(leaders), table.degenerate_count,
    )
    return table


# --- decoding --------------------------------------------------------------

class DecodeStatus(str, Enum):
    NO_ERROR = "no_error"
    CORRECTED = "corrected"
    ABANDONED = "abandoned"


@dataclass(frozen=True)
class DecodeResult:
    status: DecodeStatus
    correction: Optional[PauliString] = None
    index: Optional[int] = None


def decode(
    table: SyndromeTable, syndrome: Union[Syndrome, int], abandon_after: Optional[int] = None
) -> DecodeResult:
    """Look up the coset leader; abandonment is a result, not an exception."""
    bits = int(syndrome)
    if bits == 0:
        return DecodeResult(DecodeStatus.NO_ERROR, PauliString.identity(table.code.n), 0)
    leader = table.leaders.get(bits)
    if leader is None or (abandon_after is not None and leader.index > abandon_after):
        return DecodeResult(DecodeStatus.ABANDONED)
    return DecodeResult(DecodeStatus.CORRECTED, table.noise.pattern(leader.index), leader.index)


class DecodingMode(str, Enum):
    MEMBERSHIP_TEST = "membership_test"
    SYNDROME_DECODING = "syndrome_decoding"


@dataclass(frozen=True)
class TrialRecord:
    success: bool
    iterations: int
    stabilizer_measurements: int
    status: DecodeStatus
    true_index: int
    true_pattern: Optional[PauliString]
    syndrome: int
    decoded_index: Optional[int] = None
    decoded_pattern: Optional[PauliString] = None
    rejected_candidates: int = 0
    rejected_measurements: int = 0


def _first_one(r: int) -> int:
    """Bits read in order 0, 1, ... until the first 1."""
    return (r & -r).bit_length()


def simulate_trial(
    code: QuantumCode,
    noise: NoiseModel,
    table: SyndromeTable,
    rng: np.random.Generator,
    mode: Union[DecodingMode, str] = DecodingMode.MEMBERSHIP_TEST,
    abandon_after: Optional[int] = None,
) -> TrialRecord:
    """
    One decoding round on a sampled error.

    Residual draws (patterns outside N) always count as failures; their
    syndrome still drives the candidate loop.
    """
    mode = DecodingMode(mode)
    calc = table.calculator
    true_index = noise.sample_index(rng)
    if true_index >= 0:
        true_pattern = noise.pattern(true_index)
        syndrome, signature = table.syndromes[true_index], table.signatures[true_index]
    else:
        true_pattern = noise.sample_residual(rng)
        if true_pattern is not None:
            syndrome, signature = calc.syndrome(true_pattern), calc.signature(true_pattern)
        else:
            bits = rng.integers(0, 2, size=code.s)
            syndrome, signature = sum(int(b) << i for i, b in enumerate(bits)), -1

    def matches(index: int) -> bool:
        return true_index >= 0 and (index == true_index or table.signatures[index] == signature)

    if mode == DecodingMode.SYNDROME_DECODING:
        result = decode(table, syndrome, abandon_after)
        if result.status == DecodeStatus.ABANDONED:
            success = False
        elif result.status == DecodeStatus.NO_ERROR:
            success = true_index >= 0 and signature == 0
        else:
            success = matches(result.index)
        return TrialRecord(
            success=success,
            iterations=1,
            stabilizer_measurements=code.s,
            status=result.status,
            true_index=true_index,
            true_pattern=true_pattern,
            syndrome=syndrome,
            decoded_index=result.index,
            decoded_pattern=result.correction,
        )

    limit = len(table.syndromes) if abandon_after is None else min(len(table.syndromes), abandon_after + 1)
    measurements = rejected = 0
    for index in range(limit):
        residue = syndrome ^ table.syndromes[index]
        if residue:
            measurements += _first_one(residue)
            rejected += 1
            continue
        measurements += code.s
        return TrialRecord(
            success=matches(index),
            iterations=index + 1,
            stabilizer_measurements=measurements,
            status=DecodeStatus.NO_ERROR if index == 0 else DecodeStatus.CORRECTED,
            true_index=true_index,
            true_pattern=true_pattern,
            syndrome=syndrome,
            decoded_index=index,
            decoded_pattern=noise.pattern(index),
            rejected_candidates=rejected,
            rejected_measurements=measurements - code.s,
        )
    return TrialRecord(
        success=False,
        iterations=limit,
        stabilizer_measurements=measurements,
        status=DecodeStatus.ABANDONED,
        true_index=true_index,
        true_pattern=true_pattern,
        syndrome=syndrome,
        rejected_candidates=rejected,
        rejected_measurements=measurements,
    )


def write_trial_log(records: Iterable[TrialRecord], s: int, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    width = max(1, (s + 3) // 4)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(TRIAL_LOG_COLUMNS)
        for trial, r in enumerate(records):
            writer.writerow([
                trial,
                "" if r.true_pattern is None else r.true_pattern.to_label(signed=False),
                format(r.syndrome, f"0{width}x"),
                "" if r.decoded_pattern is None else r.decoded_pattern.to_label(signed=False),
                int(r.success),
                r.iterations,
                r.stabilizer_measurements,
            ])
    return path


# --- measurement cost ------------------------------------------------------

def expected_scan_length(s: int, p: float, count_no_hit: bool = False) -> float:
    """
    sum_{i=1..s} i (1-p)**(i-1) p: expected bits read until the first 1.

    The sum leaves out the branch where all s bits read 0; ``count_no_hit``
    adds that branch as s (1-p)**s.
    """
    if s < 1:
        raise ValidationError(f"s must be at least 1, got {s}")
    i = np.arange(1, s + 1, dtype=float)
    total = float(np.sum(i * (1 - p) ** (i - 1) * p))
    if count_no_hit:
        total += s * (1 - p) ** s
    return total


def scan_length_half(s: int, count_no_hit: bool = False) -> float:
    """Closed form of ``expected_scan_length(s, 1/2)``: 2 - (s+2)/2**s."""
    if s < 1:
        raise ValidationError(f"s must be at least 1, got {s}")
    if count_no_hit:
        return 2 - math.ldexp(2, -s)
    return 2 - math.ldexp(s + 2, -s)


@dataclass(frozen=True)
class MeasurementCost:
    s: int
    c_s_half: float
    c_s_p0: float
    iterations_I: float
    total_C: float
    bound: float
    iterations_listed: float
    total_C_listed: float
    count_no_hit: bool = False


def _check_bound(total: float, bound: float, iterations: float) -> None:
    if iterations > 1 + 1e-12:
        if not total < bound:
            raise AssertionError(f"measurement cost {total} violates bound {bound}")
    elif iterations >= 1 - 1e-12 and not math.isclose(total, bound, rel_tol=1e-9, abs_tol=1e-9) and total > bound:
        raise AssertionError(f"measurement cost {total} violates bound {bound}")


def measurement_cost(s: int, noise: NoiseModel, count_no_hit: bool = False) -> MeasurementCost:
    """
    Expected stabilizer measurements of the membership-test loop.

    ``iterations_I`` is sum (i+1) p_i over the listed patterns. It drops below
    1 when the residual mass is large, so ``iterations_listed`` also reports
    I conditioned on the error being listed, with ``total_C_listed`` to match.
    """
    c_half = scan_length_half(s, count_no_hit)
    p0 = noise.p0
    iterations = noise.expected_index()
    listed = 1.0 - noise.residual
    conditional = iterations / listed if listed > 0 else 1.0
    total = s + (iterations - 1) * c_half
    total_listed = s + (conditional - 1) * c_half
    bound = s - 2 + 2 * iterations
    _check_bound(total, bound, iterations)
    _check_bound(total_listed, s - 2 + 2 * conditional, conditional)
    return MeasurementCost(
        s=s,
        c_s_half=c_half,
        c_s_p0=p0 * s + (1 - p0) * c_half,
        iterations_I=iterations,
        total_C=total,
        bound=bound,
        iterations_listed=conditional,
        total_C_listed=total_listed,
        count_no_hit=count_no_hit,
    )


@dataclass(frozen=True)
class IterationCost:
    index: int
    remaining_mass: float
    conditional_probability: float
    expected_measurements: float


def iteration_costs(s: int, noise: NoiseModel, limit: Optional[int] = None) -> List[IterationCost]:
    """
    Per-candidate cost: with q_i = 1 - sum_{j<i} p_j, candidate i is the right
    one with probability p_i / q_i, costing s, and otherwise ~c_s_half.
    """
    c_half = scan_length_half(s)
    out = []
    remaining = 1.0
    for i, (p, _) in enumerate(noise):
        if limit is not None and i >= limit:
            break
        conditional = min(1.0, p / remaining) if remaining > 0 else 1.0
        out.append(IterationCost(i, remaining, conditional, conditional * s + (1 - conditional) * c_half))
        remaining = max(0.0, remaining - p)
    return out


# --- stabilizer ordering ---------------------------------------------------

@dataclass
class TreeNode:
    survivors: Tuple[int, ...]
    depth: int
    bit: Optional[int] = None
    zero: Optional["TreeNode"] = None
    one: Optional["TreeNode"] = None

    @property
    def is_leaf(self) -> bool:
        return self.bit is None

    @property
    def ambiguous(self) -> bool:
        return self.is_leaf and len(self.survivors) > 1


@dataclass
class DecisionTree:
    root: TreeNode
    s: int
    probabilities: np.ndarray

    def leaves(self) -> List[TreeNode]:
        out, stack = [], [self.root]
        while stack:
            node = stack.pop()
            if node.is_leaf:
                out.append(node)
            else:
                stack.extend((node.one, node.zero))
        return out

    @property
    def expected_measurements(self) -> float:
        total = float(self.probabilities.sum())
        if total <= 0:
            return 0.0
        depth_mass = sum(float(self.probabilities[list(leaf.survivors)].sum()) * leaf.depth for leaf in self.leaves())
        return depth_mass / total

    def classify(self, syndrome: int) -> Tuple[Tuple[int, ...], int]:
        """Walk the tree: (surviving pattern indices, measurements made)."""
        node = self.root
        while not node.is_leaf:
            node = node.one if (syndrome >> node.bit) & 1 else node.zero
        return node.survivors, node.depth


def _bit_matrix(syndromes: Sequence[int], s: int) -> np.ndarray:
    return np.array([[(v >> b) & 1 for b in range(s)] for v in syndromes], dtype=bool).reshape(len(syndromes), s)


def _candidate_syndromes(code: QuantumCode, noise: NoiseModel, syndrome_matrix: Optional[Sequence[int]]) -> List[int]:
    if syndrome_matrix is not None:
        if len(syndrome_matrix) != len(noise):
            raise DimensionError("one precomputed syndrome per noise entry is required")
        return list(syndrome_matrix)
    return from_words(SyndromeCalculator(code).noise_words(noise)[0])


ChooseBit = Callable[[np.ndarray, np.ndarray, np.ndarray], int]


def _grow_tree(bits: np.ndarray, probabilities: np.ndarray, choose: ChooseBit) -> DecisionTree:
    """
    Split nodes until every leaf is a single pattern or no unused stabilizer
    separates its survivors. ``choose(sub, weights, candidates)`` picks the
    bit among ``candidates``, the columns that split ``sub``.
    """
    root = TreeNode(tuple(range(bits.shape[0])), 0)
    stack = [root]
    while stack:
        node = stack.pop()
        if len(node.survivors) <= 1:
            continue
        idx = np.array(node.survivors)
        sub = bits[idx]
        ones = sub.sum(axis=0)
        candidates = np.flatnonzero((ones > 0) & (ones < len(idx)))
        if not len(candidates):
            continue
        bit = int(choose(sub, probabilities[idx], candidates))
        node.bit = bit
        node.zero = TreeNode(tuple(int(i) for i in idx[~sub[:, bit]]), node.depth + 1)
        node.one = TreeNode(tuple(int(i) for i in idx[sub[:, bit]]), node.depth + 1)
        stack.extend((node.zero, node.one))
    return DecisionTree(root, bits.shape[1], probabilities)


def _most_even_split(sub: np.ndarray, weights: np.ndarray, candidates: np.ndarray) -> int:
    count = len(sub)
    ones = sub.sum(axis=0)
    total = float(weights.sum())
    mass_one = weights @ sub
    mass_zero = total - mass_one
    imbalance = np.abs(mass_one - mass_zero) / total if total > 0 else np.zeros(sub.shape[1])
    heavy = np.where(
        np.isclose(mass_one, mass_zero, rtol=1e-12, atol=1e-300),
        np.maximum(ones, count - ones),
        np.where(mass_one > mass_zero, ones, count - ones),
    )
    order = np.lexsort((candidates, heavy[candidates], np.round(imbalance[candidates], 12)))
    return int(candidates[order[0]])


def greedy_ordering(
    code: QuantumCode, noise: NoiseModel, syndrome_matrix: Optional[Sequence[int]] = None
) -> Tuple[DecisionTree, float]:
    """
    Adaptive measurement order: at every node measure the unused stabilizer
    whose outcome splits the surviving probability mass most evenly.

    Ties go to the bit leaving fewer survivors on the heavier side, then to
    the lower bit index.
    """
    syndromes = _candidate_syndromes(code, noise, syndrome_matrix)
    tree = _grow_tree(_bit_matrix(syndromes, code.s), noise.probabilities(), _most_even_split)
    return tree, tree.expected_measurements


def random_ordering(
    code: QuantumCode,
    noise: NoiseModel,
    rng: np.random.Generator,
    syndrome_matrix: Optional[Sequence[int]] = None,
) -> Tuple[DecisionTree, float]:
    """
    Naive adaptive baseline: at every node measure a stabilizer drawn
    uniformly from those that still split the survivors.
    """
    syndromes = _candidate_syndromes(code, noise, syndrome_matrix)
    tree = _grow_tree(
        _bit_matrix(syndromes, code.s),
        noise.probabilities(),
        lambda sub, weights, candidates: candidates[rng.integers(len(candidates))],
    )
    return tree, tree.expected_measurements


def fixed_ordering(
    syndromes: Sequence[int], probabilities: np.ndarray, order: Sequence[int]
) -> float:
    """
    Expected measurements when bits are read in ``order`` without skipping
    until the pattern is the only one left with the observed prefix.
    """
    probabilities = np.asarray(probabilities, dtype=float)
    s = len(order)
    bits = _bit_matrix(syndromes, s)[:, list(order)] if s else np.zeros((len(syndromes), 0), dtype=bool)
    depth = np.full(len(syndromes), s, dtype=float)
    settled = np.zeros(len(syndromes), dtype=bool)
    if len(syndromes) == 1:
        settled[:] = True
        depth[:] = 0
    for m in range(1, s + 1):
        if settled.all():
            break
        _, inverse, counts = np.unique(bits[:, :m], axis=0, return_inverse=True, return_counts=True)
        unique_now = counts[inverse.reshape(-1)] == 1
        newly = unique_now & ~settled
        depth[newly] = m
        settled |= newly
    total = float(probabilities.sum())
    return float(probabilities @ depth) / total if total > 0 else 0.0
