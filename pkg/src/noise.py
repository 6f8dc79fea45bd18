"""
Ordered noise statistics N = {(p_i, E_i)}.

Two flavours share the NoiseModel interface:

* ``NoiseModel`` holds an explicit, materialized list of entries (synthetic
  distributions, user CSV files, adapted statistics);
* ``BernoulliNoise`` describes the i.i.d. depolarizing channel truncated at
  weight t and streams its patterns class by class, so that ~10**7 patterns
  never have to exist as Python objects at once.

Inside a weight class patterns are ordered by support (``itertools.combinations``
order) and then by letters X < Y < Z (``itertools.product`` order).
"""

import csv
import itertools
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import brentq
from scipy.special import logsumexp
from scipy.stats import binom

from .config import DISTRIBUTION_KINDS, ERROR_LETTERS, NOISE_CSV_COLUMNS, P_MAX_DEPOLARIZING
from .errors import NoiseModelError, ValidationError
from .pauli import LETTER_BITS, PauliString

logger = logging.getLogger(__name__)

SUM_TOLERANCE = 1e-12


class NoiseEntry(NamedTuple):
    probability: float
    pattern: PauliString


class PatternCounts(NamedTuple):
    A: int
    B: int


def pattern_counts(n: int, t: int) -> PatternCounts:
    """A_t = 3**t C(n, t) patterns of weight t and B_t = sum of A_t' for t' <= t."""
    if not 0 <= t <= n:
        raise ValidationError(f"need 0 <= t <= n, got n={n}, t={t}")
    a_t = 3**t * math.comb(n, t)
    b_t = sum(3**w * math.comb(n, w) for w in range(t + 1))
    return PatternCounts(a_t, b_t)


def _entropy_bits(probabilities: np.ndarray) -> float:
    positive = probabilities[probabilities > 0]
    return float(-(positive * np.log2(positive)).sum())


def channel_entropy(n: int, p: float) -> float:
    """Entropy in bits of the untruncated n-qubit depolarizing channel."""
    if not 0 <= p <= 1:
        raise NoiseModelError(f"p must lie in [0, 1], got {p}")
    if p in (0, 1):
        h_b = 0.0
    else:
        h_b = -p * math.log2(p) - (1 - p) * math.log2(1 - p)
    return n * (h_b + p * math.log2(3))


class NoiseModel:
    """Explicit ordered noise statistics; entry 0 is the identity."""

    def __init__(
        self,
        n: int,
        entries: Sequence[NoiseEntry],
        residual: float = 0.0,
        t_max: Optional[int] = None,
        check_order: bool = True,
    ):
        self.n = n
        self.t_max = t_max
        self._entries = [NoiseEntry(float(p), e) for p, e in entries]
        self.residual = float(residual)
        self._validate(check_order)

    def _validate(self, check_order: bool) -> None:
        if not self._entries:
            raise NoiseModelError("noise statistics need at least the identity entry")
        if self._entries[0].pattern.weight != 0:
            raise NoiseModelError("entry 0 must be the identity pattern")
        seen = set()
        previous = math.inf
        for p, e in self._entries:
            if e.n != self.n:
                raise NoiseModelError(f"pattern {e} does not act on {self.n} qubits")
            if p < 0:
                raise NoiseModelError(f"negative probability for {e}")
            if check_order and p > previous * (1 + 1e-12):
                raise NoiseModelError("entries must be ordered by non-increasing probability")
            if e.key in seen:
                raise NoiseModelError(f"duplicate pattern {e.to_label(signed=False)}")
            seen.add(e.key)
            previous = p
        if self.residual < -SUM_TOLERANCE:
            raise NoiseModelError(f"negative residual {self.residual}")
        total = math.fsum(p for p, _ in self._entries) + self.residual
        if abs(total - 1) > 1e-9:
            raise NoiseModelError(f"probabilities sum to {total!r}, expected 1")

    # --- sequence interface -------------------------------------------------

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[NoiseEntry]:
        return iter(self._entries)

    def __getitem__(self, index: int) -> NoiseEntry:
        return self._entries[index]

    @property
    def N(self) -> int:
        """Number of listed patterns besides the identity."""
        return len(self) - 1

    @property
    def p0(self) -> float:
        return self[0].probability

    def pattern(self, index: int) -> PauliString:
        return self[index].pattern

    def probabilities(self) -> np.ndarray:
        return np.array([p for p, _ in self._entries], dtype=float)

    def weights(self) -> np.ndarray:
        return np.array([e.weight for _, e in self._entries], dtype=np.int64)

    @property
    def entropy_bits(self) -> float:
        return entropy(self)

    def expected_index(self) -> float:
        """Sum of (i + 1) p_i over the listed entries."""
        probs = self.probabilities()
        return float(np.dot(np.arange(1, len(probs) + 1), probs))

    # --- sampling -----------------------------------------------------------

    def sample_index(self, rng: np.random.Generator) -> int:
        """Index of a sampled entry, or -1 when the draw falls in the residual."""
        cumulative = np.cumsum(self.probabilities())
        index = int(np.searchsorted(cumulative, rng.random() * (cumulative[-1] + self.residual), side="right"))
        return index if index < len(self) else -1

    def sample_residual(self, rng: np.random.Generator) -> Optional[PauliString]:
        """A pattern outside the listed set, when the model can say which one."""
        return None

    # --- adaptation ---------------------------------------------------------

    def truncate(self, min_probability: float = 0.0, max_entries: Optional[int] = None) -> "NoiseModel":
        """Drop low-probability entries, moving their mass to the residual."""
        keep = [e for e in self._entries if e.probability >= min_probability or e.pattern.weight == 0]
        if max_entries is not None:
            keep = keep[: max(1, max_entries)]
        dropped = math.fsum(p for p, _ in self._entries) - math.fsum(p for p, _ in keep)
        return NoiseModel(self.n, keep, self.residual + dropped, self.t_max)

    def reweighted(self, probabilities: Sequence[float], residual: Optional[float] = None) -> "NoiseModel":
        """Same pattern set with new probabilities, re-sorted (identity stays first)."""
        if len(probabilities) != len(self):
            raise NoiseModelError(f"expected {len(self)} probabilities, got {len(probabilities)}")
        identity = NoiseEntry(float(probabilities[0]), self._entries[0].pattern)
        rest = sorted(
            (NoiseEntry(float(p), e.pattern) for p, e in zip(probabilities[1:], self._entries[1:])),
            key=lambda entry: -entry.probability,
        )
        if rest and rest[0].probability > identity.probability:
            raise NoiseModelError("the identity must remain the most likely pattern")
        if residual is None:
            residual = 1.0 - math.fsum(probabilities)
        return NoiseModel(self.n, [identity, *rest], residual, self.t_max)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n}, N={self.N}, residual={self.residual:.3g})"


class BernoulliNoise(NoiseModel):
    """
    Depolarizing channel: each qubit suffers X, Y or Z with probability p/3.

    Patterns of weight t have probability (p/3)**t (1-p)**(n-t), so weight
    classes listed by increasing weight are in non-increasing probability
    order as long as p <= 3/4. Larger p is rejected.
    """

    def __init__(self, n: int, p: float, t_max: int):
        if not 0 < p <= P_MAX_DEPOLARIZING:
            raise NoiseModelError(f"p must lie in (0, {P_MAX_DEPOLARIZING}], got {p}")
        if not 0 <= t_max <= n:
            raise NoiseModelError(f"need 0 <= t_max <= n, got n={n}, t_max={t_max}")
        self.n = n
        self.p = float(p)
        self.t_max = t_max
        weights = range(t_max + 1)
        self.class_order: Tuple[int, ...] = tuple(weights)
        self.class_sizes = {t: pattern_counts(n, t).A for t in weights}
        offsets, start = {}, 0
        for t in self.class_order:
            offsets[t] = start
            start += self.class_sizes[t]
        self.class_offsets = offsets
        self._length = start
        self.residual = float(binom.sf(t_max, n, p))

    # per-pattern and per-class probabilities

    def log_pattern_probability(self, t: int) -> float:
        return t * math.log(self.p / 3) + (self.n - t) * math.log1p(-self.p)

    def pattern_probability(self, t: int) -> float:
        return math.exp(self.log_pattern_probability(t))

    def class_probability(self, t: int) -> float:
        """A_t (p/3)**t (1-p)**(n-t), i.e. the binomial mass at t."""
        return float(binom.pmf(t, self.n, self.p))

    # sequence interface without materializing

    def __len__(self) -> int:
        return self._length

    def __iter__(self) -> Iterator[NoiseEntry]:
        for t in self.class_order:
            p_t = self.pattern_probability(t)
            for pattern in self.class_patterns(t):
                yield NoiseEntry(p_t, pattern)

    def __getitem__(self, index: int) -> NoiseEntry:
        t, offset = self.locate(index)
        return NoiseEntry(self.pattern_probability(t), self.class_pattern(t, offset))

    def locate(self, index: int) -> Tuple[int, int]:
        """(weight class, offset inside the class) of a global index."""
        if index < 0:
            index += len(self)
        if not 0 <= index < len(self):
            raise IndexError(index)
        for t in self.class_order:
            if index < self.class_offsets[t] + self.class_sizes[t]:
                return t, index - self.class_offsets[t]
        raise IndexError(index)

    @property
    def p0(self) -> float:
        return self.pattern_probability(0)

    def probabilities(self) -> np.ndarray:
        return np.concatenate(
            [np.full(self.class_sizes[t], self.pattern_probability(t)) for t in self.class_order]
        )

    def weights(self) -> np.ndarray:
        return np.concatenate([np.full(self.class_sizes[t], t, dtype=np.int64) for t in self.class_order])

    def expected_index(self) -> float:
        total = 0.0
        for t in self.class_order:
            size, start = self.class_sizes[t], self.class_offsets[t]
            total += self.pattern_probability(t) * (size * start + size * (size + 1) / 2)
        return total

    # enumeration

    def class_arrays(self, t: int) -> Tuple[np.ndarray, np.ndarray]:
        """
        Supports (C(n,t), t) and letter codes (3**t, t) of weight class t.

        Pattern ``r`` of the class is ``positions[r // 3**t]`` carrying
        ``letters[r % 3**t]`` (0 = X, 1 = Y, 2 = Z).
        """
        flat = np.fromiter(
            itertools.chain.from_iterable(itertools.combinations(range(self.n), t)), dtype=np.int64
        )
        positions = flat.reshape(-1, t) if t else np.zeros((1, 0), dtype=np.int64)
        letters = np.array(list(itertools.product(range(3), repeat=t)), dtype=np.int64).reshape(3**t, t)
        return positions, letters

    def class_patterns(self, t: int) -> Iterator[PauliString]:
        for support in itertools.combinations(range(self.n), t):
            for letters in itertools.product(ERROR_LETTERS, repeat=t):
                yield _pattern(self.n, support, letters)

    def class_pattern(self, t: int, offset: int) -> PauliString:
        per_support = 3**t
        support_rank, letter_rank = divmod(offset, per_support)
        support = next(itertools.islice(itertools.combinations(range(self.n), t), support_rank, None))
        letters = []
        for _ in range(t):
            letter_rank, code = divmod(letter_rank, 3)
            letters.append(ERROR_LETTERS[code])
        return _pattern(self.n, support, letters[::-1])

    def sample_index(self, rng: np.random.Generator) -> int:
        masses = [self.class_probability(t) for t in self.class_order] + [self.residual]
        masses = np.asarray(masses) / math.fsum(masses)
        choice = int(rng.choice(len(masses), p=masses))
        if choice == len(self.class_order):
            return -1
        t = self.class_order[choice]
        return self.class_offsets[t] + int(rng.integers(self.class_sizes[t]))

    def sample_residual(self, rng: np.random.Generator) -> Optional[PauliString]:
        """A pattern of weight above t_max, by rejection sampling the channel."""
        if self.t_max == self.n:
            return None
        while True:
            hit = rng.random(self.n) < self.p
            if hit.sum() > self.t_max:
                codes = rng.integers(0, 3, size=self.n)
                support = np.flatnonzero(hit)
                return _pattern(self.n, support.tolist(), [ERROR_LETTERS[c] for c in codes[support]])

    def materialize(self) -> NoiseModel:
        return NoiseModel(self.n, list(self), self.residual, self.t_max)

    def truncate(self, min_probability: float = 0.0, max_entries: Optional[int] = None) -> NoiseModel:
        return self.materialize().truncate(min_probability, max_entries)

    def reweighted(self, probabilities: Sequence[float], residual: Optional[float] = None) -> NoiseModel:
        return self.materialize().reweighted(probabilities, residual)

    def __repr__(self) -> str:
        return f"BernoulliNoise(n={self.n}, p={self.p}, t_max={self.t_max})"


def _pattern(n: int, support: Sequence[int], letters: Sequence[str]) -> PauliString:
    x = z = 0
    for q, letter in zip(support, letters):
        xb, zb = LETTER_BITS[letter]
        x |= xb << q
        z |= zb << q
    return PauliString(n, x, z, (x & z).bit_count())


def bernoulli_model(n: int, p: float, t_max: int) -> BernoulliNoise:
    return BernoulliNoise(n, p, t_max)


def entropy(model: NoiseModel) -> float:
    """Shannon entropy in bits of the listed entries (the residual is not a symbol)."""
    if isinstance(model, BernoulliNoise):
        total = 0.0
        for t in model.class_order:
            log_p = model.log_pattern_probability(t)
            total -= model.class_sizes[t] * math.exp(log_p) * log_p / math.log(2)
        return total
    return _entropy_bits(model.probabilities())


# --- synthetic distributions ----------------------------------------------

def _decaying(N: int, alpha: float) -> np.ndarray:
    log_weights = -alpha * np.arange(N + 1)
    return np.exp(log_weights - logsumexp(log_weights))


def _constant(N: int, eps: float) -> np.ndarray:
    probs = np.full(N + 1, eps)
    probs[0] = 1 - N * eps
    return probs


def synthetic_distributions(kind: str, N: int, target_entropy: float) -> np.ndarray:
    """
    Probabilities p_0 >= p_1 >= ... >= p_N with entropy ``target_entropy`` bits.

    ``decaying``: p_i proportional to exp(-alpha i); ``constant``: p_i = eps
    for i >= 1. alpha or eps is found by root bracketing.
    """
    if kind not in DISTRIBUTION_KINDS:
        raise ValidationError(f"kind must be one of {DISTRIBUTION_KINDS}, got {kind!r}")
    if N < 0:
        raise ValidationError(f"N must be non-negative, got {N}")
    h_max = math.log2(N + 1)
    if not -1e-12 <= target_entropy <= h_max + 1e-12:
        raise NoiseModelError(f"entropy {target_entropy} bits unattainable with {N + 1} patterns")
    if N == 0 or target_entropy <= 0:
        return _constant(N, 0.0)
    if target_entropy >= h_max:
        return np.full(N + 1, 1.0 / (N + 1))

    if kind == "constant":
        def residual(eps: float) -> float:
            return _entropy_bits(_constant(N, eps)) - target_entropy

        eps = brentq(residual, 0.0, 1.0 / (N + 1), xtol=1e-15, rtol=1e-15)
        return _constant(N, eps)

    def residual(alpha: float) -> float:
        return _entropy_bits(_decaying(N, alpha)) - target_entropy

    upper = 1.0
    while residual(upper) > 0:
        upper *= 2
    alpha = brentq(residual, 0.0, upper, xtol=1e-15, rtol=1e-15)
    return _decaying(N, alpha)


def synthetic_model(patterns: Sequence[PauliString], kind: str, target_entropy: float) -> NoiseModel:
    """Attach a synthetic distribution to ``patterns`` (identity first) in their order."""
    probabilities = synthetic_distributions(kind, len(patterns) - 1, target_entropy)
    entries = [NoiseEntry(float(p), e) for p, e in zip(probabilities, patterns)]
    return NoiseModel(patterns[0].n, entries, 0.0, check_order=False)


def weight_one_patterns(n: int) -> List[PauliString]:
    """Identity followed by the 3n weight-1 patterns in enumeration order."""
    model = BernoulliNoise(n, 0.01, 1)
    return [e.pattern for e in model]


# --- CSV interchange ------------------------------------------------------

def load_noise_csv(path: Union[str, Path], residual: Optional[float] = None) -> NoiseModel:
    """
    Read ``pauli,probability`` rows. The first row must be the identity and
    rows must be sorted by non-increasing probability; missing mass becomes
    the residual.
    """
    entries = []
    with open(Path(path), "r", encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames != NOISE_CSV_COLUMNS:
            raise NoiseModelError(f"noise file header must be {','.join(NOISE_CSV_COLUMNS)}")
        for row in reader:
            try:
                entries.append(NoiseEntry(float(row["probability"]), PauliString.from_label(row["pauli"])))
            except ValueError as e:
                raise NoiseModelError(f"bad noise row {row}: {e}") from e
    if not entries:
        raise NoiseModelError(f"noise file {path} has no entries")
    if residual is None:
        residual = max(0.0, 1.0 - math.fsum(p for p, _ in entries))
    return NoiseModel(entries[0].pattern.n, entries, residual)


def save_noise_csv(model: NoiseModel, path: Union[str, Path]) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(NOISE_CSV_COLUMNS)
        for p, e in model:
            writer.writerow([e.to_label(signed=False), f"{p:.17g}"])
    return path


@dataclass(frozen=True)
class EntropySummary:
    truncated_bits: float
    channel_bits: Optional[float]


def entropy_summary(model: NoiseModel) -> EntropySummary:
    """Both readings of H(N): over the listed set, and of the full channel when known."""
    channel = channel_entropy(model.n, model.p) if isinstance(model, BernoulliNoise) else None
    return EntropySummary(entropy(model), channel)
