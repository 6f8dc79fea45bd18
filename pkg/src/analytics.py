"""
Closed forms of the ideal random code, in which each of the N+1 listed
patterns lands on one of S = 2**s syndromes uniformly and independently.

S and L may be as large as 2**(2n); they are handled as floats (exact powers
of two up to 2**1023) and every product is evaluated through log1p/expm1.
"""

import math
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .config import EXACT_PRODUCT_LIMIT
from .errors import SingularFitError, ValidationError
from .noise import BernoulliNoise, pattern_counts


@dataclass(frozen=True)
class IdealModelInput:
    S: float
    N: int
    L: float = math.inf

    def __post_init__(self):
        if self.S < 1 or self.N < 0 or self.L < 1:
            raise ValidationError(f"need S >= 1, N >= 0, L >= 1; got S={self.S}, N={self.N}, L={self.L}")

    @classmethod
    def for_code(cls, n: int, k: int, N: int) -> "IdealModelInput":
        return cls(math.ldexp(1.0, n - k), N, math.ldexp(1.0, 2 * k))


def expected_unique_syndromes(S: float, N: int) -> float:
    """S (1 - (1 - 1/S)**(N+1)): mean number of occupied syndromes."""
    if S < 1 or N < 0:
        raise ValidationError(f"need S >= 1 and N >= 0, got S={S}, N={N}")
    if S == 1:
        return 1.0
    return -S * math.expm1((N + 1) * math.log1p(-1.0 / S))


def ideal_fraction(S: float, N: int) -> float:
    """u / (N+1)."""
    return expected_unique_syndromes(S, N) / (N + 1)


class DistinctProbability(NamedTuple):
    exact: float
    approx: float


def p_all_distinct(S: float, N: int) -> DistinctProbability:
    """
    Probability that all N+1 patterns get distinct syndromes.

    ``exact`` is prod_{j<=N} (S-j)/S (zero once N >= S); above
    EXACT_PRODUCT_LIMIT patterns it falls back to the exp form.
    """
    if S < 1 or N < 0:
        raise ValidationError(f"need S >= 1 and N >= 0, got S={S}, N={N}")
    approx = math.exp(-N * (N + 1) / (2 * S))
    if N >= S:
        return DistinctProbability(0.0, approx)
    if N > EXACT_PRODUCT_LIMIT:
        return DistinctProbability(approx, approx)
    j = np.arange(1, N + 1, dtype=float)
    return DistinctProbability(float(np.exp(np.log1p(-j / S).sum())), approx)


class GoodProbability(NamedTuple):
    p_good: float
    p_degenerate: float


def p_good(S: float, N: int, L: float) -> GoodProbability:
    """
    Probability that no pair of patterns collides non-degenerately.

    A colliding pair is harmless with probability ~1/L, so each of the
    C(N+1, 2) pairs is bad with probability (1 - 1/L)/S.
    """
    if L < 1:
        raise ValidationError(f"L must be at least 1, got {L}")
    pairs = (N + 1) * N / 2
    bad = (1 - 1 / L) / S
    if bad >= 1:
        good = 1.0 if pairs == 0 else 0.0
    else:
        good = math.exp(pairs * math.log1p(-bad))
    distinct = p_all_distinct(S, N).exact
    return GoodProbability(good, max(0.0, good - distinct))


class WeightFraction(NamedTuple):
    exact: float
    asymptotic: float


def ideal_weight_fraction(S: float, n: int, t: int) -> WeightFraction:
    """
    Expected fraction of weight-t patterns that are coset leaders when
    patterns are listed by increasing weight.
    """
    if not 1 <= t <= n:
        raise ValidationError(f"need 1 <= t <= n, got n={n}, t={t}")
    a_t, b_t = pattern_counts(n, t)
    b_prev = b_t - a_t
    new_leaders = expected_unique_syndromes(S, b_t - 1) - expected_unique_syndromes(S, b_prev - 1)
    asymptotic = (S / a_t) * math.exp(-b_prev / S) * -math.expm1(-a_t / S)
    return WeightFraction(new_leaders / a_t, asymptotic)


def ideal_success_probability(S: float, n: int, p: float, t_max: int) -> float:
    """p_0 plus the ideal leader fraction of every weight class times its mass."""
    noise = BernoulliNoise(n, p, t_max)
    total = noise.class_probability(0)
    for t in range(1, t_max + 1):
        total += ideal_weight_fraction(S, n, t).exact * noise.class_probability(t)
    return total


class MinNBounds(NamedTuple):
    n_all_distinct: int
    n_fraction: int
    n_hashing: int


def _ceil(x: float) -> int:
    return math.ceil(round(x, 9))


def min_n_bounds(k: int, N: int, epsilon: float, H_bits: float) -> MinNBounds:
    """Smallest n for P(f=1) >= 1-eps, for f >= 1-eps, and for the hashing bound."""
    if not 0 < epsilon < 1:
        raise ValidationError(f"epsilon must lie in (0, 1), got {epsilon}")
    if N < 1:
        raise ValidationError(f"N must be at least 1, got {N}")
    return MinNBounds(
        n_all_distinct=_ceil(k + math.log2(N * (N + 1) / (2 * epsilon))),
        n_fraction=_ceil(k + math.log2(N / (2 * epsilon))),
        n_hashing=_ceil(k + H_bits),
    )


@dataclass(frozen=True)
class RecursionResult:
    sequence: Tuple[float, ...]
    stop_index: int
    interpolated: float
    closed_form: float
    censored: bool


def decision_tree_recursion(N: float, s: int) -> RecursionResult:
    """
    N_{j+1} = N_j/2 - sqrt((N_j/2) ln(s-j)) from N_0 = N until N_j <= 1.

    The run is censored when it reaches j = s-1 first. ``interpolated``
    places the crossing of 1 linearly between the last two terms.
    """
    if N < 1 or s < 2:
        raise ValidationError(f"need N >= 1 and s >= 2, got N={N}, s={s}")
    sequence = [float(N)]
    j = 0
    censored = False
    while sequence[-1] > 1:
        if j >= s - 1:
            censored = True
            break
        half = sequence[-1] / 2
        sequence.append(half - math.sqrt(half * math.log(s - j)))
        j += 1
    if censored or j == 0:
        interpolated = float(j)
    else:
        before, after = sequence[-2], sequence[-1]
        interpolated = (j - 1) + (before - 1) / (before - after)
    closed_form = math.log2(N) - math.log2(math.log2(s)) - 1
    return RecursionResult(tuple(sequence), j, interpolated, closed_form, censored)


@dataclass(frozen=True)
class SavingsFit:
    a: float
    b: float
    c: float
    rms: float
    samples: int


def fit_savings(samples: Sequence[Tuple[float, float, float]]) -> SavingsFit:
    """Least squares I = a log2 N - b log2 log2 s - c via the normal equations."""
    data = np.asarray(samples, dtype=float)
    if data.ndim != 2 or data.shape[1] != 3 or data.shape[0] < 3:
        raise SingularFitError("need at least three (N, s, I) samples")
    N, s, measured = data.T
    design = np.column_stack([np.log2(N), -np.log2(np.log2(s)), -np.ones_like(N)])
    gram = design.T @ design
    if np.linalg.matrix_rank(gram) < 3:
        raise SingularFitError("samples do not span distinct N and s")
    a, b, c = np.linalg.solve(gram, design.T @ measured)
    residuals = design @ np.array([a, b, c]) - measured
    return SavingsFit(float(a), float(b), float(c), float(np.sqrt(np.mean(residuals**2))), len(data))


def recursion_grid(
    exponents: Sequence[int] = range(10, 25), stabilizer_counts: Sequence[int] = (16, 32, 64, 128, 256, 512)
) -> List[Tuple[float, float, float]]:
    """(N, s, interpolated stop) over a grid, censored runs left out."""
    out = []
    for e in exponents:
        for s in stabilizer_counts:
            result = decision_tree_recursion(2.0**e, s)
            if not result.censored:
                out.append((2.0**e, float(s), result.interpolated))
    return out


def fit_recursion(
    exponents: Sequence[int] = range(10, 25), stabilizer_counts: Sequence[int] = (16, 32, 64, 128, 256, 512)
) -> Optional[SavingsFit]:
    grid = recursion_grid(exponents, stabilizer_counts)
    return fit_savings(grid) if len(grid) >= 3 else None
