"""
Quantum random linear codes (QRLCs): construction from random C2 gates,
parity-check matrices and the versioned text file format.

Parity-check rows are packed as ``z_S | (x_S << n)`` (Z half first) while an
error is packed as ``M_E = x_E | (z_E << n)``, so bit i of the syndrome is
the parity of ``M_E & A_i``, i.e. the commutation bit with stabilizer i.
"""

import hashlib
import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Iterator, List, Sequence, Tuple, Union

import numpy as np

from .clifford import CliffordGate, Tableau, sample_c2
from .config import CODE_FORMAT_HEADER
from .errors import ChecksumError, CodeFormatError, FormatVersionError, RankError, ValidationError
from .gf2 import rank
from .pauli import PauliString

logger = logging.getLogger(__name__)


class Connectivity(str, Enum):
    ALL_TO_ALL = "all_to_all"


@dataclass(frozen=True)
class QuantumCode:
    """An (n, k) stabilizer code together with the circuit that produced it."""

    n: int
    k: int
    seed: int
    gates: Tuple[CliffordGate, ...]
    stabilizers: Tuple[PauliString, ...]
    logicals: Tuple[PauliString, ...]
    parity_check: Tuple[int, ...]
    connectivity: Connectivity = Connectivity.ALL_TO_ALL

    @property
    def s(self) -> int:
        return self.n - self.k

    @property
    def rate(self) -> Fraction:
        return Fraction(self.k, self.n)

    @property
    def log2_syndromes(self) -> int:
        """log2 S; S = 2**s itself is never materialized."""
        return self.s

    @property
    def log2_logicals(self) -> int:
        return 2 * self.k

    @property
    def num_gates(self) -> int:
        return len(self.gates)

    def parity_check_matrix(self) -> np.ndarray:
        """A as an (s, 2n) uint8 array; column j is bit j of the packed rows."""
        width = 2 * self.n
        return np.array(
            [[(row >> j) & 1 for j in range(width)] for row in self.parity_check], dtype=np.uint8
        ).reshape(self.s, width)


def parity_check_rows(stabilizers: Sequence[PauliString]) -> Tuple[int, ...]:
    return tuple(p.z | (p.x << p.n) for p in stabilizers)


def _validate_sizes(n: int, k: int, num_gates: int, seed: int) -> None:
    if not 0 < k < n:
        raise ValidationError(f"need 0 < k < n, got n={n}, k={k}")
    if num_gates < 0:
        raise ValidationError(f"num_gates must be non-negative, got {num_gates}")
    if not 0 <= seed < 2**64:
        raise ValidationError(f"seed must fit in 64 unsigned bits, got {seed}")


def _code_from_tableau(
    tableau: Tableau, k: int, seed: int, gates: Sequence[CliffordGate], connectivity: Connectivity
) -> QuantumCode:
    n = tableau.n
    stabilizers = tuple(tableau.row(n + q) for q in range(k, n))
    logicals = []
    for q in range(k):
        logicals.extend((tableau.row(q), tableau.row(n + q)))
    if rank([p.symplectic() for p in stabilizers]) != n - k:
        raise RankError(f"extracted stabilizers of the ({n},{k}) code are rank deficient")
    return QuantumCode(
        n=n,
        k=k,
        seed=seed,
        gates=tuple(gates),
        stabilizers=stabilizers,
        logicals=tuple(logicals),
        parity_check=parity_check_rows(stabilizers),
        connectivity=connectivity,
    )


def sample_gate(rng: np.random.Generator, n: int) -> CliffordGate:
    """Uniform C2 element on a uniformly random pair of distinct qubits."""
    a, b = rng.choice(n, 2, replace=False)
    return sample_c2(rng, (int(a), int(b)))


def build_qrlc_series(
    n: int,
    k: int,
    gate_counts: Sequence[int],
    seed: int = 0,
    connectivity: Connectivity = Connectivity.ALL_TO_ALL,
) -> Iterator[QuantumCode]:
    """
    Codes after each of the increasing ``gate_counts`` for one seed.

    The circuits are prefixes of one random gate stream, so element g equals
    ``build_qrlc(n, k, g, seed=seed)``.
    """
    counts = list(gate_counts)
    if counts != sorted(counts):
        raise ValidationError("gate counts must be non-decreasing")
    for count in counts:
        _validate_sizes(n, k, count, seed)
    connectivity = Connectivity(connectivity)
    rng = np.random.default_rng(seed)
    tableau = Tableau.identity(n)
    gates: List[CliffordGate] = []
    for count in counts:
        while len(gates) < count:
            gate = sample_gate(rng, n)
            tableau.apply(gate)
            gates.append(gate)
        yield _code_from_tableau(tableau, k, seed, gates, connectivity)


def build_qrlc(
    n: int,
    k: int,
    num_gates: int,
    connectivity: Connectivity = Connectivity.ALL_TO_ALL,
    seed: int = 0,
) -> QuantumCode:
    """Random (n, k) code from ``num_gates`` C2 gates; deterministic in its arguments."""
    (code,) = build_qrlc_series(n, k, [num_gates], seed=seed, connectivity=connectivity)
    logger.debug("built (%d,%d) code with %d gates, seed %d", n, k, num_gates, seed)
    return code


def recommended_gate_count(n: int, m: float) -> int:
    """ceil(m n log2(n)^2)."""
    if n < 2:
        raise ValidationError(f"n must be at least 2, got {n}")
    # round first so exact products such as 0.15*2*1 do not ceil upward
    return math.ceil(round(m * n * math.log2(n) ** 2, 9))


# --- persistence -----------------------------------------------------------

def _hex_width(n: int) -> int:
    return (2 * n + 3) // 4


def _format_body(code: QuantumCode) -> List[str]:
    lines = [
        CODE_FORMAT_HEADER,
        f"n {code.n}",
        f"k {code.k}",
        f"seed {code.seed}",
        f"connectivity {code.connectivity.value}",
        f"gates {len(code.gates)}",
    ]
    lines += [gate.to_line() for gate in code.gates]
    lines.append(f"stabilizers {len(code.stabilizers)}")
    lines += [p.to_label() for p in code.stabilizers]
    lines.append(f"logicals {len(code.logicals)}")
    lines += [p.to_label() for p in code.logicals]
    lines.append(f"parity_check {len(code.parity_check)}")
    lines += [format(row, f"0{_hex_width(code.n)}x") for row in code.parity_check]
    return lines


def _checksum(lines: Sequence[str]) -> str:
    return hashlib.sha256("\n".join(lines).encode("utf-8")).hexdigest()


def format_code(code: QuantumCode) -> str:
    body = _format_body(code)
    return "\n".join(body + [f"checksum sha256 {_checksum(body)}"]) + "\n"


def save_code(code: QuantumCode, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(format_code(code))
    return path


class _Reader:
    def __init__(self, lines: Sequence[str]):
        self.lines = lines
        self.pos = 0

    def next(self) -> str:
        if self.pos >= len(self.lines):
            raise CodeFormatError("unexpected end of code file")
        line = self.lines[self.pos]
        self.pos += 1
        return line

    def field(self, name: str) -> str:
        line = self.next()
        key, _, value = line.partition(" ")
        if key != name:
            raise CodeFormatError(f"expected {name!r}, found {line!r}")
        return value

    def count(self, name: str) -> int:
        try:
            return int(self.field(name))
        except ValueError as e:
            raise CodeFormatError(f"bad {name} count") from e


def parse_code(text: str) -> QuantumCode:
    """Parse and verify a code file; raises before any object is returned."""
    lines = text.splitlines()
    if not lines or lines[0].strip() != CODE_FORMAT_HEADER:
        found = lines[0] if lines else ""
        raise FormatVersionError(f"expected header {CODE_FORMAT_HEADER!r}, found {found!r}")
    *body, last = lines
    if not last.startswith("checksum sha256 "):
        raise ChecksumError("missing checksum line")
    if last.split()[-1] != _checksum(body):
        raise ChecksumError("checksum mismatch")

    reader = _Reader(body)
    reader.next()
    try:
        n = int(reader.field("n"))
        k = int(reader.field("k"))
        seed = int(reader.field("seed"))
        connectivity = Connectivity(reader.field("connectivity"))
        gates = [CliffordGate.from_line(reader.next()) for _ in range(reader.count("gates"))]
        stabilizers = [PauliString.from_label(reader.next()) for _ in range(reader.count("stabilizers"))]
        logicals = [PauliString.from_label(reader.next()) for _ in range(reader.count("logicals"))]
        rows = tuple(int(reader.next(), 16) for _ in range(reader.count("parity_check")))
        _validate_sizes(n, k, len(gates), seed)
        tableau = Tableau.identity(n).apply_circuit(gates)
    except (ValueError, ValidationError) as e:
        raise CodeFormatError(f"malformed code file: {e}") from e

    code = _code_from_tableau(tableau, k, seed, gates, connectivity)
    if code.stabilizers != tuple(stabilizers) or code.logicals != tuple(logicals):
        raise ChecksumError("stored stabilizers or logicals disagree with the replayed circuit")
    if parity_check_rows(stabilizers) != rows:
        raise ChecksumError("stored parity-check matrix disagrees with the stabilizers")
    return code


def load_code(path: Union[str, Path]) -> QuantumCode:
    with open(Path(path), "r", encoding="utf-8") as f:
        return parse_code(f.read())
