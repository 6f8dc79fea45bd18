"""
Clifford circuits on stabilizer tableaux (Gottesman-Knill simulation).

Gates act on a tableau by conjugating every row. Each gate is compiled once
into a lookup table from the local symplectic key of a row restricted to the
gate's qubits to (image x bits, image z bits, phase increment), so applying a
gate to a row is a handful of shifts and one dictionary-free tuple lookup.

Two-qubit Clifford enumeration (C2). An element is fixed by the images of
X_a, Z_a, X_b, Z_b. Local keys are ``lx | (lz << 2)`` with bit 0 for qubit a
and bit 1 for qubit b. The 720 symplectic parts are listed by scanning the
image keys (v1, v2, v3, v4) in increasing order subject to
<v1,v2> = <v3,v4> = 1 and all other pairs orthogonal; each is combined with 4
sign bits (bit j flips the sign of image j). Index = 16 * symplectic_index +
sign_bits, so index 0 is the identity.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .config import C2_ORDER, SP4_ORDER
from .errors import DimensionError, ValidationError
from .pauli import PauliString, multiply

logger = logging.getLogger(__name__)

# (image x bits, image z bits, phase increment) per local key
ActionTable = Tuple[Tuple[int, int, int], ...]


class GateKind(str, Enum):
    H = "H"
    SQRT_Z = "SqrtZ"
    CNOT = "CNOT"
    C2 = "C2Sample"


SINGLE_QUBIT_KINDS = (GateKind.H, GateKind.SQRT_Z)


@dataclass(frozen=True)
class CliffordGate:
    """One gate of an encoding circuit. Qubit indices are 0-based."""

    kind: GateKind
    targets: Tuple[int, ...]
    c2_index: Optional[int] = None

    def __post_init__(self):
        kind = GateKind(self.kind)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "targets", tuple(int(q) for q in self.targets))
        arity = 1 if kind in SINGLE_QUBIT_KINDS else 2
        if len(self.targets) != arity:
            raise ValidationError(f"{kind.value} takes {arity} target(s), got {self.targets}")
        if arity == 2 and self.targets[0] == self.targets[1]:
            raise ValidationError(f"{kind.value} targets must be distinct, got {self.targets}")
        if any(q < 0 for q in self.targets):
            raise ValidationError(f"negative qubit index in {self.targets}")
        if (kind == GateKind.C2) != (self.c2_index is not None):
            raise ValidationError("c2_index is required for C2Sample gates and only for them")
        if self.c2_index is not None and not 0 <= self.c2_index < C2_ORDER:
            raise ValidationError(f"c2_index {self.c2_index} out of range [0, {C2_ORDER})")

    def to_line(self) -> str:
        parts = [self.kind.value, *map(str, self.targets)]
        if self.c2_index is not None:
            parts.append(str(self.c2_index))
        return " ".join(parts)

    @classmethod
    def from_line(cls, line: str) -> "CliffordGate":
        fields = line.split()
        if not fields:
            raise ValidationError("empty gate line")
        try:
            kind = GateKind(fields[0])
            numbers = [int(f) for f in fields[1:]]
        except ValueError as exc:
            raise ValidationError(f"bad gate line {line!r}: {exc}") from exc
        if kind == GateKind.C2:
            if len(numbers) != 3:
                raise ValidationError(f"bad gate line {line!r}")
            return cls(kind, tuple(numbers[:2]), numbers[2])
        return cls(kind, tuple(numbers))

    def action(self) -> ActionTable:
        if self.kind == GateKind.C2:
            return c2_table().action(self.c2_index)
        return _fixed_action(self.kind)


# --- compiling gates to lookup tables -------------------------------------

def _local_key(p: PauliString) -> int:
    return p.x | (p.z << p.n)


def _action_from_images(x_images: Sequence[PauliString], z_images: Sequence[PauliString]) -> ActionTable:
    """Lookup table of U X**lx Z**lz U^dagger for every local key."""
    nloc = len(x_images)
    table = []
    for key in range(1 << (2 * nloc)):
        lx, lz = key & ((1 << nloc) - 1), key >> nloc
        image = PauliString.identity(nloc)
        for q in range(nloc):
            if (lx >> q) & 1:
                image = multiply(image, x_images[q])
        for q in range(nloc):
            if (lz >> q) & 1:
                image = multiply(image, z_images[q])
        table.append((image.x, image.z, image.phase))
    return tuple(table)


def _hermitian(nloc: int, key: int, sign: int = 0) -> PauliString:
    x, z = key & ((1 << nloc) - 1), key >> nloc
    return PauliString(nloc, x, z, (x & z).bit_count() + 2 * sign)


@lru_cache(maxsize=None)
def _fixed_action(kind: GateKind) -> ActionTable:
    if kind == GateKind.H:
        return _action_from_images([PauliString(1, 0, 1)], [PauliString(1, 1, 0)])
    if kind == GateKind.SQRT_Z:
        return _action_from_images([PauliString.from_label("Y")], [PauliString(1, 0, 1)])
    # CNOT, control a -> target b
    return _action_from_images(
        [PauliString.from_label("XX"), PauliString.from_label("IX")],
        [PauliString.from_label("ZI"), PauliString.from_label("ZZ")],
    )


def _symplectic_form(u: int, v: int) -> int:
    return (((u & 3) & (v >> 2)) ^ ((u >> 2) & (v & 3))).bit_count() & 1


def _enumerate_symplectic() -> List[Tuple[int, int, int, int]]:
    """Images (X_a, Z_a, X_b, Z_b) of every element of Sp(4, GF(2))."""
    keys = range(1, 16)
    out = []
    for v1 in keys:
        for v2 in keys:
            if _symplectic_form(v1, v2) != 1:
                continue
            for v3 in keys:
                if _symplectic_form(v1, v3) or _symplectic_form(v2, v3):
                    continue
                for v4 in keys:
                    if _symplectic_form(v1, v4) or _symplectic_form(v2, v4):
                        continue
                    if _symplectic_form(v3, v4) == 1:
                        out.append((v1, v2, v3, v4))
    return out


class C2Table:
    """Canonical enumeration of the 11 520 two-qubit Cliffords (mod global phase)."""

    def __init__(self):
        self.symplectic = tuple(_enumerate_symplectic())
        if len(self.symplectic) != SP4_ORDER:
            raise AssertionError(f"expected {SP4_ORDER} symplectic maps, got {len(self.symplectic)}")
        self._index_of: Optional[Dict[Tuple[Tuple[int, int, int], ...], int]] = None
        self.action = lru_cache(maxsize=None)(self._action)

    identity_index = 0

    def images(self, index: int) -> Tuple[PauliString, PauliString, PauliString, PauliString]:
        """Signed images of X_a, Z_a, X_b, Z_b."""
        sym, signs = divmod(index, 16)
        return tuple(
            _hermitian(2, key, (signs >> j) & 1) for j, key in enumerate(self.symplectic[sym])
        )

    def _action(self, index: int) -> ActionTable:
        xa, za, xb, zb = self.images(index)
        return _action_from_images([xa, xb], [za, zb])

    def index_of(self, images: Sequence[PauliString]) -> int:
        if self._index_of is None:
            self._index_of = {
                tuple((p.x, p.z, p.phase) for p in self.images(i)): i for i in range(C2_ORDER)
            }
        return self._index_of[tuple((p.x, p.z, p.phase) for p in images)]

    def inverse(self, index: int) -> int:
        table = self.action(index)
        preimages = []
        for generator in (1, 4, 2, 8):  # X_a, Z_a, X_b, Z_b
            for key, (ox, oz, dphase) in enumerate(table):
                if ox | (oz << 2) == generator:
                    preimages.append(PauliString(2, key & 3, key >> 2, -dphase))
                    break
        return self.index_of(preimages)


@lru_cache(maxsize=1)
def c2_table() -> C2Table:
    logger.debug("building C2 enumeration table")
    return C2Table()


def sample_c2(rng: np.random.Generator, targets: Tuple[int, int] = (0, 1)) -> CliffordGate:
    """Uniformly random element of C2 on the given qubit pair."""
    return CliffordGate(GateKind.C2, targets, int(rng.integers(C2_ORDER)))


def inverse_gates(gate: CliffordGate) -> List[CliffordGate]:
    """Gates whose sequential application undoes ``gate``."""
    if gate.kind == GateKind.C2:
        return [CliffordGate(GateKind.C2, gate.targets, c2_table().inverse(gate.c2_index))]
    if gate.kind == GateKind.SQRT_Z:
        return [gate] * 3
    return [gate]


def inverse_circuit(circuit: Sequence[CliffordGate]) -> List[CliffordGate]:
    out: List[CliffordGate] = []
    for gate in reversed(circuit):
        out.extend(inverse_gates(gate))
    return out


# --- tableau ---------------------------------------------------------------

def _conjugate_row(x: int, z: int, phase: int, targets: Tuple[int, ...], table: ActionTable):
    if len(targets) == 1:
        (a,) = targets
        key = ((x >> a) & 1) | (((z >> a) & 1) << 1)
        if key == 0:
            return x, z, phase
        ox, oz, dphase = table[key]
        mask = 1 << a
        x = (x & ~mask) | (ox << a)
        z = (z & ~mask) | (oz << a)
        return x, z, phase + dphase
    a, b = targets
    key = (
        ((x >> a) & 1)
        | (((x >> b) & 1) << 1)
        | (((z >> a) & 1) << 2)
        | (((z >> b) & 1) << 3)
    )
    if key == 0:
        return x, z, phase
    ox, oz, dphase = table[key]
    mask = (1 << a) | (1 << b)
    x = (x & ~mask) | ((ox & 1) << a) | ((ox >> 1) << b)
    z = (z & ~mask) | ((oz & 1) << a) | ((oz >> 1) << b)
    return x, z, phase + dphase


class Tableau:
    """
    2n generator rows: rows 0..n-1 are destabilizers, rows n..2n-1 stabilizers.

    Mutated in place by ``apply``; a single owner is expected.
    """

    def __init__(self, n: int, xs: Sequence[int], zs: Sequence[int], phases: Sequence[int]):
        if not len(xs) == len(zs) == len(phases) == 2 * n:
            raise DimensionError(f"a tableau on {n} qubits needs {2 * n} rows")
        self.n = n
        self.xs = list(xs)
        self.zs = list(zs)
        self.phases = [p % 4 for p in phases]

    @classmethod
    def identity(cls, n: int) -> "Tableau":
        """Destabilizers X_q, stabilizers Z_q (the all-zeros state)."""
        xs = [1 << q for q in range(n)] + [0] * n
        zs = [0] * n + [1 << q for q in range(n)]
        return cls(n, xs, zs, [0] * (2 * n))

    def copy(self) -> "Tableau":
        return Tableau(self.n, self.xs, self.zs, self.phases)

    def row(self, i: int) -> PauliString:
        return PauliString(self.n, self.xs[i], self.zs[i], self.phases[i])

    def destabilizers(self) -> List[PauliString]:
        return [self.row(i) for i in range(self.n)]

    def stabilizers(self) -> List[PauliString]:
        return [self.row(i) for i in range(self.n, 2 * self.n)]

    def apply(self, gate: CliffordGate) -> "Tableau":
        if any(q >= self.n for q in gate.targets):
            raise DimensionError(f"gate {gate.to_line()!r} targets outside {self.n} qubits")
        table = gate.action()
        targets = gate.targets
        xs, zs, phases = self.xs, self.zs, self.phases
        for i in range(2 * self.n):
            x, z, ph = _conjugate_row(xs[i], zs[i], phases[i], targets, table)
            xs[i], zs[i], phases[i] = x, z, ph % 4
        return self

    def apply_circuit(self, circuit: Iterable[CliffordGate]) -> "Tableau":
        for gate in circuit:
            self.apply(gate)
        return self

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tableau):
            return NotImplemented
        return (self.n, self.xs, self.zs, self.phases) == (other.n, other.xs, other.zs, other.phases)

    def __repr__(self) -> str:
        return f"Tableau(n={self.n}, stabilizers={[str(p) for p in self.stabilizers()]})"


def conjugate(tableau: Tableau, gate: CliffordGate) -> Tableau:
    """New tableau with every row conjugated by ``gate``."""
    return tableau.copy().apply(gate)


def conjugate_pauli(p: PauliString, gate: CliffordGate) -> PauliString:
    if any(q >= p.n for q in gate.targets):
        raise DimensionError(f"gate {gate.to_line()!r} targets outside {p.n} qubits")
    x, z, phase = _conjugate_row(p.x, p.z, p.phase, gate.targets, gate.action())
    return PauliString(p.n, x, z, phase)


def extract_stabilizers(
    circuit: Sequence[CliffordGate], n: int, k: int
) -> Tuple[List[PauliString], List[PauliString]]:
    """
    Stabilizers and logical operators of the encoding ``circuit``.

    Data qubits are 0..k-1, ancillas k..n-1 start in |0> with stabilizers Z_q.
    Returns (s stabilizers, 2k logicals ordered X_0, Z_0, X_1, Z_1, ...).
    """
    if not 0 < k < n:
        raise ValidationError(f"need 0 < k < n, got n={n}, k={k}")
    tableau = Tableau.identity(n).apply_circuit(circuit)
    stabilizers = [tableau.row(n + q) for q in range(k, n)]
    logicals: List[PauliString] = []
    for q in range(k):
        logicals.append(tableau.row(q))
        logicals.append(tableau.row(n + q))
    return stabilizers, logicals


def format_circuit(circuit: Iterable[CliffordGate]) -> str:
    return "".join(gate.to_line() + "\n" for gate in circuit)


def parse_circuit(text: str) -> List[CliffordGate]:
    gates = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            gates.append(CliffordGate.from_line(line))
    return gates
