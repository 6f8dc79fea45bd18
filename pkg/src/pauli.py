"""
Pauli-string algebra in the binary symplectic representation.

A PauliString on n qubits stores two n-bit integers ``x`` and ``z`` (bit q is
qubit q) and a phase exponent ``phase`` in Z_4. The operator it denotes is

    i**phase * (X**x_0 Z**z_0) (x) (X**x_1 Z**z_1) (x) ... (x) (X**x_{n-1} Z**z_{n-1})

so a qubit with both bits set holds XZ = -iY. Textual literals use the
Hermitian letters I, X, Y, Z (qubit 0 leftmost) with an optional leading
sign in {"", "+", "-", "i", "+i", "-i"}; ``from_label``/``to_label`` convert
between the two phase conventions.
"""

from dataclasses import dataclass
from typing import Iterator, Tuple

from .errors import DimensionError, ValidationError

LETTERS = "IXZY"  # indexed by x | (z << 1)
LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
SIGN_PREFIXES = {"": 0, "+": 0, "i": 1, "+i": 1, "-": 2, "-i": 3}
PREFIX_OF_PHASE = {0: "+", 1: "+i", 2: "-", 3: "-i"}


@dataclass(frozen=True, slots=True)
class PauliString:
    """n-qubit Pauli operator with quartic phase. Immutable."""

    n: int
    x: int = 0
    z: int = 0
    phase: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise ValidationError(f"qubit count must be non-negative, got {self.n}")
        limit = 1 << self.n
        if not (0 <= self.x < limit and 0 <= self.z < limit):
            raise DimensionError(f"bit vectors do not fit in {self.n} qubits")
        object.__setattr__(self, "phase", self.phase % 4)

    # --- constructors -------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> "PauliString":
        """Hermitian single-qubit Pauli ``letter`` acting on ``qubit``."""
        if not 0 <= qubit < n:
            raise DimensionError(f"qubit {qubit} out of range [0, {n})")
        xb, zb = LETTER_BITS[letter]
        return cls(n, xb << qubit, zb << qubit, xb & zb)

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Parse a literal such as ``-XIZY`` or ``+iZZ``."""
        label = label.strip()
        body = label.lstrip("+-i")
        prefix = label[: len(label) - len(body)]
        if prefix not in SIGN_PREFIXES:
            raise ValidationError(f"bad sign prefix {prefix!r} in Pauli literal {label!r}")
        x = z = 0
        for q, letter in enumerate(body):
            if letter not in LETTER_BITS:
                raise ValidationError(f"bad letter {letter!r} in Pauli literal {label!r}")
            xb, zb = LETTER_BITS[letter]
            x |= xb << q
            z |= zb << q
        num_y = (x & z).bit_count()
        return cls(len(body), x, z, SIGN_PREFIXES[prefix] + num_y)

    # --- views ----------------------------------------------------------

    @property
    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    @property
    def key(self) -> Tuple[int, int]:
        """Phaseless identity of the string."""
        return self.x, self.z

    @property
    def hermitian_phase(self) -> int:
        """Phase exponent relative to the Hermitian letter form."""
        return (self.phase - (self.x & self.z).bit_count()) % 4

    @property
    def is_hermitian(self) -> bool:
        return self.hermitian_phase % 2 == 0

    def letter(self, qubit: int) -> str:
        return LETTERS[((self.x >> qubit) & 1) | (((self.z >> qubit) & 1) << 1)]

    def support(self) -> Iterator[int]:
        """Qubits with a non-identity factor, ascending."""
        mask = self.x | self.z
        while mask:
            low = mask & -mask
            yield low.bit_length() - 1
            mask ^= low

    def symplectic(self) -> int:
        """Row vector M_E = [x | z] packed as x + (z << n)."""
        return self.x | (self.z << self.n)

    def to_label(self, signed: bool = True) -> str:
        body = "".join(self.letter(q) for q in range(self.n))
        if not signed:
            return body
        return PREFIX_OF_PHASE[self.hermitian_phase] + body

    def __str__(self) -> str:
        return self.to_label()

    def __mul__(self, other: "PauliString") -> "PauliString":
        return multiply(self, other)

    def without_phase(self) -> "PauliString":
        """Hermitian representative with a + sign."""
        return PauliString(self.n, self.x, self.z, (self.x & self.z).bit_count())


def _check_dims(p: PauliString, q: PauliString) -> None:
    if p.n != q.n:
        raise DimensionError(f"qubit count mismatch: {p.n} vs {q.n}")


def symplectic_product(p: PauliString, q: PauliString) -> int:
    """x_p . z_q + z_p . x_q mod 2."""
    _check_dims(p, q)
    return ((p.x & q.z) ^ (p.z & q.x)).bit_count() & 1


def commutes(p: PauliString, q: PauliString) -> bool:
    return symplectic_product(p, q) == 0


def multiply(p: PauliString, q: PauliString) -> PauliString:
    """
    Operator product p * q.

    Moving Z**z_p past X**x_q on each qubit costs (-1)**(z_p & x_q), hence the
    extra 2 * popcount(z_p & x_q) in the phase.
    """
    _check_dims(p, q)
    phase = p.phase + q.phase + 2 * (p.z & q.x).bit_count()
    return PauliString(p.n, p.x ^ q.x, p.z ^ q.z, phase)


def weight(p: PauliString) -> int:
    return p.weight


def all_paulis(n: int) -> Iterator[PauliString]:
    """Every phaseless (Hermitian, + sign) string on n qubits."""
    for x in range(1 << n):
        for z in range(1 << n):
            yield PauliString(n, x, z, (x & z).bit_count())
