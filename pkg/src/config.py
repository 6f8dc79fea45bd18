"""
Configuration module for the QRLC / QGRAND toolkit.
Contains group orders, file-format constants, default experiment parameters,
CSV layouts and the RunConfig used by the command line.
"""

import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional

from typing_extensions import Literal, TypeAlias

from .errors import ConfigError

# Two-qubit Clifford group modulo global phase, and its symplectic quotient
C2_ORDER = 11520
SP4_ORDER = 720

CODE_FORMAT_HEADER = "QGRAND-CODE 1"
NOISE_CSV_COLUMNS = ["pauli", "probability"]
TRIAL_LOG_COLUMNS = [
    "trial", "true_pattern", "syndrome_hex", "decoded_pattern", "success", "iterations", "measurements",
]

# Error letters in enumeration order; codes 0, 1, 2 index per-letter tables
ERROR_LETTERS = "XYZ"

# Above this many patterns the exact birthday product is replaced by exp(-N(N+1)/2S)
EXACT_PRODUCT_LIMIT = 10**6

# 80% band as order statistics of the samples
BAND_QUANTILES = (0.1, 0.9)
BAND_METHOD = "order-statistics-p10-p90"
REFERENCE_SAMPLES = 31

# Gate-count prefactors m in N_gates = m n log2(n)^2
GATE_PREFACTOR_MEAN = 0.15
GATE_PREFACTOR_ALL_T1 = 0.21
GATE_PREFACTOR_GRID = [round(0.01 * i, 2) for i in range(1, 61)]

DEFAULT_ENTROPY_POINTS = 9

# Above 3/4 a single-qubit error outweighs no error and the identity stops leading the list
P_MAX_DEPOLARIZING = 0.75

SWEEP_KINDS = ("rate", "min-gates", "p-threshold", "ordering")
DECODING_MODES = ("membership_test", "syndrome_decoding")
MIN_GATES_CRITERIA = ("mean", "all_t1")
DISTRIBUTION_KINDS = ("decaying", "constant")

SweepKind: TypeAlias = Literal["rate", "min-gates", "p-threshold", "ordering"]
ModeName: TypeAlias = Literal["membership_test", "syndrome_decoding"]
Criterion: TypeAlias = Literal["mean", "all_t1"]

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_INTERNAL = 4


@dataclass
class RunConfig:
    """Every tunable of a command; flags > config file > these defaults."""

    n: int = 16
    k: int = 1
    n_list: Optional[List[int]] = None
    k_list: Optional[List[int]] = None
    p: float = 0.01
    p_grid: Optional[List[float]] = None
    t: int = 1
    t_list: Optional[List[int]] = None
    num_gates: Optional[int] = None
    gate_prefactor: float = GATE_PREFACTOR_MEAN
    rate: float = 0.7
    samples: int = REFERENCE_SAMPLES
    master_seed: Optional[int] = None
    precompute_limit: Optional[int] = None
    abandon_after: Optional[int] = None
    trials: int = 1000
    mode: ModeName = "membership_test"
    count_no_hit: bool = False
    conditional: bool = False
    delta_threshold: float = 0.02
    criterion: Criterion = "mean"
    entropy_grid: Optional[List[float]] = None
    kinds: List[str] = field(default_factory=lambda: list(DISTRIBUTION_KINDS))
    epsilon: float = 0.01
    threads: int = 1
    code_path: Optional[str] = None
    noise_path: Optional[str] = None
    output_path: Optional[str] = None
    kind: Optional[SweepKind] = None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_sources(
        cls,
        command: str,
        file_values: Optional[Mapping[str, Any]] = None,
        flag_values: Optional[Mapping[str, Any]] = None,
    ) -> "RunConfig":
        """Merge config-file values (flat keys, then the ``command`` section) and flags."""
        known = {f.name for f in fields(cls)}
        merged: Dict[str, Any] = {}
        file_values = dict(file_values or {})
        section = file_values.pop(command, None)
        for other in ("generate", "evaluate", "simulate", "sweep", "bounds"):
            file_values.pop(other, None)
        for layer in (file_values, section or {}, flag_values or {}):
            for key, value in layer.items():
                if key not in known:
                    raise ConfigError(f"unknown configuration key {key!r}")
                if value is not None:
                    merged[key] = value
        config = cls(**merged)
        config.validate(command)
        return config

    def validate(self, command: str) -> None:
        """Reject parameter sets that violate the preconditions of ``command``."""
        def need(condition: bool, message: str) -> None:
            if not condition:
                raise ConfigError(message)

        need(self.n >= 2, f"n must be at least 2, got {self.n}")
        need(0 < self.p <= P_MAX_DEPOLARIZING, f"p must lie in (0, {P_MAX_DEPOLARIZING}], got {self.p}")
        need(self.t >= 0, f"t must be non-negative, got {self.t}")
        need(self.samples >= 1, f"samples must be positive, got {self.samples}")
        need(self.threads >= 1, f"threads must be positive, got {self.threads}")
        need(self.trials >= 1, f"trials must be positive, got {self.trials}")
        need(0 < self.epsilon < 1, f"epsilon must lie in (0, 1), got {self.epsilon}")
        need(self.num_gates is None or self.num_gates >= 0, "num_gates must be non-negative")
        need(self.mode in DECODING_MODES, f"mode must be one of {DECODING_MODES}")
        need(self.criterion in MIN_GATES_CRITERIA, f"criterion must be one of {MIN_GATES_CRITERIA}")
        need(all(kind in DISTRIBUTION_KINDS for kind in self.kinds), f"kinds must be in {DISTRIBUTION_KINDS}")
        need(self.master_seed is None or 0 <= self.master_seed < 2**64, "seed must fit in 64 unsigned bits")
        for name in ("precompute_limit", "abandon_after"):
            value = getattr(self, name)
            need(value is None or value >= 0, f"{name} must be non-negative")
        if self.p_grid is not None:
            need(
                all(0 < p <= P_MAX_DEPOLARIZING for p in self.p_grid),
                f"every p in p_grid must lie in (0, {P_MAX_DEPOLARIZING}]",
            )
        if command in ("generate", "bounds"):
            need(0 < self.k < self.n, f"need 0 < k < n, got n={self.n}, k={self.k}")
            need(self.t <= self.n, f"t must not exceed n={self.n}")
        if command == "sweep":
            need(self.master_seed is not None, "sweep commands require an explicit --seed")
            need(self.kind in SWEEP_KINDS, f"kind must be one of {SWEEP_KINDS}, got {self.kind!r}")
            need(0 < self.rate < 1, f"rate must lie in (0, 1), got {self.rate}")
            need(0 < self.delta_threshold < 1, "delta_threshold must lie in (0, 1)")
            for n in self.n_list or []:
                need(n >= 2, f"every n in n_list must be at least 2, got {n}")
            if self.kind == "min-gates" and self.k_list is not None:
                need(
                    self.n_list is not None and len(self.k_list) == len(self.n_list),
                    "min-gates k_list gives one k per entry of n_list",
                )
                for n, k in zip(self.n_list, self.k_list):
                    need(0 < k < n, f"need 0 < k < n, got n={n}, k={k}")
            else:
                for k in self.k_list or []:
                    need(0 < k < self.n, f"every k in k_list must lie in (0, {self.n}), got {k}")


def load_config_file(path: str) -> Dict[str, Any]:
    """Read a JSON config file; the top level must be an object."""
    try:
        with open(Path(path), "r", encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"config file {path} is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    return data
