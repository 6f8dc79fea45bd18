"""Tests for QRLC construction and the code file format."""

import hashlib
from fractions import Fraction

import numpy as np
import pytest

from src.code import (
    Connectivity,
    build_qrlc,
    build_qrlc_series,
    format_code,
    load_code,
    parse_code,
    recommended_gate_count,
    save_code,
)
from src.errors import ChecksumError, CodeFormatError, FormatVersionError, ValidationError
from src.gf2 import rank
from src.pauli import commutes


def rechecksum(lines):
    """Replace the checksum line so only the consistency checks can fail."""
    body = lines[:-1]
    digest = hashlib.sha256("\n".join(body).encode("utf-8")).hexdigest()
    return "\n".join(body + [f"checksum sha256 {digest}"]) + "\n"


@pytest.fixture(scope="module")
def code():
    return build_qrlc(8, 2, 60, seed=42)


class TestBuild:
    def test_identity_encoding(self):
        trivial = build_qrlc(2, 1, 0)
        assert [p.to_label() for p in trivial.stabilizers] == ["+IZ"]
        assert [p.to_label() for p in trivial.logicals] == ["+XI", "+ZI"]
        assert trivial.parity_check == (0b10,)

    def test_deterministic(self):
        assert build_qrlc(10, 3, 80, seed=9) == build_qrlc(10, 3, 80, seed=9)
        assert build_qrlc(10, 3, 80, seed=9) != build_qrlc(10, 3, 80, seed=10)

    def test_shape(self, code):
        assert code.s == 6 and code.num_gates == 60
        assert code.rate == Fraction(1, 4)
        assert len(code.stabilizers) == 6 and len(code.logicals) == 4
        assert code.log2_syndromes == 6 and code.log2_logicals == 4
        assert code.connectivity == Connectivity.ALL_TO_ALL

    def test_stabilizers_form_a_code(self, code):
        assert rank(list(code.parity_check)) == code.s
        for i, p in enumerate(code.stabilizers):
            assert all(commutes(p, q) for q in code.stabilizers[i + 1:])
            assert all(commutes(p, logical) for logical in code.logicals)

    def test_parity_check_matrix(self, code):
        matrix = code.parity_check_matrix()
        assert matrix.shape == (code.s, 2 * code.n) and matrix.dtype == np.uint8
        for row, stabilizer in zip(matrix, code.stabilizers):
            z_half = sum(int(b) << j for j, b in enumerate(row[: code.n]))
            x_half = sum(int(b) << j for j, b in enumerate(row[code.n:]))
            assert (x_half, z_half) == (stabilizer.x, stabilizer.z)

    def test_gate_targets_distinct_and_in_range(self, code):
        for gate in code.gates:
            a, b = gate.targets
            assert a != b and 0 <= a < code.n and 0 <= b < code.n

    def test_series_matches_individual_builds(self):
        series = list(build_qrlc_series(6, 2, [0, 5, 5, 17], seed=3))
        assert [c.num_gates for c in series] == [0, 5, 5, 17]
        assert series[3] == build_qrlc(6, 2, 17, seed=3)
        assert series[1].gates == series[3].gates[:5]

    def test_series_must_be_sorted(self):
        with pytest.raises(ValidationError):
            list(build_qrlc_series(6, 2, [5, 3]))

    @pytest.mark.parametrize("n,k,gates,seed", [(4, 0, 1, 0), (4, 4, 1, 0), (4, 1, -1, 0), (4, 1, 1, -1), (4, 1, 1, 2**64)])
    def test_invalid_arguments(self, n, k, gates, seed):
        with pytest.raises(ValidationError):
            build_qrlc(n, k, gates, seed=seed)


class TestRecommendedGateCount:
    @pytest.mark.parametrize("n,m,expected", [(16, 0.21, 54), (2, 0.15, 1), (128, 0.15, 941)])
    def test_examples(self, n, m, expected):
        assert recommended_gate_count(n, m) == expected

    def test_small_n_rejected(self):
        with pytest.raises(ValidationError):
            recommended_gate_count(1, 0.15)


class TestPersistence:
    def test_round_trip(self, code, tmp_path):
        path = save_code(code, tmp_path / "codes" / "c.code")
        assert load_code(path) == code

    def test_identical_files(self, tmp_path):
        a = save_code(build_qrlc(6, 1, 20, seed=5), tmp_path / "a.code")
        b = save_code(build_qrlc(6, 1, 20, seed=5), tmp_path / "b.code")
        assert a.read_bytes() == b.read_bytes()

    def test_layout(self, code):
        lines = format_code(code).splitlines()
        assert lines[0] == "QGRAND-CODE 1"
        assert lines[1:5] == ["n 8", "k 2", "seed 42", "connectivity all_to_all"]
        assert lines[5] == "gates 60"
        assert lines[-1].startswith("checksum sha256 ")

    def test_bad_header(self, code):
        text = format_code(code).replace("QGRAND-CODE 1", "QGRAND-CODE 2", 1)
        with pytest.raises(FormatVersionError):
            parse_code(text)
        with pytest.raises(FormatVersionError):
            parse_code("")

    def test_checksum_mismatch(self, code):
        text = format_code(code).replace("seed 42", "seed 43")
        with pytest.raises(ChecksumError):
            parse_code(text)

    def test_missing_checksum(self, code):
        lines = format_code(code).splitlines()[:-1]
        with pytest.raises(ChecksumError):
            parse_code("\n".join(lines))

    def test_parity_check_consistency(self, code):
        lines = format_code(code).splitlines()
        row = lines[-2]
        lines[-2] = format(int(row, 16) ^ 1, f"0{len(row)}x")
        with pytest.raises(ChecksumError):
            parse_code(rechecksum(lines))

    def test_stabilizers_must_match_circuit(self, code):
        lines = format_code(code).splitlines()
        start = lines.index("stabilizers 6") + 1
        label = lines[start]
        lines[start] = ("-" if label[0] == "+" else "+") + label[1:]
        with pytest.raises(ChecksumError):
            parse_code(rechecksum(lines))

    def test_malformed_body(self, code):
        lines = format_code(code).splitlines()
        lines[6] = "Toffoli 0 1 2"
        with pytest.raises(CodeFormatError):
            parse_code(rechecksum(lines))

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            load_code(tmp_path / "absent.code")
