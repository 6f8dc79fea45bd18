"""Tests for syndromes, syndrome tables, decoding, trials and measurement cost."""

import csv
import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from src.analytics import decision_tree_recursion, expected_unique_syndromes
from src.code import build_qrlc, recommended_gate_count
from src.errors import DimensionError
from src.gf2 import in_rowspan
from src.noise import NoiseEntry, NoiseModel, bernoulli_model, synthetic_model, weight_one_patterns
from src.pauli import PauliString, all_paulis, multiply
from src.qgrand import (
    DecodeStatus,
    DecodingMode,
    SyndromeCalculator,
    Syndrome,
    build_table,
    decode,
    expected_scan_length,
    fixed_ordering,
    from_words,
    greedy_ordering,
    iteration_costs,
    measurement_cost,
    random_ordering,
    scan_length_half,
    simulate_trial,
    stabilizer_decomposition,
    syndrome_of,
    to_words,
    write_trial_log,
)


@pytest.fixture(scope="module")
def trivial():
    return build_qrlc(2, 1, 0)


@pytest.fixture(scope="module")
def trivial_table(trivial):
    return build_table(trivial, bernoulli_model(2, 0.3, 1))


@pytest.fixture(scope="module")
def code():
    return build_qrlc(10, 2, recommended_gate_count(10, 0.3), seed=17)


def identity_only(n):
    return NoiseModel(n, [NoiseEntry(1.0, PauliString.identity(n))])


def random_pattern(n):
    return st.tuples(st.integers(0, (1 << n) - 1), st.integers(0, (1 << n) - 1)).map(
        lambda xz: PauliString(n, xz[0], xz[1], (xz[0] & xz[1]).bit_count())
    )


class TestSyndromes:
    def test_identity_has_zero_syndrome(self, code):
        assert syndrome_of(code, PauliString.identity(10)).is_zero

    def test_stabilizers_have_zero_syndrome(self, code):
        for stabilizer in code.stabilizers:
            assert syndrome_of(code, stabilizer).is_zero

    def test_trivial_code(self, trivial):
        assert syndrome_of(trivial, PauliString.from_label("IX")).bits == 1
        assert syndrome_of(trivial, PauliString.from_label("XI")).bits == 0

    def test_dimension_mismatch(self, code):
        with pytest.raises(DimensionError):
            syndrome_of(code, PauliString.identity(3))

    @pytest.mark.parametrize("n,k,gates", [(3, 1, 6), (4, 2, 10), (5, 1, 20), (5, 3, 15)])
    def test_every_syndrome_class_has_equal_size(self, n, k, gates):
        code = build_qrlc(n, k, gates, seed=n + k)
        sizes = Counter(syndrome_of(code, e).bits for e in all_paulis(n))
        assert len(sizes) == 2**code.s
        assert set(sizes.values()) == {4**n // 2**code.s}

    @pytest.mark.parametrize("n,k", [(2, 1), (3, 1), (3, 2), (4, 1), (4, 3)])
    def test_zero_syndrome_membership(self, n, k):
        code = build_qrlc(n, k, 3 * n, seed=11)
        calc = SyndromeCalculator(code)
        stabilizer_rows = [p.symplectic() for p in code.stabilizers]
        normalizer_rows = stabilizer_rows + [p.symplectic() for p in code.logicals]
        for e in all_paulis(n):
            zero = syndrome_of(code, e).is_zero
            assert zero == in_rowspan(e.symplectic(), normalizer_rows)
            in_group = in_rowspan(e.symplectic(), stabilizer_rows)
            # logical operators also have zero syndrome; the signature tells them apart
            assert (zero and calc.signature(e) == 0) == in_group
            assert in_group == (stabilizer_decomposition(code, e) is not None)

    def test_syndrome_is_linear(self, code):
        rng = np.random.default_rng(21)
        for x1, z1, x2, z2 in rng.integers(0, 1 << 10, size=(1000, 4)).tolist():
            a = PauliString(10, x1, z1, (x1 & z1).bit_count())
            b = PauliString(10, x2, z2, (x2 & z2).bit_count())
            assert syndrome_of(code, multiply(a, b)) == syndrome_of(code, a) ^ syndrome_of(code, b)

    @given(random_pattern(10))
    @settings(max_examples=200, deadline=None)
    def test_calculator_matches_direct(self, e):
        code = build_qrlc(10, 2, 120, seed=17)
        calc = SyndromeCalculator(code)
        assert calc.syndrome(e) == syndrome_of(code, e).bits
        expected = 0
        for i, logical in enumerate(code.logicals):
            expected |= (((e.x & logical.z) ^ (e.z & logical.x)).bit_count() & 1) << i
        assert calc.signature(e) == expected

    def test_batched_words_match_patterns(self, code):
        noise = bernoulli_model(10, 0.05, 2)
        calc = SyndromeCalculator(code)
        syndromes, signatures = calc.noise_words(noise)
        assert syndromes.shape == (len(noise), 1)
        assert from_words(syndromes) == [calc.syndrome(e) for _, e in noise]
        assert from_words(signatures) == [calc.signature(e) for _, e in noise]

    def test_multiword_syndromes(self):
        wide = build_qrlc(70, 2, 300, seed=1)
        noise = bernoulli_model(70, 0.01, 1)
        calc = SyndromeCalculator(wide)
        syndromes, _ = calc.noise_words(noise)
        assert syndromes.shape == (len(noise), 2)
        assert from_words(syndromes) == [syndrome_of(wide, e).bits for _, e in noise]

    def test_word_packing(self):
        values = [0, 1, (1 << 64) + 5, (1 << 100) - 1]
        assert from_words(to_words(values, 2)) == values

    def test_syndrome_value(self):
        a, b = Syndrome(0b1010, 4), Syndrome(0b0110, 4)
        assert (a ^ b).bits == 0b1100
        assert a.to_hex() == "a" and a.bit(1) == 1 and int(a) == 10
        assert Syndrome(5, 9).to_hex() == "005"
        with pytest.raises(DimensionError):
            a ^ Syndrome(1, 5)


class TestSyndromeTable:
    def test_trivial_code_table(self, trivial_table):
        table = trivial_table
        assert table.unique_syndromes == 2
        assert table.leaders[0].index == 0
        assert table.leader_pattern(1).to_label() == "+IX"
        assert table.success_probability == pytest.approx(0.56)
        assert table.collisions == {0: 4, 1: 1}
        assert table.degenerate_count == 2
        pairs = {(p.leader, p.other) for p in table.degenerate_pairs}
        assert pairs == {(0, 6), (4, 5)}

    def test_degenerate_pairs_are_stabilizer_products(self, trivial, trivial_table):
        noise = trivial_table.noise
        for pair in trivial_table.degenerate_pairs:
            product = multiply(noise.pattern(pair.leader), noise.pattern(pair.other))
            assert stabilizer_decomposition(trivial, product) == (pair.stabilizer_mask, pair.phase)
        assert stabilizer_decomposition(trivial, PauliString.from_label("XI")) is None

    def test_identity_only_noise(self, code):
        table = build_table(code, identity_only(10))
        assert list(table.leaders) == [0]
        assert table.success_probability == 1.0

    def test_precompute_split(self, code):
        noise = bernoulli_model(10, 0.01, 2)
        table = build_table(code, noise, precompute_limit=30)
        assert (table.n_p, table.n_j) == (30, noise.N - 30)
        assert table.precomputed(30) and not table.precomputed(31)
        full = build_table(code, noise)
        assert (full.n_p, full.n_j) == (noise.N, 0)

    def test_leaders_are_first_occurrences(self, code):
        noise = bernoulli_model(10, 0.05, 2)
        table = build_table(code, noise)
        seen = {}
        for index, syndrome in enumerate(table.syndromes):
            seen.setdefault(syndrome, index)
        assert {k: v.index for k, v in table.leaders.items()} == seen
        assert sum(table.collisions.values()) == len(noise) - table.unique_syndromes

    def test_noise_must_match_code(self, code):
        with pytest.raises(DimensionError):
            build_table(code, bernoulli_model(9, 0.01, 1))

    def test_degenerate_share_of_collisions(self):
        noise = bernoulli_model(8, 0.1, 2)
        collisions = degenerate = 0
        seed = 0
        while collisions < 2000:
            table = build_table(build_qrlc(8, 1, 60, seed=seed), noise)
            collisions += sum(table.collisions.values())
            degenerate += table.degenerate_count
            seed += 1
        rate = degenerate / collisions
        sigma = math.sqrt(0.25 * 0.75 / collisions)
        assert abs(rate - 0.25) <= max(3 * sigma, 0.03)

    @pytest.mark.slow
    def test_weight_one_syndromes_over_seeds(self):
        noise = bernoulli_model(16, 0.01, 1)
        occupied = np.array(
            [build_table(build_qrlc(16, 1, 200, seed=seed), noise).unique_syndromes for seed in range(500)]
        )
        distinct = np.mean(occupied == len(noise))
        assert distinct == pytest.approx(math.exp(-48 * 49 / 2**16), abs=0.035)
        assert occupied.mean() == pytest.approx(expected_unique_syndromes(2.0**15, 48), abs=0.04)


class TestDecode:
    def test_zero_syndrome(self, trivial_table):
        assert decode(trivial_table, 0).status == DecodeStatus.NO_ERROR

    def test_corrects_leader(self, trivial, trivial_table):
        result = decode(trivial_table, syndrome_of(trivial, PauliString.from_label("IX")))
        assert result.status == DecodeStatus.CORRECTED
        assert result.correction.to_label() == "+IX"
        assert result.index == 4

    def test_abandon_immediately(self, trivial_table):
        assert decode(trivial_table, 1, abandon_after=0).status == DecodeStatus.ABANDONED

    def test_unoccupied_syndrome(self, code):
        table = build_table(code, identity_only(10))
        assert decode(table, 1).status == DecodeStatus.ABANDONED


class TestTrials:
    def test_identity_only_noise(self, code):
        table = build_table(code, identity_only(10))
        record = simulate_trial(code, table.noise, table, np.random.default_rng(0))
        assert record.success and record.iterations == 1
        assert record.stabilizer_measurements == code.s

    @pytest.mark.parametrize("mode", list(DecodingMode))
    def test_success_rate_counts_degenerate_corrections(self, trivial, trivial_table, mode):
        rng = np.random.default_rng(5)
        records = [simulate_trial(trivial, trivial_table.noise, trivial_table, rng, mode) for _ in range(4000)]
        # identity, IX, IY and IZ are recovered; weight-2 draws and XI, YI, ZI are not
        assert np.mean([r.success for r in records]) == pytest.approx(0.70, abs=0.03)
        assert all(not r.success for r in records if r.true_index < 0)

    def test_membership_counts(self, trivial, trivial_table):
        rng = np.random.default_rng(7)
        for _ in range(300):
            r = simulate_trial(trivial, trivial_table.noise, trivial_table, rng)
            if r.syndrome == 1:
                assert (r.iterations, r.stabilizer_measurements, r.rejected_candidates) == (5, 5, 4)
                assert r.decoded_index == 4
            else:
                assert (r.iterations, r.stabilizer_measurements) == (1, 1)

    def test_membership_abandonment(self, trivial, trivial_table):
        rng = np.random.default_rng(8)
        records = [simulate_trial(trivial, trivial_table.noise, trivial_table, rng, abandon_after=2) for _ in range(300)]
        for r in records:
            if r.syndrome == 1:
                assert r.status == DecodeStatus.ABANDONED and not r.success
                assert r.iterations == 3

    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_modes_agree_with_decode(self, seed):
        code = build_qrlc(10, 3, 80, seed=seed)
        table = build_table(code, bernoulli_model(10, 0.08, 2))
        membership_rng, lookup_rng = np.random.default_rng(seed), np.random.default_rng(seed)
        for _ in range(300):
            scanned = simulate_trial(code, table.noise, table, membership_rng)
            looked_up = simulate_trial(code, table.noise, table, lookup_rng, DecodingMode.SYNDROME_DECODING)
            direct = decode(table, looked_up.syndrome)
            assert scanned.true_index == looked_up.true_index
            assert (looked_up.status, looked_up.decoded_index) == (direct.status, direct.index)
            assert (scanned.status, scanned.decoded_index) == (direct.status, direct.index)
            assert scanned.success == looked_up.success

    def test_mean_iterations_match_expected_index(self):
        patterns = weight_one_patterns(16)
        noise = synthetic_model(patterns, "constant", math.log2(len(patterns)))
        tables = (build_table(build_qrlc(16, 1, 200, seed=seed), noise) for seed in range(50))
        table = next(t for t in tables if t.unique_syndromes == len(noise))
        rng = np.random.default_rng(3)
        iterations = [simulate_trial(table.code, noise, table, rng).iterations for _ in range(20_000)]
        assert np.mean(iterations) == pytest.approx(measurement_cost(table.s, noise).iterations_I, rel=0.02)

    def test_trial_log(self, trivial, trivial_table, tmp_path):
        rng = np.random.default_rng(9)
        records = [simulate_trial(trivial, trivial_table.noise, trivial_table, rng) for _ in range(10)]
        path = write_trial_log(records, trivial.s, tmp_path / "log" / "trials.csv")
        with open(path, newline="") as f:
            rows = list(csv.reader(f))
        assert rows[0] == ["trial", "true_pattern", "syndrome_hex", "decoded_pattern", "success", "iterations", "measurements"]
        assert len(rows) == 11
        assert [row[0] for row in rows[1:]] == [str(i) for i in range(10)]


class TestMeasurementCost:
    @pytest.mark.parametrize("s,expected", [(1, 0.5), (4, 1.625)])
    def test_half_scan(self, s, expected):
        assert scan_length_half(s) == pytest.approx(expected)
        assert expected_scan_length(s, 0.5) == pytest.approx(expected)

    @pytest.mark.parametrize("s", [1, 3, 8, 30])
    def test_no_hit_branch(self, s):
        assert scan_length_half(s, count_no_hit=True) == pytest.approx(2 - 2 / 2**s)
        assert expected_scan_length(s, 0.5, count_no_hit=True) == pytest.approx(2 - 2 / 2**s)

    def test_certain_identity(self):
        cost = measurement_cost(6, identity_only(7))
        assert cost.iterations_I == 1.0 and cost.total_C == 6.0 and cost.bound == 6.0

    @pytest.mark.parametrize("n,p,t", [(16, 0.01, 1), (16, 0.05, 2), (8, 0.2, 3)])
    def test_below_bound(self, n, p, t):
        cost = measurement_cost(n - 1, bernoulli_model(n, p, t))
        assert cost.iterations_I > 1
        assert cost.total_C < cost.bound
        assert cost.total_C == pytest.approx(cost.s + (cost.iterations_I - 1) * cost.c_s_half)

    def test_literal_and_listed_iterations(self):
        noise = bernoulli_model(16, 0.2, 1)
        cost = measurement_cost(15, noise)
        assert cost.iterations_I == pytest.approx(sum((i + 1) * p for i, (p, _) in enumerate(noise)))
        assert cost.iterations_listed == pytest.approx(cost.iterations_I / (1 - noise.residual))
        assert cost.iterations_listed > cost.iterations_I
        assert cost.total_C == pytest.approx(15 + (cost.iterations_I - 1) * cost.c_s_half)
        assert cost.total_C_listed == pytest.approx(15 + (cost.iterations_listed - 1) * cost.c_s_half)

    def test_mostly_unlisted_mass(self):
        cost = measurement_cost(15, bernoulli_model(16, 0.5, 0))
        assert cost.iterations_I == pytest.approx(0.5**16)
        assert cost.total_C < 15
        assert cost.iterations_listed == pytest.approx(1.0)
        assert cost.total_C_listed == pytest.approx(15.0)

    def test_iteration_costs(self):
        noise = bernoulli_model(4, 0.1, 1)
        costs = iteration_costs(3, noise, limit=5)
        assert len(costs) == 5
        assert costs[0].remaining_mass == 1.0
        assert costs[0].conditional_probability == pytest.approx(noise.p0)
        assert costs[1].remaining_mass == pytest.approx(1 - noise.p0)
        for c in costs:
            assert scan_length_half(3) <= c.expected_measurements <= 3


class TestOrdering:
    def test_fixed_order_examples(self):
        assert fixed_ordering([0, 1, 2, 3], np.full(4, 0.25), [0, 1]) == 2.0
        assert fixed_ordering([0, 1], np.array([0.5, 0.5]), [0, 1]) == 1.0
        assert fixed_ordering([0, 0, 1], np.array([0.5, 0.25, 0.25]), [0]) == 1.0
        assert fixed_ordering([5], np.array([1.0]), [0, 1, 2]) == 0.0

    def test_two_patterns(self):
        code = build_qrlc(6, 1, 40, seed=2)
        identity = PauliString.identity(6)
        other = next(e for _, e in bernoulli_model(6, 0.1, 1) if not syndrome_of(code, e).is_zero)
        noise = NoiseModel(6, [NoiseEntry(0.9, identity), NoiseEntry(0.1, other)])
        tree, expected = greedy_ordering(code, noise)
        assert expected == 1.0
        differing = syndrome_of(code, other).bits.bit_count()
        assert 1 <= expected <= differing

    def test_tree_classifies_every_pattern(self, code):
        patterns = weight_one_patterns(10)
        noise = synthetic_model(patterns, "decaying", 2.5)
        tree, expected = greedy_ordering(code, noise)
        calc = SyndromeCalculator(code)
        for index, e in enumerate(patterns):
            survivors, depth = tree.classify(calc.syndrome(e))
            assert index in survivors
            assert depth <= code.s
        for leaf in tree.leaves():
            assert len({calc.syndrome(patterns[i]) for i in leaf.survivors}) == 1
        assert 0 < expected <= code.s

    def test_max_entropy_respects_information_bound(self):
        n = 16
        code = build_qrlc(n, 1, recommended_gate_count(n, 0.3), seed=4)
        patterns = weight_one_patterns(n)
        noise = synthetic_model(patterns, "constant", math.log2(len(patterns)))
        tree, expected = greedy_ordering(code, noise)
        if not any(leaf.ambiguous for leaf in tree.leaves()):
            assert expected >= math.log2(len(patterns)) - 1e-9
        random_tree, baseline = random_ordering(code, noise, np.random.default_rng(0))
        if not any(leaf.ambiguous for leaf in random_tree.leaves()):
            assert baseline >= math.log2(len(patterns)) - 1e-9
        assert baseline <= code.s

    def test_random_order_skips_bits_that_do_not_split(self, code):
        entries = [NoiseEntry(0.9, PauliString.identity(10)), NoiseEntry(0.1, PauliString.from_label("XIIIIIIIII"))]
        noise = NoiseModel(10, entries)
        for seed in range(5):
            tree, expected = random_ordering(code, noise, np.random.default_rng(seed), [0, 1 << (code.s - 1)])
            assert expected == 1.0
            assert tree.root.bit == code.s - 1
        assert fixed_ordering([0, 1 << (code.s - 1)], noise.probabilities(), range(code.s)) == code.s

    def test_random_tree_splits_at_every_node(self, code):
        patterns = weight_one_patterns(10)
        noise = synthetic_model(patterns, "constant", math.log2(len(patterns)))
        tree, expected = random_ordering(code, noise, np.random.default_rng(4))
        stack = [tree.root]
        while stack:
            node = stack.pop()
            if node.is_leaf:
                continue
            assert node.zero.survivors and node.one.survivors
            assert len(node.zero.survivors) + len(node.one.survivors) == len(node.survivors)
            stack.extend((node.zero, node.one))
        again = random_ordering(code, noise, np.random.default_rng(4))[1]
        assert expected == again
        assert 0 < expected <= code.s

    def test_zero_entropy_near_recursion(self):
        n = 16
        code = build_qrlc(n, 1, recommended_gate_count(n, 0.3), seed=4)
        patterns = weight_one_patterns(n)
        _, expected = greedy_ordering(code, synthetic_model(patterns, "decaying", 0.0))
        recursion = decision_tree_recursion(len(patterns) - 1, code.s)
        # one stabilizer anticommutes with at most two thirds of the weight-1 errors
        assert 2 <= expected <= recursion.interpolated + 4

    def test_precomputed_syndromes_must_align(self, code):
        noise = bernoulli_model(10, 0.01, 1)
        with pytest.raises(DimensionError):
            greedy_ordering(code, noise, [0, 1])
