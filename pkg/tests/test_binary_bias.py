import numpy as np
import pytest

from permest.binary_bias import (
    IRREDUCIBLE,
    SampleSpace,
    _walsh_spectrum,
    build_binary_space,
    exhaustive_binary_space,
    gf2_mul,
    measure_bias,
    space_from_descriptor,
)
from permest.errors import CapacityError, DescriptorError

from oracles import binary_bias_brute


def _poly_divides(p, q):
    """q mod p == 0 over GF(2)."""
    dp = p.bit_length() - 1
    while q.bit_length() - 1 >= dp and q:
        q ^= p << (q.bit_length() - 1 - dp)
    return q == 0


class TestFieldTable:
    def test_table_is_irreducible(self):
        for m, poly in IRREDUCIBLE.items():
            assert poly.bit_length() - 1 == m
            for d in range(1, m // 2 + 1):
                for f in range(1 << d, 1 << (d + 1)):
                    assert not _poly_divides(f, poly), (m, hex(f))

    def test_field_axioms_spot(self):
        rng = np.random.default_rng(0)
        m = 5
        for _ in range(50):
            x, y, z = (int(v) for v in rng.integers(0, 1 << m, size=3))
            assert gf2_mul(x, y, m) == gf2_mul(y, x, m)
            assert gf2_mul(x, 1, m) == x
            assert gf2_mul(gf2_mul(x, y, m), z, m) == gf2_mul(x, gf2_mul(y, z, m), m)
            assert gf2_mul(x, y ^ z, m) == gf2_mul(x, y, m) ^ gf2_mul(x, z, m)

    def test_nonzero_elements_invertible(self):
        m = 4
        for x in range(1, 1 << m):
            images = {gf2_mul(x, y, m) for y in range(1 << m)}
            assert len(images) == 1 << m  # multiplication by x permutes the field


class TestWalsh:
    def test_matches_direct_character_sums(self):
        rng = np.random.default_rng(1)
        n = 6
        p = rng.random(1 << n)
        p /= p.sum()
        spectrum = _walsh_spectrum(p)
        for a in range(1 << n):
            direct = sum(
                p[x] * (-1.0) ** (bin(a & x).count("1")) for x in range(1 << n)
            )
            assert spectrum[a] == pytest.approx(direct, abs=1e-12)


class TestBuild:
    def test_small_space_spec_example(self):
        space = build_binary_space(4, 0.5)
        assert measure_bias(space) <= 0.5

    def test_single_coordinate_unbiased(self):
        space = build_binary_space(1, 0.3)
        assert measure_bias(space) == pytest.approx(0.0, abs=1e-12)

    def test_n10_eps01(self):
        space = build_binary_space(10, 0.1)
        assert measure_bias(space) <= 0.1
        assert space.seed_count <= 1 << 20

    def test_declared_epsilon_sound_over_grid(self):
        for n in (2, 5, 8, 12):
            for eps in (0.5, 0.25, 0.1):
                space = build_binary_space(n, eps)
                assert measure_bias(space) <= space.declared_epsilon

    def test_construction_bound_over_grid(self):
        # the powering argument promises bias <= (n-1)/2^m, stronger than
        # the requested epsilon
        for n in (2, 5, 8, 12):
            for eps in (0.5, 0.25, 0.1):
                space = build_binary_space(n, eps)
                assert measure_bias(space) <= (n - 1) / 2**space.field_bits + 1e-12

    def test_seed_bits_grow_logarithmically(self):
        for n in (4, 8, 16):
            for eps in (0.5, 0.1, 0.02):
                space = build_binary_space(n, eps)
                assert space.seed_bits <= 2 * (np.log2(n) + np.log2(1 / eps)) + 4

    def test_capacity_error(self):
        with pytest.raises(CapacityError):
            build_binary_space(1000, 1e-9)

    def test_param_validation(self):
        with pytest.raises(ValueError):
            build_binary_space(0, 0.5)
        with pytest.raises(ValueError):
            build_binary_space(4, 1.5)


class TestExhaustive:
    def test_bias_zero(self):
        for n in (1, 6, 12):
            assert measure_bias(exhaustive_binary_space(n)) <= 1e-12

    def test_fields(self):
        space = exhaustive_binary_space(6)
        assert space.seed_bits == 6
        assert space.declared_epsilon == 0.0
        assert space.exhaustive

    def test_capacity(self):
        with pytest.raises(CapacityError):
            exhaustive_binary_space(25)


class TestGenerator:
    def test_support_matches_generator_loop(self):
        space = build_binary_space(4, 0.5)  # m=3, 64 seeds
        counts = np.zeros(16, dtype=int)
        for seed in range(space.seed_count):
            x = space.generator(seed)
            idx = sum(p << i for i, p in enumerate(x.phases))
            counts[idx] += 1
        hist = space.support_histogram()
        assert np.array_equal(counts / space.seed_count, hist)

    def test_generator_total_on_seed_domain(self):
        space = build_binary_space(3, 0.5)
        for seed in range(space.seed_count):
            x = space.generator(seed)
            assert len(x.phases) == 3
        with pytest.raises(ValueError):
            space.generator(space.seed_count)

    def test_exhaustive_generator_is_bit_unpack(self):
        space = exhaustive_binary_space(4)
        assert space.generator(0b1010).phases == (0, 1, 0, 1)


class TestMeasureBias:
    def test_uniform_is_zero(self):
        assert measure_bias(exhaustive_binary_space(6)) <= 1e-12

    def test_constant_distribution_is_one(self):
        space = SampleSpace(4, 0, 0.0, exhaustive=True)
        hist = np.zeros(16)
        hist[0b0110] = 1.0  # single support point
        space._hist = hist
        space.seed_bits = 0
        assert measure_bias(space) == pytest.approx(1.0, abs=1e-12)

    def test_built_space_meets_declaration(self):
        space = build_binary_space(8, 0.25)
        assert measure_bias(space) <= 0.25

    def test_matches_brute_force(self):
        space = build_binary_space(4, 0.5)
        assert measure_bias(space) == pytest.approx(binary_bias_brute(space), abs=1e-12)

    def test_audit_cost_guard(self):
        with pytest.raises(CapacityError):
            measure_bias(exhaustive_binary_space(20))  # 2^20 * 2^20 > 2^32


class TestDescriptor:
    def test_round_trip_constructed(self):
        space = build_binary_space(8, 0.25)
        again = space_from_descriptor(space.descriptor())
        assert again.n == 8 and again.field_bits == space.field_bits
        assert measure_bias(again) == measure_bias(space)

    def test_round_trip_exhaustive(self):
        space = exhaustive_binary_space(6)
        again = space_from_descriptor(space.descriptor())
        assert again.exhaustive and again.n == 6

    def test_rejects_garbage(self):
        with pytest.raises(DescriptorError):
            space_from_descriptor("complex k=1 s=1")
        with pytest.raises(DescriptorError):
            space_from_descriptor("binary n=4")
        with pytest.raises(DescriptorError):
            space_from_descriptor("binary n=4 m=5 poly=0x99 eps=0.5")
