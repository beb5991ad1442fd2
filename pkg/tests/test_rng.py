"""Deterministic streams and the three sampling distributions."""

import math
import statistics

import pytest
from hypothesis import given, strategies as st

from ejsp.model import DistSpec
from ejsp.rng import GAMMA, Stream, make_stream, sample, sample_int_range


class TestStream:
    def test_reference_vector_seed_zero(self):
        # published outputs of the splitmix64 reference implementation
        s = Stream(0)
        assert [s.next_u64() for _ in range(3)] == [
            0xE220A8397B1DCDAF,
            0x6E789E6AA1B965F4,
            0x06C45D188009454F,
        ]

    def test_reference_vector_seed_1234567(self):
        s = Stream(1234567)
        assert [s.next_u64() for _ in range(2)] == [
            0x599ED017FB08FC85,
            0x2C73F08458540FA5,
        ]

    def test_gamma_is_odd_64_bit(self):
        assert GAMMA % 2 == 1
        assert GAMMA < 2**64

    def test_determinism(self):
        a = make_stream(42, 0)
        b = make_stream(42, 0)
        assert [a.next_unit() for _ in range(100)] == [b.next_unit() for _ in range(100)]

    def test_distinct_indices_diverge(self):
        a = make_stream(42, 0)
        b = make_stream(42, 1)
        assert a.next_unit() != b.next_unit()

    def test_distinct_seeds_diverge(self):
        assert make_stream(1, 0).next_unit() != make_stream(2, 0).next_unit()

    def test_unit_range(self):
        s = make_stream(7, 3)
        for _ in range(10_000):
            u = s.next_unit()
            assert 0.0 <= u < 1.0

    def test_unit_mean(self):
        s = make_stream(99, 0)
        n = 1_000_000
        mean = sum(s.next_unit() for _ in range(n)) / n
        assert abs(mean - 0.5) < 0.002

    def test_unit_is_53_bit(self):
        s = make_stream(5, 5)
        for _ in range(1000):
            u = s.next_unit()
            assert u == (int(u * 2**53)) / 2**53


class TestSample:
    def test_exponential_inverse_cdf(self):
        # u = 0.5 gives -ln(0.5)/lambda exactly
        class Fixed(Stream):
            def next_unit(self):
                return 0.5

        value = sample(Fixed(0), DistSpec("exponential", lam=0.1))
        assert value == pytest.approx(6.931472, abs=1e-6)

    def test_uniform_linear_map(self):
        class Fixed(Stream):
            def next_unit(self):
                return 0.25

        assert sample(Fixed(0), DistSpec("uniform", a=0.0, b=10.0)) == pytest.approx(2.5)

    def test_gaussian_quarter_turn(self):
        # u2 = 0.25 puts the cosine at pi/2: the sample collapses to mu
        class TwoDraws(Stream):
            draws = (0.5, 0.25)

            def __init__(self):
                super().__init__(0)
                self.i = 0

            def next_unit(self):
                u = self.draws[self.i]
                self.i += 1
                return u

        s = TwoDraws()
        assert sample(s, DistSpec("gaussian", mu=0.0, sigma=1.0)) == pytest.approx(0.0, abs=1e-12)
        assert s.i == 2

    def test_gaussian_consumes_exactly_two_draws(self):
        a = make_stream(3, 0)
        b = make_stream(3, 0)
        sample(a, DistSpec("gaussian", mu=0.0, sigma=1.0))
        b.next_unit()
        b.next_unit()
        assert a.next_unit() == b.next_unit()

    def test_gaussian_zero_draw_guard(self):
        class Zeros(Stream):
            def next_unit(self):
                return 0.0

        value = sample(Zeros(0), DistSpec("gaussian", mu=0.0, sigma=1.0))
        assert math.isfinite(value)

    def test_exponential_zero_draw_guard(self):
        class Zeros(Stream):
            def next_unit(self):
                return 0.0

        assert sample(Zeros(0), DistSpec("exponential", lam=1.0)) == 0.0

    def test_unresolved_parameters_rejected(self):
        s = make_stream(0, 0)
        with pytest.raises(ValueError):
            sample(s, DistSpec("exponential"))
        with pytest.raises(ValueError):
            sample(s, DistSpec("gaussian", mu=1.0))
        with pytest.raises(ValueError):
            sample(s, DistSpec("uniform", a=0.0))

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            sample(make_stream(0, 0), DistSpec("weibull"))

    def test_exponential_mean(self):
        s = make_stream(11, 0)
        dist = DistSpec("exponential", lam=0.1)
        n = 100_000
        mean = sum(sample(s, dist) for _ in range(n)) / n
        assert abs(mean - 10.0) / 10.0 < 0.02

    def test_uniform_mean(self):
        s = make_stream(12, 0)
        dist = DistSpec("uniform", a=0.0, b=10.0)
        n = 100_000
        mean = sum(sample(s, dist) for _ in range(n)) / n
        assert abs(mean - 5.0) / 5.0 < 0.01

    def test_gaussian_mean_and_stdev(self):
        s = make_stream(13, 0)
        dist = DistSpec("gaussian", mu=4.0, sigma=1.0)
        values = [sample(s, dist) for _ in range(100_000)]
        assert abs(statistics.fmean(values) - 4.0) / 4.0 < 0.02
        assert abs(statistics.stdev(values) - 1.0) < 0.02

    def test_bit_identical_sequences(self):
        dist = DistSpec("gaussian", mu=4.0, sigma=1.0)
        a = [sample(make_stream(21, 9), dist) for _ in range(1)]
        s1, s2 = make_stream(21, 9), make_stream(21, 9)
        seq1 = [sample(s1, dist) for _ in range(500)]
        seq2 = [sample(s2, dist) for _ in range(500)]
        assert seq1 == seq2
        assert seq1[0] == a[0]


class TestSampleIntRange:
    def test_singleton(self):
        assert sample_int_range(make_stream(0, 0), 5, 5) == 5

    def test_range_contract(self):
        s = make_stream(8, 0)
        for _ in range(10_000):
            assert 1 <= sample_int_range(s, 1, 100) <= 100

    def test_rejects_inverted_range(self):
        with pytest.raises(ValueError):
            sample_int_range(make_stream(0, 0), 5, 4)

    def test_frequencies_multinomial(self):
        s = make_stream(14, 0)
        n = 100_000
        counts = [0] * 101
        for _ in range(n):
            counts[sample_int_range(s, 1, 100)] += 1
        # each bucket expects n/100 = 1000 with sigma = sqrt(n * p(1-p)) ~ 31.5
        sigma = math.sqrt(n * 0.01 * 0.99)
        for v in range(1, 101):
            assert abs(counts[v] - 1000) <= 3 * sigma

    @given(
        seed=st.integers(min_value=0, max_value=2**64 - 1),
        lo=st.integers(min_value=-50, max_value=50),
        span=st.integers(min_value=0, max_value=100),
    )
    def test_bounds_property(self, seed, lo, span):
        value = sample_int_range(make_stream(seed, 0), lo, lo + span)
        assert lo <= value <= lo + span
