import math
import random

import gmpy2
import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from cospow.errors import DomainError, ResourceLimitError
from cospow.precision import (
    PrecisionBudget,
    nearest_multiple,
    pi_to_precision,
    required_precision,
    seq_value,
)

from conftest import oracle_residual, oracle_value


class TestPi:
    def test_coarse(self):
        assert abs(float(pi_to_precision(10)) - 3.1416) <= 2**-9

    @pytest.mark.parametrize("bits", [2, 10, 64, 200, 1000])
    def test_against_mpmath(self, bits):
        with mpmath.workprec(bits + 64):
            err = abs(mpmath.mpf(pi_to_precision(bits)) - mpmath.pi)
            assert err < mpmath.mpf(2) ** (1 - bits)

    def test_deterministic(self):
        assert pi_to_precision(300) == pi_to_precision(300)

    def test_cap(self):
        with pytest.raises(ResourceLimitError):
            pi_to_precision(2**20 + 1)

    def test_cap_env_override(self, monkeypatch):
        monkeypatch.setenv("COSPOW_MAX_PREC_BITS", "100")
        with pytest.raises(ResourceLimitError):
            pi_to_precision(101)
        assert pi_to_precision(100) > 3

    def test_too_few_bits(self):
        with pytest.raises(DomainError):
            pi_to_precision(1)


class TestRequiredPrecision:
    def test_small(self):
        assert required_precision(1, 0).bits == 68

    def test_policy(self):
        assert required_precision(10**6, 2).bits == 144

    def test_negative_gamma(self):
        with pytest.raises(DomainError):
            required_precision(10, -1)

    @given(st.integers(1, 10**12), st.integers(1, 10**6), st.floats(0, 3), st.floats(0, 1))
    def test_monotone(self, n, dn, g, dg):
        a = required_precision(n, g).bits
        assert required_precision(n + dn, g).bits >= a
        assert required_precision(n, g + dg).bits >= a

    def test_budget_floor(self):
        with pytest.raises(DomainError):
            PrecisionBudget(63)


class TestNearestMultiple:
    def test_one(self):
        res = nearest_multiple(1)
        assert res.q == 0 and res.r == 1

    def test_three(self):
        res = nearest_multiple(3)
        assert res.q == 1
        assert res.r_float == pytest.approx(-0.14159265358979323, abs=1e-15)

    def test_355(self):
        res = nearest_multiple(355)
        assert res.q == 113
        assert res.r_float == pytest.approx(3.0144353364053721e-05, rel=1e-14)

    def test_zero_index(self):
        assert nearest_multiple(0).q == 0

    @pytest.mark.parametrize("n", [7, 22, 644, 833719, 42208400, 10**8 + 7, 2**61 - 1])
    def test_against_oracle(self, n):
        q, r = oracle_residual(n)
        res = nearest_multiple(n)
        assert res.q == q
        assert res.r_float == pytest.approx(r, rel=1e-14)

    def test_residual_bound_exhaustive(self):
        half = math.pi / 2
        for n in range(1, 10**5 + 1):
            res = nearest_multiple(n)
            assert abs(res.r) <= half
            if res.q >= 1:
                assert abs(n / res.q - math.pi) <= math.pi / (2 * res.q)

    @given(st.integers(1, 10**15))
    def test_argmin(self, n):
        res = nearest_multiple(n)
        with gmpy2.context(precision=res.prec.working):
            pi = pi_to_precision(res.prec.working)
            here = abs(n - res.q * pi)
            assert here <= abs(n - (res.q + 1) * pi)
            assert here <= abs(n - (res.q - 1) * pi)


class TestSeqValue:
    def test_gamma_zero(self):
        assert seq_value(3, 0).value == pytest.approx(0.98999249660044546, rel=1e-15)

    def test_355(self):
        assert seq_value(355, 1).value == pytest.approx(0.99999983870895093, rel=1e-15)
        assert seq_value(355, 2).value == pytest.approx(0.99994274331218913, rel=1e-15)

    @pytest.mark.parametrize("n,gamma", [(110, 1), (833719, 1), (4194, 1), (35500, 1), (1234567, 1.7)])
    def test_against_oracle(self, n, gamma):
        assert seq_value(n, gamma).value == pytest.approx(oracle_value(n, gamma), rel=1e-13)

    def test_negative_gamma(self):
        with pytest.raises(DomainError):
            seq_value(10, -0.5)

    def test_underflow_flag(self):
        v = seq_value(100, 10)
        assert v.value == 0.0 and v.underflow

    @given(st.integers(1, 10**6))
    def test_gamma_zero_is_abs_cos(self, n):
        assert seq_value(n, 0).value == pytest.approx(abs(math.cos(n)), rel=1e-12, abs=1e-15)

    def test_doubled_precision_agreement(self):
        rng = random.Random(20261015)
        for _ in range(1000):
            n = rng.randint(1, 10**8)
            g = rng.uniform(0, 2.5)
            a = seq_value(n, g)
            b = seq_value(n, g, a.prec_used.doubled())
            if a.value == 0.0:
                assert b.value < 2**-1000
            else:
                assert abs(a.value - b.value) <= 2**-48 * abs(b.value)

    @given(st.integers(1, 10**9))
    @settings(max_examples=300)
    def test_cosine_envelope(self, n):
        r = nearest_multiple(n).r
        with gmpy2.context(precision=200):
            c = abs(gmpy2.cos(r))
            assert 1 - r * r / 2 <= c
            assert c <= 1 - r * r / 2 + r**4 / 24
