import mpmath
import pytest

from cospow.approximants import (
    Kind,
    approximations,
    cf_expansion,
    mu_eff,
    progression_candidates,
)
from cospow.errors import DomainError, ResourceLimitError


def mpmath_cf(count, prec=2000):
    """Partial quotients by the textbook recurrence on an mpmath pi."""
    with mpmath.workprec(prec):
        x, out = +mpmath.pi, []
        for _ in range(count):
            a = int(mpmath.floor(x))
            out.append(a)
            x = 1 / (x - a)
        return out


def fractions_of(approxs):
    return {(a.p, a.q) for a in approxs}


class TestCF:
    def test_first(self):
        assert cf_expansion(1) == [3]

    def test_five(self):
        assert cf_expansion(5) == [3, 7, 15, 1, 292]

    def test_long_prefix_matches_mpmath(self):
        assert cf_expansion(200) == mpmath_cf(200)

    def test_zero_terms(self):
        with pytest.raises(DomainError):
            cf_expansion(0)

    def test_cap(self, monkeypatch):
        monkeypatch.setenv("COSPOW_MAX_PREC_BITS", "128")
        with pytest.raises(ResourceLimitError):
            cf_expansion(100)


class TestApproximations:
    def test_small_convergents(self):
        got = approximations(120)
        assert [(a.p, a.q) for a in got] == [(3, 1), (22, 7), (333, 106), (355, 113)]
        assert all(a.kind is Kind.CONVERGENT for a in got)

    def test_semiconvergent_52163(self):
        got = {(a.p, a.q): a for a in approximations(17000, True)}
        assert got[(52163, 16604)].kind is Kind.SEMICONVERGENT
        assert (52163, 16604) not in fractions_of(approximations(17000))

    def test_833719(self):
        assert (833719, 265381) in fractions_of(approximations(300000))

    def test_42208400(self):
        got = {(a.p, a.q): a for a in approximations(14 * 10**6, True)}
        assert got[(42208400, 13435351)].kind is Kind.SEMICONVERGENT

    def test_zero(self):
        with pytest.raises(DomainError):
            approximations(0)

    def test_sorted_and_bounded(self):
        got = approximations(10**6, True)
        qs = [a.q for a in got]
        assert qs == sorted(qs) and max(qs) <= 10**6

    def test_convergents_match_cf(self):
        terms = cf_expansion(12)
        p0, q0, p, q = 1, 0, terms[0], 1
        expected = [(p, q)]
        for a in terms[1:]:
            p0, q0, p, q = p, q, a * p + p0, a * q + q0
            expected.append((p, q))
        got = [(a.p, a.q) for a in approximations(expected[-1][1])]
        assert got == expected

    def test_convergent_error_below_inverse_square(self):
        for a in approximations(10**12):
            assert a.err < 1 / a.q**2

    def test_residual_is_q_times_err(self):
        for a in approximations(10**7, True):
            assert a.residual == pytest.approx(a.q * a.err, rel=1e-12)

    def test_convergent_residuals_alternate_and_shrink(self):
        convs = approximations(10**12)
        for prev, cur in zip(convs, convs[1:]):
            assert prev.signed_residual * cur.signed_residual < 0
            assert abs(cur.signed_residual) < abs(prev.signed_residual)

    def test_semiconvergents_improve_error(self):
        got = approximations(10**7, True)
        for i, a in enumerate(got):
            if a.kind is Kind.SEMICONVERGENT:
                assert all(a.err < b.err for b in got[:i])

    def test_semiconvergents_are_best_first_kind(self):
        # brute force over every denominator: best |pi - p/q| records
        with mpmath.workprec(200):
            best, records = None, set()
            for q in range(1, 2000):
                p = int(mpmath.nint(q * mpmath.pi))
                e = abs(mpmath.pi - mpmath.mpf(p) / q)
                if best is None or e < best:
                    best = e
                    records.add((p, q))
        assert fractions_of(approximations(1999, True)) == records

    def test_mu_eff_convergents_above_two(self):
        for a in approximations(10**12):
            if a.q >= 2:
                assert a.mu_eff > 2 - 0.01


class TestMuEff:
    def test_22_7(self):
        a = next(a for a in approximations(10) if a.q == 7)
        assert mu_eff(a) == pytest.approx(3.42928833728, abs=1e-9)

    def test_355_113(self):
        a = next(a for a in approximations(200) if a.q == 113)
        assert mu_eff(a) == pytest.approx(3.20195874261, abs=1e-9)

    def test_q_one(self):
        with pytest.raises(DomainError):
            mu_eff(approximations(1)[0])


class TestCandidates:
    def test_small(self):
        assert {3, 22, 333, 355} <= set(progression_candidates(120))

    def test_q_one(self):
        assert progression_candidates(1) == [3]

    def test_far(self):
        assert 42208400 in progression_candidates(14 * 10**6)

    def test_sorted_unique(self):
        c = progression_candidates(10**5)
        assert c == sorted(set(c))

