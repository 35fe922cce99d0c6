"""Analytic bounds and exact binomial moment identities for |cos n|^(n^2)."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import gmpy2

from .errors import DomainError, ResourceLimitError
from .precision import pi_to_precision

MAX_MOMENT_M = 512
MAX_SERIES_ORDER = 16


def double_factorial(n: int) -> int:
    """n!! for n >= -1, with (-1)!! = 0!! = 1."""
    if n < -1:
        raise DomainError(f"double factorial undefined for {n}")
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def exp_pi_sq_over_2_bound(bits: int = 64):
    """exp(-pi^2 / 2), the lower bound for limsup |cos n|^(n^2), as an mpfr."""
    if bits < 24:
        raise DomainError(f"need at least 24 bits, got {bits}")
    working = bits + 16
    pi = pi_to_precision(working)
    with gmpy2.context(precision=working):
        v = gmpy2.exp(-pi * pi / 2)
    with gmpy2.context(precision=bits):
        return +v


def _check_moment_args(m: int, order: int) -> None:
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    if order < 2 or order % 2:
        raise DomainError(f"order must be an even integer >= 2, got {order}")


def central_moment_bruteforce(m: int, order: int) -> int:
    """sum_{i=0}^{m} C(m, i) (2i - m)^order, exactly."""
    _check_moment_args(m, order)
    if m > MAX_MOMENT_M:
        raise ResourceLimitError(f"m = {m} exceeds the brute-force bound {MAX_MOMENT_M}")
    return sum(math.comb(m, i) * (2 * i - m) ** order for i in range(m + 1))


def moment_closed_form(m: int, order: int) -> int:
    _check_moment_args(m, order)
    if order == 2:
        poly = m
    elif order == 4:
        poly = m * (3 * m - 2)
    elif order == 6:
        poly = m * (15 * m * m - 30 * m + 16)
    else:
        raise DomainError(f"closed form only known for orders 2, 4, 6; got {order}")
    return poly << m


def leading_coefficient(order: int) -> int:
    """(order - 1)!!, the coefficient of m^(order/2) in the normalized moment."""
    if order < 2 or order % 2:
        raise DomainError(f"order must be an even integer >= 2, got {order}")
    return double_factorial(order - 1)


@dataclass(frozen=True)
class MomentIdentity:
    order: int
    m: int
    exact_sum: int
    leading_coeff: int

    @property
    def normalized(self) -> int:
        q, rem = divmod(self.exact_sum, 1 << self.m)
        assert rem == 0
        return q


def moment_identity(m: int, order: int) -> MomentIdentity:
    return MomentIdentity(order, m, central_moment_bruteforce(m, order), leading_coefficient(order))


class Sign(str, enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


@dataclass(frozen=True)
class SeriesTruncation:
    max_order: int
    partial_sum: float
    exact: Fraction
    last_term_sign: Sign
    valid_lower_bound: bool


def series_terms(max_order: int) -> list[Fraction]:
    """Signed terms (-1)^k (2k-1)!!/(2k)! for k = 0..max_order/2."""
    return [
        Fraction((-1) ** k * double_factorial(2 * k - 1), math.factorial(2 * k))
        for k in range(max_order // 2 + 1)
    ]


def truncated_limsup_series(max_order: int) -> SeriesTruncation:
    """Partial sum 1 - 1/2! + 3/4! - 15/6! + ... through the 1/max_order! term.

    The sum bounds the limsup from below only when the last included
    term is negative.
    """
    if max_order < 2 or max_order > MAX_SERIES_ORDER or max_order % 2:
        raise DomainError(f"max_order must be even in [2, {MAX_SERIES_ORDER}], got {max_order}")
    terms = series_terms(max_order)
    total = sum(terms, Fraction(0))
    sign = Sign.NEGATIVE if terms[-1] < 0 else Sign.POSITIVE
    return SeriesTruncation(max_order, float(total), total, sign, sign is Sign.NEGATIVE)


def decay_profile(c: float, exponent_ratio_growth: float, xs) -> list[float]:
    """(1 - 1/x) ** (c * x**(1 + growth)) at each x > 1.

    Each value is at most exp(-c * x**growth).
    """
    if not c > 0 or not exponent_ratio_growth > 0:
        raise DomainError("c and exponent_ratio_growth must be positive")
    out = []
    for x in xs:
        x = float(x)
        if not x > 1:
            raise DomainError(f"decay_profile needs x > 1, got {x}")
        out.append(math.exp(c * x ** (1 + exponent_ratio_growth) * math.log1p(-1 / x)))
    return out
