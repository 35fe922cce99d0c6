"""Arbitrary-precision core: pi, nearest-multiple reduction and |cos n|^(n^gamma).

All big-float work goes through MPFR (via gmpy2) so every result is
correctly rounded at the working precision of its budget.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache

import gmpy2
from gmpy2 import mpfr

from .errors import DomainError, ResourceLimitError

DEFAULT_MAX_PREC_BITS = 2**20
DEFAULT_GUARD_BITS = 16
BASE_BITS = 64

# smallest positive subnormal double
_TINY = 2.0**-1074


def max_prec_bits() -> int:
    """Hard precision cap, overridable through ``COSPOW_MAX_PREC_BITS``."""
    raw = os.environ.get("COSPOW_MAX_PREC_BITS")
    if raw is None or raw.strip() == "":
        return DEFAULT_MAX_PREC_BITS
    try:
        cap = int(raw)
    except ValueError:
        raise DomainError(f"COSPOW_MAX_PREC_BITS must be an integer, got {raw!r}") from None
    if cap < 2:
        raise DomainError("COSPOW_MAX_PREC_BITS must be at least 2")
    return cap


def _check_cap(bits: int) -> None:
    cap = max_prec_bits()
    if bits > cap:
        raise ResourceLimitError(f"{bits} bits requested, cap is {cap} bits")


@dataclass(frozen=True, order=True)
class PrecisionBudget:
    bits: int
    guard_bits: int = DEFAULT_GUARD_BITS

    def __post_init__(self):
        if self.bits < BASE_BITS:
            raise DomainError(f"precision budget needs at least {BASE_BITS} bits, got {self.bits}")
        if self.guard_bits < 0:
            raise DomainError("guard_bits must be non-negative")

    @property
    def working(self) -> int:
        """Total MPFR precision used for intermediate results."""
        return self.bits + self.guard_bits

    def doubled(self) -> "PrecisionBudget":
        return PrecisionBudget(2 * self.bits, self.guard_bits)


def _check_gamma(gamma) -> float:
    gamma = float(gamma)
    if not math.isfinite(gamma) or gamma < 0:
        raise DomainError(f"gamma must be a finite non-negative real, got {gamma}")
    return gamma


def required_precision(n: int, gamma: float) -> PrecisionBudget:
    """Budget for evaluating the n-th term with exponent n**gamma.

    The residual n - pi*Q(n) can be as small as ~1/n, and raising to
    n**gamma scales relative error by the same factor, hence
    ``64 + ceil((gamma + 2) * log2(n + 2))`` bits.
    """
    if n < 0:
        raise DomainError(f"index must be non-negative, got {n}")
    gamma = _check_gamma(gamma)
    bits = max(BASE_BITS, BASE_BITS + math.ceil((gamma + 2) * math.log2(n + 2)))
    _check_cap(bits)
    return PrecisionBudget(bits)


@lru_cache(maxsize=64)
def _pi_cached(bits: int):
    with gmpy2.context(precision=bits):
        return gmpy2.const_pi()


def pi_to_precision(bits: int):
    """pi rounded to nearest at ``bits`` binary digits (an ``mpfr``)."""
    bits = int(bits)
    if bits < 2:
        raise DomainError(f"pi needs at least 2 bits, got {bits}")
    _check_cap(bits)
    return _pi_cached(bits)


@dataclass(frozen=True)
class Residual:
    """Integer n together with Q(n) and the signed residual n - pi*Q(n)."""

    n: int
    q: int
    r: object  # mpfr at prec.working bits
    prec: PrecisionBudget

    @property
    def r_float(self) -> float:
        return float(self.r)


@lru_cache(maxsize=4096)
def _reduce(n: int, working: int):
    pi = pi_to_precision(working)
    with gmpy2.context(precision=working, round=gmpy2.RoundToNearest):
        # rint rounds ties to even in nearest mode; ties cannot occur anyway
        q = int(gmpy2.rint(mpfr(n) / pi))
        r = mpfr(n) - q * pi
    return q, r


def nearest_multiple(n: int, prec: PrecisionBudget | None = None) -> Residual:
    """Q(n) = argmin_m |n - m*pi| and the residual, at ``prec`` or the gamma=2 budget."""
    n = int(n)
    if n < 0:
        raise DomainError(f"nearest_multiple needs n >= 0, got {n}")
    if prec is None:
        prec = required_precision(n, 2.0)
    _check_cap(prec.working)
    q, r = _reduce(n, prec.working)
    return Residual(n, q, r, prec)


def log_abs_cos(theta):
    """ln|cos theta| in the current MPFR context, stable for small theta."""
    s = gmpy2.sin(theta / 2)
    return gmpy2.log1p(-2 * s * s)


def cos_power(theta, exponent, working: int):
    """|cos theta| ** exponent evaluated at ``working`` bits; returns an mpfr."""
    with gmpy2.context(precision=working):
        theta = mpfr(theta)
        exponent = mpfr(exponent)
        c = gmpy2.cos(theta)
        if c == 0:
            return mpfr(0)
        if abs(theta) > 1:
            log_c = gmpy2.log(abs(c))
        else:
            log_c = log_abs_cos(theta)
        return gmpy2.exp(exponent * log_c)


def to_unit_float(x) -> tuple[float, bool]:
    """Round an mpfr in [0, 1] to a double, clamping underflow to 0 with a flag."""
    if x < _TINY:
        return 0.0, True
    v = float(x)
    return min(v, 1.0), False


@dataclass(frozen=True)
class SeqValue:
    n: int
    gamma: float
    value: float
    prec_used: PrecisionBudget
    underflow: bool = False


def seq_value(n: int, gamma: float, prec: PrecisionBudget | None = None) -> SeqValue:
    """a_n = |cos n| ** (n ** gamma) at the required (or a supplied) budget."""
    n = int(n)
    if n < 1:
        raise DomainError(f"seq_value needs n >= 1, got {n}")
    gamma = _check_gamma(gamma)
    if prec is None:
        prec = required_precision(n, gamma)
    res = nearest_multiple(n, prec)
    working = prec.working
    with gmpy2.context(precision=working):
        exponent = mpfr(n) ** mpfr(gamma)
    value, underflow = to_unit_float(cos_power(res.r, exponent, working))
    return SeqValue(n, gamma, value, prec, underflow)
