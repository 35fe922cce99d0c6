"""Continued-fraction convergents and semiconvergents of pi."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import gmpy2
from gmpy2 import mpfr, mpq

from .errors import DomainError, ResourceLimitError
from .precision import max_prec_bits, pi_to_precision


class Kind(str, enum.Enum):
    CONVERGENT = "convergent"
    SEMICONVERGENT = "semiconvergent"


@dataclass(frozen=True)
class RationalApprox:
    p: int
    q: int
    kind: Kind
    err: float
    residual: float
    signed_residual: float  # p - q*pi
    mu_eff: float | None

    @property
    def fraction(self) -> str:
        return f"{self.p}/{self.q}"


def _cf_of_rational(x) -> list[int]:
    num, den = int(x.numerator), int(x.denominator)
    terms = []
    while den:
        a, rem = divmod(num, den)
        terms.append(a)
        num, den = den, rem
    return terms


def _cf_at(bits: int, count: int) -> list[int]:
    return _cf_of_rational(mpq(pi_to_precision(bits)))[:count]


def cf_expansion(max_terms: int) -> list[int]:
    """First ``max_terms`` partial quotients of pi.

    A prefix is trusted once two evaluations, at P and 2P bits, agree on
    one more quotient than requested.
    """
    if max_terms < 1:
        raise DomainError(f"max_terms must be >= 1, got {max_terms}")
    need = max_terms + 1
    cap = max_prec_bits()
    # roughly 3.4 bits per partial quotient for pi
    bits = 64 + 4 * need
    while True:
        if 2 * bits > cap:
            raise ResourceLimitError(
                f"cannot certify {max_terms} partial quotients within {cap} bits"
            )
        lo = _cf_at(bits, need)
        hi = _cf_at(2 * bits, need)
        if len(lo) >= need and lo == hi:
            return lo[:max_terms]
        bits *= 2


def _measure(p: int, q: int, kind: Kind, bits: int) -> RationalApprox:
    pi = pi_to_precision(bits)
    with gmpy2.context(precision=bits):
        signed = mpfr(p) - q * pi
        err = abs(mpfr(p) / q - pi)
    err_f = float(err)
    mu = -math.log(err_f) / math.log(q) if q >= 2 and err_f > 0 else None
    return RationalApprox(p, q, kind, err_f, float(abs(signed)), float(signed), mu)


def _convergent_terms(max_q: int) -> list[int]:
    """Enough quotients to pass max_q, plus one extra for the semiconvergent range."""
    count = 8
    while True:
        terms = cf_expansion(count)
        q_prev, q = 0, 1
        for i, a in enumerate(terms):
            q_prev, q = q, a * q + q_prev
            if q > max_q and i + 1 < len(terms):
                return terms
        count *= 2


def approximations(max_q: int, include_semiconvergents: bool = False) -> list[RationalApprox]:
    """Convergents of pi with q <= max_q, optionally with improving semiconvergents.

    A semiconvergent (p_{k-1} + t p_k)/(q_{k-1} + t q_k), 1 <= t < a_{k+1},
    is kept when its error |pi - p/q| beats every fraction with a smaller
    denominator already in the list.
    """
    if max_q < 1:
        raise DomainError(f"max_q must be >= 1, got {max_q}")
    terms = _convergent_terms(max_q)
    # measurement precision: |p - q pi| ~ 1/q, so err ~ 1/q^2 needs 2 log2 q bits
    bits = 96 + 4 * max(1, max_q.bit_length())

    fracs: list[tuple[int, int, Kind]] = []
    p_prev, q_prev = 1, 0
    p, q = terms[0], 1
    fracs.append((p, q, Kind.CONVERGENT))
    for a in terms[1:]:
        if include_semiconvergents:
            for t in range(1, a):
                ps, qs = p_prev + t * p, q_prev + t * q
                if qs > max_q:
                    break
                fracs.append((ps, qs, Kind.SEMICONVERGENT))
        p_prev, q_prev, p, q = p, q, a * p + p_prev, a * q + q_prev
        if q > max_q:
            break
        fracs.append((p, q, Kind.CONVERGENT))

    fracs.sort(key=lambda f: f[1])
    out: list[RationalApprox] = []
    best = None
    for p, q, kind in fracs:
        approx = _measure(p, q, kind, bits)
        with gmpy2.context(precision=bits):
            err_exact = abs(mpq(p, q) - pi_to_precision(bits))
        if kind is Kind.SEMICONVERGENT and best is not None and not err_exact < best:
            continue
        if best is None or err_exact < best:
            best = err_exact
        out.append(approx)
    return out


def mu_eff(approx: RationalApprox) -> float:
    """Effective exponent -ln|pi - p/q| / ln q of one approximant."""
    if approx.q <= 1:
        raise DomainError("mu_eff needs q >= 2")
    if not approx.err > 0:
        raise DomainError("mu_eff needs a positive error")
    return -math.log(approx.err) / math.log(approx.q)


def progression_candidates(max_q: int) -> list[int]:
    """Numerators of all approximants up to max_q; candidate common differences."""
    return sorted({a.p for a in approximations(max_q, include_semiconvergents=True)})
