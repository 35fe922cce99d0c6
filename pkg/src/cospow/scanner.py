"""Range scans of a_n, peak grouping and persistence classification."""

from __future__ import annotations

import math
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import gmpy2
import numpy as np
from gmpy2 import mpfr

from . import _kernels
from .curve import Progression, make_progression
from .errors import DomainError, InsufficientDataError, ResourceLimitError
from .precision import (
    PrecisionBudget,
    SeqValue,
    _check_cap,
    _check_gamma,
    required_precision,
    seq_value,
)

MAX_FULL_SCAN = 10**7
MAX_FILTERED_SCAN = 10**10
DEFAULT_GAP = 355


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    return alpha


@dataclass(frozen=True)
class ScanConfig:
    start: int
    end: int
    gamma: float
    alpha: float | None = None
    chunk: int = 4096

    def __post_init__(self):
        if self.start < 1:
            raise DomainError(f"start must be >= 1, got {self.start}")
        if self.start > self.end:
            raise DomainError(f"start {self.start} exceeds end {self.end}")
        if self.chunk < 1:
            raise DomainError("chunk must be >= 1")
        _check_gamma(self.gamma)
        if self.alpha is not None:
            _check_alpha(self.alpha)

    @property
    def size(self) -> int:
        return self.end - self.start + 1

    def chunks(self) -> Iterator[tuple[int, int]]:
        lo = self.start
        while lo <= self.end:
            hi = min(lo + self.chunk - 1, self.end)
            yield lo, hi
            lo = hi + 1


def _eval(n: int, gamma: float, min_bits: int | None) -> SeqValue:
    if min_bits is None:
        return seq_value(n, gamma)
    need = required_precision(n, gamma)
    return seq_value(n, gamma, max(need, PrecisionBudget(min_bits)))


def _scan_chunk(lo, hi, gamma, alpha, filtered, min_bits=None) -> list[SeqValue]:
    if not filtered:
        return [_eval(n, gamma, min_bits) for n in range(lo, hi + 1)]
    if hi <= _kernels.MAX_SCREEN_INDEX:
        ns = np.arange(lo, hi + 1, dtype=np.int64)
        approx = _kernels.screen_values(ns, gamma)
        keep = ns[approx >= alpha * (1 - _kernels.SCREEN_RTOL)]
        candidates: Iterable[int] = (int(n) for n in keep)
    else:
        candidates = range(lo, hi + 1)
    out = []
    for n in candidates:
        v = _eval(n, gamma, min_bits)
        if v.value > alpha:
            out.append(v)
    return out


def scan_range(
    config: ScanConfig,
    filtered: bool | None = None,
    workers: int = 1,
    min_bits: int | None = None,
) -> list[SeqValue]:
    """Evaluate a_n for start <= n <= end, in ascending n.

    ``filtered`` (default: whether ``config.alpha`` is set) keeps only
    values above alpha. Every reported value comes from the exact MPFR
    path; the double-precision kernel only discards indices that are
    clearly below threshold. Output does not depend on ``chunk`` or
    ``workers``. ``min_bits`` raises the precision floor of every term.
    """
    if min_bits is not None:
        _check_cap(PrecisionBudget(min_bits).working)
    if filtered is None:
        filtered = config.alpha is not None
    if filtered and config.alpha is None:
        raise DomainError("filtered scans need alpha")
    limit = MAX_FILTERED_SCAN if filtered else MAX_FULL_SCAN
    if config.size > limit:
        raise ResourceLimitError(
            f"{config.size} indices exceed the {'filtered' if filtered else 'full'} scan budget of {limit}"
        )
    tasks = [(lo, hi, config.gamma, config.alpha, filtered, min_bits) for lo, hi in config.chunks()]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_scan_chunk, *zip(*tasks)))
    else:
        parts = [_scan_chunk(*t) for t in tasks]
    return [v for part in parts for v in part]


# ---- peaks -----------------------------------------------------------------

@dataclass(frozen=True)
class PeakGroup:
    indices: tuple[int, ...]
    max_value: float
    progression: Progression | None = None

    @property
    def degenerate(self) -> bool:
        return self.progression is None


def infer_progression(indices: list[int], gamma: float = 1.0) -> Progression:
    """Progression with p = gcd of consecutive gaps and d = smallest index."""
    if len(indices) < 3:
        raise InsufficientDataError(f"need at least 3 indices, got {len(indices)}")
    diffs = [b - a for a, b in zip(indices, indices[1:])]
    if any(g <= 0 for g in diffs):
        raise DomainError("indices must be strictly ascending")
    return make_progression(math.gcd(*diffs), indices[0], gamma)


def detect_peaks(values: list[SeqValue], alpha: float, gap: int = DEFAULT_GAP) -> list[PeakGroup]:
    """Group above-threshold indices into runs along residue classes mod ``gap``.

    Within one class, consecutive members at most ``gap`` apart belong to
    the same group. Groups with three or more members carry their
    inferred progression.
    """
    alpha = _check_alpha(alpha)
    if gap < 1:
        raise DomainError("gap must be >= 1")
    classes: dict[int, list[SeqValue]] = defaultdict(list)
    for v in values:
        if v.value > alpha:
            classes[v.n % gap].append(v)

    groups = []
    for members in classes.values():
        run = [members[0]]
        for v in members[1:]:
            if v.n - run[-1].n <= gap:
                run.append(v)
            else:
                groups.append(run)
                run = [v]
        groups.append(run)

    out = []
    for run in sorted(groups, key=lambda r: r[0].n):
        idx = [v.n for v in run]
        prog = infer_progression(idx, run[0].gamma) if len(idx) >= 3 else None
        out.append(PeakGroup(tuple(idx), max(v.value for v in run), prog))
    return out


# ---- persistence -----------------------------------------------------------

@dataclass(frozen=True)
class PersistenceReport:
    progression: Progression
    alpha: float
    horizon: int
    holds_to: int
    first_failure: int | None
    values: tuple[float, ...] = field(repr=False, default=())
    lower_bounds: tuple[float, ...] = field(repr=False, default=())

    @property
    def persistent(self) -> bool:
        return self.first_failure is None


def persistence_lower_bound(prog: Progression, k: int) -> float:
    """1 - (k rp + rd)^2 (pk + d)^gamma / 2, a lower bound for a_{pk+d}."""
    working = prog.prec.working
    with gmpy2.context(precision=working):
        theta = k * mpfr(prog.rp) + mpfr(prog.rd)
        n = prog.p * k + prog.d
        return float(1 - theta * theta * mpfr(n) ** mpfr(prog.gamma) / 2)


def classify_persistence(prog: Progression, alpha: float, horizon: int) -> PersistenceReport:
    """Walk n_k = pk + d for k = 1..horizon and find the longest prefix above alpha."""
    alpha = _check_alpha(alpha)
    if horizon < 1:
        raise DomainError(f"horizon must be >= 1, got {horizon}")
    values, bounds = [], []
    first_failure = None
    for k in range(1, horizon + 1):
        v = seq_value(prog.index(k), prog.gamma).value
        values.append(v)
        bounds.append(persistence_lower_bound(prog, k))
        if first_failure is None and not v > alpha:
            first_failure = k
    holds_to = horizon if first_failure is None else first_failure - 1
    return PersistenceReport(prog, alpha, horizon, holds_to, first_failure, tuple(values), tuple(bounds))
