"""Continuous envelope of arithmetic-progression subsequences and Gaussian peak fits."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import gmpy2
import numpy as np
from gmpy2 import mpfr

from .errors import DomainError, FitError
from .precision import (
    PrecisionBudget,
    _check_gamma,
    cos_power,
    nearest_multiple,
    required_precision,
    to_unit_float,
)

DEFAULT_K_MAX = 10**6


@dataclass(frozen=True)
class Progression:
    """n_k = p*k + d with cached residuals rp = p - pi*Q(p), rd = d - pi*Q(d)."""

    p: int
    d: int
    gamma: float
    rp: object  # mpfr
    rd: object  # mpfr
    prec: PrecisionBudget

    def index(self, k: int) -> int:
        return self.p * k + self.d

    def contains(self, n: int) -> bool:
        return n >= self.d and (n - self.d) % self.p == 0


def _residual_pair(p: int, d: int, prec: PrecisionBudget):
    return nearest_multiple(p, prec).r, nearest_multiple(d, prec).r


def make_progression(p: int, d: int, gamma: float, k_max: int = DEFAULT_K_MAX) -> Progression:
    """Build a progression whose residuals suffice for k <= k_max."""
    p, d = int(p), int(d)
    if p < 1:
        raise DomainError(f"common difference must be >= 1, got {p}")
    if d < 0:
        raise DomainError(f"offset must be >= 0, got {d}")
    gamma = _check_gamma(gamma)
    prec = required_precision(p * max(int(k_max), 1) + d, max(gamma, 2.0))
    rp, rd = _residual_pair(p, d, prec)
    return Progression(p, d, gamma, rp, rd, prec)


def envelope(rp, rd, p: int, d: int, gamma: float, x: float, working: int):
    """|cos(rp*(x - d)/p + rd)| ** (x**gamma) as an mpfr."""
    with gmpy2.context(precision=working):
        xm = mpfr(x)
        theta = mpfr(rp) * (xm - d) / p + mpfr(rd)
        exponent = xm ** mpfr(gamma)
    return cos_power(theta, exponent, working)


def eval_curve(prog: Progression, x: float) -> float:
    """Envelope curve through the subsequence values, evaluated at real x >= 1."""
    if not x >= 1:
        raise DomainError(f"curve is defined for x >= 1, got {x}")
    need = required_precision(int(round(x)), max(prog.gamma, 2.0))
    rp, rd = prog.rp, prog.rd
    working = prog.prec.working
    if need.working > working:
        rp, rd = _residual_pair(prog.p, prog.d, need)
        working = need.working
    value, _ = to_unit_float(envelope(rp, rd, prog.p, prog.d, prog.gamma, x, working))
    return value


def curve_peak_x(prog: Progression) -> float:
    """Real x where the cosine argument crosses zero (the curve reaches 1 there)."""
    if prog.rp == 0:
        raise DomainError("rp = 0 has no isolated peak")
    return float(prog.d - prog.p * mpfr(prog.rd) / mpfr(prog.rp))


# ---- Gaussian fits ---------------------------------------------------------

@dataclass(frozen=True)
class GaussianFit:
    amplitude: float
    mean: float
    sigma: float
    r_squared: float
    converged: bool = True
    iterations: int = 0

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return self.amplitude * np.exp(-(((x - self.mean) / self.sigma) ** 2))


def _gauss(theta, x):
    a, mu, sigma = theta
    return a * np.exp(-(((x - mu) / sigma) ** 2))


def _jacobian(theta, x):
    a, mu, sigma = theta
    u = (x - mu) / sigma
    e = np.exp(-u * u)
    return np.column_stack([e, a * e * 2 * u / sigma, a * e * 2 * u * u / sigma])


def _initial_sigma(x, y, i_max):
    level = y[i_max] / math.e
    widths = []
    below = np.nonzero(y[:i_max] < level)[0]
    if below.size:
        widths.append(x[i_max] - x[below[-1]])
    below = np.nonzero(y[i_max + 1:] < level)[0]
    if below.size:
        widths.append(x[i_max + 1 + below[0]] - x[i_max])
    if widths:
        return float(np.mean(widths))
    return float(x[-1] - x[0]) / 2 or 1.0


def _as_points(points):
    arr = np.asarray(points, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise FitError("points must be a sequence of (x, y) pairs")
    order = np.argsort(arr[:, 0], kind="stable")
    return arr[order, 0], arr[order, 1]


def fit_gaussian(points: Sequence[tuple[float, float]], max_iter: int = 200, rtol: float = 1e-9) -> GaussianFit:
    """Levenberg-Marquardt fit of y = A exp(-((x - mean)/sigma)**2).

    Starts from A = max y, mean at the argmax and sigma from the 1/e
    half-widths. Non-convergence is reported through ``converged`` with
    the best parameters found.
    """
    if len(points) < 5:
        raise FitError(f"need at least 5 points, got {len(points)}")
    x, y = _as_points(points)
    if np.all(y == y[0]):
        raise FitError("all y values are equal")
    if not y.max() > 0:
        raise FitError("max y must be positive")

    i_max = int(np.argmax(y))
    theta = np.array([y[i_max], x[i_max], _initial_sigma(x, y, i_max)])
    resid = y - _gauss(theta, x)
    ssr = float(resid @ resid)
    lam = 1e-3
    converged = False
    it = 0
    while it < max_iter:
        it += 1
        J = _jacobian(theta, x)
        A = J.T @ J
        g = J.T @ resid
        step = np.linalg.solve(A + lam * np.diag(np.diag(A)), g)
        trial = theta + step
        trial[2] = abs(trial[2])
        r_trial = y - _gauss(trial, x)
        ssr_trial = float(r_trial @ r_trial)
        if ssr_trial <= ssr:
            change = np.max(np.abs(step) / np.maximum(np.abs(theta), 1e-300))
            theta, resid, ssr = trial, r_trial, ssr_trial
            lam = max(lam / 10, 1e-15)
            if change < rtol:
                converged = True
                break
        else:
            lam *= 10
            if lam > 1e16:
                # no descent direction left at machine precision
                converged = True
                break

    fit = GaussianFit(float(theta[0]), float(theta[1]), float(theta[2]), 0.0, converged, it)
    return GaussianFit(fit.amplitude, fit.mean, fit.sigma, r_squared(list(zip(x, y)), fit), converged, it)


def r_squared(points, model: GaussianFit | Progression | Callable) -> float:
    """Coefficient of determination 1 - SS_res/SS_tot of ``model`` on ``points``."""
    if len(points) < 2:
        raise DomainError("r_squared needs at least 2 points")
    arr = np.asarray(points, dtype=float)
    x, y = arr[:, 0], arr[:, 1]
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0:
        raise DomainError("r_squared is undefined for constant y")
    if isinstance(model, Progression):
        y_hat = np.array([eval_curve(model, xi) for xi in x])
    else:
        y_hat = np.asarray(model(x), dtype=float) * np.ones_like(y)
    return 1.0 - float(np.sum((y - y_hat) ** 2)) / ss_tot
