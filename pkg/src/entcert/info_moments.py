"""Information moments ``H_alpha`` and the maximal-moment analysis on ``[K]``."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._search import grid_then_golden
from .dist_core import AnalyticDistribution, EmpiricalMeasure, Pmf

ALPHA_MAX = 64.0
TIE_TOL = 1e-12


class OptimizationError(RuntimeError):
    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


@dataclass(frozen=True)
class MomentProfile:
    alpha: float
    value: float

    def __post_init__(self):
        if not self.value >= 0:
            raise ValueError(f"information moment must be >= 0, got {self.value}")

    def __float__(self):
        return float(self.value)


def _check_alpha(alpha, lower=0.0, inclusive=False):
    ok = alpha >= lower if inclusive else alpha > lower
    if not ok:
        op = ">=" if inclusive else ">"
        raise ValueError(f"alpha must be {op} {lower}, got {alpha}")
    if alpha > ALPHA_MAX:
        raise ValueError(f"alpha is capped at {ALPHA_MAX:g}, got {alpha}")


def phi_alpha(z, alpha):
    """``z * log(1/z)^alpha`` with ``phi(0) = 0``; scalar or array."""
    _check_alpha(alpha)
    arr = np.asarray(z, dtype=float)
    if np.any(arr < 0) or np.any(arr > 1) or np.any(np.isnan(arr)):
        raise ValueError("phi_alpha is defined on [0, 1]")
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(arr > 0, arr * np.maximum(-np.log(arr), 0.0) ** alpha, 0.0)
    return float(out) if out.ndim == 0 else out


def phi_alpha_max(alpha):
    """Maximizer and maximum of ``phi_alpha`` on ``[0, 1]``."""
    _check_alpha(alpha)
    return math.exp(-alpha), math.exp(alpha * math.log(alpha) - alpha)


def _moment_of_vector(xi, alpha):
    xi = np.asarray(xi, dtype=float).ravel()
    if np.any(xi < 0) or not np.all(np.isfinite(xi)):
        raise ValueError("information moment needs finite non-negative masses")
    pos = xi[xi > 0]
    return math.fsum(pos * np.abs(np.log(pos)) ** alpha)


def h_alpha(dist, alpha) -> MomentProfile:
    """The alpha-th information moment ``sum xi(j) |log xi(j)|^alpha``.

    ``dist`` may be a :class:`Pmf`, an analytic family, an
    :class:`EmpiricalMeasure`, or any non-negative vector (e.g. the
    elementwise ``|mu - nu|``).
    """
    _check_alpha(alpha, 1.0, inclusive=True)
    if isinstance(dist, Pmf):
        value = _moment_of_vector(dist.masses, alpha)
    elif isinstance(dist, EmpiricalMeasure):
        c = dist.count_array.astype(float)
        # log(n) - log(c) is exactly 0 for c == n, never a tiny negative
        value = math.fsum(c * (math.log(dist.n) - np.log(c)) ** alpha) / dist.n
    elif isinstance(dist, AnalyticDistribution):
        value = dist.information_moment(alpha)
    else:
        value = _moment_of_vector(dist, alpha)
    return MomentProfile(float(alpha), float(value))


def max_alpha_entropy_bounds(K: int, alpha: float) -> tuple[float, float]:
    """Lower and upper bounds on ``max H_alpha`` over distributions on ``[K]``."""
    if K < 2:
        raise ValueError("K must be >= 2")
    _check_alpha(alpha, 1.0, inclusive=True)
    logk = math.log(K)
    lower = max(logk, alpha / math.e) ** alpha
    upper = max(logk, alpha) ** alpha + (alpha / math.e) ** alpha
    return lower, upper


@dataclass(frozen=True)
class MaxEntropyResult:
    maximizer: Pmf
    value: float
    diagnostics: dict = field(default_factory=dict)

    def __iter__(self):
        return iter((self.maximizer, self.value))


def _heavy_light_value(v, K, alpha):
    light = (1.0 - v) / (K - 1)
    return float(phi_alpha(v, alpha)) + (K - 1) * float(phi_alpha(light, alpha))


def max_alpha_entropy_exact(K: int, alpha: float, grid_points: int = 257) -> MaxEntropyResult:
    """Maximize ``H_alpha`` over distributions on ``[K]``.

    A maximizer is either uniform or has one heavy mass ``v`` at least
    ``exp(-(alpha-1))`` with ``K-1`` equal light masses, so the search is a
    comparison of the uniform value with a 1-D maximization over ``v``.
    """
    if K < 2:
        raise ValueError("K must be >= 2")
    _check_alpha(alpha, 1.0, inclusive=True)
    uniform_value = math.log(K) ** alpha
    diag = {"uniform_value": uniform_value, "heavy_value": None,
            "heavy_mass": None, "evaluations": 0, "tie": False}

    lo, hi = math.exp(-(alpha - 1.0)), 1.0 - 1e-12
    if lo < hi:
        grid = np.linspace(lo, hi, grid_points)
        try:
            v, neg, evals = grid_then_golden(lambda x: -_heavy_light_value(x, K, alpha), grid)
        except FloatingPointError as exc:
            raise OptimizationError(str(exc), diag) from exc
        diag.update(heavy_value=-neg, heavy_mass=v, evaluations=evals)
        if not math.isfinite(neg):
            raise OptimizationError("heavy-light search returned a non-finite value", diag)
        if -neg > uniform_value + TIE_TOL:
            light = (1.0 - v) / (K - 1)
            masses = np.full(K, light)
            masses[0] = v
            masses /= masses.sum()
            return MaxEntropyResult(Pmf(masses), -neg, diag)
        if abs(-neg - uniform_value) <= TIE_TOL:
            diag["tie"] = True
    return MaxEntropyResult(Pmf.uniform(K), uniform_value, diag)
