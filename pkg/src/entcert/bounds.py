"""Deviation bounds, rate curves, and lower-bound constructions for entropy estimation.

Everything here is a deterministic formula.  Formulas that feed a
certificate return a :class:`BoundBreakdown` so the individual summands and
the preconditions that were checked stay visible to the caller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import ROUND_FLOOR, Decimal, localcontext
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np
from scipy.special import logsumexp

from ._search import grid_then_golden
from .dist_core import (
    EmpiricalMeasure,
    TwoLevel,
    Zeta,
    _coerce,
    _pieces,
    entropy,
    kl_divergence,
)
from .info_moments import ALPHA_MAX, h_alpha

DEFAULT_EPS_GRID = tuple(2.0 ** -k for k in range(1, 61))
DEFAULT_WY_C = 2.0
ALPHA_GRID_POINTS = 128
ALPHA_TOL = 1e-6


class DegenerateConstructionError(ValueError):
    """The adversarial construction is degenerate or not representable."""


@dataclass(frozen=True)
class BoundBreakdown:
    name: str
    value: float
    terms: tuple[tuple[str, float], ...]
    preconditions_checked: tuple[tuple[str, bool], ...] = ()
    params: dict = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return all(ok for _, ok in self.preconditions_checked)

    def term(self, label: str) -> float:
        for name, val in self.terms:
            if name == label:
                return val
        raise KeyError(label)


def _finite(value: float, what: str) -> float:
    if not math.isfinite(value):
        raise FloatingPointError(f"{what} is not finite ({value})")
    return float(value)


def _check_delta(delta):
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")


def _check_alpha_gt1(alpha):
    if not alpha > 1.0:
        raise ValueError(f"alpha must be > 1, got {alpha}")
    if alpha > ALPHA_MAX:
        raise ValueError(f"alpha is capped at {ALPHA_MAX:g}, got {alpha}")


# ---------------------------------------------------------------------------
# Deviation bounds


def ckw_l1_radius(emp: EmpiricalMeasure, delta: float) -> BoundBreakdown:
    """Fully empirical radius for ``||mu - mu_hat_n||_1`` at confidence ``1 - delta``."""
    _check_delta(delta)
    n = emp.n
    sqrt_term = 2.0 * math.fsum(np.sqrt(emp.count_array.astype(float))) / n
    conf_term = 6.0 * math.sqrt(math.log(2.0 / delta) / (2.0 * n))
    value = _finite(sqrt_term + conf_term, "l1 radius")
    return BoundBreakdown(
        "ckw_l1_radius", value,
        (("sqrt_mass_term", sqrt_term), ("confidence_term", conf_term)),
        (("0 < delta < 1", True), ("n >= 1", n >= 1)),
        {"delta": delta, "n": n},
    )


def ct_bound(tv: float, d: int) -> float:
    """``tv * log(d / tv)``, the finite-alphabet continuity bound."""
    if d < 2:
        raise ValueError("alphabet size must be >= 2")
    if not 0.0 <= tv <= 0.5:
        raise ValueError(f"distance must lie in [0, 1/2], got {tv}")
    if tv == 0.0:
        return 0.0
    return _finite(tv * math.log(d / tv), "ct bound")


class DimfreeBound(NamedTuple):
    tight: float
    loose: float


def dimfree_bound(l1: float, h_mu: float, h_nu: float, alpha: float) -> DimfreeBound:
    """Dimension-free continuity bound on ``|H(mu) - H(nu)|``.

    The caller is responsible for ``||mu - nu||_inf < 1/2``.
    """
    _check_alpha_gt1(alpha)
    if l1 < 0 or h_mu < 0 or h_nu < 0:
        raise ValueError("l1 distance and moments must be non-negative")
    if l1 == 0.0:
        return DimfreeBound(0.0, 0.0)
    scale = l1 ** (1.0 - 1.0 / alpha)
    tight = scale * (2.0 * alpha ** alpha + h_mu + h_nu) ** (1.0 / alpha)
    loose = scale * (2.0 * alpha + h_mu ** (1.0 / alpha) + h_nu ** (1.0 / alpha))
    return DimfreeBound(_finite(tight, "dimfree bound"), _finite(loose, "dimfree bound"))


# ---------------------------------------------------------------------------
# Rates


def _zeta_head_count(dist: Zeta, threshold: float) -> int:
    """Number of symbols with mass >= threshold (masses decrease in i)."""
    j = int(math.floor((1.0 / (threshold * dist.normalizer)) ** (1.0 / dist.q)))
    while dist.pmf(j + 1) >= threshold:
        j += 1
    while j >= 1 and dist.pmf(j) < threshold:
        j -= 1
    return j


def lambda_n(dist, n: int) -> float:
    """Upper bound on the expected l1 error of the empirical measure.

    ``2 * sum_{mu(j) < 1/n} mu(j) + n^-1/2 * sum_{mu(j) >= 1/n} sqrt(mu(j))``
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    dist = _coerce(dist)
    if isinstance(dist, Zeta):
        j = _zeta_head_count(dist, 1.0 / n)
        head = math.fsum(np.sqrt(dist.masses(j))) if j else 0.0
        return _finite(2.0 * dist.tail_mass(j) + head / math.sqrt(n), "Lambda_n")
    _, counts, masses = _pieces(dist)
    small = masses * n < 1.0
    light = 2.0 * math.fsum(counts[small] * masses[small])
    heavy = math.fsum(counts[~small] * np.sqrt(masses[~small])) / math.sqrt(n)
    return _finite(light + heavy, "Lambda_n")


def expected_gap_bound(dist, n: int, alpha: float) -> float:
    """Bound on ``E|H(mu_hat_n) - H(mu)|`` at a fixed moment order."""
    _check_alpha_gt1(alpha)
    lam = lambda_n(dist, n)
    h = h_alpha(_coerce(dist), alpha).value
    base = alpha ** alpha / math.e + 2.0 * alpha ** alpha + 2.0 * h
    return _finite(base ** (1.0 / alpha) * lam ** (1.0 - 1.0 / alpha), "expected gap bound")


def wy_bound(d: int, D: int, n: int, C: float = DEFAULT_WY_C) -> float:
    """Plug-in risk bound for a two-block mixture that ignores the block weights."""
    if not C > 1.0:
        raise ValueError(f"C must be > 1, got {C}")
    if d < 1 or D < 1 or n < 1:
        raise ValueError("d, D and n must be >= 1")
    k = d + D
    return _finite(k / n + min(C * math.log(k) / math.sqrt(n), math.log(n) / math.sqrt(n)),
                   "WY bound")


class RateOptimum(NamedTuple):
    alpha_star: float
    value: float
    evaluations: int


def alpha_search_grid() -> np.ndarray:
    """Coarse grid over (1, 64] used before golden-section refinement."""
    return 1.0 + np.geomspace(1e-3, ALPHA_MAX - 1.0, ALPHA_GRID_POINTS)


def our_rate_bound(dist, support_bound: int | None, n: int) -> RateOptimum:
    """Minimize the expected-gap bound over the moment order ``alpha`` in (1, 64].

    With a ``support_bound`` K the unknown moment is replaced by its worst case
    on ``[K]``; without one, ``2 * H_alpha(dist)`` is used directly.
    """
    dist = _coerce(dist)
    log_lam = math.log(lambda_n(dist, n))
    if support_bound is not None:
        if support_bound < 2:
            raise ValueError("support bound must be >= 2")
        log_k = math.log(support_bound)

        def log_moment_term(a):
            # 2 max(a, log K)^a + 2 (a/e)^a
            return logsumexp([math.log(2.0) + a * math.log(max(a, log_k)),
                              math.log(2.0) + a * (math.log(a) - 1.0)])
    else:
        def log_moment_term(a):
            h = h_alpha(dist, a).value
            return math.log(2.0 * h) if h > 0 else -math.inf

    def objective(a):
        log_base = logsumexp([a * math.log(a) - 1.0,
                              math.log(2.0) + a * math.log(a),
                              log_moment_term(a)])
        return math.exp(log_base / a + (1.0 - 1.0 / a) * log_lam)

    try:
        a_star, value, evals = grid_then_golden(objective, alpha_search_grid(), tol=ALPHA_TOL)
    except FloatingPointError as exc:
        raise FloatingPointError(f"alpha optimization failed: {exc}") from exc
    return RateOptimum(a_star, _finite(value, "OUR bound"), evals)


def ct_rate_bound(dist, support_size: int, n: int) -> float:
    """``Lambda_n * log(K / Lambda_n)`` for a distribution on at most K symbols."""
    lam = lambda_n(dist, n)
    if lam >= support_size:
        raise ValueError(f"Lambda_n={lam} >= support size {support_size}: degenerate")
    return _finite(lam * math.log(support_size / lam), "CT rate bound")


# ---------------------------------------------------------------------------
# Plug-in bias and risk


def _check_grid(grid):
    g = np.asarray(list(grid), dtype=float)
    if g.size == 0:
        raise ValueError("epsilon grid is empty")
    if np.any(g <= 0) or np.any(g >= 1):
        raise ValueError("epsilon grid points must lie in (0, 1)")
    return g


def _small_mass_entropy(dist, eps: float) -> float:
    """sum over masses below eps of mu(i) log(1/mu(i))."""
    if isinstance(dist, Zeta):
        return dist.partial_moment(1.0, _zeta_head_count(dist, eps) + 1)
    _, counts, masses = _pieces(dist)
    sel = (masses < eps) & (masses > 0)
    return math.fsum(counts[sel] * masses[sel] * -np.log(masses[sel]))


def sandwich_lower_bound(dist, n: int, epsilon_grid: Sequence[float] = DEFAULT_EPS_GRID):
    """Bias bound for the plug-in estimate: ``H(mu) >= E H(mu_hat_n) >= H(mu) - deficit``.

    Returns ``(eps_star, deficit)``, the grid point attaining the smallest
    deficit.  Any grid point gives a valid deficit, so a coarse grid only
    loosens the bound.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    dist = _coerce(dist)
    grid = _check_grid(epsilon_grid)
    deficits = [_small_mass_entropy(dist, e) + math.log1p(1.0 / (e * n)) for e in grid]
    k = int(np.argmin(deficits))
    return float(grid[k]), _finite(max(0.0, deficits[k]), "sandwich deficit")


def plug_in_risk_bound(h: float, alpha: float, n: int,
                       epsilon_grid: Sequence[float] = DEFAULT_EPS_GRID) -> float:
    """Bound on ``E|H(mu) - H(mu_hat_n)|`` over the class ``H_alpha(mu) <= h``."""
    if h < 0:
        raise ValueError("h must be >= 0")
    if not 1.0 <= alpha <= ALPHA_MAX:
        raise ValueError(f"alpha must lie in [1, {ALPHA_MAX:g}]")
    if n < 1:
        raise ValueError("n must be >= 1")
    grid = _check_grid(epsilon_grid)
    inner = (np.log(1.0 / grid) ** (1.0 - alpha)) * h + np.log1p(1.0 / (grid * n))
    return _finite(math.log(n) / math.sqrt(n) + float(inner.min()), "plug-in risk bound")


# ---------------------------------------------------------------------------
# Minimax envelopes


def minimax_upper(h: float, alpha: float, n: int) -> float:
    """Upper envelope on the minimax risk, attained by the plug-in estimate."""
    _check_alpha_gt1(alpha)
    if n < 2:
        raise ValueError("n must be >= 2")
    if h < 0:
        raise ValueError("h must be >= 0")
    ln = math.log(n)
    return _finite((1.0 + ln) / math.sqrt(n) + 2.0 ** (alpha - 1.0) * h / ln ** (alpha - 1.0),
                   "minimax upper envelope")


def minimax_lower_value(alpha: float, n: int) -> tuple[float, float]:
    """Moment level ``h = 3^a log^a n`` and the matching lower envelope ``log(n)/4``."""
    if not 0.0 < alpha <= ALPHA_MAX:
        raise ValueError(f"alpha must lie in (0, {ALPHA_MAX:g}]")
    if n < 2:
        raise ValueError("n must be >= 2")
    ln = math.log(n)
    h = 3.0 ** alpha * ln ** alpha
    bound = h / (4.0 * 3.0 ** alpha * ln ** (alpha - 1.0))
    return _finite(h, "h"), _finite(bound, "minimax lower envelope")


def birthday_no_collision(m: int, k: int) -> float:
    """Probability that ``m`` uniform throws into ``k`` buckets never collide."""
    if m < 1 or k < 1:
        raise ValueError("m and k must be >= 1")
    if m > k:
        return 0.0
    p = Fraction(1)
    for i in range(m):
        p *= Fraction(k - i, k)
    return float(p)


# ---------------------------------------------------------------------------
# Adversarial pair for the unrestricted-entropy class


@dataclass(frozen=True)
class NoEmpPair:
    n: int
    h: float
    a_n: float
    log_S: float
    S: int
    mu0: TwoLevel
    mun: TwoLevel
    kl: float
    entropy_mun: float
    gap: float
    risk_floor: float
    sufficient_condition: bool


def _floor_support(h: float, n: int) -> int:
    """floor(exp(2n(h + a_n)) / 2n) evaluated with 50 significant digits."""
    with localcontext() as ctx:
        ctx.prec = 50
        t = 1 - Decimal(1) / Decimal(2 * n)
        a = t * t.ln()
        x = (Decimal(2 * n) * (Decimal(h) + a)).exp() / Decimal(2 * n)
        return int(x.to_integral_value(rounding=ROUND_FLOOR))


def no_emp_log_support(h: float, n: int) -> tuple[float, float]:
    """``(a_n, log S)`` before flooring, usable when ``S`` itself is too big to build."""
    if not h > 1.0:
        raise ValueError("h must be > 1")
    if n < 1:
        raise ValueError("n must be >= 1")
    t = 1.0 - 1.0 / (2 * n)
    a_n = t * math.log(t)
    return a_n, 2 * n * (h + a_n) - math.log(2 * n)


def no_emp_construction(h: float, n: int) -> NoEmpPair:
    """Point mass and two-level distribution that are statistically close yet
    differ in entropy by at least ``h/2``."""
    a_n, log_s = no_emp_log_support(h, n)
    t = 1.0 - 1.0 / (2 * n)
    if log_s > 60 * math.log(2):
        raise DegenerateConstructionError(
            f"support size exp({log_s:.6g}) exceeds 2^60 and is not materialized")
    S = _floor_support(h, n)
    if S < 2:
        raise DegenerateConstructionError(f"support size S={S} < 2 for h={h}, n={n}")
    mu0 = TwoLevel(1.0, 1, 0.0)
    mun = TwoLevel(t, S, 1.0 / (2 * n * S))
    kl = kl_divergence(mu0, mun)
    h_mun = entropy(mun)
    gap = abs(entropy(mu0) - h_mun)
    if kl > 1.0 / n + 1e-12:
        raise DegenerateConstructionError(f"KL={kl} exceeds 1/n")
    if not h / 2 - 1e-12 <= h_mun <= h + 1e-12:
        raise DegenerateConstructionError(f"H(mu_n)={h_mun} outside [h/2, h]")
    return NoEmpPair(
        n=n, h=h, a_n=a_n, log_S=math.log(S), S=S, mu0=mu0, mun=mun, kl=kl,
        entropy_mun=h_mun, gap=gap, risk_floor=h / (4 * math.e),
        sufficient_condition=math.exp(2 * n * h - 1) / (2 * n) > 2,
    )
