"""Discrete distributions on the positive integers.

Symbols are 1-based throughout: a :class:`Pmf` with masses ``(m1, ..., mk)``
puts ``m_i`` on symbol ``i``.  All logarithms are natural.

Three kinds of objects carry probability mass:

* :class:`Pmf` -- an explicit, finite mass vector.
* :class:`AnalyticDistribution` subclasses (:class:`Zeta`, :class:`TwoLevel`,
  :class:`MixtureOfUniforms`) -- closed-form families whose support may be
  infinite or far too large to materialize.
* :class:`EmpiricalMeasure` -- symbol counts from a finite sample.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from types import MappingProxyType
from typing import Iterable, Mapping, Union

import numpy as np
from scipy import special

NORM_TOL = 1e-9
TAIL_TOL = 1e-9

_HEAD_START = 1 << 16
_HEAD_MAX = 1 << 24
_CHUNK = 1 << 20
_WINDOW_MAX = 1 << 24
_SAMPLE_TABLE = 1 << 20
_SYMBOL_MAX = 1 << 62

# 2 zeta(3) / (2 pi)^3, the Euler-Maclaurin remainder constant for p = 3
_EM3 = 2.0 * special.zeta(3.0, 1.0) / (2.0 * math.pi) ** 3


class InvariantError(ValueError):
    """A distribution failed its normalization or sign invariants."""


class DivergenceInfiniteError(ValueError):
    """KL divergence is infinite because the supports are incompatible."""


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(np.random.SeedSequence(int(seed) & (2**64 - 1)))


def derive_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent generator for one Monte-Carlo trial.

    The trial index is mixed into the 64-bit seed through the SeedSequence
    spawn key, so trials can run in any order (or in parallel) and still
    reproduce.
    """
    ss = np.random.SeedSequence(int(seed) & (2**64 - 1), spawn_key=(int(trial),))
    return np.random.default_rng(ss)


# ---------------------------------------------------------------------------
# Explicit distributions


@dataclass(frozen=True, eq=False)
class Pmf:
    """Finite probability vector over symbols ``1..len(masses)``."""

    masses: np.ndarray

    def __post_init__(self):
        m = np.array(self.masses, dtype=float).ravel()
        if m.size == 0:
            raise InvariantError("Pmf needs at least one mass")
        if not np.all(np.isfinite(m)) or np.any(m < 0):
            raise InvariantError("Pmf masses must be finite and non-negative")
        total = math.fsum(m)
        if abs(total - 1.0) > NORM_TOL:
            raise InvariantError(f"Pmf masses sum to {total!r}, not 1 (tol {NORM_TOL})")
        m.setflags(write=False)
        object.__setattr__(self, "masses", m)

    @classmethod
    def uniform(cls, k: int) -> "Pmf":
        if k < 1:
            raise ValueError("uniform support size must be >= 1")
        return cls(np.full(k, 1.0 / k))

    @classmethod
    def point_mass(cls, symbol: int = 1) -> "Pmf":
        if symbol < 1:
            raise ValueError("symbols are positive integers")
        m = np.zeros(symbol)
        m[-1] = 1.0
        return cls(m)

    def __len__(self) -> int:
        return self.masses.size

    @property
    def support_size(self) -> int:
        return self.masses.size

    def pmf(self, i):
        i = np.asarray(i)
        inside = (i >= 1) & (i <= self.masses.size)
        idx = np.where(inside, i - 1, 0)
        return np.where(inside, self.masses[idx], 0.0)

    def __repr__(self) -> str:
        return f"Pmf({np.array2string(self.masses, threshold=8)})"


@dataclass(frozen=True)
class EmpiricalMeasure:
    """Counts per symbol from a sample of size ``n``."""

    counts: Mapping[int, int]
    n: int

    def __post_init__(self):
        clean = {}
        for sym, c in sorted(self.counts.items()):
            if int(c) != c or c < 0:
                raise InvariantError(f"count for symbol {sym} must be a non-negative integer")
            if c:
                clean[int(sym)] = int(c)
        total = sum(clean.values())
        if self.n < 1:
            raise InvariantError("empirical measure needs n >= 1")
        if total != self.n:
            raise InvariantError(f"counts sum to {total}, expected n={self.n}")
        object.__setattr__(self, "counts", MappingProxyType(clean))
        object.__setattr__(self, "n", int(self.n))

    @classmethod
    def from_counts(cls, counts: Mapping[int, int]) -> "EmpiricalMeasure":
        return cls(dict(counts), int(sum(counts.values())))

    @property
    def symbols(self) -> np.ndarray:
        return np.fromiter(self.counts.keys(), dtype=np.int64, count=len(self.counts))

    @property
    def count_array(self) -> np.ndarray:
        return np.fromiter(self.counts.values(), dtype=np.int64, count=len(self.counts))

    @property
    def masses(self) -> np.ndarray:
        return self.count_array / self.n

    @property
    def support_size(self) -> int:
        return len(self.counts)

    def pmf(self, i):
        i = np.asarray(i)
        f = np.vectorize(lambda s: self.counts.get(int(s), 0), otypes=[float])
        return f(i) / self.n

    def __eq__(self, other):
        if not isinstance(other, EmpiricalMeasure):
            return NotImplemented
        return self.n == other.n and dict(self.counts) == dict(other.counts)

    def __hash__(self):
        return hash((self.n, tuple(self.counts.items())))


# ---------------------------------------------------------------------------
# Closed-form families


class AnalyticDistribution:
    """Closed-form distribution evaluated lazily, never materialized in full."""

    support_size: int | None = None

    def pmf(self, i):
        raise NotImplementedError

    def tail_mass(self, k: int) -> float:
        """P(X > k)."""
        raise NotImplementedError

    def information_moment(self, alpha: float) -> float:
        """sum_i p_i |log p_i|^alpha over the support."""
        raise NotImplementedError

    def entropy(self) -> float:
        return self.information_moment(1.0)

    def masses(self, limit: int | None = None) -> np.ndarray:
        """Masses of symbols ``1..limit`` (``limit`` defaults to the support)."""
        if limit is None:
            if self.support_size is None:
                raise ValueError("infinite support: pass an explicit limit")
            limit = self.support_size
        if limit > _WINDOW_MAX:
            raise ValueError(f"refusing to materialize {limit} masses")
        return np.asarray(self.pmf(np.arange(1, limit + 1)), dtype=float)

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        raise NotImplementedError


class _Blocks(AnalyticDistribution):
    """Finite distribution made of runs of equal masses on consecutive symbols."""

    def blocks(self) -> list[tuple[int, int, float]]:
        """``(first_symbol, count, mass)`` runs with positive mass."""
        raise NotImplementedError

    @property
    def support_size(self) -> int:
        b = self.blocks()
        return b[-1][0] + b[-1][1] - 1

    def pmf(self, i):
        i = np.asarray(i)
        out = np.zeros(i.shape, dtype=float)
        for start, count, mass in self.blocks():
            out = np.where((i >= start) & (i < start + count), mass, out)
        return out

    def tail_mass(self, k: int) -> float:
        total = 0.0
        for start, count, mass in self.blocks():
            above = start + count - max(start, k + 1)
            if above > 0:
                total += min(above, count) * mass
        return total

    def information_moment(self, alpha: float) -> float:
        return math.fsum(count * mass * max(0.0, -math.log(mass)) ** alpha
                         for _, count, mass in self.blocks())

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        blocks = self.blocks()
        weights = np.array([c * m for _, c, m in blocks])
        which = rng.choice(len(blocks), size=n, p=weights / weights.sum())
        out = np.empty(n, dtype=np.int64)
        for b, (start, count, _) in enumerate(blocks):
            sel = which == b
            out[sel] = start + rng.integers(count, size=int(sel.sum()))
        return out


class TwoLevel(_Blocks):
    """One heavy atom on symbol 1 and ``light_count`` equal atoms on ``2..1+light_count``."""

    def __init__(self, heavy: float, light_count: int, light_mass: float):
        if not 0.0 <= heavy <= 1.0 or not 0.0 <= light_mass <= 1.0:
            raise InvariantError("TwoLevel masses must be probabilities")
        if int(light_count) != light_count or light_count < 1:
            raise InvariantError("TwoLevel light_count must be an integer >= 1")
        if abs(heavy + light_count * light_mass - 1.0) > NORM_TOL:
            raise InvariantError(
                f"TwoLevel mass {heavy} + {light_count}*{light_mass} is not 1")
        self.heavy = float(heavy)
        self.light_count = int(light_count)
        self.light_mass = float(light_mass)

    def blocks(self):
        out = []
        if self.heavy > 0:
            out.append((1, 1, self.heavy))
        if self.light_mass > 0:
            out.append((2, self.light_count, self.light_mass))
        return out

    def __repr__(self):
        return f"TwoLevel(heavy={self.heavy}, light_count={self.light_count}, light_mass={self.light_mass})"


class MixtureOfUniforms(_Blocks):
    """``p * Unif[d] + (1-p) * Unif(d + [D])``."""

    def __init__(self, d: int, D: int, p: float):
        if d < 1 or D < 1:
            raise InvariantError("mixture block sizes must be >= 1")
        if not 0.0 <= p <= 1.0:
            raise InvariantError("mixture weight must be a probability")
        self.d, self.D, self.p = int(d), int(D), float(p)

    def blocks(self):
        out = []
        if self.p > 0:
            out.append((1, self.d, self.p / self.d))
        if self.p < 1:
            out.append((self.d + 1, self.D, (1.0 - self.p) / self.D))
        return out

    @property
    def support_size(self) -> int:
        return self.d + self.D

    def __repr__(self):
        return f"MixtureOfUniforms(d={self.d}, D={self.D}, p={self.p})"


class Zeta(AnalyticDistribution):
    """Zeta (discrete power-law) distribution, ``p(i) = i^-q / zeta(q)``."""

    support_size = None

    def __init__(self, q: float):
        if not q > 1.0:
            raise InvariantError("zeta exponent must exceed 1")
        self.q = float(q)
        self.normalizer = float(special.zeta(self.q, 1.0))
        self.log_normalizer = math.log(self.normalizer)

    def pmf(self, i):
        i = np.asarray(i, dtype=float)
        with np.errstate(divide="ignore"):
            val = np.exp(-self.q * np.log(np.maximum(i, 1.0)) - self.log_normalizer)
        return np.where(i >= 1, val, 0.0)

    def tail_mass(self, k: int) -> float:
        if k < 1:
            return 1.0
        return float(special.zeta(self.q, k + 1.0)) / self.normalizer

    def information_moment(self, alpha: float) -> float:
        return zeta_series(self.q, float(alpha))[0]

    def partial_moment(self, alpha: float, start: int) -> float:
        """sum_{i >= start} p_i |log p_i|^alpha."""
        return zeta_series(self.q, float(alpha), int(start))[0]

    def truncation_point(self, tol: float) -> int:
        """Smallest power of two M with mass and entropy tails beyond M both <= tol."""
        m = 2
        while True:
            if max(self.tail_mass(m), self.partial_moment(1.0, m + 1)) <= tol:
                return m
            m *= 2

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        # inverse CDF on the survival function S(k) = P(X > k)
        v = 1.0 - rng.random(n)
        neg_surv = _zeta_neg_survival(self.q)
        out = np.searchsorted(neg_surv, -v, side="left").astype(np.int64) + 1
        for j in np.flatnonzero(out > neg_surv.size):
            out[j] = self._invert_tail(v[j], neg_surv.size)
        return out

    def _invert_tail(self, v: float, lo: int) -> int:
        # S(lo) > v; bracket then bisect for smallest k with S(k) <= v
        hi = lo * 2
        while self.tail_mass(hi) > v:
            if hi > _SYMBOL_MAX:
                raise OverflowError(
                    f"zeta(q={self.q}) draw exceeds the int64 symbol range")
            lo, hi = hi, hi * 2
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.tail_mass(mid) <= v:
                hi = mid
            else:
                lo = mid
        return hi

    def __repr__(self):
        return f"Zeta(q={self.q})"


@lru_cache(maxsize=8)
def _zeta_neg_survival(q: float) -> np.ndarray:
    k = np.arange(1, _SAMPLE_TABLE + 1, dtype=float)
    surv = special.zeta(q, k + 1.0) / special.zeta(q, 1.0)
    out = -surv
    out.setflags(write=False)
    return out


# ---------------------------------------------------------------------------
# Zeta information-moment series
#
# f(x) = x^-q (c + q log x)^alpha / Z with c = log Z, so f(i) = p_i log(1/p_i)^alpha.
# The head is summed term by term; the tail uses Euler-Maclaurin to order 3
# with the remainder bounded by 2 zeta(3)/(2 pi)^3 * TV(f'' on [M, inf)).


def _deriv_coeffs(q: float, alpha: float, k: int) -> list[float]:
    """f^(k)(x) = x^-(q+k) * sum_j a_j w^(alpha-j) / Z; returns a_0..a_k."""
    coeffs = [1.0]
    s = q
    for _ in range(k):
        nxt = [0.0] * (len(coeffs) + 1)
        for j, a in enumerate(coeffs):
            nxt[j] += -s * a
            nxt[j + 1] += (alpha - j) * q * a
        coeffs = nxt
        s += 1.0
    return coeffs


def _deriv_value(q, alpha, c, k, coeffs, x):
    lx = math.log(x)
    w = c + q * lx
    lw = math.log(w)
    return math.fsum(a * math.exp((alpha - j) * lw - (q + k) * lx - c)
                     for j, a in enumerate(coeffs) if a != 0.0)


def _zeta_tail(q: float, alpha: float, c: float, M: int) -> tuple[float, float]:
    """Estimate of sum_{i >= M} f(i) and a bound on the estimate's error."""
    beta = (q - 1.0) / q
    w0 = c + q * math.log(M)
    upper = special.gammaincc(alpha + 1.0, beta * w0)
    if upper > 0:
        log_int = (beta * c - c - math.log(q) + math.log(upper)
                   + special.gammaln(alpha + 1.0) - (alpha + 1.0) * math.log(beta))
        integral = math.exp(log_int)
    else:
        integral = 0.0
    d0 = _deriv_value(q, alpha, c, 0, [1.0], M)
    d1 = _deriv_value(q, alpha, c, 1, _deriv_coeffs(q, alpha, 1), M)
    estimate = integral + 0.5 * d0 - d1 / 12.0

    c2 = _deriv_coeffs(q, alpha, 2)
    c3 = _deriv_coeffs(q, alpha, 3)
    # sign changes of f''' come from the cubic a0 w^3 + a1 w^2 + a2 w + a3
    pts = [float(M)]
    for r in np.roots(c3):
        if abs(r.imag) <= 1e-9 * max(1.0, abs(r.real)) and r.real > w0:
            pts.append(math.exp((r.real - c) / q))
    pts.sort()
    vals = [_deriv_value(q, alpha, c, 2, c2, x) for x in pts] + [0.0]
    variation = math.fsum(abs(b - a) for a, b in zip(vals, vals[1:]))
    return estimate, _EM3 * variation


@lru_cache(maxsize=4096)
def zeta_series(q: float, alpha: float, start: int = 1,
                tol: float = TAIL_TOL) -> tuple[float, float]:
    """``sum_{i >= start} p_i log(1/p_i)^alpha`` for Zeta(q) with an error bound.

    The error bound is at most ``tol * max(1, |value|)``; for large ``alpha``
    the moment itself is astronomically large and only relative accuracy is
    meaningful in double precision.
    """
    if alpha < 0:
        raise ValueError("moment order must be >= 0")
    c = math.log(float(special.zeta(q, 1.0)))
    head = 0.0
    lo = max(1, start)
    M = max(_HEAD_START, lo)
    while True:
        for a in range(lo, M, _CHUNK):
            i = np.arange(a, min(a + _CHUNK, M), dtype=float)
            w = c + q * np.log(i)
            head += math.fsum(np.exp(alpha * np.log(w) - w))
        lo = M
        tail, err = _zeta_tail(q, alpha, c, M)
        value = head + tail
        if not math.isfinite(value):
            raise FloatingPointError(f"zeta series overflow at q={q}, alpha={alpha}")
        if err <= tol * max(1.0, abs(value)):
            return value, err
        if M >= _HEAD_MAX:
            raise ValueError(
                f"zeta series for q={q}, alpha={alpha} cannot reach tolerance {tol}"
                f" (error bound {err:.3g} at {M} terms)")
        M *= 4


# ---------------------------------------------------------------------------
# Operations

Distribution = Union[Pmf, AnalyticDistribution, EmpiricalMeasure]


def _coerce(dist) -> Distribution:
    if isinstance(dist, (Pmf, AnalyticDistribution, EmpiricalMeasure)):
        return dist
    return Pmf(dist)


def entropy(dist) -> float:
    """Shannon entropy in nats; zero masses contribute nothing."""
    dist = _coerce(dist)
    if isinstance(dist, Pmf):
        return float(math.fsum(special.entr(dist.masses)))
    if isinstance(dist, EmpiricalMeasure):
        c = dist.count_array.astype(float)
        return float(math.fsum(c * (math.log(dist.n) - np.log(c)))) / dist.n
    return dist.entropy()


def _pieces(dist) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(starts, counts, masses) runs for a finitely supported distribution."""
    if isinstance(dist, Pmf):
        k = dist.masses.size
        return np.arange(1, k + 1, dtype=np.int64), np.ones(k, dtype=np.int64), dist.masses
    if isinstance(dist, EmpiricalMeasure):
        s = dist.symbols
        return s, np.ones(s.size, dtype=np.int64), dist.masses
    if isinstance(dist, _Blocks):
        b = dist.blocks()
        return (np.array([x[0] for x in b], dtype=np.int64),
                np.array([x[1] for x in b], dtype=np.int64),
                np.array([x[2] for x in b], dtype=float))
    raise TypeError(f"{type(dist).__name__} is not finitely supported")


def _aligned(p, q) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Common refinement of two piecewise-constant distributions.

    Returns segment lengths and the constant mass of ``p`` and ``q`` on each.
    """
    ps, pc, pm = _pieces(p)
    qs, qc, qm = _pieces(q)
    edges = np.unique(np.concatenate([ps, ps + pc, qs, qs + qc]))
    seg_start, seg_len = edges[:-1], np.diff(edges)

    def lookup(starts, counts, masses):
        idx = np.searchsorted(starts, seg_start, side="right") - 1
        ok = idx >= 0
        idx = np.where(ok, idx, 0)
        ok &= seg_start < starts[idx] + counts[idx]
        return np.where(ok, masses[idx], 0.0)

    return seg_len, lookup(ps, pc, pm), lookup(qs, qc, qm)


def _dense_window(dist, m: int) -> tuple[np.ndarray, float]:
    """Masses on symbols 1..m and the mass outside that window."""
    if isinstance(dist, Zeta):
        return dist.masses(m), dist.tail_mass(m)
    starts, counts, masses = _pieces(dist)
    out = np.zeros(m)
    outside = 0.0
    for s, c, mass in zip(starts, counts, masses):
        lo, hi = max(int(s), 1), min(int(s + c - 1), m)
        if hi >= lo:
            out[lo - 1:hi] += mass
        outside += mass * (int(c) - max(0, hi - lo + 1))
    return out, outside


def _max_symbol(dist) -> int:
    starts, counts, _ = _pieces(dist)
    return int(np.max(starts + counts - 1))


def kl_divergence(p, q) -> float:
    """KL(p || q) in nats."""
    p, q = _coerce(p), _coerce(q)
    if isinstance(p, Zeta):
        if not isinstance(q, Zeta):
            raise DivergenceInfiniteError("zeta has infinite support; q is finite")
        if p.q == q.q:
            return 0.0
        # E_p[log i] = (H(p) - log Z_p) / q_p
        mean_log = (p.entropy() - p.log_normalizer) / p.q
        return q.log_normalizer - p.log_normalizer + (q.q - p.q) * mean_log
    if isinstance(q, Zeta):
        starts, counts, masses = _pieces(p)
        pos = masses > 0
        starts, counts, masses = starts[pos], counts[pos], masses[pos]
        if np.any(starts < 1):
            raise DivergenceInfiniteError("p charges symbols outside the zeta support")
        log_sum = (special.gammaln(starts + counts.astype(float))
                   - special.gammaln(starts.astype(float)))
        terms = counts * masses * np.log(masses) + masses * (counts * q.log_normalizer + q.q * log_sum)
        return max(0.0, float(math.fsum(terms)))
    length, pm, qm = _aligned(p, q)
    pos = pm > 0
    if np.any(pos & (qm <= 0)):
        raise DivergenceInfiniteError("support(p) is not contained in support(q)")
    terms = length[pos] * pm[pos] * (np.log(pm[pos]) - np.log(qm[pos]))
    return max(0.0, float(math.fsum(terms)))


def l1_distance(p, q) -> float:
    """sum_i |p(i) - q(i)|, exact up to floating point for every supported pair."""
    p, q = _coerce(p), _coerce(q)
    if isinstance(p, Zeta) and isinstance(q, Zeta):
        if p.q == q.q:
            return 0.0
        # p_i / q_i is monotone in i, so the difference changes sign once
        cross = math.exp((p.log_normalizer - q.log_normalizer) / (q.q - p.q))
        m = max(2, int(math.ceil(cross)) + 1)
        if m > _WINDOW_MAX:
            raise ValueError("zeta exponents too close for an exact l1 window")
        a, b = p.masses(m), q.masses(m)
        return float(math.fsum(np.abs(a - b))) + abs(p.tail_mass(m) - q.tail_mass(m))
    if isinstance(p, Zeta) or isinstance(q, Zeta):
        z, f = (p, q) if isinstance(p, Zeta) else (q, p)
        m = max(1, _max_symbol(f))
        if m > _WINDOW_MAX:
            raise ValueError("finite support too large to align with a zeta distribution")
        fw, f_out = _dense_window(f, m)
        return float(math.fsum(np.abs(fw - z.masses(m)))) + z.tail_mass(m) + f_out
    length, pm, qm = _aligned(p, q)
    return float(math.fsum(length * np.abs(pm - qm)))


def tv_distance(p, q) -> float:
    """Total variation distance, half the l1 distance."""
    return 0.5 * l1_distance(p, q)


def sup_distance(p, q) -> float:
    """sup_i |p(i) - q(i)|."""
    p, q = _coerce(p), _coerce(q)
    if isinstance(p, Zeta) or isinstance(q, Zeta):
        if isinstance(p, Zeta) and isinstance(q, Zeta):
            m = 1 << 16
            return float(np.max(np.abs(p.masses(m) - q.masses(m))))
        z, f = (p, q) if isinstance(p, Zeta) else (q, p)
        m = max(1, _max_symbol(f))
        fw, _ = _dense_window(f, m)
        # beyond the window only the zeta masses remain, and they decrease
        return float(max(np.max(np.abs(fw - z.masses(m))), z.pmf(m + 1)))
    _, pm, qm = _aligned(p, q)
    return float(np.max(np.abs(pm - qm)))


def lp_norm(xi, p: float) -> float:
    """l_p norm of a signed mass vector, ``p`` in [1, inf]."""
    xi = np.abs(np.asarray(xi, dtype=float))
    if p == math.inf:
        return float(xi.max()) if xi.size else 0.0
    if not p >= 1:
        raise ValueError("lp_norm needs p >= 1")
    if xi.size == 0:
        return 0.0
    scale = xi.max()
    if scale == 0:
        return 0.0
    return float(scale * math.fsum((xi / scale) ** p) ** (1.0 / p))


def rearrange_decreasing(dist) -> Pmf:
    """Non-increasing rearrangement of the masses."""
    dist = _coerce(dist)
    if not isinstance(dist, Pmf):
        raise TypeError("rearrangement is defined here for explicit Pmfs")
    return Pmf(np.sort(dist.masses)[::-1])


def sample(dist, n: int, seed) -> np.ndarray:
    """Draw ``n`` iid symbols; ``seed`` is an int or a numpy Generator."""
    if n < 1:
        raise ValueError("sample size must be >= 1")
    dist = _coerce(dist)
    rng = _as_rng(seed)
    if isinstance(dist, Pmf):
        cdf = np.cumsum(dist.masses)
        idx = np.searchsorted(cdf, rng.random(n) * cdf[-1], side="right")
        return np.minimum(idx, dist.masses.size - 1).astype(np.int64) + 1
    if isinstance(dist, EmpiricalMeasure):
        return rng.choice(dist.symbols, size=n, p=dist.masses)
    return dist.sample(n, rng)


def empirical_measure(samples: Iterable[int]) -> EmpiricalMeasure:
    """Empirical measure of a non-empty sample of integer symbols."""
    arr = np.asarray(list(samples) if not isinstance(samples, np.ndarray) else samples)
    if arr.size == 0:
        raise ValueError("empirical measure of an empty sample")
    if arr.dtype.kind not in "iu":
        if not np.all(np.equal(np.mod(arr, 1), 0)):
            raise ValueError("symbols must be integers")
        arr = arr.astype(np.int64)
    sym, cnt = np.unique(arr, return_counts=True)
    return EmpiricalMeasure(dict(zip(sym.tolist(), cnt.tolist())), int(arr.size))


def counts_from_pairs(pairs: Iterable[tuple[int, int]]) -> EmpiricalMeasure:
    """Empirical measure from (symbol, count) pairs; repeated symbols accumulate."""
    acc: Counter = Counter()
    for sym, c in pairs:
        if c < 0:
            raise InvariantError(f"negative count for symbol {sym}")
        acc[int(sym)] += int(c)
    return EmpiricalMeasure.from_counts(acc)
