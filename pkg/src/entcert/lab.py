"""Experiment harness behind the command-line tool.

Functions here assemble library calls into reports; they do no bound
arithmetic of their own.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import bounds
from .certify import certificate
from .dist_core import (
    MixtureOfUniforms,
    Pmf,
    TwoLevel,
    Zeta,
    derive_rng,
    empirical_measure,
    entropy,
    kl_divergence,
    sample,
)
from .info_moments import h_alpha, max_alpha_entropy_bounds, max_alpha_entropy_exact

BOUND_NAMES = ("our", "wy", "ct")


def fmt(x) -> str:
    """Locale-free number formatting with 17 significant digits."""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def build_family(family: str, *, k: int = 10, d: int = 10, D: int = 1000,
                 p: float = 0.95, q: float = 2.0):
    """Reference distribution by name: ``uniform``, ``mixture`` or ``zeta``."""
    if family == "uniform":
        return Pmf.uniform(k)
    if family == "mixture":
        return MixtureOfUniforms(d, D, p)
    if family == "zeta":
        return Zeta(q)
    raise ValueError(f"unknown family {family!r}; expected uniform, mixture or zeta")


def family_params(family: str, **kw) -> dict:
    keys = {"uniform": ("k",), "mixture": ("d", "D", "p"), "zeta": ("q",)}[family]
    return {key: kw[key] for key in keys if key in kw}


def parse_n_grid(text: str, scale: str = "log") -> list[int]:
    """``start:stop:points`` into strictly increasing integer sample sizes."""
    parts = text.split(":")
    if len(parts) == 1:
        vals = [float(parts[0])]
    elif len(parts) == 3:
        start, stop, points = float(parts[0]), float(parts[1]), int(parts[2])
        if start < 1 or stop < start or points < 1:
            raise ValueError(f"bad n-grid {text!r}")
        if scale == "log":
            vals = np.geomspace(start, stop, points)
        elif scale == "linear":
            vals = np.linspace(start, stop, points)
        else:
            raise ValueError(f"unknown grid scale {scale!r}")
    else:
        raise ValueError(f"n-grid must be N or start:stop:points, got {text!r}")
    ns = sorted({int(round(v)) for v in vals})
    if ns[0] < 1:
        raise ValueError("sample sizes must be >= 1")
    return ns


@dataclass(frozen=True)
class RateCurve:
    family: str
    bound: str
    points: tuple[tuple[int, float], ...]
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        ns = [n for n, _ in self.points]
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise ValueError("rate curve sample sizes must be strictly increasing")
        if any(not (math.isfinite(v) and v >= 0) for _, v in self.points):
            raise ValueError("rate curve values must be finite and >= 0")

    def slope(self) -> float:
        """Least-squares slope of log(value) against log(n)."""
        x = np.log([n for n, _ in self.points])
        y = np.log([v for _, v in self.points])
        return float(np.polyfit(x, y, 1)[0])


def rate_curves(family: str, ns, bound_names=BOUND_NAMES, C: float = bounds.DEFAULT_WY_C,
                **fam_kw) -> list[RateCurve]:
    dist = build_family(family, **fam_kw)
    params = family_params(family, **fam_kw)
    finite = family in ("uniform", "mixture")
    support = dist.support_size if finite else None
    curves = []
    for name in bound_names:
        if name not in BOUND_NAMES:
            raise ValueError(f"unknown bound {name!r}; expected one of {', '.join(BOUND_NAMES)}")
        p = dict(params)
        if name == "our":
            p.update(alpha_range="(1,64]", alpha_grid=bounds.ALPHA_GRID_POINTS,
                     alpha_tol=bounds.ALPHA_TOL)
            if finite:
                p["support_bound"] = support
            pts = [(n, bounds.our_rate_bound(dist, support, n).value) for n in ns]
        elif name == "wy":
            if family != "mixture":
                raise ValueError("the WY bound is defined for the mixture family only")
            p["C"] = C
            pts = [(n, bounds.wy_bound(dist.d, dist.D, n, C)) for n in ns]
        else:
            if not finite:
                raise ValueError("the CT bound needs a finite support")
            p["support_size"] = support
            pts = [(n, bounds.ct_rate_bound(dist, support, n)) for n in ns]
        curves.append(RateCurve(family, name.upper(), tuple(pts), p))
    return curves


def rates_csv(curves) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["family", "bound", "n", "value", "params"])
    for c in curves:
        params = ";".join(f"{k}={v!r}" if isinstance(v, float) else f"{k}={v}"
                          for k, v in c.params.items())
        for n, v in c.points:
            w.writerow([c.family, c.bound, n, fmt(v), params])
    return buf.getvalue()


def _coverage_trial(dist, n, alpha, h, delta, true_h, seed, t):
    emp = empirical_measure(sample(dist, n, derive_rng(seed, t)))
    cert = certificate(emp, alpha, h, delta)
    return abs(true_h - cert.estimate) > cert.radius, cert.radius


def coverage(dist, n: int, alpha: float, delta: float, trials: int, seed: int,
             h: float | None = None, workers: int = 1) -> dict:
    """Monte-Carlo violation rate of the certificate on a known distribution.

    ``h`` defaults to the distribution's own ``H_alpha``.  Each trial draws
    from its own generator, so the report does not depend on ``workers``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if h is None:
        h = h_alpha(dist, alpha).value
    true_h = entropy(dist)
    run = lambda t: _coverage_trial(dist, n, alpha, h, delta, true_h, seed, t)  # noqa: E731
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(run, range(trials)))
    else:
        results = [run(t) for t in range(trials)]
    violations = sum(v for v, _ in results)
    radii = np.array([r for _, r in results])
    return {
        "trials": trials,
        "violations": int(violations),
        "violation_rate": violations / trials,
        "delta": delta,
        "radius_mean": float(radii.mean()),
        "radius_stddev": float(radii.std()),
        "seed": seed,
        "n": n,
        "alpha": alpha,
        "h": h,
        "entropy": true_h,
    }


def maxent_rows(ks, alphas) -> list[dict]:
    rows = []
    for k in ks:
        if k < 2:
            raise ValueError("K must be >= 2")
        for a in alphas:
            lower, upper = max_alpha_entropy_bounds(k, a)
            rows.append({"K": k, "alpha": a, "lower": lower,
                         "exact": max_alpha_entropy_exact(k, a).value, "upper": upper})
    return rows


def maxent_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["K", "alpha", "lower", "exact", "upper"])
    for r in rows:
        w.writerow([r["K"], fmt(r["alpha"]), fmt(r["lower"]), fmt(r["exact"]), fmt(r["upper"])])
    return buf.getvalue()


def noemp_report(h: float, n: int) -> dict:
    """Report on the point-mass versus two-level pair.

    When ``S`` is too large to build, ``S`` is null and the entropy is the
    unfloored value ``h``; the KL divergence does not depend on ``S``.
    """
    a_n, log_s = bounds.no_emp_log_support(h, n)
    report = {"kind": "noemp", "h": h, "n": n, "a_n": a_n}
    if log_s <= 60 * math.log(2):
        pair = bounds.no_emp_construction(h, n)
        report.update(log_S=pair.log_S, S=pair.S, materialized=True, kl=pair.kl,
                      entropy_mun=pair.entropy_mun)
    else:
        heavy = 1.0 - 1.0 / (2 * n)
        kl = kl_divergence(TwoLevel(1.0, 1, 0.0), TwoLevel(heavy, 1, 1.0 - heavy))
        report.update(log_S=log_s, S=None, materialized=False, kl=kl, entropy_mun=h)
    report.update(
        kl_limit=1.0 / n,
        entropy_mu0=0.0,
        gap=report["entropy_mun"],
        gap_at_least_half_h=report["entropy_mun"] >= h / 2,
        risk_floor=h / (4 * math.e),
    )
    return report


def minimax_report(alpha: float, n: int) -> dict:
    h, lower = bounds.minimax_lower_value(alpha, n)
    report = {
        "kind": "minimax",
        "alpha": alpha,
        "n": n,
        "h": h,
        "entropy_gap": math.log(n),
        "lower_bound": lower,
        "no_collision_probability": bounds.birthday_no_collision(n, n * n),
    }
    if alpha > 1:
        report["upper_bound"] = bounds.minimax_upper(h, alpha, n)
    return report
