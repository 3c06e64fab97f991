"""Plug-in entropy estimates with fully empirical error certificates."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Mapping

from .bounds import BoundBreakdown, ckw_l1_radius, dimfree_bound
from .dist_core import EmpiricalMeasure, InvariantError, counts_from_pairs, empirical_measure, entropy
from .info_moments import ALPHA_MAX, h_alpha


class CertificateError(ValueError):
    """A certificate precondition does not hold."""

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details


class IngestError(ValueError):
    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line


def min_sample_size(delta: float) -> int:
    """Smallest n with ``n >= 2 log(4/delta)``."""
    return math.ceil(2.0 * math.log(4.0 / delta))


@dataclass(frozen=True)
class EntropyCertificate:
    estimate: float
    radius: float
    alpha: float
    h: float
    delta: float
    n: int
    breakdown: BoundBreakdown
    diagnostics: dict = field(default_factory=dict, compare=False)

    @property
    def interval(self) -> tuple[float, float]:
        return self.estimate - self.radius, self.estimate + self.radius

    def to_dict(self) -> dict:
        return {
            "estimate": self.estimate,
            "radius": self.radius,
            "alpha": self.alpha,
            "h": self.h,
            "delta": self.delta,
            "n": self.n,
            "terms": [[k, v] for k, v in self.breakdown.terms],
            "preconditions": [[k, bool(v)] for k, v in self.breakdown.preconditions_checked],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), allow_nan=False)


def plug_in_entropy(emp: EmpiricalMeasure) -> float:
    """Entropy of the empirical measure, in nats."""
    return entropy(emp)


def certificate(emp: EmpiricalMeasure, alpha: float, h: float, delta: float) -> EntropyCertificate:
    """Plug-in estimate with a radius valid with probability ``1 - delta``.

    The radius holds whenever the data come from a distribution whose
    ``alpha``-th information moment is at most ``h``.  ``delta`` is split
    evenly between the sup-norm event and the l1 event.
    """
    if not 0.0 < delta < 1.0:
        raise CertificateError(f"delta must lie in (0, 1), got {delta}")
    if not 1.0 < alpha <= ALPHA_MAX:
        raise CertificateError(f"alpha must lie in (1, {ALPHA_MAX:g}], got {alpha}")
    if not h >= 0:
        raise CertificateError(f"h must be >= 0, got {h}")
    need = min_sample_size(delta)
    if emp.n < 2.0 * math.log(4.0 / delta):
        raise CertificateError(
            f"sample size n={emp.n} is below the minimum {need} for delta={delta}",
            n=emp.n, min_n=need)

    l1 = ckw_l1_radius(emp, delta / 2.0)
    h_hat = h_alpha(emp, alpha).value
    anchor = 2.0 * alpha ** alpha
    radius = dimfree_bound(l1.value, h, h_hat, alpha).tight
    if not math.isfinite(radius):
        raise FloatingPointError("certificate radius is not finite")
    breakdown = BoundBreakdown(
        "certificate", radius,
        (("two_alpha_pow_alpha", anchor), ("h", float(h)), ("h_alpha_empirical", h_hat),
         ("l1_radius", l1.value), ("l1_sqrt_mass_term", l1.term("sqrt_mass_term")),
         ("l1_confidence_term", l1.term("confidence_term"))),
        (("n >= 2 log(4/delta)", True), ("1 < alpha <= 64", True), ("0 < delta < 1", True)),
        {"min_n": need},
    )
    return EntropyCertificate(plug_in_entropy(emp), radius, float(alpha), float(h),
                              float(delta), emp.n, breakdown)


def certificate_best_alpha(emp: EmpiricalMeasure,
                           h_of_alpha: Mapping[float, float] | Callable[[float], float],
                           delta: float, alpha_grid: Iterable[float]) -> EntropyCertificate:
    """Smallest-radius certificate over a grid of moment orders.

    ``h_of_alpha`` gives the assumed moment bound at each grid point.  The
    losing candidates are kept in ``diagnostics["candidates"]``.
    """
    grid = list(alpha_grid)
    if not grid:
        raise CertificateError("alpha grid is empty")
    lookup = h_of_alpha if callable(h_of_alpha) else h_of_alpha.__getitem__
    certs = [certificate(emp, a, lookup(a), delta) for a in grid]
    best = min(certs, key=lambda c: c.radius)
    best.diagnostics["candidates"] = [(c.alpha, c.h, c.radius) for c in certs]
    return best


# ---------------------------------------------------------------------------
# File formats: samples are one integer per line; counts are "symbol<TAB>count".


def _lines(path):
    text = Path(path).read_text(encoding="utf-8")
    rows = [(i, line.strip()) for i, line in enumerate(text.splitlines(), start=1)]
    rows = [(i, s) for i, s in rows if s]
    if not rows:
        raise IngestError(f"{path}: file is empty")
    return rows


def _parse_int(token, lineno, path):
    try:
        return int(token)
    except ValueError:
        raise IngestError(f"{path}:{lineno}: cannot parse {token!r} as an integer",
                          line=lineno) from None


def ingest(path, format: str = "samples") -> EmpiricalMeasure:
    """Read a sample file or a count file into an :class:`EmpiricalMeasure`."""
    rows = _lines(path)
    if format == "samples":
        return empirical_measure(_parse_int(s, i, path) for i, s in rows)
    if format == "counts":
        pairs = []
        for i, s in rows:
            parts = s.split("\t") if "\t" in s else s.split()
            if len(parts) != 2:
                raise IngestError(f"{path}:{i}: expected 'symbol<TAB>count'", line=i)
            sym, cnt = (_parse_int(p, i, path) for p in parts)
            if cnt < 0:
                raise IngestError(f"{path}:{i}: negative count {cnt}", line=i)
            pairs.append((sym, cnt))
        try:
            return counts_from_pairs(pairs)
        except InvariantError as exc:
            raise IngestError(f"{path}: {exc}") from None
    raise ValueError(f"unknown format {format!r}; expected 'samples' or 'counts'")


def emit_counts(emp: EmpiricalMeasure, path) -> None:
    """Write the counts format read by :func:`ingest`."""
    lines = "".join(f"{s}\t{c}\n" for s, c in emp.counts.items())
    Path(path).write_text(lines, encoding="utf-8")
