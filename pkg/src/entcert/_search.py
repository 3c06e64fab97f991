"""One-dimensional minimization helpers."""

import math

import numpy as np

INV_PHI = (math.sqrt(5) - 1) / 2
INV_PHI2 = (3 - math.sqrt(5)) / 2


def golden_section(f, a, b, tol=1e-10, max_iter=1000):
    """Minimize a unimodal ``f`` on ``[a, b]``; returns ``(x, f(x), evaluations)``."""
    a, b = min(a, b), max(a, b)
    h = b - a
    c, d = a + INV_PHI2 * h, a + INV_PHI * h
    fc, fd = f(c), f(d)
    evals = 2
    while h > tol and evals < max_iter:
        if fc < fd:
            b, d, fd = d, c, fc
            h = b - a
            c = a + INV_PHI2 * h
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            h = b - a
            d = a + INV_PHI * h
            fd = f(d)
        evals += 1
    return (c, fc, evals) if fc < fd else (d, fd, evals)


def grid_then_golden(f, grid, tol=1e-10):
    """Coarse scan over ``grid`` then golden-section refinement in the best bracket.

    The objective need not be unimodal overall; only the bracket around the
    best grid point is assumed to be.  Returns ``(x, f(x), evaluations)``.
    """
    grid = np.asarray(grid, dtype=float)
    vals = np.array([f(x) for x in grid])
    if not np.all(np.isfinite(vals)):
        bad = grid[~np.isfinite(vals)]
        raise FloatingPointError(f"objective not finite at {bad[:5].tolist()}")
    k = int(np.argmin(vals))
    lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, grid.size - 1)]
    x, fx, n = golden_section(f, lo, hi, tol=tol)
    if vals[k] <= fx:
        return float(grid[k]), float(vals[k]), grid.size + n
    return float(x), float(fx), grid.size + n
