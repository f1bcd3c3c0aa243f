"""Scalar maximization: log-spaced bracketing scan plus golden-section refinement."""

import math

import numpy as np

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_max(f, a, b, tol=1e-10, max_iter=500):
    """Maximize a unimodal ``f`` on ``[a, b]`` down to a bracket of width ``tol``.

    Returns ``(x, f(x))`` for the better of the two interior points.
    """
    a, b = min(a, b), max(a, b)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def scan_then_refine(f, lo, hi, points=256, rtol=1e-10):
    """Maximize ``f`` over ``[lo, hi]`` (``0 < lo < hi``).

    A log-spaced scan brackets the best grid point; golden-section search
    over ``log x`` then refines inside the neighbouring grid cells. The
    scan protects against a peak the bracket would otherwise miss if the
    function were not unimodal.
    """
    grid = np.geomspace(lo, hi, points)
    values = np.array([f(x) for x in grid])
    k = int(np.argmax(values))
    left = grid[max(k - 1, 0)]
    right = grid[min(k + 1, points - 1)]
    u, _ = golden_section_max(lambda t: f(math.exp(t)), math.log(left), math.log(right),
                              tol=rtol)
    x = math.exp(u)
    fx = f(x)
    if values[k] > fx:
        return float(grid[k]), float(values[k])
    return x, fx
