"""One-dimensional search utilities shared by the envelope and duality scans."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .family import Interval

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0

DIVERGENCE_CAP = 1e15


def golden_max(f: Callable[[float], float], lo: float, hi: float, iters: int = 70):
    """Golden-section maximization on [lo, hi]; returns the best point seen.

    Convergence to the maximum requires unimodality on the bracket;
    without it the result is still a valid lower bound on the supremum.
    """
    if hi <= lo:
        v = f(lo)
        return lo, v
    h = hi - lo
    c = lo + _INV_PHI2 * h
    d = lo + _INV_PHI * h
    yc, yd = f(c), f(d)
    best_x, best_y = (c, yc) if yc >= yd else (d, yd)
    for _ in range(iters):
        if yc > yd:
            hi = d
            d, yd = c, yc
            h = hi - lo
            c = lo + _INV_PHI2 * h
            yc = f(c)
            if yc > best_y:
                best_x, best_y = c, yc
        else:
            lo = c
            c, yc = d, yd
            h = hi - lo
            d = lo + _INV_PHI * h
            yd = f(d)
            if yd > best_y:
                best_x, best_y = d, yd
        if h <= 4 * np.finfo(float).eps * max(1.0, abs(lo), abs(hi)):
            break
    return best_x, best_y


def golden_max_vec(f: Callable[[np.ndarray], np.ndarray], lo: np.ndarray, hi: np.ndarray,
                   iters: int = 70):
    """Elementwise golden-section maximization over per-element brackets."""
    lo = np.asarray(lo, dtype=float).copy()
    hi = np.asarray(hi, dtype=float).copy()
    h = hi - lo
    c = lo + _INV_PHI2 * h
    d = lo + _INV_PHI * h
    yc, yd = f(c), f(d)
    better = yc >= yd
    best_x = np.where(better, c, d)
    best_y = np.where(better, yc, yd)
    for _ in range(iters):
        left = yc > yd  # the maximum lies in [lo, d]
        hi = np.where(left, d, hi)
        lo = np.where(left, lo, c)
        h = hi - lo
        probe = np.where(left, lo + _INV_PHI2 * h, lo + _INV_PHI * h)
        y_probe = f(probe)
        c, d = np.where(left, probe, d), np.where(left, c, probe)
        yc, yd = np.where(left, y_probe, yd), np.where(left, yc, y_probe)
        improved = y_probe > best_y
        best_x = np.where(improved, probe, best_x)
        best_y = np.where(improved, y_probe, best_y)
        if np.max(h) <= 4 * np.finfo(float).eps * max(1.0, float(np.max(np.abs(hi)))):
            break
    return best_x, best_y


@dataclass
class ExhaustionResult:
    value: float
    aux: object
    trace: tuple[tuple[Interval, float], ...]
    status: str  # 'compact' | 'converged' | 'diverged' | 'truncated'


def exhaust_maximize(
    domain: Interval,
    window: float,
    evaluate_window: Callable,
    stop_tol: float = 1e-9,
    max_rounds: int = 24,
) -> ExhaustionResult:
    """Maximize over an interval by exhausting it with growing compact windows.

    ``evaluate_window(interval, prev)`` returns ``(value, aux)`` where
    ``prev`` is the previous ``(value, aux)`` pair (or None); implementors
    must fold the previous incumbent in so values are non-decreasing.

    Stops once two successive windows improve by less than ``stop_tol``.
    Divergence (+inf) is declared when the value passes a hard cap, or
    when the schedule cap is reached with the value still growing
    monotonically through the last three windows; growth while the window
    has not yet swallowed an interior maximizer is normal and must not be
    mistaken for divergence.
    """
    if domain.is_compact:
        value, aux = evaluate_window(domain, None)
        return ExhaustionResult(value, aux, ((domain, value),), "compact")

    trace: list[tuple[Interval, float]] = []
    prev: tuple[float, object] | None = None
    improvements: list[float] = []
    width = abs(window)
    for _ in range(max_rounds):
        piece = domain.intersect(-width, width)
        width *= 2.0
        if piece is None:
            continue
        value, aux = evaluate_window(piece, prev)
        if prev is not None:
            improvements.append(max(0.0, value - prev[0]))
        prev = (value, aux)
        trace.append((piece, value))
        if piece.lo == domain.lo and piece.hi == domain.hi:
            return ExhaustionResult(value, aux, tuple(trace), "converged")
        if len(improvements) >= 2 and improvements[-1] < stop_tol and improvements[-2] < stop_tol:
            return ExhaustionResult(value, aux, tuple(trace), "converged")
        if value > DIVERGENCE_CAP:
            return ExhaustionResult(math.inf, aux, tuple(trace), "diverged")
    value, aux = prev if prev is not None else (-math.inf, None)
    if len(improvements) >= 3 and improvements[-1] >= improvements[-2] >= improvements[-3] > stop_tol:
        return ExhaustionResult(math.inf, aux, tuple(trace), "diverged")
    return ExhaustionResult(value, aux, tuple(trace), "truncated")
