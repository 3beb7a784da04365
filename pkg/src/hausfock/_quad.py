"""Composite Gauss-Legendre quadrature with panel doubling.

Two flavours: ``integrate`` for ordinary (possibly complex) integrands, and
``log_integrate`` for positive integrands supplied as logarithms, which is
what the mixed-norm code needs once monomial degrees get large.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss


@lru_cache(maxsize=16)
def _gl(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def panel_nodes(edges: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Flattened nodes and weights for GL panels between consecutive edges."""
    x, w = _gl(n)
    lo, hi = edges[:-1, None], edges[1:, None]
    half = 0.5 * (hi - lo)
    nodes = (lo + hi) * 0.5 + half * x[None, :]
    weights = half * w[None, :]
    return nodes.ravel(), weights.ravel()


def _halve(edges: np.ndarray) -> np.ndarray:
    mids = 0.5 * (edges[:-1] + edges[1:])
    out = np.empty(2 * len(edges) - 1)
    out[0::2] = edges
    out[1::2] = mids
    return out


def graded_edges(a: float, b: float, levels: int, uniform: int = 1) -> np.ndarray:
    """Edges refined geometrically toward ``a`` (for endpoint singularities)."""
    if levels <= 0:
        return np.linspace(a, b, uniform + 1)
    ks = 2.0 ** -np.arange(levels, 0, -1)
    inner = a + (b - a) * ks
    return np.concatenate(([a], inner, np.linspace(a + (b - a) * 0.5, b, uniform + 1)[1:]))


def integrate(func, edges, n: int, tol: float, max_panels: int,
              abs_floor: float = 0.0):
    """Integrate ``func`` over the union of panels, halving until stable.

    Returns ``(value, error_estimate, panel_count)``. ``func`` must accept a
    1-D array and return an array of the same shape.
    """
    edges = np.asarray(edges, dtype=float)
    x, w = panel_nodes(edges, n)
    prev = np.sum(w * func(x))
    while True:
        if len(edges) - 1 >= max_panels:
            return prev, np.inf, len(edges) - 1
        edges = _halve(edges)
        x, w = panel_nodes(edges, n)
        cur = np.sum(w * func(x))
        err = abs(cur - prev)
        if err <= max(tol * abs(cur), abs_floor):
            return cur, err, len(edges) - 1
        prev = cur


def _panel_logs(logfunc, edges_lo, edges_hi, n: int) -> np.ndarray:
    """Per-panel log integrals for panels [lo_i, hi_i], in one vectorized call."""
    x, w = _gl(n)
    half = 0.5 * (edges_hi - edges_lo)
    nodes = (edges_lo + edges_hi)[:, None] * 0.5 + half[:, None] * x[None, :]
    logv = np.asarray(logfunc(nodes.ravel()), dtype=float).reshape(nodes.shape)
    with np.errstate(divide="ignore"):
        logw = np.log(half)[:, None] + np.log(w)[None, :]
    terms = np.where(np.isfinite(logv), logv + logw, -np.inf)
    m = np.max(terms, axis=1)
    safe = np.where(np.isfinite(m), m, 0.0)
    with np.errstate(divide="ignore"):
        out = np.log(np.sum(np.exp(terms - safe[:, None]), axis=1)) + safe
    return np.where(np.isfinite(m), out, -np.inf)


def _lse(v: np.ndarray) -> float:
    if v.size == 0:
        return -np.inf
    m = np.max(v)
    if not np.isfinite(m):
        return float(m)
    return float(m + np.log(np.sum(np.exp(v - m))))


def log_integrate(logfunc, edges, n: int, tol: float, max_panels: int):
    """Log of the integral of ``exp(logfunc)`` to relative ``tol``.

    Locally adaptive: a panel is bisected until its two halves reproduce its
    own estimate; its share of the error budget is proportional to its width.
    Returns ``(log_value, relative_error_estimate, panel_count)``.
    """
    edges = np.asarray(edges, dtype=float)
    lo, hi = edges[:-1], edges[1:]
    span = float(edges[-1] - edges[0])
    parent = _panel_logs(logfunc, lo, hi, n)
    done_logs: list[np.ndarray] = []
    done_err = -np.inf
    panels = lo.size
    while True:
        mid = 0.5 * (lo + hi)
        left = _panel_logs(logfunc, lo, mid, n)
        right = _panel_logs(logfunc, mid, hi, n)
        child = np.logaddexp(left, right)
        panels += lo.size
        total = _lse(np.concatenate(done_logs + [child]))
        if total == -np.inf:
            return -np.inf, 0.0, panels
        with np.errstate(invalid="ignore", over="ignore", divide="ignore"):
            log_err = np.where(np.isfinite(child),
                               child + np.log(np.abs(np.expm1(parent - child))),
                               np.where(np.isfinite(parent), parent, -np.inf))
        log_err = np.nan_to_num(log_err, nan=-np.inf)
        budget = np.log(tol) + total + np.log((hi - lo) / span)
        ok = log_err <= budget
        done_logs.append(child[ok])
        done_err = np.logaddexp(done_err, _lse(log_err[ok]))
        if ok.all():
            return total, float(np.exp(done_err - total)), panels
        if panels >= max_panels:
            return total, np.inf, panels
        keep = ~ok
        lo, hi, mid = lo[keep], hi[keep], mid[keep]
        lo, hi = np.concatenate((lo, mid)), np.concatenate((mid, hi))
        parent = np.concatenate((left[keep], right[keep]))


def logaddexp(a: float, b: float) -> float:
    return float(np.logaddexp(a, b))
