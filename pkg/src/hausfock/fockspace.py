"""Mixed norms ||f||_{p,q,phi} on weighted mixed-norm Fock spaces.

    ||f||^q = int_0^inf M_p(f, r)**q exp(-q phi(r)) r dr      (q < inf)
    ||f||   = sup_r M_p(f, r) exp(-phi(r))                     (q = inf)

The radial cutoff R comes from the majorant M_p(f, r) <= sum |a_n| r**n,
so the reported tail bound is a true upper bound on what truncation drops.
Everything runs on logarithms of the integrand.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from . import _quad
from .config import DEFAULT, INF, QuadConfig, format_float, parse_exponent
from .entire import TaylorPoly, log_circle_means
from .errors import DivergenceError, ValidationError
from .weights import WeightSpec

__all__ = [
    "MixedNormParams", "NormResult", "mixed_norm", "monomial_norms",
    "monomial_norm_growth", "normalized_monomial", "radial_mass",
]

_R_MAX = 2.0 ** 200


@dataclass(frozen=True)
class MixedNormParams:
    p: float = 2.0
    q: float = 2.0

    def __post_init__(self):
        for name in ("p", "q"):
            v = parse_exponent(getattr(self, name))
            if not v >= 1:
                raise ValidationError(f"{name} must lie in [1, inf], got {v}")
            object.__setattr__(self, name, v)

    def label(self) -> str:
        return f"p={format_float(self.p)},q={format_float(self.q)}"


@dataclass(frozen=True)
class NormResult:
    value: float
    log_value: float
    cutoff: float
    tail_bound: float
    method: str

    def csv_row(self, ident, prm: MixedNormParams, weight: WeightSpec) -> list[str]:
        return [str(ident), format_float(prm.p), format_float(prm.q), weight.label(),
                format_float(self.value), format_float(self.cutoff), format_float(self.tail_bound)]


CSV_HEADER = ["n_or_id", "p", "q", "weight", "value", "cutoff_R", "tail_bound"]


def _check_admissible(f: TaylorPoly, prm: MixedNormParams, w: WeightSpec):
    if not w.admissible(max(f.degree, 0), prm.q):
        raise DivergenceError(
            f"{w.label()} does not carry degree-{f.degree} polynomials at q={format_float(prm.q)}")


def _log_bound_integrand(f, w, q):
    def lb(r):
        r = np.atleast_1d(r)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            out = q * f.log_bound(r) - q * w.phi(r) + np.log(r)
        return np.where(np.isnan(out), -np.inf, out)
    return lb


def _choose_cutoff(lb, tail_tol: float) -> float:
    """Smallest R = 2**k past the peak of ``lb`` where it has dropped by |log tail_tol| + 10."""
    drop = -math.log(tail_tol) + 10.0
    R = 1.0
    peak = -np.inf
    prev = lb(np.array([R]))[0]
    while R < _R_MAX:
        # peak over the octave [R/2, R]
        seg = lb(np.geomspace(R / 2, R, 17))
        peak = max(peak, float(np.max(seg)))
        nxt = lb(np.array([2 * R]))[0]
        if np.isfinite(peak) and prev < peak - drop and nxt <= prev:
            return R
        if not np.isfinite(peak) and R > 1e3:
            return R
        R *= 2.0
        prev = nxt
    raise DivergenceError("integrand does not decay: weight not admissible for this function")


def _log_tail(lb, R: float, cfg: QuadConfig) -> float:
    """log int_R^inf exp(lb), octave by octave until contributions die out."""
    total = -np.inf
    lo = R
    for _ in range(400):
        hi = 2 * lo
        seg, _, _ = _quad.log_integrate(lb, np.linspace(lo, hi, 5), cfg.gl_nodes, 1e-6, 256)
        total = _quad.logaddexp(total, seg)
        if seg == -np.inf or (np.isfinite(total) and seg < total - 40):
            return total
        lo = hi
    raise DivergenceError("tail of the majorant does not converge")


def mixed_norm(f: TaylorPoly, prm: MixedNormParams, w: WeightSpec,
               cfg: QuadConfig = DEFAULT) -> NormResult:
    """||f||_{p,q,phi} with cutoff radius and a bound on the truncated tail."""
    if f.is_zero():
        return NormResult(0.0, -INF, 0.0, 0.0, "zero")
    _check_admissible(f, prm, w)
    if prm.q == INF:
        return _sup_norm(f, prm, w, cfg)
    q = prm.q
    lb = _log_bound_integrand(f, w, q)

    def integrand(r):
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            logm, _ = log_circle_means(f, prm.p, r, cfg)
            out = q * logm - q * w.phi(r) + np.log(r)
        return np.where(np.isnan(out), -np.inf, out)

    R = _choose_cutoff(lb, cfg.tail_tol)
    while True:
        log_tail = _log_tail(lb, R, cfg)
        edges = np.linspace(0.0, R, cfg.init_panels + 1)
        log_main, err, panels = _quad.log_integrate(
            integrand, edges, cfg.gl_nodes, cfg.tol, cfg.max_panels)
        if log_main == -np.inf:
            raise DivergenceError("norm integrand vanished numerically; check the weight")
        if log_tail - log_main <= math.log(cfg.tail_tol) or R >= _R_MAX:
            break
        R *= 2.0
    log_norm = log_main / q
    # ||f|| lies in [I**(1/q), (I + T)**(1/q)]
    tail_norm = math.exp(log_norm) * math.expm1(math.log1p(math.exp(log_tail - log_main)) / q)
    method = "gauss-legendre" if np.isfinite(err) else "gauss-legendre(unconverged)"
    return NormResult(math.exp(log_norm) if log_norm < 709 else INF, log_norm, R, tail_norm, method)


def _sup_norm(f, prm, w, cfg) -> NormResult:
    def logval(r):
        r = np.atleast_1d(np.asarray(r, dtype=float))
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            logm, _ = log_circle_means(f, prm.p, r, cfg)
            out = logm - w.phi(r)
        return np.where(np.isnan(out), -np.inf, out)

    def lb(r):
        r = np.atleast_1d(r)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            out = f.log_bound(r) - w.phi(r)
        return np.where(np.isnan(out), -np.inf, out)

    R = _choose_cutoff(lb, cfg.tail_tol)
    grid = np.concatenate(([0.0], np.geomspace(cfg.sup_rmin, R, cfg.sup_grid)))
    vals = logval(grid)
    k = int(np.argmax(vals))
    best = float(vals[k])
    if 0 < k:
        lo = grid[k - 1]
        hi = grid[min(k + 1, grid.size - 1)]
        res = minimize_scalar(lambda r: -float(logval(r)[0]), bounds=(lo, hi),
                              method="bounded", options={"xatol": 1e-12 * max(hi, 1.0)})
        best = max(best, -float(res.fun))
    beyond = lb(np.geomspace(R, 64 * R, 64))
    log_tail = float(np.max(beyond))
    tail = math.exp(log_tail) if log_tail > -700 else 0.0
    return NormResult(math.exp(best) if best < 709 else INF, best, R, tail, "sup-grid")


def radial_mass(w: WeightSpec, q: float, R: float, cfg: QuadConfig = DEFAULT) -> float:
    """int_0^R exp(-q phi(r)) r dr (the weight admissibility integral, truncated)."""
    def lf(r):
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            out = -q * w.phi(r) + np.log(r)
        return np.where(np.isnan(out), -np.inf, out)
    # octave panels, so slowly decaying (log-type) weights are resolved at large R
    lo = min(1.0, R / 2)
    edges = np.concatenate(([0.0], np.geomspace(lo, R, max(2, int(math.ceil(math.log2(R / lo))) + 1))))
    log_v, _, _ = _quad.log_integrate(lf, edges, cfg.gl_nodes, cfg.tol, cfg.max_panels)
    return math.exp(log_v)


def monomial_norms(prm: MixedNormParams, w: WeightSpec, ns, cfg: QuadConfig = DEFAULT,
                   workers: int | None = None) -> list[NormResult]:
    """||z**n|| for each n in ``ns``; independent, so evaluated concurrently."""
    def one(n):
        return mixed_norm(TaylorPoly.monomial(int(n)), prm, w, cfg)
    ns = list(ns)
    if workers == 1 or len(ns) < 4:
        return [one(n) for n in ns]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(one, ns))


def monomial_norm_growth(prm: MixedNormParams, w: WeightSpec, N: int,
                         cfg: QuadConfig = DEFAULT) -> np.ndarray:
    """||z**n||**(1/n) for n = 1..N.

    M_p(z**n, r) = r**n for every p, so only (q, phi) matter here.
    """
    if N < 1:
        raise ValidationError("N must be at least 1")
    res = monomial_norms(prm, w, range(1, N + 1), cfg)
    return np.array([math.exp(r.log_value / n) for n, r in enumerate(res, start=1)])


def normalized_monomial(n: int, prm: MixedNormParams, w: WeightSpec,
                        cfg: QuadConfig = DEFAULT) -> TaylorPoly:
    """z**n / ||z**n||."""
    if n < 0:
        raise ValidationError("n must be nonnegative")
    res = mixed_norm(TaylorPoly.monomial(n), prm, w, cfg)
    return TaylorPoly.monomial(n, math.exp(-res.log_value))
