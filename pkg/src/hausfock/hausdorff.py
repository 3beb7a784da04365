"""The Hausdorff operator H_mu f(z) = int f(z/t) dmu(t)/t on truncated entire functions.

On monomials H_mu z**n = mu_n z**n, so the operator is stored as its
multiplier sequence; powers and Cesaro means are then exact coefficientwise.
The integral form is kept only as an independent evaluation route.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .config import DEFAULT, INF, QuadConfig
from .entire import TaylorPoly, evaluate
from .errors import (ConsistencyError, PreconditionError, SingularMultiplierError,
                     UnboundedOperatorError)
from .fockspace import MixedNormParams, NormResult, mixed_norm, monomial_norm_growth
from .measure import MeasureSpec, MomentTable, harmonic_mass, mass, moment_table, piece_quad
from .weights import WeightSpec

__all__ = [
    "HausdorffOperator", "CriteriaReport", "apply_multiplier", "apply_quadrature",
    "operator_norm", "criteria", "power", "cesaro_mean", "cesaro_identity_residual",
    "probe_conjecture", "ProbeResult",
]


class HausdorffOperator:
    """Operator built from a measure, with a moment table up to ``degree``.

    The table is extended (never mutated in place) when a longer polynomial
    comes in; extension recomputes closed forms and is idempotent.
    """

    def __init__(self, measure: MeasureSpec, degree: int = 32, cfg: QuadConfig = DEFAULT):
        self.measure = measure
        self.cfg = cfg
        self._table = moment_table(measure, degree, cfg)
        self.mass_below_one = mass(measure, "(0,1)")
        self.mass_at_one = mass(measure, "{1}")
        self.harmonic = harmonic_mass(measure, cfg)

    @property
    def table(self) -> MomentTable:
        return self._table

    @property
    def bounded(self) -> bool:
        return self.mass_below_one == 0 and math.isfinite(self.harmonic)

    def multipliers(self, N: int) -> np.ndarray:
        if N >= len(self._table):
            self._table = moment_table(self.measure, max(N, 2 * len(self._table)), self.cfg)
        return self._table.values[: N + 1]

    def _require_bounded(self):
        if not self.bounded:
            why = "mu(0,1) > 0" if self.mass_below_one > 0 else "int dmu/t diverges"
            raise UnboundedOperatorError(f"operator is unbounded ({why}); sup of moments is infinite")

    def __repr__(self):
        return f"HausdorffOperator({self.measure.dumps()})"


def apply_multiplier(op: HausdorffOperator, f: TaylorPoly) -> TaylorPoly:
    """a_n -> mu_n a_n."""
    op._require_bounded()
    mu = op.multipliers(f.N)
    if not np.all(np.isfinite(mu)):
        raise UnboundedOperatorError("a moment diverges within the polynomial's degree")
    return f.multiply_coeffs(mu)


def apply_quadrature(op: HausdorffOperator, f: TaylorPoly, z: complex,
                     cfg: QuadConfig = DEFAULT) -> complex:
    """Evaluate int f(z/t) dmu(t)/t directly: atoms exactly, densities in u = log t.

    Only meant as a cross-check of ``apply_multiplier``.
    """
    op._require_bounded()
    z = complex(z)
    total = 0j
    for a in op.measure.atoms:
        if a.w:
            total += a.w / a.t * complex(evaluate(f, z / a.t))
    coeffs = f.coeffs[::-1]
    for piece in op.measure.densities:
        # mu(0,1) = 0 for bounded operators, so (0,1) carries nothing
        total += complex(piece_quad(piece, 1.0, lambda u: np.polyval(coeffs, z * np.exp(-u)),
                                    cfg, lo=1.0))
    return total


def operator_norm(op: HausdorffOperator) -> float:
    """int_[1,inf) dmu/t when bounded, ``inf`` otherwise."""
    return op.harmonic if op.bounded else INF


@dataclass
class CriteriaReport:
    bounded: bool
    norm_value: float
    compact: bool | None
    power_bounded: bool
    ume_verdict: str
    weight_in_C: bool
    monomial_growth: bool
    mass_below_one: float
    mass_at_one: float
    harmonic_mass: float
    notes: list[str] = field(default_factory=list)

    def summary(self) -> str:
        def yn(b):
            return "yes" if b else "no"
        if not self.bounded:
            why = "mu(0,1)>0" if self.mass_below_one > 0 else "int dmu/t = inf"
            return f"bounded: no ({why}) | compact: no | power-bounded: no | UME: no"
        parts = [f"bounded: yes (norm {self.norm_value:.12g})"]
        if self.compact is None:
            parts.append("compact: undetermined (needs phi in C and ||z^n||^(1/n) -> inf)")
        elif self.compact:
            parts.append("compact: yes")
        elif self.mass_at_one > 0:
            parts.append(f"compact: no (mu({{1}})={self.mass_at_one:.12g})")
        else:
            parts.append("compact: no")
        parts.append(f"power-bounded: {yn(self.power_bounded)}")
        ume = self.ume_verdict
        if ume == "boundary-open":
            ume += " (conjecture regime)"
        parts.append(f"UME: {ume}")
        return " | ".join(parts)


def _growth_hypothesis(w: WeightSpec, prm: MixedNormParams, cfg: QuadConfig, N: int = 20) -> bool:
    try:
        g = monomial_norm_growth(prm, w, N, cfg)
    except Exception:
        return False
    return bool(np.all(np.diff(g[N // 2:]) > 0))


def criteria(op: HausdorffOperator, w: WeightSpec, prm: MixedNormParams,
             cfg: QuadConfig = DEFAULT) -> CriteriaReport:
    """Verdicts of the boundedness, compactness, power-boundedness and UME criteria."""
    H = op.harmonic
    bounded = op.bounded
    in_c = w.in_C()
    growth = _growth_hypothesis(w, prm, cfg)
    notes = []
    compact_measure = bounded and op.mass_at_one == 0
    if in_c and growth:
        compact = compact_measure
    else:
        compact = None
        notes.append("compactness hypotheses fail; verdict withheld")
    power_bounded = bounded and H <= 1 + cfg.unit_tol
    if not bounded:
        ume = "no"
    elif compact:
        # here mu({1}) = 0, so the integral over (1, inf) is the harmonic mass
        ume = "yes" if H <= 1 + cfg.unit_tol else "no"
    elif abs(H - 1) <= cfg.unit_tol:
        ume = "boundary-open"
    else:
        ume = "yes" if H < 1 else "no"
    return CriteriaReport(
        bounded=bounded, norm_value=operator_norm(op), compact=compact,
        power_bounded=power_bounded, ume_verdict=ume, weight_in_C=in_c,
        monomial_growth=growth, mass_below_one=op.mass_below_one,
        mass_at_one=op.mass_at_one, harmonic_mass=H, notes=notes)


def power(op: HausdorffOperator, k: int, f: TaylorPoly) -> TaylorPoly:
    """H_mu**k f: a_n -> mu_n**k a_n."""
    if k < 0:
        raise PreconditionError("power must be nonnegative")
    op._require_bounded()
    return f.multiply_coeffs(op.multipliers(f.N) ** k)


def _cesaro_factors(mu: np.ndarray, n: int) -> np.ndarray:
    """(1/n) sum_{k=1..n} mu**k, in closed geometric form where mu != 1."""
    if n == 0:
        return np.ones_like(mu)
    out = np.ones_like(mu)
    with np.errstate(divide="ignore", invalid="ignore"):
        lm = np.log(mu)
        geo = mu * np.expm1(n * lm) / (n * np.expm1(lm))
    return np.where(mu == 1.0, out, np.where(mu == 0.0, 0.0, geo))


def cesaro_mean(op: HausdorffOperator, n: int, f: TaylorPoly) -> TaylorPoly:
    """T_[n] f = (1/n) sum_{k=1..n} H_mu**k f; T_[0] is the identity."""
    if n < 0:
        raise PreconditionError("Cesaro index must be nonnegative")
    op._require_bounded()
    return f.multiply_coeffs(_cesaro_factors(op.multipliers(f.N), n))


def cesaro_identity_residual(op: HausdorffOperator, n: int, f: TaylorPoly) -> float:
    """max coefficient of |(1/n) T**n f - (T_[n] f - ((n-1)/n) T_[n-1] f)|."""
    if n < 1:
        raise PreconditionError("n must be at least 1")
    lhs = power(op, n, f) * (1.0 / n)
    rhs = cesaro_mean(op, n, f) - cesaro_mean(op, n - 1, f) * ((n - 1) / n)
    return float(np.max(np.abs((lhs - rhs).coeffs)))


class ProbeResult(NamedTuple):
    preimage: TaylorPoly
    norm: NormResult
    residual: float


def probe_conjecture(op: HausdorffOperator, f: TaylorPoly, prm: MixedNormParams,
                     w: WeightSpec, cfg: QuadConfig = DEFAULT) -> ProbeResult:
    """Solve (I - H_mu) g = f coefficientwise for f(0) = 0 when int dmu/t = 1.

    Numerical evidence only: returns g with b_n = a_n / (1 - mu_n), its norm,
    and the norm of the reconstruction residual (I - H_mu) g - f, which must
    stay below ``cfg.tol * max(1, ||f||)``.
    """
    op._require_bounded()
    if abs(op.harmonic - 1.0) > cfg.unit_tol:
        raise PreconditionError(f"needs int dmu/t = 1, got {op.harmonic!r}")
    if f.coeffs[0] != 0:
        raise PreconditionError("f(0) must vanish")
    mu = op.multipliers(f.N)
    a = f.coeffs
    denom = 1.0 - mu
    b = np.zeros_like(a)
    for m in range(1, a.size):
        if denom[m] == 0:
            if a[m] != 0:
                raise SingularMultiplierError(f"mu_{m} = 1 while a_{m} != 0: no preimage")
            continue
        b[m] = a[m] / denom[m]
    g = TaylorPoly(b)
    image = g - apply_multiplier(op, g)
    res = mixed_norm(image - f, prm, w, cfg)
    # relative to ||f|| once that exceeds 1: coefficient rounding of size eps
    # at degree n costs eps * ||z^n||, which grows without bound
    scale = max(1.0, mixed_norm(f, prm, w, cfg).value)
    if not res.value < cfg.tol * scale:
        raise ConsistencyError(
            f"reconstruction residual {res.value:.3e} exceeds tol {cfg.tol:.1e} x {scale:.3e}")
    return ProbeResult(g, mixed_norm(g, prm, w, cfg), res.value)
