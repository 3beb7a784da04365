"""Radial weights phi with closed-form derivatives and class membership.

Each catalog weight knows its own symbolic verdicts for the class C
(r phi'(r) -> inf) and the classes W_p. The numeric side samples the
defining limits on a geometric radius grid using log-stable forms, so
double-exponential weights do not overflow into nan. A contradiction
between the two sides raises ``ConsistencyError``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import INF
from .errors import ConsistencyError, DomainError, UndecidableError, ValidationError

__all__ = [
    "WeightSpec", "Gaussian", "Power", "LogPow", "Exp", "ExpExp",
    "ClassReport", "check_class_C", "check_class_Wp",
    "derivative_identity_residual", "weight_from_json",
]

# r = 2**10 .. 2**30; a wider span than strictly needed so that slowly
# diverging members (log-power weights) separate from bounded ones
LIMIT_GRID = 2.0 ** np.arange(10, 31)


class WeightSpec:
    """Base class; subclasses supply phi, its derivatives and the catalog rules."""

    kind: str = ""
    r0: float = 0.0  # phi' != 0 on (r0, inf)

    def phi(self, r):
        raise NotImplementedError

    def dphi(self, r):
        raise NotImplementedError

    def d2phi(self, r):
        raise NotImplementedError

    def log_dphi(self, r):
        with np.errstate(divide="ignore"):
            return np.log(self.dphi(r))

    def curvature(self, r):
        """phi'' / phi'**2."""
        return self.d2phi(r) / self.dphi(r) ** 2

    # symbolic rules
    def in_C(self) -> bool:
        raise NotImplementedError

    def in_Wp(self, p: float) -> bool:
        raise NotImplementedError

    def admissible(self, degree: int, q: float) -> bool:
        """Whether r**degree has finite (p, q) norm, i.e. polynomials of that degree live here."""
        return True

    def to_json(self) -> dict:
        raise NotImplementedError

    def label(self) -> str:
        params = {k: v for k, v in self.to_json().items() if k != "kind"}
        inner = ",".join(f"{k}={v:g}" for k, v in params.items())
        return f"{self.kind}({inner})" if inner else self.kind


def _positive(name, value):
    if not (value > 0 and math.isfinite(value)):
        raise ValidationError(f"{name} must be a positive real, got {value}")


@dataclass(frozen=True)
class Gaussian(WeightSpec):
    """phi(r) = alpha r**2 / 2, the classical Fock weight."""

    alpha: float = 1.0
    kind: str = field(default="gaussian", init=False)

    def __post_init__(self):
        _positive("alpha", self.alpha)

    def phi(self, r):
        return 0.5 * self.alpha * np.asarray(r, dtype=float) ** 2

    def dphi(self, r):
        return self.alpha * np.asarray(r, dtype=float)

    def d2phi(self, r):
        return np.full_like(np.asarray(r, dtype=float), self.alpha)

    def curvature(self, r):
        return 1.0 / (self.alpha * np.asarray(r, dtype=float) ** 2)

    def in_C(self):
        return True

    def in_Wp(self, p):
        return True

    def to_json(self):
        return {"kind": self.kind, "alpha": self.alpha}


@dataclass(frozen=True)
class Power(WeightSpec):
    """phi(r) = r**l."""

    l: float = 2.0
    kind: str = field(default="power", init=False)

    def __post_init__(self):
        _positive("l", self.l)

    def phi(self, r):
        return np.asarray(r, dtype=float) ** self.l

    def dphi(self, r):
        with np.errstate(divide="ignore"):
            return self.l * np.asarray(r, dtype=float) ** (self.l - 1)

    def d2phi(self, r):
        with np.errstate(divide="ignore"):
            return self.l * (self.l - 1) * np.asarray(r, dtype=float) ** (self.l - 2)

    def log_dphi(self, r):
        return math.log(self.l) + (self.l - 1) * np.log(r)

    def curvature(self, r):
        return (self.l - 1) / (self.l * np.asarray(r, dtype=float) ** self.l)

    def in_C(self):
        return True

    def in_Wp(self, p):
        return True

    def to_json(self):
        return {"kind": self.kind, "l": self.l}


@dataclass(frozen=True)
class LogPow(WeightSpec):
    """phi(r) = a * log(1 + r)**exponent."""

    a: float = 1.0
    exponent: float = 1.0
    kind: str = field(default="logpow", init=False)

    def __post_init__(self):
        _positive("a", self.a)
        _positive("exponent", self.exponent)

    def phi(self, r):
        return self.a * np.log1p(np.asarray(r, dtype=float)) ** self.exponent

    def dphi(self, r):
        r = np.asarray(r, dtype=float)
        k = self.exponent
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.a * k * np.log1p(r) ** (k - 1) / (1 + r)

    def d2phi(self, r):
        r = np.asarray(r, dtype=float)
        k, L = self.exponent, np.log1p(r)
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.a * k * ((k - 1) * L ** (k - 2) - L ** (k - 1)) / (1 + r) ** 2

    def log_dphi(self, r):
        r = np.asarray(r, dtype=float)
        k = self.exponent
        return math.log(self.a * k) + (k - 1) * np.log(np.log1p(r)) - np.log1p(r)

    def curvature(self, r):
        k, L = self.exponent, np.log1p(np.asarray(r, dtype=float))
        return ((k - 1) / L - 1.0) / (self.a * k * L ** (k - 1))

    def in_C(self):
        return self.exponent > 1

    def in_Wp(self, p):
        if self.exponent > 1:
            return True
        if self.exponent < 1:
            return False
        return self.a * p > 2

    def admissible(self, degree, q):
        k = self.exponent
        if k > 1:
            return True
        if k < 1:
            return q == INF and degree == 0
        if q == INF:
            return self.a >= degree
        return self.a > degree + 2.0 / q

    def to_json(self):
        return {"kind": self.kind, "a": self.a, "exponent": self.exponent}


@dataclass(frozen=True)
class Exp(WeightSpec):
    """phi(r) = exp(beta r)."""

    beta: float = 1.0
    kind: str = field(default="exp", init=False)

    def __post_init__(self):
        _positive("beta", self.beta)

    def phi(self, r):
        with np.errstate(over="ignore"):
            return np.exp(self.beta * np.asarray(r, dtype=float))

    def dphi(self, r):
        return self.beta * self.phi(r)

    def d2phi(self, r):
        return self.beta ** 2 * self.phi(r)

    def log_dphi(self, r):
        return math.log(self.beta) + self.beta * np.asarray(r, dtype=float)

    def curvature(self, r):
        return np.exp(-self.beta * np.asarray(r, dtype=float))

    def in_C(self):
        return True

    def in_Wp(self, p):
        return True

    def to_json(self):
        return {"kind": self.kind, "beta": self.beta}


@dataclass(frozen=True)
class ExpExp(WeightSpec):
    """phi(r) = exp(exp(r))."""

    kind: str = field(default="expexp", init=False)

    def phi(self, r):
        with np.errstate(over="ignore"):
            return np.exp(np.exp(np.asarray(r, dtype=float)))

    def dphi(self, r):
        r = np.asarray(r, dtype=float)
        with np.errstate(over="ignore"):
            return np.exp(r + np.exp(r))

    def d2phi(self, r):
        r = np.asarray(r, dtype=float)
        with np.errstate(over="ignore"):
            return (1 + np.exp(r)) * np.exp(r + np.exp(r))

    def log_dphi(self, r):
        r = np.asarray(r, dtype=float)
        with np.errstate(over="ignore"):
            return r + np.exp(r)

    def curvature(self, r):
        r = np.asarray(r, dtype=float)
        with np.errstate(over="ignore"):
            return (1 + np.exp(-r)) * np.exp(-np.exp(r))

    def in_C(self):
        return True

    def in_Wp(self, p):
        return True

    def to_json(self):
        return {"kind": self.kind}


_CATALOG = {
    "gaussian": (Gaussian, ("alpha",)),
    "power": (Power, ("l",)),
    "logpow": (LogPow, ("a", "exponent")),
    "exp": (Exp, ("beta",)),
    "expexp": (ExpExp, ()),
}


def weight_from_json(d: dict) -> WeightSpec:
    if not isinstance(d, dict) or "kind" not in d:
        raise ValidationError("weight spec must be an object with a 'kind' field")
    try:
        cls, names = _CATALOG[d["kind"]]
    except KeyError:
        raise ValidationError(f"unknown weight kind {d['kind']!r}; known: {sorted(_CATALOG)}")
    extra = set(d) - {"kind", *names}
    if extra:
        raise ValidationError(f"unexpected weight fields {sorted(extra)}")
    try:
        return cls(**{n: float(d[n]) for n in names if n in d})
    except (TypeError, ValueError) as exc:
        raise ValidationError(str(exc)) from exc


# -- class membership ---------------------------------------------------------

@dataclass
class ClassReport:
    weight: str
    in_class_C: bool | None = None
    in_class_Wp: dict[float, bool] = field(default_factory=dict)
    diagnostics: dict[str, np.ndarray] = field(default_factory=dict)
    numeric: dict[str, bool | None] = field(default_factory=dict)


def _trend(values: np.ndarray) -> float:
    """Per-octave change of the last two samples (values in log form)."""
    return float(values[-1] - values[-2])


def _numeric_C(w: WeightSpec, grid=LIMIT_GRID):
    log_rdphi = np.log(grid) + w.log_dphi(grid)
    if np.isinf(log_rdphi[-1]) and log_rdphi[-1] > 0:
        return True, log_rdphi
    growth = _trend(log_rdphi)
    if growth > 1e-4 and np.all(np.diff(log_rdphi[-5:]) > 0):
        return True, log_rdphi
    if abs(growth) < 1e-7:
        return False, log_rdphi
    return None, log_rdphi


def check_class_C(w: WeightSpec) -> ClassReport:
    """Decide r phi'(r) -> inf symbolically and confirm on the sample grid."""
    symbolic = w.in_C()
    numeric, samples = _numeric_C(w)
    if numeric is not None and numeric != symbolic:
        raise ConsistencyError(
            f"{w.label()}: class C symbolic verdict {symbolic} but samples say {numeric}")
    return ClassReport(w.label(), in_class_C=symbolic,
                       diagnostics={"r": LIMIT_GRID, "log_r_dphi": samples},
                       numeric={"C": numeric})


def _wp_quantities(w: WeightSpec, grid=LIMIT_GRID):
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        log_dphi = w.log_dphi(grid)
        inv_rdphi = np.exp(-np.log(grid) - log_dphi)
        q = inv_rdphi - w.curvature(grid)
    return log_dphi, q


def _numeric_Wp(w: WeightSpec, p: float, grid=LIMIT_GRID):
    log_dphi, q = _wp_quantities(w, grid)
    with np.errstate(over="ignore", invalid="ignore"):
        log_first = np.log(grid) - p * w.phi(grid) - log_dphi
    if not np.all(np.isfinite(q[-3:])):
        raise UndecidableError(f"{w.label()}: (1/r)(r/phi')' not finite on the sample grid")

    # first condition: r e^{-p phi} / phi' -> 0, judged by its log-log slope
    if log_first[-1] == -np.inf:
        c1 = True
    else:
        slope = _trend(log_first) / math.log(2.0)
        c1 = True if slope < -1e-3 else (False if slope > -1e-6 else None)
    tail = q[-3:]
    margin = 1e-9 * max(1.0, abs(p))
    if np.max(tail) < p - margin:
        c2 = True
    elif np.min(tail) >= p:
        c2 = False
    else:
        c2 = None
    c3 = bool(np.min(tail) > -1e8)
    verdicts = (c1, c2, c3)
    if any(v is False for v in verdicts):
        verdict = False
    elif all(v is True for v in verdicts):
        verdict = True
    else:
        verdict = None
    return verdict, {"log_first": log_first, "limsup_quantity": q}


def check_class_Wp(w: WeightSpec, p: float | list[float]) -> ClassReport:
    """Membership in W_p for one or several exponents p > 0."""
    ps = [p] if np.isscalar(p) else list(p)
    report = ClassReport(w.label(), diagnostics={"r": LIMIT_GRID})
    for pv in ps:
        pv = float(pv)
        if not pv > 0:
            raise ValidationError("W_p needs p > 0")
        if np.any(w.dphi(LIMIT_GRID[-5:]) == 0):
            raise UndecidableError(f"{w.label()}: phi' vanishes at large radii")
        symbolic = w.in_Wp(pv)
        numeric, diag = _numeric_Wp(w, pv)
        if numeric is not None and numeric != symbolic:
            raise ConsistencyError(
                f"{w.label()}: W_{pv:g} symbolic verdict {symbolic} but samples say {numeric}")
        report.in_class_Wp[pv] = symbolic
        report.numeric[f"W_{pv:g}"] = numeric
        for k, v in diag.items():
            report.diagnostics[f"{k}[p={pv:g}]"] = v
    return report


def derivative_identity_residual(w: WeightSpec, r: float, h: float = 1e-5) -> float:
    """|(1/r)(r/phi')' - (1/(r phi') - phi''/phi'^2)| at radius r.

    The left side uses a five-point central difference of r/phi' with step
    ``h * r``; the right side uses the closed-form derivative evaluators.
    """
    if not r > w.r0:
        raise DomainError(f"radius must exceed r0={w.r0}")
    d1 = float(w.dphi(r))
    if d1 == 0 or not math.isfinite(d1):
        raise DomainError(f"phi' is zero or not finite at r={r}")
    step = h * r

    def g(x):
        return x / float(w.dphi(x))

    deriv = (-g(r + 2 * step) + 8 * g(r + step) - 8 * g(r - step) + g(r - 2 * step)) / (12 * step)
    lhs = deriv / r
    rhs = 1.0 / (r * d1) - float(w.d2phi(r)) / d1 ** 2
    return abs(lhs - rhs)
