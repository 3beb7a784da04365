"""Positive Borel measures on (0, inf): finite atoms plus catalog densities.

The catalog is closed on purpose. Every density kind has a closed-form
power integral

    I(e; lo, hi) = int_lo^hi t**(-e) rho(t) dt,

which yields moments (e = n + 1), masses (e = 0) and the harmonic mass
(e = 1, restricted to [1, inf)). A quadrature route in the variable
u = log t exists alongside as an independent cross-check, and is also what
the Hausdorff operator uses to evaluate its integral form.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from . import _quad
from .config import DEFAULT, INF, QuadConfig, format_float, parse_exponent
from .errors import ValidationError

__all__ = [
    "Atom", "DensityPiece", "MeasureSpec", "MomentTable",
    "moment", "mass", "harmonic_mass", "moment_table",
    "delta", "flett", "hardy", "constant_density", "MASS_SETS",
]

# kind -> name of its single parameter in JSON
KINDS = {
    "constant": "c",
    "flett_log": "gamma",
    "exp_decay": "rate",
    "power_law": "s",
}

# interval tag -> (lo, hi, lo_closed, hi_closed)
MASS_SETS = {
    "(0,1)": (0.0, 1.0, False, False),
    "{1}": (1.0, 1.0, True, True),
    "(1,inf)": (1.0, INF, False, False),
    "[1,inf)": (1.0, INF, True, False),
    "(0,1]": (0.0, 1.0, False, True),
}


def _power_integral(e: float, lo: float, hi: float) -> float:
    """int_lo^hi t**(-e) dt on 0 <= lo < hi <= inf, inf when divergent."""
    if lo >= hi:
        return 0.0
    if e == 1.0:
        if lo == 0.0 or hi == INF:
            return INF
        return math.log(hi / lo)
    if lo == 0.0 and e > 1.0:
        return INF
    if hi == INF and e < 1.0:
        return INF
    k = 1.0 - e
    if lo == 0.0:
        return hi ** k / k
    if hi == INF:
        return lo ** k / (e - 1.0)
    # lo**k - hi**k without cancellation
    with np.errstate(over="ignore"):
        return float(lo ** k * -np.expm1(k * math.log(hi / lo)) / (e - 1.0))


@dataclass(frozen=True)
class Atom:
    t: float
    w: float

    def __post_init__(self):
        if not (self.t > 0 and math.isfinite(self.t)):
            raise ValidationError(f"atom location must be a positive real, got {self.t}")
        if not (self.w >= 0 and math.isfinite(self.w)):
            raise ValidationError(f"atom weight must be a nonnegative real, got {self.w}")


@dataclass(frozen=True)
class DensityPiece:
    """A catalog density on the interval (a, b).

    constant   rho = c
    flett_log  rho = log(t)**(gamma - 1) / (t * Gamma(gamma)), fixed on [1, inf)
    exp_decay  rho = exp(-rate * t)
    power_law  rho = t**(-s)
    """

    kind: str
    param: float
    a: float = 1.0
    b: float = INF

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown density kind {self.kind!r}")
        if not math.isfinite(self.param):
            raise ValidationError("density parameter must be finite")
        if not (0.0 <= self.a < self.b):
            raise ValidationError(f"bad interval ({self.a}, {self.b})")
        if self.kind == "flett_log":
            if self.param <= 0:
                raise ValidationError("flett_log requires gamma > 0")
            if self.a != 1.0 or self.b != INF:
                raise ValidationError("flett_log lives on [1, inf)")
        elif self.kind == "constant" and self.param < 0:
            raise ValidationError("constant density must be nonnegative")
        elif self.kind == "exp_decay" and self.param <= 0:
            raise ValidationError("exp_decay requires rate > 0")

    @property
    def is_null(self) -> bool:
        return self.kind == "constant" and self.param == 0.0

    def density(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "constant":
            v = np.full_like(t, self.param)
        elif self.kind == "flett_log":
            with np.errstate(divide="ignore", invalid="ignore"):
                v = np.log(t) ** (self.param - 1) / (t * special.gamma(self.param))
        elif self.kind == "exp_decay":
            v = np.exp(-self.param * t)
        else:
            v = t ** (-self.param)
        return np.where((t > self.a) & (t < self.b), v, 0.0)

    def log_u_density(self, u):
        """log of rho(e**u) * e**u, the density of the pushforward to u = log t."""
        u = np.asarray(u, dtype=float)
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            if self.kind == "constant":
                return math.log(self.param) + u
            if self.kind == "flett_log":
                return (self.param - 1) * np.log(u) - special.gammaln(self.param)
            if self.kind == "exp_decay":
                return u - self.param * np.exp(u)
            return (1.0 - self.param) * u

    def power_integral(self, e: float, lo: float = 0.0, hi: float = INF) -> float:
        """Closed form of int t**(-e) rho(t) dt over (lo, hi) intersected with (a, b)."""
        lo, hi = max(lo, self.a), min(hi, self.b)
        if lo >= hi or self.is_null:
            return 0.0
        if self.kind == "constant":
            return self.param * _power_integral(e, lo, hi)
        if self.kind == "power_law":
            return _power_integral(e + self.param, lo, hi)
        if self.kind == "exp_decay":
            return _exp_decay_integral(e, self.param, lo, hi)
        return _flett_integral(e, self.param, lo, hi)

    def to_json(self) -> dict:
        return {"kind": self.kind, KINDS[self.kind]: self.param,
                "a": self.a, "b": format_float(self.b) if self.b == INF else self.b}

    @classmethod
    def from_json(cls, d: dict) -> DensityPiece:
        if not isinstance(d, dict) or "kind" not in d:
            raise ValidationError(f"density entry must be an object with 'kind': {d!r}")
        kind = d["kind"]
        if kind not in KINDS:
            raise ValidationError(f"unknown density kind {kind!r}")
        pname = KINDS[kind]
        if pname not in d:
            raise ValidationError(f"density {kind!r} needs parameter {pname!r}")
        a = parse_exponent(d.get("a", 1.0))
        b = parse_exponent(d.get("b", "inf"))
        return cls(kind, float(d[pname]), a, b)


def _exp_decay_integral(e: float, rate: float, lo: float, hi: float) -> float:
    if e == 0:
        return (math.exp(-rate * lo) - (0.0 if hi == INF else math.exp(-rate * hi))) / rate
    if e != int(e) or e < 0:
        raise ValidationError("exp_decay closed form needs a nonnegative integer exponent")
    if lo == 0.0:
        return INF
    m = int(e)

    # int_x^inf t**(-m) exp(-rate t) dt = x**(1-m) E_m(rate x)
    def tail(x):
        if x == INF:
            return 0.0
        return x ** (1 - m) * float(special.expn(m, rate * x))

    return tail(lo) - tail(hi)


def _flett_integral(e: float, gamma: float, lo: float, hi: float) -> float:
    # substitute u = log t: int u**(gamma-1) exp(-e u) du / Gamma(gamma)
    ulo, uhi = math.log(lo), (INF if hi == INF else math.log(hi))
    if e > 0:
        if ulo == 0.0 and uhi == INF:
            return e ** (-gamma)
        q_hi = 0.0 if uhi == INF else float(special.gammaincc(gamma, e * uhi))
        return e ** (-gamma) * (float(special.gammaincc(gamma, e * ulo)) - q_hi)
    if uhi == INF:
        return INF
    if e == 0:
        return (uhi ** gamma - ulo ** gamma) / special.gamma(gamma + 1)
    return INF


@dataclass(frozen=True)
class MeasureSpec:
    atoms: tuple[Atom, ...] = ()
    densities: tuple[DensityPiece, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        object.__setattr__(self, "densities", tuple(self.densities))
        pieces = sorted(self.densities, key=lambda p: p.a)
        for left, right in zip(pieces, pieces[1:]):
            if right.a < left.b:
                raise ValidationError(
                    f"density pieces overlap: ({left.a}, {left.b}) and ({right.a}, {right.b})")

    @property
    def is_empty(self) -> bool:
        return not self.atoms and not self.densities

    def to_json(self) -> dict:
        return {"atoms": [{"t": a.t, "w": a.w} for a in self.atoms],
                "densities": [p.to_json() for p in self.densities]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, d: dict) -> MeasureSpec:
        if not isinstance(d, dict):
            raise ValidationError("measure spec must be a JSON object")
        unknown = set(d) - {"atoms", "densities"}
        if unknown:
            raise ValidationError(f"unknown measure fields: {sorted(unknown)}")
        try:
            atoms = tuple(Atom(float(a["t"]), float(a.get("w", 1.0))) for a in d.get("atoms", []))
        except (KeyError, TypeError, AttributeError) as exc:
            raise ValidationError(f"malformed atom list: {exc}") from exc
        dens = tuple(DensityPiece.from_json(p) for p in d.get("densities", []))
        return cls(atoms, dens)


def delta(t: float, w: float = 1.0) -> MeasureSpec:
    return MeasureSpec((Atom(t, w),))


def flett(gamma: float) -> MeasureSpec:
    """The measure whose Hausdorff operator is the fractional integral of order gamma."""
    return MeasureSpec((), (DensityPiece("flett_log", gamma),))


def hardy() -> MeasureSpec:
    return flett(1.0)


def constant_density(c: float, a: float, b: float) -> DensityPiece:
    return DensityPiece("constant", c, a, b)


# -- quadrature route --------------------------------------------------------

def _grade_levels(piece: DensityPiece) -> int:
    if piece.kind == "flett_log" and piece.param != int(piece.param):
        return min(2000, math.ceil(60.0 / min(piece.param, 1.0)))
    return 0


def piece_quad(piece: DensityPiece, decay: float, h_u=None, cfg: QuadConfig = DEFAULT,
               lo: float | None = None, hi: float | None = None):
    """Quadrature of int t**(-decay) h(t) rho(t) dt over the piece, in u = log t.

    ``h_u`` receives u and returns h(e**u) (``None`` means h = 1); the power
    factor is folded into the log-density so large u cannot overflow into
    ``0 * inf``. Semi-infinite pieces are marched in
    segments of doubling width until a segment contributes below 1e-16 of the
    running sum; an integrand that never decays is reported as divergent
    (``inf``). A piece touching t = 0 is reported as divergent as well.
    """
    a = piece.a if lo is None else max(lo, piece.a)
    b = piece.b if hi is None else min(hi, piece.b)
    if a >= b or piece.is_null:
        return 0.0
    if a == 0.0:
        return INF
    ulo = math.log(a)
    levels = _grade_levels(piece)

    def g(u):
        w = np.exp(piece.log_u_density(u) - decay * u)
        return w if h_u is None else h_u(u) * w

    n, tol, mp = cfg.gl_nodes, cfg.tol, cfg.max_panels
    if b != INF:
        edges = _quad.graded_edges(ulo, math.log(b), levels, cfg.init_panels)
        return _quad.integrate(g, edges, n, tol, mp)[0]

    total = 0.0
    start, width = ulo, 1.0
    quiet = 0
    while start < ulo + 4096.0:
        end = start + width
        if start == ulo:
            edges = _quad.graded_edges(start, end, levels, cfg.init_panels)
        else:
            edges = np.linspace(start, end, cfg.init_panels + 1)
        seg = _quad.integrate(g, edges, n, tol, mp)[0]
        total += seg
        edge_val = abs(complex(g(np.array([end]))[0])) * width
        if abs(seg) <= 1e-16 * abs(total) and edge_val <= 1e-16 * abs(total):
            return total
        if total == 0 and seg == 0:
            quiet += 1
            if quiet > 3:
                return total
        start, width = end, width * 2.0
    return INF


# -- public operations --------------------------------------------------------

def _atom_moment(atoms, n: int) -> float:
    s = 0.0
    for a in atoms:
        if a.w == 0:
            continue
        with np.errstate(over="ignore"):
            s += a.w * float(np.power(a.t, -(n + 1.0)))
    return s


def moment(m: MeasureSpec, n: int, cfg: QuadConfig = DEFAULT, method: str = "closed") -> float:
    """mu_n = int t**(-(n+1)) dmu(t); ``inf`` when divergent.

    ``method="quadrature"`` evaluates the density part numerically instead of
    through the closed forms.
    """
    if n < 0 or int(n) != n:
        raise ValidationError("moment index must be a nonnegative integer")
    n = int(n)
    total = _atom_moment(m.atoms, n)
    for piece in m.densities:
        if method == "closed":
            v = piece.power_integral(n + 1.0)
        elif method == "quadrature":
            v = float(np.real(piece_quad(piece, n + 1.0, cfg=cfg)))
        else:
            raise ValidationError(f"unknown moment method {method!r}")
        total += v
    return total


def mass(m: MeasureSpec, which: str) -> float:
    """Mass of one of the interval tags in ``MASS_SETS``."""
    try:
        lo, hi, lo_c, hi_c = MASS_SETS[which.replace(" ", "")]
    except KeyError:
        raise ValidationError(f"unknown interval tag {which!r}; use one of {list(MASS_SETS)}")
    total = 0.0
    for a in m.atoms:
        inside = (lo < a.t < hi) or (lo_c and a.t == lo) or (hi_c and a.t == hi)
        if inside:
            total += a.w
    if lo < hi:
        for piece in m.densities:
            total += piece.power_integral(0.0, lo, hi)
    return total


def harmonic_mass(m: MeasureSpec, cfg: QuadConfig = DEFAULT) -> float:
    """int over [1, inf) of dmu(t)/t."""
    total = sum(a.w / a.t for a in m.atoms if a.t >= 1.0)
    for piece in m.densities:
        total += piece.power_integral(1.0, 1.0, INF)
    return total


@dataclass(frozen=True)
class MomentTable:
    values: np.ndarray
    exact: np.ndarray = field(repr=False)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, n):
        return self.values[n]

    def roots(self) -> np.ndarray:
        """n-th roots mu_n**(1/n) for n >= 1 (index 0 is nan)."""
        n = np.arange(len(self.values), dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(n > 0, self.values ** (1.0 / np.where(n > 0, n, 1.0)), np.nan)
        return out


def moment_table(m: MeasureSpec, N: int, cfg: QuadConfig = DEFAULT) -> MomentTable:
    if N < 0:
        raise ValidationError("N must be nonnegative")
    vals = np.array([moment(m, n, cfg) for n in range(N + 1)], dtype=float)
    # all catalog kinds have closed forms; the flag marks entries that did not
    # need quadrature
    exact = np.ones(N + 1, dtype=bool)
    vals.setflags(write=False)
    exact.setflags(write=False)
    return MomentTable(vals, exact)
