"""Truncated entire functions sum_{n<=N} a_n z**n and their circle means.

Circle means are computed in log form internally: monomials of degree a few
hundred at radius ~15 overflow a double long before their Fock norms do.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT, INF, QuadConfig
from .errors import DomainError, ValidationError

__all__ = ["TaylorPoly", "CircleMean", "evaluate", "dilate", "circle_mean", "log_circle_means"]


class TaylorPoly:
    """Immutable coefficient vector a_0..a_N (complex128).

    Trailing zeros are allowed: ``N`` is the representation length, not the
    exact degree (see ``degree``).
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=np.complex128).ravel()
        if c.size == 0:
            c = np.zeros(1, dtype=np.complex128)
        if not np.all(np.isfinite(c)):
            raise ValidationError("coefficients must be finite")
        c.setflags(write=False)
        self._c = c

    @classmethod
    def monomial(cls, n: int, coeff: complex = 1.0) -> TaylorPoly:
        c = np.zeros(n + 1, dtype=np.complex128)
        c[n] = coeff
        return cls(c)

    @classmethod
    def zero(cls, N: int = 0) -> TaylorPoly:
        return cls(np.zeros(N + 1))

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def N(self) -> int:
        return self._c.size - 1

    @property
    def degree(self) -> int:
        """Index of the last nonzero coefficient (-1 for the zero polynomial)."""
        nz = np.flatnonzero(self._c)
        return int(nz[-1]) if nz.size else -1

    def is_zero(self) -> bool:
        return not np.any(self._c)

    def __len__(self):
        return self._c.size

    def __call__(self, z):
        return evaluate(self, z)

    def _pad(self, other: TaylorPoly):
        n = max(self._c.size, other._c.size)
        a = np.zeros(n, dtype=np.complex128)
        b = np.zeros(n, dtype=np.complex128)
        a[: self._c.size] = self._c
        b[: other._c.size] = other._c
        return a, b

    def __add__(self, other):
        if not isinstance(other, TaylorPoly):
            return NotImplemented
        a, b = self._pad(other)
        return TaylorPoly(a + b)

    def __sub__(self, other):
        if not isinstance(other, TaylorPoly):
            return NotImplemented
        a, b = self._pad(other)
        return TaylorPoly(a - b)

    def __neg__(self):
        return TaylorPoly(-self._c)

    def __mul__(self, scalar):
        if isinstance(scalar, TaylorPoly):
            return NotImplemented
        return TaylorPoly(self._c * complex(scalar))

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return TaylorPoly(self._c / complex(scalar))

    def __eq__(self, other):
        if not isinstance(other, TaylorPoly):
            return NotImplemented
        a, b = self._pad(other)
        return bool(np.array_equal(a, b))

    def __hash__(self):
        return hash(np.trim_zeros(self._c, "b").tobytes())

    def __repr__(self):
        return f"TaylorPoly({np.array2string(self._c, precision=6, separator=', ')})"

    def multiply_coeffs(self, factors) -> TaylorPoly:
        """Coefficientwise product a_n * factors[n] (a diagonal operator)."""
        f = np.asarray(factors)[: self._c.size]
        if f.size < self._c.size:
            raise ValidationError("multiplier sequence shorter than the polynomial")
        return TaylorPoly(self._c * f)

    def allclose(self, other: TaylorPoly, rtol=1e-12, atol=1e-14) -> bool:
        a, b = self._pad(other)
        return bool(np.allclose(a, b, rtol=rtol, atol=atol))

    def log_bound(self, r):
        """log of sum |a_n| r**n, the crude majorant of every circle mean."""
        r = np.atleast_1d(np.asarray(r, dtype=float))
        absc = np.abs(self._c)
        nz = np.flatnonzero(absc)
        if nz.size == 0:
            return np.full(r.shape, -np.inf)
        with np.errstate(divide="ignore"):
            logr = np.log(r)
            terms = np.log(absc[nz])[None, :] + nz[None, :] * logr[:, None]
        terms = np.where(np.isnan(terms), -np.inf, terms)
        # r = 0 leaves only the constant term
        if nz[0] == 0:
            terms[r == 0, 0] = math.log(absc[0])
        return _logsumexp_rows(terms)

    def to_json(self) -> dict:
        return {"coeffs": [[float(c.real), float(c.imag)] for c in self._c]}

    @classmethod
    def from_json(cls, d) -> TaylorPoly:
        raw = d.get("coeffs") if isinstance(d, dict) else d
        if not isinstance(raw, list):
            raise ValidationError("TaylorPoly JSON needs a 'coeffs' list")
        out = []
        for c in raw:
            if isinstance(c, (list, tuple)) and len(c) == 2:
                out.append(complex(float(c[0]), float(c[1])))
            elif isinstance(c, (int, float)):
                out.append(complex(c))
            else:
                raise ValidationError(f"bad coefficient entry {c!r}")
        return cls(out)


def _logsumexp_rows(terms: np.ndarray) -> np.ndarray:
    m = np.max(terms, axis=1)
    safe = np.where(np.isfinite(m), m, 0.0)
    with np.errstate(divide="ignore"):
        s = np.log(np.sum(np.exp(terms - safe[:, None]), axis=1)) + safe
    return np.where(np.isfinite(m), s, m)


def evaluate(f: TaylorPoly, z):
    """Horner evaluation."""
    return np.polyval(f.coeffs[::-1], z)


def dilate(f: TaylorPoly, t: float) -> TaylorPoly:
    """D_t f(z) = f(z / t): a_n -> a_n t**(-n)."""
    if not t > 0:
        raise DomainError("dilation parameter must be positive")
    n = np.arange(f.coeffs.size)
    with np.errstate(under="ignore"):
        return TaylorPoly(f.coeffs * np.exp(-n * math.log(t)))


@dataclass(frozen=True)
class CircleMean:
    p: float
    r: float
    value: float
    method: str


def _scaled(coeffs: np.ndarray, r: np.ndarray):
    """Rows a_n r**n / max_n |a_n r**n| and the log of the max, per radius."""
    absc = np.abs(coeffs)
    n = np.arange(coeffs.size)
    with np.errstate(divide="ignore", invalid="ignore"):
        logabs = np.log(absc)[None, :] + n[None, :] * np.log(r)[:, None]
    logabs = np.where(np.isnan(logabs), -np.inf, logabs)
    logabs[r == 0, 0] = math.log(absc[0]) if absc[0] > 0 else -np.inf
    m = np.max(logabs, axis=1)
    safe = np.where(np.isfinite(m), m, 0.0)
    with np.errstate(divide="ignore"):
        phase = np.where(absc > 0, coeffs / np.where(absc > 0, absc, 1.0), 0.0)
    rows = phase[None, :] * np.exp(logabs - safe[:, None])
    return rows, m


def _max_modulus(rows: np.ndarray, samples: np.ndarray, M: int) -> np.ndarray:
    """Sampled maximum of |P(theta)| = |sum rows_n e^{in theta}|, refined by Newton on |P|^2.

    Steps are clipped to one sample spacing and every iterate is a true value
    of |P|, so the result never drops below the best sample.
    """
    K, L = rows.shape
    absval = np.abs(samples)
    best = absval.max(axis=1)
    if L == 1:
        return best
    n = np.arange(L)
    h = 2 * np.pi / M
    order = np.argsort(-absval, axis=1)[:, :3]
    for j in range(order.shape[1]):
        theta = order[:, j] * h
        for _ in range(12):
            e = rows * np.exp(1j * n[None, :] * theta[:, None])
            P = e.sum(axis=1)
            P1 = (1j * n * e).sum(axis=1)
            P2 = (-(n * n) * e).sum(axis=1)
            best = np.maximum(best, np.abs(P))
            g1 = 2 * np.real(np.conj(P) * P1)
            g2 = 2 * (np.abs(P1) ** 2 + np.real(np.conj(P) * P2))
            with np.errstate(divide="ignore", invalid="ignore"):
                step = np.where(g2 < 0, -g1 / g2, np.sign(g1) * h)
            step = np.clip(np.nan_to_num(step), -h, h)
            if np.all(np.abs(step) < 1e-15):
                break
            theta = theta + step
        e = rows * np.exp(1j * n[None, :] * theta[:, None])
        best = np.maximum(best, np.abs(e.sum(axis=1)))
    return best


def log_circle_means(f: TaylorPoly, p: float, r, cfg: QuadConfig = DEFAULT):
    """log M_p(f, r) for an array of radii; ``-inf`` where the mean vanishes."""
    r = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(r < 0):
        raise DomainError("radius must be nonnegative")
    c = f.coeffs
    nz = np.flatnonzero(c)
    if nz.size == 0:
        return np.full(r.shape, -np.inf), "zero"
    if nz.size == 1:
        k = int(nz[0])
        with np.errstate(divide="ignore"):
            lr = np.log(r) if k else np.zeros_like(r)
        return math.log(abs(c[k])) + k * lr, "monomial"
    c = c[: nz[-1] + 1]
    rows, m = _scaled(c, r)
    if p == 2:
        with np.errstate(divide="ignore"):
            return m + 0.5 * np.log(np.sum(np.abs(rows) ** 2, axis=1)), "parseval"
    M = cfg.theta_count(c.size - 1)
    padded = np.zeros((r.size, M), dtype=np.complex128)
    padded[:, : c.size] = rows
    samples = np.fft.ifft(padded, axis=1) * M
    with np.errstate(divide="ignore"):
        if p == INF:
            return m + np.log(_max_modulus(rows, samples, M)), "max-sample"
        mean = np.mean(np.abs(samples) ** p, axis=1)
        return m + np.log(mean) / p, "quadrature"


def circle_mean(f: TaylorPoly, p: float, r: float, cfg: QuadConfig = DEFAULT,
                method: str | None = None) -> CircleMean:
    """M_p(f, r) = ((1/2pi) int |f(r e^{i theta})|**p d theta)**(1/p); M_inf is the max modulus.

    p = 2 goes through Parseval unless ``method="quadrature"`` forces the
    trapezoid rule (used to cross-check the two).
    """
    if not (p >= 1):
        raise ValidationError("circle means need p >= 1")
    if r < 0:
        raise DomainError("radius must be nonnegative")
    if method == "quadrature" and p == 2 and not f.is_zero():
        c = f.coeffs
        M = cfg.theta_count(c.size - 1)
        theta = 2 * np.pi * np.arange(M) / M
        vals = np.abs(evaluate(f, r * np.exp(1j * theta)))
        return CircleMean(p, r, float(np.sqrt(np.mean(vals ** 2))), "quadrature")
    logv, how = log_circle_means(f, p, [r], cfg)
    with np.errstate(over="ignore"):
        return CircleMean(p, r, float(np.exp(logv[0])), how)
