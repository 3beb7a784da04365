from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields, replace

from .errors import ValidationError

INF = math.inf


@dataclass(frozen=True)
class QuadConfig:
    """Knobs shared by every numerical integral in the package.

    ``theta_nodes`` of ``None`` means ``max(256, 4 * (degree + 1))``.
    ``tail_tol`` is relative to the integral being truncated.
    ``unit_tol`` decides when a harmonic mass counts as exactly 1.
    """

    gl_nodes: int = 32
    init_panels: int = 8
    max_panels: int = 4096
    tol: float = 1e-10
    tail_tol: float = 1e-12
    theta_nodes: int | None = None
    sup_grid: int = 512
    sup_rmin: float = 1e-3
    unit_tol: float = 1e-12

    def __post_init__(self):
        if self.gl_nodes < 2 or self.init_panels < 1 or self.max_panels < self.init_panels:
            raise ValidationError("invalid panel/node counts in QuadConfig")
        if not (0 < self.tol < 1) or not (0 < self.tail_tol < 1):
            raise ValidationError("tolerances must lie in (0, 1)")
        if self.theta_nodes is not None and self.theta_nodes < 8:
            raise ValidationError("theta_nodes must be at least 8")

    def theta_count(self, degree: int) -> int:
        if self.theta_nodes is not None:
            return max(self.theta_nodes, 2 * degree + 2)
        return max(256, 4 * (degree + 1))

    def with_overrides(self, **kw) -> QuadConfig:
        known = {f.name for f in fields(self)}
        bad = set(kw) - known
        if bad:
            raise ValidationError(f"unknown QuadConfig fields: {sorted(bad)}")
        return replace(self, **{k: v for k, v in kw.items() if v is not None})

    def to_dict(self) -> dict:
        return asdict(self)


DEFAULT = QuadConfig()


def parse_exponent(value) -> float:
    """Accept a number or the token ``"inf"`` and return a float."""
    if isinstance(value, str):
        token = value.strip().lower()
        if token in ("inf", "infinity", "+inf"):
            return INF
        try:
            value = float(token)
        except ValueError as exc:
            raise ValidationError(f"not a number: {value!r}") from exc
    if value is None:
        return INF
    x = float(value)
    if math.isnan(x):
        raise ValidationError("NaN is not a valid value")
    return x


def format_float(x: float) -> str:
    """Locale-independent rendering; infinities become ``inf``."""
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(float(x))
